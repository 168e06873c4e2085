//! Immutable AND/OR DAGs: construction, validation, mixed-node
//! normalization, AND/OR reversion, and topological ordering.
//!
//! A graph is built through [`GraphBuilder`] and validated once; after
//! `build()` it never changes, so it can be shared read-only across
//! concurrent evaluators. Node and edge declaration order is preserved
//! and used everywhere a deterministic tie-break is needed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Reserved marker for machine-generated node ids (see [`normalize_mixed`]).
/// Text-format parsers reject user ids containing it.
pub const RESERVED_ID_MARKER: &str = "__";

const FRESH_AND_SUFFIX: &str = "__and";

/// An ASCII node identifier: nonempty, charset `[A-Za-z0-9_]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    /// Validates charset and non-emptiness. Ids containing the reserved
    /// `__` marker are accepted here (normalization generates them); text
    /// parsers apply the stricter user-facing rule.
    pub fn new(s: impl Into<String>) -> Result<NodeId, GraphError> {
        let s = s.into();
        let ok = !s.is_empty()
            && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
        if ok {
            Ok(NodeId(s))
        } else {
            Err(GraphError::InvalidId { id: s })
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::str::FromStr for NodeId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeId::new(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum NodeKind {
    And,
    Or,
    /// A node with both AND- and OR-labeled outgoing edges. Only legal in
    /// pre-normalization input; validated pure graphs contain none.
    Mix,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeStatus {
    /// Has at least one outgoing edge.
    Internal,
    /// Unexpanded frontier leaf: counts toward proof and disproof numbers.
    OpenLeaf,
    /// Terminal known solvable.
    ProvenTerminal,
    /// Terminal known unsolvable.
    DisprovenTerminal,
}

impl NodeStatus {
    pub fn is_leaf(self) -> bool {
        !matches!(self, NodeStatus::Internal)
    }
}

/// Per-edge label carried by edges leaving a MIX node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeLabel {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    InvalidId { id: String },
    DuplicateNode { id: NodeId },
    UnknownNode { id: NodeId },
    DuplicateEdge { parent: NodeId, child: NodeId },
    CycleDetected,
    MissingRoot,
    LeafWithChildren { id: NodeId },
    InternalWithoutChildren { id: NodeId },
    MixWithoutEdgeLabels { parent: NodeId, child: NodeId },
    LabelOnPureEdge { parent: NodeId, child: NodeId },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidId { id } => {
                write!(f, "invalid node id {id:?} (nonempty [A-Za-z0-9_] required)")
            }
            GraphError::DuplicateNode { id } => write!(f, "node {id} declared twice"),
            GraphError::UnknownNode { id } => write!(f, "reference to undeclared node {id}"),
            GraphError::DuplicateEdge { parent, child } => {
                write!(f, "duplicate edge {parent} -> {child}")
            }
            GraphError::CycleDetected => write!(f, "graph contains a directed cycle"),
            GraphError::MissingRoot => write!(f, "no root declared"),
            GraphError::LeafWithChildren { id } => {
                write!(f, "leaf node {id} has outgoing edges")
            }
            GraphError::InternalWithoutChildren { id } => {
                write!(f, "internal node {id} has no outgoing edges")
            }
            GraphError::MixWithoutEdgeLabels { parent, child } => {
                write!(f, "edge {parent} -> {child} from MIX node lacks an AND/OR label")
            }
            GraphError::LabelOnPureEdge { parent, child } => {
                write!(f, "edge {parent} -> {child} carries a label but {parent} is not MIX")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// An immutable, validated AND/OR DAG.
///
/// Nodes are stored in declaration order; child lists keep edge
/// declaration order. Structural equality (`==`) compares ids, kinds,
/// statuses, edge lists including order and labels, and the root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AndOrDag {
    ids: Vec<NodeId>,
    kinds: Vec<NodeKind>,
    statuses: Vec<NodeStatus>,
    children: Vec<Vec<u32>>,
    labels: Vec<Vec<Option<EdgeLabel>>>,
    index: BTreeMap<NodeId, u32>,
    root: u32,
}

impl AndOrDag {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn root(&self) -> &NodeId {
        &self.ids[self.root as usize]
    }

    pub fn root_index(&self) -> u32 {
        self.root
    }

    /// Node ids in declaration order.
    pub fn ids(&self) -> impl Iterator<Item = &NodeId> {
        self.ids.iter()
    }

    pub fn index_of(&self, id: &NodeId) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn id_at(&self, ix: u32) -> &NodeId {
        &self.ids[ix as usize]
    }

    pub fn kind_at(&self, ix: u32) -> NodeKind {
        self.kinds[ix as usize]
    }

    pub fn status_at(&self, ix: u32) -> NodeStatus {
        self.statuses[ix as usize]
    }

    pub fn children_at(&self, ix: u32) -> &[u32] {
        &self.children[ix as usize]
    }

    pub fn edge_labels_at(&self, ix: u32) -> &[Option<EdgeLabel>] {
        &self.labels[ix as usize]
    }

    pub fn kind_of(&self, id: &NodeId) -> Option<NodeKind> {
        self.index_of(id).map(|ix| self.kind_at(ix))
    }

    pub fn status_of(&self, id: &NodeId) -> Option<NodeStatus> {
        self.index_of(id).map(|ix| self.status_at(ix))
    }

    /// True when the graph contains no MIX nodes.
    pub fn is_pure(&self) -> bool {
        !self.kinds.contains(&NodeKind::Mix)
    }

    /// All node indices reachable from `start` via child edges, `start`
    /// included. Returned sorted ascending.
    pub fn descendants(&self, start: u32) -> Vec<u32> {
        let mut seen = alloc::vec![false; self.len()];
        let mut stack = alloc::vec![start];
        while let Some(ix) = stack.pop() {
            if core::mem::replace(&mut seen[ix as usize], true) {
                continue;
            }
            stack.extend_from_slice(self.children_at(ix));
        }
        (0..self.len() as u32).filter(|&ix| seen[ix as usize]).collect()
    }
}

/// Incremental construction; all invariants are checked in [`build`].
///
/// [`build`]: GraphBuilder::build
#[derive(Default)]
pub struct GraphBuilder {
    nodes: Vec<(NodeId, NodeKind, NodeStatus)>,
    edges: Vec<(NodeId, NodeId, Option<EdgeLabel>)>,
    root: Option<NodeId>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, id: NodeId, kind: NodeKind, status: NodeStatus) -> &mut Self {
        self.nodes.push((id, kind, status));
        self
    }

    pub fn edge(&mut self, parent: NodeId, child: NodeId) -> &mut Self {
        self.edges.push((parent, child, None));
        self
    }

    pub fn labeled_edge(&mut self, parent: NodeId, child: NodeId, label: EdgeLabel) -> &mut Self {
        self.edges.push((parent, child, Some(label)));
        self
    }

    pub fn root(&mut self, id: NodeId) -> &mut Self {
        self.root = Some(id);
        self
    }

    pub fn build(self) -> Result<AndOrDag, GraphError> {
        let mut index: BTreeMap<NodeId, u32> = BTreeMap::new();
        let mut ids = Vec::with_capacity(self.nodes.len());
        let mut kinds = Vec::with_capacity(self.nodes.len());
        let mut statuses = Vec::with_capacity(self.nodes.len());
        for (id, kind, status) in self.nodes {
            if index.insert(id.clone(), ids.len() as u32).is_some() {
                return Err(GraphError::DuplicateNode { id });
            }
            ids.push(id);
            kinds.push(kind);
            statuses.push(status);
        }

        let root_id = self.root.ok_or(GraphError::MissingRoot)?;
        let root = *index
            .get(&root_id)
            .ok_or(GraphError::UnknownNode { id: root_id })?;

        let mut children: Vec<Vec<u32>> = alloc::vec![Vec::new(); ids.len()];
        let mut labels: Vec<Vec<Option<EdgeLabel>>> = alloc::vec![Vec::new(); ids.len()];
        for (parent, child, label) in self.edges {
            let p = *index
                .get(&parent)
                .ok_or_else(|| GraphError::UnknownNode { id: parent.clone() })?;
            let c = *index
                .get(&child)
                .ok_or_else(|| GraphError::UnknownNode { id: child.clone() })?;
            if children[p as usize].contains(&c) {
                return Err(GraphError::DuplicateEdge { parent, child });
            }
            match (kinds[p as usize], label) {
                (NodeKind::Mix, None) => {
                    return Err(GraphError::MixWithoutEdgeLabels { parent, child })
                }
                (NodeKind::And | NodeKind::Or, Some(_)) => {
                    return Err(GraphError::LabelOnPureEdge { parent, child })
                }
                _ => {}
            }
            children[p as usize].push(c);
            labels[p as usize].push(label);
        }

        for ix in 0..ids.len() {
            let has_children = !children[ix].is_empty();
            match (statuses[ix], has_children) {
                (NodeStatus::Internal, false) => {
                    return Err(GraphError::InternalWithoutChildren { id: ids[ix].clone() })
                }
                (s, true) if s.is_leaf() => {
                    return Err(GraphError::LeafWithChildren { id: ids[ix].clone() })
                }
                _ => {}
            }
        }

        let g = AndOrDag { ids, kinds, statuses, children, labels, index, root };
        if topo_order_indices(&g).len() != g.len() {
            return Err(GraphError::CycleDetected);
        }
        Ok(g)
    }
}

/// Children-first topological order as dense indices; among nodes whose
/// children are all emitted, the smallest declaration index goes first.
pub(crate) fn topo_order_indices(g: &AndOrDag) -> Vec<u32> {
    let n = g.len();
    let mut pending_children: Vec<usize> = (0..n).map(|ix| g.children[ix].len()).collect();
    let mut parents: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    for p in 0..n {
        for &c in &g.children[p] {
            parents[c as usize].push(p as u32);
        }
    }
    // Min-heap on declaration index, emulated with a sorted ready set.
    let mut ready: alloc::collections::BTreeSet<u32> = (0..n as u32)
        .filter(|&ix| pending_children[ix as usize] == 0)
        .collect();
    let mut out = Vec::with_capacity(n);
    while let Some(ix) = ready.pop_first() {
        out.push(ix);
        for &p in &parents[ix as usize] {
            pending_children[p as usize] -= 1;
            if pending_children[p as usize] == 0 {
                ready.insert(p);
            }
        }
    }
    out
}

/// Topological order over node ids: every child precedes its parents.
pub fn topo_order(g: &AndOrDag) -> Vec<NodeId> {
    topo_order_indices(g)
        .into_iter()
        .map(|ix| g.id_at(ix).clone())
        .collect()
}

/// Replaces every MIX node by pure nodes.
///
/// A MIX node keeps its OR-labeled children, becomes an OR node, and gains
/// one fresh AND child (id = original id + `__and`) holding the AND-labeled
/// children. The fresh child takes the edge position of the first
/// AND-labeled edge; fresh nodes are appended after the original nodes in
/// MIX declaration order. Degenerate cases introduce no fresh node: a MIX
/// whose edges are all AND-labeled is relabeled AND, all OR-labeled
/// relabeled OR. Pure input is returned unchanged.
pub fn normalize_mixed(g: &AndOrDag) -> Result<AndOrDag, GraphError> {
    if g.is_pure() {
        return Ok(g.clone());
    }
    let mut b = GraphBuilder::new();
    let mut fresh: Vec<(NodeId, Vec<u32>)> = Vec::new();
    for ix in 0..g.len() as u32 {
        let id = g.id_at(ix).clone();
        if g.kind_at(ix) != NodeKind::Mix {
            b.node(id.clone(), g.kind_at(ix), g.status_at(ix));
            for &c in g.children_at(ix) {
                b.edge(id.clone(), g.id_at(c).clone());
            }
            continue;
        }

        let kids = g.children_at(ix);
        let labs = g.edge_labels_at(ix);
        let and_kids: Vec<u32> = kids
            .iter()
            .zip(labs)
            .filter(|(_, l)| **l == Some(EdgeLabel::And))
            .map(|(&c, _)| c)
            .collect();

        if and_kids.is_empty() || and_kids.len() == kids.len() {
            // Single-polarity MIX: just relabel.
            let kind = if and_kids.is_empty() { NodeKind::Or } else { NodeKind::And };
            b.node(id.clone(), kind, g.status_at(ix));
            for &c in kids {
                b.edge(id.clone(), g.id_at(c).clone());
            }
            continue;
        }

        let fresh_id = NodeId::new(alloc::format!("{id}{FRESH_AND_SUFFIX}"))?;
        b.node(id.clone(), NodeKind::Or, g.status_at(ix));
        let mut fresh_placed = false;
        for (&c, l) in kids.iter().zip(labs) {
            if *l == Some(EdgeLabel::And) {
                if !fresh_placed {
                    b.edge(id.clone(), fresh_id.clone());
                    fresh_placed = true;
                }
            } else {
                b.edge(id.clone(), g.id_at(c).clone());
            }
        }
        fresh.push((fresh_id, and_kids));
    }
    for (fresh_id, and_kids) in fresh {
        b.node(fresh_id.clone(), NodeKind::And, NodeStatus::Internal);
        for c in and_kids {
            b.edge(fresh_id.clone(), g.id_at(c).clone());
        }
    }
    b.root(g.root().clone());
    b.build()
}

/// Swaps AND and OR on every node and exchanges the two terminal statuses,
/// so that disproving the reverted graph corresponds to proving the
/// original. Ids, edges, and the root are unchanged.
pub fn revert(g: &AndOrDag) -> AndOrDag {
    let kinds = g
        .kinds
        .iter()
        .map(|k| match k {
            NodeKind::And => NodeKind::Or,
            NodeKind::Or => NodeKind::And,
            NodeKind::Mix => NodeKind::Mix,
        })
        .collect();
    let statuses = g
        .statuses
        .iter()
        .map(|s| match s {
            NodeStatus::ProvenTerminal => NodeStatus::DisprovenTerminal,
            NodeStatus::DisprovenTerminal => NodeStatus::ProvenTerminal,
            other => *other,
        })
        .collect();
    AndOrDag { kinds, statuses, ..g.clone() }
}
