//! Best-first proof-number search over an implicit problem.
//!
//! The loop is the classic three-step one: descend from the root picking
//! the child with minimum proof number at OR nodes and minimum disproof
//! number at AND nodes, expand the frontier leaf reached (new children
//! start at `(1, 1)`, terminals get `(0, inf)` / `(inf, 0)`), then
//! recompute pairs bottom-up along the selection path.
//!
//! Two modes differ in how repeated states are stored. Tree mode keeps one
//! record per path instance. Dag mode keeps a transposition table mapping
//! state keys to records, so a re-derived child links to the existing
//! record; backup still follows only the current selection path, which can
//! leave other parents stale — their pairs are re-derived when selection
//! next visits them, and verdicts are unaffected.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{AndOrDag, GraphBuilder, GraphError, NodeId, NodeKind, NodeStatus};
use crate::pn::{PnPair, PnValue};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TerminalVerdict {
    NonTerminal,
    ProvenTerminal,
    DisprovenTerminal,
}

/// One state's expansion: its own kind, its terminal verdict, and (for
/// non-terminals) the successor keys with their kinds.
#[derive(Clone, Debug)]
pub struct Expansion<K> {
    pub kind: NodeKind,
    pub verdict: TerminalVerdict,
    pub children: Vec<(K, NodeKind)>,
}

/// A deterministic, finite, acyclic implicit problem. Equal keys must
/// denote the same state, and expanding the same key twice must yield the
/// same result.
pub trait ProblemExpander {
    type State: Clone + Ord + fmt::Debug;

    fn root(&self) -> Self::State;
    fn expand(&self, state: &Self::State) -> Expansion<Self::State>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Tree,
    Dag,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Proven,
    Disproven,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "proven",
            Verdict::Disproven => "disproven",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub expansions: u64,
    pub stored_nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    RootAlreadySolved,
    /// The expander broke its contract: a cycle, a dead end, inconsistent
    /// kinds, or a duplicate successor.
    ExpanderContractViolation(String),
    ArithmeticOverflow,
    /// expand_and_backup was handed a path not ending at a frontier record.
    InvalidPath,
    /// A resolution entry names a node that is not an open leaf.
    InvalidResolution { id: NodeId },
    NotPure,
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::RootAlreadySolved => write!(f, "root is already solved"),
            EngineError::ExpanderContractViolation(why) => {
                write!(f, "expander contract violation: {why}")
            }
            EngineError::ArithmeticOverflow => write!(f, "proof-number sum overflow"),
            EngineError::InvalidPath => {
                write!(f, "selection path does not end at an unexpanded record")
            }
            EngineError::InvalidResolution { id } => {
                write!(f, "resolution entry {id} is not an open leaf of the graph")
            }
            EngineError::NotPure => write!(f, "graph contains MIX nodes"),
        }
    }
}

impl core::error::Error for EngineError {}

enum RecordState {
    Frontier,
    Terminal,
    Expanded { kind: NodeKind, children: Vec<usize> },
}

struct Record<K> {
    key: K,
    pair: PnPair,
    /// Kind announced by the parent's expansion; checked against the
    /// state's own expansion later as a nondeterminism tripwire.
    claimed_kind: Option<NodeKind>,
    state: RecordState,
}

/// Mutable search state: one record per visited state (Dag mode) or per
/// path instance (Tree mode), plus counters.
pub struct SearchTree<K: Clone + Ord + fmt::Debug> {
    mode: SearchMode,
    records: Vec<Record<K>>,
    table: BTreeMap<K, usize>,
    expansions: u64,
}

impl<K: Clone + Ord + fmt::Debug> SearchTree<K> {
    pub fn new(mode: SearchMode, root_key: K) -> Self {
        let mut tree = SearchTree {
            mode,
            records: Vec::new(),
            table: BTreeMap::new(),
            expansions: 0,
        };
        tree.insert_record(root_key, None);
        tree
    }

    fn insert_record(&mut self, key: K, claimed_kind: Option<NodeKind>) -> usize {
        let ix = self.records.len();
        if self.mode == SearchMode::Dag {
            self.table.insert(key.clone(), ix);
        }
        self.records.push(Record {
            key,
            pair: PnPair::OPEN,
            claimed_kind,
            state: RecordState::Frontier,
        });
        ix
    }

    pub fn mode(&self) -> SearchMode {
        self.mode
    }

    pub fn root_pair(&self) -> PnPair {
        self.records[0].pair
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub fn stored_nodes(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn key_at(&self, handle: usize) -> &K {
        &self.records[handle].key
    }

    fn recompute(&self, handle: usize) -> Result<PnPair, EngineError> {
        match &self.records[handle].state {
            RecordState::Frontier | RecordState::Terminal => Ok(self.records[handle].pair),
            RecordState::Expanded { kind, children } => {
                let mut min_p = PnValue::INFINITY;
                let mut min_d = PnValue::INFINITY;
                let mut sum_p = PnValue::ZERO;
                let mut sum_d = PnValue::ZERO;
                for &c in children {
                    let pair = self.records[c].pair;
                    min_p = min_p.min(pair.p);
                    min_d = min_d.min(pair.d);
                    sum_p = sum_p
                        .checked_add(pair.p)
                        .map_err(|_| EngineError::ArithmeticOverflow)?;
                    sum_d = sum_d
                        .checked_add(pair.d)
                        .map_err(|_| EngineError::ArithmeticOverflow)?;
                }
                Ok(match kind {
                    NodeKind::Or => PnPair::new(min_p, sum_d),
                    NodeKind::And => PnPair::new(sum_p, min_d),
                    NodeKind::Mix => unreachable!("expansions carry pure kinds"),
                })
            }
        }
    }

    /// Recomputes stored pairs bottom-up along `path`.
    fn backup(&mut self, path: &[usize]) -> Result<(), EngineError> {
        for &handle in path.iter().rev() {
            let pair = self.recompute(handle)?;
            self.records[handle].pair = pair;
        }
        debug_assert_eq!(self.recompute(0).unwrap(), self.records[0].pair);
        Ok(())
    }

    /// Walks from the root to a frontier record, minimizing p at OR nodes
    /// and d at AND nodes with ties broken by child order. Expanded nodes
    /// are re-derived on visit; if one turns out solved (possible in Dag
    /// mode, where off-path parents go stale) it is backed up and the
    /// descent restarts.
    pub fn select_most_proving(&mut self) -> Result<Vec<usize>, EngineError> {
        if self.root_pair().is_solved() {
            return Err(EngineError::RootAlreadySolved);
        }
        let mut path = alloc::vec![0usize];
        loop {
            if path.len() > self.records.len() {
                return Err(EngineError::ExpanderContractViolation(String::from(
                    "selection path exceeds stored nodes; state graph has a cycle",
                )));
            }
            let cur = *path.last().expect("path is nonempty");
            let refreshed = self.recompute(cur)?;
            self.records[cur].pair = refreshed;
            if refreshed.is_solved() {
                self.backup(&path)?;
                if self.root_pair().is_solved() {
                    return Err(EngineError::RootAlreadySolved);
                }
                path.clear();
                path.push(0);
                continue;
            }
            let (kind, children) = match &self.records[cur].state {
                RecordState::Frontier => return Ok(path),
                RecordState::Terminal => unreachable!("terminal records are solved"),
                RecordState::Expanded { kind, children } => (*kind, children),
            };
            let best = children
                .iter()
                .copied()
                .min_by_key(|&c| match kind {
                    NodeKind::Or => self.records[c].pair.p,
                    NodeKind::And => self.records[c].pair.d,
                    NodeKind::Mix => unreachable!("expansions carry pure kinds"),
                })
                .expect("expanded records have children");
            path.push(best);
        }
    }

    /// Expands the frontier record at the end of `path` and backs the new
    /// numbers up along it.
    pub fn expand_and_backup<P>(&mut self, path: &[usize], problem: &P) -> Result<(), EngineError>
    where
        P: ProblemExpander<State = K>,
    {
        let &leaf = path.last().ok_or(EngineError::InvalidPath)?;
        if !matches!(self.records[leaf].state, RecordState::Frontier) {
            return Err(EngineError::InvalidPath);
        }

        let expansion = problem.expand(&self.records[leaf].key);
        self.expansions += 1;

        if expansion.verdict == TerminalVerdict::NonTerminal {
            if let Some(claimed) = self.records[leaf].claimed_kind {
                if claimed != expansion.kind {
                    return Err(EngineError::ExpanderContractViolation(alloc::format!(
                        "state {:?} expands as {:?} but its parent announced {:?}",
                        self.records[leaf].key,
                        expansion.kind,
                        claimed,
                    )));
                }
            }
        }

        match expansion.verdict {
            TerminalVerdict::ProvenTerminal => {
                self.records[leaf].pair = PnPair::PROVEN;
                self.records[leaf].state = RecordState::Terminal;
            }
            TerminalVerdict::DisprovenTerminal => {
                self.records[leaf].pair = PnPair::DISPROVEN;
                self.records[leaf].state = RecordState::Terminal;
            }
            TerminalVerdict::NonTerminal => {
                if expansion.children.is_empty() {
                    return Err(EngineError::ExpanderContractViolation(alloc::format!(
                        "non-terminal state {:?} has no successors (unresolved leaf?)",
                        self.records[leaf].key,
                    )));
                }
                let mut handles: Vec<usize> = Vec::with_capacity(expansion.children.len());
                for (key, kind) in expansion.children {
                    if path.iter().any(|&h| self.records[h].key == key) {
                        return Err(EngineError::ExpanderContractViolation(alloc::format!(
                            "successor {key:?} repeats an ancestor on the selection path",
                        )));
                    }
                    let existing = self.table.get(&key).copied();
                    let handle = match existing {
                        Some(existing) if self.mode == SearchMode::Dag => {
                            self.check_kind_claim(existing, kind)?;
                            existing
                        }
                        _ => self.insert_record(key, Some(kind)),
                    };
                    if handles.contains(&handle) {
                        return Err(EngineError::ExpanderContractViolation(alloc::format!(
                            "duplicate successor {:?}",
                            self.records[handle].key,
                        )));
                    }
                    handles.push(handle);
                }
                self.records[leaf].state =
                    RecordState::Expanded { kind: expansion.kind, children: handles };
            }
        }
        self.backup(path)
    }

    fn check_kind_claim(&self, handle: usize, claimed: NodeKind) -> Result<(), EngineError> {
        let known = match &self.records[handle].state {
            RecordState::Expanded { kind, .. } => Some(*kind),
            _ => self.records[handle].claimed_kind,
        };
        match known {
            Some(kind) if kind != claimed => {
                Err(EngineError::ExpanderContractViolation(alloc::format!(
                    "state {:?} is known as {kind:?} but a parent announced {claimed:?}",
                    self.records[handle].key,
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Runs the search loop until the root is solved or `max_expansions`
/// expansions have been spent.
pub fn run<P: ProblemExpander>(
    problem: &P,
    mode: SearchMode,
    max_expansions: u64,
) -> Result<SearchOutcome, EngineError> {
    debug_assert!(max_expansions >= 1);
    let mut tree = SearchTree::new(mode, problem.root());
    let verdict = loop {
        let pair = tree.root_pair();
        if pair.is_proven() {
            break Verdict::Proven;
        }
        if pair.is_disproven() {
            break Verdict::Disproven;
        }
        if tree.expansions() >= max_expansions {
            break Verdict::Unknown;
        }
        match tree.select_most_proving() {
            Ok(path) => tree.expand_and_backup(&path, problem)?,
            Err(EngineError::RootAlreadySolved) => continue,
            Err(other) => return Err(other),
        }
    };
    Ok(SearchOutcome {
        verdict,
        expansions: tree.expansions(),
        stored_nodes: tree.stored_nodes(),
    })
}

/// How an open leaf of a stored graph behaves when the search reaches it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeafResolution {
    Proven,
    Disproven,
    /// Leaf stays unexpandable; selecting it is a contract violation.
    NonTerminal,
}

/// Adapts a stored graph into an implicit problem so the search engine can
/// run on fixtures. States are node ids; open leaves report the verdict
/// given by `resolution` (defaulting to [`LeafResolution::NonTerminal`]).
#[derive(Debug)]
pub struct GraphProblem<'g> {
    graph: &'g AndOrDag,
    resolution: BTreeMap<u32, LeafResolution>,
}

impl<'g> GraphProblem<'g> {
    pub fn new(
        graph: &'g AndOrDag,
        resolution: &BTreeMap<NodeId, LeafResolution>,
    ) -> Result<Self, EngineError> {
        if !graph.is_pure() {
            return Err(EngineError::NotPure);
        }
        let mut by_index = BTreeMap::new();
        for (id, &res) in resolution {
            match graph.index_of(id) {
                Some(ix) if graph.status_at(ix) == NodeStatus::OpenLeaf => {
                    by_index.insert(ix, res);
                }
                _ => return Err(EngineError::InvalidResolution { id: id.clone() }),
            }
        }
        Ok(GraphProblem { graph, resolution: by_index })
    }
}

impl ProblemExpander for GraphProblem<'_> {
    type State = NodeId;

    fn root(&self) -> NodeId {
        self.graph.root().clone()
    }

    fn expand(&self, state: &NodeId) -> Expansion<NodeId> {
        let Some(ix) = self.graph.index_of(state) else {
            // Unknown state: surfaces as a dead end, which the engine
            // reports as a contract violation.
            return Expansion {
                kind: NodeKind::Or,
                verdict: TerminalVerdict::NonTerminal,
                children: Vec::new(),
            };
        };
        let kind = self.graph.kind_at(ix);
        let verdict = match self.graph.status_at(ix) {
            NodeStatus::ProvenTerminal => TerminalVerdict::ProvenTerminal,
            NodeStatus::DisprovenTerminal => TerminalVerdict::DisprovenTerminal,
            NodeStatus::OpenLeaf => {
                match self.resolution.get(&ix).copied().unwrap_or(LeafResolution::NonTerminal) {
                    LeafResolution::Proven => TerminalVerdict::ProvenTerminal,
                    LeafResolution::Disproven => TerminalVerdict::DisprovenTerminal,
                    LeafResolution::NonTerminal => TerminalVerdict::NonTerminal,
                }
            }
            NodeStatus::Internal => TerminalVerdict::NonTerminal,
        };
        let children = if verdict == TerminalVerdict::NonTerminal {
            self.graph
                .children_at(ix)
                .iter()
                .map(|&c| (self.graph.id_at(c).clone(), self.graph.kind_at(c)))
                .collect()
        } else {
            Vec::new()
        };
        Expansion { kind, verdict, children }
    }
}

/// Exhaustively expands an implicit problem into a stored graph, naming
/// states with `name`. Dead-end non-terminals become open leaves.
pub fn materialize_problem<P: ProblemExpander>(
    problem: &P,
    name: impl Fn(&P::State) -> NodeId,
) -> Result<AndOrDag, GraphError> {
    let mut b = GraphBuilder::new();
    let root = problem.root();
    let mut queue = alloc::collections::VecDeque::new();
    let mut seen = alloc::collections::BTreeSet::new();
    queue.push_back(root.clone());
    seen.insert(root.clone());
    while let Some(state) = queue.pop_front() {
        let id = name(&state);
        let expansion = problem.expand(&state);
        let status = match expansion.verdict {
            TerminalVerdict::ProvenTerminal => NodeStatus::ProvenTerminal,
            TerminalVerdict::DisprovenTerminal => NodeStatus::DisprovenTerminal,
            TerminalVerdict::NonTerminal if expansion.children.is_empty() => NodeStatus::OpenLeaf,
            TerminalVerdict::NonTerminal => NodeStatus::Internal,
        };
        b.node(id.clone(), expansion.kind, status);
        for (child, _) in expansion.children {
            b.edge(id.clone(), name(&child));
            if seen.insert(child.clone()) {
                queue.push_back(child);
            }
        }
    }
    b.root(name(&root));
    b.build()
}
