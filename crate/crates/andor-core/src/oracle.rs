//! True proof and disproof numbers by exhaustive minimal-assumption search.
//!
//! The exact proof number of a node is the least number of open leaves
//! below it that, assumed solvable, force it true; the exact disproof
//! number is the least number assumed unsolvable that force it false while
//! every other open leaf is treated optimistically. Subsets of candidate
//! leaves are enumerated in increasing cardinality (lexicographic within a
//! cardinality), so the first success is minimal by construction and the
//! returned witness is deterministic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{topo_order_indices, AndOrDag, NodeId, NodeKind, NodeStatus};
use crate::pn::PnValue;

/// Subset-enumeration ceiling: candidate sets larger than this are refused
/// rather than searched forever.
pub const DEFAULT_LEAF_BUDGET: usize = 22;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Proof,
    Disproof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    NotPure,
    AssumedNotLeaf { id: NodeId },
    UnknownTarget { id: NodeId },
    BudgetExceeded { leaves: usize, budget: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::NotPure => write!(f, "graph contains MIX nodes"),
            OracleError::AssumedNotLeaf { id } => {
                write!(f, "assumed node {id} is not an open leaf of the graph")
            }
            OracleError::UnknownTarget { id } => write!(f, "target node {id} not in graph"),
            OracleError::BudgetExceeded { leaves, budget } => write!(
                f,
                "{leaves} candidate leaves exceed the enumeration budget of {budget}"
            ),
        }
    }
}

impl core::error::Error for OracleError {}

/// A minimal set of open leaves certifying an exact proof or disproof
/// number: assuming its members (solvable in proof mode, unsolvable in
/// disproof mode) forces the target, and no proper subset does.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessSet {
    pub leaves: BTreeSet<NodeId>,
    pub mode: Mode,
}

impl WitnessSet {
    /// Re-runs [`assume_eval`] under this witness and reports whether the
    /// claimed outcome holds at `target`.
    pub fn certifies(&self, g: &AndOrDag, target: &NodeId) -> Result<bool, OracleError> {
        let values = assume_eval(g, &self.leaves, self.mode)?;
        let v = *values.get(target).ok_or_else(|| OracleError::UnknownTarget {
            id: target.clone(),
        })?;
        Ok(match self.mode {
            Mode::Proof => v,
            Mode::Disproof => !v,
        })
    }
}

/// Boolean solvability per node under an assumption set.
///
/// Proof mode: an open leaf is solvable iff assumed; disproof mode: iff
/// not assumed (everything unassumed is optimistically solvable). Proven
/// terminals are solvable, disproven ones are not; OR nodes need one
/// solvable child, AND nodes need all.
pub fn assume_eval(
    g: &AndOrDag,
    assumed: &BTreeSet<NodeId>,
    mode: Mode,
) -> Result<BTreeMap<NodeId, bool>, OracleError> {
    if !g.is_pure() {
        return Err(OracleError::NotPure);
    }
    let mut assumed_ix = alloc::vec![false; g.len()];
    for id in assumed {
        match g.index_of(id) {
            Some(ix) if g.status_at(ix) == NodeStatus::OpenLeaf => {
                assumed_ix[ix as usize] = true;
            }
            _ => return Err(OracleError::AssumedNotLeaf { id: id.clone() }),
        }
    }
    let mut value = alloc::vec![false; g.len()];
    for ix in topo_order_indices(g) {
        let v = solvable_at(g, ix, &value, |leaf| match mode {
            Mode::Proof => assumed_ix[leaf as usize],
            Mode::Disproof => !assumed_ix[leaf as usize],
        });
        value[ix as usize] = v;
    }
    Ok(value
        .into_iter()
        .enumerate()
        .map(|(ix, v)| (g.id_at(ix as u32).clone(), v))
        .collect())
}

fn solvable_at(
    g: &AndOrDag,
    ix: u32,
    value: &[bool],
    leaf_value: impl Fn(u32) -> bool,
) -> bool {
    match g.status_at(ix) {
        NodeStatus::OpenLeaf => leaf_value(ix),
        NodeStatus::ProvenTerminal => true,
        NodeStatus::DisprovenTerminal => false,
        NodeStatus::Internal => {
            let kids = g.children_at(ix);
            match g.kind_at(ix) {
                NodeKind::Or => kids.iter().any(|&c| value[c as usize]),
                NodeKind::And => kids.iter().all(|&c| value[c as usize]),
                NodeKind::Mix => unreachable!("purity checked by caller"),
            }
        }
    }
}

/// Smallest set of open-leaf descendants of `target` that, assumed
/// solvable, makes `target` true. Returns the size and the first witness
/// in enumeration order, `(0, empty)` when `target` is already true, or
/// `(inf, None)` when no subset works.
pub fn exact_proof_number(
    g: &AndOrDag,
    target: &NodeId,
    leaf_budget: usize,
) -> Result<(PnValue, Option<WitnessSet>), OracleError> {
    exact_number(g, target, Mode::Proof, leaf_budget)
}

/// Disproof-side twin of [`exact_proof_number`]: smallest set assumed
/// unsolvable that makes `target` false while all other open leaves stay
/// optimistically solvable.
pub fn exact_disproof_number(
    g: &AndOrDag,
    target: &NodeId,
    leaf_budget: usize,
) -> Result<(PnValue, Option<WitnessSet>), OracleError> {
    exact_number(g, target, Mode::Disproof, leaf_budget)
}

pub fn exact_number(
    g: &AndOrDag,
    target: &NodeId,
    mode: Mode,
    leaf_budget: usize,
) -> Result<(PnValue, Option<WitnessSet>), OracleError> {
    if !g.is_pure() {
        return Err(OracleError::NotPure);
    }
    let target_ix = g
        .index_of(target)
        .ok_or_else(|| OracleError::UnknownTarget { id: target.clone() })?;

    let below = g.descendants(target_ix);
    let mut in_scope = alloc::vec![false; g.len()];
    for &ix in &below {
        in_scope[ix as usize] = true;
    }
    // Candidates sorted by id; combinations are enumerated lexicographically
    // over this order.
    let mut candidates: Vec<u32> = below
        .iter()
        .copied()
        .filter(|&ix| g.status_at(ix) == NodeStatus::OpenLeaf)
        .collect();
    candidates.sort_by(|&a, &b| g.id_at(a).cmp(g.id_at(b)));
    if candidates.len() > leaf_budget {
        return Err(OracleError::BudgetExceeded {
            leaves: candidates.len(),
            budget: leaf_budget,
        });
    }

    let sub_topo: Vec<u32> = topo_order_indices(g)
        .into_iter()
        .filter(|&ix| in_scope[ix as usize])
        .collect();

    let mut engine = SubsetEval {
        g,
        target_ix,
        mode,
        sub_topo,
        candidates,
        stamp: alloc::vec![0; g.len()],
        generation: 0,
        value: alloc::vec![false; g.len()],
    };

    let n = engine.candidates.len();
    let mut combo: Vec<usize> = Vec::with_capacity(n);
    for size in 0..=n {
        combo.clear();
        combo.extend(0..size);
        loop {
            if engine.forced(&combo) {
                let leaves = combo
                    .iter()
                    .map(|&i| g.id_at(engine.candidates[i]).clone())
                    .collect();
                return Ok((
                    PnValue::finite(size as u64).expect("budget below finite range"),
                    Some(WitnessSet { leaves, mode }),
                ));
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Ok((PnValue::INFINITY, None))
}

struct SubsetEval<'g> {
    g: &'g AndOrDag,
    target_ix: u32,
    mode: Mode,
    sub_topo: Vec<u32>,
    candidates: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    value: Vec<bool>,
}

impl SubsetEval<'_> {
    /// True when assuming exactly `combo` forces the target outcome.
    fn forced(&mut self, combo: &[usize]) -> bool {
        self.generation += 1;
        let generation = self.generation;
        for &i in combo {
            self.stamp[self.candidates[i] as usize] = generation;
        }
        let (g, mode, stamp) = (self.g, self.mode, &self.stamp);
        for &ix in &self.sub_topo {
            let v = solvable_at(g, ix, &self.value, |leaf| {
                let assumed = stamp[leaf as usize] == generation;
                match mode {
                    Mode::Proof => assumed,
                    Mode::Disproof => !assumed,
                }
            });
            self.value[ix as usize] = v;
        }
        let target_true = self.value[self.target_ix as usize];
        match self.mode {
            Mode::Proof => target_true,
            Mode::Disproof => !target_true,
        }
    }
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, lattice, Fixture};
    use crate::graph::{GraphBuilder, NodeKind};

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn ids(names: &[&str]) -> BTreeSet<NodeId> {
        names.iter().map(|s| id(s)).collect()
    }

    #[test]
    fn fig3_loses_when_e_is_lost() {
        let g = fixture(Fixture::Fig3);
        let values = assume_eval(&g, &ids(&["E"]), Mode::Disproof).unwrap();
        assert!(!values[&id("A")]);
    }

    #[test]
    fn fig2_all_leaves_assumed_prove_a() {
        let g = fixture(Fixture::Fig2);
        let values = assume_eval(&g, &ids(&["D", "E", "F"]), Mode::Proof).unwrap();
        assert!(values[&id("A")]);
    }

    #[test]
    fn fig2_nothing_assumed_proves_nothing() {
        let g = fixture(Fixture::Fig2);
        let values = assume_eval(&g, &BTreeSet::new(), Mode::Proof).unwrap();
        assert!(!values[&id("A")]);
    }

    #[test]
    fn assumed_must_be_open_leaf() {
        let g = fixture(Fixture::Fig2);
        let err = assume_eval(&g, &ids(&["B"]), Mode::Proof).unwrap_err();
        assert_eq!(err, OracleError::AssumedNotLeaf { id: id("B") });
        let err = assume_eval(&g, &ids(&["Z"]), Mode::Proof).unwrap_err();
        assert_eq!(err, OracleError::AssumedNotLeaf { id: id("Z") });
    }

    #[test]
    fn fig2_exact_proof_is_one_via_e() {
        let g = fixture(Fixture::Fig2);
        let (v, w) = exact_proof_number(&g, &id("A"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::ONE);
        assert_eq!(w.unwrap().leaves, ids(&["E"]));
    }

    #[test]
    fn fig2_exact_disproof_is_two_via_e_and_f() {
        let g = fixture(Fixture::Fig2);
        let (v, w) = exact_disproof_number(&g, &id("A"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::finite(2).unwrap());
        assert_eq!(w.unwrap().leaves, ids(&["E", "F"]));
    }

    #[test]
    fn fig3_exact_disproof_is_one_despite_recursive_two() {
        let g = fixture(Fixture::Fig3);
        let (v, w) = exact_disproof_number(&g, &id("A"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::ONE);
        assert_eq!(w.unwrap().leaves, ids(&["E"]));
    }

    #[test]
    fn lattice_exact_proof_is_one() {
        let g = lattice(7).unwrap();
        let (v, _) = exact_proof_number(&g, g.root(), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::ONE);
    }

    #[test]
    fn disproof_of_proven_terminal_child_is_impossible() {
        let mut b = GraphBuilder::new();
        b.node(id("A"), NodeKind::Or, NodeStatus::Internal);
        b.node(id("B"), NodeKind::Or, NodeStatus::ProvenTerminal);
        b.edge(id("A"), id("B"));
        b.root(id("A"));
        let g = b.build().unwrap();
        let (v, w) = exact_disproof_number(&g, &id("A"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::INFINITY);
        assert!(w.is_none());
    }

    #[test]
    fn zero_when_target_already_true() {
        let mut b = GraphBuilder::new();
        b.node(id("A"), NodeKind::Or, NodeStatus::Internal);
        b.node(id("B"), NodeKind::Or, NodeStatus::ProvenTerminal);
        b.node(id("C"), NodeKind::Or, NodeStatus::OpenLeaf);
        b.edge(id("A"), id("B"));
        b.edge(id("A"), id("C"));
        b.root(id("A"));
        let g = b.build().unwrap();
        let (v, w) = exact_proof_number(&g, &id("A"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::ZERO);
        assert!(w.unwrap().leaves.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let mut b = GraphBuilder::new();
        b.node(id("R"), NodeKind::And, NodeStatus::Internal);
        for i in 0..23 {
            let leaf = id(&alloc::format!("n{i}"));
            b.node(leaf.clone(), NodeKind::Or, NodeStatus::OpenLeaf);
            b.edge(id("R"), leaf);
        }
        b.root(id("R"));
        let g = b.build().unwrap();
        assert_eq!(
            exact_proof_number(&g, &id("R"), DEFAULT_LEAF_BUDGET).unwrap_err(),
            OracleError::BudgetExceeded { leaves: 23, budget: 22 }
        );
        // A raised budget succeeds and needs every leaf.
        let (v, _) = exact_proof_number(&g, &id("R"), 23).unwrap();
        assert_eq!(v, PnValue::finite(23).unwrap());
    }

    #[test]
    fn candidates_are_limited_to_descendants() {
        // C's exact number must ignore D (a leaf under B only).
        let g = fixture(Fixture::Fig2);
        let (v, w) = exact_proof_number(&g, &id("B"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::finite(2).unwrap());
        assert_eq!(w.unwrap().leaves, ids(&["D", "E"]));
    }

    #[test]
    fn witnesses_certify_and_are_minimal() {
        let g = fixture(Fixture::Fig2);
        let (_, w) = exact_disproof_number(&g, &id("A"), DEFAULT_LEAF_BUDGET).unwrap();
        let w = w.unwrap();
        assert!(w.certifies(&g, &id("A")).unwrap());
        for drop in &w.leaves {
            let mut smaller = w.clone();
            smaller.leaves.remove(drop);
            assert!(!smaller.certifies(&g, &id("A")).unwrap());
        }
    }

    #[test]
    fn next_combination_walks_lexicographically() {
        let mut c = alloc::vec![0, 1];
        let mut seen = alloc::vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            alloc::vec![
                alloc::vec![0, 1],
                alloc::vec![0, 2],
                alloc::vec![0, 3],
                alloc::vec![1, 2],
                alloc::vec![1, 3],
                alloc::vec![2, 3]
            ]
        );
    }
}
