//! Bottom-up recursive proof/disproof numbers over a DAG, and the
//! mover-relative phi/delta form for alternating game DAGs.
//!
//! These are the memoized tree-recursion values: each node is computed
//! once in topological order, so a leaf shared by several parents is
//! counted once per parent when sums meet it. The values therefore
//! over-count on DAGs with shared substructure; the exact minimal values
//! live in [`crate::oracle`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{topo_order_indices, AndOrDag, NodeId, NodeKind, NodeStatus};
use crate::pn::{PhiDeltaPair, PnPair, PnValue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// A finite sum left the representable range.
    ArithmeticOverflow,
    /// Graph contains MIX nodes; normalize first.
    NotPure,
    /// An internal edge joins two nodes of the same kind, so the graph is
    /// not an alternating game DAG.
    NotAlternating { parent: NodeId, child: NodeId },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ArithmeticOverflow => write!(f, "proof-number sum overflow"),
            EvalError::NotPure => write!(f, "graph contains MIX nodes"),
            EvalError::NotAlternating { parent, child } => write!(
                f,
                "internal nodes {parent} and {child} share a kind; graph is not alternating"
            ),
        }
    }
}

impl core::error::Error for EvalError {}

fn sum(values: impl Iterator<Item = PnValue>) -> Result<PnValue, EvalError> {
    let mut acc = PnValue::ZERO;
    for v in values {
        acc = acc.checked_add(v).map_err(|_| EvalError::ArithmeticOverflow)?;
    }
    Ok(acc)
}

fn min(values: impl Iterator<Item = PnValue>) -> PnValue {
    values.min().unwrap_or(PnValue::INFINITY)
}

fn pd_dense(g: &AndOrDag) -> Result<Vec<PnPair>, EvalError> {
    if !g.is_pure() {
        return Err(EvalError::NotPure);
    }
    let mut out = alloc::vec![PnPair::OPEN; g.len()];
    for ix in topo_order_indices(g) {
        let kids = g.children_at(ix);
        out[ix as usize] = match g.status_at(ix) {
            NodeStatus::OpenLeaf => PnPair::OPEN,
            NodeStatus::ProvenTerminal => PnPair::PROVEN,
            NodeStatus::DisprovenTerminal => PnPair::DISPROVEN,
            NodeStatus::Internal => {
                let p_of = |&c: &u32| out[c as usize].p;
                let d_of = |&c: &u32| out[c as usize].d;
                match g.kind_at(ix) {
                    NodeKind::Or => PnPair::new(
                        min(kids.iter().map(p_of)),
                        sum(kids.iter().map(d_of))?,
                    ),
                    NodeKind::And => PnPair::new(
                        sum(kids.iter().map(p_of))?,
                        min(kids.iter().map(d_of)),
                    ),
                    NodeKind::Mix => unreachable!("purity checked above"),
                }
            }
        };
    }
    Ok(out)
}

/// Proof and disproof numbers for every node: open leaves are `(1, 1)`,
/// terminals `(0, inf)` / `(inf, 0)`, OR nodes take `(min p, sum d)` over
/// children and AND nodes `(sum p, min d)`.
pub fn eval_pd(g: &AndOrDag) -> Result<BTreeMap<NodeId, PnPair>, EvalError> {
    let dense = pd_dense(g)?;
    Ok(dense
        .into_iter()
        .enumerate()
        .map(|(ix, pair)| (g.id_at(ix as u32).clone(), pair))
        .collect())
}

fn check_alternating(g: &AndOrDag) -> Result<(), EvalError> {
    // Leaves satisfy either parity; only internal-internal edges are
    // constrained.
    for ix in 0..g.len() as u32 {
        if g.status_at(ix).is_leaf() {
            continue;
        }
        for &c in g.children_at(ix) {
            if !g.status_at(c).is_leaf() && g.kind_at(c) == g.kind_at(ix) {
                return Err(EvalError::NotAlternating {
                    parent: g.id_at(ix).clone(),
                    child: g.id_at(c).clone(),
                });
            }
        }
    }
    Ok(())
}

/// Whether a terminal is a win for the player to move there. Solvability
/// is first-player-absolute while phi/delta are mover-relative, so the
/// node kind orients the terminal: at an OR node the mover is the first
/// player, at an AND node the second.
fn terminal_is_winning(kind: NodeKind, status: NodeStatus) -> bool {
    let solvable = status == NodeStatus::ProvenTerminal;
    match kind {
        NodeKind::Or => solvable,
        NodeKind::And => !solvable,
        NodeKind::Mix => unreachable!("purity checked before"),
    }
}

/// Kind-free phi/delta evaluation for alternating game DAGs: internal
/// nodes take `phi = min child delta`, `delta = sum child phi`; open
/// leaves are `(1, 1)`, winning terminals `(0, inf)`, losing terminals
/// `(inf, 0)`.
pub fn eval_phi_delta(g: &AndOrDag) -> Result<BTreeMap<NodeId, PhiDeltaPair>, EvalError> {
    if !g.is_pure() {
        return Err(EvalError::NotPure);
    }
    check_alternating(g)?;
    let mut dense = alloc::vec![PhiDeltaPair::new(PnValue::ONE, PnValue::ONE); g.len()];
    for ix in topo_order_indices(g) {
        let kids = g.children_at(ix);
        dense[ix as usize] = match g.status_at(ix) {
            NodeStatus::OpenLeaf => PhiDeltaPair::new(PnValue::ONE, PnValue::ONE),
            status @ (NodeStatus::ProvenTerminal | NodeStatus::DisprovenTerminal) => {
                if terminal_is_winning(g.kind_at(ix), status) {
                    PhiDeltaPair::new(PnValue::ZERO, PnValue::INFINITY)
                } else {
                    PhiDeltaPair::new(PnValue::INFINITY, PnValue::ZERO)
                }
            }
            NodeStatus::Internal => PhiDeltaPair::new(
                min(kids.iter().map(|&c| dense[c as usize].delta)),
                sum(kids.iter().map(|&c| dense[c as usize].phi))?,
            ),
        };
    }
    Ok(dense
        .into_iter()
        .enumerate()
        .map(|(ix, pair)| (g.id_at(ix as u32).clone(), pair))
        .collect())
}

/// Reinterprets phi/delta values as proof/disproof numbers: identity at OR
/// nodes, swap at AND nodes. The result equals [`eval_pd`] node for node.
pub fn map_phi_delta_to_pd(
    g: &AndOrDag,
    phi_delta: &BTreeMap<NodeId, PhiDeltaPair>,
) -> Result<BTreeMap<NodeId, PnPair>, EvalError> {
    if !g.is_pure() {
        return Err(EvalError::NotPure);
    }
    check_alternating(g)?;
    Ok(phi_delta
        .iter()
        .map(|(id, pair)| {
            let pd = match g.kind_of(id) {
                Some(NodeKind::And) => PnPair::new(pair.delta, pair.phi),
                _ => PnPair::new(pair.phi, pair.delta),
            };
            (id.clone(), pd)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{comb_lattice, fixture, lattice, Fixture};
    use crate::graph::{GraphBuilder, NodeStatus};

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn fin(v: u64) -> PnValue {
        PnValue::finite(v).unwrap()
    }

    fn single_node(kind: NodeKind, status: NodeStatus) -> AndOrDag {
        let mut b = GraphBuilder::new();
        b.node(id("A"), kind, status);
        b.root(id("A"));
        b.build().unwrap()
    }

    #[test]
    fn fig3_double_counts_the_shared_leaf() {
        let pd = eval_pd(&fixture(Fixture::Fig3)).unwrap();
        assert_eq!(pd[&id("A")].d, fin(2));
        assert_eq!(pd[&id("A")].p, fin(2));
    }

    #[test]
    fn fig2_hand_evaluation() {
        let pd = eval_pd(&fixture(Fixture::Fig2)).unwrap();
        assert_eq!(pd[&id("B")], PnPair::new(fin(2), fin(1)));
        assert_eq!(pd[&id("C")], PnPair::new(fin(1), fin(2)));
        assert_eq!(pd[&id("A")], PnPair::new(fin(1), fin(3)));
    }

    #[test]
    fn lattice7_blows_up_to_binomial() {
        let pd = eval_pd(&lattice(7).unwrap()).unwrap();
        let root = id("L0_0");
        assert_eq!(pd[&root].p, fin(20));
        assert_eq!(pd[&root].d, fin(1));
    }

    #[test]
    fn proven_terminal_root() {
        let g = single_node(NodeKind::Or, NodeStatus::ProvenTerminal);
        let pd = eval_pd(&g).unwrap();
        assert_eq!(pd[&id("A")], PnPair::PROVEN);
    }

    #[test]
    fn overflow_is_loud() {
        // (n-1)! for n = 22 exceeds the 63-bit finite range.
        let g = comb_lattice(22).unwrap();
        assert_eq!(eval_pd(&g), Err(EvalError::ArithmeticOverflow));
    }

    #[test]
    fn phi_delta_on_fig3() {
        let g = fixture(Fixture::Fig3);
        let pd = eval_phi_delta(&g).unwrap();
        assert_eq!(pd[&id("A")].delta, fin(2));
        assert_eq!(pd[&id("A")].phi, fin(2));
    }

    #[test]
    fn phi_delta_terminal_base_cases() {
        let win = single_node(NodeKind::Or, NodeStatus::ProvenTerminal);
        let m = eval_phi_delta(&win).unwrap();
        assert_eq!(m[&id("A")], PhiDeltaPair::new(PnValue::ZERO, PnValue::INFINITY));

        let open = single_node(NodeKind::Or, NodeStatus::OpenLeaf);
        let m = eval_phi_delta(&open).unwrap();
        assert_eq!(m[&id("A")], PhiDeltaPair::new(PnValue::ONE, PnValue::ONE));
    }

    #[test]
    fn phi_delta_rejects_non_alternating() {
        let g = lattice(7).unwrap();
        assert!(matches!(
            eval_phi_delta(&g),
            Err(EvalError::NotAlternating { .. })
        ));
    }

    #[test]
    fn mapped_phi_delta_equals_pd_on_fig3() {
        let g = fixture(Fixture::Fig3);
        let mapped = map_phi_delta_to_pd(&g, &eval_phi_delta(&g).unwrap()).unwrap();
        assert_eq!(mapped, eval_pd(&g).unwrap());
    }

    #[test]
    fn mapped_phi_delta_equals_pd_on_alternating_chain() {
        let mut b = GraphBuilder::new();
        b.node(id("A"), NodeKind::Or, NodeStatus::Internal);
        b.node(id("B"), NodeKind::And, NodeStatus::Internal);
        b.node(id("C"), NodeKind::Or, NodeStatus::OpenLeaf);
        b.edge(id("A"), id("B"));
        b.edge(id("B"), id("C"));
        b.root(id("A"));
        let g = b.build().unwrap();
        let mapped = map_phi_delta_to_pd(&g, &eval_phi_delta(&g).unwrap()).unwrap();
        assert_eq!(mapped, eval_pd(&g).unwrap());
    }

    #[test]
    fn map_rejects_non_alternating() {
        let g = lattice(7).unwrap();
        let fake = BTreeMap::new();
        assert!(matches!(
            map_phi_delta_to_pd(&g, &fake),
            Err(EvalError::NotAlternating { .. })
        ));
    }

    #[test]
    fn exclusivity_on_fixtures() {
        for f in [Fixture::Fig2, Fixture::Fig3] {
            for pair in eval_pd(&fixture(f)).unwrap().values() {
                assert_eq!(pair.p.is_zero(), pair.d.is_infinite());
                assert_eq!(pair.d.is_zero(), pair.p.is_infinite());
            }
        }
    }
}
