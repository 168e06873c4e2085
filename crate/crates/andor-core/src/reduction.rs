//! CNF formulas and the polynomial-time reduction from satisfiability to
//! exact proof numbers, with a brute-force checker and an end-to-end
//! verifier.
//!
//! The constructed graph has an AND root `P` over one OR node per clause
//! (`C1..Ck`, children = that clause's literal leaves) and one OR node per
//! variable (`X1..Xn`, children = `Txj` / `Fxj`). Literal leaves are
//! shared between their variable node and every clause mentioning them,
//! which is exactly what makes the instance a DAG: proving `P` costs `n`
//! leaves iff the formula is satisfiable, one polarity per variable.
//!
//! The dual graph is the same construction reverted. Its root is then an
//! OR node, so disproving it requires disproving every child; the dual is
//! validated through the reversion duality (the exact disproof number of
//! the reverted graph equals the exact proof number of the original), not
//! through any single-child shortcut.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{revert, AndOrDag, GraphBuilder, NodeId, NodeKind, NodeStatus};
use crate::oracle::{exact_proof_number, OracleError, WitnessSet};
use crate::pn::PnValue;

/// One literal: a 1-based variable index and a polarity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Lit {
    pub var: u32,
    pub positive: bool,
}

impl Lit {
    pub fn new(var: u32, positive: bool) -> Self {
        Lit { var, positive }
    }

    /// From a signed DIMACS literal; `None` for 0.
    pub fn from_dimacs(lit: i64) -> Option<Lit> {
        (lit != 0).then(|| Lit::new(lit.unsigned_abs() as u32, lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    /// Shared literal-leaf id: `Tx<j>` or `Fx<j>`.
    fn node_id(self) -> NodeId {
        let prefix = if self.positive { "Tx" } else { "Fx" };
        NodeId::new(alloc::format!("{prefix}{}", self.var)).expect("literal ids are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfError {
    VariableOutOfRange { var: u32, num_vars: u32 },
    TooManyVariables { num_vars: u32, max: u32 },
}

impl fmt::Display for CnfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CnfError::VariableOutOfRange { var, num_vars } => {
                write!(f, "literal references variable {var} but only {num_vars} are declared")
            }
            CnfError::TooManyVariables { num_vars, max } => {
                write!(f, "{num_vars} variables exceed the brute-force limit of {max}")
            }
        }
    }
}

impl core::error::Error for CnfError {}

/// A CNF instance: a variable count and clauses of literals. Duplicate
/// literals within a clause collapse at construction; a clause holding
/// both polarities of a variable is kept as-is.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Lit>>) -> Result<Self, CnfError> {
        let mut deduped = Vec::with_capacity(clauses.len());
        for clause in clauses {
            let mut seen: Vec<Lit> = Vec::with_capacity(clause.len());
            for lit in clause {
                if lit.var == 0 || lit.var > num_vars {
                    return Err(CnfError::VariableOutOfRange { var: lit.var, num_vars });
                }
                if !seen.contains(&lit) {
                    seen.push(lit);
                }
            }
            deduped.push(seen);
        }
        Ok(CnfFormula { num_vars, clauses: deduped })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|lit| assignment[lit.var as usize - 1] == lit.positive)
        })
    }
}

/// Builds the proof-number graph of a formula. The root `P` is an AND node
/// over `C1..Ck` then `X1..Xn`; literal leaves are shared. An empty clause
/// becomes a disproven terminal (a disjunction of nothing is false); a
/// formula with no clauses and no variables leaves `P` a proven terminal
/// (a conjunction of nothing is true).
pub fn reduce_cnf(formula: &CnfFormula) -> AndOrDag {
    let n = formula.num_vars;
    let k = formula.clauses.len();
    let root = NodeId::new("P").expect("fixed ids are valid");
    let clause_id = |i: usize| NodeId::new(alloc::format!("C{}", i + 1)).expect("valid id");
    let var_id = |j: u32| NodeId::new(alloc::format!("X{j}")).expect("valid id");

    let mut b = GraphBuilder::new();
    let root_status = if n == 0 && k == 0 { NodeStatus::ProvenTerminal } else { NodeStatus::Internal };
    b.node(root.clone(), NodeKind::And, root_status);
    for (i, clause) in formula.clauses.iter().enumerate() {
        let status = if clause.is_empty() {
            NodeStatus::DisprovenTerminal
        } else {
            NodeStatus::Internal
        };
        b.node(clause_id(i), NodeKind::Or, status);
    }
    for j in 1..=n {
        b.node(var_id(j), NodeKind::Or, NodeStatus::Internal);
    }
    for j in 1..=n {
        b.node(Lit::new(j, true).node_id(), NodeKind::Or, NodeStatus::OpenLeaf);
        b.node(Lit::new(j, false).node_id(), NodeKind::Or, NodeStatus::OpenLeaf);
    }

    for i in 0..k {
        b.edge(root.clone(), clause_id(i));
    }
    for j in 1..=n {
        b.edge(root.clone(), var_id(j));
    }
    for (i, clause) in formula.clauses.iter().enumerate() {
        for lit in clause {
            b.edge(clause_id(i), lit.node_id());
        }
    }
    for j in 1..=n {
        b.edge(var_id(j), Lit::new(j, true).node_id());
        b.edge(var_id(j), Lit::new(j, false).node_id());
    }
    b.root(root);
    b.build().expect("reduction output is valid by construction")
}

/// The reverted twin of [`reduce_cnf`], tying unsatisfiability to the
/// exact disproof number of `P`.
pub fn reduce_cnf_dual(formula: &CnfFormula) -> AndOrDag {
    revert(&reduce_cnf(formula))
}

/// Brute-force limit: `2^25` assignments.
pub const BRUTE_FORCE_MAX_VARS: u32 = 25;

/// Tries every assignment in lexicographic order (`x1` most significant,
/// false before true) and returns the first satisfying one.
pub fn sat_brute_force(formula: &CnfFormula) -> Result<(bool, Option<Vec<bool>>), CnfError> {
    let n = formula.num_vars;
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(CnfError::TooManyVariables { num_vars: n, max: BRUTE_FORCE_MAX_VARS });
    }
    let mut assignment = alloc::vec![false; n as usize];
    for mask in 0..(1u64 << n) {
        for j in 0..n {
            assignment[j as usize] = mask >> (n - 1 - j) & 1 == 1;
        }
        if formula.satisfied_by(&assignment) {
            return Ok((true, Some(assignment)));
        }
    }
    Ok((false, None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    Cnf(CnfError),
    Oracle(OracleError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::Cnf(e) => e.fmt(f),
            VerifyError::Oracle(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for VerifyError {}

impl From<CnfError> for VerifyError {
    fn from(e: CnfError) -> Self {
        VerifyError::Cnf(e)
    }
}

impl From<OracleError> for VerifyError {
    fn from(e: OracleError) -> Self {
        VerifyError::Oracle(e)
    }
}

/// Outcome of checking one formula end to end: satisfiability by brute
/// force against the exact proof number of the constructed graph's root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionReport {
    pub num_vars: u32,
    pub satisfiable: bool,
    pub assignment: Option<Vec<bool>>,
    pub exact_proof: PnValue,
    pub witness: Option<WitnessSet>,
    /// Satisfiable formulas must cost exactly `n` leaves; unsatisfiable
    /// ones strictly more (possibly infinity).
    pub consistent: bool,
}

/// Runs the decision-rule check for one formula. The reduction has `2n`
/// literal leaves, so `leaf_budget` must be at least `2 * num_vars`.
pub fn verify_reduction(
    formula: &CnfFormula,
    leaf_budget: usize,
) -> Result<ReductionReport, VerifyError> {
    let graph = reduce_cnf(formula);
    let (exact_proof, witness) = exact_proof_number(&graph, graph.root(), leaf_budget)?;
    let (satisfiable, assignment) = sat_brute_force(formula)?;
    let n = PnValue::finite(formula.num_vars as u64).expect("var count is small");
    let consistent = if satisfiable { exact_proof == n } else { exact_proof > n };
    Ok(ReductionReport {
        num_vars: formula.num_vars,
        satisfiable,
        assignment,
        exact_proof,
        witness,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_disproof_number, DEFAULT_LEAF_BUDGET};

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    /// (x1 v x2 v x3) & (!x1 v !x2 v !x3) & (!x1 v x2)
    pub(crate) fn example_formula() -> CnfFormula {
        CnfFormula::new(
            3,
            alloc::vec![
                alloc::vec![Lit::new(1, true), Lit::new(2, true), Lit::new(3, true)],
                alloc::vec![Lit::new(1, false), Lit::new(2, false), Lit::new(3, false)],
                alloc::vec![Lit::new(1, false), Lit::new(2, true)],
            ],
        )
        .unwrap()
    }

    fn contradiction() -> CnfFormula {
        CnfFormula::new(
            1,
            alloc::vec![alloc::vec![Lit::new(1, true)], alloc::vec![Lit::new(1, false)]],
        )
        .unwrap()
    }

    #[test]
    fn duplicate_literals_collapse() {
        let f = CnfFormula::new(1, alloc::vec![alloc::vec![Lit::new(1, true), Lit::new(1, true)]])
            .unwrap();
        assert_eq!(f.clauses()[0].len(), 1);
    }

    #[test]
    fn out_of_range_variable_rejected() {
        let err = CnfFormula::new(3, alloc::vec![alloc::vec![Lit::new(4, true)]]).unwrap_err();
        assert_eq!(err, CnfError::VariableOutOfRange { var: 4, num_vars: 3 });
    }

    #[test]
    fn example_reduction_structure() {
        let g = reduce_cnf(&example_formula());
        // 1 root + 3 clauses + 3 variables + 6 literal leaves.
        assert_eq!(g.len(), 13);
        assert_eq!(g.kind_of(&id("P")), Some(NodeKind::And));
        for or_node in ["C1", "C2", "C3", "X1", "X2", "X3"] {
            assert_eq!(g.kind_of(&id(or_node)), Some(NodeKind::Or));
            assert_eq!(g.status_of(&id(or_node)), Some(NodeStatus::Internal));
        }
        let c3 = g.index_of(&id("C3")).unwrap();
        let c3_children: Vec<&str> =
            g.children_at(c3).iter().map(|&c| g.id_at(c).as_str()).collect();
        assert_eq!(c3_children, ["Fx1", "Tx2"]);
    }

    #[test]
    fn literal_leaves_are_shared() {
        let f = CnfFormula::new(1, alloc::vec![alloc::vec![Lit::new(1, true)]]).unwrap();
        let g = reduce_cnf(&f);
        assert_eq!(g.len(), 5); // P, C1, X1, Tx1, Fx1
        let tx1 = g.index_of(&id("Tx1")).unwrap();
        let parents = (0..g.len() as u32)
            .filter(|&ix| g.children_at(ix).contains(&tx1))
            .count();
        assert_eq!(parents, 2);
    }

    #[test]
    fn size_is_linear_in_the_formula() {
        for seed in 0..20 {
            let f = crate::generators::random_cnf(seed, 6, 9, 3);
            let g = reduce_cnf(&f);
            let n = f.num_vars() as usize;
            let k = f.clauses().len();
            let clause_lits: usize = f.clauses().iter().map(Vec::len).sum();
            assert_eq!(g.len(), 1 + k + n + 2 * n);
            assert_eq!(g.edge_count(), (n + k) + 2 * n + clause_lits);
        }
    }

    #[test]
    fn empty_clause_disproves_the_root() {
        let f = CnfFormula::new(1, alloc::vec![alloc::vec![], alloc::vec![Lit::new(1, true)]])
            .unwrap();
        let g = reduce_cnf(&f);
        assert_eq!(g.status_of(&id("C1")), Some(NodeStatus::DisprovenTerminal));
        let (v, w) = exact_proof_number(&g, &id("P"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(v, PnValue::INFINITY);
        assert!(w.is_none());
    }

    #[test]
    fn empty_formula_is_trivially_proven() {
        let f = CnfFormula::new(0, Vec::new()).unwrap();
        let g = reduce_cnf(&f);
        assert_eq!(g.status_of(&id("P")), Some(NodeStatus::ProvenTerminal));
        assert_eq!(sat_brute_force(&f).unwrap().0, true);
        let report = verify_reduction(&f, DEFAULT_LEAF_BUDGET).unwrap();
        assert!(report.consistent);
        assert_eq!(report.exact_proof, PnValue::ZERO);
    }

    #[test]
    fn dual_is_the_reverted_primal() {
        let g = reduce_cnf_dual(&example_formula());
        assert_eq!(g, revert(&reduce_cnf(&example_formula())));
        assert_eq!(g.kind_of(&id("P")), Some(NodeKind::Or));
        for node in ["C1", "X1"] {
            assert_eq!(g.kind_of(&id(node)), Some(NodeKind::And));
        }
    }

    #[test]
    fn dual_disproof_equals_primal_proof() {
        let f = example_formula();
        let primal = reduce_cnf(&f);
        let dual = reduce_cnf_dual(&f);
        let (p, _) = exact_proof_number(&primal, &id("P"), DEFAULT_LEAF_BUDGET).unwrap();
        let (d, _) = exact_disproof_number(&dual, &id("P"), DEFAULT_LEAF_BUDGET).unwrap();
        assert_eq!(p, PnValue::finite(3).unwrap());
        assert_eq!(d, PnValue::finite(3).unwrap());
    }

    #[test]
    fn brute_force_finds_the_first_model_in_order() {
        let (sat, model) = sat_brute_force(&example_formula()).unwrap();
        assert!(sat);
        assert_eq!(model.unwrap(), alloc::vec![false, false, true]);
    }

    #[test]
    fn brute_force_detects_contradiction() {
        let (sat, model) = sat_brute_force(&contradiction()).unwrap();
        assert!(!sat);
        assert!(model.is_none());
    }

    #[test]
    fn brute_force_guards_its_range() {
        let f = CnfFormula::new(26, Vec::new()).unwrap();
        assert_eq!(
            sat_brute_force(&f).unwrap_err(),
            CnfError::TooManyVariables { num_vars: 26, max: 25 }
        );
    }

    #[test]
    fn verify_example_formula() {
        let report = verify_reduction(&example_formula(), DEFAULT_LEAF_BUDGET).unwrap();
        assert!(report.satisfiable);
        assert_eq!(report.exact_proof, PnValue::finite(3).unwrap());
        assert!(report.consistent);
        let witness = report.witness.unwrap();
        let names: Vec<&str> = witness.leaves.iter().map(|l| l.as_str()).collect();
        assert_eq!(names, ["Fx1", "Fx2", "Tx3"]);
    }

    #[test]
    fn verify_contradiction_needs_both_polarities() {
        let report = verify_reduction(&contradiction(), DEFAULT_LEAF_BUDGET).unwrap();
        assert!(!report.satisfiable);
        assert_eq!(report.exact_proof, PnValue::finite(2).unwrap());
        assert!(report.consistent);
    }

    #[test]
    fn verify_single_positive_clause() {
        let f = CnfFormula::new(1, alloc::vec![alloc::vec![Lit::new(1, true)]]).unwrap();
        let report = verify_reduction(&f, DEFAULT_LEAF_BUDGET).unwrap();
        assert!(report.satisfiable);
        assert_eq!(report.exact_proof, PnValue::ONE);
        let witness = report.witness.unwrap();
        let names: Vec<&str> = witness.leaves.iter().map(|l| l.as_str()).collect();
        assert_eq!(names, ["Tx1"]);
    }
}
