//! Deterministic builders: figure fixtures, the two analytic over-counting
//! lattice families, random graphs/trees/formulas for property tests, and
//! the Nim problem domain.
//!
//! Every generator is a pure function of its arguments; the random
//! builders draw from [`SplitMix64`] so a seed pins the output bit for
//! bit.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{AndOrDag, EdgeLabel, GraphBuilder, NodeId, NodeKind, NodeStatus};
use crate::pns::{Expansion, ProblemExpander, TerminalVerdict};
use crate::reduction::{CnfFormula, Lit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    UnknownFixture { name: String },
    EvenLayerCount { layers: usize },
    TooFewLayers { layers: usize },
    TooLarge { stones: u32 },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::UnknownFixture { name } => write!(f, "unknown fixture {name:?}"),
            GenError::EvenLayerCount { layers } => {
                write!(f, "lattice layer count must be odd, got {layers}")
            }
            GenError::TooFewLayers { layers } => {
                write!(f, "combinatorial lattice needs at least 2 layers, got {layers}")
            }
            GenError::TooLarge { stones } => {
                write!(f, "nim position with {stones} stones exceeds the limit of 20")
            }
        }
    }
}

impl core::error::Error for GenError {}

/// SplitMix64: Steele, Lea & Flood's 64-bit mixer with the golden-gamma
/// increment. Tiny, full-period, and stable across platforms, which keeps
/// generated corpora identical everywhere.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `[0, n)` by modulo; the bias is irrelevant at
    /// the desk-scale ranges used here and keeps the draw sequence simple
    /// to reproduce.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub fn chance(&mut self, probability: f64) -> bool {
        // 53 uniform mantissa bits, as in the reference double conversion.
        let unit = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        unit < probability
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fixture {
    Fig1Left,
    Fig1Right,
    Fig2,
    Fig3,
}

impl core::str::FromStr for Fixture {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1_left" | "fig1-left" => Ok(Fixture::Fig1Left),
            "fig1_right" | "fig1-right" => Ok(Fixture::Fig1Right),
            "fig2" => Ok(Fixture::Fig2),
            "fig3" => Ok(Fixture::Fig3),
            other => Err(GenError::UnknownFixture { name: String::from(other) }),
        }
    }
}

fn id(s: &str) -> NodeId {
    NodeId::new(s).expect("fixture ids are valid")
}

/// The hand-sized example graphs used throughout the tests. Leaf nodes
/// carry kind OR by convention; nothing reads it while they stay open.
pub fn fixture(which: Fixture) -> AndOrDag {
    let mut b = GraphBuilder::new();
    match which {
        Fixture::Fig1Left => {
            b.node(id("A"), NodeKind::Mix, NodeStatus::Internal);
            b.node(id("B"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("C"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("D"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.labeled_edge(id("A"), id("B"), EdgeLabel::And);
            b.labeled_edge(id("A"), id("C"), EdgeLabel::And);
            b.labeled_edge(id("A"), id("D"), EdgeLabel::Or);
        }
        Fixture::Fig1Right => {
            b.node(id("A"), NodeKind::Or, NodeStatus::Internal);
            b.node(id("B"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("C"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("D"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("A__and"), NodeKind::And, NodeStatus::Internal);
            b.edge(id("A"), id("A__and"));
            b.edge(id("A"), id("D"));
            b.edge(id("A__and"), id("B"));
            b.edge(id("A__and"), id("C"));
        }
        Fixture::Fig2 | Fixture::Fig3 => {
            let c_kind = if which == Fixture::Fig2 { NodeKind::Or } else { NodeKind::And };
            b.node(id("A"), NodeKind::Or, NodeStatus::Internal);
            b.node(id("B"), NodeKind::And, NodeStatus::Internal);
            b.node(id("C"), c_kind, NodeStatus::Internal);
            b.node(id("D"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("E"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.node(id("F"), NodeKind::Or, NodeStatus::OpenLeaf);
            b.edge(id("A"), id("B"));
            b.edge(id("A"), id("C"));
            b.edge(id("B"), id("D"));
            b.edge(id("B"), id("E"));
            b.edge(id("C"), id("E"));
            b.edge(id("C"), id("F"));
        }
    }
    b.root(id("A"));
    b.build().expect("fixtures are valid by construction")
}

fn layer_node(i: usize, j: usize) -> NodeId {
    NodeId::new(alloc::format!("L{i}_{j}")).expect("lattice ids are valid")
}

/// Diamond lattice of `layers` (odd) all-AND layers with a single bottom
/// leaf of the given status. The recursive proof number of the root counts
/// root-to-bottom paths, `C(n-1, (n-1)/2)`, while one solved leaf proves
/// everything.
pub fn lattice_with_bottom(layers: usize, bottom: NodeStatus) -> Result<AndOrDag, GenError> {
    if layers == 0 || layers % 2 == 0 {
        return Err(GenError::EvenLayerCount { layers });
    }
    let width = |i: usize| i.min(layers - 1 - i) + 1;
    let mut b = GraphBuilder::new();
    for i in 0..layers {
        for j in 0..width(i) {
            let status = if i == layers - 1 { bottom } else { NodeStatus::Internal };
            b.node(layer_node(i, j), NodeKind::And, status);
        }
    }
    for i in 0..layers - 1 {
        let expanding = width(i + 1) > width(i);
        for j in 0..width(i) {
            if expanding {
                b.edge(layer_node(i, j), layer_node(i + 1, j));
                b.edge(layer_node(i, j), layer_node(i + 1, j + 1));
            } else {
                if j >= 1 {
                    b.edge(layer_node(i, j), layer_node(i + 1, j - 1));
                }
                if j + 1 < width(i) {
                    b.edge(layer_node(i, j), layer_node(i + 1, j));
                }
            }
        }
    }
    b.root(layer_node(0, 0));
    Ok(b.build().expect("lattice is valid by construction"))
}

pub fn lattice(layers: usize) -> Result<AndOrDag, GenError> {
    lattice_with_bottom(layers, NodeStatus::OpenLeaf)
}

/// Combinatorial lattice: layer sizes 1, 2, ..., n-1, 1 with complete
/// bipartite edges between consecutive layers, all AND, single bottom open
/// leaf. The recursive proof number of the root is the path count
/// `(n-1)!`.
pub fn comb_lattice(layers: usize) -> Result<AndOrDag, GenError> {
    if layers < 2 {
        return Err(GenError::TooFewLayers { layers });
    }
    let size = |i: usize| if i == layers - 1 { 1 } else { i + 1 };
    let mut b = GraphBuilder::new();
    for i in 0..layers {
        for j in 0..size(i) {
            let status = if i == layers - 1 { NodeStatus::OpenLeaf } else { NodeStatus::Internal };
            b.node(layer_node(i, j), NodeKind::And, status);
        }
    }
    for i in 0..layers - 1 {
        for j in 0..size(i) {
            for j2 in 0..size(i + 1) {
                b.edge(layer_node(i, j), layer_node(i + 1, j2));
            }
        }
    }
    b.root(layer_node(0, 0));
    Ok(b.build().expect("comb lattice is valid by construction"))
}

fn numbered(i: usize) -> NodeId {
    NodeId::new(alloc::format!("n{i}")).expect("generated ids are valid")
}

fn random_leaf_status(rng: &mut SplitMix64) -> NodeStatus {
    // Mostly open leaves with a sprinkle of resolved terminals so the
    // terminal base cases stay exercised.
    match rng.below(10) {
        8 => NodeStatus::ProvenTerminal,
        9 => NodeStatus::DisprovenTerminal,
        _ => NodeStatus::OpenLeaf,
    }
}

fn random_kind(rng: &mut SplitMix64, and_fraction: f64) -> NodeKind {
    if rng.chance(and_fraction) {
        NodeKind::And
    } else {
        NodeKind::Or
    }
}

/// Random valid DAG with up to `max_nodes` nodes. Nodes are topologically
/// ordered by index (edges point from lower to higher), the last node is
/// always a leaf, and `leaf_fraction` / `and_fraction` steer the mix.
pub fn random_dag(seed: u64, max_nodes: usize, leaf_fraction: f64, and_fraction: f64) -> AndOrDag {
    assert!(max_nodes > 0, "max_nodes must be positive");
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_nodes as u64) as usize;
    let is_leaf: Vec<bool> = (0..n)
        .map(|i| {
            if i == n - 1 {
                true
            } else if i == 0 {
                false
            } else {
                rng.chance(leaf_fraction)
            }
        })
        .collect();

    let mut b = GraphBuilder::new();
    for (i, &leaf) in is_leaf.iter().enumerate() {
        let kind = random_kind(&mut rng, and_fraction);
        let status = if leaf { random_leaf_status(&mut rng) } else { NodeStatus::Internal };
        b.node(numbered(i), kind, status);
    }
    for i in 0..n {
        if is_leaf[i] {
            continue;
        }
        let attempts = 1 + rng.below(3);
        let mut chosen: Vec<usize> = Vec::new();
        for _ in 0..attempts {
            let t = i + 1 + rng.below((n - 1 - i) as u64) as usize;
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for t in chosen {
            b.edge(numbered(i), numbered(t));
        }
    }
    b.root(numbered(0));
    b.build().expect("random dag is valid by construction")
}

/// Random tree: every non-root node has exactly one parent.
pub fn random_tree(seed: u64, max_nodes: usize) -> AndOrDag {
    assert!(max_nodes > 0, "max_nodes must be positive");
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_nodes as u64) as usize;
    let parents: Vec<usize> = (1..n).map(|i| rng.below(i as u64) as usize).collect();
    let mut has_child = alloc::vec![false; n];
    for &p in &parents {
        has_child[p] = true;
    }
    let mut b = GraphBuilder::new();
    for i in 0..n {
        let kind = random_kind(&mut rng, 0.5);
        let status = if has_child[i] { NodeStatus::Internal } else { random_leaf_status(&mut rng) };
        b.node(numbered(i), kind, status);
    }
    for (i, &p) in parents.iter().enumerate() {
        b.edge(numbered(p), numbered(i + 1));
    }
    b.root(numbered(0));
    b.build().expect("random tree is valid by construction")
}

/// Random CNF with `clause_count` clauses of up to `clause_len` literals
/// over variables `1..=num_vars` (duplicates within a clause collapse).
pub fn random_cnf(seed: u64, num_vars: u32, clause_count: usize, clause_len: usize) -> CnfFormula {
    assert!(num_vars > 0, "num_vars must be positive");
    assert!(clause_len > 0, "clause_len must be positive");
    let mut rng = SplitMix64::new(seed);
    let clauses = (0..clause_count)
        .map(|_| {
            (0..clause_len)
                .map(|_| {
                    let var = 1 + rng.below(num_vars as u64) as u32;
                    Lit::new(var, rng.below(2) == 0)
                })
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("generated vars are in range")
}

/// Normal-play Nim: a move removes any positive number of stones from one
/// pile; the player with no move loses. States are canonicalized to the
/// sorted multiset of nonempty piles plus the mover's parity, which makes
/// move-order transpositions collide, and solvability is expressed from
/// the first player's point of view.
#[derive(Clone, Debug)]
pub struct NimProblem {
    start: Vec<u8>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct NimState {
    /// Nonempty pile sizes, ascending.
    pub piles: Vec<u8>,
    /// False when the first player is to move.
    pub second_to_move: bool,
}

impl NimState {
    /// Stable id for graph materialization, e.g. `n3x4p0` ("np1" when no
    /// stones remain and the second player is to move).
    pub fn node_id(&self) -> NodeId {
        let mut s = String::from("n");
        for (i, p) in self.piles.iter().enumerate() {
            if i > 0 {
                s.push('x');
            }
            s.push_str(&alloc::format!("{p}"));
        }
        s.push_str(if self.second_to_move { "p1" } else { "p0" });
        NodeId::new(s).expect("nim ids are valid")
    }
}

fn canonical_piles(piles: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut v: Vec<u8> = piles.filter(|&p| p > 0).collect();
    v.sort_unstable();
    v
}

pub fn nim_problem(piles: &[u8]) -> Result<NimProblem, GenError> {
    let stones: u32 = piles.iter().map(|&p| p as u32).sum();
    if stones > 20 {
        return Err(GenError::TooLarge { stones });
    }
    Ok(NimProblem { start: canonical_piles(piles.iter().copied()) })
}

impl ProblemExpander for NimProblem {
    type State = NimState;

    fn root(&self) -> NimState {
        NimState { piles: self.start.clone(), second_to_move: false }
    }

    fn expand(&self, state: &NimState) -> Expansion<NimState> {
        let kind = if state.second_to_move { NodeKind::And } else { NodeKind::Or };
        if state.piles.is_empty() {
            // Mover cannot move and loses; in first-player terms that is
            // a disproof at parity 0 and a proof at parity 1.
            let verdict = if state.second_to_move {
                TerminalVerdict::ProvenTerminal
            } else {
                TerminalVerdict::DisprovenTerminal
            };
            return Expansion { kind, verdict, children: Vec::new() };
        }
        let child_kind = if state.second_to_move { NodeKind::Or } else { NodeKind::And };
        let mut children: Vec<(NimState, NodeKind)> = Vec::new();
        let mut prev = None;
        for (i, &pile) in state.piles.iter().enumerate() {
            if prev == Some(pile) {
                continue; // equal piles yield identical successors
            }
            prev = Some(pile);
            for take in 1..=pile {
                let next = NimState {
                    piles: canonical_piles(
                        state
                            .piles
                            .iter()
                            .enumerate()
                            .map(|(j, &p)| if j == i { p - take } else { p }),
                    ),
                    second_to_move: !state.second_to_move,
                };
                if !children.iter().any(|(c, _)| *c == next) {
                    children.push((next, child_kind));
                }
            }
        }
        Expansion { kind, verdict: TerminalVerdict::NonTerminal, children }
    }
}
