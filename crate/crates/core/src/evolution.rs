//! Entropy-driven growth, heuristic edge prediction and predictability errors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{self, clique3_seed, Model};
use crate::graph::{DensityKind, Graph};
use crate::netstats::StatVector;
use crate::quad::{self, QuadState};
use crate::spectral::{von_neumann_entropy, LaplacianEdgeUpdate, NormalizedEdgeUpdate};

/// Scores within this (relative) distance of the optimum count as tied.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyVariant {
    ExactL,
    ExactN,
    ApproxL,
    ApproxN,
}

impl EntropyVariant {
    pub const ALL: [EntropyVariant; 4] = [
        EntropyVariant::ExactL,
        EntropyVariant::ApproxL,
        EntropyVariant::ExactN,
        EntropyVariant::ApproxN,
    ];

    pub fn entropy(self, g: &Graph) -> Result<f64> {
        match self {
            EntropyVariant::ExactL => von_neumann_entropy(g, DensityKind::LaplacianScaled),
            EntropyVariant::ExactN => von_neumann_entropy(g, DensityKind::NormalizedScaled),
            EntropyVariant::ApproxL => quad::approx_entropy_laplacian(g),
            EntropyVariant::ApproxN => quad::approx_entropy_normalized(g),
        }
    }

    pub fn kind(self) -> DensityKind {
        match self {
            EntropyVariant::ExactL | EntropyVariant::ApproxL => DensityKind::LaplacianScaled,
            EntropyVariant::ExactN | EntropyVariant::ApproxN => DensityKind::NormalizedScaled,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, EntropyVariant::ExactL | EntropyVariant::ExactN)
    }

    /// Short name used on the command line and in output headers.
    pub fn short_name(self) -> &'static str {
        match self {
            EntropyVariant::ExactL => "le",
            EntropyVariant::ApproxL => "ale",
            EntropyVariant::ExactN => "nle",
            EntropyVariant::ApproxN => "anle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Action {
    AddEdge {
        edge: (usize, usize),
    },
    /// A new node and its attachment edges, in the order they were chosen.
    AddNode {
        node: usize,
        edges: Vec<(usize, usize)>,
        tie_counts: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStep {
    pub graph: Graph,
    pub entropy: f64,
    /// `None` for the seed snapshot.
    pub action: Option<Action>,
    /// Number of equally optimal candidates (the largest over a node's attachments).
    pub tie_count: usize,
}

/// Serializable view of one step, without the snapshot itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub n: usize,
    pub m: usize,
    pub entropy: f64,
    pub tie_count: usize,
    pub action: Option<Action>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTrace {
    pub variant: EntropyVariant,
    pub objective: Objective,
    pub steps: Vec<GrowthStep>,
}

impl GrowthTrace {
    pub fn seed_graph(&self) -> &Graph {
        &self.steps[0].graph
    }

    pub fn final_graph(&self) -> &Graph {
        &self.steps.last().expect("trace has a seed snapshot").graph
    }

    pub fn records(&self) -> Vec<StepRecord> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepRecord {
                step: i,
                n: s.graph.n(),
                m: s.graph.m(),
                entropy: s.entropy,
                tie_count: s.tie_count,
                action: s.action.clone(),
            })
            .collect()
    }

    /// Rebuilds every snapshot from the seed graph and the recorded actions.
    pub fn replay(&self) -> Result<Vec<Graph>> {
        let mut g = self.seed_graph().clone();
        let mut out = vec![g.clone()];
        for step in &self.steps[1..] {
            match &step.action {
                Some(Action::AddEdge { edge: (u, v) }) => g.add_edge(*u, *v)?,
                Some(Action::AddNode { node, edges, .. }) => {
                    if g.add_node() != *node {
                        return Err(Error::InconsistentState(format!("node {node} out of sequence")));
                    }
                    for &(u, v) in edges {
                        g.add_edge(u, v)?;
                    }
                }
                None => return Err(Error::InconsistentState("missing action after seed".into())),
            }
            out.push(g.clone());
        }
        Ok(out)
    }

    /// Checks that replayed snapshots equal the stored ones and that their
    /// entropies match the stored values within `tol`.
    pub fn verify(&self, tol: f64) -> Result<()> {
        for (i, (g, step)) in self.replay()?.iter().zip(&self.steps).enumerate() {
            if *g != step.graph {
                return Err(Error::InconsistentState(format!("snapshot {i} differs from replay")));
            }
            let e = self.variant.entropy(g)?;
            if (e - step.entropy).abs() > tol {
                return Err(Error::InconsistentState(format!(
                    "entropy at step {i}: stored {}, recomputed {e}",
                    step.entropy
                )));
            }
        }
        Ok(())
    }
}

/// Index of the chosen candidate and the number of candidates tied with it.
fn select<R: Rng + ?Sized>(scores: &[f64], obj: Objective, rng: &mut R) -> (usize, usize) {
    let best = match obj {
        Objective::Maximize => scores.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Objective::Minimize => scores.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let ties = tied_with(scores, best);
    let k = if ties.len() == 1 { 0 } else { rng.random_range(0..ties.len()) };
    (ties[k], ties.len())
}

fn tied_with(scores: &[f64], best: f64) -> Vec<usize> {
    let tol = TIE_TOL * best.abs().max(1.0);
    (0..scores.len()).filter(|&i| (scores[i] - best).abs() <= tol).collect()
}

/// One eigendecomposition of a snapshot, reused for every candidate edge.
enum ExactUpdate {
    Laplacian(LaplacianEdgeUpdate),
    Normalized(NormalizedEdgeUpdate),
}

impl ExactUpdate {
    /// `None` for the approximate variants.
    fn new(g: &Graph, variant: EntropyVariant) -> Result<Option<Self>> {
        Ok(match variant {
            EntropyVariant::ExactL => Some(ExactUpdate::Laplacian(LaplacianEdgeUpdate::new(g)?)),
            EntropyVariant::ExactN => Some(ExactUpdate::Normalized(NormalizedEdgeUpdate::new(g)?)),
            _ => None,
        })
    }

    fn base_entropy(&self) -> Result<f64> {
        match self {
            ExactUpdate::Laplacian(up) => up.base_entropy().ok_or(Error::EmptyEdgeSet),
            ExactUpdate::Normalized(up) => Ok(up.base_entropy()),
        }
    }

    fn entropies(&self, cands: &[(usize, usize)]) -> Vec<f64> {
        match self {
            ExactUpdate::Laplacian(up) => up.entropies_with_edges(cands),
            ExactUpdate::Normalized(up) => up.entropies_with_edges(cands),
        }
    }
}

fn increments(quad: &QuadState, exact: Option<&ExactUpdate>, variant: EntropyVariant, cands: &[(usize, usize)]) -> Result<Vec<f64>> {
    match (exact, variant) {
        (Some(up), _) => {
            let base = up.base_entropy()?;
            Ok(up.entropies(cands).into_iter().map(|e| e - base).collect())
        }
        (None, EntropyVariant::ApproxL) => cands.iter().map(|&(x, y)| quad.delta_laplacian(x, y)).collect(),
        (None, _) => cands.iter().map(|&(x, y)| quad.delta_normalized(x, y)).collect(),
    }
}

/// Entropy increment of every candidate edge under `variant`.
fn edge_increments(g: &Graph, quad: &QuadState, variant: EntropyVariant, cands: &[(usize, usize)]) -> Result<Vec<f64>> {
    increments(quad, ExactUpdate::new(g, variant)?.as_ref(), variant, cands)
}

/// Greedy edge addition: each step adds the absent edge whose entropy
/// increment is optimal, breaking ties uniformly from the seeded stream.
pub fn edge_growth(seed_graph: &Graph, steps: usize, obj: Objective, variant: EntropyVariant, seed: u64) -> Result<GrowthTrace> {
    let mut g = seed_graph.clone();
    // Exact variants decompose each snapshot once: for its own entropy and
    // for scoring the next step's candidates.
    let snapshot_entropy = |g: &Graph| -> Result<(f64, Option<ExactUpdate>)> {
        match ExactUpdate::new(g, variant)? {
            Some(up) => Ok((up.base_entropy()?, Some(up))),
            None => Ok((variant.entropy(g)?, None)),
        }
    };
    let (entropy, mut exact) = snapshot_entropy(&g)?;
    let mut quad = QuadState::new(&g);
    let mut rng = generators::stream(seed, 0);
    let mut trace = vec![GrowthStep {
        graph: g.clone(),
        entropy,
        action: None,
        tie_count: 0,
    }];
    for _ in 0..steps {
        let cands = g.complement_edges();
        if cands.is_empty() {
            return Err(Error::GraphComplete);
        }
        let scores = increments(&quad, exact.as_ref(), variant, &cands)?;
        let (i, ties) = select(&scores, obj, &mut rng);
        let (x, y) = cands[i];
        g.add_edge(x, y)?;
        quad.update(&g, x, y)?;
        let (entropy, next) = snapshot_entropy(&g)?;
        exact = next;
        trace.push(GrowthStep {
            entropy,
            graph: g.clone(),
            action: Some(Action::AddEdge { edge: (x, y) }),
            tie_count: ties,
        });
    }
    Ok(GrowthTrace {
        variant,
        objective: obj,
        steps: trace,
    })
}

/// Greedy node addition from a triangle: each step adds a node and attaches
/// it by `m` edges chosen one at a time, each optimizing the entropy of the
/// graph after that attachment.
pub fn node_growth(steps: usize, m: usize, obj: Objective, variant: EntropyVariant, seed: u64) -> Result<GrowthTrace> {
    let mut g = clique3_seed();
    if m == 0 || m > g.n() {
        return Err(Error::BadParam(format!("attachments per node must be in 1..={}, got {m}", g.n())));
    }
    let entropy = variant.entropy(&g)?;
    let mut rng = generators::stream(seed, 0);
    let mut trace = vec![GrowthStep {
        graph: g.clone(),
        entropy,
        action: None,
        tie_count: 0,
    }];
    for _ in 0..steps {
        let v = g.add_node();
        let mut edges = Vec::with_capacity(m);
        let mut tie_counts = Vec::with_capacity(m);
        for _ in 0..m {
            let cands: Vec<(usize, usize)> = (0..v).filter(|&u| !g.has_edge(u, v)).map(|u| (u, v)).collect();
            // Scores are entropies after attachment, so the new node is never
            // evaluated while isolated.
            let exact = match ExactUpdate::new(&g, variant) {
                // The first attachment of a normalized variant runs while the node is isolated.
                Err(Error::IsolatedNode(_)) => None,
                r => r?,
            };
            let scores: Vec<f64> = match exact {
                Some(up) => up.entropies(&cands),
                None => cands
                    .iter()
                    .map(|&(u, v)| variant.entropy(&g.with_edge(u, v)?))
                    .collect::<Result<_>>()?,
            };
            let (i, ties) = select(&scores, obj, &mut rng);
            let (u, v) = cands[i];
            g.add_edge(u, v)?;
            edges.push((u, v));
            tie_counts.push(ties);
        }
        trace.push(GrowthStep {
            entropy: variant.entropy(&g)?,
            graph: g.clone(),
            tie_count: tie_counts.iter().copied().max().unwrap_or(0),
            action: Some(Action::AddNode { node: v, edges, tie_counts }),
        });
    }
    Ok(GrowthTrace {
        variant,
        objective: obj,
        steps: trace,
    })
}

pub fn trace_statistics(t: &GrowthTrace) -> Vec<StatVector> {
    t.steps.iter().map(|s| StatVector::of(&s.graph)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Heuristic {
    MinDegreeSum,
    MaxGeodesic,
    MinSumMaxGeo,
    Random,
}

impl Heuristic {
    pub const ALL: [Heuristic; 4] = [
        Heuristic::MinDegreeSum,
        Heuristic::MaxGeodesic,
        Heuristic::MinSumMaxGeo,
        Heuristic::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::MinDegreeSum => "MIN_DEGREE_SUM",
            Heuristic::MaxGeodesic => "MAX_GEODESIC",
            Heuristic::MinSumMaxGeo => "MIN_SUM_MAX_GEO",
            Heuristic::Random => "RANDOM",
        }
    }
}

fn keep_extreme<K: Ord + Copy>(cands: Vec<(usize, usize)>, key: impl Fn(usize, usize) -> K, max: bool) -> Vec<(usize, usize)> {
    let keys: Vec<K> = cands.iter().map(|&(u, v)| key(u, v)).collect();
    let best = if max { keys.iter().max() } else { keys.iter().min() }.copied();
    cands.into_iter().zip(keys).filter(|(_, k)| Some(*k) == best).map(|(c, _)| c).collect()
}

/// The absent pairs a heuristic draws its prediction from, in lexicographic order.
pub fn heuristic_candidates(g: &Graph, h: Heuristic) -> Result<Vec<(usize, usize)>> {
    let cands = g.complement_edges();
    if cands.is_empty() {
        return Err(Error::GraphComplete);
    }
    let degree_sum = |u: usize, v: usize| g.degree(u) + g.degree(v);
    Ok(match h {
        Heuristic::Random => cands,
        Heuristic::MinDegreeSum => keep_extreme(cands, degree_sum, false),
        Heuristic::MaxGeodesic => {
            // Unreachable pairs carry u32::MAX and so rank above any distance.
            let d = g.geodesic_distances();
            keep_extreme(cands, |u, v| d.raw(u, v), true)
        }
        Heuristic::MinSumMaxGeo => {
            let d = g.geodesic_distances();
            keep_extreme(keep_extreme(cands, degree_sum, false), |u, v| d.raw(u, v), true)
        }
    })
}

pub fn heuristic_pick<R: Rng + ?Sized>(g: &Graph, h: Heuristic, rng: &mut R) -> Result<(usize, usize)> {
    let c = heuristic_candidates(g, h)?;
    Ok(c[rng.random_range(0..c.len())])
}

pub fn heuristic_predict(g: &Graph, h: Heuristic, seed: u64) -> Result<(usize, usize)> {
    heuristic_pick(g, h, &mut generators::stream(seed, 0))
}

/// Absent pairs whose exact Laplacian increment is maximal.
pub fn exact_laplacian_argmax_set(g: &Graph) -> Result<Vec<(usize, usize)>> {
    let cands = g.complement_edges();
    if cands.is_empty() {
        return Err(Error::GraphComplete);
    }
    let scores = edge_increments(g, &QuadState::new(g), EntropyVariant::ExactL, &cands)?;
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(tied_with(&scores, best).into_iter().map(|i| cands[i]).collect())
}

/// Whether each heuristic's prediction hits the exact argmax set of `g`.
/// Every heuristic draws from a fresh copy of the stream `pick_seed`, so equal
/// candidate sets yield equal predictions.
pub fn heuristic_hits(g: &Graph, heuristics: &[Heuristic], pick_seed: (u64, u64)) -> Result<Vec<bool>> {
    let targets = exact_laplacian_argmax_set(g)?;
    heuristics
        .iter()
        .map(|&h| {
            let mut rng = generators::stream(pick_seed.0, pick_seed.1);
            let e = heuristic_pick(g, h, &mut rng)?;
            Ok(targets.binary_search(&e).is_ok())
        })
        .collect()
}

/// Mean success of each heuristic over `trials` graphs drawn from `model`.
pub fn heuristic_accuracies(model: &Model, heuristics: &[Heuristic], trials: usize, seed: u64) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::BadParam("trials must be at least 1".into()));
    }
    model.validate()?;
    let mut hits = vec![0usize; heuristics.len()];
    for t in 0..trials as u64 {
        let g = model.sample(&mut generators::stream(seed, 2 * t))?;
        for (k, hit) in heuristic_hits(&g, heuristics, (seed, 2 * t + 1))?.into_iter().enumerate() {
            hits[k] += hit as usize;
        }
    }
    Ok(hits.into_iter().map(|h| h as f64 / trials as f64).collect())
}

pub fn heuristic_accuracy(model: &Model, h: Heuristic, trials: usize, seed: u64) -> Result<f64> {
    Ok(heuristic_accuracies(model, &[h], trials, seed)?[0])
}

/// Which approximation is scored against which exact entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// Approximate against exact Laplacian entropy.
    Laplacian,
    /// Approximate against exact normalized-Laplacian entropy.
    Normalized,
}

impl Pairing {
    pub fn approx(self) -> EntropyVariant {
        match self {
            Pairing::Laplacian => EntropyVariant::ApproxL,
            Pairing::Normalized => EntropyVariant::ApproxN,
        }
    }

    pub fn exact(self) -> EntropyVariant {
        match self {
            Pairing::Laplacian => EntropyVariant::ExactL,
            Pairing::Normalized => EntropyVariant::ExactN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictabilityPair {
    pub prd_max: f64,
    pub prd_min: f64,
}

/// Candidate pairs with their approximate and exact increments.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementLists {
    pub candidates: Vec<(usize, usize)>,
    pub approx: Vec<f64>,
    pub exact: Vec<f64>,
}

pub fn increment_lists(g: &Graph, pairing: Pairing) -> Result<IncrementLists> {
    let candidates = g.complement_edges();
    let quad = QuadState::new(g);
    let exact = edge_increments(g, &quad, pairing.exact(), &candidates)?;
    let approx = edge_increments(g, &quad, pairing.approx(), &candidates)?;
    Ok(IncrementLists {
        candidates,
        approx,
        exact,
    })
}

/// How the approximation's choice is made when several candidates share its optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// The tied candidate whose exact increment is most favorable.
    #[default]
    ExactFavorable,
    /// Uniform among the tied candidates, from the seeded stream.
    Uniform,
}

impl IncrementLists {
    /// Index chosen by the approximation for `obj`.
    pub fn approx_choice<R: Rng + ?Sized>(&self, obj: Objective, tie: TieBreak, rng: &mut R) -> usize {
        let best = match obj {
            Objective::Maximize => self.approx.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Objective::Minimize => self.approx.iter().copied().fold(f64::INFINITY, f64::min),
        };
        let ties = tied_with(&self.approx, best);
        match tie {
            TieBreak::Uniform => ties[if ties.len() == 1 { 0 } else { rng.random_range(0..ties.len()) }],
            TieBreak::ExactFavorable => {
                let by_exact = |&a: &usize, &b: &usize| self.exact[a].total_cmp(&self.exact[b]);
                match obj {
                    Objective::Maximize => ties.into_iter().max_by(by_exact),
                    Objective::Minimize => ties.into_iter().min_by(by_exact),
                }
                .expect("non-empty candidate list")
            }
        }
    }

    /// `1 - E[i] / max E` for the approximation's pick `i`; degenerate when `max E <= 0`.
    pub fn prd_max_at(&self, i: usize) -> Result<f64> {
        let top = self.exact.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top <= 0.0 {
            return Err(Error::DegenerateRatio(top));
        }
        Ok(1.0 - self.exact[i] / top)
    }

    /// `1 - min E / E[i]` for the approximation's pick `i`; degenerate when `E[i] <= 0`.
    pub fn prd_min_at(&self, i: usize) -> Result<f64> {
        let low = self.exact.iter().copied().fold(f64::INFINITY, f64::min);
        let denom = self.exact[i];
        if denom <= 0.0 {
            return Err(Error::DegenerateRatio(denom));
        }
        Ok(1.0 - low / denom)
    }

    /// `(Prd_M, Prd_m)`, each failing independently on a degenerate ratio.
    /// The maximizing pick is drawn before the minimizing one.
    pub fn errors<R: Rng + ?Sized>(&self, tie: TieBreak, rng: &mut R) -> (Result<f64>, Result<f64>) {
        let i_max = self.approx_choice(Objective::Maximize, tie, rng);
        let i_min = self.approx_choice(Objective::Minimize, tie, rng);
        (self.prd_max_at(i_max), self.prd_min_at(i_min))
    }
}

pub fn predictability_errors(g: &Graph, pairing: Pairing, tie: TieBreak, seed: u64) -> Result<PredictabilityPair> {
    let found = g.n() * g.n().saturating_sub(1) / 2 - g.m();
    if found < 2 {
        return Err(Error::TooFewCandidates { needed: 2, found });
    }
    let (prd_max, prd_min) = increment_lists(g, pairing)?.errors(tie, &mut generators::stream(seed, 0));
    Ok(PredictabilityPair {
        prd_max: prd_max?,
        prd_min: prd_min?,
    })
}

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;
