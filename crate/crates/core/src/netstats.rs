//! Structural statistics, small-worldness and correlation coefficients.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{self, ring_lattice};
use crate::graph::Graph;

/// The three statistics tracked along growth traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatVector {
    /// `None` when no pair of distinct nodes is connected.
    pub avg_path_length: Option<f64>,
    /// `None` when the graph has no edges.
    pub dispersion: Option<f64>,
    pub clustering: f64,
}

impl StatVector {
    pub fn of(g: &Graph) -> Self {
        StatVector {
            avg_path_length: avg_shortest_path_length(g).ok(),
            dispersion: index_of_dispersion(g).ok(),
            clustering: avg_clustering_coefficient(g),
        }
    }
}

/// Mean hop count over unordered pairs that are connected; unreachable pairs are skipped.
pub fn avg_shortest_path_length(g: &Graph) -> Result<f64> {
    let mut total = 0u64;
    let mut pairs = 0u64;
    for s in 0..g.n() {
        for (t, d) in g.bfs_distances(s).into_iter().enumerate() {
            if t > s {
                if let Some(d) = d {
                    total += d as u64;
                    pairs += 1;
                }
            }
        }
    }
    if pairs == 0 {
        return Err(Error::NoPairs);
    }
    Ok(total as f64 / pairs as f64)
}

/// Population variance of the degree sequence over its mean.
pub fn index_of_dispersion(g: &Graph) -> Result<f64> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let degs = g.degrees();
    let n = degs.len() as f64;
    let mean = degs.iter().sum::<usize>() as f64 / n;
    let var = degs.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n;
    Ok(var / mean)
}

fn triangles_at(g: &Graph, v: usize) -> usize {
    let nb = g.neighbors(v);
    let mut t = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if g.has_edge(a, b) {
                t += 1;
            }
        }
    }
    t
}

pub fn local_clustering(g: &Graph, v: usize) -> f64 {
    let d = g.degree(v);
    if d < 2 {
        return 0.0;
    }
    2.0 * triangles_at(g, v) as f64 / (d * (d - 1)) as f64
}

/// Mean local clustering over all nodes; nodes of degree < 2 count as 0.
pub fn avg_clustering_coefficient(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    (0..g.n()).map(|v| local_clustering(g, v)).sum::<f64>() / g.n() as f64
}

/// Reference construction for the small-worldness measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaConfig {
    /// Randomized references averaged for the path-length baseline.
    pub references: usize,
    /// Accepted double-edge swaps per edge when randomizing.
    pub swaps_per_edge: usize,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        OmegaConfig {
            references: 20,
            swaps_per_edge: 10,
        }
    }
}

/// Degree-preserving randomization by `swaps` accepted double-edge swaps.
///
/// Gives up after `100 * swaps` attempts, which only happens on graphs with
/// almost no valid swap (stars, near-complete graphs).
pub fn degree_preserving_randomize<R: Rng + ?Sized>(g: &Graph, swaps: usize, rng: &mut R) -> Graph {
    let mut h = g.clone();
    let mut edges = h.edge_vec();
    if edges.len() < 2 {
        return h;
    }
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < swaps && attempts < 100 * swaps {
        attempts += 1;
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        // (a,b),(c,d) -> (a,d),(c,b)
        if a == d || c == b || h.has_edge(a, d) || h.has_edge(c, b) {
            continue;
        }
        h.remove_edge(a, b).unwrap();
        h.remove_edge(c, d).unwrap();
        h.add_edge(a, d).unwrap();
        h.add_edge(c, b).unwrap();
        edges[i] = (a.min(d), a.max(d));
        edges[j] = (c.min(b), c.max(b));
        accepted += 1;
    }
    h
}

/// Even ring-lattice degree closest to the graph's mean degree.
pub fn lattice_reference_k(g: &Graph) -> usize {
    let n = g.n();
    let mean = 2.0 * g.m() as f64 / n as f64;
    let mut k = 2 * ((mean / 2.0).round() as usize);
    k = k.max(2);
    let max_even = (n.saturating_sub(1)) & !1;
    k.min(max_even)
}

/// `ω = L_rand / L - C / C_latt`.
pub fn small_worldness_omega(g: &Graph, cfg: &OmegaConfig, seed: u64) -> Result<f64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if cfg.references == 0 {
        return Err(Error::BadParam("need at least one reference network".into()));
    }
    let path_len = avg_shortest_path_length(g)?;
    let swaps = cfg.swaps_per_edge * g.m();
    let mut rand_total = 0.0;
    for r in 0..cfg.references {
        let mut rng = generators::stream(seed, r as u64);
        let reference = degree_preserving_randomize(g, swaps, &mut rng);
        rand_total += avg_shortest_path_length(&reference)?;
    }
    let rand_len = rand_total / cfg.references as f64;
    let lattice = ring_lattice(g.n(), lattice_reference_k(g));
    let c_latt = avg_clustering_coefficient(&lattice);
    if c_latt == 0.0 {
        return Err(Error::BadParam("lattice reference has zero clustering".into()));
    }
    Ok(rand_len / path_len - avg_clustering_coefficient(g) / c_latt)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::BadParam("need at least two observations".into()));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // Relative guard: constant series leave only rounding residue.
    let scale = |m: f64| (m.abs().max(1e-300) * 1e-13).powi(2) * xs.len() as f64;
    if sxx <= scale(mx) || syy <= scale(my) {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks, ties sharing their mean rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}
