//! Seeded random graph models and a few fixed graphs.
//!
//! All randomness flows through ChaCha8. A trial's stream is derived from
//! `(master_seed, trial_index)` with [`stream`], so trials can be replayed
//! individually and never share state.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type StreamRng = ChaCha8Rng;

/// Independent stream `index` under `master_seed`.
pub fn stream(master_seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Random graph model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Er { n: usize, p: f64 },
    Ws { n: usize, k: usize, p: f64 },
    Ba { n: usize, m: usize },
}

impl Model {
    pub fn n(&self) -> usize {
        match *self {
            Model::Er { n, .. } | Model::Ws { n, .. } | Model::Ba { n, .. } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::BadParam(format!("probability {p} outside [0, 1]")))
            }
        };
        match *self {
            Model::Er { p, .. } => prob(p),
            Model::Ws { n, k, p } => {
                prob(p)?;
                if k % 2 != 0 {
                    return Err(Error::BadParam(format!("ring neighbour count k = {k} must be even")));
                }
                if k < 2 || k >= n {
                    return Err(Error::BadParam(format!("need 2 <= k < n, got k = {k}, n = {n}")));
                }
                Ok(())
            }
            Model::Ba { n, m } => {
                if m < 1 || m >= n {
                    return Err(Error::BadParam(format!("need 1 <= m < n, got m = {m}, n = {n}")));
                }
                Ok(())
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        self.validate()?;
        Ok(match *self {
            Model::Er { n, p } => erdos_renyi_with(n, p, rng),
            Model::Ws { n, k, p } => watts_strogatz_with(n, k, p, rng),
            Model::Ba { n, m } => barabasi_albert_with(n, m, rng),
        })
    }

    /// Same model with the swept parameter replaced (`p` for ER, `k` for WS, `m` for BA).
    pub fn with_sweep_value(&self, value: f64) -> Result<Model> {
        let as_count = |v: f64| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::BadParam(format!("sweep value {v} is not a count")))
            }
        };
        let m = match *self {
            Model::Er { n, .. } => Model::Er { n, p: value },
            Model::Ws { n, p, .. } => Model::Ws { n, k: as_count(value)?, p },
            Model::Ba { n, .. } => Model::Ba { n, m: as_count(value)? },
        };
        m.validate()?;
        Ok(m)
    }

    pub fn label(&self) -> String {
        match *self {
            Model::Er { n, p } => format!("er(n={n},p={p})"),
            Model::Ws { n, k, p } => format!("ws(n={n},k={k},p={p})"),
            Model::Ba { n, m } => format!("ba(n={n},m={m})"),
        }
    }
}

/// A model together with the seed that fixes its output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: Model,
    pub seed: u64,
}

impl ModelParams {
    pub fn generate(&self) -> Result<Graph> {
        self.model.sample(&mut ChaCha8Rng::seed_from_u64(self.seed))
    }
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    Model::Er { n, p }.sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    Model::Ws { n, k, p }.sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    Model::Ba { n, m }.sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn erdos_renyi_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            // One draw per pair, even for p in {0, 1}, keeps streams aligned across p.
            if rng.random::<f64>() < p {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Ring where each node links to its `k/2` nearest neighbours on each side.
pub fn ring_lattice(n: usize, k: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn watts_strogatz_with<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = ring_lattice(n, k);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.random::<f64>() >= p {
                continue;
            }
            if g.degree(u) >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !g.has_edge(u, w) {
                    break w;
                }
            };
            g.remove_edge(u, v).unwrap();
            g.add_edge(u, w).unwrap();
        }
    }
    g
}

fn barabasi_albert_with<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Graph {
    let mut g = complete_graph(m + 1);
    // Each node appears once per incident edge end, so uniform draws are degree-proportional.
    let mut ends: Vec<usize> = g.edges().flat_map(|(u, v)| [u, v]).collect();
    let mut targets = Vec::with_capacity(m);
    for new in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.random_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        let id = g.add_node();
        debug_assert_eq!(id, new);
        for &t in &targets {
            g.add_edge(new, t).unwrap();
            ends.push(new);
            ends.push(t);
        }
    }
    g
}

pub fn path_graph(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edge_list(n, &pairs).unwrap()
}

pub fn cycle_graph(n: usize) -> Graph {
    ring_lattice(n, 2)
}

pub fn complete_graph(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    Graph::from_edge_list(n, &pairs).unwrap()
}

pub fn star_graph(leaves: usize) -> Graph {
    let pairs: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edge_list(leaves + 1, &pairs).unwrap()
}

/// Seed graph for node growth: a triangle.
pub fn clique3_seed() -> Graph {
    complete_graph(3)
}
