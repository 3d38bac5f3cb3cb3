//! Quadratic entropy approximations `1 - tr(ρ²)` and their single-edge deltas.
//!
//! Laplacian form: `1 - 1/(2m) - Σ_v d_v² / (4m²)`.
//! Normalized form: `1 - 1/n - (2/n²) Σ_{u<v, (u,v)∈E} 1/(d_u d_v)`; the factor 2
//! counts each undirected edge in both orientations, which is what makes the
//! closed form agree with `1 - tr(ρ(𝓛)²)`.
//!
//! The closed-form deltas are exact differences of these expressions, so for
//! every absent pair `delta(g, x, y) == approx(g + (x, y)) - approx(g)` up to
//! rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DensityKind, Graph};

/// How the edge sum in the normalized form is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeSumConvention {
    /// Each undirected edge counted twice; equals `1 - tr(ρ²)`.
    #[default]
    OrderedPairs,
    /// Each undirected edge counted once, as the formula is often printed.
    UnorderedPairs,
}

impl EdgeSumConvention {
    fn factor(self) -> f64 {
        match self {
            EdgeSumConvention::OrderedPairs => 2.0,
            EdgeSumConvention::UnorderedPairs => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadEntropyReport {
    pub value: f64,
    pub kind: DensityKind,
    pub convention: EdgeSumConvention,
}

pub fn report(g: &Graph, kind: DensityKind) -> Result<QuadEntropyReport> {
    let value = match kind {
        DensityKind::LaplacianScaled => approx_entropy_laplacian(g)?,
        DensityKind::NormalizedScaled => approx_entropy_normalized(g)?,
    };
    Ok(QuadEntropyReport {
        value,
        kind,
        convention: EdgeSumConvention::OrderedPairs,
    })
}

fn laplacian_form(m: usize, sum_sq_deg: f64) -> f64 {
    let m = m as f64;
    1.0 - 1.0 / (2.0 * m) - sum_sq_deg / (4.0 * m * m)
}

fn normalized_form(n: usize, inv_deg_product_sum: f64, convention: EdgeSumConvention) -> f64 {
    let n = n as f64;
    1.0 - 1.0 / n - convention.factor() * inv_deg_product_sum / (n * n)
}

fn sum_sq_degrees(g: &Graph) -> f64 {
    g.degrees().iter().map(|&d| (d * d) as f64).sum()
}

fn inv_degree_product_sum(g: &Graph) -> f64 {
    g.edges()
        .map(|(u, v)| 1.0 / (g.degree(u) as f64 * g.degree(v) as f64))
        .sum()
}

pub fn approx_entropy_laplacian(g: &Graph) -> Result<f64> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(laplacian_form(g.m(), sum_sq_degrees(g)))
}

pub fn approx_entropy_normalized(g: &Graph) -> Result<f64> {
    approx_entropy_normalized_with(g, EdgeSumConvention::OrderedPairs)
}

pub fn approx_entropy_normalized_with(g: &Graph, convention: EdgeSumConvention) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    if let Some(u) = g.isolated_node() {
        return Err(Error::IsolatedNode(u));
    }
    Ok(normalized_form(g.n(), inv_degree_product_sum(g), convention))
}

fn check_absent(g: &Graph, x: usize, y: usize) -> Result<()> {
    let n = g.n();
    for i in [x, y] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    if x == y {
        return Err(Error::SelfLoop(x));
    }
    if g.has_edge(x, y) {
        return Err(Error::EdgeExists(x.min(y), x.max(y)));
    }
    Ok(())
}

/// Laplacian delta from `m`, the current approximation and the endpoint degrees.
fn laplacian_delta(m: usize, approx: f64, dx: usize, dy: usize) -> f64 {
    let m = m as f64;
    let mp1_sq = (m + 1.0) * (m + 1.0);
    -((dx + dy) as f64) / (2.0 * mp1_sq) + ((2.0 * m + 1.0) * (1.0 - approx) - 1.0) / mp1_sq
}

/// Change in the Laplacian approximation when `(x, y)` is added.
pub fn delta_approx_laplacian(g: &Graph, x: usize, y: usize) -> Result<f64> {
    check_absent(g, x, y)?;
    let approx = approx_entropy_laplacian(g)?;
    Ok(laplacian_delta(g.m(), approx, g.degree(x), g.degree(y)))
}

/// The last line of the Laplacian delta as commonly printed, with the sign
/// slip between its first and second term. Kept for regression tests only:
/// it does not agree with the direct difference.
pub fn delta_approx_laplacian_misprinted(g: &Graph, x: usize, y: usize) -> Result<f64> {
    check_absent(g, x, y)?;
    let approx = approx_entropy_laplacian(g)?;
    let m = g.m() as f64;
    let mp1_sq = (m + 1.0) * (m + 1.0);
    let (dx, dy) = (g.degree(x) as f64, g.degree(y) as f64);
    Ok(-(dx + dy) / (2.0 * mp1_sq) - (1.0 + (2.0 * m + 1.0) * (1.0 - approx)) / mp1_sq)
}

/// `Σ_{v ∈ N(u)} 1/d_v`.
fn neighbor_inv_degree_sum(g: &Graph, u: usize) -> f64 {
    g.neighbors(u).iter().map(|&v| 1.0 / g.degree(v) as f64).sum()
}

fn normalized_delta(n: usize, dx: usize, dy: usize, sx: f64, sy: f64, convention: EdgeSumConvention) -> f64 {
    let (dx, dy) = (dx as f64, dy as f64);
    let n = n as f64;
    // 1/((d+1) H) with H = d / s, the harmonic mean of neighbour degrees.
    let term_x = sx / (dx * (dx + 1.0));
    let term_y = sy / (dy * (dy + 1.0));
    convention.factor() / (n * n) * (term_x + term_y - 1.0 / ((dx + 1.0) * (dy + 1.0)))
}

/// Change in the normalized approximation when `(x, y)` is added.
pub fn delta_approx_normalized(g: &Graph, x: usize, y: usize) -> Result<f64> {
    delta_approx_normalized_with(g, x, y, EdgeSumConvention::OrderedPairs)
}

pub fn delta_approx_normalized_with(g: &Graph, x: usize, y: usize, convention: EdgeSumConvention) -> Result<f64> {
    check_absent(g, x, y)?;
    for u in [x, y] {
        if g.degree(u) == 0 {
            return Err(Error::IsolatedEndpoint(u));
        }
    }
    Ok(normalized_delta(
        g.n(),
        g.degree(x),
        g.degree(y),
        neighbor_inv_degree_sum(g, x),
        neighbor_inv_degree_sum(g, y),
        convention,
    ))
}

/// Degree statistics behind both approximations, kept current under edge insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadState {
    n: usize,
    m: usize,
    degrees: Vec<usize>,
    sum_sq_deg: u64,
    inv_deg_product_sum: f64,
    /// `Σ_{v ∈ N(u)} 1/d_v` per node.
    neighbor_inv: Vec<f64>,
}

impl QuadState {
    pub fn new(g: &Graph) -> Self {
        let degrees = g.degrees();
        QuadState {
            n: g.n(),
            m: g.m(),
            sum_sq_deg: degrees.iter().map(|&d| (d * d) as u64).sum(),
            inv_deg_product_sum: inv_degree_product_sum(g),
            neighbor_inv: (0..g.n()).map(|u| neighbor_inv_degree_sum(g, u)).collect(),
            degrees,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sum_sq_degrees(&self) -> u64 {
        self.sum_sq_deg
    }

    pub fn inv_degree_product_sum(&self) -> f64 {
        self.inv_deg_product_sum
    }

    pub fn approx_laplacian(&self) -> Result<f64> {
        if self.m == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        Ok(laplacian_form(self.m, self.sum_sq_deg as f64))
    }

    pub fn approx_normalized(&self) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        if let Some(u) = self.degrees.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedNode(u));
        }
        Ok(normalized_form(self.n, self.inv_deg_product_sum, EdgeSumConvention::OrderedPairs))
    }

    /// Laplacian delta for an absent pair; the caller guarantees absence.
    pub fn delta_laplacian(&self, x: usize, y: usize) -> Result<f64> {
        let approx = self.approx_laplacian()?;
        Ok(laplacian_delta(self.m, approx, self.degrees[x], self.degrees[y]))
    }

    /// Normalized delta for an absent pair; the caller guarantees absence.
    pub fn delta_normalized(&self, x: usize, y: usize) -> Result<f64> {
        for u in [x, y] {
            if self.degrees[u] == 0 {
                return Err(Error::IsolatedEndpoint(u));
            }
        }
        Ok(normalized_delta(
            self.n,
            self.degrees[x],
            self.degrees[y],
            self.neighbor_inv[x],
            self.neighbor_inv[y],
            EdgeSumConvention::OrderedPairs,
        ))
    }

    /// Applies the insertion of `(x, y)`. `g` is the graph *after* insertion;
    /// only the neighbourhoods of `x` and `y` are read.
    pub fn update(&mut self, g: &Graph, x: usize, y: usize) -> Result<()> {
        if g.degree(x) != self.degrees[x] + 1 || g.degree(y) != self.degrees[y] + 1 || !g.has_edge(x, y) {
            return Err(Error::InconsistentState(format!("graph does not reflect insertion of ({x}, {y})")));
        }
        let (dx, dy) = (self.degrees[x] as f64, self.degrees[y] as f64);
        // Inverse-degree products change on every edge at x or y.
        let mut s = self.inv_deg_product_sum;
        if dx > 0.0 {
            s += self.neighbor_inv[x] * (1.0 / (dx + 1.0) - 1.0 / dx);
        }
        if dy > 0.0 {
            s += self.neighbor_inv[y] * (1.0 / (dy + 1.0) - 1.0 / dy);
        }
        s += 1.0 / ((dx + 1.0) * (dy + 1.0));
        self.inv_deg_product_sum = s;

        self.sum_sq_deg += 2 * (self.degrees[x] + self.degrees[y]) as u64 + 2;
        self.degrees[x] += 1;
        self.degrees[y] += 1;
        self.m += 1;

        // Neighbours of x (resp. y) see 1/d_x change; x and y themselves are
        // recomputed since their neighbourhoods changed.
        for (u, old, new) in [(x, dx, dx + 1.0), (y, dy, dy + 1.0)] {
            let shift = if old > 0.0 { 1.0 / new - 1.0 / old } else { 0.0 };
            for &v in g.neighbors(u) {
                if v != x && v != y {
                    self.neighbor_inv[v] += shift;
                }
            }
        }
        self.neighbor_inv[x] = neighbor_inv_degree_sum(g, x);
        self.neighbor_inv[y] = neighbor_inv_degree_sum(g, y);
        debug_assert!(self.consistent_with(g));
        Ok(())
    }

    /// Compares against a from-scratch recomputation.
    pub fn consistent_with(&self, g: &Graph) -> bool {
        let fresh = QuadState::new(g);
        self.n == fresh.n
            && self.m == fresh.m
            && self.degrees == fresh.degrees
            && self.sum_sq_deg == fresh.sum_sq_deg
            && (self.inv_deg_product_sum - fresh.inv_deg_product_sum).abs() < 1e-9
            && self
                .neighbor_inv
                .iter()
                .zip(&fresh.neighbor_inv)
                .all(|(a, b)| (a - b).abs() < 1e-9)
    }
}

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;
