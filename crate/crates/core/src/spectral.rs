//! Eigenvalues of density matrices and exact von Neumann entropies.
//!
//! Dense symmetric eigenvalues come from nalgebra. [`LaplacianEdgeUpdate`]
//! evaluates the exact Laplacian entropy of `G + (x, y)` for many candidate
//! edges from a single eigendecomposition of `L(G)`: adding an edge adds the
//! rank-one term `b bᵀ` with `b = e_x - e_y`, so the new spectrum is the set
//! of roots of a secular equation. [`NormalizedEdgeUpdate`] does the same for
//! `𝓛(G)` via three such updates (the degree rescaling is rank two).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{DensityKind, Graph};

/// Symmetry tolerance on input matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Negative eigenvalues down to this size are rounding noise.
pub const CLAMP_TOL: f64 = 1e-9;
/// Allowed deviation of a density spectrum's sum from one.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Eigenvalues sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Set when the spectrum belongs to a graph density matrix.
    pub kind: Option<DensityKind>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Zeroes rounding negatives in `[-CLAMP_TOL, 0)` and rescales to sum one.
    pub fn clamped(&self) -> Spectrum {
        let mut values: Vec<f64> = self
            .values
            .iter()
            .map(|&x| if (-CLAMP_TOL..0.0).contains(&x) { 0.0 } else { x })
            .collect();
        let s: f64 = values.iter().sum();
        if s > 0.0 {
            values.iter_mut().for_each(|x| *x /= s);
        }
        Spectrum {
            values,
            kind: self.kind,
        }
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::BadParam(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = m[(i, j)];
            let b = m[(j, i)];
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::NotSymmetric(f64::NAN));
            }
            worst = worst.max((a - b).abs());
        }
    }
    if worst > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(())
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Spectrum> {
    check_symmetric(m)?;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotSymmetric(f64::NAN));
    }
    if m.nrows() == 0 {
        return Ok(Spectrum { values: vec![], kind: None });
    }
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence);
    }
    values.sort_by(f64::total_cmp);
    Ok(Spectrum { values, kind: None })
}

/// Eigenvalues and eigenvectors, ascending, eigenvectors as columns.
fn symmetric_eigen(m: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_symmetric(&m)?;
    if m.nrows() == 0 {
        return Ok((vec![], m));
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Spectrum of the graph's density matrix.
pub fn density_spectrum(g: &Graph, kind: DensityKind) -> Result<Spectrum> {
    let rho = g.density_matrix(kind)?;
    let mut s = symmetric_eigenvalues(&rho)?;
    s.kind = Some(kind);
    Ok(s)
}

/// `-Σ λ ln λ` in nats, with `0 ln 0 = 0`.
pub fn entropy_of_spectrum(s: &Spectrum) -> Result<f64> {
    let sum = s.sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL || s.values.iter().any(|x| !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(x)) {
        return Err(Error::NotNormalized(sum));
    }
    Ok(s.values.iter().map(|&x| if x > 0.0 { -x * x.ln() } else { 0.0 }).sum())
}

/// Exact von Neumann entropy of `ρ(L)` or `ρ(𝓛)`.
pub fn von_neumann_entropy(g: &Graph, kind: DensityKind) -> Result<f64> {
    let s = density_spectrum(g, kind)?;
    entropy_of_spectrum(&s.clamped())
}

/// Entropy of `L / scale` given raw Laplacian eigenvalues.
fn scaled_entropy(raw: impl Iterator<Item = f64> + Clone, scale: f64) -> f64 {
    let clip = |x: f64| if x < 0.0 { 0.0 } else { x / scale };
    let s: f64 = raw.clone().map(clip).sum();
    raw.map(|x| clip(x) / s).map(|x| if x > 0.0 { -x * x.ln() } else { 0.0 }).sum()
}

/// One eigenpair of `diag(d) + ρ z zᵀ`, reduced to what the callers need:
/// the eigenvalue and the projections of `z` and of a tracked vector `t`
/// onto the (unit) eigenvector.
#[derive(Debug, Clone, Copy)]
struct Eigenpair {
    value: f64,
    z: f64,
    t: f64,
}

/// Reusable buffers for [`rank_one_update`].
#[derive(Debug, Default)]
struct Scratch {
    roots: Vec<(f64, f64)>,
    poles: Vec<f64>,
    weights: Vec<f64>,
    z: Vec<f64>,
    t: Vec<f64>,
}

/// Eigen-update of `diag(d) + ρ z zᵀ` for ascending `d` and `ρ = ±1`;
/// `t` may be empty when nothing is tracked. Without `vectors` only the
/// eigenvalues are filled in (projections left at zero). Output order is
/// unspecified.
///
/// Equal (within tolerance) entries of `d` are merged first: inside an
/// eigenspace the update only sees the projection of `z`, so all but one
/// direction keep the old eigenvalue exactly. The tracked vector keeps one
/// extra direction per merged group, orthogonal to `z`.
fn rank_one_update(
    d: &[f64],
    z: &[f64],
    t: &[f64],
    rho: f64,
    vectors: bool,
    s: &mut Scratch,
    out: &mut Vec<Eigenpair>,
) {
    let n = d.len();
    let neg = rho < 0.0;
    // Work on ascending poles of ρ·d.
    let at = |v: &[f64], i: usize| if v.is_empty() { 0.0 } else { v[if neg { n - 1 - i } else { i }] };
    let sign = if neg { -1.0 } else { 1.0 };
    let pole = |i: usize| sign * d[if neg { n - 1 - i } else { i }];
    let total: f64 = z.iter().map(|v| v * v).sum();
    let top = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let group_tol = 1e-12 * top.max(1.0);
    let deflate = (8.0 * f64::EPSILON * top.max(total)).powi(2);
    out.clear();
    s.poles.clear();
    s.weights.clear();
    s.z.clear();
    s.t.clear();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pole(j) - pole(i) <= group_tol {
            j += 1;
        }
        let (mut w, mut zt, mut tt) = (0.0, 0.0, 0.0);
        for k in i..j {
            let (zk, tk) = (at(z, k), at(t, k));
            w += zk * zk;
            zt += zk * tk;
            tt += tk * tk;
        }
        let value = sign * pole(i);
        let kept = if w <= deflate {
            out.push(Eigenpair { value, z: 0.0, t: tt.sqrt() });
            j - i - 1
        } else {
            let norm = w.sqrt();
            let t_par = zt / norm;
            s.poles.push(pole(i));
            s.weights.push(w);
            s.z.push(norm);
            s.t.push(t_par);
            if j - i > 1 {
                // Residual of t off z, summed directly to avoid cancellation.
                let perp: f64 = (i..j).map(|k| (at(t, k) - t_par * at(z, k) / norm).powi(2)).sum();
                out.push(Eigenpair {
                    value,
                    z: 0.0,
                    t: perp.sqrt(),
                });
                j - i - 2
            } else {
                0
            }
        };
        out.extend(std::iter::repeat_n(Eigenpair { value, z: 0.0, t: 0.0 }, kept));
        i = j;
    }
    let total: f64 = s.weights.iter().sum();
    let r = s.poles.len();
    s.roots.clear();
    s.roots.extend((0..r).map(|k| secular_root(&s.poles, &s.weights, k, total)));
    if !vectors {
        out.extend(s.roots.iter().map(|&(origin, tau)| Eigenpair {
            value: sign * (origin + tau),
            z: 0.0,
            t: 0.0,
        }));
        return;
    }
    // λ_k - d_i, exact in the shifted coordinates of root k.
    let gap = |k: usize, i: usize, s: &Scratch| (s.roots[k].0 - s.poles[i]) + s.roots[k].1;
    // Rebuild z from the computed roots (Löwner), so that they are the exact
    // eigenvalues of the merged problem and the eigenvectors stay orthogonal.
    for i in 0..r {
        let mut w2 = gap(r - 1, i, s);
        for k in 0..i {
            w2 *= gap(k, i, s) / (s.poles[k] - s.poles[i]);
        }
        for k in i..r - 1 {
            w2 *= gap(k, i, s) / (s.poles[k + 1] - s.poles[i]);
        }
        s.weights[i] = w2.max(0.0);
        s.z[i] = w2.max(0.0).sqrt();
    }
    for k in 0..r {
        // Eigenvector ∝ (P - λ)⁻¹ z.
        let (mut norm2, mut zz, mut zt) = (0.0, 0.0, 0.0);
        for i in 0..r {
            let q = -1.0 / gap(k, i, s);
            norm2 += s.weights[i] * q * q;
            zz += s.weights[i] * q;
            zt += s.z[i] * s.t[i] * q;
        }
        let inv = 1.0 / norm2.sqrt();
        let (origin, tau) = s.roots[k];
        out.push(Eigenpair {
            value: sign * (origin + tau),
            z: zz * inv,
            t: zt * inv,
        });
    }
}

/// Root of `1 + Σ w_j / (d_j - t)` above pole `k`: below the next pole, or
/// below `d_k + Σ w` for the last one. Returned as `(origin, τ)` with the
/// root at `origin + τ`, `origin` being whichever interval end the root is
/// closer to, so roots hugging a pole keep full absolute precision.
///
/// Each iteration fits one pole on either side plus a constant (matching
/// value and slope of each side's partial sum) and steps to that model's
/// root, falling back to bisection when the step leaves the bracket.
fn secular_root(poles: &[f64], weights: &[f64], k: usize, total: f64) -> (f64, f64) {
    let lo = poles[k];
    let upper_pole = k + 1 < poles.len();
    let hi = if upper_pole { poles[k + 1] } else { lo + total };
    if hi - lo <= 0.0 {
        return (lo, 0.0);
    }
    // Partial sum and slope over a run of poles.
    let part = |poles: &[f64], weights: &[f64], origin: f64, tau: f64| {
        let (mut f, mut df) = (0.0, 0.0);
        for (d, w) in poles.iter().zip(weights) {
            let r = 1.0 / ((d - origin) - tau);
            let wr = w * r;
            f += wr;
            df += wr * r;
        }
        (f, df)
    };
    // ψ over poles at or below lo, φ over poles above.
    let sums = |origin: f64, tau: f64| {
        let (psi, dpsi) = part(&poles[..=k], &weights[..=k], origin, tau);
        let (phi, dphi) = part(&poles[k + 1..], &weights[k + 1..], origin, tau);
        (psi, dpsi, phi, dphi)
    };
    let mid = 0.5 * (lo + hi);
    let (mut psi, mut dpsi, mut phi, mut dphi) = sums(mid, 0.0);
    let mut v = 1.0 + psi + phi;
    let (origin, mut a, mut b) = if v >= 0.0 { (lo, 0.0, mid - lo) } else { (hi, mid - hi, 0.0) };
    let (dl, dh) = (lo - origin, hi - origin);
    let mut tau = mid - origin;
    for _ in 0..100 {
        if v == 0.0 {
            break;
        }
        if v > 0.0 {
            b = tau;
        } else {
            a = tau;
        }
        let (gl, gh) = (dl - tau, dh - tau);
        let q = gl * gl * dpsi;
        let eta = if upper_pole {
            let s = gh * gh * dphi;
            let c = 1.0 + (psi - q / gl) + (phi - s / gh);
            // c η² - (c (gl + gh) + q + s) η + gl gh v = 0
            let bq = -(c * (gl + gh) + q + s);
            let c0 = gl * gh * v;
            let disc = bq * bq - 4.0 * c * c0;
            if disc < 0.0 {
                f64::NAN
            } else {
                let qq = -0.5 * (bq + bq.signum() * disc.sqrt());
                let e1 = if c != 0.0 { qq / c } else { f64::NAN };
                let e2 = c0 / qq;
                let inside = |e: f64| tau + e > a && tau + e < b;
                match (inside(e1), inside(e2)) {
                    (true, true) if e1.abs() < e2.abs() => e1,
                    (true, false) => e1,
                    (_, true) => e2,
                    _ => f64::NAN,
                }
            }
        } else {
            dl + q / (1.0 + psi - q / gl + phi) - tau
        };
        // A converged step can fall below one ulp of τ; accept it before the
        // bracket test would mistake it for an escape.
        if eta.abs() <= 4.0 * f64::EPSILON * tau.abs() {
            return (origin, tau + eta);
        }
        let step = tau + eta;
        let next = if step > a && step < b { step } else { 0.5 * (a + b) };
        if b - a <= 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE) {
            return (origin, next);
        }
        tau = next;
        (psi, dpsi, phi, dphi) = sums(origin, tau);
        v = 1.0 + psi + phi;
        // Stop once the residual is at the level of its own rounding error.
        if v.abs() <= 8.0 * f64::EPSILON * (1.0 + psi.abs() + phi.abs()) {
            return (origin, tau);
        }
    }
    (origin, tau)
}

/// Exact Laplacian entropy of `G + (x, y)` for arbitrary absent pairs,
/// reusing one eigendecomposition of `L(G)`.
#[derive(Debug, Clone)]
pub struct LaplacianEdgeUpdate {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    m: usize,
    base_entropy: Option<f64>,
}

impl LaplacianEdgeUpdate {
    pub fn new(g: &Graph) -> Result<Self> {
        let (values, vectors) = symmetric_eigen(g.laplacian())?;
        let m = g.m();
        let base_entropy = (m > 0).then(|| scaled_entropy(values.iter().copied(), 2.0 * m as f64));
        Ok(LaplacianEdgeUpdate {
            values,
            vectors,
            m,
            base_entropy,
        })
    }

    /// Exact Laplacian entropy of the base graph (`None` when it has no edges).
    pub fn base_entropy(&self) -> Option<f64> {
        self.base_entropy
    }

    fn update(&self, x: usize, y: usize, s: &mut Scratch, z: &mut Vec<f64>, out: &mut Vec<Eigenpair>) {
        z.clear();
        z.extend((0..self.values.len()).map(|i| self.vectors[(x, i)] - self.vectors[(y, i)]));
        rank_one_update(&self.values, z, &[], 1.0, false, s, out);
    }

    /// Laplacian eigenvalues of `G + (x, y)`, unsorted.
    pub fn updated_eigenvalues(&self, x: usize, y: usize) -> Vec<f64> {
        let mut out = Vec::new();
        self.update(x, y, &mut Scratch::default(), &mut Vec::new(), &mut out);
        out.iter().map(|e| e.value).collect()
    }

    /// Exact Laplacian entropy after adding `(x, y)`.
    pub fn entropy_with_edge(&self, x: usize, y: usize) -> f64 {
        self.entropies_with_edges(&[(x, y)])[0]
    }

    /// [`Self::entropy_with_edge`] over many pairs, sharing work buffers.
    pub fn entropies_with_edges(&self, pairs: &[(usize, usize)]) -> Vec<f64> {
        let (mut s, mut z, mut out) = (Scratch::default(), Vec::new(), Vec::new());
        let scale = 2.0 * (self.m + 1) as f64;
        pairs
            .iter()
            .map(|&(x, y)| {
                self.update(x, y, &mut s, &mut z, &mut out);
                scaled_entropy(out.iter().map(|e| e.value), scale)
            })
            .collect()
    }
}

/// Exact normalized-Laplacian entropy of `G + (x, y)` from one
/// eigendecomposition of `𝓛(G)`.
///
/// With `V = D^{-1/2} Q` the pencil `(L, D)` is diagonal, and the edge adds
/// stiffness `b bᵀ` and mass `e_x e_xᵀ + e_y e_yᵀ`. Writing `a, c` for the
/// half-difference and half-sum of rows `x, y` of `V` (scaled by `√2`), the
/// new pencil is `(Λ + 2 a aᵀ, I + a aᵀ + c cᵀ)`. That is solved as one
/// rank-one update (the stiffness) followed by two rank-one downdates (each
/// mass term, via `eig(A, I + u uᵀ) = eig(Λ - h hᵀ)` with
/// `h = Λ^{1/2} u / √(1 + |u|²)` in `A`'s eigenbasis; zero eigenvalues
/// decouple).
#[derive(Debug, Clone)]
pub struct NormalizedEdgeUpdate {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    inv_sqrt_degree: Vec<f64>,
    base_entropy: f64,
}

#[derive(Debug, Default)]
struct NormalizedBuffers {
    s: Scratch,
    a: Vec<f64>,
    c: Vec<f64>,
    stage: Vec<Eigenpair>,
    d: Vec<f64>,
    g: Vec<f64>,
    t: Vec<f64>,
    out: Vec<Eigenpair>,
}

impl NormalizedEdgeUpdate {
    /// Fails with `IsolatedNode` like the normalized Laplacian itself.
    pub fn new(g: &Graph) -> Result<Self> {
        let (values, vectors) = symmetric_eigen(g.normalized_laplacian()?)?;
        let base_entropy = scaled_entropy(values.iter().copied(), values.len() as f64);
        Ok(NormalizedEdgeUpdate {
            values,
            vectors,
            inv_sqrt_degree: (0..g.n()).map(|u| 1.0 / (g.degree(u) as f64).sqrt()).collect(),
            base_entropy,
        })
    }

    /// Exact normalized-Laplacian entropy of the base graph.
    pub fn base_entropy(&self) -> f64 {
        self.base_entropy
    }

    fn update(&self, x: usize, y: usize, b: &mut NormalizedBuffers) {
        let n = self.values.len();
        let (sx, sy) = (self.inv_sqrt_degree[x], self.inv_sqrt_degree[y]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        b.a.clear();
        b.c.clear();
        for i in 0..n {
            let (vx, vy) = (self.vectors[(x, i)] * sx, self.vectors[(y, i)] * sy);
            b.a.push(h * (vx - vy));
            b.c.push(h * (vx + vy));
        }
        let aa: f64 = b.a.iter().map(|v| v * v).sum();
        let cc: f64 = b.c.iter().map(|v| v * v).sum();
        let ac: f64 = b.a.iter().zip(&b.c).map(|(u, v)| u * v).sum();

        // Stiffness: Λ + (√2 a)(√2 a)ᵀ, tracking c.
        b.g.clear();
        b.g.extend(b.a.iter().map(|v| std::f64::consts::SQRT_2 * v));
        rank_one_update(&self.values, &b.g, &b.c, 1.0, true, &mut b.s, &mut b.stage);
        b.stage.sort_by(|p, q| p.value.total_cmp(&q.value));

        // Mass along a, tracking Λ^{1/2} (I + a aᵀ)⁻¹ c.
        let k = 1.0 / (1.0 + aa);
        b.d.clear();
        b.g.clear();
        b.t.clear();
        for e in &b.stage {
            let root = e.value.max(0.0).sqrt();
            let a_hat = e.z * h;
            b.d.push(e.value.max(0.0));
            b.g.push(root * a_hat * k.sqrt());
            b.t.push(root * (e.t - a_hat * ac * k));
        }
        rank_one_update(&b.d, &b.g, &b.t, -1.0, true, &mut b.s, &mut b.out);
        b.out.sort_by(|p, q| p.value.total_cmp(&q.value));

        // Mass along c, in the basis left by the previous step.
        let kappa = cc - ac * ac * k;
        let scale = 1.0 / (1.0 + kappa).sqrt();
        b.d.clear();
        b.g.clear();
        for e in &b.out {
            b.d.push(e.value.max(0.0));
            b.g.push(e.t * scale);
        }
        rank_one_update(&b.d, &b.g, &[], -1.0, false, &mut b.s, &mut b.out);
    }

    /// Normalized-Laplacian eigenvalues of `G + (x, y)`, unsorted.
    pub fn updated_eigenvalues(&self, x: usize, y: usize) -> Vec<f64> {
        let mut b = NormalizedBuffers::default();
        self.update(x, y, &mut b);
        b.out.iter().map(|e| e.value).collect()
    }

    /// Exact normalized-Laplacian entropy after adding `(x, y)`.
    pub fn entropy_with_edge(&self, x: usize, y: usize) -> f64 {
        self.entropies_with_edges(&[(x, y)])[0]
    }

    /// [`Self::entropy_with_edge`] over many pairs, sharing work buffers.
    pub fn entropies_with_edges(&self, pairs: &[(usize, usize)]) -> Vec<f64> {
        let mut b = NormalizedBuffers::default();
        let scale = self.values.len() as f64;
        pairs
            .iter()
            .map(|&(x, y)| {
                self.update(x, y, &mut b);
                scaled_entropy(b.out.iter().map(|e| e.value), scale)
            })
            .collect()
    }
}

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn k(n: usize) -> Graph {
        generators::complete_graph(n)
    }

    fn p3() -> Graph {
        generators::path_graph(3)
    }

    fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }

    #[test]
    fn eigenvalue_examples() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        let s = symmetric_eigenvalues(&m).unwrap();
        assert!(close(s.values[0], 0.0, 1e-14) && close(s.values[1], 1.0, 1e-14));

        // Characteristic polynomial of L(P3): λ(λ-1)(λ-3), scaled by 1/4.
        let rho = p3().density_matrix(DensityKind::LaplacianScaled).unwrap();
        let s = symmetric_eigenvalues(&rho).unwrap();
        for (got, want) in s.values.iter().zip([0.0, 0.25, 0.75]) {
            assert!(close(*got, want, 1e-14));
        }
        let s = symmetric_eigenvalues(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(s.values, vec![0.0; 3]);
    }

    #[test]
    fn density_spectra_match_closed_forms() {
        let s = density_spectrum(&k(2), DensityKind::LaplacianScaled).unwrap();
        assert!(close(s.values[0], 0.0, 1e-14) && close(s.values[1], 1.0, 1e-14));
        let s = density_spectrum(&p3(), DensityKind::NormalizedScaled).unwrap();
        for (got, want) in s.values.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
            assert!(close(*got, want, 1e-14));
        }
        let s = density_spectrum(&k(4), DensityKind::LaplacianScaled).unwrap();
        for (got, want) in s.values.iter().zip([0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]) {
            assert!(close(*got, want, 1e-14));
        }
        // Same spectra from the independent Jacobi routine.
        let j = oracle::jacobi_eigenvalues(to_rows(&p3().density_matrix(DensityKind::NormalizedScaled).unwrap()));
        for (got, want) in j.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
            assert!(close(*got, want, 1e-13));
        }
    }

    #[test]
    fn not_symmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(symmetric_eigenvalues(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn entropy_examples() {
        assert!(close(von_neumann_entropy(&k(2), DensityKind::LaplacianScaled).unwrap(), 0.0, 1e-12));
        assert!(close(von_neumann_entropy(&k(2), DensityKind::NormalizedScaled).unwrap(), 0.0, 1e-12));
        assert!(close(von_neumann_entropy(&k(4), DensityKind::LaplacianScaled).unwrap(), 3f64.ln(), 1e-12));
        assert!(close(von_neumann_entropy(&k(4), DensityKind::LaplacianScaled).unwrap(), 1.098612, 1e-6));
        assert!(close(von_neumann_entropy(&p3(), DensityKind::LaplacianScaled).unwrap(), 0.562335, 1e-6));
        assert!(close(von_neumann_entropy(&p3(), DensityKind::NormalizedScaled).unwrap(), 0.636514, 1e-6));
        let ora = oracle::laplacian_entropy(3, &[(0, 1), (1, 2)]);
        assert!(close(ora, 0.562335, 1e-6));
        assert_eq!(
            von_neumann_entropy(&Graph::empty(3), DensityKind::LaplacianScaled),
            Err(Error::EmptyEdgeSet)
        );
        for kind in [DensityKind::LaplacianScaled, DensityKind::NormalizedScaled] {
            assert_eq!(von_neumann_entropy(&Graph::empty(0), kind), Err(Error::EmptyEdgeSet));
        }
        assert!(symmetric_eigenvalues(&DMatrix::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn spectrum_entropy_examples() {
        let s = |v: Vec<f64>| Spectrum { values: v, kind: None };
        assert_eq!(entropy_of_spectrum(&s(vec![0.0, 1.0])).unwrap(), 0.0);
        assert!(close(entropy_of_spectrum(&s(vec![0.5, 0.5])).unwrap(), 2f64.ln(), 1e-15));
        assert!(close(entropy_of_spectrum(&s(vec![0.0, 0.25, 0.75])).unwrap(), 0.562335, 1e-6));
        assert!(matches!(entropy_of_spectrum(&s(vec![0.5, 0.6])), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn clamping() {
        let s = Spectrum {
            values: vec![-5e-10, 0.5, 0.5],
            kind: None,
        };
        let c = s.clamped();
        assert_eq!(c.values[0], 0.0);
        assert!(close(c.sum(), 1.0, 1e-15));
    }

    #[test]
    fn disjoint_union_spectrum_merges_components() {
        use crate::generators::{complete_graph, path_graph};
        let a = path_graph(4);
        let b = complete_graph(3);
        let mut pairs = a.edge_vec();
        pairs.extend(b.edges().map(|(u, v)| (u + 4, v + 4)));
        let union = Graph::from_edge_list(7, &pairs).unwrap();
        let m_total = (a.m() + b.m()) as f64;
        let mut merged: Vec<f64> = oracle::jacobi_eigenvalues(oracle::laplacian(4, &a.edge_vec()))
            .into_iter()
            .chain(oracle::jacobi_eigenvalues(oracle::laplacian(3, &b.edge_vec())))
            .map(|x| x / (2.0 * m_total))
            .collect();
        merged.sort_by(f64::total_cmp);
        let got = density_spectrum(&union, DensityKind::LaplacianScaled).unwrap();
        for (x, y) in got.values.iter().zip(&merged) {
            assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn complete_graph_entropy_is_log_n_minus_one() {
        for n in 3..=12 {
            let s = von_neumann_entropy(&k(n), DensityKind::LaplacianScaled).unwrap();
            assert!(close(s, ((n - 1) as f64).ln(), 1e-10), "n={n}");
        }
    }

    #[test]
    fn rank_one_update_handles_components_and_multiplicity() {
        // Two disjoint K3s: zero has multiplicity 2, 3 has multiplicity 4.
        let g = Graph::from_edge_list(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let up = LaplacianEdgeUpdate::new(&g).unwrap();
        for (x, y) in g.complement_edges() {
            let want = von_neumann_entropy(&g.with_edge(x, y).unwrap(), DensityKind::LaplacianScaled).unwrap();
            assert!(close(up.entropy_with_edge(x, y), want, 1e-12), "({x},{y})");
        }
        let empty = Graph::empty(4);
        let up = LaplacianEdgeUpdate::new(&empty).unwrap();
        assert!(up.base_entropy().is_none());
        assert!(close(up.entropy_with_edge(1, 3), 0.0, 1e-12));
    }

    fn check_normalized_update(g: &Graph, tol: f64) {
        let up = NormalizedEdgeUpdate::new(g).unwrap();
        let base = von_neumann_entropy(g, DensityKind::NormalizedScaled).unwrap();
        assert!(close(up.base_entropy(), base, tol));
        for (x, y) in g.complement_edges() {
            let h = g.with_edge(x, y).unwrap();
            let mut got = up.updated_eigenvalues(x, y);
            got.sort_by(f64::total_cmp);
            let want = symmetric_eigenvalues(&h.normalized_laplacian().unwrap()).unwrap().values;
            let worst = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(worst <= tol, "({x},{y}) spectrum off by {worst}: {got:?} vs {want:?}");
            let dense = von_neumann_entropy(&h, DensityKind::NormalizedScaled).unwrap();
            assert!(close(up.entropy_with_edge(x, y), dense, tol), "({x},{y})");
        }
    }

    #[test]
    fn normalized_update_on_structured_graphs() {
        use crate::generators::{complete_graph, path_graph};
        let two_triangles = Graph::from_edge_list(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let cycle = path_graph(8).with_edge(0, 7).unwrap();
        let star = Graph::from_edge_list(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let k33 = Graph::from_edge_list(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        let matching = Graph::from_edge_list(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        for g in [path_graph(2).with_node().with_node().with_edge(2, 3).unwrap(), path_graph(8), cycle, star, k33, two_triangles, matching, complete_graph(5).without_edge(1, 3).unwrap()] {
            check_normalized_update(&g, 1e-12);
        }
        assert!(matches!(NormalizedEdgeUpdate::new(&Graph::empty(3)), Err(Error::IsolatedNode(0))));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n, any::<u64>(), 0.05f64..0.95).prop_map(|(n, seed, p)| generators::erdos_renyi(n, p, seed).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_jacobi_oracle(g in arb_graph(7)) {
            let edges = g.edge_vec();
            if g.m() > 0 {
                let s = von_neumann_entropy(&g, DensityKind::LaplacianScaled).unwrap();
                prop_assert!(close(s, oracle::laplacian_entropy(g.n(), &edges), 1e-10));
                prop_assert!(s <= ((g.n() - 1) as f64).ln() + 1e-9);
            }
            if g.isolated_node().is_none() {
                let s = von_neumann_entropy(&g, DensityKind::NormalizedScaled).unwrap();
                prop_assert!(close(s, oracle::normalized_entropy(g.n(), &edges), 1e-10));
                let raw = symmetric_eigenvalues(&g.normalized_laplacian().unwrap()).unwrap();
                prop_assert!(raw.values.iter().all(|&x| x > -1e-9 && x <= 2.0 + 1e-9));
            }
        }

        #[test]
        fn relabeling_invariance(g in arb_graph(10), perm_seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let pairs: Vec<_> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
            let h = Graph::from_edge_list(g.n(), &pairs).unwrap();
            for kind in [DensityKind::LaplacianScaled, DensityKind::NormalizedScaled] {
                if let (Ok(a), Ok(b)) = (von_neumann_entropy(&g, kind), von_neumann_entropy(&h, kind)) {
                    prop_assert!(close(a, b, 1e-10));
                }
            }
        }

        #[test]
        fn rank_one_update_matches_dense(g in arb_graph(25)) {
            let up = LaplacianEdgeUpdate::new(&g).unwrap();
            if g.m() > 0 {
                let base = von_neumann_entropy(&g, DensityKind::LaplacianScaled).unwrap();
                prop_assert!(close(up.base_entropy().unwrap(), base, 1e-11));
            }
            for (x, y) in g.complement_edges() {
                let dense = von_neumann_entropy(&g.with_edge(x, y).unwrap(), DensityKind::LaplacianScaled).unwrap();
                prop_assert!(close(up.entropy_with_edge(x, y), dense, 1e-11));
            }
        }

        #[test]
        fn normalized_update_matches_dense(g in arb_graph(25)) {
            prop_assume!(g.isolated_node().is_none());
            check_normalized_update(&g, 1e-11);
        }
    }
}
