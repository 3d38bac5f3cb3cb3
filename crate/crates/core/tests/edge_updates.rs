use vnentropy::generators::{barabasi_albert, erdos_renyi, watts_strogatz};
use vnentropy::spectral::{von_neumann_entropy, LaplacianEdgeUpdate, NormalizedEdgeUpdate};
use vnentropy::{DensityKind, Graph};

/// Largest deviation of the incremental entropies from dense recomputation,
/// over every absent pair: `(normalized, laplacian)`.
fn worst_error(g: &Graph) -> (f64, f64) {
    let dense = |x, y, kind| von_neumann_entropy(&g.with_edge(x, y).unwrap(), kind).unwrap();
    let pairs = g.complement_edges();
    let mut worst = (0.0f64, 0.0f64);
    if g.isolated_node().is_none() {
        let up = NormalizedEdgeUpdate::new(g).unwrap();
        for (&(x, y), s) in pairs.iter().zip(up.entropies_with_edges(&pairs)) {
            worst.0 = worst.0.max((s - dense(x, y, DensityKind::NormalizedScaled)).abs());
        }
    }
    if g.m() > 0 {
        let up = LaplacianEdgeUpdate::new(g).unwrap();
        for (&(x, y), s) in pairs.iter().zip(up.entropies_with_edges(&pairs)) {
            worst.1 = worst.1.max((s - dense(x, y, DensityKind::LaplacianScaled)).abs());
        }
    }
    worst
}

fn assert_close(g: &Graph, label: &str) {
    let (normalized, laplacian) = worst_error(g);
    assert!(normalized < 1e-11, "{label}: normalized off by {normalized:e}");
    assert!(laplacian < 1e-11, "{label}: laplacian off by {laplacian:e}");
}

// Sparse through nearly complete, where repeated eigenvalues and
// near-deflation are common.
#[test]
fn incremental_entropies_match_dense_across_models() {
    for seed in 0..60u64 {
        let n = 5 + (seed % 20) as usize;
        let p = 0.05 + 0.9 * ((seed * 7919) % 100) as f64 / 100.0;
        assert_close(&erdos_renyi(n, p, seed).unwrap(), &format!("ER({n}, {p}) seed {seed}"));
        let m = 1 + (seed % 4) as usize;
        assert_close(&barabasi_albert(n.max(8), m, seed).unwrap(), &format!("BA({n}, {m}) seed {seed}"));
        assert_close(&watts_strogatz(n.max(8), 4, p, seed).unwrap(), &format!("WS({n}, 4, {p}) seed {seed}"));
    }
}

#[test]
fn incremental_entropies_match_dense_on_larger_graphs() {
    for seed in 0..2u64 {
        assert_close(&barabasi_albert(40, 3 + seed as usize, seed).unwrap(), "BA(40)");
        assert_close(&erdos_renyi(40, 0.3 + 0.3 * seed as f64, seed).unwrap(), "ER(40)");
    }
}
