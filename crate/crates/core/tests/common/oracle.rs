//! Test-only ground truth, written without nalgebra's eigensolver or any
//! production code path: cyclic Jacobi rotations for eigenvalues and plain
//! loops for everything derived from them.

#![allow(dead_code)]

/// Eigenvalues of a small dense symmetric matrix, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[p][q] * a[p][q];
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Dense Laplacian from an explicit edge list.
pub fn laplacian(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut l = vec![vec![0.0; n]; n];
    for &(u, v) in edges {
        l[u][u] += 1.0;
        l[v][v] += 1.0;
        l[u][v] -= 1.0;
        l[v][u] -= 1.0;
    }
    l
}

pub fn normalized_laplacian(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut deg = vec![0.0f64; n];
    for &(u, v) in edges {
        deg[u] += 1.0;
        deg[v] += 1.0;
    }
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        l[i][i] = 1.0;
    }
    for &(u, v) in edges {
        let w = 1.0 / (deg[u] * deg[v]).sqrt();
        l[u][v] -= w;
        l[v][u] -= w;
    }
    l
}

fn shannon(values: &[f64]) -> f64 {
    values.iter().map(|&x| if x > 1e-15 { -x * x.ln() } else { 0.0 }).sum()
}

/// Von Neumann entropy of `L / 2m`.
pub fn laplacian_entropy(n: usize, edges: &[(usize, usize)]) -> f64 {
    let two_m = 2.0 * edges.len() as f64;
    let ev = jacobi_eigenvalues(laplacian(n, edges));
    shannon(&ev.iter().map(|x| x / two_m).collect::<Vec<_>>())
}

/// Von Neumann entropy of `𝓛 / n`.
pub fn normalized_entropy(n: usize, edges: &[(usize, usize)]) -> f64 {
    let ev = jacobi_eigenvalues(normalized_laplacian(n, edges));
    shannon(&ev.iter().map(|x| x / n as f64).collect::<Vec<_>>())
}

/// `1 - tr(rho^2)` by explicit matrix product.
pub fn one_minus_purity(rho: &[Vec<f64>]) -> f64 {
    let n = rho.len();
    let mut tr = 0.0;
    for i in 0..n {
        for k in 0..n {
            tr += rho[i][k] * rho[k][i];
        }
    }
    1.0 - tr
}
