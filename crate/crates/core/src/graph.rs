//! Simple undirected graphs and the matrices built from them.
//!
//! Nodes are the dense labels `0..n`. Every edge is stored once as `(u, v)`
//! with `u < v`, and each node keeps a sorted neighbour list. A [`Graph`] is a
//! value: the `with_*` methods return modified copies.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which trace-one scaling of a Laplacian to use as the density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DensityKind {
    /// `L / 2m`
    LaplacianScaled,
    /// `𝓛 / n`, normalized Laplacian over node count
    NormalizedScaled,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from node pairs. Duplicates (in either orientation) collapse.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in pairs {
            g.check_pair(u, v)?;
            if !g.has_edge(u, v) {
                g.insert(u, v);
            }
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        for idx in [u, v] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize) {
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.m += 1;
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Sorted neighbours of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Copy of this graph with `(u, v)` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.add_edge(u, v)?;
        Ok(g)
    }

    /// Copy of this graph with `(u, v)` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.remove_edge(u, v)?;
        Ok(g)
    }

    /// Copy of this graph with one extra isolated node, labelled `n`.
    pub fn with_node(&self) -> Self {
        let mut g = self.clone();
        g.adj.push(Vec::new());
        g
    }

    /// In-place insertion, for builders and growth loops that own their graph.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        if self.has_edge(u, v) {
            return Err(Error::EdgeExists(u.min(v), u.max(v)));
        }
        self.insert(u, v);
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        let pu = self.adj[u].binary_search(&v).map_err(|_| Error::EdgeMissing(u.min(v), u.max(v)))?;
        self.adj[u].remove(pu);
        let pv = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(pv);
        self.m -= 1;
        Ok(())
    }

    pub(crate) fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// First node with degree 0, if any.
    pub fn isolated_node(&self) -> Option<usize> {
        self.adj.iter().position(Vec::is_empty)
    }

    /// Nodes with at least one incident edge.
    pub fn non_isolated_count(&self) -> usize {
        self.adj.iter().filter(|nb| !nb.is_empty()).count()
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Combinatorial Laplacian `D - A`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut l = DMatrix::zeros(n, n);
        for (u, nb) in self.adj.iter().enumerate() {
            l[(u, u)] = nb.len() as f64;
            for &v in nb {
                l[(u, v)] = -1.0;
            }
        }
        l
    }

    /// `D^{-1/2} L D^{-1/2}`. Rejects graphs with isolated nodes.
    pub fn normalized_laplacian(&self) -> Result<DMatrix<f64>> {
        if let Some(u) = self.isolated_node() {
            return Err(Error::IsolatedNode(u));
        }
        let n = self.n();
        let inv_sqrt: Vec<f64> = self.adj.iter().map(|nb| 1.0 / (nb.len() as f64).sqrt()).collect();
        let mut l = DMatrix::zeros(n, n);
        for (u, nb) in self.adj.iter().enumerate() {
            l[(u, u)] = 1.0;
            for &v in nb {
                l[(u, v)] = -inv_sqrt[u] * inv_sqrt[v];
            }
        }
        Ok(l)
    }

    /// Trace-one density matrix of the requested kind.
    pub fn density_matrix(&self, kind: DensityKind) -> Result<DMatrix<f64>> {
        match kind {
            DensityKind::LaplacianScaled => {
                if self.m == 0 {
                    return Err(Error::EmptyEdgeSet);
                }
                Ok(self.laplacian() / (2.0 * self.m as f64))
            }
            DensityKind::NormalizedScaled => {
                if self.n() == 0 {
                    return Err(Error::EmptyEdgeSet);
                }
                let l = self.normalized_laplacian()?;
                let n = self.n() as f64;
                Ok(l / n)
            }
        }
    }

    /// BFS hop counts from `source`; `None` marks unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// All-pairs hop counts.
    pub fn geodesic_distances(&self) -> Distances {
        let n = self.n();
        let mut d = vec![Distances::UNREACHABLE; n * n];
        for s in 0..n {
            for (t, dist) in self.bfs_distances(s).into_iter().enumerate() {
                if let Some(x) = dist {
                    d[s * n + t] = x;
                }
            }
        }
        Distances { n, d }
    }

    /// Node pairs `(u, v)`, `u < v`, not joined by an edge.
    pub fn complement_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2 - self.m);
        for u in 0..n {
            let nb = &self.adj[u];
            let mut it = nb.iter().copied().filter(|&v| v > u).peekable();
            for v in (u + 1)..n {
                if it.peek() == Some(&v) {
                    it.next();
                } else {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(Option::is_some)
    }
}

/// Dense hop-count matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distances {
    n: usize,
    d: Vec<u32>,
}

impl Distances {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        let x = self.d[u * self.n + v];
        (x != Self::UNREACHABLE).then_some(x)
    }

    /// Raw value with [`Distances::UNREACHABLE`] standing in for infinity, so
    /// unreachable pairs compare larger than any finite distance.
    pub fn raw(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }
}
