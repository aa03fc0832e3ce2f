//! Undirected multigraphs with loops, plus the edge-list text format.
//!
//! Vertices are 0-based in memory and 1-based in text. Edge `e` owns darts
//! `2e` (at its first endpoint) and `2e + 1` (at its second endpoint).

use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Graph(format!(
                    "edge {i} ({}, {}) has an endpoint outside [1..{n}]",
                    u + 1,
                    v + 1
                )));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph { n, edges }
    }

    /// Erdős–Rényi G(n, p).
    pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!("p must lie in (0, 1], got {p}")));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if p >= 1.0 || rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_darts(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn dart_vertex(&self, d: usize) -> usize {
        let (u, v) = self.edges[d / 2];
        if d % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Darts incident to each vertex, in increasing id order.
    pub fn darts_by_vertex(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for d in 0..self.num_darts() {
            out[self.dart_vertex(d)].push(d);
        }
        out
    }

    /// Component label per vertex (labels are 0..k in order of first vertex).
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut k = 0;
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = k;
                k += 1;
            }
            out[v] = label[r];
        }
        (k, out)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().0 == 1
    }

    /// True for simple complete graphs K_n.
    pub fn is_complete(&self) -> bool {
        let n = self.n;
        if self.edges.len() != n * n.saturating_sub(1) / 2 {
            return false;
        }
        let mut seen = vec![false; n * n];
        for &(u, v) in &self.edges {
            if u == v || seen[u * n + v] {
                return false;
            }
            seen[u * n + v] = true;
            seen[v * n + u] = true;
        }
        true
    }

    /// Parse the plain-text edge list: one `u v` pair per line, 1-based,
    /// `#` starts a comment. An optional `n N` line declares isolated
    /// vertices beyond the largest endpoint.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected `u v`, got `{raw}`", lineno + 1));
            if toks.len() != 2 {
                return Err(bad());
            }
            if toks[0] == "n" {
                let declared: usize = toks[1].parse().map_err(|_| bad())?;
                n = n.max(declared);
                continue;
            }
            let u: usize = toks[0].parse().map_err(|_| bad())?;
            let v: usize = toks[1].parse().map_err(|_| bad())?;
            if u == 0 || v == 0 {
                return Err(Error::Parse(format!(
                    "line {}: vertices are 1-based",
                    lineno + 1
                )));
            }
            n = n.max(u).max(v);
            edges.push((u - 1, v - 1));
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        s
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        Graph {
            n: self.n + other.n,
            edges,
        }
    }
}
