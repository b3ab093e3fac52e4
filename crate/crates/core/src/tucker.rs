//! Signed tree-path matrix of a co-tree over a spanning tree. Its zero rows
//! are the tree edges that lie on no cycle.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, SpanningTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuckerMatrix {
    tree_edges: Vec<Edge>,
    cotree_edges: Vec<Edge>,
    /// Row-major, `tree_edges.len() x cotree_edges.len()`.
    entries: Vec<i8>,
}

/// Builds the matrix with one tree-path query per co-tree edge. Rows and
/// columns follow canonical edge order.
pub fn tucker_matrix(g: &Graph, tree: &SpanningTree) -> Result<TuckerMatrix> {
    if tree.n() != g.n() {
        return Err(Error::NotSpanning(format!(
            "tree has {} vertices, graph has {}",
            tree.n(),
            g.n()
        )));
    }
    let tree_edges = tree.edges().to_vec();
    for e in &tree_edges {
        if !g.contains_edge(*e) {
            return Err(Error::NotSpanning(format!("tree edge {e} is not in the graph")));
        }
    }
    let cotree_edges: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| tree_edges.binary_search(e).is_err())
        .collect();
    let cols = cotree_edges.len();
    let mut entries = vec![0i8; tree_edges.len() * cols];
    for (j, c) in cotree_edges.iter().enumerate() {
        for (edge, sign) in tree.path_signed(c.head(), c.tail())? {
            let i = tree_edges.binary_search(&edge).expect("path edges are tree edges");
            entries[i * cols + j] = sign;
        }
    }
    Ok(TuckerMatrix { tree_edges, cotree_edges, entries })
}

impl TuckerMatrix {
    pub fn tree_edges(&self) -> &[Edge] {
        &self.tree_edges
    }

    pub fn cotree_edges(&self) -> &[Edge] {
        &self.cotree_edges
    }

    pub fn rows(&self) -> usize {
        self.tree_edges.len()
    }

    pub fn cols(&self) -> usize {
        self.cotree_edges.len()
    }

    /// Entry at row `i`, column `j` (0-indexed).
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        let c = self.cols();
        &self.entries[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.rows()).map(|i| self.get(i, j)).collect()
    }

    /// Tree edges with an all-zero row, in canonical order.
    pub fn zero_rows(&self) -> Vec<Edge> {
        (0..self.rows())
            .filter(|&i| self.row(i).iter().all(|&x| x == 0))
            .map(|i| self.tree_edges[i])
            .collect()
    }

    /// Text dump with edge labels on both axes.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let label = |e: &Edge| format!("{}-{}", e.head(), e.tail());
        let width = self
            .tree_edges
            .iter()
            .chain(&self.cotree_edges)
            .map(|e| label(e).len())
            .max()
            .unwrap_or(1)
            .max(2);
        let _ = write!(out, "{:>width$}", "");
        for c in &self.cotree_edges {
            let _ = write!(out, " {:>width$}", label(c));
        }
        out.push('\n');
        for (i, t) in self.tree_edges.iter().enumerate() {
            let _ = write!(out, "{:>width$}", label(t));
            for &x in self.row(i) {
                let _ = write!(out, " {:>width$}", x);
            }
            out.push('\n');
        }
        out
    }
}
