#![allow(dead_code)]

use spectral_contract::graph::{Edge, Graph, SpanningTree};
use spectral_contract::io::{generate_case_study, SplitMix64};
use spectral_contract::partition::{edge_contraction_partition, Partition};

pub struct Rng(pub SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::new(seed))
    }

    /// Uniform in `[lo, hi]`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.0.below((hi - lo + 1) as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        self.0.unit()
    }

    /// Uniform in `[-1, 1)`.
    pub fn signed(&mut self) -> f64 {
        2.0 * self.0.unit() - 1.0
    }

    pub fn seed(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.unit() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.0.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    pub fn vector(&mut self, len: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..len).map(|_| self.signed()).collect();
            if v.iter().any(|x| x.abs() > 1e-3) {
                return v;
            }
        }
    }
}

/// A connected graph on `n` vertices: a random tree plus up to `max_extra`
/// random extra edges.
pub fn random_connected(rng: &mut Rng, n: usize, max_extra: usize) -> Graph {
    let available = n * (n - 1) / 2 - (n - 1);
    let extra = rng.range(0, max_extra.min(available));
    generate_case_study(n, extra, rng.seed()).unwrap()
}

/// Erdős–Rényi style graph, possibly disconnected.
pub fn random_graph(rng: &mut Rng, n: usize, p: f64) -> Graph {
    let mut pairs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.chance(p) {
                pairs.push((u, v));
            }
        }
    }
    Graph::new(n, &pairs).unwrap()
}

/// A uniformly random label assignment into at most `max_cells` cells.
pub fn random_partition(rng: &mut Rng, n: usize, max_cells: usize) -> Partition {
    let k = rng.range(1, max_cells.min(n));
    let labels: Vec<usize> = (0..n).map(|_| rng.range(0, k - 1)).collect();
    Partition::from_labels(&labels)
}

/// Edges with both endpoints in the same cell of `pi`.
pub fn internal_edges(g: &Graph, pi: &Partition) -> Vec<Edge> {
    g.edges()
        .iter()
        .copied()
        .filter(|e| pi.cell_of(e.head()) == pi.cell_of(e.tail()))
        .collect()
}

/// `Some(E_cs)` when contracting the internal edges of `pi` reproduces
/// `pi` exactly (every cell induces a connected subgraph).
pub fn edge_set_for(g: &Graph, pi: &Partition) -> Option<Vec<Edge>> {
    let e_cs = internal_edges(g, pi);
    (edge_contraction_partition(g, &e_cs).ok()? == *pi).then_some(e_cs)
}

/// Random spanning tree by Kruskal over a shuffled edge list.
pub fn random_spanning_tree(rng: &mut Rng, g: &Graph) -> SpanningTree {
    let mut edges = g.edges().to_vec();
    rng.shuffle(&mut edges);
    let mut parent: Vec<usize> = (0..=g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::new();
    for e in edges {
        let (a, b) = (find(&mut parent, e.head()), find(&mut parent, e.tail()));
        if a != b {
            parent[a] = b;
            tree.push(e);
        }
    }
    let root = rng.range(1, g.n());
    SpanningTree::from_edges(g.n(), &tree, root).unwrap()
}

/// Nonempty subsets of `items`, by bitmask (`items.len() <= 16`).
pub fn nonempty_subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    assert!(items.len() <= 16);
    (1u32..(1 << items.len()))
        .map(|mask| {
            (0..items.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| items[i])
                .collect()
        })
        .collect()
}

/// Relative comparison `a <= b` with slack `tol * max(1, |a|, |b|)`.
pub fn le_rel(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * 1f64.max(a.abs()).max(b.abs())
}
