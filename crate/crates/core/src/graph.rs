//! Simple undirected graphs on vertices `1..=n`, the multigraphs produced by
//! quotients, and the elementary operations everything else builds on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// An undirected edge stored as `(min, max)`.
///
/// The smaller endpoint is the head and the larger the tail; signed tree
/// paths use this orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Edge {
    head: usize,
    tail: usize,
}

impl Edge {
    /// Canonical edge between two distinct vertices.
    pub fn new(u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(Edge {
            head: u.min(v),
            tail: u.max(v),
        })
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.head, self.tail)
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.head {
            self.tail
        } else {
            self.head
        }
    }
}

impl TryFrom<(usize, usize)> for Edge {
    type Error = Error;

    fn try_from((u, v): (usize, usize)) -> Result<Self> {
        Edge::new(u, v)
    }
}

impl From<Edge> for (usize, usize) {
    fn from(e: Edge) -> Self {
        (e.head, e.tail)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.head, self.tail)
    }
}

/// Shorthand used throughout the tests: panics on a self-loop.
pub fn e(u: usize, v: usize) -> Edge {
    Edge::new(u, v).expect("self-loop")
}

/// Simple undirected graph. Vertices are `1..=n`; the edge list is sorted
/// and free of duplicates and loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a canonical graph. Duplicate pairs (in either orientation)
    /// collapse to one edge.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            edges.push(Edge::new(u, v)?);
        }
        Ok(Self::from_canonical(n, edges))
    }

    /// Same as [`Graph::new`] but from already-validated edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            check_vertex(e.tail, n)?;
        }
        Ok(Self::from_canonical(n, edges))
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    fn from_canonical(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.head - 1].push(e.tail);
            adj[e.tail - 1].push(e.head);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    /// Order of the graph.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// Sorted neighbourhood of `v`.
    pub fn neighbors(&self, v: usize) -> Result<&[usize]> {
        check_vertex(v, self.n)?;
        Ok(&self.adj[v - 1])
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.neighbors(v).map(<[usize]>::len)
    }

    /// Degrees of all vertices, indexed from zero.
    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v
            && (1..=self.n).contains(&u)
            && (1..=self.n).contains(&v)
            && self.adj[u - 1].binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// `true` when every edge of `self` is an edge of `other` and the
    /// vertex sets agree.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&e| other.contains_edge(e))
    }

    pub(crate) fn check_edges(&self, edges: &[Edge]) -> Result<()> {
        match edges.iter().find(|e| !self.contains_edge(**e)) {
            Some(&e) => Err(Error::UnknownEdge(e)),
            None => Ok(()),
        }
    }

    /// Removes the vertices in `removed` and their incident edges. Survivors
    /// keep their relative order and are relabelled `1..=k`.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<(Graph, Relabeling)> {
        let mut keep = vec![true; self.n];
        for &v in removed {
            check_vertex(v, self.n)?;
            keep[v - 1] = false;
        }
        let kept: Vec<usize> = (1..=self.n).filter(|&v| keep[v - 1]).collect();
        if kept.is_empty() {
            return Err(Error::EmptyResult);
        }
        Ok(self.restrict_to(&kept))
    }

    /// `G \ E_R`.
    pub fn remove_edges(&self, removed: &[Edge]) -> Result<Graph> {
        self.check_edges(removed)?;
        let mut drop = removed.to_vec();
        drop.sort_unstable();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Ok(Graph {
            n: self.n,
            edges,
            adj: Vec::new(),
        }
        .rebuilt())
    }

    /// `G[V_S]` with the members of `subset` relabelled in ascending order.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<(Graph, Relabeling)> {
        if subset.is_empty() {
            return Err(Error::EmptyResult);
        }
        for &v in subset {
            check_vertex(v, self.n)?;
        }
        let mut kept = subset.to_vec();
        kept.sort_unstable();
        kept.dedup();
        Ok(self.restrict_to(&kept))
    }

    fn rebuilt(self) -> Graph {
        Graph::from_canonical(self.n, self.edges)
    }

    fn restrict_to(&self, kept: &[usize]) -> (Graph, Relabeling) {
        let mut new_label = vec![None; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_label[v - 1] = Some(i + 1);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| match (new_label[e.head - 1], new_label[e.tail - 1]) {
                (Some(a), Some(b)) => Some(Edge { head: a, tail: b }),
                _ => None,
            })
            .collect();
        (
            Graph::from_canonical(kept.len(), edges),
            Relabeling { new_label },
        )
    }

    /// Connected components as a partition, cells ordered by smallest member.
    pub fn connected_components(&self) -> Partition {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start + 1);
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v - 1] {
                    if label[w - 1] == usize::MAX {
                        label[w - 1] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        Partition::from_labels(&label)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Depth-first spanning tree rooted at vertex 1 (neighbours visited in
    /// ascending order) together with the co-tree edges in canonical order.
    pub fn spanning_tree_and_cotree(&self) -> Result<(SpanningTree, Vec<Edge>)> {
        let n = self.n;
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
        // (vertex, index of the next neighbour to try)
        let mut stack: Vec<(usize, usize)> = vec![(1, 0)];
        seen[0] = true;
        while let Some(top) = stack.last_mut() {
            let (v, idx) = *top;
            if let Some(&w) = self.adj[v - 1].get(idx) {
                top.1 += 1;
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    parent[w - 1] = Some(v);
                    depth[w - 1] = depth[v - 1] + 1;
                    tree_edges.push(Edge::new(v, w)?);
                    stack.push((w, 0));
                }
            } else {
                stack.pop();
            }
        }
        if tree_edges.len() + 1 != n {
            return Err(Error::Disconnected);
        }
        tree_edges.sort_unstable();
        let cotree = self
            .edges
            .iter()
            .copied()
            .filter(|e| tree_edges.binary_search(e).is_err())
            .collect();
        Ok((
            SpanningTree {
                root: 1,
                parent,
                depth,
                tree_edges,
            },
            cotree,
        ))
    }
}

/// Old-to-new vertex map returned by removal and induction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    new_label: Vec<Option<usize>>,
}

impl Relabeling {
    /// New label of original vertex `v`, if it survived.
    pub fn get(&self, v: usize) -> Option<usize> {
        self.new_label.get(v.wrapping_sub(1)).copied().flatten()
    }

    /// Original vertices that survived, in new-label order.
    pub fn survivors(&self) -> Vec<usize> {
        (1..=self.new_label.len())
            .filter(|&v| self.new_label[v - 1].is_some())
            .collect()
    }
}

/// Rooted spanning tree with parent links and depths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    tree_edges: Vec<Edge>,
}

impl SpanningTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(v.wrapping_sub(1)).copied().flatten()
    }

    /// Tree edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.tree_edges
    }

    /// Builds a rooted tree from an arbitrary set of `n - 1` edges, failing
    /// when they do not form a spanning tree of `[1, n]`.
    pub fn from_edges(n: usize, edges: &[Edge], root: usize) -> Result<Self> {
        check_vertex(root, n)?;
        let tree = Graph::from_edges(n, edges.iter().copied())?;
        if tree.m() + 1 != n || !tree.is_connected() {
            return Err(Error::NotSpanning(format!(
                "{} edges on {} vertices do not form a spanning tree",
                tree.m(),
                n
            )));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        seen[root - 1] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &tree.adj[v - 1] {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    parent[w - 1] = Some(v);
                    depth[w - 1] = depth[v - 1] + 1;
                    stack.push(w);
                }
            }
        }
        Ok(SpanningTree {
            root,
            parent,
            depth,
            tree_edges: tree.edges,
        })
    }

    /// The tree as a standalone graph.
    pub fn as_graph(&self) -> Graph {
        Graph::from_canonical(self.n(), self.tree_edges.clone())
    }

    /// The unique tree path from `from` to `to`. Each edge carries `+1` when
    /// it is traversed head-to-tail (smaller to larger endpoint) and `-1`
    /// otherwise.
    pub fn path_signed(&self, from: usize, to: usize) -> Result<Vec<(Edge, i8)>> {
        let n = self.n();
        check_vertex(from, n)?;
        check_vertex(to, n)?;
        if from == to {
            return Err(Error::BadArgument(format!(
                "tree path endpoints coincide at {from}"
            )));
        }
        let step = |a: usize, b: usize| -> (Edge, i8) {
            let sign = if a < b { 1 } else { -1 };
            (
                Edge {
                    head: a.min(b),
                    tail: a.max(b),
                },
                sign,
            )
        };
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut a, mut b) = (from, to);
        while self.depth[a - 1] > self.depth[b - 1] {
            let p = self.parent[a - 1].expect("non-root has a parent");
            up.push(step(a, p));
            a = p;
        }
        while self.depth[b - 1] > self.depth[a - 1] {
            let p = self.parent[b - 1].expect("non-root has a parent");
            down.push(step(p, b));
            b = p;
        }
        while a != b {
            let pa = self.parent[a - 1].expect("non-root has a parent");
            let pb = self.parent[b - 1].expect("non-root has a parent");
            up.push(step(a, pa));
            down.push(step(pb, b));
            a = pa;
            b = pb;
        }
        up.extend(down.into_iter().rev());
        Ok(up)
    }
}

/// Undirected multigraph on `1..=n` with explicit multiplicities; self-loops
/// are stored as `(v, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), usize>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        check_vertex(u, self.n)?;
        check_vertex(v, self.n)?;
        *self.edges.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Multiplicity of the pair `{u, v}` (a loop when `u == v`).
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(0)
    }

    /// Distinct pairs with their multiplicities, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    /// Sum of all multiplicities, loops included.
    pub fn total_multiplicity(&self) -> usize {
        self.edges.values().sum()
    }

    pub fn loop_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|((u, v), _)| u == v)
            .map(|(_, m)| m)
            .sum()
    }

    /// Drops loops and collapses parallel edges.
    pub fn simplify(&self) -> Graph {
        let edges = self
            .edges
            .keys()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| Edge { head: u, tail: v })
            .collect();
        Graph::from_canonical(self.n, edges)
    }
}

pub(crate) fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v == 0 || v > n {
        Err(Error::OutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}
