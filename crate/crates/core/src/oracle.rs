//! Brute-force references used to cross-check the fast paths: an inertia
//! bisection eigensolver (Householder tridiagonalization, then pivot-sign
//! counts), exhaustive partition search, a low-link bridge
//! finder and small-graph enumeration.

use std::collections::BTreeMap;

use crate::contraction::{anchored_cells, compatible};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::partition::{enumerate_r_partitions, Partition};
use crate::spectral::{graph_matrix, interlace_values, MatrixKind, Spectrum, SymMatrix, DEFAULT_TOL};

pub const EIG_ORACLE_MAX_N: usize = 16;
pub const EXHAUSTIVE_MAX_N: usize = 9;
pub const ENUMERATION_MAX_N: usize = 7;
/// Bisection stops once the bracket is this narrow.
pub const BISECTION_WIDTH: f64 = 1e-10;
const SHIFT_NUDGE: f64 = 1e-13;
const SHIFT_RETRIES: usize = 5;

/// Householder reduction to a congruent tridiagonal matrix: returns the
/// diagonal and the off-diagonal.
fn tridiagonalize(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n();
    let mut a = m.rows();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k + 1][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);
        let len = v.len();
        // p = A_sub v, q = p - (vᵀp) v, A_sub -= 2(vqᵀ + qvᵀ)
        let p: Vec<f64> = (0..len)
            .map(|i| (0..len).map(|j| a[k + 1 + i][k + 1 + j] * v[j]).sum())
            .collect();
        let vp: f64 = v.iter().zip(&p).map(|(x, y)| x * y).sum();
        let q: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - vp * vi).collect();
        for i in 0..len {
            for j in 0..len {
                a[k + 1 + i][k + 1 + j] -= 2.0 * (v[i] * q[j] + q[i] * v[j]);
            }
        }
        a[k + 1][k] = alpha;
        a[k][k + 1] = alpha;
        for i in k + 2..n {
            a[i][k] = 0.0;
            a[k][i] = 0.0;
        }
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    let off = (1..n).map(|i| a[i][i - 1]).collect();
    (diag, off)
}

/// Number of eigenvalues strictly below `t`: the count of negative pivots
/// in the symmetric elimination of `T − tI` (Sylvester's law of inertia).
/// A zero pivot nudges the shift and retries.
fn count_below(diag: &[f64], off: &[f64], t: f64) -> Result<usize> {
    let mut shift = t;
    'retry: for _ in 0..=SHIFT_RETRIES {
        let mut negatives = 0;
        let mut pivot = 1.0;
        for (i, &d) in diag.iter().enumerate() {
            pivot = if i == 0 { d - shift } else { d - shift - off[i - 1] * off[i - 1] / pivot };
            if pivot == 0.0 || !pivot.is_finite() {
                shift += SHIFT_NUDGE;
                continue 'retry;
            }
            if pivot < 0.0 {
                negatives += 1;
            }
        }
        return Ok(negatives);
    }
    Err(Error::PivotBreakdown(t))
}

/// Eigenvalues by bisection on the inertia count, each to within
/// [`BISECTION_WIDTH`]. Limited to `n <= 16`.
pub fn eig_oracle(m: &SymMatrix) -> Result<Spectrum> {
    let n = m.n();
    if n > EIG_ORACLE_MAX_N {
        return Err(Error::TooLarge { what: "oracle matrix order", value: n, limit: EIG_ORACLE_MAX_N });
    }
    // Gershgorin discs bound the spectrum
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
        lo = lo.min(m.get(i, i) - radius);
        hi = hi.max(m.get(i, i) + radius);
    }
    let (lo, hi) = (lo - 1.0, hi + 1.0);
    let (diag, off) = tridiagonalize(m);
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let (mut a, mut b) = (lo, hi);
        while b - a > BISECTION_WIDTH {
            let mid = 0.5 * (a + b);
            if count_below(&diag, &off, mid)? > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        values.push(0.5 * (a + b));
    }
    Ok(Spectrum { values, tol: BISECTION_WIDTH })
}

/// Verdict of every `r`-partition of `V(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSearchResult {
    pub graph: Graph,
    pub r: usize,
    pub kind: MatrixKind,
    pub passing: Vec<Partition>,
    /// Failing partitions with the first violated index `k` (1-based).
    pub failing_sample: Vec<(Partition, usize)>,
}

impl OracleSearchResult {
    pub fn total(&self) -> usize {
        self.passing.len() + self.failing_sample.len()
    }
}

pub fn exhaustive_interlacing(g: &Graph, r: usize, kind: MatrixKind) -> Result<OracleSearchResult> {
    exhaustive_interlacing_with_tol(g, r, kind, DEFAULT_TOL)
}

/// Contracts `G` over every partition in `Π_r` and checks interlacing
/// with the bisection solver. Limited to `n <= 9`.
pub fn exhaustive_interlacing_with_tol(
    g: &Graph,
    r: usize,
    kind: MatrixKind,
    tol: f64,
) -> Result<OracleSearchResult> {
    let n = g.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLarge { what: "exhaustive search order", value: n, limit: EXHAUSTIVE_MAX_N });
    }
    if r < 1 || r >= n {
        return Err(Error::BadOrder { r, n });
    }
    let full = eig_oracle(&graph_matrix(g, kind))?;
    let mut passing = Vec::new();
    let mut failing_sample = Vec::new();
    for pi in enumerate_r_partitions(n, r)? {
        let reduced = crate::contraction::contract(g, &pi)?;
        let spectrum = eig_oracle(&graph_matrix(&reduced, kind))?;
        let report = interlace_values(&full.values, &spectrum.values, tol)?;
        match report.first_violation() {
            None => passing.push(pi),
            Some(k) => failing_sample.push((pi, k)),
        }
    }
    Ok(OracleSearchResult { graph: g.clone(), r, kind, passing, failing_sample })
}

/// Bridges by Tarjan's low-link DFS, in canonical order.
pub fn bridges(g: &Graph) -> Vec<Edge> {
    let n = g.n();
    let mut disc = vec![0usize; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut time = 0;
    let mut out = Vec::new();
    for root in 1..=n {
        if disc[root] != 0 {
            continue;
        }
        time += 1;
        disc[root] = time;
        low[root] = time;
        // (vertex, parent, next neighbour index)
        let mut stack = vec![(root, 0usize, 0usize)];
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(v).expect("in range");
            if *next < nbrs.len() {
                let w = nbrs[*next];
                *next += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == 0 {
                    time += 1;
                    disc[w] = time;
                    low[w] = time;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != 0 {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push(Edge::new(parent, v).expect("distinct"));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Whether some set of compatible anchored cells covers exactly `n − r`
/// vertices, by trying every subset of the candidate pool.
pub fn node_removal_feasible(g: &Graph, r: usize) -> Result<bool> {
    let n = g.n();
    if r < 1 || r >= n {
        return Err(Error::BadOrder { r, n });
    }
    let target = n - r;
    let pool: Vec<_> = anchored_cells(g)?
        .into_iter()
        .filter(|c| c.cell.len() <= target)
        .collect();
    const MAX_POOL: usize = 24;
    if pool.len() > MAX_POOL {
        return Err(Error::TooLarge { what: "candidate pool", value: pool.len(), limit: MAX_POOL });
    }
    'subsets: for mask in 1u32..(1u32 << pool.len()) {
        let picked: Vec<usize> = (0..pool.len()).filter(|i| mask >> i & 1 == 1).collect();
        let total: usize = picked.iter().map(|&i| pool[i].cell.len()).sum();
        if total != target {
            continue;
        }
        for (a, &i) in picked.iter().enumerate() {
            for &j in &picked[a + 1..] {
                if !compatible(&pool[i], &pool[j]) {
                    continue 'subsets;
                }
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Canonical code of a graph on `n <= 7` vertices given by adjacency rows:
/// the smallest upper-triangle bit string over all relabellings that
/// respect an isomorphism-invariant vertex ordering.
fn canonical_code(adj: &[u8]) -> u32 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    let key = |v: usize| {
        let mut nd: Vec<u32> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| deg[w]).collect();
        nd.sort_unstable();
        (deg[v], nd)
    };
    let keys: Vec<_> = (0..n).map(key).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    fn search(
        adj: &[u8],
        keys: &[(u32, Vec<u32>)],
        order: &[usize],
        perm: &mut Vec<usize>,
        used: &mut u8,
        best: &mut u32,
    ) {
        let n = adj.len();
        let pos = perm.len();
        if pos == n {
            let mut code = 0u32;
            let mut bit = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if adj[perm[i]] >> perm[j] & 1 == 1 {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            *best = (*best).min(code);
            return;
        }
        let wanted = &keys[order[pos]];
        for v in 0..n {
            if *used >> v & 1 == 0 && &keys[v] == wanted {
                *used |= 1 << v;
                perm.push(v);
                search(adj, keys, order, perm, used, best);
                perm.pop();
                *used &= !(1 << v);
            }
        }
    }

    let mut best = u32::MAX;
    search(adj, &keys, &order, &mut Vec::with_capacity(n), &mut 0, &mut best);
    best
}

fn is_connected_adj(adj: &[u8]) -> bool {
    let n = adj.len();
    let mut seen = 1u8;
    let mut frontier = 1u8;
    while frontier != 0 {
        let mut next = 0u8;
        for v in 0..n {
            if frontier >> v & 1 == 1 {
                next |= adj[v];
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen.count_ones() as usize == n
}

/// One representative of every isomorphism class of connected graphs on
/// exactly `n` vertices, `1 <= n <= 7`, in a fixed order.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > ENUMERATION_MAX_N {
        return Err(Error::TooLarge { what: "enumeration order", value: n, limit: ENUMERATION_MAX_N });
    }
    // every graph on k vertices, keyed by canonical code
    let mut level: BTreeMap<u32, Vec<u8>> = BTreeMap::from([(0, vec![0u8])]);
    for k in 2..=n {
        let mut next: BTreeMap<u32, Vec<u8>> = BTreeMap::new();
        for adj in level.values() {
            for mask in 0u8..(1u8 << (k - 1)) {
                let mut grown = adj.clone();
                for (v, row) in grown.iter_mut().enumerate() {
                    if mask >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                grown.push(mask);
                next.entry(canonical_code(&grown)).or_insert(grown);
            }
        }
        level = next;
    }
    let mut codes: Vec<(&u32, &Vec<u8>)> = level.iter().filter(|(_, a)| is_connected_adj(a)).collect();
    codes.sort_by_key(|(c, _)| **c);
    codes
        .into_iter()
        .map(|(_, adj)| {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if adj[u] >> v & 1 == 1 {
                        edges.push((u + 1, v + 1));
                    }
                }
            }
            Graph::new(n, &edges)
        })
        .collect()
}
