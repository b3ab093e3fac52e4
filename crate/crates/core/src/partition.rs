//! Vertex partitions, the refinement order, chains of partitions and the
//! counting/enumeration of `r`-partitions.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{check_vertex, Edge, Graph};

/// Partition of `[1, n]` into nonempty cells.
///
/// Cells are sorted internally and ordered by their smallest member, so two
/// partitions with the same blocks compare equal. Cell indices are 1-based
/// to match the vertex labels of the contracted graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    /// Canonical partition from a per-vertex block label (`labels[v - 1]`).
    /// Label values are arbitrary; only equality matters.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Partition {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut cell_of = Vec::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            let c = *index.entry(*label).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            cells[c].push(i + 1);
            cell_of.push(c + 1);
        }
        Partition { cells, cell_of }
    }

    /// Partition from explicit cells; they must be disjoint, nonempty and
    /// cover `[1, n]`.
    pub fn from_cells(n: usize, cells: &[Vec<usize>]) -> Result<Partition> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut label = vec![usize::MAX; n];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::InvalidPartition(format!("cell {} is empty", i + 1)));
            }
            for &v in cell {
                check_vertex(v, n)?;
                if label[v - 1] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in more than one cell"
                    )));
                }
                label[v - 1] = i;
            }
        }
        if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "vertex {} is not covered",
                v + 1
            )));
        }
        Ok(Partition::from_labels(&label))
    }

    /// `n` singleton cells.
    pub fn identity(n: usize) -> Partition {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// A single cell holding all of `[1, n]`.
    pub fn single(n: usize) -> Partition {
        Partition::from_labels(&vec![0u8; n])
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.cell_of.len()
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Members of cell `i` (1-based).
    pub fn cell(&self, i: usize) -> Result<&[usize]> {
        check_vertex(i, self.len())?;
        Ok(&self.cells[i - 1])
    }

    /// Index of the cell holding `v`.
    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.len() == self.n()
    }

    /// One two-vertex cell, everything else singletons.
    pub fn is_atom(&self) -> bool {
        self.len() + 1 == self.n() && self.n() >= 2
    }

    /// `f_π(S)`: sorted indices of the cells meeting `subset`.
    pub fn partition_function(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(subset.len());
        for &v in subset {
            check_vertex(v, self.n())?;
            out.push(self.cell_of(v));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Whether every cell of `self` lies inside a cell of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> bool {
        self.n() == coarse.n()
            && self.cells.iter().all(|cell| {
                let target = coarse.cell_of(cell[0]);
                cell.iter().all(|&v| coarse.cell_of(v) == target)
            })
    }
}

impl fmt::Display for Partition {
    /// One line per cell, members separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cell in &self.cells {
            let line: Vec<String> = cell.iter().map(usize::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// The coarsening `δ(fine, coarse)`: a partition of the cell indices
/// `[1, |fine|]` grouping fine cells by the coarse cell containing them.
/// `None` when `fine` does not refine `coarse`.
pub fn refine_relation(fine: &Partition, coarse: &Partition) -> Result<Option<Partition>> {
    if fine.n() != coarse.n() {
        return Err(Error::MismatchedGroundSet(fine.n(), coarse.n()));
    }
    if !fine.refines(coarse) {
        return Ok(None);
    }
    let labels: Vec<usize> = fine.cells.iter().map(|c| coarse.cell_of(c[0])).collect();
    Ok(Some(Partition::from_labels(&labels)))
}

/// Vertices outside cell `i` adjacent to some member of it.
pub fn cell_neighborhood(g: &Graph, pi: &Partition, i: usize) -> Result<Vec<usize>> {
    if g.n() != pi.n() {
        return Err(Error::MismatchedGroundSet(g.n(), pi.n()));
    }
    let mut out = Vec::new();
    for &v in pi.cell(i)? {
        for &w in g.neighbors(v)? {
            if pi.cell_of(w) != i {
                out.push(w);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Connected components of `(V(G), E_cs)`.
pub fn edge_contraction_partition(g: &Graph, e_cs: &[Edge]) -> Result<Partition> {
    g.check_edges(e_cs)?;
    let sub = Graph::from_edges(g.n(), e_cs.iter().copied())?;
    Ok(sub.connected_components())
}

/// Totally ordered partitions `π_1 < π_2 < … < π_N`: each later partition
/// strictly refines the one before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    partitions: Vec<Partition>,
}

impl Chain {
    pub fn new(partitions: Vec<Partition>) -> Result<Chain> {
        if partitions.is_empty() {
            return Err(Error::InvalidChain("chain is empty".into()));
        }
        for (i, pair) in partitions.windows(2).enumerate() {
            let (coarse, fine) = (&pair[0], &pair[1]);
            if coarse.n() != fine.n() {
                return Err(Error::MismatchedGroundSet(coarse.n(), fine.n()));
            }
            if coarse.len() >= fine.len() || !fine.refines(coarse) {
                return Err(Error::InvalidChain(format!(
                    "partition {} does not strictly refine partition {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        Ok(Chain { partitions })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// `δ_i = δ(π_{i+1}, π_i)` for `i = 1..N-1`.
    pub fn coarsenings(&self) -> Vec<Partition> {
        self.partitions
            .windows(2)
            .map(|w| {
                refine_relation(&w[1], &w[0])
                    .expect("validated chain")
                    .expect("validated chain")
            })
            .collect()
    }
}

/// Chain from `pi` down to the identity partition in which every step
/// splits one vertex off as a singleton. The vertex split off is the largest
/// member of the lowest-indexed non-singleton cell.
pub fn atom_chain(pi: &Partition) -> Chain {
    let mut partitions = vec![pi.clone()];
    let mut current = pi.clone();
    while !current.is_identity() {
        let cell = current
            .cells
            .iter()
            .find(|c| c.len() > 1)
            .expect("non-identity partition has a non-singleton cell");
        let extracted = *cell.last().expect("nonempty cell");
        let mut labels: Vec<usize> = current.cell_of.clone();
        labels[extracted - 1] = usize::MAX;
        current = Partition::from_labels(&labels);
        partitions.push(current.clone());
    }
    Chain { partitions }
}

const STIRLING_LIMIT: usize = 30;

/// Stirling number of the second kind by the recurrence
/// `S(n, r) = r S(n-1, r) + S(n-1, r-1)`.
pub fn stirling2(n: usize, r: usize) -> Result<BigUint> {
    check_stirling_args(n, r)?;
    // row[k] = S(i, k)
    let mut row: Vec<BigUint> = vec![BigUint::zero(); r + 1];
    row[0] = BigUint::one();
    for _ in 1..=n {
        for k in (1..=r).rev() {
            let prev = std::mem::take(&mut row[k]);
            row[k] = prev * BigUint::from(k) + &row[k - 1];
        }
        row[0] = BigUint::zero();
    }
    Ok(row.swap_remove(r))
}

/// Alternating-sign closed form `Σ_k (-1)^{r-k} C(r,k) k^n / r!`, in exact
/// integers.
pub fn stirling2_closed_form(n: usize, r: usize) -> Result<BigUint> {
    check_stirling_args(n, r)?;
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=r {
        if k > 0 {
            binom = binom * BigInt::from(r - k + 1) / BigInt::from(k);
        }
        let term = &binom * num_traits::pow(BigInt::from(k), n);
        if (r - k) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let factorial: BigInt = (1..=r).map(BigInt::from).product();
    Ok((sum / factorial)
        .to_biguint()
        .expect("Stirling numbers are nonnegative"))
}

fn check_stirling_args(n: usize, r: usize) -> Result<()> {
    if r < 1 || r > n || n > STIRLING_LIMIT {
        return Err(Error::BadArgument(format!(
            "stirling2 needs 1 <= r <= n <= {STIRLING_LIMIT}, got n = {n}, r = {r}"
        )));
    }
    Ok(())
}

const ENUMERATION_LIMIT: usize = 12;

/// All partitions of `[1, n]` into exactly `r` cells, in restricted-growth
/// string order.
pub fn enumerate_r_partitions(n: usize, r: usize) -> Result<RPartitions> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "n",
            value: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if n == 0 || r == 0 || r > n {
        return Err(Error::BadArgument(format!(
            "need 1 <= r <= n, got n = {n}, r = {r}"
        )));
    }
    let mut rgs = vec![0; n];
    complete_minimal(&mut rgs, 0, 1, r);
    Ok(RPartitions {
        rgs,
        r,
        done: false,
    })
}

/// Iterator over `r`-partitions; see [`enumerate_r_partitions`].
#[derive(Debug, Clone)]
pub struct RPartitions {
    rgs: Vec<usize>,
    r: usize,
    done: bool,
}

/// Lexicographically smallest completion of `rgs[..=pos]` using exactly `r`
/// blocks, given that the prefix uses `blocks` of them.
fn complete_minimal(rgs: &mut [usize], pos: usize, blocks: usize, r: usize) {
    let n = rgs.len();
    let slots = n - 1 - pos;
    let fresh = r - blocks;
    for (offset, slot) in rgs[pos + 1..].iter_mut().enumerate() {
        *slot = if offset < slots - fresh {
            0
        } else {
            blocks + (offset - (slots - fresh))
        };
    }
}

impl RPartitions {
    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        let r = self.r;
        for pos in (1..n).rev() {
            let blocks_before = self.rgs[..pos].iter().max().map_or(0, |m| m + 1);
            let candidate = self.rgs[pos] + 1;
            if candidate > blocks_before || candidate >= r {
                continue;
            }
            let blocks = blocks_before.max(candidate + 1);
            if r - blocks > n - 1 - pos {
                continue;
            }
            self.rgs[pos] = candidate;
            complete_minimal(&mut self.rgs, pos, blocks, r);
            return true;
        }
        false
    }
}

impl Iterator for RPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.rgs);
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}
