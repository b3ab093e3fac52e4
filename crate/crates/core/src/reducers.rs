//! Order reduction by bridge contraction and by node-removal-equivalent
//! contraction, plus spectral verification of a reduction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::contraction::{anchored_cells, classify, compatible, contract, AnchoredCell, ContractionClass};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::partition::{edge_contraction_partition, Partition};
use crate::spectral::{check_interlacing, graph_spectrum, InterlacingReport, MatrixKind, Spectrum};
use crate::tucker::tucker_matrix;

/// Upper bound on backtracking steps in the node-removal subset search.
pub const NODE_REMOVAL_SEARCH_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMode {
    CycleInvariant,
    NodeRemoval,
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionMode::CycleInvariant => "cycle",
            ReductionMode::NodeRemoval => "node-removal",
        })
    }
}

impl FromStr for ReductionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" | "cycle_invariant" | "cycle-invariant" => Ok(ReductionMode::CycleInvariant),
            "node-removal" | "node_removal" => Ok(ReductionMode::NodeRemoval),
            _ => Err(Error::BadArgument(format!("unknown reduction mode '{s}'"))),
        }
    }
}

/// Both spectra and the interlacing verdict for a reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: MatrixKind,
    pub full: Spectrum,
    pub reduced: Spectrum,
    pub report: InterlacingReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult {
    pub mode: ReductionMode,
    pub e_cs: Vec<Edge>,
    pub partition: Partition,
    pub reduced: Graph,
    pub classification: ContractionClass,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReductionOutcome {
    Feasible(Box<ReductionResult>),
    /// No contraction of the requested kind reaches the target order.
    /// `max_feasible_r` is the smallest order the method can reach, when known.
    Infeasible { max_feasible_r: Option<usize> },
}

impl ReductionOutcome {
    pub fn feasible(self) -> Option<ReductionResult> {
        match self {
            ReductionOutcome::Feasible(r) => Some(*r),
            ReductionOutcome::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, ReductionOutcome::Feasible(_))
    }
}

fn check_request(g: &Graph, r: usize) -> Result<()> {
    if r < 1 || r >= g.n() {
        return Err(Error::BadOrder { r, n: g.n() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn finish(g: &Graph, mode: ReductionMode, e_cs: Vec<Edge>) -> Result<ReductionResult> {
    let partition = edge_contraction_partition(g, &e_cs)?;
    let reduced = contract(g, &partition)?;
    let classification = classify(g, &e_cs)?;
    Ok(ReductionResult { mode, e_cs, partition, reduced, classification, certificate: None })
}

/// Contracts the first `n − r` bridges (zero Tucker rows) in canonical edge
/// order.
pub fn cycle_invariant_reduce(g: &Graph, r: usize) -> Result<ReductionOutcome> {
    check_request(g, r)?;
    let n = g.n();
    let (tree, _) = g.spanning_tree_and_cotree()?;
    let zero_rows = tucker_matrix(g, &tree)?.zero_rows();
    if zero_rows.len() < n - r {
        return Ok(ReductionOutcome::Infeasible { max_feasible_r: Some(n - zero_rows.len()) });
    }
    let e_cs = zero_rows[..n - r].to_vec();
    let result = finish(g, ReductionMode::CycleInvariant, e_cs)?;
    debug_assert!(result.classification.cycle_invariant);
    Ok(ReductionOutcome::Feasible(Box::new(result)))
}

/// Picks compatible anchored cells `(v, C)` covering exactly `n − r`
/// vertices and contracts `∪ E(G[C ∪ v])`. Cells whose induced subgraph
/// with the anchor is a tree are tried first, then all cells.
pub fn node_removal_reduce(g: &Graph, r: usize) -> Result<ReductionOutcome> {
    check_request(g, r)?;
    let target = g.n() - r;
    let mut pool: Vec<AnchoredCell> = anchored_cells(g)?
        .into_iter()
        .filter(|c| c.cell.len() <= target)
        .collect();
    pool.sort_by(|a, b| b.cell.len().cmp(&a.cell.len()));

    let tree_like: Vec<AnchoredCell> = pool
        .iter()
        .filter(|c| c.edges(g).len() == c.cell.len())
        .cloned()
        .collect();
    let mut budget = NODE_REMOVAL_SEARCH_LIMIT;
    let mut chosen = select_cells(&tree_like, target, &mut budget);
    if chosen.is_none() && tree_like.len() < pool.len() {
        chosen = select_cells(&pool, target, &mut budget);
    }
    if budget == 0 && chosen.is_none() {
        return Err(Error::TooLarge {
            what: "node-removal search steps",
            value: NODE_REMOVAL_SEARCH_LIMIT,
            limit: NODE_REMOVAL_SEARCH_LIMIT,
        });
    }
    let Some(cells) = chosen else {
        return Ok(ReductionOutcome::Infeasible { max_feasible_r: None });
    };
    let mut e_cs: Vec<Edge> = cells.iter().flat_map(|c| c.edges(g)).collect();
    e_cs.sort_unstable();
    e_cs.dedup();
    let result = finish(g, ReductionMode::NodeRemoval, e_cs)?;
    if !result.classification.edge_matching || result.classification.node_removal_witness.is_none() {
        return Err(Error::InconsistentResult(
            "selected cells do not give a node-removal-equivalent contraction".into(),
        ));
    }
    Ok(ReductionOutcome::Feasible(Box::new(result)))
}

/// Depth-first subset search with an exact total and suffix-sum pruning.
fn select_cells(pool: &[AnchoredCell], target: usize, budget: &mut usize) -> Option<Vec<AnchoredCell>> {
    let mut suffix = vec![0usize; pool.len() + 1];
    for i in (0..pool.len()).rev() {
        suffix[i] = suffix[i + 1] + pool[i].cell.len();
    }

    fn go(
        pool: &[AnchoredCell],
        suffix: &[usize],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        budget: &mut usize,
    ) -> bool {
        if remaining == 0 {
            return true;
        }
        for i in start..pool.len() {
            if suffix[i] < remaining || *budget == 0 {
                return false;
            }
            *budget -= 1;
            let c = &pool[i];
            if c.cell.len() > remaining || chosen.iter().any(|&j| !compatible(&pool[j], c)) {
                continue;
            }
            chosen.push(i);
            if go(pool, suffix, i + 1, remaining - c.cell.len(), chosen, budget) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    go(pool, &suffix, 0, target, &mut chosen, budget)
        .then(|| chosen.into_iter().map(|i| pool[i].clone()).collect())
}

/// Tries the bridge reduction first and falls back to node removal. When
/// both fail, reports the bridge method's reachable order.
pub fn reduce_auto(g: &Graph, r: usize) -> Result<ReductionOutcome> {
    match cycle_invariant_reduce(g, r)? {
        ReductionOutcome::Feasible(res) => Ok(ReductionOutcome::Feasible(res)),
        infeasible => match node_removal_reduce(g, r)? {
            ReductionOutcome::Feasible(res) => Ok(ReductionOutcome::Feasible(res)),
            ReductionOutcome::Infeasible { .. } => Ok(infeasible),
        },
    }
}

/// Measures interlacing of the reduction's spectra and stores the
/// certificate on `result`.
pub fn verify_reduction(
    g: &Graph,
    result: &mut ReductionResult,
    kind: MatrixKind,
    tol: f64,
) -> Result<InterlacingReport> {
    let partition = edge_contraction_partition(g, &result.e_cs)
        .map_err(|e| Error::InconsistentResult(e.to_string()))?;
    if partition != result.partition {
        return Err(Error::InconsistentResult("partition does not match e_cs".into()));
    }
    if contract(g, &partition)? != result.reduced {
        return Err(Error::InconsistentResult("reduced graph does not match e_cs".into()));
    }
    let full = graph_spectrum(g, kind)?;
    let reduced = graph_spectrum(&result.reduced, kind)?;
    let report = check_interlacing(&full, &reduced, tol)?;
    result.certificate = Some(Certificate { kind, full, reduced, report: report.clone() });
    Ok(report)
}
