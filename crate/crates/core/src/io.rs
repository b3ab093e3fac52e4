//! Edge-list files, seeded case-study graphs, JSON run reports and CSV
//! spectra.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contraction::ContractionClass;
use crate::error::Error;
use crate::graph::{Edge, Graph};
use crate::partition::Partition;
use crate::reducers::{ReductionMode, ReductionResult};
use crate::spectral::MatrixKind;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("header declares {declared} edges but {found} edge lines follow")]
    CountMismatch { declared: usize, found: usize },
    #[error("report has no spectral certificate")]
    MissingCertificate,
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Graph(#[from] Error),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_pair(line: usize, text: &str) -> IoResult<(usize, usize)> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(IoError::Parse { line, reason: format!("expected two integers, got '{text}'") });
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| IoError::Parse { line, reason: format!("'{s}' is not a non-negative integer") })
    };
    Ok((num(parts[0])?, num(parts[1])?))
}

/// Parses the edge-list format: `#` comments, a `n m` header, then `m`
/// lines `u v` with 1-indexed vertices.
pub fn parse_graph(text: &str) -> IoResult<Graph> {
    let mut lines = data_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(IoError::Parse { line: 1, reason: "missing 'n m' header".into() });
    };
    let (n, m) = parse_pair(hline, header)?;
    if n == 0 {
        return Err(IoError::Parse { line: hline, reason: "graph needs at least one vertex".into() });
    }
    let mut pairs = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    for (line, text) in lines {
        let (u, v) = parse_pair(line, text)?;
        if u == 0 || v == 0 || u > n || v > n {
            return Err(IoError::Parse { line, reason: format!("vertex outside [1, {n}]") });
        }
        if u == v {
            return Err(IoError::Parse { line, reason: format!("self-loop at {u}") });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(IoError::Parse { line, reason: format!("duplicate edge {u} {v}") });
        }
        pairs.push((u, v));
    }
    if pairs.len() != m {
        return Err(IoError::CountMismatch { declared: m, found: pairs.len() });
    }
    Ok(Graph::new(n, &pairs)?)
}

pub fn load_graph(path: impl AsRef<Path>) -> IoResult<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Text form with canonical edge order; `comment` lines are prefixed by `#`.
pub fn format_graph(g: &Graph, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str(&format!("{} {}\n", g.n(), g.m()));
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.head(), e.tail()));
    }
    out
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>, comment: Option<&str>) -> IoResult<()> {
    fs::write(path, format_graph(g, comment))?;
    Ok(())
}

/// Reads `seed=<u64>` from the comment lines, as written by the generator.
pub fn seed_from_comments(text: &str) -> Option<u64> {
    text.lines()
        .map(str::trim)
        .filter(|l| l.starts_with('#'))
        .flat_map(|l| l.split_whitespace())
        .find_map(|tok| tok.strip_prefix("seed=")?.parse().ok())
}

/// One `u v` pair per line; `#` comments allowed.
pub fn parse_edges(text: &str) -> IoResult<Vec<Edge>> {
    data_lines(text)
        .map(|(line, text)| {
            let (u, v) = parse_pair(line, text)?;
            Edge::new(u, v).map_err(|e| IoError::Parse { line, reason: e.to_string() })
        })
        .collect()
}

pub fn load_edges(path: impl AsRef<Path>) -> IoResult<Vec<Edge>> {
    parse_edges(&fs::read_to_string(path)?)
}

/// One cell per line, space-separated vertices; the cells must cover
/// `[1, n]` exactly. Inverse of the partition's `Display`.
pub fn parse_partition(text: &str) -> IoResult<Partition> {
    let mut cells = Vec::new();
    let mut last_line = 0;
    for (line, body) in data_lines(text) {
        last_line = line;
        let cell = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| IoError::Parse { line, reason: format!("'{tok}' is not a vertex") })
            })
            .collect::<IoResult<Vec<usize>>>()?;
        cells.push(cell);
    }
    let n = cells.iter().map(Vec::len).sum();
    Partition::from_cells(n, &cells).map_err(|e| IoError::Parse { line: last_line.max(1), reason: e.to_string() })
}

pub fn format_partition(pi: &Partition) -> String {
    pi.to_string()
}

/// SplitMix64: a 64-bit counter passed through a mixing function.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// An independent generator seeded from this one's output.
    pub fn split(&mut self) -> SplitMix64 {
        let seed = self.next_u64();
        SplitMix64::new(seed ^ 0x5851_F42D_4C95_7F2D)
    }

    /// Uniform in `[0, bound)` by rejection; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Decodes a Prüfer sequence over `[1, n]` into its tree.
pub fn prufer_tree(n: usize, seq: &[usize]) -> crate::error::Result<Graph> {
    if n < 2 || seq.len() != n - 2 {
        return Err(Error::BadArgument(format!("Prüfer sequence of length {} for n = {n}", seq.len())));
    }
    let mut degree = vec![1usize; n + 1];
    for &s in seq {
        crate::graph::check_vertex(s, n)?;
        degree[s] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (1..=n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    let mut pairs = Vec::with_capacity(n - 1);
    for &s in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        pairs.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    pairs.push((a, b));
    Graph::new(n, &pairs)
}

/// A uniform random labelled tree on `tree_order` vertices plus
/// `extra_edges` distinct non-edges chosen uniformly. Tree and extra edges
/// come from separate streams of the same seed.
pub fn generate_case_study(tree_order: usize, extra_edges: usize, seed: u64) -> crate::error::Result<Graph> {
    let n = tree_order;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let available = n * (n - 1) / 2 - (n - 1);
    if extra_edges > available {
        return Err(Error::TooManyEdges { requested: extra_edges, available });
    }
    let mut root = SplitMix64::new(seed);
    let mut tree_rng = root.split();
    let mut edge_rng = root.split();

    let tree = match n {
        1 => Graph::edgeless(1)?,
        2 => Graph::new(2, &[(1, 2)])?,
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| tree_rng.below(n as u64) as usize + 1).collect();
            prufer_tree(n, &seq)?
        }
    };
    if extra_edges == 0 {
        return Ok(tree);
    }

    let mut edges: Vec<Edge> = tree.edges().to_vec();
    if 2 * extra_edges <= available {
        let mut taken: HashSet<Edge> = edges.iter().copied().collect();
        let mut added = 0;
        while added < extra_edges {
            let u = edge_rng.below(n as u64) as usize + 1;
            let v = edge_rng.below(n as u64) as usize + 1;
            let Ok(e) = Edge::new(u, v) else { continue };
            if taken.insert(e) {
                edges.push(e);
                added += 1;
            }
        }
    } else {
        let mut pool: Vec<Edge> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| Edge::new(u, v).expect("u < v")))
            .filter(|e| !tree.contains_edge(*e))
            .collect();
        for i in 0..extra_edges {
            let j = i + edge_rng.below((pool.len() - i) as u64) as usize;
            pool.swap(i, j);
        }
        edges.extend_from_slice(&pool[..extra_edges]);
    }
    Graph::from_edges(n, edges)
}

/// Spectra and per-`k` bounds carried by a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub matrix: MatrixKind,
    pub spectrum_full: Vec<f64>,
    pub spectrum_reduced: Vec<f64>,
    pub lambda_lower: Vec<f64>,
    pub lambda_upper: Vec<f64>,
    pub lower_margin: Vec<f64>,
    pub upper_margin: Vec<f64>,
    pub interlaces: bool,
    pub tight: bool,
    pub tol: f64,
}

/// Everything one `reduce` or `verify` run produced. Field order is the
/// JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub mode: Option<ReductionMode>,
    pub r: usize,
    pub e_cs: Vec<Edge>,
    pub cells: Vec<Vec<usize>>,
    pub reduced_edges: Vec<Edge>,
    pub classification: ContractionClass,
    pub certificate: Option<SpectralSummary>,
    pub seed: Option<u64>,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn from_result(g: &Graph, result: &ReductionResult, seed: Option<u64>, timing_ms: f64) -> Self {
        let certificate = result.certificate.as_ref().map(|c| SpectralSummary {
            matrix: c.kind,
            spectrum_full: c.full.values.clone(),
            spectrum_reduced: c.reduced.values.clone(),
            lambda_lower: c.report.lower.clone(),
            lambda_upper: c.report.upper.clone(),
            lower_margin: c.report.lower_margin.clone(),
            upper_margin: c.report.upper_margin.clone(),
            interlaces: c.report.interlaces,
            tight: c.report.tight,
            tol: c.report.tol,
        });
        RunReport {
            n: g.n(),
            m: g.m(),
            mode: Some(result.mode),
            r: result.partition.len(),
            e_cs: result.e_cs.clone(),
            cells: result.partition.cells().to_vec(),
            reduced_edges: result.reduced.edges().to_vec(),
            classification: result.classification.clone(),
            certificate,
            seed,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> IoResult<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> IoResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> IoResult<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Formats with `digits` significant digits, using a plain decimal for
/// moderate exponents and scientific notation otherwise.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV with header `k,lambda_reduced,lambda_lower,lambda_upper`, one row
/// per `k`, values to 12 significant digits.
pub fn interlacing_csv(report: &RunReport) -> IoResult<String> {
    let cert = report.certificate.as_ref().ok_or(IoError::MissingCertificate)?;
    let mut out = String::from("k,lambda_reduced,lambda_lower,lambda_upper\n");
    for k in 0..cert.spectrum_reduced.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            k + 1,
            format_significant(cert.spectrum_reduced[k], 12),
            format_significant(cert.lambda_lower[k], 12),
            format_significant(cert.lambda_upper[k], 12),
        ));
    }
    Ok(out)
}

pub fn emit_interlacing_csv(report: &RunReport, path: impl AsRef<Path>) -> IoResult<()> {
    fs::write(path, interlacing_csv(report)?)?;
    Ok(())
}

/// Spectrum CSV with header `k,lambda`.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut out = String::from("k,lambda\n");
    for (k, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", k + 1, format_significant(*v, 12)));
    }
    out
}
