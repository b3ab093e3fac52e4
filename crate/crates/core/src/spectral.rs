//! Graph matrices, a Jacobi eigensolver, Rayleigh quotients, liftings from
//! `R^r` into `R^n`, and the interlacing verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Default slack on interlacing margins.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Jacobi stops once the off-diagonal norm drops below this fraction of `‖M‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from row-major storage; the upper triangle wins and is
    /// mirrored onto the lower one.
    pub fn from_upper(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, data[i * n + j])?;
            }
        }
        Ok(m)
    }

    /// Builds from rows that must already be symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !rows[i][j].is_finite() || rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidMatrix);
                }
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Ok(SymMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-indexed.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidMatrix);
        }
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `M - tI`.
    pub fn shifted(&self, t: f64) -> SymMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] -= t;
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok((0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }

    /// Principal submatrix on the given 0-indexed rows.
    pub fn principal(&self, keep: &[usize]) -> SymMatrix {
        let k = keep.len();
        let mut m = SymMatrix::zeros(k);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.data[a * k + b] = self.get(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    NormalizedLaplacian,
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adjacency" | "a" => Ok(MatrixKind::Adjacency),
            "laplacian" | "l" => Ok(MatrixKind::Laplacian),
            "normalized" | "normalized_laplacian" | "normalized-laplacian" => {
                Ok(MatrixKind::NormalizedLaplacian)
            }
            _ => Err(Error::BadArgument(format!("unknown matrix kind '{s}'"))),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::NormalizedLaplacian => "normalized",
        })
    }
}

/// Adjacency, Laplacian `D - A`, or normalized Laplacian
/// `I - D^{-1/2} A D^{-1/2}`. Isolated vertices get a zero row in every kind.
pub fn graph_matrix(g: &Graph, kind: MatrixKind) -> SymMatrix {
    let n = g.n();
    let deg = g.degrees();
    let mut m = SymMatrix::zeros(n);
    for e in g.edges() {
        let (u, v) = (e.head() - 1, e.tail() - 1);
        let w = match kind {
            MatrixKind::Adjacency => 1.0,
            MatrixKind::Laplacian => -1.0,
            MatrixKind::NormalizedLaplacian => -1.0 / ((deg[u] * deg[v]) as f64).sqrt(),
        };
        m.data[u * n + v] = w;
        m.data[v * n + u] = w;
    }
    for (v, &d) in deg.iter().enumerate() {
        m.data[v * n + v] = match kind {
            MatrixKind::Adjacency => 0.0,
            MatrixKind::Laplacian => d as f64,
            MatrixKind::NormalizedLaplacian if d > 0 => 1.0,
            MatrixKind::NormalizedLaplacian => 0.0,
        };
    }
    m
}

/// Eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub tol: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `λ_k`, 1-indexed.
    pub fn lambda(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

/// Cyclic Jacobi rotations on a dense copy of `m`.
pub fn eigenvalues(m: &SymMatrix) -> Result<Spectrum> {
    let n = m.n;
    let mut a = m.data.clone();
    let norm = m.frobenius();
    let threshold = JACOBI_REL_TOL * norm;
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut converged = off(&a) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
        sweep += 1;
        converged = off(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(Spectrum { values, tol: threshold })
}

/// Spectrum of one of the three graph matrices.
pub fn graph_spectrum(g: &Graph, kind: MatrixKind) -> Result<Spectrum> {
    eigenvalues(&graph_matrix(g, kind))
}

/// `xᵀMx / xᵀx`.
pub fn rayleigh(m: &SymMatrix, x: &[f64]) -> Result<f64> {
    let mx = m.mul_vec(x)?;
    let den: f64 = x.iter().map(|v| v * v).sum();
    if den == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>() / den)
}

fn edge_sum(g: &Graph, x: &[f64]) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: x.len() });
    }
    Ok(g.edges()
        .iter()
        .map(|e| (x[e.head() - 1] - x[e.tail() - 1]).powi(2))
        .sum())
}

/// Laplacian quotient as an edge sum: `Σ_E (x_u − x_v)² / Σ x_v²`.
pub fn laplacian_quotient(g: &Graph, x: &[f64]) -> Result<f64> {
    let num = edge_sum(g, x)?;
    let den: f64 = x.iter().map(|v| v * v).sum();
    if den == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(num / den)
}

/// Degree-weighted quotient `Σ_E (x_u − x_v)² / Σ d_v x_v²`. Equals
/// `rayleigh(ℒ, D^{1/2} x)` when no vertex is isolated.
pub fn normalized_quotient(g: &Graph, x: &[f64]) -> Result<f64> {
    let num = edge_sum(g, x)?;
    let deg = g.degrees();
    let den: f64 = x.iter().zip(&deg).map(|(v, &d)| d as f64 * v * v).sum();
    if den == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(num / den)
}

/// The three injections `R^r → R^n`.
#[derive(Debug, Clone, Copy)]
pub enum Lifting<'a> {
    /// Copies `x̃_i` onto every member of cell `i`.
    Partition(&'a Partition),
    /// `x̃_i` on the smallest member of cell `i`, `−x̃_i/(|C_i|−1)` on the rest.
    AntiPartition(&'a Partition),
    /// Zeros on `removed`, `x̃` on the kept vertices in ascending order.
    NodeRemoval { removed: &'a [usize], n: usize },
}

pub fn lift(kind: Lifting<'_>, x: &[f64]) -> Result<Vec<f64>> {
    match kind {
        Lifting::Partition(pi) | Lifting::AntiPartition(pi) => {
            if x.len() != pi.len() {
                return Err(Error::DimensionMismatch { expected: pi.len(), found: x.len() });
            }
            let anti = matches!(kind, Lifting::AntiPartition(_));
            let mut out = vec![0.0; pi.n()];
            for (i, cell) in pi.cells().iter().enumerate() {
                for (j, &v) in cell.iter().enumerate() {
                    out[v - 1] = if anti && j > 0 {
                        -x[i] / (cell.len() - 1) as f64
                    } else {
                        x[i]
                    };
                }
            }
            Ok(out)
        }
        Lifting::NodeRemoval { removed, n } => {
            let mut gone = vec![false; n];
            for &v in removed {
                crate::graph::check_vertex(v, n)?;
                gone[v - 1] = true;
            }
            let kept = gone.iter().filter(|g| !**g).count();
            if x.len() != kept {
                return Err(Error::DimensionMismatch { expected: kept, found: x.len() });
            }
            let mut it = x.iter();
            Ok(gone
                .iter()
                .map(|&g| if g { 0.0 } else { *it.next().expect("sized above") })
                .collect())
        }
    }
}

/// Per-`k` margins of `λ_k(A) ≤ λ_k(B) ≤ λ_{n−r+k}(A)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport {
    pub n: usize,
    pub r: usize,
    /// `λ_k(B)`.
    pub reduced: Vec<f64>,
    /// `λ_k(A)`.
    pub lower: Vec<f64>,
    /// `λ_{n−r+k}(A)`.
    pub upper: Vec<f64>,
    pub lower_margin: Vec<f64>,
    pub upper_margin: Vec<f64>,
    pub interlaces: bool,
    pub tight: bool,
    pub tol: f64,
}

impl InterlacingReport {
    /// First `k` (1-indexed) with a margin below `−tol`.
    pub fn first_violation(&self) -> Option<usize> {
        (0..self.r)
            .find(|&i| self.lower_margin[i] < -self.tol || self.upper_margin[i] < -self.tol)
            .map(|i| i + 1)
    }

    pub fn min_margin(&self) -> f64 {
        self.lower_margin
            .iter()
            .chain(&self.upper_margin)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Does `reduced` interlace `full`?
pub fn check_interlacing(full: &Spectrum, reduced: &Spectrum, tol: f64) -> Result<InterlacingReport> {
    interlace_values(&full.values, &reduced.values, tol)
}

pub fn interlace_values(full: &[f64], reduced: &[f64], tol: f64) -> Result<InterlacingReport> {
    let (n, r) = (full.len(), reduced.len());
    if r >= n {
        return Err(Error::OrderMismatch { reduced: r, full: n });
    }
    let lower: Vec<f64> = full[..r].to_vec();
    let upper: Vec<f64> = full[n - r..].to_vec();
    let lower_margin: Vec<f64> = (0..r).map(|k| reduced[k] - lower[k]).collect();
    let upper_margin: Vec<f64> = (0..r).map(|k| upper[k] - reduced[k]).collect();
    let interlaces = lower_margin.iter().chain(&upper_margin).all(|&m| m >= -tol);
    let tight = interlaces && (0..r).all(|k| lower_margin[k] <= tol || upper_margin[k] <= tol);
    Ok(InterlacingReport {
        n,
        r,
        reduced: reduced.to_vec(),
        lower,
        upper,
        lower_margin,
        upper_margin,
        interlaces,
        tight,
        tol,
    })
}
