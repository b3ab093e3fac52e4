use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use spectral_contract::contraction::{classify, contract};
use spectral_contract::io::{
    emit_interlacing_csv, format_graph, format_significant, generate_case_study, load_edges, parse_graph,
    seed_from_comments, spectrum_csv, RunReport,
};
use spectral_contract::oracle::exhaustive_interlacing_with_tol;
use spectral_contract::partition::edge_contraction_partition;
use spectral_contract::reducers::{
    cycle_invariant_reduce, node_removal_reduce, reduce_auto, verify_reduction, ReductionMode, ReductionOutcome,
    ReductionResult,
};
use spectral_contract::spectral::{graph_spectrum, MatrixKind, DEFAULT_TOL};
use spectral_contract::tucker::tucker_matrix;
use spectral_contract::Graph;

const TOL_ENV: &str = "SPECTRA_CONTRACT_TOL";

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NOT_INTERLACING: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

/// Reduce graphs by contraction while keeping their spectra interlaced.
#[derive(Debug, Parser)]
#[command(name = "spectral-contract", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random tree plus extra edges as an edge-list file.
    Generate {
        #[arg(long)]
        tree_order: usize,
        #[arg(long, default_value_t = 0)]
        extra_edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the ascending eigenvalues of a graph matrix.
    Spectra {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        matrix: MatrixArg,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Contract a graph to a target order and check interlacing.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long, value_enum)]
        matrix: ReduceMatrixArg,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        dump_tucker: Option<PathBuf>,
    },
    /// Check interlacing for a given set of contracted edges.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, value_enum)]
        matrix: MatrixArg,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Try every partition into `order` cells (graphs up to 9 vertices).
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum)]
        matrix: MatrixArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MatrixArg {
    Adjacency,
    Laplacian,
    Normalized,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReduceMatrixArg {
    Laplacian,
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Cycle,
    NodeRemoval,
    Auto,
}

impl From<MatrixArg> for MatrixKind {
    fn from(m: MatrixArg) -> Self {
        match m {
            MatrixArg::Adjacency => MatrixKind::Adjacency,
            MatrixArg::Laplacian => MatrixKind::Laplacian,
            MatrixArg::Normalized => MatrixKind::NormalizedLaplacian,
        }
    }
}

impl From<ReduceMatrixArg> for MatrixKind {
    fn from(m: ReduceMatrixArg) -> Self {
        match m {
            ReduceMatrixArg::Laplacian => MatrixKind::Laplacian,
            ReduceMatrixArg::Normalized => MatrixKind::NormalizedLaplacian,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn tolerance() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(s) => {
            let tol: f64 = s.trim().parse().with_context(|| format!("{TOL_ENV}='{s}' is not a number"))?;
            if !(tol.is_finite() && tol >= 0.0) {
                bail!("{TOL_ENV} must be a finite non-negative number");
            }
            Ok(tol)
        }
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn read_graph(path: &Path) -> Result<(Graph, Option<u64>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((g, seed_from_comments(&text)))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate { tree_order, extra_edges, seed, out } => {
            let g = generate_case_study(tree_order, extra_edges, seed)?;
            let comment = format!("tree_order={tree_order} extra_edges={extra_edges} seed={seed}");
            fs::write(&out, format_graph(&g, Some(&comment)))
                .with_context(|| format!("writing {}", out.display()))?;
            eprintln!("wrote n={} m={} to {}", g.n(), g.m(), out.display());
            Ok(EXIT_OK)
        }
        Command::Spectra { graph, matrix, csv } => {
            let (g, _) = read_graph(&graph)?;
            let spectrum = graph_spectrum(&g, matrix.into())?;
            let scale = spectrum.values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            let shown: Vec<String> = spectrum
                .values
                .iter()
                .map(|&v| if v.abs() <= 1e-12 * scale { 0.0 } else { v })
                .map(|v| format_significant(v, 12))
                .collect();
            println!("{}", shown.join(" "));
            if let Some(path) = csv {
                fs::write(&path, spectrum_csv(&spectrum.values))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(EXIT_OK)
        }
        Command::Reduce { graph, order, mode, matrix, report, csv, dump_tucker } => {
            let tol = tolerance()?;
            let (g, seed) = read_graph(&graph)?;
            if let Some(path) = dump_tucker {
                let (tree, _) = g.spanning_tree_and_cotree()?;
                fs::write(&path, tucker_matrix(&g, &tree)?.dump())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let start = Instant::now();
            let outcome = match mode {
                ModeArg::Cycle => cycle_invariant_reduce(&g, order)?,
                ModeArg::NodeRemoval => node_removal_reduce(&g, order)?,
                ModeArg::Auto => reduce_auto(&g, order)?,
            };
            let mut result = match outcome {
                ReductionOutcome::Feasible(result) => *result,
                ReductionOutcome::Infeasible { max_feasible_r } => {
                    match max_feasible_r {
                        Some(r) => eprintln!(
                            "infeasible: no contraction of this kind reaches order {order}; max_feasible_r={r}"
                        ),
                        None => eprintln!("infeasible: no contraction of this kind reaches order {order}"),
                    }
                    return Ok(EXIT_INFEASIBLE);
                }
            };
            let verdict = verify_reduction(&g, &mut result, matrix.into(), tol)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let run_report = RunReport::from_result(&g, &result, seed, elapsed);
            finish(&run_report, Some(&report), csv.as_deref())?;
            eprintln!(
                "{} contraction of {} edges to order {}: {}",
                result.mode,
                result.e_cs.len(),
                result.reduced.n(),
                if verdict.interlaces { "interlaces" } else { "does not interlace" }
            );
            Ok(if verdict.interlaces { EXIT_OK } else { EXIT_NOT_INTERLACING })
        }
        Command::Verify { graph, edges, matrix, report, csv } => {
            let tol = tolerance()?;
            let (g, seed) = read_graph(&graph)?;
            let e_cs = load_edges(&edges).with_context(|| format!("reading {}", edges.display()))?;
            let start = Instant::now();
            let classification = classify(&g, &e_cs)?;
            let partition = edge_contraction_partition(&g, &e_cs)?;
            if partition.len() == g.n() {
                bail!("the edge set is empty; nothing is contracted");
            }
            let reduced = contract(&g, &partition)?;
            let mode = if classification.cycle_invariant {
                ReductionMode::CycleInvariant
            } else {
                ReductionMode::NodeRemoval
            };
            let mut result =
                ReductionResult { mode, e_cs, partition, reduced, classification, certificate: None };
            let verdict = verify_reduction(&g, &mut result, matrix.into(), tol)?;
            let mut run_report = RunReport::from_result(&g, &result, seed, start.elapsed().as_secs_f64() * 1e3);
            run_report.mode = None;
            finish(&run_report, report.as_deref(), csv.as_deref())?;
            let c = &result.classification;
            eprintln!(
                "order {} -> {}: edge_matching={} cycle_invariant={} node_removal_equivalent={} interlaces={}",
                g.n(),
                result.reduced.n(),
                c.edge_matching,
                c.cycle_invariant,
                c.node_removal_equivalent(),
                verdict.interlaces
            );
            Ok(if verdict.interlaces { EXIT_OK } else { EXIT_NOT_INTERLACING })
        }
        Command::Oracle { graph, order, matrix } => {
            let tol = tolerance()?;
            let (g, _) = read_graph(&graph)?;
            let kind: MatrixKind = matrix.into();
            let res = exhaustive_interlacing_with_tol(&g, order, kind, tol)?;
            let out = serde_json::json!({
                "n": g.n(),
                "r": order,
                "matrix": kind,
                "total": res.total(),
                "passing": res.passing.iter().map(|p| p.cells().to_vec()).collect::<Vec<_>>(),
                "failing": res.failing_sample.iter().map(|(p, k)| serde_json::json!({
                    "cells": p.cells(),
                    "k": k,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            eprintln!("{} of {} partitions interlace", res.passing.len(), res.total());
            Ok(EXIT_OK)
        }
    }
}

fn finish(report: &RunReport, json: Option<&Path>, csv: Option<&Path>) -> Result<()> {
    if let Some(path) = json {
        report.save(path).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = csv {
        emit_interlacing_csv(report, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
