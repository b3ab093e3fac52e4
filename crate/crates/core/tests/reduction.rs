//! Reducers against the oracles, and file and report round trips.

mod common;

use std::time::Instant;

use common::Rng;
use common::*;
use proptest::prelude::*;
use spectral_contract::contraction::contract;
use spectral_contract::io::{
    generate_case_study, interlacing_csv, load_graph, parse_partition, format_partition, save_graph, RunReport,
};
use spectral_contract::oracle::{bridges, connected_graphs, node_removal_feasible};
use spectral_contract::partition::edge_contraction_partition;
use spectral_contract::reducers::{
    cycle_invariant_reduce, node_removal_reduce, verify_reduction, ReductionMode, ReductionOutcome,
};
use spectral_contract::spectral::{MatrixKind, DEFAULT_TOL};
use spectral_contract::Graph;

fn check_result(g: &Graph, outcome: ReductionOutcome, r: usize, kind: MatrixKind) -> Result<(), TestCaseError> {
    let mut res = match outcome {
        ReductionOutcome::Feasible(res) => *res,
        ReductionOutcome::Infeasible { .. } => return Ok(()),
    };
    prop_assert_eq!(res.reduced.n(), r);
    prop_assert_eq!(&res.partition, &edge_contraction_partition(g, &res.e_cs).unwrap());
    prop_assert_eq!(&res.reduced, &contract(g, &res.partition).unwrap());
    match res.mode {
        ReductionMode::CycleInvariant => prop_assert!(res.classification.cycle_invariant),
        ReductionMode::NodeRemoval => prop_assert!(res.classification.node_removal_equivalent()),
    }
    let rep = verify_reduction(g, &mut res, kind, DEFAULT_TOL).unwrap();
    prop_assert!(rep.interlaces, "{:?} min margin {}", res.e_cs, rep.min_margin());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn cycle_invariant_reductions_interlace(seed in any::<u64>(), n in 6usize..51) {
        let mut rng = Rng::new(seed);
        let g = random_connected(&mut rng, n, n / 3);
        let r = rng.range(1, n - 1);
        let outcome = cycle_invariant_reduce(&g, r).unwrap();
        let feasible = bridges(&g).len() >= n - r;
        prop_assert_eq!(outcome.is_feasible(), feasible);
        if let ReductionOutcome::Infeasible { max_feasible_r } = &outcome {
            prop_assert_eq!(*max_feasible_r, Some(n - bridges(&g).len()));
        }
        check_result(&g, outcome, r, MatrixKind::NormalizedLaplacian)?;
    }

    #[test]
    fn node_removal_reductions_interlace(seed in any::<u64>(), n in 6usize..31) {
        let mut rng = Rng::new(seed);
        let g = random_connected(&mut rng, n, n / 3);
        let r = rng.range(n / 2, n - 1);
        let outcome = node_removal_reduce(&g, r).unwrap();
        check_result(&g, outcome, r, MatrixKind::Laplacian)?;
    }
}

#[test]
fn reducers_complete_on_small_graphs() {
    for n in 2..=7 {
        for g in connected_graphs(n).unwrap() {
            let bridge_count = bridges(&g).len();
            for r in 1..n {
                let cycle = cycle_invariant_reduce(&g, r).unwrap();
                assert_eq!(cycle.is_feasible(), bridge_count >= n - r, "cycle {g:?} r={r}");
                let node = node_removal_reduce(&g, r).unwrap();
                assert_eq!(node.is_feasible(), node_removal_feasible(&g, r).unwrap(), "node {g:?} r={r}");
                if let Some(res) = node.feasible() {
                    assert_eq!(res.reduced.n(), r);
                }
            }
        }
    }
}

/// Cycle-invariant reduction is near linear in `m`; doubling the graph should
/// not cost much more than double.
#[test]
fn cycle_reduction_scales() {
    let time = |n: usize| {
        let g = generate_case_study(n, n / 10, 7).unwrap();
        let r = n - bridges(&g).len().min(n - 1);
        let start = Instant::now();
        for _ in 0..3 {
            cycle_invariant_reduce(&g, r.max(1)).unwrap();
        }
        start.elapsed().as_secs_f64()
    };
    time(200);
    let small = time(400).max(1e-4);
    let large = time(800);
    assert!(large <= 4.0 * 2.0 * small.max(1e-3), "400: {small}s, 800: {large}s");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = Rng::new(seed);
        let p = rng.unit() * 0.3;
        let g = random_graph(&mut rng, n, p);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        save_graph(&g, &path, Some("round trip")).unwrap();
        prop_assert_eq!(load_graph(&path).unwrap(), g);
    }

    #[test]
    fn partition_text_round_trips(seed in any::<u64>(), n in 1usize..20) {
        let mut rng = Rng::new(seed);
        let pi = random_partition(&mut rng, n, n);
        prop_assert_eq!(parse_partition(&format_partition(&pi)).unwrap(), pi);
    }

    #[test]
    fn reports_round_trip_and_repeat(seed in any::<u64>(), n in 6usize..30) {
        let g = generate_case_study(n, n / 4, seed).unwrap();
        let run = || {
            let outcome = cycle_invariant_reduce(&g, n - 1).unwrap();
            let mut res = outcome.feasible()?;
            verify_reduction(&g, &mut res, MatrixKind::NormalizedLaplacian, DEFAULT_TOL).unwrap();
            Some(RunReport::from_result(&g, &res, Some(seed), 0.0))
        };
        let (Some(a), Some(b)) = (run(), run()) else { return Ok(()) };
        prop_assert_eq!(&a, &b);
        let back = RunReport::from_json(&a.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &a);

        let csv = interlacing_csv(&a).unwrap();
        let summary = a.certificate.as_ref().unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        prop_assert_eq!(rows[0], "k,lambda_reduced,lambda_lower,lambda_upper");
        prop_assert_eq!(rows.len(), a.r + 1);
        let mut ok = true;
        for (k, row) in rows[1..].iter().enumerate() {
            let cols: Vec<f64> = row.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
            prop_assert!((cols[0] - summary.spectrum_reduced[k]).abs() <= 1e-9);
            ok &= cols[1] <= cols[0] + summary.tol + 1e-9 && cols[0] <= cols[2] + summary.tol + 1e-9;
        }
        prop_assert_eq!(ok, summary.interlaces);
    }

    #[test]
    fn generated_case_study_shape(seed in any::<u64>()) {
        let g = generate_case_study(50, 10, seed).unwrap();
        prop_assert_eq!(g.n(), 50);
        prop_assert_eq!(g.m(), 59);
        prop_assert!(g.is_connected());
        prop_assert_eq!(generate_case_study(50, 10, seed).unwrap(), g);
    }
}
