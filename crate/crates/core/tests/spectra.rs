//! Eigenvalue solvers, graph matrices, liftings and interlacing.

mod common;

use common::Rng;
use common::*;
use proptest::prelude::*;
use spectral_contract::oracle::eig_oracle;
use spectral_contract::partition::Partition;
use spectral_contract::spectral::{
    eigenvalues, graph_matrix, graph_spectrum, interlace_values, lift, Lifting, MatrixKind, SymMatrix, DEFAULT_TOL,
};

fn random_symmetric(rng: &mut Rng, n: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, rng.signed() * 5.0).unwrap();
        }
    }
    m
}

const KINDS: [MatrixKind; 3] = [MatrixKind::Adjacency, MatrixKind::Laplacian, MatrixKind::NormalizedLaplacian];

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn jacobi_agrees_with_bisection(seed in any::<u64>(), n in 1usize..17) {
        let mut rng = Rng::new(seed);
        let m = random_symmetric(&mut rng, n);
        let fast = eigenvalues(&m).unwrap();
        let slow = eig_oracle(&m).unwrap();
        let scale = m.frobenius().max(1.0);
        prop_assert_eq!(fast.len(), n);
        for (a, b) in fast.values.iter().zip(&slow.values) {
            prop_assert!((a - b).abs() <= 1e-8 * scale, "{} vs {}", a, b);
        }
        prop_assert!(fast.values.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = fast.values.iter().sum();
        prop_assert!((sum - m.trace()).abs() <= 1e-9 * scale);
    }

    #[test]
    fn graph_spectra_agree_with_bisection(seed in any::<u64>(), n in 1usize..17, which in 0usize..3) {
        let mut rng = Rng::new(seed);
        let p = rng.unit();
        let g = random_graph(&mut rng, n, p);
        let m = graph_matrix(&g, KINDS[which]);
        let fast = graph_spectrum(&g, KINDS[which]).unwrap();
        let slow = eig_oracle(&m).unwrap();
        for (a, b) in fast.values.iter().zip(&slow.values) {
            prop_assert!((a - b).abs() <= 1e-8 * n as f64, "{} vs {}", a, b);
        }
    }

    #[test]
    fn laplacian_kernel_counts_components(seed in any::<u64>(), n in 1usize..25) {
        let mut rng = Rng::new(seed);
        let p = rng.unit() * 0.3;
        let g = random_graph(&mut rng, n, p);
        let spectrum = graph_spectrum(&g, MatrixKind::Laplacian).unwrap();
        prop_assert!(spectrum.lambda(1).abs() <= DEFAULT_TOL);
        let zeros = spectrum.values.iter().filter(|v| v.abs() <= 1e-7).count();
        prop_assert_eq!(zeros, g.connected_components().len());
        prop_assert!(spectrum.values.iter().all(|&v| v >= -DEFAULT_TOL));
    }

    #[test]
    fn normalized_spectrum_in_zero_two(seed in any::<u64>(), n in 1usize..25) {
        let mut rng = Rng::new(seed);
        let p = rng.unit();
        let g = random_graph(&mut rng, n, p);
        let spectrum = graph_spectrum(&g, MatrixKind::NormalizedLaplacian).unwrap();
        for &v in &spectrum.values {
            prop_assert!((-DEFAULT_TOL..=2.0 + DEFAULT_TOL).contains(&v), "{}", v);
        }
    }

    /// Cauchy interlacing of nested principal submatrices composes, with the
    /// error budget doubling.
    #[test]
    fn interlacing_is_transitive(seed in any::<u64>(), n in 3usize..14) {
        let mut rng = Rng::new(seed);
        let a = random_symmetric(&mut rng, n);
        let r1 = rng.range(2, n - 1);
        let r2 = rng.range(1, r1 - 1);
        let mut idx: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut idx);
        let mut keep1 = idx[..r1].to_vec();
        keep1.sort_unstable();
        let b = a.principal(&keep1);
        let mut keep2: Vec<usize> = (0..r1).collect();
        rng.shuffle(&mut keep2);
        keep2.truncate(r2);
        keep2.sort_unstable();
        let c = b.principal(&keep2);
        let (sa, sb, sc) = (eigenvalues(&a).unwrap(), eigenvalues(&b).unwrap(), eigenvalues(&c).unwrap());
        let tol = 1e-9 * a.frobenius().max(1.0);
        prop_assert!(interlace_values(&sa.values, &sb.values, tol).unwrap().interlaces);
        prop_assert!(interlace_values(&sb.values, &sc.values, tol).unwrap().interlaces);
        prop_assert!(interlace_values(&sa.values, &sc.values, 2.0 * tol).unwrap().interlaces);
    }

    #[test]
    fn interlacing_report_is_consistent(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = Rng::new(seed);
        let mut full: Vec<f64> = (0..n).map(|_| rng.signed()).collect();
        full.sort_by(f64::total_cmp);
        let r = rng.range(1, n - 1);
        let mut reduced: Vec<f64> = (0..r).map(|_| rng.signed()).collect();
        reduced.sort_by(f64::total_cmp);
        let rep = interlace_values(&full, &reduced, DEFAULT_TOL).unwrap();
        let by_hand = (0..r).all(|k| full[k] <= reduced[k] + DEFAULT_TOL && reduced[k] <= full[n - r + k] + DEFAULT_TOL);
        prop_assert_eq!(rep.interlaces, by_hand);
        prop_assert_eq!(rep.first_violation().is_none(), rep.interlaces);
        if rep.tight {
            prop_assert!(rep.interlaces);
        }
    }

    #[test]
    fn liftings_are_linear_and_injective(seed in any::<u64>(), n in 2usize..15) {
        let mut rng = Rng::new(seed);
        let pi = random_partition(&mut rng, n, n);
        let removed: Vec<usize> = (1..n).filter(|_| rng.chance(0.4)).collect();
        let kept = n - removed.len();
        let liftings: [(Lifting, usize); 3] = [
            (Lifting::Partition(&pi), pi.len()),
            (Lifting::AntiPartition(&pi), pi.len()),
            (Lifting::NodeRemoval { removed: &removed, n }, kept),
        ];
        for (kind, dim) in liftings {
            let x = rng.vector(dim);
            let y = rng.vector(dim);
            let (a, b) = (rng.signed(), rng.signed());
            let combo: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
            let (lx, ly, lc) = (lift(kind, &x).unwrap(), lift(kind, &y).unwrap(), lift(kind, &combo).unwrap());
            prop_assert_eq!(lc.len(), n);
            for i in 0..n {
                prop_assert!((lc[i] - (a * lx[i] + b * ly[i])).abs() <= 1e-12);
            }
            prop_assert!(lx.iter().any(|v| v.abs() > 0.0));
            prop_assert!(lift(kind, &vec![0.0; dim + 1]).is_err());
        }
    }
}

#[test]
fn identity_partition_lifting_is_identity() {
    let pi = Partition::identity(4);
    let x = [1.0, -2.0, 3.0, 0.5];
    assert_eq!(lift(Lifting::Partition(&pi), &x).unwrap(), x.to_vec());
    assert_eq!(lift(Lifting::AntiPartition(&pi), &x).unwrap(), x.to_vec());
}
