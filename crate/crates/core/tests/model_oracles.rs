mod common;

use common::{dense_spectrum, params};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use ssh_emitter::model::*;
use ssh_emitter::numerics::{Accumulate, TridiagonalEigen};
use std::f64::consts::PI;

#[test]
fn strong_coupling_extremes_of_the_truncated_spectrum() {
    let p = params(1.0, 1.5, 2.5);
    let ev = dense_spectrum(&p, 400, true);
    assert!((ev[ev.len() - 1] - 2.98807).abs() < 1e-5);
    assert!((ev[0] + 2.98807).abs() < 1e-5);
}

#[test]
fn tridiagonal_solver_agrees_with_dense_solver() {
    for (j1, j2, g, n) in [(1.5, 1.0, 0.1, 150), (0.7, 1.3, 2.0, 120), (1.0, 1.0, 0.5, 90)] {
        let p = params(j1, j2, g);
        let h = build_hamiltonian(&p, n, true).unwrap();
        let tri = TridiagonalEigen::new(&h.diag(), h.offdiag(), Accumulate::None).unwrap();
        let dense = dense_spectrum(&p, n, true);
        for (a, b) in tri.values().iter().zip(&dense) {
            assert!((a - b).abs() < 1e-11);
        }
    }
}

#[test]
fn spectrum_is_symmetric_about_zero() {
    for (j1, j2, g) in [(1.5, 1.0, 0.3), (0.6, 0.8, 1.7), (1.0, 1.0, 0.0)] {
        for &em in &[true, false] {
            let ev = dense_spectrum(&params(j1, j2, g), 40, em);
            let n = ev.len();
            for i in 0..n {
                assert!((ev[i] + ev[n - 1 - i]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn dispersion_range_by_sampling() {
    let p = params(1.3, 0.4, 0.0);
    let samples: Vec<f64> = (0..=2000)
        .map(|i| dispersion(&p, -PI + 2.0 * PI * i as f64 / 2000.0, Band::Upper))
        .collect();
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(0.0, f64::max);
    assert!((min - 0.9).abs() < 1e-12);
    assert!((max - 1.7).abs() < 1e-12);
}

#[test]
fn reference_winding_examples() {
    assert_eq!(winding_of(&params(0.6, 0.8, 0.0), WindingVariant::Bare).unwrap(), 0);
    assert_eq!(winding_of(&params(0.6, 0.4, 0.0), WindingVariant::Bare).unwrap(), 1);
    assert_eq!(winding_of(&params(1.5, 1.0, 1.0), WindingVariant::Tilde).unwrap(), 0);
    assert_eq!(winding_of(&params(1.5, 1.0, 0.1), WindingVariant::Tilde).unwrap(), 1);
}

#[test]
fn dense_eigenvectors_anticommute_with_chirality() {
    // Chiral partner of each eigenvector has the opposite energy.
    let p = params(1.2, 0.7, 0.4);
    let h = build_hamiltonian(&p, 25, true).unwrap();
    let c = chiral_operator(25, true).to_dense();
    let eig = SymmetricEigen::new(h.to_dense());
    for i in 0..eig.eigenvalues.len() {
        let v = eig.eigenvectors.column(i);
        let partner = &c * v;
        let hv = h.to_dense() * &partner;
        assert!((hv + eig.eigenvalues[i] * &partner).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chiral_anticommutation_is_exact(
        j1 in 0.01f64..5.0, j2 in 0.01f64..5.0, g in 0.0f64..5.0,
        n in 1usize..=64, em in any::<bool>()
    ) {
        let h = build_hamiltonian(&params(j1, j2, g), n, em).unwrap();
        let conj = chiral_operator(n, em).conjugate(&h).unwrap();
        prop_assert_eq!(conj, -h.to_dense());
    }

    #[test]
    fn winding_factor_modulus(j1 in 0.01f64..5.0, j2 in 0.01f64..5.0, k in -PI..PI) {
        let p = params(j1, j2, 0.0);
        let w = winding_factor(&p, k, WindingVariant::Bare);
        prop_assert!((w.norm() - dispersion(&p, k, Band::Upper)).abs() < 1e-12);
    }

    #[test]
    fn winding_stable_under_sample_doubling(j1 in 0.05f64..3.0, j2 in 0.05f64..3.0, g in 0.0f64..3.0) {
        let p = params(j1, j2, g);
        for variant in [WindingVariant::Bare, WindingVariant::Tilde, WindingVariant::BSite] {
            let curve = |k| winding_factor(&p, k, variant);
            let a = winding_number(curve, 1 << 10);
            let b = winding_number(curve, 1 << 11);
            match (a, b) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "sampling changed degeneracy"),
            }
        }
    }
}
