mod common;

use common::{harmonic_aggregate, random_aggregate};
use dqc_core::aggregate::SiteOperatorSet;
use dqc_core::linalg::{complexify, diagonalize, eigen_residual, unitarity_defect};
use dqc_core::polariton::{build_polariton_hamiltonian, CavitySpec, PolaritonEigensystem};
use proptest::prelude::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn vanishing_coupling_recovers_bare_manifolds() {
    let spec = random_aggregate(5, 11);
    let ops = SiteOperatorSet::build(&spec).unwrap();
    let wc = 15400.0;
    let eig = PolaritonEigensystem::build(&ops, &CavitySpec::new(wc, 1e-7)).unwrap();
    let e1 = diagonalize(&complexify(&ops.h1)).unwrap().energies;
    let e2 = diagonalize(&complexify(&ops.h2)).unwrap().energies;

    let mut want1 = e1.clone();
    want1.push(wc);
    let mut want2 = e2.clone();
    want2.extend(e1.iter().map(|e| e + wc));
    want2.push(2.0 * wc);
    for (got, want) in [(&eig.manifolds[1].energies, sorted(want1)), (&eig.manifolds[2].energies, sorted(want2))] {
        assert_eq!(got.len(), want.len());
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }
}

#[test]
fn harmonic_polaritons_add() {
    let spec = harmonic_aggregate(&[15100.0, 15350.0, 15500.0], 90.0);
    let ops = SiteOperatorSet::build(&spec).unwrap();
    let eig = PolaritonEigensystem::build(&ops, &CavitySpec::new(15300.0, 140.0)).unwrap();
    let e1 = &eig.manifolds[1].energies;
    let mut sums = Vec::new();
    for a in 0..e1.len() {
        for b in a..e1.len() {
            sums.push(e1[a] + e1[b]);
        }
    }
    for (x, y) in eig.manifolds[2].energies.iter().zip(sorted(sums)) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn placeholder_dimensions() {
    let ops = SiteOperatorSet::build(&dqc_core::aggregate::AggregateSpec::placeholder()).unwrap();
    let eig = PolaritonEigensystem::build(&ops, &CavitySpec::default()).unwrap();
    assert_eq!(eig.dims(), [1, 15, 120]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn eigensystem_is_exact(n in 1usize..6, seed in any::<u64>(), wc in 14000.0f64..16500.0, g in 0.0f64..300.0) {
        let ops = SiteOperatorSet::build(&random_aggregate(n, seed)).unwrap();
        let cavity = CavitySpec::new(wc, g);
        let eig = PolaritonEigensystem::build(&ops, &cavity).unwrap();
        for m in 1..=2 {
            let h = complexify(&build_polariton_hamiltonian(&ops, &cavity, m).unwrap());
            let man = &eig.manifolds[m];
            let he = dqc_core::linalg::HermitianEigen { energies: man.energies.clone(), vectors: man.transform.clone() };
            prop_assert!(eigen_residual(&h, &he) < 1e-9);
            prop_assert!(unitarity_defect(&man.transform) < 1e-10);
            prop_assert!(man.energies.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
