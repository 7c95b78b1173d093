mod common;

use blockrange::gen::{random_block_psd, random_hermitian, random_orthonormal_basis};
use blockrange::majorize::{
    antinorm_dominance, block_diag_pinch, ky_fan_antinorm, ky_fan_norm, maj_tol, majorization, majorization_of_spectra,
    pinch_to_diagonal, MajorizationVerdict, Relation,
};
use blockrange::matcore::HermitianMatrix;
use common::{random_psd, rng};
use proptest::prelude::*;

fn pinch_pair(n: usize, seed: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut g = rng(seed);
    let h = random_hermitian(n, &mut g);
    let basis = random_orthonormal_basis(n, &mut g);
    (pinch_to_diagonal(&h, &basis).unwrap(), h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ky_fan_sums_are_complementary(n in 1usize..9, seed in any::<u64>()) {
        let a = random_hermitian(n, &mut rng(seed));
        let scale = 1e-10 * (1.0 + a.as_matrix().frobenius_norm());
        for k in 1..n {
            let total = ky_fan_norm(&a, k).unwrap() + ky_fan_antinorm(&a, n - k).unwrap();
            prop_assert!((total - a.trace()).abs() <= scale);
        }
        prop_assert!((ky_fan_norm(&a, n).unwrap() - a.trace()).abs() <= scale);
        prop_assert!(ky_fan_norm(&a, 0).is_err() && ky_fan_antinorm(&a, n + 1).is_err());
    }

    #[test]
    fn majorization_is_transitive(n in 1usize..7, seed in any::<u64>()) {
        let mut g = rng(seed);
        let c = random_psd(n, &mut g);
        let b = pinch_to_diagonal(&c, &random_orthonormal_basis(n, &mut g)).unwrap();
        let b = b.congruence(&blockrange::gen::random_unitary(n, &mut g));
        let a = pinch_to_diagonal(&b, &random_orthonormal_basis(n, &mut g)).unwrap();
        let tol = maj_tol(c.trace());
        prop_assert!(majorization(&a, &b, tol).unwrap().holds());
        prop_assert!(majorization(&b, &c, tol).unwrap().holds());
        prop_assert!(majorization(&a, &c, tol).unwrap().holds());
    }

    #[test]
    fn pinching_preserves_the_trace(n in 1usize..9, seed in any::<u64>()) {
        let (d, h) = pinch_pair(n, seed);
        prop_assert!((d.trace() - h.trace()).abs() <= 1e-12 * (1.0 + h.as_matrix().frobenius_norm()));
    }

    #[test]
    fn report_invariants(left in prop::collection::vec(-10.0f64..10.0, 1..8), seed in any::<u64>()) {
        let mut g = rng(seed);
        let right: Vec<f64> = left.iter().map(|v| v + rand::Rng::random_range(&mut g, -1.0..1.0)).collect();
        let r = majorization_of_spectra(&left, &right, 1e-9).unwrap();
        prop_assert_eq!(r.relation, Relation::Majorization);
        prop_assert_eq!(r.k_partial_sums_left.len(), left.len());
        prop_assert!(r.worst_k >= 1 && r.worst_k <= left.len());
        match r.verdict {
            MajorizationVerdict::Holds => prop_assert!(r.min_slack >= -r.tol && r.trace_gap.abs() <= r.tol),
            MajorizationVerdict::HoldsWeaklyOnly => prop_assert!(r.min_slack >= -r.tol && r.trace_gap.abs() > r.tol),
            MajorizationVerdict::Fails => prop_assert!(r.min_slack < -r.tol),
        }
    }
}

#[test]
fn pinched_diagonal_is_majorized_on_1000_instances() {
    for i in 0..1000u64 {
        let (d, h) = pinch_pair(1 + (i % 10) as usize, i);
        let r = majorization(&d, &h, maj_tol(h.trace())).unwrap();
        assert!(r.holds(), "instance {i}: {r:?}");
    }
}

#[test]
fn majorization_implies_antinorm_dominance_on_1000_instances() {
    for i in 0..1000u64 {
        let (d, h) = pinch_pair(1 + (i % 10) as usize, 50_000 + i);
        let tol = maj_tol(h.trace());
        assert!(majorization(&d, &h, tol).unwrap().holds());
        let r = antinorm_dominance(&d, &h, tol).unwrap();
        assert!(r.holds(), "instance {i}: {r:?}");
    }
}

#[test]
fn block_pinch_is_majorized_on_1000_instances() {
    for i in 0..1000u64 {
        let m = random_block_psd(1 + (i % 8) as usize, i, None).unwrap().assemble();
        let p = block_diag_pinch(&m).unwrap();
        let r = majorization(&p, &m, maj_tol(m.trace())).unwrap();
        assert!(r.holds(), "instance {i}: {r:?}");
    }
}

#[test]
fn pinch_rejects_bad_bases() {
    let h = HermitianMatrix::identity(2);
    let skewed = vec![
        vec![common::c(1.0, 0.0), common::c(0.0, 0.0)],
        vec![common::c(1.0, 0.0), common::c(1.0, 0.0)],
    ];
    assert!(pinch_to_diagonal(&h, &skewed).is_err());
    assert!(pinch_to_diagonal(&h, &skewed[..1]).is_err());
    assert!(block_diag_pinch(&HermitianMatrix::identity(3)).is_err());
}
