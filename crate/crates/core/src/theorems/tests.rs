use super::*;
use crate::gen::{alpha_example, random_block_psd};
use crate::matcore::ComplexMatrix;

const M: usize = 720;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn assert_all_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
    for (g, w) in got.iter().zip(want) {
        assert!(close(*g, *w, tol), "{got:?} vs {want:?}");
    }
}

fn alpha4() -> Instance {
    Instance::new(alpha_example(4.0).unwrap(), M).unwrap()
}

fn block_diagonal(a: &[f64], b: &[f64]) -> BlockPsd {
    let n = a.len();
    BlockPsd::new(
        HermitianMatrix::from_real_diagonal(a),
        ComplexMatrix::zeros(n, n),
        HermitianMatrix::from_real_diagonal(b),
    )
    .unwrap()
}

#[test]
fn alpha_main_partial_sums() {
    let inst = alpha4();
    assert!(close(inst.d_lower(), 1.0, 1e-9) && close(inst.d_upper(), 1.0, 1e-9));
    let r = inst.main();
    assert!(r.holds());
    assert_all_close(&r.left, &[3.125, 6.25, 7.375, 8.5], 1e-10);
    assert_all_close(&r.right, &[4.25, 8.5, 8.5, 8.5], 1e-10);
    assert!(r.notes.iter().any(|n| n.contains("d_lower")));
    assert!(r.diagnostics.contains_key("slack_at_d_upper"));
}

#[test]
fn alpha_corollaries() {
    let inst = alpha4();
    let sq = &convex_menu(inst.full_spectrum().max())[0];
    let r = inst.trace_convex(sq).unwrap();
    assert!(r.holds());
    assert!(close(r.left[0], 22.0625, 1e-9) && close(r.right[0], 36.125, 1e-9));

    let r = inst.antinorm();
    assert!(r.holds());
    assert_all_close(&r.left, &[1.125, 2.25, 5.375, 8.5], 1e-10);
    assert_all_close(&r.right, &[0.0, 0.0, 4.25, 8.5], 1e-10);

    let r = inst.maxmin();
    assert!(r.holds());
    assert_all_close(&r.left, &[2.125, 2.125], 1e-10);

    let r = inst.diameter();
    assert!(r.holds());
    assert!(close(r.left[0], 4.25, 1e-10));

    let r = inst.det();
    assert!(r.holds());
    assert!(close(r.left[0], 3.515625f64.powi(2), 1e-9));
    assert!(r.right[0].abs() < 1e-12);

    let r = inst.half_sum_dominates_d();
    assert!(r.holds() && close(r.left[0], 2.125, 1e-12));

    let sqrt = &concave_menu(inst.median())[0];
    let r = inst.concave_antinorm(sqrt).unwrap();
    assert!(r.holds());
    let s = |v: f64| v.sqrt();
    assert_all_close(
        &r.left,
        &[
            s(1.125),
            2.0 * s(1.125),
            2.0 * s(1.125) + s(3.125),
            2.0 * s(1.125) + 2.0 * s(3.125),
        ],
        1e-9,
    );
    assert_all_close(&r.right, &[0.0, 0.0, s(4.25), 2.0 * s(4.25)], 1e-7);
}

#[test]
fn alpha_rho_and_theorem2() {
    let inst = alpha4();
    let rho = inst.rho().unwrap();
    assert!(close(rho.diam_full, 4.25, 1e-10));
    assert!(close(rho.diam_direct_sum, 3.75, 1e-10));
    assert!(close(rho.difference, 0.5, 1e-9));
    assert!(close(rho.rho, 0.25, 1e-9));
    let r = inst.theorem2_consequence().unwrap();
    assert!(r.holds() && r.slack.abs() < 1e-10);

    let inst100 = Instance::new(alpha_example(100.0).unwrap(), M).unwrap();
    assert!(close(inst100.rho().unwrap().rho, 0.01, 1e-9));
}

#[test]
fn rho_of_scalar_blocks() {
    let one = HermitianMatrix::identity(1);
    let b = BlockPsd::new(one.clone(), ComplexMatrix::identity(1), one).unwrap();
    let rho = compute_rho(&b, M).unwrap();
    assert!(close(rho.diam_full, 2.0, 1e-12) && close(rho.rho, 1.0, 1e-9));

    let zero_x = block_diagonal(&[1.0], &[2.0]);
    assert!(matches!(
        compute_rho(&zero_x, M),
        Err(TheoremError::RhoUndefined { .. })
    ));
}

#[test]
fn alpha_proof_trace_takes_positive_branch() {
    let trace = alpha4().proof_trace().unwrap();
    assert_eq!(trace.branch, Branch::PositiveDistance);
    assert!(trace.theta_star.unwrap().abs() < 1e-9);
    assert!(close(trace.d, 1.0, 1e-9));
    let bound = trace.steps.iter().find(|s| s.name == "real-part-bound").unwrap();
    assert!(close(bound.value.unwrap(), 1.0, 1e-9));
    assert!(trace.steps.iter().all(|s| s.holds));
}

#[test]
fn block_diagonal_inputs_reduce_to_pinching() {
    for (a, b) in [
        (vec![1.0, 3.0], vec![2.0, 0.5]),
        (vec![2.0], vec![2.0]),
        (vec![0.0, 1.0], vec![4.0, 0.0]),
    ] {
        let inst = Instance::new(block_diagonal(&a, &b), M).unwrap();
        assert_eq!(inst.d_lower(), 0.0);
        assert_eq!(inst.distance().contains_zero, ZeroVerdict::Undecided);
        for r in [inst.main(), inst.antinorm(), inst.det(), inst.maxmin(), inst.theorem1()] {
            assert!(r.holds(), "{r:?}");
        }
        let trace = inst.proof_trace().unwrap();
        assert_eq!(trace.branch, Branch::ZeroDistance);
        assert!(inst.run_all().unwrap().iter().all(CheckReport::holds));
    }
    // A = B: det equality
    let inst = Instance::new(block_diagonal(&[2.0, 3.0], &[2.0, 3.0]), M).unwrap();
    let r = inst.det();
    assert!(close(r.left[0], 36.0, 1e-9) && close(r.right[0], 36.0, 1e-9));
    let r = inst.antinorm();
    assert!(r.majorization.as_ref().unwrap().min_slack.abs() < 1e-12);
}

#[test]
fn hermitian_x_gives_zero_width() {
    let h = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.3, 0.2], &[0.2, -0.1]]).unwrap()).unwrap();
    let b = BlockPsd::new(
        HermitianMatrix::identity(2),
        h.into_matrix(),
        HermitianMatrix::identity(2),
    )
    .unwrap();
    let inst = Instance::new(b, M).unwrap();
    assert!(inst.width().upper < 1e-8);
    let r = inst.theorem1();
    assert!(r.holds());
    assert!(inst.theorem2_consequence().unwrap().holds());
}

#[test]
fn linear_function_gives_trace_equality() {
    for seed in 0..20 {
        let inst = Instance::new(random_block_psd(3, seed, None).unwrap(), M).unwrap();
        let r = inst.trace_convex(&identity_function(Shape::Convex)).unwrap();
        assert!((r.left[0] - r.right[0]).abs() <= inst.check_tol(), "{r:?}");
        let r = inst
            .concave_antinorm(&identity_function(Shape::ConcaveNonnegative))
            .unwrap();
        let plain = inst.antinorm();
        assert_all_close(&r.left, &plain.left, 1e-12);
    }
}

#[test]
fn function_shape_is_enforced() {
    let inst = alpha4();
    let sqrt = &concave_menu(1.0)[0];
    assert!(matches!(
        inst.trace_convex(sqrt),
        Err(TheoremError::InvalidFunction { .. })
    ));
    let sq = &convex_menu(1.0)[0];
    assert!(matches!(
        inst.concave_antinorm(sq),
        Err(TheoremError::InvalidFunction { .. })
    ));
    let fake = FunctionMenuItem::custom("cube-root-ish", Shape::Convex, f64::cbrt);
    assert!(inst.trace_convex(&fake).is_err());
}

#[test]
fn theorem2_requires_hermitian_x() {
    let b = random_block_psd(2, 3, None).unwrap();
    assert!(matches!(
        theorem2_consequence(&b, 1e-9),
        Err(TheoremError::NotHermitianX { .. })
    ));
}

#[test]
fn lemma2_scalar_case() {
    let x = HermitianMatrix::from_real_diagonal(&[3.0]);
    let y = HermitianMatrix::from_real_diagonal(&[2.0]);
    let r = lemma2_construct(&x, &y, 1.0, 1e-9).unwrap();
    assert!(r.holds());
    assert_eq!(r.composite.k_partial_sums_left, vec![4.0, 6.0]);
    assert_eq!(r.composite.k_partial_sums_right, vec![5.0, 6.0]);
}

#[test]
fn lemma2_first_link_is_tight_for_scalar_y() {
    let x = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[4.0, 1.0], &[1.0, 3.0]]).unwrap()).unwrap();
    let y = HermitianMatrix::identity(2).scale(0.5);
    let r = lemma2_construct(&x, &y, 0.5, 1e-9).unwrap();
    assert!(r.holds());
    assert!(r.first.min_slack.abs() < 1e-12);
}

#[test]
fn lemma2_rejects_bad_hypotheses() {
    let x = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]);
    let y = HermitianMatrix::from_real_diagonal(&[2.0, 1.0]);
    match lemma2_construct(&x, &y, 0.5, 1e-9) {
        Err(TheoremError::HypothesisFailed { what, lambda_min }) => {
            assert_eq!(what, "X >= Y");
            assert!(close(lambda_min, -1.0, 1e-12));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(lemma2_construct(&x, &x, 2.0, 1e-9).is_err());
    assert!(lemma2_construct(&x, &x, 0.0, 1e-9).is_err());
}

#[test]
fn failing_reports_are_consistent() {
    let inst = alpha4();
    let r = inst.main_at(5.0);
    assert_eq!(r.verdict, Verdict::Fails);
    assert!(r.slack < -r.tol);
    let r = inst.half_sum_dominates_d_at(3.0);
    assert!(!r.holds());
}
