use kzh_analytic::*;
use kzh_core::liealg::{ColorMap, RootData};
use kzh_core::scalars::{int, rat, ExactMatrix, KappaScalar, Rational, SeededSampler};
use proptest::prelude::*;

fn sl2(m: &[i64]) -> RootData {
    RootData::sl2(&m.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
}

fn one_t() -> ColorMap {
    ColorMap(vec![0])
}

// B(−1/3, 2/3) = −3Γ(2/3)²/Γ(1/3), continued past the pole at 0.
const BETA_M13_23: f64 = -2.053_390_217_939_177_2;

#[test]
fn beta_values_on_the_unit_segment() {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let sol = integrate_solution(&mf, &Contour::segment(0, 1), &ZGrid::points_only(vec![vec![0.0, 1.0]]), 1e-12).unwrap();
    assert!(sol.regularized);
    assert!((sol.values[0][0] - BETA_M13_23).abs() < 1e-10, "{:?}", sol.values[0]);
    assert!((sol.values[0][1] + BETA_M13_23).abs() < 1e-10);
}

#[test]
fn half_integer_exponents_give_pi() {
    // Φ = |z1−z2|^{−1/4}|t−z1|^{−1/2}|t−z2|^{1/2}
    let mf = MasterFunction::new(&sl2(&[1, -1]), &one_t(), 2.0).unwrap();
    let grid = ZGrid::points_only(vec![vec![0.0, 1.0]]);
    let sol = integrate_solution(&mf, &Contour::segment(0, 1), &grid, 1e-12).unwrap();
    let pi = std::f64::consts::PI;
    assert!((sol.values[0][0] + pi).abs() < 1e-10);
    assert!((sol.values[0][1] + pi).abs() < 1e-10);
    let strict = Contour::segment(0, 1).with_regularization(Regularization::None);
    match integrate_solution(&mf, &strict, &grid, 1e-12) {
        Err(AnalyticError::DivergentExponent { endpoint: 0, exponent }) => assert_eq!(exponent, -1.5),
        other => panic!("expected a divergent exponent, got {other:?}"),
    }
}

#[test]
fn exponent_below_minus_two_is_rejected() {
    let mf = MasterFunction::new(&sl2(&[4, 1]), &one_t(), 3.0).unwrap();
    let r = integrate_solution(&mf, &Contour::segment(0, 1), &ZGrid::points_only(vec![vec![0.0, 1.0]]), 1e-10);
    assert!(matches!(r, Err(AnalyticError::DivergentExponent { endpoint: 0, .. })));
}

#[test]
fn polyline_agrees_with_segment() {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let grid = ZGrid::points_only(vec![vec![-0.4, 1.3]]);
    let a = integrate_solution(&mf, &Contour::segment(0, 1), &grid, 1e-11).unwrap();
    let b = integrate_solution(&mf, &Contour::polyline(0, 1, vec![0.2, 0.55, 0.9]).unwrap(), &grid, 1e-11).unwrap();
    for (x, y) in a.values[0].iter().zip(&b.values[0]) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn zero_length_contour() {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let sol = integrate_solution(&mf, &Contour::segment(1, 1), &ZGrid::points_only(vec![vec![0.0, 1.0]]), 1e-10).unwrap();
    assert_eq!(sol.values[0], vec![0.0, 0.0]);
}

#[test]
fn reflection_swaps_components() {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let c = Contour::segment(0, 1);
    let x = integrate_solution(&mf, &c, &ZGrid::points_only(vec![vec![-1.0, 1.0]]), 1e-12).unwrap();
    let y = integrate_solution(&mf, &c, &ZGrid::points_only(vec![vec![1.0, -1.0]]), 1e-12).unwrap();
    let (x, y) = (&x.values[0], &y.values[0]);
    // t ↦ −t: ψ1 = −ψ2 at symmetric data, and swapping z reverses the path
    assert!((x[0] + x[1]).abs() < 1e-10);
    assert!((y[0] + x[1]).abs() < 1e-10);
    assert!((y[1] + x[0]).abs() < 1e-10);
}

#[test]
fn contour_through_a_singular_point_is_rejected() {
    let mf = MasterFunction::new(&sl2(&[1, 1, 1]), &one_t(), 3.0).unwrap();
    let r = integrate_solution(&mf, &Contour::segment(0, 2), &ZGrid::points_only(vec![vec![0.0, 1.0, 2.0]]), 1e-10);
    assert!(matches!(r, Err(AnalyticError::Shape(_))));
}

#[test]
fn leaving_the_chamber_is_rejected() {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let grid = ZGrid::points_only(vec![vec![0.0, 1.0], vec![2.0, 1.0]]);
    assert_eq!(
        integrate_solution(&mf, &Contour::segment(0, 1), &grid, 1e-10).unwrap_err(),
        AnalyticError::BranchCrossing(1)
    );
}

fn acceptance_solution() -> NumericSolution {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let grid = ZGrid::stencils(vec![vec![0.0, 1.0], vec![-0.7, 0.4], vec![0.25, 2.5]], 1e-3);
    integrate_solution(&mf, &Contour::segment(0, 1), &grid, 1e-10).unwrap()
}

#[test]
fn kz_residual_of_the_integral() {
    let sol = acceptance_solution();
    let r = kz_residual(&sol, &sl2(&[1, 1]), 3.0).unwrap();
    assert!(r.max_residual < 1e-6, "{r:?}");
    assert!(r.singular_relative < 1e-6, "{r:?}");
    let wrong = kz_residual_signed(&sol, &sl2(&[1, 1]), 3.0, -1.0).unwrap();
    assert!(wrong.max_residual > 1e-2, "{wrong:?}");
}

#[test]
fn kz_residual_three_points() {
    let rd = sl2(&[1, 2, 1]);
    let mf = MasterFunction::new(&rd, &one_t(), 5.0).unwrap();
    let grid = ZGrid::stencils(vec![vec![0.0, 1.0, 3.0]], 1e-3);
    let sol = integrate_solution(&mf, &Contour::segment(0, 1), &grid, 1e-11).unwrap();
    let r = kz_residual(&sol, &rd, 5.0).unwrap();
    assert!(r.max_residual < 1e-6, "{r:?}");
    assert!(r.singular_relative < 1e-6, "{r:?}");
}

#[test]
fn constant_solution_for_one_point() {
    let grid = ZGrid::stencils(vec![vec![0.3]], 1e-3);
    let points = grid.points();
    let sol = NumericSolution {
        values: vec![vec![2.0]; points.len()],
        errors: vec![0.0; points.len()],
        points,
        grid,
        regularized: false,
    };
    assert_eq!(kz_residual(&sol, &sl2(&[1]), 3.0).unwrap().max_residual, 0.0);
}

#[test]
fn quadrature_error_shrinks_with_tolerance() {
    let mf = MasterFunction::new(&sl2(&[1, 1]), &one_t(), 3.0).unwrap();
    let grid = ZGrid::points_only(vec![vec![0.0, 1.0]]);
    let mut last = f64::INFINITY;
    for j in 0..12 {
        let tol = 1e-6 / f64::powi(2.0, j);
        let sol = integrate_solution(&mf, &Contour::segment(0, 1), &grid, tol).unwrap();
        assert!(sol.errors[0] <= tol);
        assert!(sol.errors[0] <= last);
        last = sol.errors[0];
    }
}

#[test]
fn coker_check_reports_both_residuals() {
    let grid = ZGrid::stencils(vec![vec![0.0, 1.0], vec![-0.5, 0.8]], 1e-3);
    let r = coker_solution_check(&sl2(&[1, 1]), 3.0, 2.0, &grid).unwrap();
    assert!(r.vacuous);
    assert_eq!(r.coker_dim, 0);
    assert!(r.unprojected > 1e-3, "{r:?}");
    assert!(r.projected < 1e-6);
    let trivial = coker_solution_check(&sl2(&[0, 0]), 3.0, 2.0, &grid).unwrap();
    assert_eq!(trivial.coker_dim, 1);
    assert!(!trivial.vacuous);
    assert!(trivial.projected < 1e-6);
}

fn printed_omega(m1: &Rational, m2: &Rational) -> ExactMatrix {
    let two = int(2);
    ExactMatrix::from_rationals(&[
        vec![(m1 - &two) * m2 / &two, m2.clone()],
        vec![m1.clone(), m1 * (m2 - &two) / &two],
    ])
}

#[test]
fn dual_kz_default() {
    let rd = sl2(&[1, 1]);
    let r = dual_kz_check(&rd, &mut SeededSampler::new(7), 5).unwrap();
    assert!(r.checks.passed(), "{:?}", r.checks);
    assert_eq!(r.checks.checks.len(), 3);
    assert_eq!(r.points.len(), 5);
    assert_eq!(r.omega, printed_omega(&int(1), &int(1)));
    assert!(!r.literal_dt_residual_zero);
    assert!(!r.printed_coordinate_residual_zero);
}

#[test]
fn dual_kz_rejects_other_shapes() {
    assert!(dual_kz_check(&sl2(&[1, 1, 1]), &mut SeededSampler::new(1), 1).is_err());
}

#[test]
fn laurent_eval() {
    let l = Laurent::monomial([1, -2, 0], KappaScalar::kappa());
    let v = l.eval(&[int(3), int(2), rat(1, 2)]);
    assert_eq!(v, KappaScalar::kappa().scale_rational(&rat(3, 4)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dlog_matches_finite_differences(z1 in -3.0f64..3.0, gap in 0.5f64..2.0, tf in 0.1f64..0.9, m1 in 1i64..4, m2 in 1i64..4) {
        let mf = MasterFunction::new(&sl2(&[m1, m2]), &one_t(), 3.0).unwrap();
        let z = [z1, z1 + gap];
        let t = [z1 + tf * gap];
        prop_assert!(mf.dlog_fd_gap(&z, &t, 1e-3) < 1e-8);
    }

    #[test]
    fn dual_kz_exact_for_random_weights(p1 in -9i64..9, q1 in 1i64..5, p2 in -9i64..9, q2 in 1i64..5, seed in 0u64..1000) {
        let (m1, m2) = (rat(p1, q1), rat(p2, q2));
        let rd = RootData::sl2(&[m1.clone(), m2.clone()]).unwrap();
        let r = dual_kz_check(&rd, &mut SeededSampler::new(seed), 3).unwrap();
        prop_assert!(r.checks.passed());
        prop_assert_eq!(r.omega, printed_omega(&m1, &m2));
    }
}
