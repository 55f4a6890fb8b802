//! Cross-module consistency: the recursion growth rates, the solved
//! entropy, the algebraic curve and the cohomological spectral data must all
//! tell one coherent story.

use cy_entropy_core::cohomology;
use cy_entropy_core::dynamics::{self, CMode, SParam};
use cy_entropy_core::entropy::{self, default_tolerance};
use cy_entropy_core::geometry::{self, make_variety};
use cy_entropy_core::numerics::{rat_int, Rational};

#[test]
fn growth_rate_reproduces_solver_at_t_zero() {
    for d in [3u32, 4] {
        let x = make_variety(d, None, None).unwrap();
        let solved = entropy::solve_entropy(&x, 0.0, &default_tolerance(), Some(&rat_int(1)))
            .unwrap();
        let sequence = dynamics::c_sequence(&x, &SParam::one(), 2000, CMode::LogSpace).unwrap();
        let estimate = dynamics::growth_estimate(&sequence.table).unwrap();
        assert!(
            (estimate.lambda_hat - solved.lambda).abs() <= 1e-6,
            "d = {d}: ratio estimate {} vs solver {}",
            estimate.lambda_hat,
            solved.lambda
        );
        // the Cesàro estimate converges only like 1/n; sanity range
        assert!((estimate.lambda_cesaro - solved.lambda).abs() < 2e-2);
        assert!(estimate.tail_oscillation < 1e-9);
    }
}

#[test]
fn growth_rate_reproduces_solver_at_nonzero_t() {
    let x = make_variety(3, None, None).unwrap();
    let t = 0.35;
    let solved = entropy::solve_entropy(&x, t, &default_tolerance(), None).unwrap();
    let sequence =
        dynamics::c_sequence(&x, &SParam::from_t(&x, t), 1500, CMode::LogSpace).unwrap();
    let estimate = dynamics::growth_estimate(&sequence.table).unwrap();
    assert!((estimate.lambda_hat - solved.lambda).abs() <= 1e-6);
}

#[test]
fn ratio_estimates_converge_geometrically() {
    let x = make_variety(3, None, None).unwrap();
    let solved =
        entropy::solve_entropy(&x, 0.0, &default_tolerance(), Some(&rat_int(1))).unwrap();
    let table = dynamics::c_sequence(&x, &SParam::one(), 60, CMode::LogSpace)
        .unwrap()
        .table;
    // once the error is resolvable in f64 it must shrink by at least 2x per
    // step until it hits the noise floor
    let errors: Vec<f64> = (10..40)
        .map(|n| (table.lambda_ratio[n] - solved.lambda).abs())
        .collect();
    for pair in errors.windows(2) {
        if pair[0] > 1e-12 {
            assert!(pair[1] < pair[0] * 0.5, "no geometric decay: {pair:?}");
        }
    }
    assert!(errors.last().unwrap() < &1e-12);
}

#[test]
fn exact_mode_growth_agrees_with_log_space_estimates() {
    let x = make_variety(4, None, None).unwrap();
    let exact = dynamics::c_sequence(&x, &SParam::one(), 120, CMode::Exact).unwrap();
    let log = dynamics::c_sequence(&x, &SParam::one(), 120, CMode::LogSpace).unwrap();
    let e1 = dynamics::growth_estimate(&exact.table).unwrap();
    let e2 = dynamics::growth_estimate(&log.table).unwrap();
    assert!((e1.lambda_hat - e2.lambda_hat).abs() < 1e-9);
}

#[test]
fn b_table_seed_matches_geometry_sequence() {
    for d in [3u32, 5] {
        let x = make_variety(d, None, None).unwrap();
        let table = dynamics::b_table(&x, 0, 12, None).unwrap();
        for (k, ak) in geometry::a_sequence(&x, 12).iter().enumerate() {
            let cell = table.symbolic(0, k + 1).unwrap();
            assert_eq!(cell.coeff(0), Rational::from_integer(ak.clone()));
        }
    }
}

#[test]
fn curve_residual_small_across_sweeps() {
    for d in [3u32, 4] {
        let x = make_variety(d, None, None).unwrap();
        let points = entropy::sweep(&x, -2.0, 2.0, 21, &default_tolerance()).unwrap();
        for (i, p) in points.iter().enumerate() {
            assert!(
                p.curve_residual <= 1e-8,
                "d = {d}, grid index {i}: residual {}",
                p.curve_residual
            );
        }
        for pair in points.windows(2) {
            assert!(pair[0].entropy.lambda > pair[1].entropy.lambda);
        }
    }
}

#[test]
fn spectral_radius_matches_entropy_in_odd_dimension() {
    for d in [3u32, 5] {
        let x = make_variety(d, None, None).unwrap();
        let matrices = cohomology::phi_action_matrix(&x).unwrap();
        let report = cohomology::spectral_analysis(&matrices.phi, d + 2);
        let solved =
            entropy::solve_entropy(&x, 0.0, &default_tolerance(), Some(&rat_int(1))).unwrap();
        assert!(
            (report.rho.ln() - solved.lambda).abs() <= 1e-8,
            "d = {d}: log rho {} vs h_0 {}",
            report.rho.ln(),
            solved.lambda
        );
    }
}

#[test]
fn even_dimension_separates_entropy_from_spectral_radius() {
    for d in [4u32, 6] {
        let x = make_variety(d, None, None).unwrap();
        let report = cohomology::counterexample_report(&x).unwrap();
        assert!(report.h0 > 1.0);
        assert_eq!(report.log_rho_full, 0.0);
        assert!(!report.kt_holds);
    }
}

#[test]
fn characteristic_polynomial_divides_curve_slice() {
    let x = make_variety(3, None, None).unwrap();
    let matrices = cohomology::phi_action_matrix(&x).unwrap();
    let char_poly = matrices.phi.char_poly();
    let curve = entropy::entropy_curve(&x).unwrap();
    let quotient = curve.at_u(&rat_int(1)).exact_div(&char_poly);
    assert!(quotient.is_some());
    // the cofactor is the spurious factor -(y - 1)
    let quotient = quotient.unwrap();
    assert_eq!(quotient.degree(), Some(1));
    assert_eq!(quotient.eval(&rat_int(1)), rat_int(0));
}
