//! Acceptance suite: the ten exit criteria, one test per criterion, each
//! printing a single pass/fail line (visible under `--nocapture`).
//!
//! Run with `cargo test -p cy-entropy-cli --test acceptance`.

use cy_entropy_core::cohomology;
use cy_entropy_core::dynamics::{self, CMode, SParam};
use cy_entropy_core::entropy::{self, default_tolerance};
use cy_entropy_core::geometry::{self, make_variety, VarietySpec};
use cy_entropy_core::numerics::{rat, rat_int, Polynomial, Rational, RationalFunction};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn builtin(d: u32) -> VarietySpec {
    make_variety(d, None, None).expect("valid dimension")
}

fn pass(n: u32, what: &str) {
    println!("acceptance criterion {n}: PASS - {what}");
}

#[test]
fn criterion_01_dual_oracle_chi() {
    for d in 3..=8u32 {
        let x = builtin(d);
        for k in -10..=100i64 {
            let binomial = Rational::from_integer(geometry::euler_characteristic(&x, k));
            let hrr = geometry::euler_characteristic_hrr(&x, k).unwrap();
            assert_eq!(binomial, hrr, "d = {d}, k = {k}: binomial vs HRR");
        }
    }
    let quintic_a = geometry::a_sequence(&builtin(3), 6);
    let expected: Vec<BigInt> = [5, 15, 35, 70, 125, 205].iter().map(|&v| BigInt::from(v)).collect();
    assert_eq!(quintic_a, expected, "quintic a_1..a_6 spot values");
    pass(1, "binomial chi equals HRR integral exactly, d in 3..=8, k in -10..=100");
}

#[test]
fn criterion_02_closed_form_hilbert_series() {
    for d in 3..=8u32 {
        let x = builtin(d);
        let series = entropy::hilbert_series_closed_form(&x);
        // the closed form the series must reduce to
        let mut num = vec![rat_int(0); d as usize + 3];
        num[0] = rat_int(1);
        num[d as usize + 2] = rat_int(-1);
        let den = Polynomial::from_integers(&[1, -1]).pow(d + 2);
        let ratio = RationalFunction::new(Polynomial::new(num), den).unwrap();
        let closed = &ratio - &RationalFunction::constant(rat_int(1));
        assert_eq!(series, closed, "d = {d}: reduced closed form");
        let coeffs = series.series_coefficients(201).unwrap();
        for (k, coeff) in coeffs.iter().enumerate().skip(1) {
            assert_eq!(
                coeff,
                &Rational::from_integer(geometry::euler_characteristic(&x, k as i64)),
                "d = {d}, k = {k}"
            );
        }
    }
    pass(2, "series of (1-x^(d+2))/(1-x)^(d+2) - 1 matches chi(O(k)) for k <= 200");
}

#[test]
fn criterion_03_quintic_certified_solve() {
    // exact rational inequalities at the stated bracket endpoints
    let mut num = vec![rat_int(0); 6];
    num[0] = rat_int(1);
    num[5] = rat_int(-1);
    let ratio = RationalFunction::new(
        Polynomial::new(num),
        Polynomial::from_integers(&[1, -1]).pow(5),
    )
    .unwrap();
    assert!(ratio.eval(&rat(12, 100)).unwrap() < rat_int(2), "S(12/100) < 2 exactly");
    assert!(ratio.eval(&rat(13, 100)).unwrap() > rat_int(2), "S(13/100) > 2 exactly");

    let x = builtin(3);
    let result = entropy::solve_entropy(&x, 0.0, &default_tolerance(), Some(&rat_int(1))).unwrap();
    assert!(result.bracket.lo > rat(12, 100) && result.bracket.hi < rat(13, 100));
    // independent exact certificate on the refined bracket endpoints
    let series = entropy::hilbert_series_closed_form(&x);
    assert!(series.eval(&result.bracket.lo).unwrap() < rat_int(1));
    assert!(series.eval(&result.bracket.hi).unwrap() > rat_int(1));
    // closed-form value log((z + sqrt(z^2-4))/2), z = (9 + 3*sqrt(5))/2
    let z = (9.0 + 3.0 * 5.0f64.sqrt()) / 2.0;
    let lambda_closed = ((z + (z * z - 4.0).sqrt()) / 2.0).ln();
    assert!(
        (result.lambda - lambda_closed).abs() <= 1e-10,
        "lambda {} vs closed form {}",
        result.lambda,
        lambda_closed
    );
    pass(3, "quintic t=0 bracket certified by exact inequalities; lambda matches closed form to 1e-10");
}

#[test]
fn criterion_04_algebraic_curve() {
    for d in 3..=8u32 {
        let x = builtin(d);
        let curve = entropy::entropy_curve(&x).unwrap();
        // F(u,y) = y^(d+2) - 1 - (1 + u^(d-1)) (y-1)^(d+2), coefficientwise
        let du = d as usize;
        assert_eq!(curve.u_degree(), du - 1, "d = {d}");
        assert_eq!(curve.y_degree(), du + 2, "d = {d}");
        let signed_binomial = |j: usize| -> BigInt {
            let b = cy_entropy_core::numerics::generalized_binomial((du + 2) as i64, (du + 2 - j) as u32)
                .to_integer();
            if (du + 2 - j) % 2 == 0 {
                b
            } else {
                -b
            }
        };
        for j in 0..=du + 2 {
            let mut expected0 = -signed_binomial(j);
            if j == du + 2 {
                expected0 += BigInt::from(1);
            }
            if j == 0 {
                expected0 -= BigInt::from(1);
            }
            assert_eq!(curve.coeff(0, j), expected0, "d = {d}, u^0 y^{j}");
            assert_eq!(curve.coeff(du - 1, j), -signed_binomial(j), "d = {d}, u^(d-1) y^{j}");
        }
        for i in 1..du - 1 {
            for j in 0..=du + 2 {
                assert_eq!(curve.coeff(i, j), BigInt::from(0), "d = {d}, middle slice u^{i}");
            }
        }
    }
    for d in [3u32, 4] {
        let x = builtin(d);
        let points = entropy::sweep(&x, -2.0, 2.0, 101, &default_tolerance()).unwrap();
        assert_eq!(points.len(), 101);
        for (i, p) in points.iter().enumerate() {
            assert!(
                p.curve_residual <= 1e-8,
                "d = {d}, grid {i}: residual {}",
                p.curve_residual
            );
        }
    }
    pass(4, "builtin curve equals y^(d+2)-1-(1+u^(d-1))(y-1)^(d+2); sweep residual <= 1e-8 on 101 points");
}

#[test]
fn criterion_05_recursion_consistency() {
    for d in [3u32, 4, 5] {
        let x = builtin(d);
        for s in [rat_int(1), rat(3, 7)] {
            let c = dynamics::c_sequence_exact(&x, &s, 100);
            let table = dynamics::b_table(&x, 100, 1, Some(&s)).unwrap();
            for (n, cn) in c.iter().enumerate() {
                assert_eq!(
                    cn,
                    &(table.evaluated(n, 1).unwrap() * &s),
                    "d = {d}, n = {n}: C_n = s*B_(n,1)"
                );
            }
            for (n, cn) in c.iter().enumerate().take(15) {
                assert_eq!(
                    &dynamics::composition_oracle(&x, &s, n).unwrap(),
                    cn,
                    "d = {d}, n = {n}: composition oracle"
                );
            }
        }
        for n in 0..=12usize {
            for k in 1..=5usize {
                assert!(
                    dynamics::verify_partition_formula(&x, n, k).unwrap(),
                    "d = {d}: partition formula at n = {n}, k = {k}"
                );
            }
        }
    }
    pass(5, "C_n = s*B_(n,1) for n <= 100; composition oracle to n = 14; partition formula to n = 12, k = 5");
}

#[test]
fn criterion_06_growth_rate_reproduction() {
    for d in [3u32, 4] {
        let x = builtin(d);
        let solved =
            entropy::solve_entropy(&x, 0.0, &default_tolerance(), Some(&rat_int(1))).unwrap();
        let sequence = dynamics::c_sequence(&x, &SParam::one(), 2000, CMode::LogSpace).unwrap();
        let ratio = *sequence.table.lambda_ratio.last().unwrap();
        assert!(
            (ratio - solved.lambda).abs() <= 1e-6,
            "d = {d}: |log(C_2000/C_1999) - lambda| = {:e}",
            (ratio - solved.lambda).abs()
        );
    }
    let x = builtin(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1729);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for _ in 0..100 {
        let t = rng.gen_range(-5.0..5.0);
        let solved = entropy::solve_entropy(&x, t, &default_tolerance(), None).unwrap();
        assert!(solved.lambda > 0.0, "lambda must be positive at t = {t}");
        samples.push((t, solved.lambda));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in samples.windows(2) {
        assert!(pair[0].1 > pair[1].1, "lambda strictly decreasing in t");
    }
    for d in [3u32, 4] {
        let points = entropy::sweep(&builtin(d), -2.0, 2.0, 21, &default_tolerance()).unwrap();
        for pair in points.windows(2) {
            assert!(pair[0].entropy.lambda > pair[1].entropy.lambda, "d = {d}");
        }
    }
    pass(6, "ratio at n = 2000 matches solver to 1e-6; lambda positive at 100 random t and decreasing on grids");
}

#[test]
fn criterion_07_even_dimension_counterexample() {
    for d in [4u32, 6] {
        let x = builtin(d);
        let matrices = cohomology::phi_action_matrix(&x).unwrap();
        assert!(
            matrices.twist.mul(&matrices.twist).is_identity(),
            "d = {d}: twist^2 = I exactly"
        );
        assert!(
            matrices.phi.pow(d + 2).is_identity(),
            "d = {d}: phi^(d+2) = I exactly"
        );
        let report = cohomology::counterexample_report(&x).unwrap();
        assert_eq!(report.spectral.rho, 1.0, "d = {d}: rho = 1");
        assert!(report.h0 > 0.0, "d = {d}: h0 > 0");
        assert!(!report.kt_holds, "d = {d}: verdict must be kt_holds = false");
    }
    pass(7, "d = 4 and 6: twist^2 = I, phi^(d+2) = I, rho = 1, h0 > 0, kt_holds = false");
}

#[test]
fn criterion_08_odd_dimension_equality() {
    for d in [3u32, 5] {
        let x = builtin(d);
        let matrices = cohomology::phi_action_matrix(&x).unwrap();
        let spectral = cohomology::spectral_analysis(&matrices.phi, d + 2);
        let solved =
            entropy::solve_entropy(&x, 0.0, &default_tolerance(), Some(&rat_int(1))).unwrap();
        assert!(
            (spectral.rho.ln() - solved.lambda).abs() <= 1e-8,
            "d = {d}: |log rho - h0| = {:e}",
            (spectral.rho.ln() - solved.lambda).abs()
        );
    }
    let x = builtin(3);
    let matrices = cohomology::phi_action_matrix(&x).unwrap();
    let char_poly = matrices.phi.char_poly();
    assert_eq!(
        char_poly,
        Polynomial::from_integers(&[1, -9, 11, -9, 1]),
        "d = 3 characteristic polynomial"
    );
    let curve = entropy::entropy_curve(&x).unwrap();
    assert!(
        curve.at_u(&rat_int(1)).exact_div(&char_poly).is_some(),
        "char poly divides F(1, y)"
    );
    pass(8, "d = 3 and 5: |log rho - h0| <= 1e-8; d = 3 char poly is y^4-9y^3+11y^2-9y+1 and divides F(1,y)");
}

#[test]
fn criterion_09_pairing_euler_compatibility() {
    for d in 3..=8u32 {
        let x = builtin(d);
        let vectors: Vec<_> = (-10..=10i64)
            .map(|k| cohomology::mukai_vector(&x, k).unwrap())
            .collect();
        for (ia, a) in (-10..=10i64).enumerate() {
            for (ib, b) in (-10..=10i64).enumerate() {
                assert_eq!(
                    cohomology::mukai_pairing(&x, &vectors[ia], &vectors[ib]),
                    Rational::from_integer(geometry::euler_characteristic(&x, b - a)),
                    "d = {d}: <v(O({a})), v(O({b}))> = chi(O({}))", b - a
                );
            }
        }
        let matrices = cohomology::phi_action_matrix(&x).unwrap();
        let v0 = &vectors[10];
        let image = matrices.twist.apply(v0);
        let expected: Vec<Rational> = if d % 2 == 0 {
            v0.coords().iter().map(|c| -c).collect()
        } else {
            v0.coords().to_vec()
        };
        assert_eq!(image.coords(), &expected[..], "d = {d}: twist.v(O) = (-1)^(1-d) v(O)");
    }
    pass(9, "Mukai pairing equals chi(O(b-a)) for |a|,|b| <= 10, d in 3..=8; twist fixes v(O) up to parity sign");
}

#[test]
fn criterion_10_verify_determinism() {
    let run_verify = || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_cy-entropy"))
            .args(["verify", "--dims", "3", "--seed", "9", "--format", "text"])
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let first = run_verify();
    let second = run_verify();
    assert_eq!(first, second, "verify reports must be byte-identical");
    assert!(String::from_utf8_lossy(&first).contains("PASS"));
    pass(10, "repeated verify runs with the same seed produce byte-identical reports");
}
