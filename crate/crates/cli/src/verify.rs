//! The one-shot verification suite: every cross-module invariant with a
//! desk-scale runtime, run in a fixed order under a wall-clock budget.
//!
//! The report body is deterministic for a fixed seed; timings go to stderr
//! only. A failed check exits 3 (invariant violation), an exhausted budget
//! exits 2 with the partial report, otherwise 0.

use cy_entropy_core::cohomology;
use cy_entropy_core::dynamics::{self, CMode, SParam};
use cy_entropy_core::entropy::{self, default_tolerance};
use cy_entropy_core::geometry::{self, make_variety, VarietySpec};
use cy_entropy_core::numerics::{rat, rat_int, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fmt::Write;
use std::time::Instant;

pub struct SuiteOutcome {
    pub results: Vec<CheckOutcome>,
    pub dims: Vec<u32>,
    pub seed: u64,
}

pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
}

#[derive(PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped,
}

impl SuiteOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|r| matches!(r.status, Status::Fail(_))) {
            3
        } else if self.results.iter().any(|r| r.status == Status::Skipped) {
            2
        } else {
            0
        }
    }
}

struct Check {
    name: String,
    run: Box<dyn Fn() -> Result<(), String>>,
}

fn per_dim_varieties(dims: &[u32]) -> Vec<(u32, VarietySpec)> {
    dims.iter()
        .map(|&d| (d, make_variety(d, None, None).expect("dims validated")))
        .collect()
}

/// Assemble the fixed check list for the requested dimensions.
fn build_checks(dims: &[u32], seed: u64) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    let mut push = |name: String, run: Box<dyn Fn() -> Result<(), String>>| {
        checks.push(Check { name, run });
    };

    for (d, x) in per_dim_varieties(dims) {
        let x0 = x.clone();
        push(
            format!("chi-dual-oracle[d={d}]"),
            Box::new(move || {
                for k in -10..=100i64 {
                    let binomial = Rational::from_integer(geometry::euler_characteristic(&x0, k));
                    let hrr = geometry::euler_characteristic_hrr(&x0, k)
                        .map_err(|e| e.to_string())?;
                    if binomial != hrr {
                        return Err(format!("k = {k}: binomial {binomial} != HRR {hrr}"));
                    }
                }
                Ok(())
            }),
        );

        let x0 = x.clone();
        push(
            format!("hilbert-series-coefficients[d={d}]"),
            Box::new(move || {
                let series = entropy::hilbert_series_closed_form(&x0);
                let coeffs = series.series_coefficients(201).map_err(|e| e.to_string())?;
                for (k, coeff) in coeffs.iter().enumerate().skip(1) {
                    let chi =
                        Rational::from_integer(geometry::euler_characteristic(&x0, k as i64));
                    if coeff != &chi {
                        return Err(format!("k = {k}: series {coeff} != chi {chi}"));
                    }
                }
                Ok(())
            }),
        );

        let x0 = x.clone();
        push(
            format!("a-k-monotone[d={d}]"),
            Box::new(move || {
                let a = geometry::a_sequence(&x0, 200);
                if a[0] < num_bigint::BigInt::from(1) {
                    return Err("a_1 < 1".into());
                }
                match a.windows(2).position(|w| w[1] <= w[0]) {
                    None => Ok(()),
                    Some(i) => Err(format!("not increasing at k = {}", i + 2)),
                }
            }),
        );

        let x0 = x.clone();
        push(
            format!("chi-structure-sheaf[d={d}]"),
            Box::new(move || {
                let expected = if x0.dim() % 2 == 0 { 2 } else { 0 };
                let got = geometry::euler_characteristic(&x0, 0);
                if got == num_bigint::BigInt::from(expected) {
                    Ok(())
                } else {
                    Err(format!("chi(O) = {got}, expected {expected}"))
                }
            }),
        );

        let x0 = x.clone();
        push(
            format!("pairing-euler-compat[d={d}]"),
            Box::new(move || {
                let vectors: Vec<_> = (-10..=10i64)
                    .map(|k| cohomology::mukai_vector(&x0, k).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?;
                for (ia, a) in (-10..=10i64).enumerate() {
                    for (ib, b) in (-10..=10i64).enumerate() {
                        let pairing = cohomology::mukai_pairing(&x0, &vectors[ia], &vectors[ib]);
                        let chi =
                            Rational::from_integer(geometry::euler_characteristic(&x0, b - a));
                        if pairing != chi {
                            return Err(format!("<v(O({a})), v(O({b}))> = {pairing} != {chi}"));
                        }
                    }
                }
                Ok(())
            }),
        );

        let x0 = x.clone();
        push(
            format!("twist-structure[d={d}]"),
            Box::new(move || {
                let d = x0.dim();
                let matrices = cohomology::phi_action_matrix(&x0).map_err(|e| e.to_string())?;
                let v0 = cohomology::mukai_vector(&x0, 0).map_err(|e| e.to_string())?;
                let image = matrices.twist.apply(&v0);
                let expected: Vec<Rational> = if d % 2 == 0 {
                    v0.coords().iter().map(|c| -c).collect()
                } else {
                    v0.coords().to_vec()
                };
                if image.coords() != &expected[..] {
                    return Err("twist.v(O) != (-1)^(1-d) v(O)".into());
                }
                if d % 2 == 0 {
                    if !matrices.twist.mul(&matrices.twist).is_identity() {
                        return Err("twist^2 != I for even d".into());
                    }
                    if matrices.twist.det() != rat_int(-1) {
                        return Err("det(twist) != -1 for even d".into());
                    }
                } else {
                    let n = cohomology::ActionMatrix::identity(d as usize + 1);
                    let nil = matrices.twist.sub(&n);
                    if !nil.mul(&nil).is_zero() {
                        return Err("(twist - I)^2 != 0 for odd d".into());
                    }
                    if matrices.twist.det() != rat_int(1) {
                        return Err("det(twist) != +1 for odd d".into());
                    }
                }
                if matrices.tensor.det() != rat_int(1) {
                    return Err("det(tensor) != 1".into());
                }
                Ok(())
            }),
        );

        let x0 = x.clone();
        let check_seed = seed ^ u64::from(d);
        push(
            format!("solver-positivity-random-t[d={d}]"),
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(check_seed);
                let mut samples: Vec<(f64, f64)> = Vec::new();
                for _ in 0..20 {
                    let t = rng.gen_range(-5.0..5.0);
                    let solved = entropy::solve_entropy(&x0, t, &default_tolerance(), None)
                        .map_err(|e| e.to_string())?;
                    if solved.lambda <= 0.0 {
                        return Err(format!("lambda <= 0 at t = {t}"));
                    }
                    if !solved.bracket.f_lo_sign.opposes(solved.bracket.f_hi_sign) {
                        return Err(format!("bracket signs do not straddle at t = {t}"));
                    }
                    samples.push((t, solved.lambda));
                }
                samples.sort_by(|a, b| a.0.total_cmp(&b.0));
                match samples.windows(2).position(|w| w[0].1 <= w[1].1) {
                    None => Ok(()),
                    Some(i) => Err(format!(
                        "lambda not strictly decreasing between t = {} and t = {}",
                        samples[i].0,
                        samples[i + 1].0
                    )),
                }
            }),
        );

        if d == 3 || d == 4 {
            let x0 = x.clone();
            push(
                format!("sweep-curve-residual[d={d}]"),
                Box::new(move || {
                    let points = entropy::sweep(&x0, -2.0, 2.0, 101, &default_tolerance())
                        .map_err(|e| e.to_string())?;
                    for (i, p) in points.iter().enumerate() {
                        if p.curve_residual > 1e-8 {
                            return Err(format!(
                                "grid index {i}: residual {} > 1e-8",
                                p.curve_residual
                            ));
                        }
                    }
                    match points
                        .windows(2)
                        .position(|w| w[0].entropy.lambda <= w[1].entropy.lambda)
                    {
                        None => Ok(()),
                        Some(i) => Err(format!("lambda not decreasing at grid index {i}")),
                    }
                }),
            );
        }

        if d <= 5 {
            let x0 = x.clone();
            push(
                format!("recursion-consistency[d={d}]"),
                Box::new(move || {
                    for s in [rat_int(1), rat(3, 7)] {
                        let c = dynamics::c_sequence_exact(&x0, &s, 100);
                        let table =
                            dynamics::b_table(&x0, 100, 1, Some(&s)).map_err(|e| e.to_string())?;
                        for (n, cn) in c.iter().enumerate() {
                            let b = table
                                .evaluated(n, 1)
                                .ok_or_else(|| format!("missing B[{n}][1]"))?;
                            if cn != &(b * &s) {
                                return Err(format!("C_{n} != s*B_({n},1) at s = {s}"));
                            }
                        }
                        for (n, cn) in c.iter().enumerate().take(15) {
                            let oracle = dynamics::composition_oracle(&x0, &s, n)
                                .map_err(|e| e.to_string())?;
                            if &oracle != cn {
                                return Err(format!("composition oracle differs at n = {n}"));
                            }
                        }
                    }
                    for n in 0..=12usize {
                        for k in 1..=5usize {
                            if !dynamics::verify_partition_formula(&x0, n, k)
                                .map_err(|e| e.to_string())?
                            {
                                return Err(format!("partition formula fails at n={n}, k={k}"));
                            }
                        }
                    }
                    Ok(())
                }),
            );
        }

        if d == 3 || d == 4 {
            let x0 = x.clone();
            push(
                format!("growth-reproduces-entropy[d={d}]"),
                Box::new(move || {
                    let solved = entropy::solve_entropy(
                        &x0,
                        0.0,
                        &default_tolerance(),
                        Some(&rat_int(1)),
                    )
                    .map_err(|e| e.to_string())?;
                    let sequence =
                        dynamics::c_sequence(&x0, &SParam::one(), 2000, CMode::LogSpace)
                            .map_err(|e| e.to_string())?;
                    let estimate =
                        dynamics::growth_estimate(&sequence.table).map_err(|e| e.to_string())?;
                    let delta = (estimate.lambda_hat - solved.lambda).abs();
                    if delta <= 1e-6 {
                        Ok(())
                    } else {
                        Err(format!(
                            "|ratio - solver| = {delta:e} > 1e-6 (ratio {}, solver {})",
                            estimate.lambda_hat, solved.lambda
                        ))
                    }
                }),
            );
        }

        if d % 2 == 0 {
            let x0 = x.clone();
            push(
                format!("quasi-unipotence[d={d}]"),
                Box::new(move || {
                    let matrices =
                        cohomology::phi_action_matrix(&x0).map_err(|e| e.to_string())?;
                    if matrices.phi.pow(x0.dim() + 2).is_identity() {
                        Ok(())
                    } else {
                        Err("phi^(d+2) != I".into())
                    }
                }),
            );
        }

        let x0 = x.clone();
        push(
            format!("counterexample-verdict[d={d}]"),
            Box::new(move || {
                let report = cohomology::counterexample_report(&x0).map_err(|e| e.to_string())?;
                if report.h0 <= 0.0 {
                    return Err("h0 <= 0".into());
                }
                let expected = x0.dim() % 2 == 1;
                if report.kt_holds != expected {
                    return Err(format!(
                        "kt_holds = {}, expected {expected} for d = {}",
                        report.kt_holds,
                        x0.dim()
                    ));
                }
                Ok(())
            }),
        );

        if d == 3 || d == 5 {
            let x0 = x.clone();
            push(
                format!("spectral-radius-equality[d={d}]"),
                Box::new(move || {
                    let matrices =
                        cohomology::phi_action_matrix(&x0).map_err(|e| e.to_string())?;
                    let spectral = cohomology::spectral_analysis(&matrices.phi, x0.dim() + 2);
                    let solved = entropy::solve_entropy(
                        &x0,
                        0.0,
                        &default_tolerance(),
                        Some(&rat_int(1)),
                    )
                    .map_err(|e| e.to_string())?;
                    let delta = (spectral.rho.ln() - solved.lambda).abs();
                    if delta <= 1e-8 {
                        Ok(())
                    } else {
                        Err(format!("|log rho - h0| = {delta:e} > 1e-8"))
                    }
                }),
            );
        }

        if d == 3 {
            let x0 = x.clone();
            push(
                format!("char-poly-divides-curve[d={d}]"),
                Box::new(move || {
                    let matrices =
                        cohomology::phi_action_matrix(&x0).map_err(|e| e.to_string())?;
                    let char_poly = matrices.phi.char_poly();
                    let curve = entropy::entropy_curve(&x0).map_err(|e| e.to_string())?;
                    let slice = curve.at_u(&rat_int(1));
                    if slice.exact_div(&char_poly).is_some() {
                        Ok(())
                    } else {
                        Err("char poly does not divide F(1, y)".into())
                    }
                }),
            );
        }
    }
    checks
}

pub fn run_suite(dims: &[u32], budget_secs: f64, seed: u64) -> SuiteOutcome {
    let start = Instant::now();
    let checks = build_checks(dims, seed);
    let mut results = Vec::with_capacity(checks.len());
    for check in checks {
        if start.elapsed().as_secs_f64() > budget_secs {
            results.push(CheckOutcome {
                name: check.name,
                status: Status::Skipped,
            });
            continue;
        }
        let check_start = Instant::now();
        let status = match (check.run)() {
            Ok(()) => Status::Pass,
            Err(detail) => Status::Fail(detail),
        };
        eprintln!(
            "verify: {} finished in {:.2}s",
            check.name,
            check_start.elapsed().as_secs_f64()
        );
        results.push(CheckOutcome {
            name: check.name,
            status,
        });
    }
    SuiteOutcome {
        results,
        dims: dims.to_vec(),
        seed,
    }
}

pub fn report_text(outcome: &SuiteOutcome) -> String {
    let mut out = String::new();
    let dims: Vec<String> = outcome.dims.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(
        out,
        "verification suite: dims [{}], seed {}",
        dims.join(", "),
        outcome.seed
    );
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for result in &outcome.results {
        match &result.status {
            Status::Pass => {
                passed += 1;
                let _ = writeln!(out, "PASS {}", result.name);
            }
            Status::Fail(detail) => {
                failed += 1;
                let _ = writeln!(out, "FAIL {}: {detail}", result.name);
            }
            Status::Skipped => {
                skipped += 1;
                let _ = writeln!(out, "SKIP {}: budget exhausted", result.name);
            }
        }
    }
    let _ = writeln!(
        out,
        "summary: {passed} passed, {failed} failed, {skipped} skipped of {} checks",
        outcome.results.len()
    );
    out
}

pub fn report_json(outcome: &SuiteOutcome) -> String {
    let checks: Vec<serde_json::Value> = outcome
        .results
        .iter()
        .map(|r| match &r.status {
            Status::Pass => json!({"name": r.name, "status": "pass"}),
            Status::Fail(detail) => {
                json!({"name": r.name, "status": "fail", "detail": detail})
            }
            Status::Skipped => json!({"name": r.name, "status": "skipped"}),
        })
        .collect();
    let value = json!({
        "dims": outcome.dims,
        "seed": outcome.seed,
        "checks": checks,
        "passed": outcome.results.iter().filter(|r| r.status == Status::Pass).count(),
        "failed": outcome.results.iter().filter(|r| matches!(r.status, Status::Fail(_))).count(),
        "skipped": outcome.results.iter().filter(|r| r.status == Status::Skipped).count(),
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}
