//! Report rendering. One function per (subcommand, format) pair.
//!
//! Conventions: exact rationals are serialized twice, as `p/q` strings and
//! as 30-digit decimal strings; floats use the shortest round-trip form;
//! JSON objects have sorted keys. All of it is byte-deterministic for a
//! fixed invocation.

use crate::CliError;
use cy_entropy_core::cohomology::{CounterexampleReport, PhiMatrices, SpectralReport};
use cy_entropy_core::dynamics::{CSequence, GrowthEstimate, SParam};
use cy_entropy_core::entropy::{CurvePolynomial, EntropyResult, SweepPoint};
use cy_entropy_core::geometry::{self, VarietyMode, VarietySpec};
use cy_entropy_core::numerics::{rational_to_decimal_string, Rational};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt::Write;

const DECIMAL_DIGITS: u32 = 30;

fn pq(r: &Rational) -> String {
    r.to_string()
}

fn dec(r: &Rational) -> String {
    rational_to_decimal_string(r, DECIMAL_DIGITS)
}

fn variety_brief(x: &VarietySpec) -> Value {
    json!({
        "dim": x.dim(),
        "degree": x.degree(),
    })
}

fn mode_name(x: &VarietySpec) -> &'static str {
    match x.mode() {
        VarietyMode::BuiltinHypersurface => "builtin-hypersurface",
        VarietyMode::UserHilbert => "user-hilbert",
    }
}

pub fn variety_json(x: &VarietySpec) -> String {
    let hilbert = geometry::hilbert_polynomial(x);
    let a: Vec<String> = geometry::a_sequence(x, 10)
        .iter()
        .map(|v| v.to_string())
        .collect();
    let value = json!({
        "variety": variety_brief(x),
        "mode": mode_name(x),
        "strict_calabi_yau": x.is_strict_cy(),
        "top_intersection": x.top_intersection().to_string(),
        "hilbert_polynomial": {
            "coefficients": hilbert.coeffs().iter().map(pq).collect::<Vec<_>>(),
            "display": hilbert.format_with_var("k"),
        },
        "a_first": a,
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}

pub fn variety_csv(x: &VarietySpec) -> String {
    let mut out = String::from("k,a_k\n");
    for (i, v) in geometry::a_sequence(x, 20).iter().enumerate() {
        let _ = writeln!(out, "{},{v}", i + 1);
    }
    out
}

pub fn variety_text(x: &VarietySpec) -> String {
    let hilbert = geometry::hilbert_polynomial(x);
    let a: Vec<String> = geometry::a_sequence(x, 10)
        .iter()
        .map(|v| v.to_string())
        .collect();
    format!(
        "variety: dimension {} | degree {} | mode {} | strict CY: {}\n\
         integral H^d = {}\n\
         Hilbert polynomial: {}\n\
         a_1..a_10: {}",
        x.dim(),
        x.degree(),
        mode_name(x),
        x.is_strict_cy(),
        x.top_intersection(),
        hilbert.format_with_var("k"),
        a.join(", ")
    )
}

fn solve_value(x: &VarietySpec, r: &EntropyResult) -> Value {
    json!({
        "variety": variety_brief(x),
        "t": r.t,
        "rhs": pq(&r.rhs),
        "rhs_decimal": dec(&r.rhs),
        "lambda": r.lambda,
        "x": r.x,
        "bracket": [pq(&r.bracket.lo), pq(&r.bracket.hi)],
        "bracket_decimal": [dec(&r.bracket.lo), dec(&r.bracket.hi)],
        "residual": r.residual,
        "iterations": r.iterations,
    })
}

pub fn solve_json(x: &VarietySpec, r: &EntropyResult) -> String {
    serde_json::to_string_pretty(&solve_value(x, r)).expect("serializable")
}

pub const SWEEP_CSV_HEADER: &str = "t,lambda,x,residual,bracket_lo,bracket_hi,curve_residual";

pub fn solve_csv(r: &EntropyResult) -> String {
    format!(
        "t,lambda,x,residual,bracket_lo,bracket_hi\n{},{},{},{},{},{}",
        r.t,
        r.lambda,
        r.x,
        r.residual,
        pq(&r.bracket.lo),
        pq(&r.bracket.hi)
    )
}

pub fn solve_text(x: &VarietySpec, r: &EntropyResult) -> String {
    format!(
        "entropy of dimension-{} degree-{} variety at t = {}\n\
         lambda   = {}\n\
         x = e^-lambda = {}\n\
         rhs      = {} (= {})\n\
         bracket  = [{}, {}] (width {})\n\
         residual = {}\n\
         bisection iterations: {}",
        x.dim(),
        x.degree(),
        r.t,
        r.lambda,
        r.x,
        pq(&r.rhs),
        dec(&r.rhs),
        dec(&r.bracket.lo),
        dec(&r.bracket.hi),
        dec(&r.bracket.width()),
        r.residual,
        r.iterations
    )
}

pub fn sweep_json(x: &VarietySpec, points: &[SweepPoint]) -> String {
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            let mut row = solve_value(x, &p.entropy);
            row["curve_residual"] = json!(p.curve_residual);
            row.as_object_mut().expect("object").remove("variety");
            row
        })
        .collect();
    let value = json!({
        "variety": variety_brief(x),
        "steps": points.len(),
        "rows": rows,
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        let r = &p.entropy;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            r.lambda,
            r.x,
            r.residual,
            pq(&r.bracket.lo),
            pq(&r.bracket.hi),
            p.curve_residual
        );
    }
    out
}

pub fn sweep_text(points: &[SweepPoint]) -> String {
    let mut out = String::from("      t          lambda        curve_residual\n");
    for p in points {
        let _ = writeln!(
            out,
            "{:>10.5}  {:>14.10}  {:e}",
            p.entropy.t, p.entropy.lambda, p.curve_residual
        );
    }
    out
}

pub fn curve_json(x: &VarietySpec, curve: &CurvePolynomial) -> String {
    let coefficients: Vec<Vec<String>> = (0..=curve.u_degree())
        .map(|i| {
            (0..=curve.y_degree())
                .map(|j| curve.coeff(i, j).to_string())
                .collect()
        })
        .collect();
    let value = json!({
        "variety": variety_brief(x),
        "u_degree": curve.u_degree(),
        "y_degree": curve.y_degree(),
        "coefficients": coefficients,
        "coefficient_order": "coefficients[i][j] multiplies u^i y^j",
        "display": curve.to_string(),
        "note": "y = 1 is a spurious root from clearing denominators; the entropy root is the unique real root with y > 1",
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}

pub fn curve_csv(curve: &CurvePolynomial) -> String {
    let mut out = String::from("u_power,y_power,coefficient\n");
    for i in 0..=curve.u_degree() {
        for j in 0..=curve.y_degree() {
            let c = curve.coeff(i, j);
            if !c.is_zero() {
                let _ = writeln!(out, "{i},{j},{c}");
            }
        }
    }
    out
}

pub fn curve_text(x: &VarietySpec, curve: &CurvePolynomial) -> String {
    format!(
        "algebraic curve of the entropy equation for dimension {} (u = e^t, y = e^lambda):\n\
         F(u, y) = {}\n\
         note: y = 1 is a spurious root of F(u, .); the entropy root is the unique real root with y > 1",
        x.dim(),
        curve
    )
}

fn s_display(s: &SParam) -> String {
    match s {
        SParam::Exact(r) => pq(r),
        SParam::Float(v) => v.to_string(),
    }
}

pub fn dynamics_json(
    x: &VarietySpec,
    s: &SParam,
    sequence: &CSequence,
    estimate: Option<&GrowthEstimate>,
) -> String {
    let table = &sequence.table;
    let rows: Vec<Value> = (0..table.log_c.len())
        .map(|n| {
            json!({
                "n": n,
                "log_c": table.log_c[n],
                "lambda_ratio": if n >= 1 { json!(table.lambda_ratio[n - 1]) } else { Value::Null },
                "lambda_cesaro": if n >= 1 { json!(table.lambda_cesaro[n - 1]) } else { Value::Null },
            })
        })
        .collect();
    let estimate_value = match estimate {
        Some(e) => json!({
            "lambda_hat": e.lambda_hat,
            "lambda_cesaro": e.lambda_cesaro,
            "tail_oscillation": e.tail_oscillation,
        }),
        None => Value::Null,
    };
    let value = json!({
        "variety": variety_brief(x),
        "s": s_display(s),
        "mode": if sequence.exact.is_some() { "exact" } else { "log-space" },
        "rows": rows,
        "estimate": estimate_value,
        "exact_values": sequence.exact.as_ref().map(|values| {
            values.iter().map(pq).collect::<Vec<_>>()
        }),
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}

pub const DYNAMICS_CSV_HEADER: &str = "n,log_C,lambda_ratio,lambda_cesaro";

pub fn dynamics_csv(sequence: &CSequence) -> String {
    let table = &sequence.table;
    let mut out = String::from(DYNAMICS_CSV_HEADER);
    out.push('\n');
    for n in 0..table.log_c.len() {
        if n == 0 {
            let _ = writeln!(out, "0,{},,", table.log_c[0]);
        } else {
            let _ = writeln!(
                out,
                "{n},{},{},{}",
                table.log_c[n],
                table.lambda_ratio[n - 1],
                table.lambda_cesaro[n - 1]
            );
        }
    }
    out
}

pub fn dynamics_text(sequence: &CSequence, estimate: Option<&GrowthEstimate>) -> String {
    let table = &sequence.table;
    let n = table.log_c.len() - 1;
    let mut out = format!(
        "C-sequence through n = {n} ({} mode)\n",
        if sequence.exact.is_some() { "exact" } else { "log-space" }
    );
    if let Some(e) = estimate {
        let _ = writeln!(out, "lambda (ratio estimate)  = {}", e.lambda_hat);
        let _ = writeln!(out, "lambda (Cesaro estimate) = {}", e.lambda_cesaro);
        let _ = writeln!(out, "tail oscillation         = {:e}", e.tail_oscillation);
    }
    let _ = writeln!(out, "log C_{n} = {}", table.log_c[n]);
    out
}

fn matrix_value(rows: &[Vec<Rational>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| Value::Array(row.iter().map(|c| Value::String(pq(c))).collect()))
            .collect(),
    )
}

fn char_poly_ints(report: &SpectralReport) -> Result<Vec<i64>, CliError> {
    report
        .char_poly
        .iter()
        .map(|c| {
            c.to_i64().ok_or_else(|| {
                CliError::Internal("characteristic polynomial coefficient exceeds i64".into())
            })
        })
        .collect()
}

pub fn cohomology_json(
    x: &VarietySpec,
    matrices: &PhiMatrices,
    spectral: &SpectralReport,
) -> Result<String, CliError> {
    let value = json!({
        "variety": variety_brief(x),
        "basis": "1, H, ..., H^d (H-generated block)",
        "matrices": {
            "tensor": matrix_value(matrices.tensor.rows()),
            "twist": matrix_value(matrices.twist.rows()),
            "phi": matrix_value(matrices.phi.rows()),
        },
        "spectral": {
            "char_poly": char_poly_ints(spectral)?,
            "char_poly_order": "ascending powers",
            "rho": spectral.rho,
            "eigen_moduli": spectral.eigen_moduli,
            "quasi_unipotent": spectral.quasi_unipotent,
            "order_checked": spectral.order_checked,
        },
    });
    Ok(serde_json::to_string_pretty(&value).expect("serializable"))
}

fn matrix_text(label: &str, rows: &[Vec<Rational>]) -> String {
    let mut out = format!("{label}:\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>10}")).collect();
        let _ = writeln!(out, "  [ {} ]", cells.join("  "));
    }
    out
}

pub fn cohomology_text(
    x: &VarietySpec,
    matrices: &PhiMatrices,
    spectral: &SpectralReport,
) -> String {
    let mut out = format!(
        "induced action on the H-generated block for dimension {}\n",
        x.dim()
    );
    out.push_str(&matrix_text("tensor (mult by e^-H)", matrices.tensor.rows()));
    out.push_str(&matrix_text("twist (x - <v(O),x> v(O))", matrices.twist.rows()));
    out.push_str(&matrix_text("phi = twist . tensor", matrices.phi.rows()));
    let coeffs: Vec<String> = spectral.char_poly.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "char poly (ascending): [{}]", coeffs.join(", "));
    let _ = writeln!(out, "rho = {}", spectral.rho);
    let _ = writeln!(
        out,
        "quasi-unipotent at order {}: {}",
        spectral.order_checked, spectral.quasi_unipotent
    );
    out
}

pub fn counterexample_json(
    x: &VarietySpec,
    verdict: &CounterexampleReport,
) -> Result<String, CliError> {
    let value = json!({
        "dim": x.dim(),
        "char_poly": char_poly_ints(&verdict.spectral)?,
        "rho": verdict.spectral.rho,
        "quasi_unipotent": verdict.spectral.quasi_unipotent,
        "h0": verdict.h0,
        "log_rho": verdict.log_rho_full,
        "kt_holds": verdict.kt_holds,
        "detail": verdict.detail,
    });
    Ok(serde_json::to_string_pretty(&value).expect("serializable"))
}

pub fn counterexample_text(x: &VarietySpec, verdict: &CounterexampleReport) -> String {
    format!(
        "dimension {}: h_0 = {} vs log rho = {}\n\
         spectral radius rho = {} (quasi-unipotent at order {}: {})\n\
         entropy equals log-spectral-radius: {}\n\
         {}",
        x.dim(),
        verdict.h0,
        verdict.log_rho_full,
        verdict.spectral.rho,
        verdict.spectral.order_checked,
        verdict.spectral.quasi_unipotent,
        if verdict.kt_holds { "yes" } else { "NO" },
        verdict.detail
    )
}
