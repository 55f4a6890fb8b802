//! Solves the defining equation of the entropy:
//!
//! ```text
//! Σ_{k≥1} a_k e^{-kλ} = e^{(d-1)t}
//! ```
//!
//! The variable of record is `x = e^{-λ} ∈ (0,1)`, so that the left side is
//! the exact rational generating function `S(x) = Σ a_k x^k` and the whole
//! certification pipeline stays in rational arithmetic; `λ = -log x` is
//! derived only at the reporting boundary. In coordinates `(u, y) =
//! (e^t, e^λ)` the equation traces an algebraic curve over `Q`, emitted here
//! as an integer-coefficient bivariate polynomial.

use crate::geometry::{self, GeometryError, VarietyMode, VarietySpec};
use crate::numerics::{
    self, certified_monotone_root_with_stats, newton_polish_in_bracket, rat, rat_int,
    rational_from_f64, rational_to_f64, CertifiedBracket, NumericsError, Polynomial, Rational,
    RationalFunction, Sign,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EntropyError {
    #[error("the entropy equation requires a strict Calabi-Yau variety (builtin degree d+2)")]
    NotStrictCalabiYau,
    #[error("right-hand side must be positive and finite, got {rhs}")]
    InvalidRhs { rhs: f64 },
    #[error("failed to bracket the root: {detail}")]
    BracketingFailed { detail: String },
    #[error("sweep requires steps >= 2 and t_min < t_max")]
    InvalidGrid,
    #[error("solver failure at sweep index {index}: {source}")]
    SweepAt {
        index: usize,
        #[source]
        source: Box<EntropyError>,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Default bracket tolerance: 2^-64 of the unit initial interval width.
pub fn default_tolerance() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 64)
}

/// A solved entropy value at one parameter `t`.
///
/// Invariants: `lambda = -log x`, the certified bracket contains the exact
/// root of `S(x) = rhs`, and `lambda > 0`.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    pub t: f64,
    /// Exact right-hand side used for certification. In float-`t` mode this
    /// is the exact rational value of the `f64` nearest `e^{(d-1)t}`, which
    /// carries the documented one-ulp slack; in certified mode it is the
    /// caller's rational verbatim.
    pub rhs: Rational,
    /// `e^{-λ}`, polished within the certified bracket.
    pub x: f64,
    /// The entropy `h_t`.
    pub lambda: f64,
    pub bracket: CertifiedBracket,
    /// `|S(x) - rhs|` evaluated exactly at the reported `x`, then rounded.
    pub residual: f64,
    pub iterations: u32,
}

/// Integer-coefficient bivariate polynomial `F(u, y)` vanishing along
/// `(e^t, e^{h_t})`. `coeffs[i][j]` multiplies `u^i y^j`.
///
/// Clearing denominators introduces the spurious root `y = 1` of `F(u, ·)`
/// in builtin mode; the entropy root is the unique real root with `y > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePolynomial {
    coeffs: Vec<Vec<BigInt>>,
}

impl CurvePolynomial {
    pub fn coeff(&self, u_pow: usize, y_pow: usize) -> BigInt {
        self.coeffs
            .get(u_pow)
            .and_then(|row| row.get(y_pow))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn u_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn y_degree(&self) -> usize {
        self.coeffs
            .iter()
            .map(|row| row.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Exact univariate slice `F(u0, y)` as a polynomial in `y`.
    pub fn at_u(&self, u0: &Rational) -> Polynomial {
        let mut acc = Polynomial::zero();
        let mut u_power = Rational::one();
        for row in &self.coeffs {
            let slice = Polynomial::new(
                row.iter()
                    .map(|c| Rational::from_integer(c.clone()) * &u_power)
                    .collect(),
            );
            acc = &acc + &slice;
            u_power = &u_power * u0;
        }
        acc
    }

    pub fn eval_f64(&self, u: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.coeffs.iter().enumerate() {
            let mut slice = 0.0;
            for c in row.iter().rev() {
                slice = slice * y + c.to_f64().unwrap_or(f64::NAN);
            }
            acc += slice * u.powi(i as i32);
        }
        acc
    }

    /// `(∂F/∂u, ∂F/∂y)` at a point, for gradient-normalized residuals.
    pub fn gradient_f64(&self, u: f64, y: f64) -> (f64, f64) {
        let mut du = 0.0;
        let mut dy = 0.0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let c = c.to_f64().unwrap_or(f64::NAN);
                if i > 0 {
                    du += c * i as f64 * u.powi(i as i32 - 1) * y.powi(j as i32);
                }
                if j > 0 {
                    dy += c * u.powi(i as i32) * j as f64 * y.powi(j as i32 - 1);
                }
            }
        }
        (du, dy)
    }

    /// `|F(u,y)| / max(1, |∇F(u,y)|)`: first-order distance to the curve.
    pub fn normalized_residual(&self, u: f64, y: f64) -> f64 {
        let value = self.eval_f64(u, y).abs();
        let (du, dy) = self.gradient_f64(u, y);
        value / du.hypot(dy).max(1.0)
    }
}

impl std::fmt::Display for CurvePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate().rev() {
            for (j, c) in row.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, " {sign} ")?;
                }
                let mag = c.magnitude();
                let mut printed_factor = false;
                if !mag.is_one() || (i == 0 && j == 0) {
                    write!(f, "{mag}")?;
                    printed_factor = true;
                }
                for (var, pow) in [("u", i), ("y", j)] {
                    if pow > 0 {
                        if printed_factor {
                            write!(f, "*")?;
                        }
                        write!(f, "{var}")?;
                        if pow > 1 {
                            write!(f, "^{pow}")?;
                        }
                        printed_factor = true;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact generating function `S(x) = Σ_{k≥1} χ(O(k)) x^k` as a reduced
/// rational function.
///
/// Built from the Hilbert polynomial through the identities
/// `R_m(x) = Σ_{k≥1} k^m x^k`, `R_0 = x/(1-x)`, `R_m = x·R'_{m-1}`.
/// For the builtin Calabi-Yau hypersurface the result reduces to
/// `(1 - x^{d+2})/(1-x)^{d+2} - 1`.
pub fn hilbert_series_closed_form(x: &VarietySpec) -> RationalFunction {
    let hilbert = geometry::hilbert_polynomial(x);
    let mut power_sum = RationalFunction::new(
        Polynomial::from_integers(&[0, 1]),
        Polynomial::from_integers(&[1, -1]),
    )
    .expect("denominator 1-x is nonzero");
    let x_poly = RationalFunction::from_polynomial(Polynomial::from_integers(&[0, 1]));
    let mut series = RationalFunction::zero();
    for m in 0..=hilbert.degree().unwrap_or(0) {
        if m > 0 {
            power_sum = &x_poly * &power_sum.derivative();
        }
        let coeff = hilbert.coeff(m);
        if !coeff.is_zero() {
            let scaled = RationalFunction::new(power_sum.num().scale(&coeff), power_sum.den().clone())
                .expect("denominator unchanged");
            series = &series + &scaled;
        }
    }
    series
}

/// Solve `S(x) = e^{(d-1)t}` for the unique root in `(0, 1)`.
///
/// Existence and uniqueness are forced by `S` increasing strictly from 0 to
/// ∞ on `(0,1)`. Passing `certified_rhs` keeps the whole computation exact
/// (used when `e^{(d-1)t}` happens to be rational, e.g. `t = 0`); otherwise
/// the `f64` value of `e^{(d-1)t}` is promoted exactly.
pub fn solve_entropy(
    x: &VarietySpec,
    t: f64,
    tol: &Rational,
    certified_rhs: Option<&Rational>,
) -> Result<EntropyResult, EntropyError> {
    if !x.is_strict_cy() {
        return Err(EntropyError::NotStrictCalabiYau);
    }
    let rhs = match certified_rhs {
        Some(r) => {
            if !r.is_positive() {
                return Err(EntropyError::InvalidRhs {
                    rhs: rational_to_f64(r),
                });
            }
            r.clone()
        }
        None => {
            let value = ((x.dim() as f64 - 1.0) * t).exp();
            if !value.is_finite() || value <= 0.0 {
                return Err(EntropyError::InvalidRhs { rhs: value });
            }
            rational_from_f64(value).expect("finite f64 promotes exactly")
        }
    };
    let series = hilbert_series_closed_form(x);
    solve_on_series(&series, t, &rhs, tol)
}

fn solve_on_series(
    series: &RationalFunction,
    t: f64,
    rhs: &Rational,
    tol: &Rational,
) -> Result<EntropyResult, EntropyError> {
    // initial bracket (ε, 1-ε), ε = 2^-20, then exponential shrink toward
    // the endpoints until the signs straddle the target
    let mut lo = rat(1, 1 << 20);
    let mut hi = rat((1 << 20) - 1, 1 << 20);
    let sign_at = |p: &Rational| -> Result<Sign, EntropyError> {
        let value = series.eval(p).map_err(EntropyError::from)?;
        Ok(Sign::of(&(value - rhs)))
    };
    let mut expansions = 0;
    while sign_at(&lo)? != Sign::Negative {
        lo /= rat_int(2);
        expansions += 1;
        if expansions > 4_000 {
            return Err(EntropyError::BracketingFailed {
                detail: format!("no lower endpoint with S < rhs above x = {lo}"),
            });
        }
    }
    expansions = 0;
    while sign_at(&hi)? != Sign::Positive {
        hi = (hi + rat_int(1)) / rat_int(2);
        expansions += 1;
        if expansions > 4_000 {
            return Err(EntropyError::BracketingFailed {
                detail: format!("no upper endpoint with S > rhs below x = {hi}"),
            });
        }
    }

    let (bracket, iterations) =
        certified_monotone_root_with_stats(series, rhs, (&lo, &hi), tol)?;

    let rhs_f64 = rational_to_f64(rhs);
    let polished = newton_polish_in_bracket(series, rhs_f64, &bracket);
    // the value of record lives inside the bracket exactly; the f64 field is
    // its rounding
    let x_exact = match rational_from_f64(polished) {
        Some(r) => r.clamp(bracket.lo.clone(), bracket.hi.clone()),
        None => bracket.midpoint(),
    };
    let x_value = rational_to_f64(&x_exact);
    let residual_exact = series.eval(&x_exact).map_err(EntropyError::from)? - rhs;
    let lambda = lambda_from_x(&x_exact);
    debug_assert!(lambda > 0.0);
    Ok(EntropyResult {
        t,
        rhs: rhs.clone(),
        x: x_value,
        lambda,
        bracket,
        residual: rational_to_f64(&residual_exact).abs(),
        iterations,
    })
}

/// `λ = -log x` with first-order fallback when `x` is so close to 1 that the
/// direct logarithm would round to zero; keeps the positivity invariant.
fn lambda_from_x(x: &Rational) -> f64 {
    let one_minus = Rational::one() - x;
    let delta = rational_to_f64(&one_minus);
    if delta < 1e-12 {
        delta + 0.5 * delta * delta
    } else {
        -rational_to_f64(x).ln()
    }
}

/// The algebraic curve `F(u, y) = 0` carrying `(e^t, e^{h_t})`.
///
/// Builtin Calabi-Yau mode emits the canonical integer form
/// `F(u,y) = y^{d+2} - 1 - (1 + u^{d-1})(y-1)^{d+2}` directly. For user
/// Hilbert data the denominators of `S(1/y) - u^{d-1}` are cleared
/// symbolically instead; that route drops the spurious `y = 1` factor.
pub fn entropy_curve(x: &VarietySpec) -> Result<CurvePolynomial, EntropyError> {
    if !x.is_strict_cy() {
        return Err(EntropyError::NotStrictCalabiYau);
    }
    match x.mode() {
        VarietyMode::BuiltinHypersurface => {
            let d = x.dim() as usize;
            let mut constant_row = vec![BigInt::zero(); d + 3];
            // y^{d+2} - 1 - (y-1)^{d+2}
            constant_row[d + 2] += BigInt::one();
            constant_row[0] -= BigInt::one();
            let shifted = binomial_expansion_y_minus_one(d + 2);
            for (j, c) in shifted.iter().enumerate() {
                constant_row[j] -= c;
            }
            // -(u^{d-1})·(y-1)^{d+2}
            let mut rows = vec![vec![BigInt::zero(); d + 3]; d];
            rows[0] = constant_row;
            for (j, c) in shifted.iter().enumerate() {
                rows[d - 1][j] = -c.clone();
            }
            Ok(CurvePolynomial { coeffs: rows })
        }
        VarietyMode::UserHilbert => {
            let series = hilbert_series_closed_form(x);
            let num = series.num();
            let den = series.den();
            let m = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
            let reverse = |p: &Polynomial| -> Polynomial {
                Polynomial::new((0..=m).rev().map(|i| p.coeff(i)).collect())
            };
            // y^m·(N(1/y) - u^{d-1} D(1/y)), then cleared to primitive ints
            let num_star = reverse(num);
            let den_star = reverse(den);
            let scale = common_denominator(&num_star, &den_star);
            let d = x.dim() as usize;
            let mut rows = vec![Vec::new(); d];
            rows[0] = scaled_integer_coeffs(&num_star, &scale);
            rows[d - 1] = scaled_integer_coeffs(&(-&den_star), &scale);
            let mut curve = CurvePolynomial { coeffs: rows };
            normalize_curve_sign(&mut curve);
            Ok(curve)
        }
    }
}

/// Coefficients of `(y-1)^n` in ascending powers of `y`.
fn binomial_expansion_y_minus_one(n: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (j, slot) in coeffs.iter_mut().enumerate() {
        let binom = numerics::generalized_binomial(n as i64, (n - j) as u32);
        let sign = if (n - j) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        *slot = binom.to_integer() * sign;
    }
    coeffs
}

fn common_denominator(a: &Polynomial, b: &Polynomial) -> BigInt {
    use num_integer::Integer;
    a.coeffs()
        .iter()
        .chain(b.coeffs().iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn scaled_integer_coeffs(p: &Polynomial, scale: &BigInt) -> Vec<BigInt> {
    p.coeffs()
        .iter()
        .map(|c| c.numer() * scale / c.denom())
        .collect()
}

fn normalize_curve_sign(curve: &mut CurvePolynomial) {
    use num_integer::Integer;
    let mut content = BigInt::zero();
    let mut leading = BigInt::zero();
    for row in curve.coeffs.iter().rev() {
        for c in row.iter().rev() {
            if !c.is_zero() {
                content = content.gcd(c);
                if leading.is_zero() {
                    leading = c.clone();
                }
            }
        }
    }
    if content.is_zero() {
        return;
    }
    if leading.is_negative() {
        content = -content;
    }
    for row in &mut curve.coeffs {
        for c in row.iter_mut() {
            *c = &*c / &content;
        }
    }
}

/// One grid point of a sweep: the solve plus the curve residual
/// `|F(e^t, e^λ)|`, gradient-normalized.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub entropy: EntropyResult,
    pub curve_residual: f64,
}

/// Per-grid-point entropy solve over `steps` evenly spaced `t` values.
///
/// Grid points are independent and solved in parallel; output ordering is by
/// grid index regardless of completion order.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN endpoints must be rejected
pub fn sweep(
    x: &VarietySpec,
    t_min: f64,
    t_max: f64,
    steps: usize,
    tol: &Rational,
) -> Result<Vec<SweepPoint>, EntropyError> {
    if steps < 2 || !(t_min < t_max) {
        return Err(EntropyError::InvalidGrid);
    }
    let curve = entropy_curve(x)?;
    let dt = (t_max - t_min) / (steps as f64 - 1.0);
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = t_min + dt * i as f64;
            let entropy = solve_entropy(x, t, tol, None).map_err(|source| {
                EntropyError::SweepAt {
                    index: i,
                    source: Box::new(source),
                }
            })?;
            let curve_residual = curve.normalized_residual(t.exp(), entropy.lambda.exp());
            Ok(SweepPoint {
                entropy,
                curve_residual,
            })
        })
        .collect()
}
