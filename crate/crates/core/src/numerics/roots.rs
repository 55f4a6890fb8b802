//! Certified bisection for monotone functions, plus the floating-point
//! helpers kept strictly on the reporting side of the exact/float boundary:
//! Newton polish inside an already-certified bracket, and complex polynomial
//! roots for eigenvalue moduli.

use super::{rational_to_f64, NumericsError, Rational, RationalFunction};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn opposes(self, other: Sign) -> bool {
        matches!(
            (self, other),
            (Sign::Negative, Sign::Positive) | (Sign::Positive, Sign::Negative)
        )
    }
}

/// Interval with exactly evaluated, differing signs of `f - target` at the
/// endpoints; the unique root of a monotone `f` is certified to lie inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedBracket {
    pub lo: Rational,
    pub hi: Rational,
    pub f_lo_sign: Sign,
    pub f_hi_sign: Sign,
}

impl CertifiedBracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / super::rat_int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Shrink `[lo, hi]` around the unique root of `f(x) = target` by exact
/// bisection until the width is at most `tol`.
///
/// The caller guarantees strict monotonicity on the interval; the endpoint
/// sign check is the part of that contract verified here. Every comparison
/// runs in exact rational arithmetic, so the returned bracket is a proof.
pub fn certified_monotone_root(
    f: &RationalFunction,
    target: &Rational,
    interval: (&Rational, &Rational),
    tol: &Rational,
) -> Result<CertifiedBracket, NumericsError> {
    certified_monotone_root_with_stats(f, target, interval, tol).map(|(bracket, _)| bracket)
}

/// Same as [`certified_monotone_root`], also reporting the bisection count.
pub fn certified_monotone_root_with_stats(
    f: &RationalFunction,
    target: &Rational,
    interval: (&Rational, &Rational),
    tol: &Rational,
) -> Result<(CertifiedBracket, u32), NumericsError> {
    const MAX_ITERATIONS: u32 = 4_096;
    let (mut lo, mut hi) = (interval.0.clone(), interval.1.clone());
    if lo >= hi {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    if !tol.is_positive() {
        return Err(NumericsError::NonPositiveTolerance);
    }
    let sign_at = |x: &Rational| -> Result<Sign, NumericsError> {
        match f.eval(x) {
            Ok(v) => Ok(Sign::of(&(v - target))),
            Err(NumericsError::PoleAt { x }) => Err(NumericsError::NonFiniteEndpoint { x }),
            Err(e) => Err(e),
        }
    };
    let lo_sign = sign_at(&lo)?;
    let hi_sign = sign_at(&hi)?;

    // An exact root at an input endpoint: certify a tol-thin bracket at it.
    if lo_sign == Sign::Zero || hi_sign == Sign::Zero {
        let half = tol / super::rat_int(2);
        let (a, b) = if lo_sign == Sign::Zero {
            (lo.clone(), (&lo + &half).min(hi.clone()))
        } else {
            ((&hi - &half).max(lo.clone()), hi.clone())
        };
        let bracket = CertifiedBracket {
            f_lo_sign: sign_at(&a)?,
            f_hi_sign: sign_at(&b)?,
            lo: a,
            hi: b,
        };
        return Ok((bracket, 0));
    }
    if !lo_sign.opposes(hi_sign) {
        return Err(NumericsError::NoSignChange {
            lo,
            hi,
            lo_sign,
            hi_sign,
        });
    }

    let mut iterations = 0u32;
    while &hi - &lo > *tol {
        if iterations >= MAX_ITERATIONS {
            return Err(NumericsError::ToleranceNotAchieved {
                width: &hi - &lo,
                iterations,
            });
        }
        let mid = (&lo + &hi) / super::rat_int(2);
        let mid_sign = sign_at(&mid)?;
        iterations += 1;
        if mid_sign == Sign::Zero {
            // Exact hit. Re-bracket strictly around it; monotonicity makes
            // both nudged evaluations nonzero.
            let quarter = tol / super::rat_int(4);
            let a = (&mid - &quarter).max(lo.clone());
            let b = (&mid + &quarter).min(hi.clone());
            let bracket = CertifiedBracket {
                f_lo_sign: sign_at(&a)?,
                f_hi_sign: sign_at(&b)?,
                lo: a,
                hi: b,
            };
            return Ok((bracket, iterations));
        }
        if mid_sign == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((
        CertifiedBracket {
            lo,
            hi,
            f_lo_sign: lo_sign,
            f_hi_sign: hi_sign,
        },
        iterations,
    ))
}

/// Floating-point Newton refinement of `f(x) = target`, started at the
/// bracket midpoint and clamped so the result never leaves the certified
/// bracket. Applied only after certification.
pub fn newton_polish_in_bracket(
    f: &RationalFunction,
    target: f64,
    bracket: &CertifiedBracket,
) -> f64 {
    let lo = rational_to_f64(&bracket.lo);
    let hi = rational_to_f64(&bracket.hi);
    let df = f.derivative();
    let mut x = 0.5 * (lo + hi);
    let mut best = x;
    let mut best_residual = (f.eval_f64(x) - target).abs();
    for _ in 0..12 {
        let slope = df.eval_f64(x);
        if !slope.is_finite() || slope == 0.0 {
            break;
        }
        let residual = f.eval_f64(x) - target;
        let next = (x - residual / slope).clamp(lo, hi);
        let next_residual = (f.eval_f64(next) - target).abs();
        if next_residual < best_residual {
            best = next;
            best_residual = next_residual;
        }
        if next == x {
            break;
        }
        x = next;
    }
    best
}

/// All complex roots of a real polynomial (ascending coefficients) by the
/// Durand-Kerner iteration. Degree is expected to be small (matrix
/// characteristic polynomials); the Cauchy bound seeds and sanity-checks the
/// moduli.
pub fn polynomial_complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = match coeffs.iter().rposition(|c| *c != 0.0) {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let lead = coeffs[degree];
    let monic: Vec<f64> = coeffs[..=degree].iter().map(|c| c / lead).collect();
    let cauchy = 1.0
        + monic[..degree]
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));

    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in monic.iter().rev().skip(1) {
            acc = acc * x + c;
        }
        acc
    };

    // seed inside the Cauchy disk with distinct moduli and angles, off the
    // real axis so conjugate-symmetric traps are avoided
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let radius = cauchy * (k as f64 + 1.0) / (degree as f64 + 1.0);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.5;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..600 {
        let mut moved = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 1e-12);
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-13 {
            break;
        }
    }
    debug_assert!(
        roots.iter().all(|r| r.norm() <= cauchy * (1.0 + 1e-6)),
        "root escaped the Cauchy bound"
    );
    roots
}
