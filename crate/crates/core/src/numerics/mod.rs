//! Exact-arithmetic substrate: arbitrary-precision rationals, dense
//! polynomials, rational functions, generalized binomials and certified
//! root bracketing.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe for unrestricted concurrent use.

mod polynomial;
mod ratfun;
mod roots;

pub use polynomial::Polynomial;
pub use ratfun::RationalFunction;
pub use roots::{
    certified_monotone_root, certified_monotone_root_with_stats, newton_polish_in_bracket,
    polynomial_complex_roots, CertifiedBracket, Sign,
};

use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact scalar: arbitrary-precision rational, always reduced, denominator
/// positive. (`num_rational` maintains both invariants on construction.)
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumericsError {
    #[error("evaluation at a pole: denominator vanishes at {x}")]
    PoleAt { x: Rational },
    #[error("endpoint {x} is not finite for the given function")]
    NonFiniteEndpoint { x: Rational },
    #[error("no sign change on [{lo}, {hi}]: f-target has signs {lo_sign:?}/{hi_sign:?}")]
    NoSignChange {
        lo: Rational,
        hi: Rational,
        lo_sign: Sign,
        hi_sign: Sign,
    },
    #[error("invalid interval: lo {lo} must be < hi {hi}")]
    InvalidInterval { lo: Rational, hi: Rational },
    #[error("tolerance not achieved: bracket width {width} after {iterations} iterations")]
    ToleranceNotAchieved { width: Rational, iterations: u32 },
    #[error("nonpositive tolerance")]
    NonPositiveTolerance,
    #[error("division by zero polynomial")]
    ZeroDenominator,
    #[error("series expansion requires den(0) != 0")]
    SeriesAtPole,
    #[error("cannot parse {0:?} as an exact rational")]
    Parse(String),
}

/// `m(m-1)...(m-r+1)/r!` as an exact rational (always an integer).
///
/// Polynomial-valued in `m`: for `m >= r` this is the combinatorial
/// binomial coefficient, for negative `m` the signed value
/// `(-1)^r C(r-m-1, r)`. It is never truncated to zero at negative `m`,
/// which is what makes `χ(O_P(m))` a polynomial valid on all of `Z`.
pub fn generalized_binomial(m: i64, r: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 1..=i64::from(r) {
        acc *= m - (i - 1);
        // product of i consecutive integers is divisible by i!
        acc /= i;
    }
    Rational::from_integer(acc)
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Round a rational to the nearest `f64`, stable for magnitudes far outside
/// the `f64` range of the numerator and denominator themselves.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.numer().sign() == IntSign::Minus;
    let a = r.numer().magnitude();
    let b = r.denom().magnitude();
    // scale so the integer quotient carries ~64 significant bits
    let shift = 64i64 + b.bits() as i64 - a.bits() as i64;
    let q = if shift >= 0 {
        (a << shift as u64) / b
    } else {
        a / (b << (-shift) as u64)
    };
    let magnitude = q.to_f64().unwrap_or(f64::INFINITY) * (-shift as f64).exp2();
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Natural log of a positive rational, accurate even when numerator or
/// denominator exceed the `f64` range.
pub fn rational_ln(r: &Rational) -> f64 {
    assert!(r.is_positive(), "rational_ln requires a positive argument");
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

fn ln_biguint(u: &BigUint) -> f64 {
    let bits = u.bits();
    if bits <= 53 {
        u.to_f64().expect("small BigUint fits f64").ln()
    } else {
        let top = u >> (bits - 53);
        top.to_f64().expect("53-bit value fits f64").ln()
            + (bits - 53) as f64 * std::f64::consts::LN_2
    }
}

/// Parse `"p/q"`, integer, or decimal/scientific strings (`"0.13"`,
/// `"2.5e-3"`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let s = s.trim();
    let err = || NumericsError::Parse(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let numer: BigInt = p.trim().parse().map_err(|_| err())?;
        let denom: BigInt = q.trim().parse().map_err(|_| err())?;
        if denom.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(numer, denom));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits: String = format!("{int_part}{frac_part}");
    let value: BigInt = if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(err());
    } else {
        digits.parse().map_err(|_| err())?
    };
    let exponent = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if exponent >= 0 {
        Rational::from_integer(value * ten.pow(exponent as u32))
    } else {
        Rational::new(value, ten.pow(exponent.unsigned_abs()))
    })
}

/// Decimal rendering with `digits` places after the point, rounded half away
/// from zero. Deterministic, used for report serialization.
pub fn rational_to_decimal_string(r: &Rational, digits: u32) -> String {
    let ten_d = BigInt::from(10).pow(digits);
    let scaled_abs: BigInt = (r.numer().abs() * &ten_d * 2 + r.denom()) / (r.denom() * 2);
    let (int_part, frac_part) = (scaled_abs.clone() / &ten_d, scaled_abs % &ten_d);
    let sign = if r.is_negative() && !(int_part.is_zero() && frac_part.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac:0>width$}",
            frac = frac_part,
            width = digits as usize
        )
    }
}
