//! Dense univariate polynomials with exact rational coefficients.
//!
//! Canonical form: no trailing zero coefficient; the zero polynomial is the
//! empty coefficient list and its degree is the `None` sentinel.

use super::{NumericsError, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    /// Coefficients in ascending degree order, `coeffs[i]` multiplying `x^i`.
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    pub fn x() -> Self {
        Polynomial::monomial(Rational::one(), 1)
    }

    pub fn from_integers(ints: &[i64]) -> Self {
        Polynomial::new(ints.iter().map(|&n| super::rat_int(n)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` as the sentinel for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + super::rational_to_f64(c);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Monic rescaling; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let lead = self.leading_coeff();
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c / &lead).collect(),
        }
    }

    /// Euclidean division: returns `(q, r)` with `self = q·div + r` and
    /// `deg r < deg div`.
    pub fn divrem(&self, div: &Polynomial) -> Result<(Polynomial, Polynomial), NumericsError> {
        let dd = div.degree().ok_or(NumericsError::ZeroDenominator)?;
        let lead = div.leading_coeff();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty") / &lead;
            for i in 0..=dd {
                let sub = &div.coeffs[i] * &factor;
                rem[k + i] -= sub;
            }
            debug_assert!(rem.last().is_some_and(Rational::is_zero));
            while rem.last().is_some_and(Rational::is_zero) {
                rem.pop();
            }
            quot[k] = factor;
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Exact quotient; `None` when `div` does not divide `self`.
    pub fn exact_div(&self, div: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.divrem(div).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd via the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Clear denominators and divide out integer content; the sign is fixed
    /// so the leading coefficient is positive. Empty for the zero polynomial.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm_den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * &lcm_den / c.denom())
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v))
            .max(BigInt::one());
        let sign = if ints.last().expect("nonzero").is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let divisor = content * sign;
        for v in &mut ints {
            *v = &*v / &divisor;
        }
        ints
    }

    // ---- truncated power-series operations (all modulo x^n) ----

    pub fn mul_trunc(&self, other: &Polynomial, n: usize) -> Polynomial {
        let mut coeffs = vec![Rational::zero(); n.min(self.coeffs.len() + other.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    pub fn truncate(&self, n: usize) -> Polynomial {
        Polynomial::new(self.coeffs.iter().take(n).cloned().collect())
    }

    /// Multiplicative inverse as a power series; requires a nonzero constant
    /// term.
    pub fn inverse_series(&self, n: usize) -> Result<Polynomial, NumericsError> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(NumericsError::SeriesAtPole);
        }
        let mut inv = vec![Rational::zero(); n];
        if n == 0 {
            return Ok(Polynomial::zero());
        }
        inv[0] = Rational::one() / &a0;
        for k in 1..n {
            let mut acc = Rational::zero();
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc += &self.coeffs[i] * &inv[k - i];
            }
            inv[k] = -acc / &a0;
        }
        Ok(Polynomial::new(inv))
    }

    /// Series logarithm; requires constant term 1.
    pub fn log_series(&self, n: usize) -> Result<Polynomial, NumericsError> {
        if !self.coeff(0).is_one() {
            return Err(NumericsError::SeriesAtPole);
        }
        // log f = ∫ f'/f
        let quotient = self.derivative().mul_trunc(&self.inverse_series(n)?, n.saturating_sub(1));
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in quotient.coeffs().iter().enumerate() {
            if i + 1 < n {
                coeffs[i + 1] = c / Rational::from_integer(BigInt::from(i as i64 + 1));
            }
        }
        Ok(Polynomial::new(coeffs))
    }

    /// Series exponential; requires constant term 0.
    pub fn exp_series(&self, n: usize) -> Result<Polynomial, NumericsError> {
        if !self.coeff(0).is_zero() {
            return Err(NumericsError::SeriesAtPole);
        }
        if n == 0 {
            return Ok(Polynomial::zero());
        }
        let mut exp = vec![Rational::zero(); n];
        exp[0] = Rational::one();
        // e' = f'·e, coefficientwise: k·e_k = Σ_{i=1..k} i·f_i·e_{k-i}
        for k in 1..n {
            let mut acc = Rational::zero();
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc += &self.coeffs[i] * Rational::from_integer(BigInt::from(i as i64)) * &exp[k - i];
            }
            exp[k] = acc / Rational::from_integer(BigInt::from(k as i64));
        }
        Ok(Polynomial::new(exp))
    }

    pub fn format_with_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mag = c.abs();
            match i {
                0 => out.push_str(&format!("{mag}")),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&format!("{mag}*"));
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with_var("x"))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.format_with_var("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let p = Polynomial::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Polynomial::new(vec![rat_int(0)]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn horner_eval() {
        // 2 - 3x + x^3 at x = 1/2 -> 2 - 3/2 + 1/8 = 5/8
        let p = Polynomial::from_integers(&[2, -3, 0, 1]);
        assert_eq!(p.eval(&rat(1, 2)), rat(5, 8));
        assert!((p.eval_f64(0.5) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn divrem_reconstructs() {
        let a = Polynomial::from_integers(&[1, -9, 11, -9, 1]);
        let b = Polynomial::from_integers(&[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree() || r.is_zero());
    }

    #[test]
    fn exact_division_detects_factors() {
        // y^5 - 10y^4 + 20y^3 - 20y^2 + 10y - 1 = (y-1)(y^4 - 9y^3 + 11y^2 - 9y + 1)
        let product = Polynomial::from_integers(&[-1, 10, -20, 20, -10, 1]);
        let quartic = Polynomial::from_integers(&[1, -9, 11, -9, 1]);
        let linear = Polynomial::from_integers(&[-1, 1]);
        assert_eq!(product.exact_div(&linear), Some(quartic.clone()));
        assert_eq!(product.exact_div(&quartic), Some(linear));
        assert!(product.exact_div(&Polynomial::from_integers(&[7, 1])).is_none());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let shared = Polynomial::from_integers(&[-1, 1]);
        let a = &shared * &Polynomial::from_integers(&[1, 1]);
        let b = &shared * &Polynomial::from_integers(&[2, 0, 1]);
        assert_eq!(a.gcd(&b), shared.monic());
        assert!(Polynomial::zero().gcd(&Polynomial::zero()).is_zero());
    }

    #[test]
    fn primitive_integer_normalization() {
        let p = Polynomial::new(vec![rat(1, 2), rat(-3, 4)]);
        // 1/2 - 3/4 x -> 2 - 3x, leading positive -> -2 + 3x
        assert_eq!(
            p.primitive_integer_coeffs(),
            vec![BigInt::from(-2), BigInt::from(3)]
        );
    }

    #[test]
    fn geometric_series_inverse() {
        let one_minus_x = Polynomial::from_integers(&[1, -1]);
        let inv = one_minus_x.inverse_series(5).unwrap();
        assert_eq!(inv, Polynomial::from_integers(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn log_of_geometric_series() {
        // log(1/(1-x)) = Σ x^k/k
        let series = Polynomial::from_integers(&[1, -1]).inverse_series(6).unwrap();
        let log = series.log_series(6).unwrap();
        let expected = Polynomial::new(vec![
            rat_int(0),
            rat_int(1),
            rat(1, 2),
            rat(1, 3),
            rat(1, 4),
            rat(1, 5),
        ]);
        assert_eq!(log, expected);
    }

    #[test]
    fn exp_log_roundtrip() {
        let f = Polynomial::new(vec![rat_int(0), rat(2, 3), rat(-1, 5), rat(7, 2)]);
        let exp = f.exp_series(8).unwrap();
        assert_eq!(exp.log_series(8).unwrap(), f.truncate(8));
    }

    #[test]
    fn derivative_power_rule() {
        let p = Polynomial::from_integers(&[4, 0, 0, 5]);
        assert_eq!(p.derivative(), Polynomial::from_integers(&[0, 0, 15]));
    }

    #[test]
    fn display_form() {
        let p = Polynomial::new(vec![rat_int(1), rat(-9, 1), rat(1, 2)]);
        assert_eq!(p.to_string(), "1/2*x^2 - 9*x + 1");
    }
}
