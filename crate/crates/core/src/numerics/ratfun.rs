//! Rational functions `num/den` in canonical reduced form.
//!
//! Invariants maintained by every constructor and operation: `gcd(num, den)`
//! is 1, and `den` is monic. Evaluation is exact; a vanishing denominator is
//! reported as a pole error, never as a float infinity.

use super::{NumericsError, Polynomial, Rational};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, NumericsError> {
        if den.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        } else {
            (num, den)
        };
        let lead = den.leading_coeff();
        Ok(RationalFunction {
            num: num.scale(&(Rational::one() / &lead)),
            den: den.monic(),
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        RationalFunction::from_polynomial(Polynomial::zero())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_polynomial(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact value `num(x)/den(x)`; pole error when `den(x) = 0`.
    pub fn eval(&self, x: &Rational) -> Result<Rational, NumericsError> {
        let den = self.den.eval(x);
        if den.is_zero() {
            return Err(NumericsError::PoleAt { x: x.clone() });
        }
        Ok(self.num.eval(x) / den)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        RationalFunction::new(num, den).expect("nonzero denominator squared")
    }

    /// Power-series coefficients of orders `0..n`; requires `den(0) != 0`.
    pub fn series_coefficients(&self, n: usize) -> Result<Vec<Rational>, NumericsError> {
        if self.den.coeff(0).is_zero() {
            return Err(NumericsError::SeriesAtPole);
        }
        let inv = self.den.inverse_series(n)?;
        let series = self.num.mul_trunc(&inv, n);
        Ok((0..n).map(|i| series.coeff(i)).collect())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if rhs.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero product of denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &-rhs
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero product of denominators")
    }
}
