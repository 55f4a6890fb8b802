//! The variety and its numerical invariants.
//!
//! Everything downstream consumes the sequence `a_k = χ(O(k))`. To make that
//! sequence trustworthy it is computed along two independent routes that are
//! cross-checked exactly: the binomial-difference formula for a hypersurface
//! in projective space, and the Hirzebruch-Riemann-Roch integral against the
//! Todd class built from scratch via Newton's identities.

use crate::numerics::{
    generalized_binomial, rat_int, NumericsError, Polynomial, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension {d} is too small: the construction requires d >= 3")]
    DimensionTooSmall { d: i64 },
    #[error("invalid hypersurface degree {degree}: must be >= 1")]
    InvalidDegree { degree: i64 },
    #[error("user Hilbert polynomial has degree {got:?}, expected the dimension {expected}")]
    HilbertDegreeMismatch { expected: usize, got: Option<usize> },
    #[error("user Hilbert data is not a strictly increasing positive sequence at k = {k}")]
    NonIncreasingHilbert { k: i64 },
    #[error("user Hilbert polynomial is non-integral at k = {k}")]
    NonIntegralHilbert { k: i64 },
    #[error("leading coefficient times d! must be a positive integer, got {value}")]
    NonIntegralIntersection { value: Rational },
    #[error("{op} is only available for builtin hypersurface varieties")]
    UnsupportedMode { op: &'static str },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarietyMode {
    /// Degree-`n` hypersurface in `P^(d+1)`; Calabi-Yau exactly when
    /// `n = d + 2`.
    BuiltinHypersurface,
    /// Any strict Calabi-Yau with a known Hilbert polynomial. The caller
    /// vouches for very-ampleness and strictness; only the numerical sanity
    /// of the polynomial is checked here.
    UserHilbert,
}

/// A polarized variety described by the data the entropy computation needs:
/// dimension, Hilbert polynomial and top self-intersection of the
/// polarization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    d: u32,
    degree: u32,
    hilbert: Polynomial,
    top_intersection: BigInt,
    mode: VarietyMode,
}

/// Chern, Todd and square-root-Todd data of a builtin hypersurface, stored
/// as polynomials in the hyperplane class `H` truncated at degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicClasses {
    pub chern: Polynomial,
    pub todd: Polynomial,
    pub sqrt_todd: Polynomial,
}

/// Number of sample points used to vet user-supplied Hilbert data. A
/// degree-d polynomial that is integral at d+1 consecutive integers is
/// integral at every integer, so this range settles integrality for good.
pub fn hilbert_check_points(d: u32) -> i64 {
    2 * i64::from(d) + 10
}

/// Validated variety constructor.
///
/// `degree` defaults to `d + 2` (the Calabi-Yau hypersurface). Supplying
/// `hilbert` switches to user mode and ignores `degree`.
pub fn make_variety(
    d: u32,
    degree: Option<u32>,
    hilbert: Option<Polynomial>,
) -> Result<VarietySpec, GeometryError> {
    if d < 3 {
        return Err(GeometryError::DimensionTooSmall { d: i64::from(d) });
    }
    match hilbert {
        None => {
            let degree = degree.unwrap_or(d + 2);
            if degree < 1 {
                return Err(GeometryError::InvalidDegree {
                    degree: i64::from(degree),
                });
            }
            Ok(VarietySpec {
                d,
                degree,
                hilbert: hypersurface_hilbert_polynomial(d, degree),
                top_intersection: BigInt::from(degree),
                mode: VarietyMode::BuiltinHypersurface,
            })
        }
        Some(hilbert) => {
            if hilbert.degree() != Some(d as usize) {
                return Err(GeometryError::HilbertDegreeMismatch {
                    expected: d as usize,
                    got: hilbert.degree(),
                });
            }
            let mut previous = Rational::zero();
            for k in 1..=hilbert_check_points(d) {
                let value = hilbert.eval(&rat_int(k));
                if !value.is_integer() {
                    return Err(GeometryError::NonIntegralHilbert { k });
                }
                if value <= previous || !value.is_positive() {
                    return Err(GeometryError::NonIncreasingHilbert { k });
                }
                previous = value;
            }
            let factorial: BigInt = (1..=i64::from(d)).map(BigInt::from).product();
            let top = hilbert.leading_coeff() * Rational::from_integer(factorial);
            if !top.is_integer() || !top.is_positive() {
                return Err(GeometryError::NonIntegralIntersection { value: top });
            }
            let top_intersection = top.to_integer();
            let degree = u32::try_from(&top_intersection)
                .unwrap_or(u32::MAX);
            Ok(VarietySpec {
                d,
                degree,
                hilbert,
                top_intersection,
                mode: VarietyMode::UserHilbert,
            })
        }
    }
}

/// `χ(O_P(m))` on `P^(d+1)` minus the twist by the defining equation:
/// the Hilbert polynomial of the hypersurface, exact in `Q[k]`.
fn hypersurface_hilbert_polynomial(d: u32, degree: u32) -> Polynomial {
    let ambient = d as i64 + 1;
    let chi_projective = |offset: i64| -> Polynomial {
        // Π_{i=0}^{d+1-1} (k + offset - i) / (d+1)!
        let mut acc = Polynomial::one();
        for i in 0..=ambient - 1 {
            acc = &acc * &Polynomial::new(vec![rat_int(offset - i), rat_int(1)]);
        }
        let factorial: BigInt = (1..=ambient).map(BigInt::from).product();
        acc.scale(&(Rational::one() / Rational::from_integer(factorial)))
    };
    &chi_projective(ambient) - &chi_projective(ambient - i64::from(degree))
}

impl VarietySpec {
    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn top_intersection(&self) -> &BigInt {
        &self.top_intersection
    }

    pub fn mode(&self) -> &VarietyMode {
        &self.mode
    }

    /// Strictness of the Calabi-Yau condition: builtin hypersurfaces are
    /// strict CY exactly at degree d+2; user data is trusted by contract.
    pub fn is_strict_cy(&self) -> bool {
        match self.mode {
            VarietyMode::BuiltinHypersurface => self.degree == self.d + 2,
            VarietyMode::UserHilbert => true,
        }
    }
}

/// `χ(O_X(k))`, binomial-difference route.
///
/// For the builtin hypersurface of degree n in `P^(d+1)` this is
/// `B(k+d+1, d+1) - B(k-n+d+1, d+1)` with the generalized (polynomial-valued)
/// binomial, valid at every integer `k`. In user mode the validated Hilbert
/// polynomial is evaluated; integrality is guaranteed by the construction
/// checks.
pub fn euler_characteristic(x: &VarietySpec, k: i64) -> BigInt {
    match x.mode {
        VarietyMode::BuiltinHypersurface => {
            let r = x.d + 1;
            let top = generalized_binomial(k + i64::from(x.d) + 1, r);
            let twisted =
                generalized_binomial(k - i64::from(x.degree) + i64::from(x.d) + 1, r);
            (top - twisted).to_integer()
        }
        VarietyMode::UserHilbert => {
            let value = x.hilbert.eval(&rat_int(k));
            debug_assert!(value.is_integer());
            value.to_integer()
        }
    }
}

/// `a_k` for `k >= 1`; the Hom-dimension sequence every recursion consumes.
pub fn a_sequence(x: &VarietySpec, k_max: usize) -> Vec<BigInt> {
    (1..=k_max as i64).map(|k| euler_characteristic(x, k)).collect()
}

/// The degree-d polynomial `P` with `P(k) = χ(O(k))` at every integer.
pub fn hilbert_polynomial(x: &VarietySpec) -> Polynomial {
    x.hilbert.clone()
}

/// Chern classes by adjunction, Todd data through power sums.
///
/// The route is: total Chern class `(1+H)^(d+2)/(1+nH)` truncated at degree
/// `d`; power sums of the Chern roots from the elementary symmetric
/// functions by Newton's identities; `log td` as the power-sum-weighted
/// series of `log(x/(1-e^{-x}))`; then one series exponential for `td` and
/// another for its square root.
pub fn characteristic_classes(x: &VarietySpec) -> Result<CharacteristicClasses, GeometryError> {
    if x.mode != VarietyMode::BuiltinHypersurface {
        return Err(GeometryError::UnsupportedMode {
            op: "characteristic_classes",
        });
    }
    let order = x.d as usize + 1; // truncate all series at H^d
    let one_plus_h = Polynomial::from_integers(&[1, 1]);
    let normal = Polynomial::from_integers(&[1, i64::from(x.degree)]);
    let chern = one_plus_h
        .pow(x.d + 2)
        .mul_trunc(&normal.inverse_series(order)?, order);

    // Newton's identities: p_k = Σ_{i=1}^{k-1} (-1)^(i-1) e_i p_{k-i}
    //                            + (-1)^(k-1) k e_k
    let mut power_sums = vec![Rational::zero(); order];
    for k in 1..order {
        let mut acc = Rational::zero();
        for i in 1..k {
            let term = chern.coeff(i) * &power_sums[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let tail = chern.coeff(k) * rat_int(k as i64);
        if k % 2 == 1 {
            acc += tail;
        } else {
            acc -= tail;
        }
        power_sums[k] = acc;
    }

    // coefficient series of log(x / (1 - e^{-x}))
    let mut expm1_over_x = vec![Rational::zero(); order];
    let mut factorial = BigInt::one();
    for (m, slot) in expm1_over_x.iter_mut().enumerate() {
        factorial *= m as i64 + 1;
        let coeff = Rational::new(BigInt::one(), factorial.clone());
        *slot = if m % 2 == 0 { coeff } else { -coeff };
    }
    let todd_factor_log = Polynomial::new(expm1_over_x)
        .inverse_series(order)?
        .log_series(order)?;

    let log_todd = Polynomial::new(
        (0..order)
            .map(|j| todd_factor_log.coeff(j) * &power_sums[j])
            .collect(),
    );
    let todd = log_todd.exp_series(order)?;
    let sqrt_todd = log_todd.scale(&Rational::new(BigInt::one(), BigInt::from(2)))
        .exp_series(order)?;
    Ok(CharacteristicClasses {
        chern,
        todd,
        sqrt_todd,
    })
}

/// Truncated exponential `e^{kH} = Σ k^i H^i / i!` up to `H^d`.
pub fn exp_hyperplane(k: i64, d: u32) -> Polynomial {
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for i in 0..=i64::from(d) {
        if i > 0 {
            numer *= k;
            denom *= i;
        }
        coeffs.push(Rational::new(numer.clone(), denom.clone()));
    }
    Polynomial::new(coeffs)
}

/// `χ(O(k))` along the Hirzebruch-Riemann-Roch route:
/// `∫ e^{kH}·td(X)`, read off as the `H^d` coefficient times `∫H^d`.
/// Independent from [`euler_characteristic`]; the two are cross-checked
/// exactly in the verification suite.
pub fn euler_characteristic_hrr(x: &VarietySpec, k: i64) -> Result<Rational, GeometryError> {
    let classes = characteristic_classes(x)?;
    let order = x.d as usize + 1;
    let integrand = exp_hyperplane(k, x.d).mul_trunc(&classes.todd, order);
    Ok(integrand.coeff(x.d as usize) * Rational::from_integer(x.top_intersection.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn quintic() -> VarietySpec {
        make_variety(3, None, None).unwrap()
    }

    fn sextic_fourfold() -> VarietySpec {
        make_variety(4, None, None).unwrap()
    }

    #[test]
    fn builtin_defaults() {
        let x = quintic();
        assert_eq!(x.dim(), 3);
        assert_eq!(x.degree(), 5);
        assert_eq!(x.top_intersection(), &BigInt::from(5));
        assert!(x.is_strict_cy());
        assert_eq!(sextic_fourfold().degree(), 6);
    }

    #[test]
    fn dimension_two_rejected() {
        assert!(matches!(
            make_variety(2, None, None),
            Err(GeometryError::DimensionTooSmall { d: 2 })
        ));
    }

    #[test]
    fn quintic_euler_characteristics() {
        let x = quintic();
        // h^0(P^4, O(1)) = 5 and the twist term vanishes
        assert_eq!(euler_characteristic(&x, 1), BigInt::from(5));
        // B(10,4) - B(5,4) = 210 - 5
        assert_eq!(euler_characteristic(&x, 6), BigInt::from(205));
        // χ(O_X) = 1 + (-1)^3 = 0
        assert_eq!(euler_characteristic(&x, 0), BigInt::from(0));
        let first: Vec<BigInt> = a_sequence(&x, 6);
        let expected: Vec<BigInt> = [5, 15, 35, 70, 125, 205]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(first, expected);
    }

    #[test]
    fn euler_characteristic_of_structure_sheaf() {
        for d in 3..=8u32 {
            let x = make_variety(d, None, None).unwrap();
            let expected = if d % 2 == 0 { 2 } else { 0 };
            assert_eq!(euler_characteristic(&x, 0), BigInt::from(expected));
        }
    }

    #[test]
    fn hilbert_polynomial_matches_chi() {
        let x = quintic();
        let p = hilbert_polynomial(&x);
        assert_eq!(p.eval(&rat_int(1)), rat_int(5));
        assert_eq!(p.eval(&rat_int(2)), rat_int(15));
        assert_eq!(p.eval(&rat_int(3)), rat_int(35));
        assert_eq!(p.leading_coeff(), rat(5, 6));
        // degree-d polynomial equal to χ at 200 sampled integers
        for k in -60..140i64 {
            assert_eq!(
                p.eval(&rat_int(k)),
                Rational::from_integer(euler_characteristic(&x, k)),
                "k = {k}"
            );
        }
        let sextic = sextic_fourfold();
        assert_eq!(hilbert_polynomial(&sextic).eval(&rat_int(0)), rat_int(2));
    }

    #[test]
    fn lagrange_interpolation_oracle() {
        // independent reconstruction of the Hilbert polynomial from d+1
        // sampled χ values
        let x = quintic();
        let points: Vec<(Rational, Rational)> = (0..=3)
            .map(|k| {
                (
                    rat_int(k),
                    Rational::from_integer(euler_characteristic(&x, k)),
                )
            })
            .collect();
        let mut interpolated = Polynomial::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Polynomial::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let factor = Polynomial::new(vec![-xj.clone(), Rational::one()]);
                    basis = &basis * &factor.scale(&(Rational::one() / (xi - xj)));
                }
            }
            interpolated = &interpolated + &basis;
        }
        assert_eq!(interpolated, hilbert_polynomial(&x));
    }

    #[test]
    fn quintic_characteristic_classes() {
        let classes = characteristic_classes(&quintic()).unwrap();
        // expand (1+H)^5 (1+5H)^{-1} to degree 3 by hand:
        // (1+5H+10H^2+10H^3)(1-5H+25H^2-125H^3) = 1 + 10H^2 - 40H^3
        assert_eq!(classes.chern, Polynomial::from_integers(&[1, 0, 10, -40]));
        assert_eq!(
            classes.todd,
            Polynomial::new(vec![rat_int(1), rat_int(0), rat(5, 6)])
        );
        assert_eq!(
            classes.sqrt_todd,
            Polynomial::new(vec![rat_int(1), rat_int(0), rat(5, 12)])
        );
        // ∫ c_3 = -40 * 5 = -200, the Euler number of the quintic threefold
        let c3 = classes.chern.coeff(3) * Rational::from_integer(BigInt::from(5));
        assert_eq!(c3, rat_int(-200));
    }

    #[test]
    fn calabi_yau_has_vanishing_first_chern_class() {
        for d in 3..=8u32 {
            let x = make_variety(d, None, None).unwrap();
            let classes = characteristic_classes(&x).unwrap();
            assert!(classes.chern.coeff(1).is_zero(), "c1 != 0 for d = {d}");
            assert!(classes.chern.coeff(0).is_one());
            assert!(classes.todd.coeff(0).is_one());
        }
    }

    #[test]
    fn sqrt_todd_squares_to_todd() {
        for d in 3..=8u32 {
            let x = make_variety(d, None, None).unwrap();
            let classes = characteristic_classes(&x).unwrap();
            let squared = classes
                .sqrt_todd
                .mul_trunc(&classes.sqrt_todd, d as usize + 1);
            assert_eq!(squared, classes.todd, "d = {d}");
        }
    }

    #[test]
    fn dual_oracle_chi_equality() {
        // the module's central correctness property
        for d in 3..=8u32 {
            let x = make_variety(d, None, None).unwrap();
            for k in -10..=100i64 {
                let binomial = Rational::from_integer(euler_characteristic(&x, k));
                let hrr = euler_characteristic_hrr(&x, k).unwrap();
                assert_eq!(binomial, hrr, "d = {d}, k = {k}");
            }
        }
    }

    #[test]
    fn a_k_strictly_increasing() {
        for d in 3..=8u32 {
            let x = make_variety(d, None, None).unwrap();
            let a = a_sequence(&x, 200);
            assert!(a[0] >= BigInt::one());
            for k in 1..a.len() {
                assert!(a[k] > a[k - 1], "d = {d}, k = {}", k + 1);
            }
        }
    }

    #[test]
    fn user_hilbert_echoes_polynomial() {
        let p = hilbert_polynomial(&quintic());
        let x = make_variety(3, None, Some(p.clone())).unwrap();
        assert_eq!(hilbert_polynomial(&x), p);
        assert_eq!(x.mode(), &VarietyMode::UserHilbert);
        assert_eq!(x.top_intersection(), &BigInt::from(5));
        for k in 1..=20 {
            assert_eq!(
                euler_characteristic(&x, k),
                euler_characteristic(&quintic(), k)
            );
        }
        assert!(matches!(
            characteristic_classes(&x),
            Err(GeometryError::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn user_hilbert_validation() {
        // integral but decreasing: k^3 - 6k^2 + 20 drops from 15 to 4
        let decreasing = Polynomial::from_integers(&[20, 0, -6, 1]);
        assert!(matches!(
            make_variety(3, None, Some(decreasing)),
            Err(GeometryError::NonIncreasingHilbert { .. })
        ));
        // non-integral values
        let fractional = Polynomial::new(vec![rat(1, 3), rat_int(1), rat_int(0), rat_int(1)]);
        assert!(matches!(
            make_variety(3, None, Some(fractional)),
            Err(GeometryError::NonIntegralHilbert { .. })
        ));
        // wrong degree
        let quadratic = Polynomial::from_integers(&[1, 1, 1]);
        assert!(matches!(
            make_variety(3, None, Some(quadratic)),
            Err(GeometryError::HilbertDegreeMismatch { .. })
        ));
    }

    #[test]
    fn non_cy_degree_is_geometrically_valid() {
        let x = make_variety(3, Some(4), None).unwrap();
        assert!(!x.is_strict_cy());
        // χ(O_X) of a quartic threefold in P^4 (Fano): h^0 = 1
        assert_eq!(euler_characteristic(&x, 0), BigInt::one());
        for k in -5..=40 {
            assert_eq!(
                Rational::from_integer(euler_characteristic(&x, k)),
                euler_characteristic_hrr(&x, k).unwrap()
            );
        }
    }
}
