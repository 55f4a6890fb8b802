//! The dimension-counting recursions behind the entropy.
//!
//! `B_{n,k}` counts Hom dimensions with shift-weights collected into powers
//! of `s = e^{-(d-1)t}`, seeded by `B_{0,k} = a_k` and filled by the k-shift
//! recursion
//!
//! ```text
//! B_{n,k} = B_{n-1,k+1} + a_k·s·B_{n-1,1}
//! ```
//!
//! `C_n = s·B_{n,1}` satisfies the renewal recursion
//!
//! ```text
//! C_n = a'_1 C_{n-1} + a'_2 C_{n-2} + ... + a'_n C_0 + a'_{n+1}
//! ```
//!
//! with `a'_k = a_k·s`, and equals the sum of `a'_{i_1}···a'_{i_q}` over all
//! ordered compositions `i_1 + ... + i_q = n + 1`. Its exponential growth
//! rate reproduces the solved entropy; both brute-force enumerations live
//! here as oracles against the recursions.

use crate::geometry::{self, VarietySpec};
use crate::numerics::{rational_ln, rational_to_f64, Polynomial, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DynamicsError {
    #[error("symbolic B-table capped at n_max = {cap}, requested {requested}")]
    SymbolicCap { requested: usize, cap: usize },
    #[error("B-table size {cells} exceeds the cell cap {cap}")]
    TableCap { cells: usize, cap: usize },
    #[error("exact C-sequence capped at n_max = {cap}, requested {requested}")]
    ExactCap { requested: usize, cap: usize },
    #[error("composition enumeration capped at n = {cap}, requested {requested}")]
    CompositionCap { requested: usize, cap: usize },
    #[error("partition verification capped at n = {cap}, requested {requested}")]
    PartitionCap { requested: usize, cap: usize },
    #[error("exact mode requires an exact rational s parameter")]
    ExactModeNeedsRationalS,
    #[error("s must be positive")]
    NonPositiveS,
    #[error("growth estimate needs a table of length >= {need}, got {len}")]
    InsufficientData { len: usize, need: usize },
}

/// The weight `s = e^{-(d-1)t}`, exact when certification matters.
#[derive(Debug, Clone, PartialEq)]
pub enum SParam {
    Exact(Rational),
    Float(f64),
}

impl SParam {
    pub fn from_t(x: &VarietySpec, t: f64) -> SParam {
        SParam::Float((-(x.dim() as f64 - 1.0) * t).exp())
    }

    pub fn one() -> SParam {
        SParam::Exact(Rational::one())
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            SParam::Exact(r) => rational_to_f64(r),
            SParam::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            SParam::Exact(r) => Some(r),
            SParam::Float(_) => None,
        }
    }

    fn ln(&self) -> f64 {
        match self {
            SParam::Exact(r) => rational_ln(r),
            SParam::Float(v) => v.ln(),
        }
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        let positive = match self {
            SParam::Exact(r) => r.is_positive(),
            SParam::Float(v) => *v > 0.0 && v.is_finite(),
        };
        positive.then_some(()).ok_or(DynamicsError::NonPositiveS)
    }
}

/// Default resource caps. Symbolic coefficients grow like products of the
/// `a_k`, so the symbolic table is kept small; evaluated tables are capped
/// by cell count.
pub const SYMBOLIC_N_CAP: usize = 48;
pub const TABLE_CELL_CAP: usize = 4_000_000;
pub const EXACT_N_CAP: usize = 200;
pub const COMPOSITION_N_CAP: usize = 20;
pub const PARTITION_N_CAP: usize = 12;

/// Configurable limits for [`b_table_with_caps`].
#[derive(Debug, Clone, Copy)]
pub struct BTableCaps {
    pub symbolic_n: usize,
    pub cells: usize,
}

impl Default for BTableCaps {
    fn default() -> Self {
        BTableCaps {
            symbolic_n: SYMBOLIC_N_CAP,
            cells: TABLE_CELL_CAP,
        }
    }
}

#[derive(Debug, Clone)]
enum BEntries {
    /// Polynomials in `s` with (integer) coefficients.
    Symbolic(Vec<Vec<Polynomial>>),
    /// Exact values at a fixed rational `s`.
    Evaluated(Vec<Vec<Rational>>),
}

/// Triangular table of `B_{n,k}` values for `0 <= n <= n_max`. Internally
/// the k-range of row `n` extends to `k_max + n_max - n` because the
/// recursion consumes `k+1` at each step.
#[derive(Debug, Clone)]
pub struct BTable {
    entries: BEntries,
    n_max: usize,
    k_max: usize,
}

impl BTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.entries, BEntries::Symbolic(_))
    }

    /// `B_{n,k}` as a polynomial in `s` (symbolic tables only), `k >= 1`.
    pub fn symbolic(&self, n: usize, k: usize) -> Option<&Polynomial> {
        match &self.entries {
            BEntries::Symbolic(rows) => rows.get(n).and_then(|row| row.get(k.checked_sub(1)?)),
            BEntries::Evaluated(_) => None,
        }
    }

    /// `B_{n,k}` as an exact rational (evaluated tables only), `k >= 1`.
    pub fn evaluated(&self, n: usize, k: usize) -> Option<&Rational> {
        match &self.entries {
            BEntries::Evaluated(rows) => rows.get(n).and_then(|row| row.get(k.checked_sub(1)?)),
            BEntries::Symbolic(_) => None,
        }
    }
}

/// Fill the `B_{n,k}` table by the k-shift recursion from the seed row
/// `B_{0,k} = a_k`; symbolic in `s` when `s` is absent. Default caps.
pub fn b_table(
    x: &VarietySpec,
    n_max: usize,
    k_max: usize,
    s: Option<&Rational>,
) -> Result<BTable, DynamicsError> {
    b_table_with_caps(x, n_max, k_max, s, BTableCaps::default())
}

pub fn b_table_with_caps(
    x: &VarietySpec,
    n_max: usize,
    k_max: usize,
    s: Option<&Rational>,
    caps: BTableCaps,
) -> Result<BTable, DynamicsError> {
    assert!(k_max >= 1, "k_max must be at least 1");
    let k_internal = k_max + n_max;
    let cells = (n_max + 1) * k_internal;
    if cells > caps.cells {
        return Err(DynamicsError::TableCap {
            cells,
            cap: caps.cells,
        });
    }
    let a: Vec<Rational> = geometry::a_sequence(x, k_internal)
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    match s {
        None => {
            if n_max > caps.symbolic_n {
                return Err(DynamicsError::SymbolicCap {
                    requested: n_max,
                    cap: caps.symbolic_n,
                });
            }
            let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(n_max + 1);
            rows.push(a.iter().map(|ak| Polynomial::constant(ak.clone())).collect());
            for n in 1..=n_max {
                let prev = &rows[n - 1];
                let b_prev_1_scaled: Vec<Polynomial> = a
                    .iter()
                    .take(k_internal - n)
                    .map(|ak| {
                        // a_k · s · B_{n-1,1}
                        let shifted: Vec<Rational> = std::iter::once(Rational::zero())
                            .chain(prev[0].coeffs().iter().map(|c| c * ak))
                            .collect();
                        Polynomial::new(shifted)
                    })
                    .collect();
                let row: Vec<Polynomial> = (0..k_internal - n)
                    .map(|idx| &prev[idx + 1] + &b_prev_1_scaled[idx])
                    .collect();
                rows.push(row);
            }
            Ok(BTable {
                entries: BEntries::Symbolic(rows),
                n_max,
                k_max,
            })
        }
        Some(s) => {
            if !s.is_positive() {
                return Err(DynamicsError::NonPositiveS);
            }
            let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
            rows.push(a.clone());
            for n in 1..=n_max {
                let prev = &rows[n - 1];
                let scale = s * &prev[0];
                let row: Vec<Rational> = (0..k_internal - n)
                    .map(|idx| &prev[idx + 1] + &a[idx] * &scale)
                    .collect();
                rows.push(row);
            }
            Ok(BTable {
                entries: BEntries::Evaluated(rows),
                n_max,
                k_max,
            })
        }
    }
}

/// Growth data of the `C_n` sequence in log space.
///
/// `lambda_ratio[n] = log(C_{n+1}/C_n)` and `lambda_cesaro[n] =
/// log(C_{n+1})/(n+1)`, both of length `n_max`.
#[derive(Debug, Clone)]
pub struct GrowthTable {
    pub log_c: Vec<f64>,
    pub lambda_ratio: Vec<f64>,
    pub lambda_cesaro: Vec<f64>,
}

impl GrowthTable {
    fn from_log_values(log_c: Vec<f64>) -> GrowthTable {
        let lambda_ratio = log_c.windows(2).map(|w| w[1] - w[0]).collect();
        let lambda_cesaro = log_c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, v)| v / n as f64)
            .collect();
        GrowthTable {
            log_c,
            lambda_ratio,
            lambda_cesaro,
        }
    }

    pub fn len(&self) -> usize {
        self.log_c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_c.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CMode {
    /// Exact rationals, capped at `n_max <= 200`.
    Exact,
    /// Log-space recursion, rescaled each step; relative error is bounded by
    /// `n·2^-50`.
    LogSpace,
}

/// The `C_n` sequence: exact values (exact mode) plus the growth table.
#[derive(Debug, Clone)]
pub struct CSequence {
    /// Present exactly in `CMode::Exact`.
    pub exact: Option<Vec<Rational>>,
    pub table: GrowthTable,
}

/// Run the renewal recursion up to `C_{n_max}`.
pub fn c_sequence(
    x: &VarietySpec,
    s: &SParam,
    n_max: usize,
    mode: CMode,
) -> Result<CSequence, DynamicsError> {
    s.validate()?;
    match mode {
        CMode::Exact => {
            if n_max > EXACT_N_CAP {
                return Err(DynamicsError::ExactCap {
                    requested: n_max,
                    cap: EXACT_N_CAP,
                });
            }
            let s = s.exact().ok_or(DynamicsError::ExactModeNeedsRationalS)?;
            let values = c_sequence_exact(x, s, n_max);
            let log_c = values.iter().map(rational_ln).collect();
            Ok(CSequence {
                exact: Some(values),
                table: GrowthTable::from_log_values(log_c),
            })
        }
        CMode::LogSpace => {
            let ln_s = s.ln();
            let a = geometry::a_sequence(x, n_max + 1);
            let log_a_prime: Vec<f64> = a
                .iter()
                .map(|ak| rational_ln(&Rational::from_integer(ak.clone())) + ln_s)
                .collect();
            let mut log_c = Vec::with_capacity(n_max + 1);
            log_c.push(log_a_prime[0]);
            let mut terms: Vec<f64> = Vec::with_capacity(n_max + 1);
            for n in 1..=n_max {
                terms.clear();
                for j in 1..=n {
                    terms.push(log_a_prime[j - 1] + log_c[n - j]);
                }
                terms.push(log_a_prime[n]);
                log_c.push(log_sum_exp(&terms));
            }
            Ok(CSequence {
                exact: None,
                table: GrowthTable::from_log_values(log_c),
            })
        }
    }
}

/// Exact renewal recursion; the workhorse behind `CMode::Exact` and the
/// cross-checks against the B-table and the composition oracle.
pub fn c_sequence_exact(x: &VarietySpec, s: &Rational, n_max: usize) -> Vec<Rational> {
    let a: Vec<Rational> = geometry::a_sequence(x, n_max + 1)
        .into_iter()
        .map(|ak| Rational::from_integer(ak) * s)
        .collect();
    let mut c: Vec<Rational> = Vec::with_capacity(n_max + 1);
    c.push(a[0].clone());
    for n in 1..=n_max {
        let mut acc = a[n].clone();
        for j in 1..=n {
            acc += &a[j - 1] * &c[n - j];
        }
        c.push(acc);
    }
    c
}

/// Per-step rescaled sum of exponentials; the scale is the running maximum,
/// so magnitudes stay near one regardless of how fast `C_n` grows.
fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// Brute-force `C_n` as the sum over ordered compositions of `n+1` of the
/// products `a'_{i_1}···a'_{i_q}`. Exponential in `n`; the independent
/// oracle for the renewal recursion.
pub fn composition_oracle(
    x: &VarietySpec,
    s: &Rational,
    n: usize,
) -> Result<Rational, DynamicsError> {
    if n > COMPOSITION_N_CAP {
        return Err(DynamicsError::CompositionCap {
            requested: n,
            cap: COMPOSITION_N_CAP,
        });
    }
    if !s.is_positive() {
        return Err(DynamicsError::NonPositiveS);
    }
    let m = n + 1;
    let a: Vec<Rational> = geometry::a_sequence(x, m)
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    let mut total = Rational::zero();
    // compositions of m <-> subsets of the m-1 gaps
    for mask in 0u64..(1u64 << (m - 1)) {
        let mut product = Rational::one();
        let mut part = 1usize;
        let mut parts = 0u32;
        for gap in 0..m - 1 {
            if mask & (1 << gap) != 0 {
                product *= &a[part - 1];
                parts += 1;
                part = 1;
            } else {
                part += 1;
            }
        }
        product *= &a[part - 1];
        parts += 1;
        let mut s_power = Rational::one();
        for _ in 0..parts {
            s_power *= s;
        }
        total += product * s_power;
    }
    Ok(total)
}

/// Check the ordered-partition formula
///
/// ```text
/// B_{n,k} = a_{n+k} + Σ_{σ=1}^{n} a_σ · P_{n+k-σ,k}
/// ```
///
/// where `P_{m,k}` sums `a_{i_1}···a_{i_q}·s^q` over ordered partitions of
/// `m` with first piece at least `k`, against the recursion-filled table,
/// symbolically in `s`.
pub fn verify_partition_formula(
    x: &VarietySpec,
    n: usize,
    k: usize,
) -> Result<bool, DynamicsError> {
    if n > PARTITION_N_CAP {
        return Err(DynamicsError::PartitionCap {
            requested: n,
            cap: PARTITION_N_CAP,
        });
    }
    assert!(k >= 1, "k must be at least 1");
    let table = b_table(x, n, k, None)?;
    let recursion_on_table = table
        .symbolic(n, k)
        .expect("symbolic table covers requested cell")
        .clone();
    let a: Vec<Rational> = geometry::a_sequence(x, n + k)
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    let mut rhs = Polynomial::constant(a[n + k - 1].clone());
    for sigma in 1..=n {
        let p = ordered_partition_polynomial(&a, n + k - sigma, k);
        rhs = &rhs + &p.scale(&a[sigma - 1]);
    }
    Ok(recursion_on_table == rhs)
}

/// `P_{m,k}` as a polynomial in `s`.
fn ordered_partition_polynomial(a: &[Rational], m: usize, k: usize) -> Polynomial {
    let mut acc = Polynomial::zero();
    if m == 0 {
        return acc;
    }
    for mask in 0u64..(1u64 << (m - 1)) {
        let mut parts: Vec<usize> = Vec::new();
        let mut part = 1usize;
        for gap in 0..m - 1 {
            if mask & (1 << gap) != 0 {
                parts.push(part);
                part = 1;
            } else {
                part += 1;
            }
        }
        parts.push(part);
        if parts[0] < k {
            continue;
        }
        let mut coeff = Rational::one();
        for &p in &parts {
            coeff *= &a[p - 1];
        }
        acc = &acc + &Polynomial::monomial(coeff, parts.len());
    }
    acc
}

/// Ratio and Cesàro growth-rate estimates from a growth table.
#[derive(Debug, Clone)]
pub struct GrowthEstimate {
    /// Final ratio estimate `log(C_n/C_{n-1})`; converges geometrically for
    /// renewal recursions and is the estimate of record.
    pub lambda_hat: f64,
    /// Final Cesàro estimate `log(C_n)/n`; O(1/n) convergence, reported for
    /// diagnostics.
    pub lambda_cesaro: f64,
    /// Spread (max minus min) of the last ten ratio estimates.
    pub tail_oscillation: f64,
}

pub fn growth_estimate(table: &GrowthTable) -> Result<GrowthEstimate, DynamicsError> {
    const MIN_LEN: usize = 10;
    if table.log_c.len() < MIN_LEN {
        return Err(DynamicsError::InsufficientData {
            len: table.log_c.len(),
            need: MIN_LEN,
        });
    }
    let ratios = &table.lambda_ratio;
    let tail = &ratios[ratios.len().saturating_sub(10)..];
    let tail_oscillation = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - tail.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GrowthEstimate {
        lambda_hat: *ratios.last().expect("nonempty by length check"),
        lambda_cesaro: *table.lambda_cesaro.last().expect("nonempty"),
        tail_oscillation,
    })
}
