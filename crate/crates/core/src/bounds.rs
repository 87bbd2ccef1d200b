//! Exact Hamming-ball combinatorics, binary entropy, and the size and
//! redundancy bounds for clustering-correcting codes.
//!
//! All counting is exact (`BigUint`); bound values are carried both as exact
//! integers at desk scale (`M * data_len <= 64`) and in the log2 domain for
//! larger parameters. `MLE` below is log2 of Euler's number (~1.4427), the
//! constant behind the `-log(1-x) <= MLE * x / (1-x)` step of the
//! redundancy bounds.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::CodeParams;

const MLE: f64 = std::f64::consts::LOG2_E;

/// Exact binomial coefficient.
fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Ball size `B_n(r) = sum_{i=0}^{r} C(n, i)`, exact.
pub fn ball(n: usize, r: usize) -> Result<BigUint> {
    if r > n {
        return Err(Error::OutOfRange(format!(
            "ball radius {r} exceeds dimension {n}"
        )));
    }
    Ok(ball_clamped(n, r))
}

/// Ball size with the radius clamped to the dimension, so `r >= n` yields
/// the full space. Used where the radius comes from a running scan.
pub(crate) fn ball_clamped(n: usize, r: usize) -> BigUint {
    (0..=r.min(n)).map(|i| binomial(n, i)).sum()
}

/// Binary entropy `H(x)`, with `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!(
            "entropy argument {x} not in [0, 1]"
        )));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Inverse of [`entropy`] restricted to `[0, 1/2]`, by bisection to an
/// absolute tolerance of 1e-12.
pub fn entropy_inv(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfRange(format!(
            "entropy_inv argument {y} not in [0, 1]"
        )));
    }
    // exact endpoints; near y = 1 the computed entropy saturates and the
    // bisection would stall a few ulps short
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Achievable size of a length-`n` binary code with minimum distance `d`:
/// exact for `d <= 2`, Gilbert-Varshamov (`ceil(2^n / B_n(d-1))`) for
/// `d >= 3`. A lower bound on the true optimum, which is all the size
/// lower bound needs since it is monotone in this quantity.
pub fn code_size_lower(n: usize, d: usize) -> Result<BigUint> {
    if d < 1 || d > n {
        return Err(Error::OutOfRange(format!(
            "minimum distance {d} not in [1, {n}]"
        )));
    }
    let full = BigUint::one() << n;
    Ok(match d {
        1 => full,
        2 => BigUint::one() << (n - 1), // even-weight code
        _ => {
            let b = ball(n, d - 1)?;
            (&full + &b - BigUint::one()) / b
        }
    })
}

/// A size bound carried in the log2 domain, with the exact integer kept at
/// desk scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeBound {
    /// log2 of the bound value.
    pub log2: f64,
    /// `M * data_len - log2`, the bound's distance below the full space.
    /// Better conditioned than `log2` itself for cross-bound comparisons.
    pub deficit: f64,
    /// Exact value when `M * data_len <= 64`.
    pub exact: Option<BigUint>,
}

/// Outcome of evaluating one bound formula at a parameter point.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Value(SizeBound),
    /// The formula's precondition fails (e.g. the excluded volume reaches
    /// the whole space); flagged rather than raised.
    Degenerate(String),
    /// Outside the formula's stated regime.
    NotApplicable(String),
}

impl BoundValue {
    pub fn size(&self) -> Option<&SizeBound> {
        match self {
            BoundValue::Value(s) => Some(s),
            _ => None,
        }
    }
}

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        return n.to_f64().expect("small biguint").log2();
    }
    let shift = bits - 52;
    let top = (n >> shift).to_f64().expect("52-bit mantissa");
    top.log2() + shift as f64
}

fn desk_scale(params: &CodeParams) -> bool {
    params.m() * params.data_len() <= 64
}

/// `B_1 = B_log2(M)(e) - 1`: neighbor count of one index.
pub fn b1(params: &CodeParams) -> Result<BigUint> {
    Ok(ball(params.log_m(), params.e().min(params.log_m()))? - BigUint::one())
}

/// `B_2 = B_data_len(t - 1)`: the radius-(t-1) ball in data space.
pub fn b2(params: &CodeParams) -> Result<BigUint> {
    ball(params.data_len(), (params.t() - 1).min(params.data_len()))
}

/// Achievable index-code size at minimum distance `e + 1`. Distances beyond
/// the index width leave room for exactly one codeword.
fn index_code_size(params: &CodeParams) -> Result<BigUint> {
    if params.e() + 1 > params.log_m() {
        Ok(BigUint::one())
    } else {
        code_size_lower(params.log_m(), params.e() + 1)
    }
}

fn exact_power_bound(base: &BigUint, exponent: usize, pow2_extra: usize) -> BigUint {
    base.pow(exponent as u32) << pow2_extra
}

/// Lower bound on the number of constraint-satisfying strand sets, together
/// with the matching upper bound on optimal redundancy.
///
/// The bound is `2^(M * n) * (1 - B1 * B2 / 2^n)^(M - D)` with `n` the data
/// length and `D` an achievable code size for indices at minimum distance
/// `e + 1`; the redundancy side is `mle * (M - D) * B1 * B2 / (2^n - B1 * B2)`.
pub fn size_lower_bound(params: &CodeParams) -> Result<(BoundValue, Option<f64>)> {
    let n = params.data_len();
    let b1 = b1(params)?;
    let b2 = b2(params)?;
    let excluded = &b1 * &b2;
    let space = BigUint::one() << n;
    if excluded >= space {
        return Ok((
            BoundValue::Degenerate(format!("B1*B2 = {excluded} reaches the data space 2^{n}")),
            None,
        ));
    }
    let d = index_code_size(params)?;
    let m = BigUint::from(params.m());
    debug_assert!(d <= m);
    let free = (&m - &d)
        .to_usize()
        .ok_or_else(|| Error::OutOfRange("M - D exceeds usize".into()))?;

    let x = (excluded.to_f64().unwrap_or(f64::MAX)) / 2f64.powi(n as i32).min(f64::MAX);
    let x = if n >= 1024 {
        // ratio via logs once 2^n leaves f64 range
        2f64.powf(log2_biguint(&excluded) - n as f64)
    } else {
        x
    };
    let deficit = -(free as f64) * (-x).ln_1p() / std::f64::consts::LN_2;
    let total = (params.m() * n) as f64;
    let r_upper = MLE * free as f64 * x / (1.0 - x);

    let exact = if desk_scale(params) {
        Some(exact_power_bound(
            &(&space - &excluded),
            free,
            n * d.to_usize().expect("desk scale"),
        ))
    } else {
        None
    };
    let log2 = exact.as_ref().map(log2_biguint).unwrap_or(total - deficit);
    Ok((
        BoundValue::Value(SizeBound {
            log2,
            deficit,
            exact,
        }),
        Some(r_upper),
    ))
}

/// Upper bound on the number of satisfying strand sets and the matching
/// lower bound on optimal redundancy:
/// `2^(M * n) * (1 - B2 / 2^n)^(M - 1)` and `mle * (M - 1) * B2 / 2^n`.
pub fn size_upper_bound(params: &CodeParams) -> Result<(BoundValue, Option<f64>)> {
    let n = params.data_len();
    let b2 = b2(params)?;
    let space = BigUint::one() << n;
    if b2 >= space {
        return Ok((
            BoundValue::Degenerate(format!("B2 = {b2} reaches the data space 2^{n}")),
            None,
        ));
    }
    let free = params.m() - 1;
    let x = if n >= 1024 {
        2f64.powf(log2_biguint(&b2) - n as f64)
    } else {
        b2.to_f64().unwrap_or(f64::MAX) / 2f64.powi(n as i32)
    };
    let deficit = -(free as f64) * (-x).ln_1p() / std::f64::consts::LN_2;
    let total = (params.m() * n) as f64;
    let r_lower = MLE * free as f64 * x;

    let exact = if desk_scale(params) {
        Some(exact_power_bound(&(&space - &b2), free, n))
    } else {
        None
    };
    let log2 = exact.as_ref().map(log2_biguint).unwrap_or(total - deficit);
    Ok((
        BoundValue::Value(SizeBound {
            log2,
            deficit,
            exact,
        }),
        Some(r_lower),
    ))
}

/// Main term of the asymptotic upper bound for `e = 1`:
/// `2^(M * n) * (1 - log2(M) * B2 / 2^n)^(M / 2)`, evaluated with the
/// vanishing second-order factor set to zero. Plain arithmetic with no
/// regime check; see [`size_upper_bound_asymptotic`] for the gated version.
pub fn asymptotic_main_term(params: &CodeParams) -> Result<BoundValue> {
    if params.e() != 1 {
        return Ok(BoundValue::NotApplicable("stated for e = 1 only".into()));
    }
    let n = params.data_len();
    let excluded = BigUint::from(params.log_m()) * b2(params)?;
    let space = BigUint::one() << n;
    if excluded >= space {
        return Ok(BoundValue::Degenerate(format!(
            "log2(M)*B2 = {excluded} reaches the data space 2^{n}"
        )));
    }
    let free = params.m() / 2;
    let x = if n >= 1024 {
        2f64.powf(log2_biguint(&excluded) - n as f64)
    } else {
        excluded.to_f64().unwrap_or(f64::MAX) / 2f64.powi(n as i32)
    };
    let deficit = -(free as f64) * (-x).ln_1p() / std::f64::consts::LN_2;
    let total = (params.m() * n) as f64;
    let exact = if desk_scale(params) {
        Some(exact_power_bound(&(&space - &excluded), free, n * free))
    } else {
        None
    };
    let log2 = exact.as_ref().map(log2_biguint).unwrap_or(total - deficit);
    Ok(BoundValue::Value(SizeBound {
        log2,
        deficit,
        exact,
    }))
}

/// [`asymptotic_main_term`] gated on its validity regime
/// `t / n < H^{-1}((1 - 2 beta) / (1 - beta)) / 2`; outside it the main
/// term is not a meaningful bound and is reported as not applicable.
pub fn size_upper_bound_asymptotic(params: &CodeParams) -> Result<BoundValue> {
    if params.e() != 1 {
        return Ok(BoundValue::NotApplicable("stated for e = 1 only".into()));
    }
    let beta = params.beta();
    let threshold = entropy_inv((1.0 - 2.0 * beta) / (1.0 - beta))? / 2.0;
    let ratio = params.t() as f64 / params.data_len() as f64;
    if ratio >= threshold {
        return Ok(BoundValue::NotApplicable(format!(
            "t/data_len = {ratio:.4} outside the asymptotic regime (< {threshold:.4})"
        )));
    }
    asymptotic_main_term(params)
}

/// Result of a threshold formula that is only defined when its entropy
/// argument stays in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Value(usize),
    NotApplicable(String),
}

impl Threshold {
    pub fn value(&self) -> Option<usize> {
        match self {
            Threshold::Value(v) => Some(*v),
            Threshold::NotApplicable(_) => None,
        }
    }
}

/// Largest `t` for which the size lower bound guarantees redundancy <= 1 at
/// `e = 1`: `floor(n * H^{-1}((1-2b)/(1-b) - log2(b*L)/((1-b)*L)))` with
/// `n = (1 - b) * L`. Takes real `beta` and `L`; no integer `M` is needed.
pub fn unit_redundancy_tmax(beta: f64, l: f64) -> Result<Threshold> {
    if !(0.0 < beta && beta < 0.5) {
        return Err(Error::OutOfRange(format!("beta = {beta} not in (0, 1/2)")));
    }
    if l <= 0.0 {
        return Err(Error::OutOfRange(format!("L = {l} must be positive")));
    }
    let data_len = (1.0 - beta) * l;
    let arg = (1.0 - 2.0 * beta) / (1.0 - beta) - (beta * l).log2() / ((1.0 - beta) * l);
    if !(0.0..=1.0).contains(&arg) {
        return Ok(Threshold::NotApplicable(format!(
            "entropy argument {arg:.4} outside [0, 1]"
        )));
    }
    Ok(Threshold::Value((data_len * entropy_inv(arg)?) as usize))
}

/// Smallest `t` for which the size upper bound forces redundancy >= 1 at
/// `e = 1`: `ceil(n * H^{-1}((1-2b)/(1-b) + log2(n)/n)) + 1`. An entropy
/// argument >= 1 caps the inverse at 1/2.
pub fn unit_redundancy_tmin(beta: f64, l: f64) -> Result<Threshold> {
    if !(0.0 < beta && beta < 0.5) {
        return Err(Error::OutOfRange(format!("beta = {beta} not in (0, 1/2)")));
    }
    if l <= 0.0 {
        return Err(Error::OutOfRange(format!("L = {l} must be positive")));
    }
    let data_len = (1.0 - beta) * l;
    let arg = (1.0 - 2.0 * beta) / (1.0 - beta) + data_len.log2() / data_len;
    if arg < 0.0 {
        return Ok(Threshold::NotApplicable(format!(
            "entropy argument {arg:.4} below 0"
        )));
    }
    let inv = if arg >= 1.0 { 0.5 } else { entropy_inv(arg)? };
    Ok(Threshold::Value((data_len * inv).ceil() as usize + 1))
}

/// Every bound evaluated at one parameter point.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub params: CodeParams,
    pub b1: BigUint,
    pub b2: BigUint,
    pub d: BigUint,
    pub lower: BoundValue,
    pub upper: BoundValue,
    pub asymptotic_upper: BoundValue,
    pub r_upper: Option<f64>,
    pub r_lower: Option<f64>,
    pub tmax_unit_redundancy: Threshold,
    pub tmin_unit_redundancy: Threshold,
    pub notes: Vec<String>,
}

/// Evaluates all bound formulas at `params`.
pub fn report(params: &CodeParams) -> Result<BoundsReport> {
    let (lower, r_upper) = size_lower_bound(params)?;
    let (upper, r_lower) = size_upper_bound(params)?;
    let asymptotic_upper = size_upper_bound_asymptotic(params)?;
    let mut notes = Vec::new();
    if matches!(asymptotic_upper, BoundValue::Value(_)) {
        notes.push("asymptotic upper bound reports the main term only".into());
    }
    Ok(BoundsReport {
        b1: b1(params)?,
        b2: b2(params)?,
        d: index_code_size(params)?,
        lower,
        upper,
        asymptotic_upper,
        r_upper,
        r_lower,
        tmax_unit_redundancy: unit_redundancy_tmax(params.beta(), params.l() as f64)?,
        tmin_unit_redundancy: unit_redundancy_tmin(params.beta(), params.l() as f64)?,
        notes,
        params: params.clone(),
    })
}
