//! Bessel functions of the first kind for integer and half-integer order.
//!
//! All evaluation goes through one kernel that returns the pair
//! `(J_{ν-1}(x), J_ν(x))` as [`LogScaled`] values. Below `x² ≤ ν + 1` the
//! power series is summed directly; above it a Miller-type downward
//! recurrence is run from well past `max(ν, x)` and normalized either by the
//! Neumann sum `J_0 + 2 Σ J_{2k} = 1` (integer orders) or by the closed forms
//! of `J_{±1/2}` (half-integer orders). The recurrence carries a running log
//! factor, so values far below the `f64` range keep their full relative
//! accuracy in log form.

use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log magnitudes below this are flushed to zero by the plain evaluators.
pub const PLAIN_UNDERFLOW_LOG: f64 = -700.0;

const RESCALE_AT: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;
const RESCALE_LOG: f64 = 200.0 * LN_10;

/// Order `ν` of a Bessel function, stored as `2ν` so that both integer
/// orders `m` and half-integer orders `m + 1/2` are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Order {
    twice_nu: u32,
}

impl Order {
    pub const fn from_twice(twice_nu: u32) -> Self {
        Order { twice_nu }
    }

    /// Integer order `m`.
    pub const fn integer(m: u32) -> Self {
        Order { twice_nu: 2 * m }
    }

    /// Half-integer order `m + 1/2`.
    pub const fn half_integer(m: u32) -> Self {
        Order { twice_nu: 2 * m + 1 }
    }

    pub const fn twice(self) -> u32 {
        self.twice_nu
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_nu) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice_nu % 2 == 0
    }

    /// `ν + 1`.
    pub const fn raised(self) -> Self {
        Order { twice_nu: self.twice_nu + 2 }
    }

    /// `ν - 1`, if it is still nonnegative.
    pub const fn lowered(self) -> Option<Self> {
        if self.twice_nu >= 2 {
            Some(Order { twice_nu: self.twice_nu - 2 })
        } else {
            None
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_nu / 2)
        } else {
            write!(f, "{}/2", self.twice_nu)
        }
    }
}

/// A real number held as a sign and the natural log of its magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogScaled {
    sign: i8,
    log_magnitude: f64,
}

impl LogScaled {
    pub const ZERO: LogScaled = LogScaled { sign: 0, log_magnitude: f64::NEG_INFINITY };
    pub const ONE: LogScaled = LogScaled { sign: 1, log_magnitude: 0.0 };

    /// Builds a value from its parts. A zero sign forces the log to `-∞`.
    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogScaled { sign: sign.signum(), log_magnitude }
        }
    }

    pub fn from_f64(value: f64) -> Self {
        if value == 0.0 {
            Self::ZERO
        } else {
            LogScaled { sign: if value > 0.0 { 1 } else { -1 }, log_magnitude: value.abs().ln() }
        }
    }

    /// `sign · exp(log)`; values can be `exp`-scaled to any magnitude first.
    pub fn from_log(sign: i8, log_magnitude: f64) -> Self {
        Self::new(sign, log_magnitude)
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn log_magnitude(self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Plain value; underflows to `±0` and overflows to `±∞` like `exp`.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_magnitude.exp()
        }
    }

    /// Plain value, flushed to exactly zero when `log < PLAIN_UNDERFLOW_LOG`.
    pub fn to_plain(self) -> f64 {
        if self.log_magnitude < PLAIN_UNDERFLOW_LOG {
            0.0
        } else {
            self.to_f64()
        }
    }

    pub fn abs(self) -> Self {
        LogScaled { sign: self.sign.abs(), ..self }
    }

    pub fn recip(self) -> Self {
        LogScaled { sign: self.sign, log_magnitude: -self.log_magnitude }
    }

    pub fn powi(self, exponent: i32) -> Self {
        if self.sign == 0 {
            return if exponent == 0 { Self::ONE } else { Self::ZERO };
        }
        let sign = if exponent % 2 == 0 { 1 } else { self.sign };
        LogScaled { sign, log_magnitude: self.log_magnitude * f64::from(exponent) }
    }

    /// Square root of the magnitude (sign must not be negative).
    pub fn sqrt(self) -> Self {
        debug_assert!(self.sign >= 0);
        LogScaled { sign: self.sign, log_magnitude: 0.5 * self.log_magnitude }
    }

    pub fn scale(self, factor: f64) -> Self {
        self * LogScaled::from_f64(factor)
    }

    /// Ratio `|self / other|` as a plain `f64`, exact even when both underflow.
    pub fn ratio_to(self, other: LogScaled) -> f64 {
        (self / other).to_f64()
    }

    pub fn log10_magnitude(self) -> f64 {
        self.log_magnitude / LN_10
    }

    fn signed_sum(self, other: LogScaled, other_sign: i8) -> Self {
        if other.sign == 0 {
            return self;
        }
        if self.sign == 0 {
            return LogScaled { sign: other_sign, ..other };
        }
        let top = self.log_magnitude.max(other.log_magnitude);
        let a = f64::from(self.sign) * (self.log_magnitude - top).exp();
        let b = f64::from(other_sign) * (other.log_magnitude - top).exp();
        let d = a + b;
        if d == 0.0 {
            Self::ZERO
        } else {
            LogScaled { sign: if d > 0.0 { 1 } else { -1 }, log_magnitude: top + d.abs().ln() }
        }
    }
}

impl Mul for LogScaled {
    type Output = LogScaled;
    fn mul(self, rhs: LogScaled) -> LogScaled {
        if self.sign == 0 || rhs.sign == 0 {
            LogScaled::ZERO
        } else {
            LogScaled { sign: self.sign * rhs.sign, log_magnitude: self.log_magnitude + rhs.log_magnitude }
        }
    }
}

impl Div for LogScaled {
    type Output = LogScaled;
    fn div(self, rhs: LogScaled) -> LogScaled {
        if rhs.sign == 0 {
            let sign = if self.sign == 0 { 0 } else { self.sign };
            return LogScaled { sign, log_magnitude: if sign == 0 { f64::NAN } else { f64::INFINITY } };
        }
        if self.sign == 0 {
            LogScaled::ZERO
        } else {
            LogScaled { sign: self.sign * rhs.sign, log_magnitude: self.log_magnitude - rhs.log_magnitude }
        }
    }
}

impl Neg for LogScaled {
    type Output = LogScaled;
    fn neg(self) -> LogScaled {
        LogScaled { sign: -self.sign, ..self }
    }
}

impl Add for LogScaled {
    type Output = LogScaled;
    fn add(self, rhs: LogScaled) -> LogScaled {
        self.signed_sum(rhs, rhs.sign)
    }
}

impl Sub for LogScaled {
    type Output = LogScaled;
    fn sub(self, rhs: LogScaled) -> LogScaled {
        self.signed_sum(rhs, -rhs.sign)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("argument must be positive, got {x}")));
    }
    if x.fract() == 0.0 && x <= 30.0 {
        // (x-1)! is exact in f64 up to 22!, and within an ulp beyond.
        let mut factorial = 1.0_f64;
        let mut k = 2.0;
        while k < x {
            factorial *= k;
            k += 1.0;
        }
        return Ok(factorial.ln());
    }
    let mut shifted = x;
    let mut product = 1.0_f64;
    while shifted < 20.0 {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling_log_gamma(shifted) - product.ln())
}

fn stirling_log_gamma(y: f64) -> f64 {
    const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;
    // B_{2k} / (2k (2k-1)) for k = 1..7
    const COEFFS: [f64; 7] =
        [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360_360.0, 1.0 / 156.0];
    let inv = 1.0 / y;
    let inv_sq = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in COEFFS {
        series += c * power;
        power *= inv_sq;
    }
    (y - 0.5) * y.ln() - y + HALF_LN_TWO_PI + series
}

/// `J_ν(x)` for `x ≥ 0`; returns `0` when `ln|J_ν(x)| < -700`.
pub fn besselj(order: Order, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("besselj", format!("argument must be nonnegative, got {x}")));
    }
    if x == 0.0 {
        return Ok(if order.twice() == 0 { 1.0 } else { 0.0 });
    }
    Ok(bessel_pair_log(order, x).1.to_plain())
}

/// Sign and log-magnitude of `J_ν(x)` for `x > 0`.
pub fn besselj_log(order: Order, x: f64) -> Result<LogScaled> {
    check_positive("besselj_log", x)?;
    Ok(bessel_pair_log(order, x).1)
}

/// `J'_ν(x) = J_{ν-1}(x) - (ν/x) J_ν(x)` for `x > 0`.
pub fn besselj_prime(order: Order, x: f64) -> Result<f64> {
    Ok(besselj_prime_log(order, x)?.to_plain())
}

pub fn besselj_prime_log(order: Order, x: f64) -> Result<LogScaled> {
    check_positive("besselj_prime", x)?;
    let (lower, value) = bessel_pair_log(order, x);
    Ok(lower - value.scale(order.value() / x))
}

/// `J'_ν(x) = (J_{ν-1}(x) - J_{ν+1}(x)) / 2`, the symmetric form.
pub fn besselj_prime_symmetric(order: Order, x: f64) -> Result<f64> {
    check_positive("besselj_prime_symmetric", x)?;
    let (lower, _) = bessel_pair_log(order, x);
    let (_, upper) = bessel_pair_log(order.raised(), x);
    Ok((lower - upper).scale(0.5).to_plain())
}

/// Spherical Bessel function `j_m(x) = √(π/(2x)) J_{m+1/2}(x)` for `x > 0`.
pub fn sphbessel(m: u32, x: f64) -> Result<f64> {
    Ok(sphbessel_log(m, x)?.to_plain())
}

pub fn sphbessel_log(m: u32, x: f64) -> Result<LogScaled> {
    check_positive("sphbessel", x)?;
    let j = bessel_pair_log(Order::half_integer(m), x).1;
    Ok(j.scale((PI / (2.0 * x)).sqrt()))
}

/// Log of the Carlini main term for `J_m(x)` below the turning point:
///
/// `(m z)^m e^{m√(1-z²)} / (e^m Γ(m+1) (1-z²)^{1/4} (1+√(1-z²))^m)`, `z = x/m`.
pub fn carlini_main(m: u32, x: f64) -> Result<LogScaled> {
    let mf = f64::from(m);
    if m == 0 || !(x > 0.0) || !(x < mf) {
        return Err(Error::domain("carlini_main", format!("need 0 < x < m, got m = {m}, x = {x}")));
    }
    let z = x / mf;
    let one_minus_z2 = (-z).ln_1p() + z.ln_1p();
    let root = (1.0 - z * z).sqrt();
    let log = mf * x.ln() + mf * root - mf - log_gamma(mf + 1.0)? - 0.25 * one_minus_z2 - mf * root.ln_1p();
    Ok(LogScaled::new(1, log))
}

fn check_positive(op: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("argument must be positive, got {x}")))
    }
}

/// `(J_{ν-1}(x), J_ν(x))` in log-scaled form, `x > 0`.
///
/// For `ν = 0` the lower member is `J_{-1} = -J_1`; for `ν = 1/2` it is
/// `J_{-1/2}(x) = √(2/(πx)) cos x`.
pub(crate) fn bessel_pair_log(order: Order, x: f64) -> (LogScaled, LogScaled) {
    let nu = order.value();
    if x * x <= nu + 1.0 {
        series_pair(order, x)
    } else {
        miller_pair(order, x)
    }
}

fn series_pair(order: Order, x: f64) -> (LogScaled, LogScaled) {
    let value = series_log(order.value(), x);
    let lower = match order.lowered() {
        Some(lower) => series_log(lower.value(), x),
        None if order.is_integer() => -series_log(1.0, x),
        None => LogScaled::from_f64((2.0 / (PI * x)).sqrt() * x.cos()),
    };
    (lower, value)
}

/// Power series for `J_μ(x)`, `μ ≥ 0`, assuming `x² ≤ μ + 2` so that the
/// terms alternate with ratio below one half.
fn series_log(mu: f64, x: f64) -> LogScaled {
    let half = 0.5 * x;
    // (x/2)^μ / Γ(μ+1), built as a running product with an exponent carry.
    let base = mu.floor();
    let frac = mu - base;
    let (mut mantissa, mut log_carry) = if frac == 0.0 {
        (1.0, 0.0)
    } else {
        // (x/2)^{1/2} / Γ(3/2)
        (half.sqrt() * 2.0 / PI.sqrt(), 0.0)
    };
    let steps = base as u64;
    for j in 1..=steps {
        mantissa *= half / (frac + j as f64);
        if mantissa < 1e-200 {
            mantissa *= 1e200;
            log_carry -= RESCALE_LOG;
        }
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * (mu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    LogScaled::from_f64(mantissa * sum) * LogScaled::new(1, log_carry)
}

fn miller_pair(order: Order, x: f64) -> (LogScaled, LogScaled) {
    let nu = order.value();
    let integer = order.is_integer();
    let frac = if integer { 0.0 } else { 0.5 };
    let target = (order.twice() / 2) as i64;
    let reach = nu.max(x);
    let depth = (10.0 * reach.cbrt()).ceil().max(20.0) as i64;
    let top = reach.ceil() as i64 + depth;
    // Half-integer orders run one index further, down to order -1/2.
    let bottom: i64 = if integer { 0 } else { -1 };

    let mut log_scale = 0.0;
    let mut above = 0.0;
    let mut current = 1.0;
    let mut neumann = 0.0;
    let mut at_target = LogScaled::ZERO;
    let mut below_target = LogScaled::ZERO;
    let mut at_order_one = LogScaled::ZERO;
    let mut at_half = LogScaled::ZERO;
    let mut at_minus_half = LogScaled::ZERO;

    let mut k = top;
    loop {
        let here = LogScaled::from_f64(current) * LogScaled::new(1, log_scale);
        if integer && k % 2 == 0 {
            neumann += if k == 0 { current } else { 2.0 * current };
        }
        if k == target {
            at_target = here;
        }
        if k == target - 1 {
            below_target = here;
        }
        if integer && k == 1 {
            at_order_one = here;
        }
        if !integer && k == 0 {
            at_half = here;
        }
        if !integer && k == -1 {
            at_minus_half = here;
        }
        if k == bottom {
            break;
        }
        let order_k = frac + k as f64;
        let next = (2.0 * order_k / x) * current - above;
        above = current;
        current = next;
        k -= 1;
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            neumann *= RESCALE_BY;
            log_scale += RESCALE_LOG;
        }
    }

    let norm = if integer {
        LogScaled::from_f64(neumann) * LogScaled::new(1, log_scale)
    } else {
        let prefactor = (2.0 / (PI * x)).sqrt();
        let (s, c) = x.sin_cos();
        if s.abs() >= c.abs() {
            at_half / LogScaled::from_f64(prefactor * s)
        } else {
            at_minus_half / LogScaled::from_f64(prefactor * c)
        }
    };
    let value = at_target / norm;
    let lower = if target == 0 {
        if integer {
            -(at_order_one / norm)
        } else {
            at_minus_half / norm
        }
    } else {
        below_target / norm
    };
    (lower, value)
}
