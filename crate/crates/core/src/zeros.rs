//! Positive zeros `j_{ν,s}` of `J_ν` and `j'_{ν,s}` of `J'_ν`.
//!
//! Starting brackets come from the Airy-zero bounds of Qu and Wong for
//! `j_{ν,s}` and from the interlacing `ν ≤ j'_{ν,1} < j_{ν,1} < j'_{ν,2} < …`
//! for `j'_{ν,s}`. Each bracket is checked for a sign change, bisected, then
//! polished with a fixed number of Newton steps that are only kept while they
//! stay inside the certified interval.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_pair_log, LogScaled, Order};

const BISECTION_REL_WIDTH: f64 = 1e-13;
const NEWTON_STEPS: usize = 3;
const MAX_EXPANSIONS: u32 = 10;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::domain("Interval::new", format!("lo = {lo} exceeds hi = {hi}")))
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Strict interior membership.
    pub fn surrounds(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn scaled(&self, factor: f64) -> Interval {
        let (a, b) = (self.lo * factor, self.hi * factor);
        Interval { lo: a.min(b), hi: a.max(b) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    Function,
    Derivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub order: Order,
    pub index: u32,
    pub kind: ZeroKind,
    pub value: f64,
    /// Interval over which the sign change was certified.
    pub bracket: Interval,
    /// `J_ν(value)` or `J'_ν(value)` depending on `kind`.
    pub residual: f64,
    /// Geometric widenings needed before the starting bracket changed sign.
    pub expansions: u32,
}

/// Interval containing the `s`-th negative zero `a_s` of the Airy function,
/// `a_s = -[3π/8 (4s-1)]^{2/3} (1 + σ_s)` with
/// `0 ≤ σ_s ≤ 0.130 [3π/8 (4s-1.051)]^{-2}`.
pub fn airy_zero_bounds(s: u32) -> Result<Interval> {
    if s < 1 {
        return Err(Error::domain("airy_zero_bounds", "zero index must be at least 1"));
    }
    let s = f64::from(s);
    let base = -(3.0 * PI / 8.0 * (4.0 * s - 1.0)).powf(2.0 / 3.0);
    let sigma_max = 0.130 * (3.0 * PI / 8.0 * (4.0 * s - 1.051)).powi(-2);
    Interval::new(base * (1.0 + sigma_max), base)
}

/// Bracket for `j_{ν,s}` from
/// `ν - a_s ν^{1/3} / 2^{1/3} < j_{ν,s} < ν - a_s ν^{1/3} / 2^{1/3} + (3/20) a_s² 2^{1/3} / ν^{1/3}`.
///
/// Both endpoints are monotone in `a_s`, so the Airy interval is propagated
/// by evaluating the lower bound at the least negative `a_s` and the upper
/// bound at the most negative one.
pub fn bessel_zero_bracket(order: Order, s: u32) -> Result<Interval> {
    if order.twice() == 0 {
        return Err(Error::domain("bessel_zero_bracket", "order must be positive"));
    }
    let airy = airy_zero_bounds(s)?;
    let nu = order.value();
    let cbrt2 = 2f64.cbrt();
    let nu3 = nu.cbrt();
    let lower = nu - airy.hi / cbrt2 * nu3;
    let upper = nu - airy.lo / cbrt2 * nu3 + 0.15 * airy.lo * airy.lo * cbrt2 / nu3;
    Interval::new(lower, upper)
}

/// The `s`-th positive zero of `J_ν`.
pub fn bessel_zero(order: Order, s: u32) -> Result<BesselZero> {
    if s < 1 {
        return Err(Error::domain("bessel_zero", "zero index must be at least 1"));
    }
    let asymptotic = if order.twice() == 0 {
        // McMahon: j_{0,s} - (s - 1/4)π lies in (0, 0.05]
        let beta = (f64::from(s) - 0.25) * PI;
        Interval { lo: beta - 0.1, hi: beta + 0.3 }
    } else {
        bessel_zero_bracket(order, s)?
    };
    let eval = |x: f64| bessel_pair_log(order, x).1;
    // For large s relative to ν the asymptotic bracket can hold neighbouring
    // zeros too; intersect it with the cell holding the s-th sign change.
    let cell = counted_cell(&eval, order, s);
    let lo = asymptotic.lo.max(cell.lo);
    let hi = asymptotic.hi.min(cell.hi);
    let start = if lo < hi { Interval { lo, hi } } else { cell };
    let (bracket, expansions) = expand_until_sign_change(&eval, start, order, s)?;
    let value = refine(&eval, bracket, |x| newton_step_function(order, x));
    Ok(BesselZero {
        order,
        index: s,
        kind: ZeroKind::Function,
        value,
        bracket,
        residual: eval(value).to_f64(),
        expansions,
    })
}

/// The `s`-th positive zero of `J'_ν`, `ν ≥ 1`.
pub fn bessel_deriv_zero(order: Order, s: u32) -> Result<BesselZero> {
    if order.twice() < 2 || s < 1 {
        return Err(Error::domain("bessel_deriv_zero", "need order >= 1 and index >= 1"));
    }
    let upper = bessel_zero(order, s)?.value;
    let lower = if s == 1 { order.value() } else { bessel_zero(order, s - 1)?.value };
    let start = Interval::new(lower, upper)?;
    let eval = |x: f64| derivative_log(order, x);
    let (bracket, expansions) = expand_until_sign_change(&eval, start, order, s)?;
    let value = refine(&eval, bracket, |x| newton_step_derivative(order, x));
    Ok(BesselZero {
        order,
        index: s,
        kind: ZeroKind::Derivative,
        value,
        bracket,
        residual: eval(value).to_f64(),
        expansions,
    })
}

/// The largest `m0 < limit` at which `j_{ν,s0+1}/n ≤ ν` fails, where
/// `ν = m` (integer orders) or `m + 1/2`; the inequality then holds for every
/// `m` in `(m0, limit]`. Returns `None` if it fails at `limit` itself.
///
/// The scan runs downward from `limit`, so its cost is proportional to
/// `limit - m0`.
pub fn empirical_m0(n: f64, s0: u32, half_integer: bool, limit: u32) -> Result<Option<u32>> {
    let order_for = |m: u32| if half_integer { Order::half_integer(m) } else { Order::integer(m) };
    let holds = |m: u32| -> Result<bool> {
        let order = order_for(m);
        Ok(bessel_zero(order, s0 + 1)?.value / n <= order.value())
    };
    if !holds(limit)? {
        return Ok(None);
    }
    let mut m = limit;
    while m > 1 {
        m -= 1;
        if !holds(m)? {
            return Ok(Some(m));
        }
    }
    Ok(Some(0))
}

/// Cell of width at most `COUNT_STEP` holding the `s`-th sign change of
/// `J_ν` to the right of `max(ν, 1/2)`. `J_ν` has no zeros in `(0, ν]` and
/// consecutive zeros are more than `2 · COUNT_STEP` apart, so each cell
/// holds at most one.
fn counted_cell(eval: &impl Fn(f64) -> LogScaled, order: Order, s: u32) -> Interval {
    const COUNT_STEP: f64 = 1.0;
    let mut a = order.value().max(0.5);
    let mut sign_a = eval(a).sign();
    let mut seen = 0;
    loop {
        let b = a + COUNT_STEP;
        let sign_b = eval(b).sign();
        if sign_b == 0 || sign_a * sign_b < 0 {
            seen += 1;
            if seen == s {
                return Interval { lo: a, hi: b };
            }
        }
        sign_a = if sign_b == 0 { -sign_a } else { sign_b };
        a = b;
    }
}

fn derivative_log(order: Order, x: f64) -> LogScaled {
    let (lower, value) = bessel_pair_log(order, x);
    lower - value.scale(order.value() / x)
}

fn newton_step_function(order: Order, x: f64) -> f64 {
    let (lower, value) = bessel_pair_log(order, x);
    let derivative = lower - value.scale(order.value() / x);
    (value / derivative).to_f64()
}

fn newton_step_derivative(order: Order, x: f64) -> f64 {
    // J'' = -J'/x - (1 - ν²/x²) J
    let nu = order.value();
    let (lower, value) = bessel_pair_log(order, x);
    let derivative = lower - value.scale(nu / x);
    let second = -derivative.scale(1.0 / x) - value.scale(1.0 - nu * nu / (x * x));
    (derivative / second).to_f64()
}

fn expand_until_sign_change(
    eval: &impl Fn(f64) -> LogScaled,
    start: Interval,
    order: Order,
    s: u32,
) -> Result<(Interval, u32)> {
    let mut bracket = start;
    for expansions in 0..=MAX_EXPANSIONS {
        let a = eval(bracket.lo).sign();
        let b = eval(bracket.hi).sign();
        if a * b < 0 {
            return Ok((bracket, expansions));
        }
        let grow = bracket.width().max(1e-3) * f64::from(1u32 << expansions.min(20));
        bracket = Interval { lo: (bracket.lo - grow).max(f64::MIN_POSITIVE), hi: bracket.hi + grow };
    }
    Err(Error::ZeroNotBracketed { nu: order.value(), s, expansions: MAX_EXPANSIONS })
}

fn refine(eval: &impl Fn(f64) -> LogScaled, bracket: Interval, newton: impl Fn(f64) -> f64) -> f64 {
    let mut lo = bracket.lo;
    let mut hi = bracket.hi;
    let lo_sign = eval(lo).sign();
    while hi - lo > BISECTION_REL_WIDTH * hi.abs() {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let sign = eval(mid).sign();
        if sign == 0 {
            return mid;
        }
        if sign == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let mut best = eval(x).abs();
    for _ in 0..NEWTON_STEPS {
        let candidate = x - newton(x);
        if !(candidate > bracket.lo && candidate < bracket.hi) {
            break;
        }
        let value = eval(candidate).abs();
        if value.log_magnitude() > best.log_magnitude() {
            break;
        }
        x = candidate;
        best = value;
    }
    x
}
