//! Reference computations that share no code path with `surface-modes-core`.
//!
//! * [`series_besselj`] sums the power series of `J_ν(x)` in exact rational
//!   arithmetic for rational `x`, so it carries no cancellation error even
//!   where the terms exceed the result by twenty orders of magnitude.
//!   [`series_besselj_fast`] keeps the exact sum but forms the prefactor in
//!   floating point, for use inside quadrature.
//! * [`bisect`] is a plain sign-change bisection.
//! * [`composite_gauss7`] is a fixed high-panel-count 7-point Gauss rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `J_ν(x)` with `ν = twice_nu / 2` and `x = x_num / x_den`, by exact
/// summation of `(x/2)^ν / Γ(ν+1) · Σ_k (-x²/4)^k / (k! (ν+1)_k)`.
///
/// The sum and, for integer `ν`, the prefactor are exact rationals. For
/// half-integer `ν = m + 1/2` the prefactor is `√(x/(2π))` times a rational.
pub fn series_besselj(twice_nu: u32, x_num: i64, x_den: i64) -> f64 {
    assert!(x_num > 0 && x_den > 0);
    // Σ_k t_k with t_k = t_{k-1} · (-p²) / (2q² · k · (2ν + 2k)), x = p/q,
    // summed in fixed point.
    let sum_f = series_sum(twice_nu, x_num, x_den);

    let half_x = BigRational::new(BigInt::from(x_num), BigInt::from(2 * x_den));
    let m = twice_nu / 2;
    let prefactor = if twice_nu % 2 == 0 {
        // (x/2)^m / m!
        let mut p = BigRational::one();
        for j in 1..=m {
            p = p * &half_x / BigRational::from_integer(BigInt::from(j));
        }
        p
    } else {
        // (x/2)^{m+1/2} / Γ(m+3/2) = √(x/(2π)) · (x/2)^m · 2^{m+1} / (2m+1)!!
        let mut p = BigRational::one();
        for _ in 1..=m {
            p *= &half_x;
        }
        p *= BigRational::from_integer(BigInt::from(2).pow(m + 1));
        let mut dfact = BigInt::one();
        let mut j = 1u64;
        while j <= u64::from(2 * m + 1) {
            dfact *= j;
            j += 2;
        }
        p / BigRational::from_integer(dfact)
    };
    let value = rational_to_f64(&prefactor) * sum_f;
    if twice_nu % 2 == 0 {
        value
    } else {
        let xf = x_num as f64 / x_den as f64;
        value * (xf / (2.0 * std::f64::consts::PI)).sqrt()
    }
}

/// Exact rational form `p / 2^s` of a double in `[2^-10, 2^10)`.
fn dyadic(x: f64) -> (i64, i64) {
    assert!(x >= 2f64.powi(-10) && x < 1024.0, "x = {x} outside [2^-10, 2^10)");
    let mut shift = 0;
    while (x * 2f64.powi(shift)).fract() != 0.0 {
        shift += 1;
    }
    ((x * 2f64.powi(shift)) as i64, 1i64 << shift)
}

/// [`series_besselj`] at the exact rational value of `x ∈ [2^-10, 2^10)`.
pub fn series_besselj_at(twice_nu: u32, x: f64) -> f64 {
    let (num, den) = dyadic(x);
    series_besselj(twice_nu, num, den)
}

/// Faster variant for quadrature: the series is still summed exactly, the
/// prefactor `(x/2)^ν / Γ(ν+1)` is a floating-point log sum (relative error
/// near `1e-13`). Returns `0` below the double range.
pub fn series_besselj_fast(twice_nu: u32, x: f64) -> f64 {
    let (num, den) = dyadic(x);
    let sum = series_sum(twice_nu, num, den);
    let nu = f64::from(twice_nu) / 2.0;
    // ln Γ(ν+1) by the product down to Γ(1) = 1 or Γ(1/2) = √π
    let mut log_gamma = if twice_nu % 2 == 0 { 0.0 } else { 0.5 * std::f64::consts::PI.ln() };
    let mut j = nu;
    while j > 0.25 {
        log_gamma += j.ln();
        j -= 1.0;
    }
    (nu * (0.5 * x).ln() - log_gamma).exp() * sum
}

fn series_sum(twice_nu: u32, x_num: i64, x_den: i64) -> f64 {
    const PRECISION: usize = 512;
    let p2 = BigInt::from(x_num) * BigInt::from(x_num);
    let two_q2 = BigInt::from(2) * BigInt::from(x_den) * BigInt::from(x_den);
    let mut term: BigInt = BigInt::one() << PRECISION;
    let mut sum = term.clone();
    let bound = (x_num as f64 / x_den as f64).powi(2) / 4.0;
    let mut k: u64 = 1;
    loop {
        let denom = &two_q2 * BigInt::from(k) * BigInt::from(u64::from(twice_nu) + 2 * k);
        term = -(term * &p2) / denom;
        sum += &term;
        if term.is_zero() && (k as f64) > bound {
            break;
        }
        k += 1;
    }
    fixed_to_f64(&sum, PRECISION)
}

fn fixed_to_f64(value: &BigInt, frac_bits: usize) -> f64 {
    let negative = value.sign() == num_bigint::Sign::Minus;
    let magnitude = value.magnitude();
    let bits = magnitude.bits() as i64;
    let drop = (bits - 64).max(0) as usize;
    let top = (magnitude >> drop).to_f64().unwrap();
    let v = top * 2f64.powi(drop as i32 - frac_bits as i32);
    if negative {
        -v
    } else {
        v
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    // Scale numerator so the integer quotient carries 64+ significant bits.
    let num = r.numer().clone();
    let den = r.denom().clone();
    let shift = den.bits() as i64 - num.bits() as i64 + 80;
    let (n2, d2) = if shift >= 0 { (num << (shift as usize), den) } else { (num, den << ((-shift) as usize)) };
    let q = &n2 / &d2;
    let qf = q.to_f64().unwrap();
    qf * 2f64.powi(-(shift as i32))
}

/// Bisection on a sign change of `f` over `[a, b]` down to width `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    assert!(fa * fb <= 0.0, "no sign change on [{a}, {b}]");
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Centered finite difference with step `h`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

const GAUSS7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_4,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_4,
    0.949_107_912_342_758_5,
];
const GAUSS7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

/// Composite 7-point Gauss-Legendre rule on `panels` equal panels.
pub fn composite_gauss7(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut s = 0.0;
        for (t, w) in GAUSS7_NODES.iter().zip(GAUSS7_WEIGHTS) {
            s += w * f(mid + 0.5 * h * t);
        }
        total += 0.5 * h * s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_closed_forms() {
        // J_{1/2}(x) = √(2/(πx)) sin x
        let x = 2.5f64;
        let exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
        let v = series_besselj(1, 5, 2);
        assert!((v - exact).abs() < 1e-15 * exact.abs());
        // J_0(1) from tables
        assert!((series_besselj(0, 1, 1) - 0.765_197_686_557_966_6).abs() < 1e-16);
    }

    #[test]
    fn float_arguments_are_exact() {
        assert_eq!(series_besselj_at(0, 1.0), series_besselj(0, 1, 1));
        assert_eq!(series_besselj_at(3, 0.375), series_besselj(3, 3, 8));
        for (twice_nu, x) in [(0, 0.7), (7, 3.25), (60, 17.1), (161, 44.72)] {
            let exact = series_besselj_at(twice_nu, x);
            let fast = series_besselj_fast(twice_nu, x);
            assert!((fast / exact - 1.0).abs() < 1e-12, "{twice_nu} {x} {fast:e} {exact:e}");
        }
    }

    #[test]
    fn gauss7_integrates_polynomials() {
        let v = composite_gauss7(|r| r.powi(13), 0.0, 1.0, 3);
        assert!((v - 1.0 / 14.0).abs() < 1e-15);
    }
}
