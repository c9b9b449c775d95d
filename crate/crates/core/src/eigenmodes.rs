//! Eigenfunction pairs `(w, v)` built from a transmission eigenvalue.
//!
//! Radial parts are `w = α J_ν(knr)`, `v = β J_ν(kr)` in two dimensions and
//! `w = α j_m(knr)`, `v = β j_m(kr)` in three. Coefficients are kept
//! log-scaled since `J_ν(k)` and `J_ν(kn)` differ by hundreds of decades for
//! large `m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{Dimension, TransmissionEigenvalue};
use crate::error::{Error, Result};
use crate::specfun::{bessel_pair_log, besselj_prime_log, LogScaled, Order};

const DEGENERATE_RATIO: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Normalization {
    BetaOne,
    AlphaOne,
}

impl Normalization {
    pub fn default_for(dim: Dimension) -> Self {
        match dim {
            Dimension::Two => Normalization::BetaOne,
            Dimension::Three => Normalization::AlphaOne,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    W,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenmodePair {
    pub eigen: TransmissionEigenvalue,
    pub alpha: LogScaled,
    pub beta: LogScaled,
    pub normalization: Normalization,
}

impl EigenmodePair {
    pub fn order(&self) -> Order {
        self.eigen.order()
    }

    pub fn dim(&self) -> Dimension {
        self.eigen.medium.dim()
    }

    pub fn coefficient(&self, which: Which) -> LogScaled {
        match which {
            Which::W => self.alpha,
            Which::V => self.beta,
        }
    }

    /// Radial wavenumber: `kn` for `w`, `k` for `v`.
    pub fn wavenumber(&self, which: Which) -> f64 {
        match which {
            Which::W => self.eigen.k * self.eigen.medium.n(),
            Which::V => self.eigen.k,
        }
    }

    /// Both coefficients multiplied by `c > 0`.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain("EigenmodePair::rescaled", format!("factor must be positive, got {c}")));
        }
        Ok(EigenmodePair { alpha: self.alpha.scale(c), beta: self.beta.scale(c), ..*self })
    }
}

pub fn make_pair(eigen: &TransmissionEigenvalue, normalization: Normalization) -> Result<EigenmodePair> {
    let order = eigen.order();
    let k = eigen.k;
    let kn = k * eigen.medium.n();
    let at_k = bessel_pair_log(order, k).1;
    let at_kn = bessel_pair_log(order, kn).1;
    for (value, x) in [(at_k, k), (at_kn, kn)] {
        let slope = besselj_prime_log(order, x)?;
        if value.is_zero() || value.log_magnitude() < slope.log_magnitude() + DEGENERATE_RATIO.ln() {
            return Err(Error::DegenerateBoundary { k });
        }
    }
    // 2D: β J(k) = α J(kn); 3D: β √n J(k) = α J(kn)
    let weight = match eigen.medium.dim() {
        Dimension::Two => 1.0,
        Dimension::Three => eigen.medium.n().sqrt(),
    };
    let (alpha, beta) = match normalization {
        Normalization::BetaOne => ((at_k / at_kn).scale(weight), LogScaled::ONE),
        Normalization::AlphaOne => (LogScaled::ONE, (at_kn / at_k).scale(1.0 / weight)),
    };
    Ok(EigenmodePair { eigen: *eigen, alpha, beta, normalization })
}

/// Log-scaled radial part of `w` or `v` at `r ∈ [0, 1]`.
pub fn eval_radial_log(pair: &EigenmodePair, which: Which, r: f64) -> Result<LogScaled> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain("eval_radial", format!("radius must lie in [0, 1], got {r}")));
    }
    if r == 0.0 {
        return Ok(LogScaled::ZERO);
    }
    let x = pair.wavenumber(which) * r;
    Ok(pair.coefficient(which) * radial_basis_log(pair.dim(), pair.order(), x))
}

pub fn eval_radial(pair: &EigenmodePair, which: Which, r: f64) -> Result<f64> {
    Ok(eval_radial_log(pair, which, r)?.to_plain())
}

/// `J_ν(x)` in 2D, `j_m(x) = √(π/(2x)) J_ν(x)` in 3D.
pub(crate) fn radial_basis_log(dim: Dimension, order: Order, x: f64) -> LogScaled {
    let j = bessel_pair_log(order, x).1;
    match dim {
        Dimension::Two => j,
        Dimension::Three => j.scale((PI / (2.0 * x)).sqrt()),
    }
}

/// `radial(r) · e^{imθ}`; two dimensions only.
pub fn eval_field_2d(pair: &EigenmodePair, which: Which, r: f64, theta: f64) -> Result<Complex64> {
    if pair.dim() != Dimension::Two {
        return Err(Error::domain("eval_field_2d", "pair is three-dimensional"));
    }
    let radial = eval_radial(pair, which, r)?;
    let m = f64::from(pair.eigen.mode.m);
    Ok(Complex64::from_polar(1.0, m * theta) * radial)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResidual {
    pub value_gap: f64,
    pub derivative_gap: f64,
}

/// Relative mismatch of Dirichlet and Neumann data at `r = 1`.
pub fn boundary_residual(pair: &EigenmodePair) -> Result<BoundaryResidual> {
    let w = eval_radial_log(pair, Which::W, 1.0)?;
    let v = eval_radial_log(pair, Which::V, 1.0)?;
    let dw = radial_slope_log(pair, Which::W)?;
    let dv = radial_slope_log(pair, Which::V)?;
    Ok(BoundaryResidual { value_gap: relative_gap(w, v), derivative_gap: relative_gap(dw, dv) })
}

/// `d/dr` of the radial part at `r = 1`.
fn radial_slope_log(pair: &EigenmodePair, which: Which) -> Result<LogScaled> {
    let c = pair.wavenumber(which);
    let order = pair.order();
    let slope = besselj_prime_log(order, c)?;
    let basis_slope = match pair.dim() {
        Dimension::Two => slope,
        // j_m'(x) = √(π/(2x)) (J'_ν(x) - J_ν(x)/(2x))
        Dimension::Three => {
            let value = bessel_pair_log(order, c).1;
            (slope - value.scale(0.5 / c)).scale((PI / (2.0 * c)).sqrt())
        }
    };
    Ok(pair.coefficient(which) * basis_slope.scale(c))
}

fn relative_gap(a: LogScaled, b: LogScaled) -> f64 {
    let scale = if a.log_magnitude() >= b.log_magnitude() { a.abs() } else { b.abs() };
    if scale.is_zero() {
        return 0.0;
    }
    ((a - b) / scale).abs().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{find_eigenvalue, Medium, ModeIndex, SolverOptions};
    use crate::specfun::{besselj_log, sphbessel_log};

    fn eigen(n: f64, dim: Dimension, m: u32) -> TransmissionEigenvalue {
        let medium = Medium::new(n, dim).unwrap();
        find_eigenvalue(&medium, ModeIndex { m, s0: 1 }, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn default_normalizations() {
        let p2 = make_pair(&eigen(2.0, Dimension::Two, 30), Normalization::default_for(Dimension::Two)).unwrap();
        assert_eq!(p2.beta, LogScaled::ONE);
        let e3 = eigen(2.0, Dimension::Three, 30);
        let p3 = make_pair(&e3, Normalization::default_for(Dimension::Three)).unwrap();
        assert_eq!(p3.alpha, LogScaled::ONE);
        let order = Order::half_integer(30);
        let expected =
            (besselj_log(order, 2.0 * e3.k).unwrap() / besselj_log(order, e3.k).unwrap()).scale(0.5f64.sqrt());
        assert!((p3.beta.ratio_to(expected) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_values_match() {
        for dim in [Dimension::Two, Dimension::Three] {
            for norm in [Normalization::BetaOne, Normalization::AlphaOne] {
                let pair = make_pair(&eigen(2.0, dim, 40), norm).unwrap();
                let gaps = boundary_residual(&pair).unwrap();
                assert!(gaps.value_gap <= 1e-12, "{dim:?} {norm:?} {gaps:?}");
                assert!(gaps.derivative_gap <= 1e-8, "{dim:?} {norm:?} {gaps:?}");
            }
        }
    }

    #[test]
    fn non_eigenvalue_has_large_derivative_gap() {
        let mut e = eigen(2.0, Dimension::Two, 30);
        e.k = e.bracket.midpoint();
        let pair = make_pair(&e, Normalization::BetaOne).unwrap();
        assert!(boundary_residual(&pair).unwrap().derivative_gap > 1e-3);
    }

    #[test]
    fn radial_values() {
        let pair = make_pair(&eigen(2.0, Dimension::Two, 30), Normalization::BetaOne).unwrap();
        assert_eq!(eval_radial(&pair, Which::V, 0.0).unwrap(), 0.0);
        assert!(eval_radial(&pair, Which::V, 1.5).is_err());
        let tau = 0.7;
        let ratio =
            eval_radial_log(&pair, Which::V, tau).unwrap().ratio_to(eval_radial_log(&pair, Which::V, 1.0).unwrap());
        let order = Order::integer(30);
        let k = pair.eigen.k;
        let oracle = besselj_log(order, k * tau).unwrap().ratio_to(besselj_log(order, k).unwrap());
        assert!((ratio / oracle - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spherical_radial_part() {
        let pair = make_pair(&eigen(2.0, Dimension::Three, 25), Normalization::AlphaOne).unwrap();
        for r in [0.2, 0.5, 0.9, 1.0] {
            let x = pair.eigen.k * r;
            let got = eval_radial_log(&pair, Which::V, r).unwrap() / pair.beta;
            let want = sphbessel_log(25, x).unwrap();
            let half = besselj_log(Order::half_integer(25), x).unwrap().scale((PI / (2.0 * x)).sqrt());
            assert!((got.ratio_to(want) - 1.0).abs() < 1e-12);
            assert!((got.ratio_to(half) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn field_angular_factor() {
        let pair = make_pair(&eigen(2.0, Dimension::Two, 20), Normalization::BetaOne).unwrap();
        let r = 0.95;
        let radial = eval_radial(&pair, Which::W, r).unwrap();
        let at_zero = eval_field_2d(&pair, Which::W, r, 0.0).unwrap();
        assert_eq!(at_zero, Complex64::new(radial, 0.0));
        let turned = eval_field_2d(&pair, Which::W, r, 2.0 * PI).unwrap();
        assert!((turned - at_zero).norm() <= 1e-12 * radial.abs());
        let other = eval_field_2d(&pair, Which::W, r, 1.234).unwrap();
        assert!((other.norm() - radial.abs()).abs() <= 1e-14 * radial.abs());
        let p3 = make_pair(&eigen(2.0, Dimension::Three, 20), Normalization::AlphaOne).unwrap();
        assert!(eval_field_2d(&p3, Which::W, r, 0.0).is_err());
    }

    #[test]
    fn rescaling_keeps_residuals() {
        let e = eigen(2.0, Dimension::Two, 30);
        let pair = make_pair(&e, Normalization::BetaOne).unwrap();
        let mut off = e;
        off.k = e.bracket.midpoint();
        let off_pair = make_pair(&off, Normalization::BetaOne).unwrap();
        let base = boundary_residual(&pair).unwrap();
        let off_base = boundary_residual(&off_pair).unwrap();
        for c in [1e-5, 1.0, 1e5] {
            // at the eigenvalue both gaps are rounding-level
            let scaled = boundary_residual(&pair.rescaled(c).unwrap()).unwrap();
            assert!(scaled.value_gap <= 1e-14 && base.value_gap <= 1e-14);
            assert!(scaled.derivative_gap <= 1e-8 && base.derivative_gap <= 1e-8);
            let off_scaled = boundary_residual(&off_pair.rescaled(c).unwrap()).unwrap();
            assert!((off_scaled.derivative_gap / off_base.derivative_gap - 1.0).abs() <= 1e-12);
        }
        assert!(pair.rescaled(0.0).is_err());
    }

    #[test]
    fn vanishing_boundary_value_is_rejected() {
        let mut e = eigen(2.0, Dimension::Two, 30);
        e.k = crate::zeros::bessel_zero(Order::integer(30), 2).unwrap().value;
        assert!(matches!(make_pair(&e, Normalization::BetaOne), Err(Error::DegenerateBoundary { .. })));
    }
}
