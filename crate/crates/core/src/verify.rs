//! Numerical checks of the bounds behind the localization argument.
//!
//! Every check returns a [`BoundCheck`] with both sides of its inequality, a
//! margin and an `in_regime` flag. The flag is `m > m0`, with `m0` the
//! empirical threshold of [`zeros::empirical_m0`]; checks outside the regime
//! are reported but carry no expectation.
//!
//! Margins are `rhs - lhs` for checks on plain quantities and
//! `log10(rhs) - log10(lhs)` (decades) for checks on quantities that are
//! formed in the log domain (`ratio_bound_gg1`, `final_decay`,
//! `triangle_lower`, `tail_upper`).

use std::collections::HashMap;
use std::f64::consts::LN_10;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::eigenmodes::{make_pair, EigenmodePair, Normalization};
use crate::eigensolver::{char_fn_log, eigen_bracket, find_eigenvalue, Dimension, Medium, ModeIndex, SolverOptions};
use crate::error::{Error, Result};
use crate::localization::{bessel_moment_log, localization_report};
use crate::quadrature::QuadOptions;
use crate::specfun::{bessel_pair_log, besselj_log, besselj_prime_log, LogScaled, Order};
use crate::zeros::{self, bessel_deriv_zero, bessel_zero};

/// Default upper end of the `m0` scan.
pub const M0_SCAN_LIMIT: u32 = 200;

const STRICTNESS: f64 = 1e-9;
const CONVEXITY_STEP: f64 = 1e-3;
const CONVEXITY_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckInputs {
    pub n: Option<f64>,
    pub dim: Option<u8>,
    pub m: Option<u32>,
    pub s0: Option<u32>,
    pub s: Option<u32>,
    pub tau: Option<f64>,
    pub k: Option<f64>,
    pub x: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub inputs: CheckInputs,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
    pub in_regime: bool,
}

impl BoundCheck {
    fn plain(name: &str, inputs: CheckInputs, lhs: f64, rhs: f64, passed: bool, in_regime: bool) -> Self {
        BoundCheck { name: name.to_string(), inputs, lhs, rhs, margin: rhs - lhs, passed, in_regime }
    }

    /// `lhs ≤ rhs` decided on log magnitudes of two positive quantities.
    fn logged(name: &str, inputs: CheckInputs, lhs: LogScaled, rhs: LogScaled, in_regime: bool) -> Self {
        let margin = rhs.log10_magnitude() - lhs.log10_magnitude();
        BoundCheck {
            name: name.to_string(),
            inputs,
            lhs: lhs.to_f64(),
            rhs: rhs.to_f64(),
            margin,
            passed: margin >= 0.0,
            in_regime,
        }
    }
}

/// Empirical `m0(n, s0)`, cached per process.
pub fn regime_threshold(n: f64, s0: u32, dim: Dimension, limit: u32) -> Result<Option<u32>> {
    type Key = (u64, u32, Dimension, u32);
    static CACHE: OnceLock<Mutex<HashMap<Key, Option<u32>>>> = OnceLock::new();
    if !(n > 1.0) {
        return Err(Error::domain("regime_threshold", format!("contrast must exceed 1, got {n}")));
    }
    let key = (n.to_bits(), s0, dim, limit);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("m0 cache poisoned").get(&key) {
        return Ok(*hit);
    }
    let m0 = zeros::empirical_m0(n, s0, dim == Dimension::Three, limit)?;
    cache.lock().expect("m0 cache poisoned").insert(key, m0);
    Ok(m0)
}

pub fn in_regime(n: f64, s0: u32, m: u32, dim: Dimension) -> Result<bool> {
    let limit = M0_SCAN_LIMIT.max(m);
    Ok(matches!(regime_threshold(n, s0, dim, limit)?, Some(m0) if m > m0))
}

fn require_contrast_above_one(op: &'static str, n: f64) -> Result<()> {
    if n > 1.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("contrast must exceed 1, got {n}")))
    }
}

/// A refined eigenvalue with its default-normalized pair and regime flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenCase {
    pub pair: EigenmodePair,
    pub in_regime: bool,
}

impl EigenCase {
    pub fn solve(medium: &Medium, mode: ModeIndex, opts: &SolverOptions) -> Result<Self> {
        require_contrast_above_one("EigenCase::solve", medium.n())?;
        let eigen = find_eigenvalue(medium, mode, opts)?;
        Self::from_pair(make_pair(&eigen, Normalization::default_for(medium.dim()))?)
    }

    pub fn from_pair(pair: EigenmodePair) -> Result<Self> {
        let medium = pair.eigen.medium;
        require_contrast_above_one("EigenCase::from_pair", medium.n())?;
        let in_regime = in_regime(medium.n(), pair.eigen.mode.s0, pair.eigen.mode.m, medium.dim())?;
        Ok(EigenCase { pair, in_regime })
    }

    pub fn n(&self) -> f64 {
        self.pair.eigen.medium.n()
    }

    pub fn k(&self) -> f64 {
        self.pair.eigen.k
    }

    pub fn m(&self) -> u32 {
        self.pair.eigen.mode.m
    }

    pub fn order(&self) -> Order {
        self.pair.order()
    }

    fn inputs(&self, tau: Option<f64>) -> CheckInputs {
        let e = &self.pair.eigen;
        CheckInputs {
            n: Some(e.medium.n()),
            dim: Some(e.medium.dim().as_u8()),
            m: Some(e.mode.m),
            s0: Some(e.mode.s0),
            tau,
            k: Some(e.k),
            ..CheckInputs::default()
        }
    }
}

fn check_tau(op: &'static str, tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("tau must lie in (0, 1), got {tau}")))
    }
}

/// `j_{m,s0}/n ≤ m`.
pub fn check_lemma1(n: f64, s0: u32, m: u32) -> Result<BoundCheck> {
    require_contrast_above_one("check_lemma1", n)?;
    let lhs = bessel_zero(Order::integer(m), s0)?.value / n;
    let rhs = f64::from(m);
    let inputs = CheckInputs { n: Some(n), dim: Some(2), m: Some(m), s0: Some(s0), ..CheckInputs::default() };
    Ok(BoundCheck::plain("lemma1", inputs, lhs, rhs, lhs <= rhs, in_regime(n, s0, m, Dimension::Two)?))
}

/// `f_ν(j_{ν,s0}/n) · f_ν(j_{ν,s0+1}/n) < 0`. `lhs` may underflow to a
/// signed zero; `passed` uses the exact sign. `margin` is `-sign(lhs)`.
pub fn check_sign_change(n: f64, s0: u32, m: u32, dim: Dimension) -> Result<BoundCheck> {
    require_contrast_above_one("check_sign_change", n)?;
    let medium = Medium::new(n, dim)?;
    let mode = ModeIndex::new(m, s0)?;
    let bracket = eigen_bracket(&medium, mode)?;
    let product = char_fn_log(bracket.lo, &medium, m)? * char_fn_log(bracket.hi, &medium, m)?;
    let inputs = CheckInputs { n: Some(n), dim: Some(dim.as_u8()), m: Some(m), s0: Some(s0), ..CheckInputs::default() };
    Ok(BoundCheck {
        name: "sign_change".to_string(),
        inputs,
        lhs: product.to_f64(),
        rhs: 0.0,
        margin: -f64::from(product.sign()),
        passed: product.sign() < 0,
        in_regime: in_regime(n, s0, m, dim)?,
    })
}

/// Right-hand side of the bound on `J'_ν(x)/J_ν(x)`, valid for
/// `0 < x < √((ν+1)(ν+3))`.
pub fn krasikov_rhs(nu: f64, x: f64) -> f64 {
    let a = (2.0 * nu + 1.0) * (2.0 * nu + 3.0);
    let x2 = 4.0 * x * x;
    let numer = x2 - 12.0 * nu - 6.0 + ((a - x2).powi(3) + a * a).sqrt();
    let denom = 2.0 * x * ((2.0 * nu + 1.0) * (2.0 * nu + 5.0) - x2);
    numer / denom
}

/// `J'_m(x)/J_m(x)` against its explicit upper bound. `None` when `J_m(x)`
/// vanishes or the bound's denominator does.
///
/// Half-integer orders substitute `ν` for `m` in the bound and are always
/// reported with `in_regime = false`.
pub fn check_krasikov(order: Order, x: f64) -> Result<Option<BoundCheck>> {
    let nu = order.value();
    let edge = ((nu + 1.0) * (nu + 3.0)).sqrt();
    if !(x > 0.0 && x < edge) {
        return Err(Error::domain("check_krasikov", format!("need 0 < x < {edge}, got {x}")));
    }
    let value = besselj_log(order, x)?;
    let slope = besselj_prime_log(order, x)?;
    let denom = 2.0 * x * ((2.0 * nu + 1.0) * (2.0 * nu + 5.0) - 4.0 * x * x);
    if value.is_zero() || value.log_magnitude() < slope.log_magnitude() - 13.0 * LN_10 || denom.abs() < 1e-12 {
        return Ok(None);
    }
    let lhs = (slope / value).to_f64();
    let rhs = krasikov_rhs(nu, x);
    let dim = if order.is_integer() { 2 } else { 3 };
    let inputs = CheckInputs { m: Some(order.twice() / 2), dim: Some(dim), x: Some(x), ..CheckInputs::default() };
    Ok(Some(BoundCheck::plain("krasikov", inputs, lhs, rhs, lhs <= rhs, order.is_integer())))
}

/// The Krasikov check at `x = k`, tagged with the case's inputs.
pub fn check_krasikov_at(case: &EigenCase) -> Result<Option<BoundCheck>> {
    Ok(check_krasikov(case.order(), case.k())?.map(|mut c| {
        c.inputs = CheckInputs { x: Some(case.k()), ..case.inputs(None) };
        c.in_regime = c.in_regime && case.in_regime;
        c
    }))
}

/// `k J'_ν(k)/J_ν(k)`, reported for inspecting its growth in `m`.
pub fn log_derivative_scale(case: &EigenCase) -> Result<f64> {
    let value = besselj_log(case.order(), case.k())?;
    let slope = besselj_prime_log(case.order(), case.k())?;
    Ok((slope / value).to_f64() * case.k())
}

/// `ln |J_ν(kτ)/J_ν(k)|`.
fn log_j_ratio(case: &EigenCase, tau: f64) -> f64 {
    let order = case.order();
    let k = case.k();
    bessel_pair_log(order, k * tau).1.log_magnitude() - bessel_pair_log(order, k).1.log_magnitude()
}

fn ratio_v_squared(case: &EigenCase, tau: f64, quad: &QuadOptions) -> Result<LogScaled> {
    let report = localization_report(&case.pair, tau, quad)?;
    Ok(LogScaled::new(1, 2.0 * report.log10_ratio_v * LN_10))
}

/// `ratio_v² ≤ 36 n m⁴ τ² (J_ν(kτ)/J_ν(k))²`.
pub fn check_ratio_bound_gg1(case: &EigenCase, tau: f64, quad: &QuadOptions) -> Result<BoundCheck> {
    check_tau("check_ratio_bound_gg1", tau)?;
    let lhs = ratio_v_squared(case, tau, quad)?;
    let rhs = LogScaled::new(1, gg1_rhs_log(case, tau));
    Ok(BoundCheck::logged("ratio_bound_gg1", case.inputs(Some(tau)), lhs, rhs, case.in_regime))
}

fn gg1_rhs_log(case: &EigenCase, tau: f64) -> f64 {
    let m = f64::from(case.m());
    (36.0 * case.n()).ln() + 4.0 * m.ln() + 2.0 * tau.ln() + 2.0 * log_j_ratio(case, tau)
}

/// Right-hand side of the ratio bound, as a plain number.
pub fn gg1_rhs(case: &EigenCase, tau: f64) -> f64 {
    gg1_rhs_log(case, tau).exp()
}

/// `φ(x) = x e^{√(1-x²)} / (1 + √(1-x²))` for `0 < x < 1`.
pub fn carlini_phi(x: f64) -> f64 {
    let root = (1.0 - x * x).sqrt();
    x * root.exp() / (1.0 + root)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarliniDecomposition {
    pub i1: f64,
    pub i2: f64,
    pub log_i2: f64,
    pub i3_empirical: f64,
    pub delta: f64,
    pub m: u32,
    pub tau: f64,
    pub n: f64,
    pub k: f64,
}

/// Splits `|J_m(kτ)/J_m(k)|` into the Carlini amplitude factor `I1`, the
/// exponential factor `I2 = (φ(kτ/m)/φ(k/m))^m` and the remainder `I3`.
/// Integer orders only.
pub fn carlini_decomposition(case: &EigenCase, tau: f64) -> Result<CarliniDecomposition> {
    check_tau("carlini_decomposition", tau)?;
    if !case.order().is_integer() {
        return Err(Error::domain("carlini_decomposition", "integer orders only"));
    }
    let m = f64::from(case.m());
    let k = case.k();
    let z = k / m;
    if !(z < 1.0) {
        return Err(Error::domain("carlini_decomposition", format!("need k < m, got k = {k}, m = {m}")));
    }
    let zt = z * tau;
    let i1 = ((1.0 - z * z) / (1.0 - zt * zt)).powf(0.25);
    let phi_ratio = carlini_phi(zt) / carlini_phi(z);
    let log_i2 = m * phi_ratio.ln();
    let log_i3 = log_j_ratio(case, tau) - i1.ln() - log_i2;
    Ok(CarliniDecomposition {
        i1,
        i2: log_i2.exp(),
        log_i2,
        i3_empirical: log_i3.exp(),
        delta: 1.0 - phi_ratio,
        m: case.m(),
        tau,
        n: case.n(),
        k,
    })
}

/// `δ∞ = 1 - φ(τ/n)/φ(1/n)`, the value `δ` approaches when `k/m → 1/n`.
pub fn carlini_delta_limit(n: f64, tau: f64) -> f64 {
    1.0 - carlini_phi(tau / n) / carlini_phi(1.0 / n)
}

/// `I3 < 2` and `δ > 0` as two checks.
pub fn check_carlini(case: &EigenCase, tau: f64) -> Result<[BoundCheck; 2]> {
    let d = carlini_decomposition(case, tau)?;
    let inputs = case.inputs(Some(tau));
    Ok([
        BoundCheck::plain("carlini_i3", inputs, d.i3_empirical, 2.0, d.i3_empirical < 2.0, case.in_regime),
        BoundCheck::plain("carlini_delta", inputs, 0.0, d.delta, d.delta > 0.0, case.in_regime),
    ])
}

/// `I1 < 1/(n-1)`.
pub fn check_carlini_i1(case: &EigenCase, tau: f64) -> Result<BoundCheck> {
    let d = carlini_decomposition(case, tau)?;
    let rhs = 1.0 / (case.n() - 1.0);
    Ok(BoundCheck::plain("carlini_i1", case.inputs(Some(tau)), d.i1, rhs, d.i1 < rhs, case.in_regime))
}

/// `ratio_v² ≤ 144 n/(n-1)² m⁴ τ² (1-δ)^{2m}`. Integer orders only.
pub fn check_final_decay(case: &EigenCase, tau: f64, quad: &QuadOptions) -> Result<BoundCheck> {
    check_tau("check_final_decay", tau)?;
    let lhs = ratio_v_squared(case, tau, quad)?;
    let rhs = LogScaled::new(1, final_decay_rhs_log(case, tau)?);
    Ok(BoundCheck::logged("final_decay", case.inputs(Some(tau)), lhs, rhs, case.in_regime))
}

fn final_decay_rhs_log(case: &EigenCase, tau: f64) -> Result<f64> {
    let d = carlini_decomposition(case, tau)?;
    let n = case.n();
    let m = f64::from(case.m());
    Ok((144.0 * n / ((n - 1.0) * (n - 1.0))).ln() + 4.0 * m.ln() + 2.0 * tau.ln() + 2.0 * m * (1.0 - d.delta).ln())
}

pub fn final_decay_rhs(case: &EigenCase, tau: f64) -> Result<f64> {
    Ok(final_decay_rhs_log(case, tau)?.exp())
}

/// `n k τ < j'_{ν,1}`: `w` stays below its first turning point on `[0, τ]`.
pub fn check_w_bracket(case: &EigenCase, tau: f64) -> Result<BoundCheck> {
    check_tau("check_w_bracket", tau)?;
    let lhs = case.n() * case.k() * tau;
    let rhs = bessel_deriv_zero(case.order(), 1)?.value;
    Ok(BoundCheck::plain("w_bracket", case.inputs(Some(tau)), lhs, rhs, lhs < rhs, case.in_regime))
}

/// `m (1 + 2((s0+1)/m)^{2/3}) < n k`.
pub fn check_w_lower_claim(case: &EigenCase) -> Result<BoundCheck> {
    let m = f64::from(case.m());
    let s0 = f64::from(case.pair.eigen.mode.s0);
    let lhs = m * (1.0 + 2.0 * ((s0 + 1.0) / m).powf(2.0 / 3.0));
    let rhs = case.n() * case.k();
    Ok(BoundCheck::plain("w_lower_claim", case.inputs(None), lhs, rhs, lhs < rhs, case.in_regime))
}

/// `1/n < k/m < (1+n)/(2n)`; `lhs = k/m`, `rhs` the upper end, `margin` the
/// distance to the nearer end.
pub fn check_km_window(case: &EigenCase) -> Result<BoundCheck> {
    let n = case.n();
    let ratio = case.k() / f64::from(case.m());
    let (lo, hi) = (1.0 / n, (1.0 + n) / (2.0 * n));
    let mut check =
        BoundCheck::plain("km_window", case.inputs(None), ratio, hi, ratio > lo && ratio < hi, case.in_regime);
    check.margin = (ratio - lo).min(hi - ratio);
    Ok(check)
}

/// Smallest sampled second difference of `g(r) = r J_ν²(kr)` on a `1e-3`
/// grid of `[0, 1]`, relative to `max g`, against `-1e-8`.
pub fn check_convexity(case: &EigenCase) -> Result<BoundCheck> {
    let order = case.order();
    let k = case.k();
    let steps = (1.0 / CONVEXITY_STEP).round() as usize;
    let logs: Vec<f64> = (0..=steps)
        .map(|i| {
            let r = i as f64 / steps as f64;
            if i == 0 {
                f64::NEG_INFINITY
            } else {
                r.ln() + 2.0 * bessel_pair_log(order, k * r).1.log_magnitude()
            }
        })
        .collect();
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
    let lhs = g.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).fold(f64::INFINITY, f64::min);
    let rhs = -CONVEXITY_SLACK;
    Ok(BoundCheck {
        margin: lhs - rhs,
        ..BoundCheck::plain("convexity", case.inputs(None), lhs, rhs, lhs >= rhs, case.in_regime)
    })
}

/// `(1/2) J_ν³(k)/(J_ν(k) + 2k J'_ν(k)) ≤ ∫₀¹ r J_ν²(kr) dr`.
pub fn check_triangle_lower(case: &EigenCase, quad: &QuadOptions) -> Result<BoundCheck> {
    let order = case.order();
    let k = case.k();
    let value = besselj_log(order, k)?;
    let slope = besselj_prime_log(order, k)?;
    let area = (value.powi(3) / (value + slope.scale(2.0 * k))).scale(0.5);
    let integral = LogScaled::new(1, bessel_moment_log(order, k, 1.0, quad)?);
    if area.sign() <= 0 {
        let inputs = case.inputs(None);
        return Ok(BoundCheck::plain("triangle_lower", inputs, area.to_f64(), integral.to_f64(), true, case.in_regime));
    }
    Ok(BoundCheck::logged("triangle_lower", case.inputs(None), area, integral, case.in_regime))
}

/// `∫₀^τ r J_ν²(kr) dr ≤ τ² J_ν²(kτ)`.
pub fn check_tail_upper(case: &EigenCase, tau: f64, quad: &QuadOptions) -> Result<BoundCheck> {
    check_tau("check_tail_upper", tau)?;
    let order = case.order();
    let k = case.k();
    let integral = LogScaled::new(1, bessel_moment_log(order, k, tau, quad)?);
    let bound = besselj_log(order, k * tau)?.powi(2).scale(tau * tau);
    Ok(BoundCheck::logged("tail_upper", case.inputs(Some(tau)), integral, bound, case.in_regime))
}

/// Both interlacing chains for `1 ≤ m ≤ m_max`, `s ≤ s_max`:
/// `m ≤ j'_{m,1} < j_{m,1} < j'_{m,2} < … < j_{m,s_max}` and
/// `J_{m-1}(j_{m,s}) J_{m-1}(j_{m,s+1}) < 0`. Strict links need a gap of at
/// least `1e-9`.
pub fn check_interlacing(m_max: u32, s_max: u32) -> Result<Vec<BoundCheck>> {
    if m_max < 1 || s_max < 1 {
        return Err(Error::domain("check_interlacing", "need m_max >= 1 and s_max >= 1"));
    }
    let mut checks = Vec::new();
    for m in 1..=m_max {
        let order = Order::integer(m);
        let mut chain = vec![(f64::from(m), "order")];
        for s in 1..=s_max {
            chain.push((bessel_deriv_zero(order, s)?.value, "deriv_zero"));
            chain.push((bessel_zero(order, s)?.value, "zero"));
        }
        for (i, pair) in chain.windows(2).enumerate() {
            let (lhs, rhs) = (pair[0].0, pair[1].0);
            let passed = if i == 0 { lhs <= rhs } else { rhs - lhs >= STRICTNESS };
            let inputs = CheckInputs { m: Some(m), s: Some(i as u32 / 2 + 1), ..CheckInputs::default() };
            let name = format!("interlacing_{}_{}", pair[0].1, pair[1].1);
            checks.push(BoundCheck::plain(&name, inputs, lhs, rhs, passed, true));
        }
    }
    for m in 2..=m_max {
        let lower = Order::integer(m - 1);
        let zeros: Vec<f64> =
            (1..=s_max).map(|s| Ok(bessel_zero(Order::integer(m), s)?.value)).collect::<Result<_>>()?;
        for (s, pair) in zeros.windows(2).enumerate() {
            let a = besselj_log(lower, pair[0])?;
            let b = besselj_log(lower, pair[1])?;
            let product = (a * b).to_f64();
            let gap = a.abs().to_f64().min(b.abs().to_f64());
            let inputs = CheckInputs { m: Some(m), s: Some(s as u32 + 1), ..CheckInputs::default() };
            let passed = product < 0.0 && gap >= STRICTNESS;
            checks.push(BoundCheck {
                margin: gap,
                ..BoundCheck::plain("interlacing_orders", inputs, product, 0.0, passed, true)
            });
        }
    }
    Ok(checks)
}

/// The per-eigenvalue checks used by the CLI: sign change, Krasikov (when
/// defined), convexity, triangle bound, `w` bracket at `τ = 0.5` and, per
/// `τ`, the ratio bound, tail bound, Carlini `I3`/`δ` and final decay. The
/// Carlini-based checks need an integer order and `k < m`; `lemma1` is 2D
/// only.
pub fn standard_checks(case: &EigenCase, taus: &[f64], quad: &QuadOptions) -> Result<Vec<BoundCheck>> {
    let e = &case.pair.eigen;
    let (n, m, s0, dim) = (e.medium.n(), e.mode.m, e.mode.s0, e.medium.dim());
    let mut out = Vec::new();
    if dim == Dimension::Two {
        out.push(check_lemma1(n, s0, m)?);
    }
    out.push(check_sign_change(n, s0, m, dim)?);
    out.extend(check_krasikov_at(case)?);
    out.push(check_convexity(case)?);
    out.push(check_triangle_lower(case, quad)?);
    out.push(check_w_bracket(case, 0.5)?);
    for &tau in taus {
        out.push(check_ratio_bound_gg1(case, tau, quad)?);
        out.push(check_tail_upper(case, tau, quad)?);
        if dim == Dimension::Two && case.k() < f64::from(m) {
            out.extend(check_carlini(case, tau)?);
            out.push(check_final_decay(case, tau, quad)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(n: f64, dim: Dimension, m: u32) -> EigenCase {
        EigenCase::solve(&Medium::new(n, dim).unwrap(), ModeIndex { m, s0: 1 }, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn lemma1_examples() {
        let c = check_lemma1(2.0, 1, 30).unwrap();
        assert!(c.passed && c.in_regime);
        assert!(check_lemma1(0.5, 1, 30).is_err());
        let mut passed_once = false;
        for m in 1..=200 {
            let c = check_lemma1(1.5, 2, m).unwrap();
            assert!(!passed_once || c.passed, "m = {m}");
            passed_once |= c.passed;
        }
    }

    #[test]
    fn sign_change_both_dimensions() {
        for dim in [Dimension::Two, Dimension::Three] {
            let c = check_sign_change(2.0, 1, 30, dim).unwrap();
            assert!(c.passed && c.in_regime, "{dim:?}");
            assert_eq!(c.margin, 1.0);
        }
    }

    #[test]
    fn krasikov_examples() {
        assert!(check_krasikov(Order::integer(10), 5.0).unwrap().unwrap().passed);
        let c = case(2.0, Dimension::Two, 30);
        assert!(check_krasikov_at(&c).unwrap().unwrap().passed);
        let edge = (31.0f64 * 33.0).sqrt();
        assert!(check_krasikov(Order::integer(30), edge).is_err());
        assert!(log_derivative_scale(&c).unwrap() > 0.0);
    }

    #[test]
    fn carlini_pieces_multiply_back() {
        let c = case(2.0, Dimension::Two, 40);
        for tau in [0.3, 0.5, 0.8] {
            let d = carlini_decomposition(&c, tau).unwrap();
            let direct =
                (besselj_log(c.order(), c.k() * tau).unwrap() / besselj_log(c.order(), c.k()).unwrap()).to_f64();
            assert!((d.i1 * d.i2 * d.i3_empirical / direct.abs() - 1.0).abs() < 1e-10);
            assert!(d.i1 < 1.0 / (2.0 - 1.0));
            assert!(d.i3_empirical < 2.0);
            assert!(d.delta > 0.0 && d.delta < 1.0);
        }
        assert!(carlini_decomposition(&case(2.0, Dimension::Three, 40), 0.5).is_err());
    }

    #[test]
    fn ratio_and_decay_bounds() {
        let c = case(2.0, Dimension::Two, 40);
        let quad = QuadOptions::default();
        assert!(check_ratio_bound_gg1(&c, 0.5, &quad).unwrap().passed);
        assert!(check_final_decay(&case(2.0, Dimension::Two, 60), 0.5, &quad).unwrap().passed);
        assert!(check_tail_upper(&c, 0.5, &quad).unwrap().passed);
        assert!(check_triangle_lower(&c, &quad).unwrap().passed);
        assert!(check_convexity(&c).unwrap().passed);
    }

    #[test]
    fn w_bracket_at_sixty() {
        let c = check_w_bracket(&case(2.0, Dimension::Two, 60), 0.5).unwrap();
        assert!(c.passed && c.in_regime);
    }

    #[test]
    fn interlacing_small_grid() {
        let checks = check_interlacing(10, 3).unwrap();
        assert_eq!(checks.len(), 10 * 6 + 9 * 2);
        assert!(checks.iter().all(|c| c.passed));
    }

    #[test]
    fn regime_threshold_is_cached_and_reported() {
        assert_eq!(regime_threshold(2.0, 1, Dimension::Two, 60).unwrap(), Some(8));
        assert_eq!(regime_threshold(2.0, 1, Dimension::Two, 60).unwrap(), Some(8));
        assert!(regime_threshold(0.5, 1, Dimension::Two, 60).is_err());
    }
}
