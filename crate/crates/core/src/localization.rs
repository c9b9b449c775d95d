//! Interior versus full L² energy of the eigenmodes.
//!
//! In 2D, `‖ψ‖²_{L²(Ω_τ)} = 2π c² ∫₀^τ r J_ν²(κr) dr` for `ψ = c J_ν(κr) e^{imθ}`.
//! In 3D the angular factor is a unit-normalized spherical harmonic and
//! `∫₀^τ r² j_m²(κr) dr = π/(2κ) ∫₀^τ r J_ν²(κr) dr`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigenmodes::{eval_radial_log, EigenmodePair, Which};
use crate::eigensolver::{Dimension, Medium, ModeIndex};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_radial_log, QuadOptions};
use crate::specfun::{bessel_pair_log, LogScaled, Order};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub tau: f64,
    pub ratio_v: f64,
    pub ratio_w: f64,
    pub log10_ratio_v: f64,
    pub log10_ratio_w: f64,
    pub norm_v_full: LogScaled,
    pub norm_w_full: LogScaled,
    pub mode: ModeIndex,
    pub medium: Medium,
    pub k: f64,
}

/// Natural log of `∫₀^τ r J_ν²(κr) dr`.
pub fn bessel_moment_log(order: Order, kappa: f64, tau: f64, opts: &QuadOptions) -> Result<f64> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::domain("norm_sq", format!("tau must lie in (0, 1], got {tau}")));
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain("norm_sq", format!("wavenumber must be positive, got {kappa}")));
    }
    // r^{2ν+1} growth below the turning point sets the panel width there
    let scale = kappa.max((2.0 * order.value() + 1.0) / tau);
    let integrand = |r: f64| r.ln() + 2.0 * bessel_pair_log(order, kappa * r).1.log_magnitude();
    integrate_radial_log(integrand, 0.0, tau, scale, opts)
}

/// Squared L² norm of `w` or `v` over the ball of radius `tau`.
pub fn norm_sq(pair: &EigenmodePair, which: Which, tau: f64, opts: &QuadOptions) -> Result<LogScaled> {
    let kappa = pair.wavenumber(which);
    let moment = bessel_moment_log(pair.order(), kappa, tau, opts)?;
    let weight = match pair.dim() {
        Dimension::Two => 2.0 * PI,
        Dimension::Three => PI / (2.0 * kappa),
    };
    let coef = pair.coefficient(which);
    Ok(LogScaled::new(1, moment + weight.ln() + 2.0 * coef.log_magnitude()))
}

/// Ratios are formed from coefficient-free moments, so they depend only on
/// `(ν, κ, τ)`.
pub fn localization_report(pair: &EigenmodePair, tau: f64, opts: &QuadOptions) -> Result<LocalizationReport> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain("localization_report", format!("tau must lie in (0, 1), got {tau}")));
    }
    let log_ratio = |which: Which| -> Result<f64> {
        let kappa = pair.wavenumber(which);
        let inner = bessel_moment_log(pair.order(), kappa, tau, opts)?;
        let full = bessel_moment_log(pair.order(), kappa, 1.0, opts)?;
        Ok((0.5 * (inner - full)).min(0.0))
    };
    let lv = log_ratio(Which::V)?;
    let lw = log_ratio(Which::W)?;
    Ok(LocalizationReport {
        tau,
        ratio_v: lv.exp(),
        ratio_w: lw.exp(),
        log10_ratio_v: lv / std::f64::consts::LN_10,
        log10_ratio_w: lw / std::f64::consts::LN_10,
        norm_v_full: norm_sq(pair, Which::V, 1.0, opts)?,
        norm_w_full: norm_sq(pair, Which::W, 1.0, opts)?,
        mode: pair.eigen.mode,
        medium: pair.eigen.medium,
        k: pair.eigen.k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    pub abs_w: f64,
    pub abs_v: f64,
}

/// `samples` evenly spaced radii on `[0, 1]`, each function scaled to peak 1.
pub fn radial_profile(pair: &EigenmodePair, samples: usize) -> Result<Vec<ProfileRow>> {
    if samples < 2 {
        return Err(Error::domain("radial_profile", format!("need at least 2 samples, got {samples}")));
    }
    let last = (samples - 1) as f64;
    let radii: Vec<f64> = (0..samples).map(|i| if i == samples - 1 { 1.0 } else { i as f64 / last }).collect();
    let mut logs_w = Vec::with_capacity(samples);
    let mut logs_v = Vec::with_capacity(samples);
    for &r in &radii {
        logs_w.push(eval_radial_log(pair, Which::W, r)?.log_magnitude());
        logs_v.push(eval_radial_log(pair, Which::V, r)?.log_magnitude());
    }
    let peak = |logs: &[f64]| logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (pw, pv) = (peak(&logs_w), peak(&logs_v));
    Ok(radii
        .iter()
        .zip(logs_w.iter().zip(&logs_v))
        .map(|(&r, (&lw, &lv))| ProfileRow { r, abs_w: (lw - pw).exp(), abs_v: (lv - pv).exp() })
        .collect())
}
