//! Composite 16-point Gauss-Legendre quadrature with a panel-doubling check.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORDER: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    /// Accept once two successive panel counts agree to this relative level.
    pub rel_tol: f64,
    /// After the last refinement, fail if disagreement is still above this.
    pub fail_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-10, fail_tol: 1e-8, max_refinements: 3 }
    }
}

/// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_16`.
fn rule() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut out = [(0.0, 0.0); ORDER];
        let nf = ORDER as f64;
        for (i, slot) in out.iter_mut().enumerate() {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=ORDER {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

fn base_panels(a: f64, b: f64, scale: f64) -> usize {
    let width = b - a;
    let limit = if scale > 0.0 { (width / 4.0).min(PI / (2.0 * scale)) } else { width / 4.0 };
    ((width / limit).ceil() as usize).max(4)
}

fn refine(
    a: f64,
    b: f64,
    scale: f64,
    opts: &QuadOptions,
    mut estimate: impl FnMut(usize) -> Result<f64>,
    disagreement: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let mut panels = base_panels(a, b, scale);
    let mut coarse = estimate(panels)?;
    let mut gap = f64::INFINITY;
    let mut fine = coarse;
    for _ in 0..opts.max_refinements.max(1) {
        panels *= 2;
        fine = estimate(panels)?;
        gap = disagreement(coarse, fine);
        if gap <= opts.rel_tol {
            return Ok(fine);
        }
        coarse = fine;
    }
    if gap <= opts.fail_tol {
        Ok(fine)
    } else {
        Err(Error::Quadrature { a, b, disagreement: gap })
    }
}

fn check_limits(a: f64, b: f64) -> Result<()> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integrate_radial", format!("need finite a <= b, got [{a}, {b}]")));
    }
    Ok(())
}

/// `∫_a^b f` on panels no wider than `min((b-a)/4, π/(2·scale))`.
pub fn integrate_radial(f: impl Fn(f64) -> f64, a: f64, b: f64, scale: f64, opts: &QuadOptions) -> Result<f64> {
    check_limits(a, b)?;
    if a == b {
        return Ok(0.0);
    }
    let estimate = |panels: usize| {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            let mut panel = 0.0;
            for &(x, w) in rule() {
                panel += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * panel;
        }
        Ok(total)
    };
    refine(a, b, scale, opts, estimate, |c, f| if f == 0.0 { c.abs() } else { ((f - c) / f).abs() })
}

/// `ln ∫_a^b exp(g)` for an integrand given by its logarithm `g`; the largest
/// node value of `g` is factored out before summing.
pub fn integrate_radial_log(g: impl Fn(f64) -> f64, a: f64, b: f64, scale: f64, opts: &QuadOptions) -> Result<f64> {
    check_limits(a, b)?;
    if a == b {
        return Ok(f64::NEG_INFINITY);
    }
    let mut logs = Vec::new();
    let estimate = |panels: usize| {
        let h = (b - a) / panels as f64;
        logs.clear();
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for &(x, _) in rule() {
                logs.push(g(mid + 0.5 * h * x));
            }
        }
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if peak == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let mut total = 0.0;
        for chunk in logs.chunks(ORDER) {
            let panel: f64 = chunk.iter().zip(rule()).map(|(l, &(_, w))| w * (l - peak).exp()).sum();
            total += 0.5 * h * panel;
        }
        Ok(peak + total.ln())
    };
    refine(a, b, scale, opts, estimate, |c, f| if c == f { 0.0 } else { (c - f).exp_m1().abs() })
}
