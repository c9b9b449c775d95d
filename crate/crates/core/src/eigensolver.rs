//! Transmission eigenvalues of the unit disk (ball) with constant contrast.
//!
//! For angular order `m` the pair `w = α J_ν(knr)`, `v = β J_ν(kr)` matches
//! Cauchy data on `r = 1` exactly when `k` is a root of
//!
//! `f_ν(k) = J_{ν-1}(k) J_ν(kn) - n J_ν(k) J_{ν-1}(kn)`,
//!
//! with `ν = m` in two dimensions and `ν = m + 1/2` in three. For `n > 1`
//! and large `m` there is a root between `j_{ν,s0}/n` and `j_{ν,s0+1}/n`;
//! contrasts below one are handled through `k̃ = kn`, `ñ = 1/n`.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_pair_log, LogScaled, Order};
use crate::zeros::{bessel_zero, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn from_u8(dim: u8) -> Result<Self> {
        match dim {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(Error::domain("Dimension::from_u8", format!("dimension must be 2 or 3, got {other}"))),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Bessel order carried by angular index `m`.
    pub fn order(self, m: u32) -> Order {
        match self {
            Dimension::Two => Order::integer(m),
            Dimension::Three => Order::half_integer(m),
        }
    }
}

/// Constant refractive contrast `n ≠ 1` inside the unit disk or ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    n: f64,
    dim: Dimension,
}

impl Medium {
    pub fn new(n: f64, dim: Dimension) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::domain("Medium::new", format!("contrast must be positive, got {n}")));
        }
        if n == 1.0 {
            return Err(Error::DegenerateContrast);
        }
        Ok(Medium { n, dim })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// The medium with contrast `1/n`.
    pub fn dual(&self) -> Medium {
        Medium { n: 1.0 / self.n, dim: self.dim }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub m: u32,
    pub s0: u32,
}

impl ModeIndex {
    pub fn new(m: u32, s0: u32) -> Result<Self> {
        if m < 1 || s0 < 1 {
            return Err(Error::domain("ModeIndex::new", format!("need m >= 1 and s0 >= 1, got m = {m}, s0 = {s0}")));
        }
        Ok(ModeIndex { m, s0 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Bisection stops once the bracket is narrower than this times `k`.
    pub bisection_rel_width: f64,
    /// Regula falsi steps taken inside the final bisection bracket.
    pub polish_steps: usize,
    /// Largest accepted `|f(k)|` relative to the endpoint scale.
    pub residual_tol: f64,
    /// Interior sample count for the root-count probe.
    pub probe_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { bisection_rel_width: 1e-12, polish_steps: 2, residual_tol: 1e-10, probe_points: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmissionEigenvalue {
    pub k: f64,
    /// `(j_{ν,s0}/n, j_{ν,s0+1}/n)`.
    pub bracket: Interval,
    /// `f_ν(k)` divided by the larger endpoint magnitude of `f_ν`.
    pub residual: f64,
    /// `max(|f_ν(bracket.lo)|, |f_ν(bracket.hi)|)`.
    pub endpoint_scale: LogScaled,
    pub medium: Medium,
    pub mode: ModeIndex,
    /// Sign changes of `f_ν` seen on an even grid over the bracket.
    pub probe_root_count: u32,
    /// For `n < 1`: the eigenvalue `k̃ = kn` of the dual medium `1/n`. The
    /// dual problem's `w` is this problem's `v` and vice versa.
    pub dual_of: Option<f64>,
}

impl TransmissionEigenvalue {
    pub fn order(&self) -> Order {
        self.medium.dim().order(self.mode.m)
    }

    pub fn roles_swapped(&self) -> bool {
        self.dual_of.is_some()
    }
}

/// `f_ν(k)` in log-scaled form; both products are formed as (sign, log)
/// pairs and subtracted after factoring out the larger exponent.
pub fn char_fn_log(k: f64, medium: &Medium, m: u32) -> Result<LogScaled> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain("char_fn", format!("wavenumber must be positive, got {k}")));
    }
    if m < 1 {
        return Err(Error::domain("char_fn", "angular order must be at least 1"));
    }
    let order = medium.dim().order(m);
    let n = medium.n();
    let (lower_k, value_k) = bessel_pair_log(order, k);
    let (lower_kn, value_kn) = bessel_pair_log(order, k * n);
    Ok(lower_k * value_kn - (value_k * lower_kn).scale(n))
}

/// `f_ν(k)` as a plain number (may underflow to zero for large `m`).
pub fn char_fn(k: f64, medium: &Medium, m: u32) -> Result<f64> {
    Ok(char_fn_log(k, medium, m)?.to_f64())
}

/// `(j_{ν,s0}/n, j_{ν,s0+1}/n)`; for `n < 1` the bracket of the dual medium
/// mapped back, `(j_{ν,s0}, j_{ν,s0+1})`.
pub fn eigen_bracket(medium: &Medium, mode: ModeIndex) -> Result<Interval> {
    let order = medium.dim().order(mode.m);
    let lo = bessel_zero(order, mode.s0)?.value;
    let hi = bessel_zero(order, mode.s0 + 1)?.value;
    if medium.n() > 1.0 {
        Interval::new(lo / medium.n(), hi / medium.n())
    } else {
        Interval::new(lo, hi)
    }
}

pub fn find_eigenvalue(medium: &Medium, mode: ModeIndex, opts: &SolverOptions) -> Result<TransmissionEigenvalue> {
    if medium.n() < 1.0 {
        let dual = find_eigenvalue(&medium.dual(), mode, opts)?;
        return map_inverse_contrast(medium, &dual);
    }
    let bracket = eigen_bracket(medium, mode)?;
    let f = |k: f64| char_fn_log(k, medium, mode.m);
    let f_lo = f(bracket.lo)?;
    let f_hi = f(bracket.hi)?;
    if f_lo.sign() * f_hi.sign() >= 0 {
        return Err(Error::NoSignChange { m: mode.m, s0: mode.s0 });
    }

    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let (mut flo, mut fhi) = (f_lo, f_hi);
    while hi - lo > opts.bisection_rel_width * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm.is_zero() {
            lo = mid;
            hi = mid;
            flo = fm;
            fhi = fm;
            break;
        }
        if fm.sign() == flo.sign() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    let mut best = if flo.log_magnitude() <= fhi.log_magnitude() { (lo, flo) } else { (hi, fhi) };
    if lo == hi {
        best = (lo, flo);
    } else {
        for _ in 0..opts.polish_steps {
            // regula falsi: c = lo - f(lo) (hi - lo) / (f(hi) - f(lo))
            let t = -(flo / (fhi - flo)).to_f64();
            if !(t > 0.0 && t < 1.0) {
                break;
            }
            let c = lo + t * (hi - lo);
            if !(c > lo && c < hi) {
                break;
            }
            let fc = f(c)?;
            if fc.log_magnitude() < best.1.log_magnitude() || fc.is_zero() {
                best = (c, fc);
            }
            if fc.is_zero() {
                break;
            }
            if fc.sign() == flo.sign() {
                lo = c;
                flo = fc;
            } else {
                hi = c;
                fhi = fc;
            }
        }
    }

    let (k, fk) = best;
    let scale = if f_lo.log_magnitude() >= f_hi.log_magnitude() { f_lo.abs() } else { f_hi.abs() };
    let residual = (fk / scale).to_f64();
    if residual.abs() > opts.residual_tol {
        return Err(Error::NotConverged { m: mode.m, s0: mode.s0, residual });
    }
    let probe_root_count = probe_sign_changes(&f, bracket, f_lo, f_hi, opts.probe_points)?;
    Ok(TransmissionEigenvalue {
        k,
        bracket,
        residual,
        endpoint_scale: scale,
        medium: *medium,
        mode,
        probe_root_count,
        dual_of: None,
    })
}

fn probe_sign_changes(
    f: &impl Fn(f64) -> Result<LogScaled>,
    bracket: Interval,
    f_lo: LogScaled,
    f_hi: LogScaled,
    points: usize,
) -> Result<u32> {
    let mut count = 0;
    let mut previous = f_lo.sign();
    let step = bracket.width() / (points + 1) as f64;
    for i in 1..=points {
        let sign = f(bracket.lo + step * i as f64)?.sign();
        if sign != 0 && previous != 0 && sign != previous {
            count += 1;
        }
        if sign != 0 {
            previous = sign;
        }
    }
    if f_hi.sign() != previous {
        count += 1;
    }
    Ok(count)
}

/// Maps an eigenvalue `k̃` of the contrast `1/n > 1` to the eigenvalue
/// `k = k̃/n` of the contrast `n < 1`.
pub fn map_inverse_contrast(medium: &Medium, dual: &TransmissionEigenvalue) -> Result<TransmissionEigenvalue> {
    let n = medium.n();
    if n >= 1.0 {
        return Err(Error::domain("map_inverse_contrast", format!("contrast must be below 1, got {n}")));
    }
    if dual.medium.dim() != medium.dim() || (dual.medium.n() * n - 1.0).abs() > 1e-12 {
        return Err(Error::domain(
            "map_inverse_contrast",
            format!("eigenvalue was computed for contrast {}, expected {}", dual.medium.n(), 1.0 / n),
        ));
    }
    let k = dual.k / n;
    let bracket = dual.bracket.scaled(1.0 / n);
    let m = dual.mode.m;
    let f_lo = char_fn_log(bracket.lo, medium, m)?;
    let f_hi = char_fn_log(bracket.hi, medium, m)?;
    let scale = if f_lo.log_magnitude() >= f_hi.log_magnitude() { f_lo.abs() } else { f_hi.abs() };
    let residual = (char_fn_log(k, medium, m)? / scale).to_f64();
    Ok(TransmissionEigenvalue {
        k,
        bracket,
        residual,
        endpoint_scale: scale,
        medium: *medium,
        mode: dual.mode,
        probe_root_count: dual.probe_root_count,
        dual_of: Some(dual.k),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanEntry {
    pub m: u32,
    pub outcome: Result<TransmissionEigenvalue>,
}

/// Per-`m` outcomes of a scan, ordered by `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub entries: Vec<ScanEntry>,
}

impl ScanResult {
    pub fn eigenvalues(&self) -> impl Iterator<Item = &TransmissionEigenvalue> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    pub fn no_sign_change(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().filter(|e| matches!(e.outcome, Err(Error::NoSignChange { .. }))).map(|e| e.m)
    }

    /// Entries that failed for any reason other than a missing sign change.
    pub fn failures(&self) -> impl Iterator<Item = (u32, &Error)> {
        self.entries.iter().filter_map(|e| match &e.outcome {
            Err(Error::NoSignChange { .. }) | Ok(_) => None,
            Err(err) => Some((e.m, err)),
        })
    }
}

/// Runs [`find_eigenvalue`] for every `m` in the range, in parallel.
pub fn scan(medium: &Medium, s0: u32, m_range: RangeInclusive<u32>, opts: &SolverOptions) -> Result<ScanResult> {
    if *m_range.start() < 1 || s0 < 1 {
        return Err(Error::domain("scan", "need m >= 1 and s0 >= 1"));
    }
    let entries = m_range
        .into_par_iter()
        .map(|m| ScanEntry { m, outcome: find_eigenvalue(medium, ModeIndex { m, s0 }, opts) })
        .collect();
    Ok(ScanResult { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(n: f64) -> Medium {
        Medium::new(n, Dimension::Two).unwrap()
    }

    #[test]
    fn unit_contrast_is_rejected() {
        assert_eq!(Medium::new(1.0, Dimension::Two), Err(Error::DegenerateContrast));
        assert!(Medium::new(0.0, Dimension::Two).is_err());
        assert!(Medium::new(-2.0, Dimension::Three).is_err());
        assert!(ModeIndex::new(0, 1).is_err());
        assert!(Dimension::from_u8(4).is_err());
    }

    #[test]
    fn sign_change_across_bracket() {
        for dim in [Dimension::Two, Dimension::Three] {
            let medium = Medium::new(2.0, dim).unwrap();
            let b = eigen_bracket(&medium, ModeIndex { m: 30, s0: 1 }).unwrap();
            let lo = char_fn_log(b.lo, &medium, 30).unwrap();
            let hi = char_fn_log(b.hi, &medium, 30).unwrap();
            assert_eq!(lo.sign() * hi.sign(), -1, "{dim:?}");
        }
    }

    #[test]
    fn bracket_scales_with_contrast() {
        let b2 = eigen_bracket(&two(2.0), ModeIndex { m: 25, s0: 1 }).unwrap();
        let b4 = eigen_bracket(&two(4.0), ModeIndex { m: 25, s0: 1 }).unwrap();
        assert!(b2.lo < b2.hi);
        assert!((b2.lo / b4.lo - 2.0).abs() < 1e-14);
        assert!((b2.hi / b4.hi - 2.0).abs() < 1e-14);
        let j30 = bessel_zero(Order::integer(30), 1).unwrap().value;
        let b = eigen_bracket(&two(2.0), ModeIndex { m: 30, s0: 1 }).unwrap();
        assert_eq!(b.lo, j30 / 2.0);
    }

    #[test]
    fn eigenvalue_for_order_thirty() {
        let medium = two(2.0);
        let e = find_eigenvalue(&medium, ModeIndex { m: 30, s0: 1 }, &SolverOptions::default()).unwrap();
        assert!(e.bracket.surrounds(e.k));
        assert!(e.residual.abs() <= 1e-10);
        assert!(e.k >= 30.0 / 2.0 && e.k <= 3.0 * 30.0 / 4.0, "k = {}", e.k);
        assert!(e.probe_root_count >= 1);
    }

    #[test]
    fn small_order_may_lack_a_sign_change() {
        // lemma scope: below the threshold the bracket is not guaranteed
        let r = find_eigenvalue(&two(2.0), ModeIndex { m: 2, s0: 1 }, &SolverOptions::default());
        match r {
            Ok(e) => assert!(e.bracket.surrounds(e.k)),
            Err(Error::NoSignChange { m, s0 }) => assert_eq!((m, s0), (2, 1)),
            Err(other) => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duality_maps_eigenvalues() {
        let opts = SolverOptions::default();
        let dual = find_eigenvalue(&two(2.0), ModeIndex { m: 25, s0: 1 }, &opts).unwrap();
        let half = two(0.5);
        let mapped = map_inverse_contrast(&half, &dual).unwrap();
        assert_eq!(mapped.k, 2.0 * dual.k);
        assert!(mapped.roles_swapped());
        assert_eq!(mapped.dual_of, Some(dual.k));
        assert!(mapped.residual.abs() <= 1e-8);
        assert!(map_inverse_contrast(&two(3.0), &dual).is_err());
        assert!(map_inverse_contrast(&two(0.25), &dual).is_err());
        let direct = find_eigenvalue(&half, ModeIndex { m: 25, s0: 1 }, &opts).unwrap();
        assert_eq!(direct, mapped);
    }

    #[test]
    fn scan_orders_and_windows() {
        let medium = two(2.0);
        let result = scan(&medium, 1, 20..=80, &SolverOptions::default()).unwrap();
        let ms: Vec<u32> = result.entries.iter().map(|e| e.m).collect();
        assert_eq!(ms, (20..=80).collect::<Vec<_>>());
        assert_eq!(result.eigenvalues().count(), 61);
        for e in result.eigenvalues() {
            let ratio = e.k / f64::from(e.mode.m);
            assert!(ratio > 0.5 && ratio < 0.75, "m={} k/m={ratio}", e.mode.m);
            assert!(e.residual.abs() <= 1e-10);
            assert!(e.bracket.surrounds(e.k));
        }
    }
}
