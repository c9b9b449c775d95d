use proptest::prelude::*;
use surface_modes_core::eigenmodes::{boundary_residual, make_pair};
use surface_modes_core::eigensolver::{char_fn, char_fn_log, eigen_bracket, find_eigenvalue, map_inverse_contrast};
use surface_modes_core::verify::regime_threshold;
use surface_modes_core::zeros::bessel_zero;
use surface_modes_core::{Dimension, Error, Medium, ModeIndex, Normalization, SolverOptions};

fn dimension(three: bool) -> Dimension {
    if three {
        Dimension::Three
    } else {
        Dimension::Two
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalue_lies_strictly_inside_its_zero_bracket(
        n in 1.2f64..5.0,
        m in 5u32..=80,
        s0 in 1u32..=2,
        three in any::<bool>(),
    ) {
        let dim = dimension(three);
        let medium = Medium::new(n, dim).unwrap();
        let order = dim.order(m);
        let lo = bessel_zero(order, s0).unwrap().value / n;
        let hi = bessel_zero(order, s0 + 1).unwrap().value / n;
        let bracket = eigen_bracket(&medium, ModeIndex { m, s0 }).unwrap();
        prop_assert_eq!((bracket.lo, bracket.hi), (lo, hi));
        match find_eigenvalue(&medium, ModeIndex { m, s0 }, &SolverOptions::default()) {
            Ok(e) => {
                prop_assert!(lo < e.k && e.k < hi, "k = {} outside ({lo}, {hi})", e.k);
                prop_assert!(e.residual.abs() <= 1e-10);
                prop_assert!(e.probe_root_count >= 1);
            }
            Err(Error::NoSignChange { .. }) => {
                let f = |k: f64| char_fn_log(k, &medium, m).unwrap().sign();
                prop_assert!(f(lo) * f(hi) >= 0);
            }
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn plain_and_log_characteristic_functions_agree(
        m in 10u32..=40,
        t in 0.0f64..1.0,
        three in any::<bool>(),
    ) {
        let medium = Medium::new(2.0, dimension(three)).unwrap();
        let bracket = eigen_bracket(&medium, ModeIndex { m, s0: 1 }).unwrap();
        let k = bracket.lo + t * bracket.width();
        let plain = char_fn(k, &medium, m).unwrap();
        let logged = char_fn_log(k, &medium, m).unwrap();
        let scale = char_fn(bracket.lo, &medium, m).unwrap().abs().max(char_fn(bracket.hi, &medium, m).unwrap().abs());
        prop_assert!((plain - logged.to_f64()).abs() <= 1e-12 * scale);
    }

    #[test]
    fn inverse_contrast_maps_eigenvalues(m in 20u32..=80, three in any::<bool>()) {
        let dim = dimension(three);
        let half = Medium::new(0.5, dim).unwrap();
        let two = Medium::new(2.0, dim).unwrap();
        let dual = find_eigenvalue(&two, ModeIndex { m, s0: 1 }, &SolverOptions::default()).unwrap();
        let mapped = map_inverse_contrast(&half, &dual).unwrap();
        prop_assert_eq!(mapped.k, dual.k / 0.5);
        prop_assert_eq!(mapped.dual_of, Some(dual.k));
        let f = |k: f64| char_fn_log(k, &half, m).unwrap();
        let scale = f(mapped.bracket.lo).abs().to_f64().max(f(mapped.bracket.hi).abs().to_f64());
        prop_assert!(f(mapped.k).abs().to_f64() <= 1e-8 * scale);
        prop_assert!(mapped.bracket.lo < mapped.k && mapped.k < mapped.bracket.hi);
    }
}

#[test]
fn endpoint_signs_differ_past_the_threshold() {
    for n in [1.5, 2.0, 4.0] {
        for s0 in [1, 2] {
            for dim in [Dimension::Two, Dimension::Three] {
                let m0 = regime_threshold(n, s0, dim, 200).unwrap().expect("threshold exists");
                let medium = Medium::new(n, dim).unwrap();
                for m in (m0 + 1).max(1)..=80 {
                    let b = eigen_bracket(&medium, ModeIndex { m, s0 }).unwrap();
                    let lo = char_fn_log(b.lo, &medium, m).unwrap();
                    let hi = char_fn_log(b.hi, &medium, m).unwrap();
                    assert!(lo.sign() * hi.sign() < 0, "n={n} s0={s0} {dim:?} m={m}");
                }
            }
        }
    }
}

#[test]
fn degenerate_and_invalid_contrasts_are_rejected() {
    assert_eq!(Medium::new(1.0, Dimension::Two).unwrap_err(), Error::DegenerateContrast);
    assert!(Medium::new(0.0, Dimension::Two).is_err());
    assert!(Medium::new(-2.0, Dimension::Three).is_err());
    assert!(Medium::new(f64::NAN, Dimension::Two).is_err());
    assert!(ModeIndex::new(0, 1).is_err());
    assert!(ModeIndex::new(3, 0).is_err());
}

#[test]
fn derivative_gap_tracks_the_root_residual() {
    // Stop bisection at three widths with no polish, so the residual is set by
    // the tolerance; the derivative mismatch must follow it with slope 1.
    for dim in [Dimension::Two, Dimension::Three] {
        let medium = Medium::new(2.0, dim).unwrap();
        let points: Vec<(f64, f64)> = [1e-6, 1e-8, 1e-10]
            .iter()
            .map(|&tol| {
                let opts = SolverOptions {
                    bisection_rel_width: tol,
                    polish_steps: 0,
                    residual_tol: 1.0,
                    ..Default::default()
                };
                let e = find_eigenvalue(&medium, ModeIndex { m: 30, s0: 1 }, &opts).unwrap();
                let pair = make_pair(&e, Normalization::default_for(dim)).unwrap();
                let gaps = boundary_residual(&pair).unwrap();
                assert!(gaps.value_gap <= 1e-12);
                (e.residual.abs().ln(), gaps.derivative_gap.ln())
            })
            .collect();
        for w in points.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            assert!((slope - 1.0).abs() < 0.05, "{dim:?}: slope {slope}, points {points:?}");
        }
    }
}

#[test]
fn scan_example_values() {
    let medium = Medium::new(2.0, Dimension::Two).unwrap();
    let e = find_eigenvalue(&medium, ModeIndex { m: 20, s0: 1 }, &SolverOptions::default()).unwrap();
    assert!((e.k - 13.349304402474331).abs() < 1e-12);
    assert!(!e.roles_swapped());
}
