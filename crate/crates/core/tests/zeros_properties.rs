use proptest::prelude::*;
use surface_modes_core::specfun::{besselj, besselj_prime};
use surface_modes_core::zeros::{bessel_deriv_zero, bessel_zero};
use surface_modes_core::Order;
use surface_modes_oracle::series_besselj_fast;

fn order(twice: u32) -> Order {
    Order::from_twice(twice)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refined_zeros_sit_inside_their_brackets(twice in 0u32..=200, s in 1u32..=5) {
        let z = bessel_zero(order(twice), s).unwrap();
        prop_assert!(z.bracket.lo < z.value && z.value < z.bracket.hi);
        prop_assert_eq!(z.residual, besselj(order(twice), z.value).unwrap());
        let d = bessel_deriv_zero(order(twice), s).unwrap();
        prop_assert!(d.bracket.lo < d.value && d.value < d.bracket.hi);
        prop_assert_eq!(d.residual, besselj_prime(order(twice), d.value).unwrap());
    }

    #[test]
    fn positive_below_first_derivative_zero(twice in 2u32..=120, t in 0.01f64..1.0) {
        let first = bessel_deriv_zero(order(twice), 1).unwrap().value;
        let x = t * first;
        prop_assert!(besselj(order(twice), x).unwrap() > 0.0 || series_besselj_fast(twice, x) < 1e-300);
    }

    #[test]
    fn zero_is_a_sign_change_of_the_series(twice in 0u32..=60, s in 1u32..=3) {
        let z = bessel_zero(order(twice), s).unwrap().value;
        let h = 1e-9 * z;
        prop_assert!(series_besselj_fast(twice, z - h) * series_besselj_fast(twice, z + h) < 0.0);
    }
}

#[test]
fn neighbouring_orders_interlace() {
    for m in 2..=50 {
        for s in 1..=4 {
            let a = bessel_zero(Order::integer(m), s).unwrap().value;
            let b = bessel_zero(Order::integer(m), s + 1).unwrap().value;
            let lower = Order::integer(m - 1);
            assert!(besselj(lower, a).unwrap() * besselj(lower, b).unwrap() < 0.0, "m={m} s={s}");
        }
    }
}
