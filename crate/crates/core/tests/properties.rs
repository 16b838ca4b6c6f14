use std::sync::Arc;

use adams_lab::adams_sequence::{blowup_probe, CapVariant, SequenceIndex};
use adams_lab::cli::{num, parse_config};
use adams_lab::functional_lab::{constants, Convention};
use adams_lab::mountain_pass::{EnergyModel, NonlinearitySpec, CLAMPED};
use adams_lab::radial_core::{beta_interval, build_grid, muckenhoupt_balls, Tail, WeightSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn formatted_reals_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = num(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn beta_accepted_exactly_inside_the_interval(beta in -0.5f64..1.5) {
        let parsed = parse_config(&format!("N=4\nbeta={beta}"));
        let (lo, hi) = beta_interval(4);
        prop_assert_eq!(parsed.is_ok(), beta > lo && beta < hi);
    }

    #[test]
    fn muckenhoupt_product_is_at_least_one(c in 0.0f64..20.0, rho in 0.01f64..10.0, beta in 0.3f64..0.95) {
        // Hölder: average of w times average of 1/w is never below one when N = 4
        let w = WeightSpec::new(4, beta, Tail::Log { sigma: 2.0 }, 1.0).unwrap();
        let p = muckenhoupt_balls(&w, &[c], &[rho]).unwrap()[0].product;
        prop_assert!(p >= 1.0 - 1e-10, "product {p}");
    }

    #[test]
    fn weight_is_continuous_at_one_and_at_least_one_beyond(beta in 0.26f64..0.99, delta in 0.1f64..3.0, t in 1.0f64..1e6) {
        let w = WeightSpec::new(4, beta, Tail::Power { delta }, 1.0).unwrap();
        prop_assert!((w.value(1.0 - 1e-12) - w.value(1.0)).abs() < 1e-9);
        prop_assert!(w.value(t) >= 1.0);
    }

    #[test]
    fn energy_is_even_for_odd_nonlinearities(seed in 0u64..1000, amp in 0.1f64..2.0) {
        let g = Arc::new(build_grid(4, 6.0, 24, 24).unwrap());
        let w = WeightSpec::new(4, 0.5, Tail::constant(), 1.0).unwrap();
        let m = EnergyModel::new(Arc::clone(&g), NonlinearitySpec::subcritical(5.0, 1.0).unwrap(), &w).unwrap();
        let free = g.len() - CLAMPED;
        let u: Vec<f64> = g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, r)| if i < free { amp * (-(r - (seed % 5) as f64).powi(2)).exp() } else { 0.0 })
            .collect();
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        let (a, b) = (m.value(&u).unwrap(), m.value(&neg).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cap_integral_grows_with_the_exponent(lo in 0.1f64..1.0, step in 0.01f64..0.5) {
        let c = constants(4, 0.5).unwrap();
        let w = WeightSpec::new(4, 0.5, Tail::constant(), 1.0).unwrap();
        let ns = [SequenceIndex::new(1e3).unwrap(), SequenceIndex::new(1e4).unwrap()];
        let a = blowup_probe(lo, &ns, &c, &w, Convention::General, CapVariant::Continuous).unwrap();
        let b = blowup_probe(lo + step, &ns, &c, &w, Convention::General, CapVariant::Continuous).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            prop_assert!(y.log_value > x.log_value);
        }
    }
}
