use iccr_core::gaussian_bounds::{
    etw_constant, etw_maximize, etw_objective, etw_sum_outer_general, etw_sum_outer_symmetric, from_exponents,
    outer_region_gaussian, single_rate_outer, single_rate_outer_loose, strong_interference_symmetric,
    vi1_outer_corner, GaussianChannelParams, GaussianError, SnrExponentConfig,
};
use proptest::prelude::*;

fn channel() -> impl Strategy<Value = GaussianChannelParams> {
    (0.0f64..12.0, 0.0f64..12.0, 0.0f64..12.0, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(s, i, c, t12, t21)| {
        GaussianChannelParams::with_phases(10f64.powf(s / 2.0), 10f64.powf(i / 2.0), 10f64.powf(c / 2.0), t12, t21)
            .unwrap()
    })
}

proptest! {
    #[test]
    fn loose_single_rate_dominates(ch in channel()) {
        prop_assert!(single_rate_outer(&ch) <= single_rate_outer_loose(&ch) + 1e-12);
        prop_assert!(single_rate_outer_loose(&ch) <= single_rate_outer(&ch) + 2.0 + 1e-12);
    }

    #[test]
    fn maximizer_beats_scan(ch in channel()) {
        let g = ch.full();
        let (rho, best) = etw_maximize(&g);
        prop_assert!((0.0..=1.0).contains(&rho));
        prop_assert!((etw_objective(&g, rho) - best).abs() < 1e-12);
        for k in 0..=200 {
            prop_assert!(etw_objective(&g, k as f64 / 200.0) <= best + 1e-12);
        }
    }

    #[test]
    fn symmetric_form_bounds_general(ch in channel()) {
        prop_assert!(etw_sum_outer_general(&ch.full()) <= etw_sum_outer_symmetric(&ch) + 1e-9);
    }

    #[test]
    fn corner_lies_on_sum_face(s in 2.0f64..12.0, i in 0.0f64..1.0, c in 0.0f64..1.0) {
        // hC^2 <= hI^2 <= hS^2.
        let s2 = 10f64.powf(s);
        let i2 = s2.powf(i);
        let c2 = i2.powf(c);
        let ch = GaussianChannelParams::from_squares(s2, i2, c2).unwrap();
        let (r1, r2) = vi1_outer_corner(&ch);
        prop_assert!((r1 + r2 - etw_sum_outer_symmetric(&ch)).abs() < 1e-9);
    }

    #[test]
    fn outer_region_respects_each_bound(ch in channel()) {
        let r = outer_region_gaussian(&ch);
        prop_assert!(r.max_r1() <= single_rate_outer(&ch) + 1e-9);
        prop_assert!(r.max_sum_rate() <= etw_sum_outer_symmetric(&ch) + 1e-9);
        prop_assert!(r.max_sum_rate() <= 2.0 * single_rate_outer(&ch) + 1e-9);
    }
}

#[test]
fn constant_term_is_below_log_six() {
    let k = etw_constant();
    assert!(k < 5.17);
    assert!(k <= 2.0 * 6f64.log2());
}

#[test]
fn exponent_mapping() {
    let ch = from_exponents(SnrExponentConfig { snr: 1e6, alpha: 0.5, beta: 2.0 }, 0.1, 0.2).unwrap();
    assert!((ch.hs2() - 1e6).abs() < 1e-6);
    assert!((ch.hi2() - 1e3).abs() < 1e-9);
    assert!((ch.hc2() - 1e12).abs() < 1.0);
    assert_eq!((ch.theta12, ch.theta21), (0.1, 0.2));
    assert!(matches!(
        from_exponents(SnrExponentConfig { snr: 10.0, alpha: -0.1, beta: 0.0 }, 0.0, 0.0),
        Err(GaussianError::NegativeExponent { .. })
    ));
    assert!(matches!(GaussianChannelParams::new(-1.0, 0.0, 0.0), Err(GaussianError::InvalidGain)));
}

#[test]
fn strong_interference_depends_on_cross_phase() {
    // hS + hC = 6; hI e^{j theta} + hC has modulus 7 at theta = 0 and 5 at pi.
    let at = |t: f64| GaussianChannelParams::with_phases(5.0, 6.0, 1.0, t, t).unwrap();
    assert!(strong_interference_symmetric(&at(0.0)));
    assert!(!strong_interference_symmetric(&at(std::f64::consts::PI)));
}
