//! Property tests for the model invariants.

use proptest::prelude::*;
use repsim_core::emission::{build_cubic_lattice, pattern_value};
use repsim_core::fidelity::{
    creation_error, creation_error_expanded, error_terms, final_error, optimize_rabi,
};
use repsim_core::params::ScenarioConfig;
use repsim_core::rates::{
    link_time, nesting_factor, total_time, transmission_efficiency, NestingPolicy,
};
use repsim_core::LinkParams;

fn link_strategy() -> impl Strategy<Value = LinkParams> {
    (
        1e2..5e5f64,    // l0
        5e3..1e5f64,    // l_att
        1e8..3e8f64,    // c
        1e-7..1e-3f64,  // t_p
        0.05..1.0f64,   // p
        0.05..1.0f64,   // eta_d
        0.05..1.0f64,   // eta_ion
        0u32..=4,       // n_levels
    )
        .prop_map(|(l0, l_att, c, t_p, p, eta_d, eta_ion, n_levels)| LinkParams {
            l0,
            l_att,
            c,
            t_p,
            p,
            eta_d,
            eta_ion,
            n_levels,
        })
}

proptest! {
    #[test]
    fn total_time_reduces_to_link_time_without_nesting(link in link_strategy()) {
        let flat = LinkParams { n_levels: 0, ..link };
        let result = total_time(&flat).unwrap();
        prop_assert_eq!(result.t_total, result.t_link);
        prop_assert_eq!(result.t_total, link_time(&flat).unwrap());
    }

    #[test]
    fn total_time_scales_as_inverse_p_squared(link in link_strategy(), alpha in 0.3..2.0f64) {
        prop_assume!(link.p * alpha <= 1.0 && link.p * alpha >= 1e-3);
        let scaled = LinkParams { p: link.p * alpha, ..link.clone() };
        let base = total_time(&link).unwrap().t_total;
        let fast = total_time(&scaled).unwrap().t_total;
        let expected = base / (alpha * alpha);
        prop_assert!((fast - expected).abs() / expected < 1e-11,
            "p-scaling broke: {} vs {}", fast, expected);
    }

    #[test]
    fn nesting_multiplier_is_exact(link in link_strategy()) {
        let result = total_time(&link).unwrap();
        let factor = nesting_factor(result.p_swap, link.n_levels);
        let ratio = result.t_total / result.t_link;
        prop_assert!((ratio - factor).abs() <= 1e-15 * factor);
        // every swap level can only slow distribution down
        prop_assert!(result.t_total >= result.t_link);
    }

    #[test]
    fn direct_transmission_monotone_in_distance(
        base_km in 1.0..5000.0f64,
        extra_km in 1.0..5000.0f64,
    ) {
        let near = repsim_core::rates::direct_transmission_time(base_km * 1e3, 1e10, 0.2);
        let far = repsim_core::rates::direct_transmission_time((base_km + extra_km) * 1e3, 1e10, 0.2);
        prop_assert!(far.seconds >= near.seconds);
    }

    #[test]
    fn transmission_composes_exponentially(a in 1e2..3e5f64, b in 1e2..3e5f64, l_att in 5e3..1e5f64) {
        let combined: f64 = transmission_efficiency(a + b, l_att);
        let product = transmission_efficiency(a, l_att) * transmission_efficiency(b, l_att);
        prop_assert!((combined - product).abs() <= 1e-12 * combined.max(1e-300));
    }

    #[test]
    fn total_time_monotone_in_link_length(link in link_strategy(), stretch in 1.01..3.0f64) {
        let longer = LinkParams { l0: link.l0 * stretch, ..link.clone() };
        prop_assert!(total_time(&longer).unwrap().t_total > total_time(&link).unwrap().t_total);
    }
}

fn blockade_scalars() -> impl Strategy<Value = (f64, f64, f64, f64, f64, f64)> {
    (
        1e6..1e9f64,   // b
        1e-5..1e-2f64, // tau
        0.0..100.0f64, // d
        0.0..1.0f64,   // eta_ion
        1e3..1e8f64,   // omega_s
        1e3..1e8f64,   // omega_f
    )
}

proptest! {
    #[test]
    fn creation_error_forms_agree((b, tau, d, eta, os, of) in blockade_scalars()) {
        let terms = error_terms(b, tau, d, eta, os, of);
        let row_sum = creation_error(&terms);
        let expanded = creation_error_expanded(b, tau, d, eta, os, of);
        prop_assert!((row_sum - expanded).abs() <= 1e-9 * row_sum.abs());
    }

    #[test]
    fn error_is_convex_along_each_rabi_axis(
        (b, tau, d, eta, os, of) in blockade_scalars(),
        n in 0u32..=4,
        half_step in 0.05..0.45f64,
    ) {
        let value = |os: f64, of: f64| {
            let t = error_terms(b, tau, d, eta, os, of);
            final_error(creation_error(&t), t.e_swap, n).0
        };
        // midpoint convexity on a symmetric triple around omega_s
        let (lo, hi) = (os * (1.0 - half_step), os * (1.0 + half_step));
        let mid = 0.5 * (lo + hi);
        prop_assert!(value(mid, of) <= 0.5 * (value(lo, of) + value(hi, of)) * (1.0 + 1e-12));
        let (lo, hi) = (of * (1.0 - half_step), of * (1.0 + half_step));
        let mid = 0.5 * (lo + hi);
        prop_assert!(value(os, mid) <= 0.5 * (value(os, lo) + value(os, hi)) * (1.0 + 1e-12));
    }

    #[test]
    fn flying_optimum_ignores_nesting_and_readout(
        b in 1e6..1e9f64,
        tau in 1e-5..1e-2f64,
        d in 0.0..100.0f64,
        eta_a in 0.0..1.0f64,
        eta_b in 0.0..1.0f64,
        n_a in 0u32..=4,
        n_b in 0u32..=4,
    ) {
        let first = optimize_rabi(b, tau, d, eta_a, n_a).omega_f;
        let second = optimize_rabi(b, tau, d, eta_b, n_b).omega_f;
        prop_assert!((first - second).abs() <= 1e-12 * first);
    }

    #[test]
    fn fidelity_decreases_with_nesting(e_c in 1e-6..1e-2f64, e_sw in 1e-6..1e-2f64) {
        for n in 1..=6u32 {
            let (e_n, f_n, _) = final_error(e_c, e_sw, n);
            let (e_prev, f_prev, _) = final_error(e_c, e_sw, n - 1);
            prop_assert!(e_n > e_prev);
            prop_assert!(f_n < f_prev);
        }
    }

    #[test]
    fn table_terms_invariant_under_frequency_rescaling(
        (b, tau, d, eta, os, of) in blockade_scalars(),
        alpha in 0.1..10.0f64,
    ) {
        let base = error_terms(b, tau, d, eta, os, of);
        let scaled = error_terms(alpha * b, tau / alpha, d, eta, alpha * os, alpha * of);
        for (x, y) in [
            (base.p2_init_s, scaled.p2_init_s),
            (base.ploss_init_s, scaled.ploss_init_s),
            (base.e_init_s, scaled.e_init_s),
            (base.p2_init_f, scaled.p2_init_f),
            (base.ploss_init_f, scaled.ploss_init_f),
            (base.e_init_f, scaled.e_init_f),
            (base.p2_entangle, scaled.p2_entangle),
            (base.ploss_entangle, scaled.ploss_entangle),
            (base.e_entangle, scaled.e_entangle),
            (base.p2_swap, scaled.p2_swap),
            (base.ploss_swap, scaled.ploss_swap),
            (base.e_swap, scaled.e_swap),
        ] {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn config_roundtrip_preserves_si_values(
        l0_km in 1.0..500.0f64,
        t_p_us in 0.1..100.0f64,
        p in 0.01..1.0f64,
        b_mhz in 0.5..100.0f64,
        seed in any::<u64>(),
    ) {
        let text = format!(
            r#"{{
                "L0_km": {l0_km}, "L_att_km": 22, "c_m_per_s": 2e8, "t_p_us": {t_p_us},
                "p": {p}, "eta_d": 0.9, "eta_ion": 0.95,
                "B_over_2pi_MHz": {b_mhz}, "tau_us": 500, "optical_depth": 10,
                "Omega_s_over_2pi_MHz": 0.209, "Omega_f_over_2pi_MHz": 0.415,
                "geometry": {{"kind": "lattice", "nx": 7, "ny": 7, "nz": 15, "spacing_um": 0.37}},
                "lambda_nm": 780, "multiplex_m": 1, "rng_seed": {seed}, "trials": 100
            }}"#
        );
        let first = ScenarioConfig::from_document(&text).unwrap();
        let second = ScenarioConfig::from_document(&first.to_document()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn pattern_translation_invariance(
        shift_x in -5e-6..5e-6f64,
        shift_y in -5e-6..5e-6f64,
        shift_z in -5e-6..5e-6f64,
        u in -1.0..1.0f64,
    ) {
        let mut geom = build_cubic_lattice::<f64>(3, 3, 5, 0.37e-6, 780e-9);
        let s = (1.0 - u * u).sqrt();
        let k_hat = [s, 0.0, u];
        let before = pattern_value(&geom, k_hat);
        for p in &mut geom.positions {
            p[0] += shift_x;
            p[1] += shift_y;
            p[2] += shift_z;
        }
        let after = pattern_value(&geom, k_hat);
        prop_assert!((before - after).abs() <= 1e-8 * before.max(1e-9));
    }

    #[test]
    fn best_nesting_policy_never_loses_to_fixed(
        distance_km in 100.0..2000.0f64,
        p in 0.1..1.0f64,
    ) {
        let template = LinkParams {
            l0: 1.0,
            l_att: 22e3,
            c: 2e8,
            t_p: 20e-6,
            p,
            eta_d: 0.9,
            eta_ion: 0.95,
            n_levels: 0,
        };
        let distance = distance_km * 1e3;
        let best = repsim_core::rates::curve_sweep(&[distance], &template, NestingPolicy::Best, 4)
            .unwrap()[0]
            .result;
        for n in 0..=4u32 {
            let fixed =
                repsim_core::rates::curve_sweep(&[distance], &template, NestingPolicy::Fixed(n), 4)
                    .unwrap()[0]
                    .result;
            prop_assert!(best.t_total <= fixed.t_total);
        }
    }
}
