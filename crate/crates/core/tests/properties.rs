use lookback::binomial_tail::{binom_cdf, binom_tail, Binomial};
use lookback::closed_form::{bs_call, bs_call_r0, bs_delta, bs_put, bs_put_r0};
use lookback::combinatorics::{level_pmf_call, level_pmf_put};
use lookback::fixed_strike::price_call_fixed;
use lookback::lattice::{price_call_exact, price_call_fast, price_put_fast};
use lookback::{Error, LatticeParams, ModelParams};
use proptest::prelude::*;

fn model_strategy() -> impl Strategy<Value = ModelParams> {
    (-0.05f64..0.15, 0.05f64..0.8, 0.1f64..5.0)
        .prop_map(|(r, sigma, t)| ModelParams::new(80.0, r, sigma, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_is_monotone_and_complements_the_tail(n in 1u64..5_000, p in 0.01f64..0.99, frac in 0.0f64..1.0) {
        let k = (frac * n as f64) as i64;
        let a = binom_cdf(n, p, k).unwrap();
        let b = binom_cdf(n, p, k + 1).unwrap();
        prop_assert!(a <= b + 1e-15);
        prop_assert!((a + binom_tail(n, p, k + 1).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn summation_and_continued_fraction_agree(n in 1_000u64..200_000, p in 0.3f64..0.7, shift in -3.0f64..3.0) {
        let b = Binomial::new(n, p).unwrap();
        let k = (n as f64 * p + shift * (n as f64 * p * (1.0 - p)).sqrt()) as i64;
        prop_assert!((b.cdf(k) - b.cdf_by_summation(k)).abs() < 1e-13);
    }

    #[test]
    fn level_pmfs_are_distributions(model in model_strategy(), n in 1usize..400, frac in 0.0f64..1.0) {
        let Ok(lat) = LatticeParams::new(&model, n) else { return Ok(()) };
        let m = 1 + (frac * (n - 1) as f64) as usize;
        for pmf in [level_pmf_call(&lat, m).unwrap(), level_pmf_put(&lat, m).unwrap()] {
            prop_assert!((pmf.total() - 1.0).abs() < 1e-12);
            prop_assert!((0..=m).all(|j| pmf.get(j) >= 0.0));
        }
    }

    #[test]
    fn prices_scale_with_spot(model in model_strategy(), n in 1usize..300, scale in 0.1f64..10.0) {
        if LatticeParams::new(&model, n).is_err() { return Ok(()) }
        let scaled = model.with_s0(model.s0 * scale);
        let a = price_call_fast(&model, n).unwrap() * scale;
        let b = price_call_fast(&scaled, n).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.abs());
        let a = price_put_fast(&model, n).unwrap() * scale;
        let b = price_put_fast(&scaled, n).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.abs());
    }

    #[test]
    fn lattice_call_is_bounded_by_spot(model in model_strategy(), n in 1usize..300) {
        if LatticeParams::new(&model, n).is_err() { return Ok(()) }
        let c = price_call_exact(&model, n).unwrap();
        prop_assert!(c >= 0.0 && c <= model.s0);
        prop_assert!(price_put_fast(&model, n).unwrap() >= 0.0);
    }

    #[test]
    fn fixed_strike_price_decreases_in_strike(model in model_strategy(), n in 1usize..120) {
        if LatticeParams::new(&model, n).is_err() { return Ok(()) }
        let mut previous = f64::INFINITY;
        for i in 0..=20 {
            let k = model.s0 * (0.5 + 0.05 * i as f64);
            match price_call_fixed(&model, k, n) {
                Ok(v) => {
                    prop_assert!(v <= previous * (1.0 + 1e-12) + 1e-12, "K={}", k);
                    previous = v;
                }
                Err(Error::IntegerBarrier { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn closed_forms_are_continuous_at_zero_rate(sigma in 0.05f64..0.8, t in 0.1f64..5.0, sign in prop::bool::ANY) {
        let r = if sign { 1e-7 } else { -1e-7 };
        let m = ModelParams::new(80.0, r, sigma, t).unwrap();
        let c0 = bs_call_r0(&m).unwrap();
        prop_assert!((bs_call(&m).unwrap() - c0).abs() < 1e-4 * c0);
        let p0 = bs_put_r0(&m).unwrap();
        prop_assert!((bs_put(&m).unwrap() - p0).abs() < 1e-4 * p0);
    }

    #[test]
    fn closed_form_delta_is_a_spot_derivative(model in model_strategy()) {
        let h = 1e-3;
        let up = bs_call(&model.with_s0(model.s0 + h)).unwrap();
        let down = bs_call(&model.with_s0(model.s0 - h)).unwrap();
        prop_assert!(((up - down) / (2.0 * h) - bs_delta(&model).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn put_and_call_closed_forms_differ_by_the_rate_term(model in model_strategy()) {
        prop_assume!(model.r.abs() > 1e-3);
        let vr = model.sigma * model.sigma / (2.0 * model.r);
        let want = model.s0 * (1.0 - (-model.r * model.t).exp()) * (1.0 - vr);
        let got = bs_call(&model).unwrap() - bs_put(&model).unwrap();
        prop_assert!((got - want).abs() < 1e-10 * model.s0);
    }
}
