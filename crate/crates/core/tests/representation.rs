use lookback::lattice::{
    call_decomposition, delta_tree, delta_tree_exact, price_call_exact, price_call_fast,
    price_call_follmer_schied, price_put_exact, price_put_fast, price_put_follmer_schied,
    put_decomposition, value_v01, value_v01_exact, value_v11, value_v11_exact, EXACT_MAX_N,
};
use lookback::{Error, LatticeParams, ModelParams};

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn nonzero_rate_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for sigma in [0.05, 0.2, 0.6] {
        for r in [-0.02, 0.08] {
            for t in [0.25, 1.0, 3.0] {
                out.push(ModelParams::new(80.0, r, sigma, t).unwrap());
            }
        }
    }
    out
}

#[test]
fn reduced_forms_match_double_sums() {
    for m in nonzero_rate_grid() {
        for n in (1..=160).chain([255, 256, 401]) {
            if LatticeParams::new(&m, n).is_err() {
                continue;
            }
            let what = format!("r={} sigma={} T={} n={n}", m.r, m.sigma, m.t);
            let d = rel(
                price_call_fast(&m, n).unwrap(),
                price_call_exact(&m, n).unwrap(),
            );
            assert!(d <= 1e-9, "call {what}: {d:e}");
            let d = rel(
                price_put_fast(&m, n).unwrap(),
                price_put_exact(&m, n).unwrap(),
            );
            assert!(d <= 1e-9, "put {what}: {d:e}");
            if n >= 2 {
                let d = rel(value_v11(&m, n).unwrap(), value_v11_exact(&m, n).unwrap());
                assert!(d <= 1e-9, "V(1,1) {what}: {d:e}");
                let d = rel(value_v01(&m, n).unwrap(), value_v01_exact(&m, n).unwrap());
                assert!(d <= 1e-9, "V(0,1) {what}: {d:e}");
            }
        }
    }
}

#[test]
fn sums_over_the_extremum_match_double_sums() {
    for m in nonzero_rate_grid() {
        for n in [1, 2, 7, 64, 300] {
            if LatticeParams::new(&m, n).is_err() {
                continue;
            }
            assert!(
                rel(
                    price_call_follmer_schied(&m, n).unwrap(),
                    price_call_exact(&m, n).unwrap()
                ) < 1e-11
            );
            assert!(
                rel(
                    price_put_follmer_schied(&m, n).unwrap(),
                    price_put_exact(&m, n).unwrap()
                ) < 1e-11
            );
        }
    }
}

#[test]
fn regrouped_value_matches_printed_combination_away_from_the_pole() {
    let m = ModelParams::new(80.0, 0.08, 0.2, 1.0).unwrap();
    for n in [10, 1_000, 100_000] {
        for d in [
            call_decomposition(&m, n).unwrap(),
            put_decomposition(&m, n).unwrap(),
        ] {
            assert!(rel(d.value(), d.direct_value()) < 1e-9, "n={n}");
        }
    }
}

#[test]
fn near_pole_rate_stays_accurate() {
    // r = -sigma^2/2 makes Q = q/(1-q) equal to 1 up to O(n^{-3/2})
    let m = ModelParams::new(80.0, -0.02, 0.2, 1.0).unwrap();
    for n in [50, 51, 1_000, 1_001] {
        assert!(
            rel(
                price_call_fast(&m, n).unwrap(),
                price_call_exact(&m, n).unwrap()
            ) < 1e-11
        );
        assert!(
            rel(
                price_put_fast(&m, n).unwrap(),
                price_put_exact(&m, n).unwrap()
            ) < 1e-11
        );
        assert!((delta_tree(&m, n).unwrap() - delta_tree_exact(&m, n).unwrap()).abs() < 1e-11);
    }
}

#[test]
fn zero_rate_routes() {
    let m = ModelParams::new(80.0, 0.0, 0.2, 1.0).unwrap();
    for n in [2, 33, 500] {
        assert!(
            rel(
                price_call_fast(&m, n).unwrap(),
                price_call_exact(&m, n).unwrap()
            ) < 1e-12
        );
        assert!(
            rel(
                price_put_fast(&m, n).unwrap(),
                price_put_exact(&m, n).unwrap()
            ) < 1e-12
        );
        assert!(rel(value_v01(&m, n).unwrap(), value_v01_exact(&m, n).unwrap()) < 1e-12);
    }
    assert!(matches!(
        call_decomposition(&m, 10),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        delta_tree(&m, EXACT_MAX_N + 1),
        Err(Error::Capacity { .. })
    ));
}
