//! Zero-rate prices as single sums.
//!
//! At `r = 0` the geometric series over levels collapse: grouping paths by
//! their number of down moves `m` leaves a weight that depends only on
//! `M = n - 2m`, so the price is a sum of `n/2 + 1` positive terms.

use crate::model::LatticeParams;
use crate::special::ln_binom_pmf;
use crate::summation::CompensatedSum;

/// Call value `V(0,0)` on a `steps`-step tree with the lattice's `u`, `q`:
/// `sum_m P_q(m) (Q^M - 1 + (M - 1)(Q - 1))`.
pub(crate) fn call_series(lat: &LatticeParams, steps: usize) -> f64 {
    let ln_q = lat.ln_q_ratio();
    let q_minus_one = lat.q_ratio_minus_one;
    (0..=steps / 2)
        .filter(|&m| steps > 2 * m)
        .map(|m| {
            let big_m = (steps - 2 * m) as f64;
            let ln_w = ln_binom_pmf(m as u64, steps as u64, lat.q, lat.one_minus_q);
            let w = ln_w.exp();
            let growth = big_m * ln_q;
            // w (Q^M - 1) without overflowing Q^M
            let geometric = if growth < 1.0 {
                w * growth.exp_m1()
            } else {
                (ln_w + growth).exp() - w
            };
            geometric + w * (big_m - 1.0) * q_minus_one
        })
        .sum::<CompensatedSum>()
        .value()
}

/// Put value `W(0,0)`: `sum_m P_{1-q}(m) ((1 - d^M) + (M - 1)(1 - d))`.
pub(crate) fn put_series(lat: &LatticeParams, steps: usize) -> f64 {
    let s = lat.log_u;
    let one_minus_d = -(-s).exp_m1();
    (0..=steps / 2)
        .filter(|&m| steps > 2 * m)
        .map(|m| {
            let big_m = (steps - 2 * m) as f64;
            let w = ln_binom_pmf(m as u64, steps as u64, lat.one_minus_q, lat.q).exp();
            w * (-(-big_m * s).exp_m1() + (big_m - 1.0) * one_minus_d)
        })
        .sum::<CompensatedSum>()
        .value()
}
