//! Floating-strike lookback prices on the Cheuk-Vorst lattice.
//!
//! Node values are dimensionless: the price at node `(j, m)` is the stock
//! price there times `V_n(j, m)` (call) or `W_n(j, m)` (put).

mod exact;
mod follmer_schied;
mod phi;
mod r0;

pub use exact::{price_call_exact, price_put_exact, value_v01_exact, value_v11_exact, EXACT_MAX_N};
pub use follmer_schied::{price_call_follmer_schied, price_put_follmer_schied};
pub use phi::{
    call_decomposition, put_decomposition, v01_decomposition, v11_decomposition, PhiDecomposition,
};

use crate::error::{Error, Result};
use crate::model::{LatticeParams, ModelParams};

/// Call price in a constant number of distribution-function evaluations.
///
/// At `r = 0` the reduction is singular; the zero-rate single sum is used
/// instead.
pub fn price_call_fast(model: &ModelParams, n: usize) -> Result<f64> {
    if model.is_r_zero() {
        return price_call_r0_series(model, n);
    }
    Ok(model.s0 * call_decomposition(model, n)?.value())
}

/// Put counterpart of [`price_call_fast`].
pub fn price_put_fast(model: &ModelParams, n: usize) -> Result<f64> {
    if model.is_r_zero() {
        return price_put_r0_series(model, n);
    }
    Ok(model.s0 * put_decomposition(model, n)?.value())
}

/// Call price at `r = 0` as a single sum of `n/2 + 1` positive terms.
pub fn price_call_r0_series(model: &ModelParams, n: usize) -> Result<f64> {
    let lat = zero_rate_lattice(model, n)?;
    Ok(model.s0 * r0::call_series(&lat, n))
}

/// Put price at `r = 0` as a single sum.
pub fn price_put_r0_series(model: &ModelParams, n: usize) -> Result<f64> {
    let lat = zero_rate_lattice(model, n)?;
    Ok(model.s0 * r0::put_series(&lat, n))
}

fn zero_rate_lattice(model: &ModelParams, n: usize) -> Result<LatticeParams> {
    if !model.is_r_zero() {
        return Err(Error::domain(
            "r",
            format!("the series needs r = 0, got {}", model.r),
        ));
    }
    LatticeParams::new(model, n)
}

/// `V_n(0,1)`, the call node value after a first down move.
pub fn value_v01(model: &ModelParams, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("n", "node values need at least two periods"));
    }
    if model.is_r_zero() {
        let lat = LatticeParams::new(model, n)?;
        return Ok(r0::call_series(&lat, n - 1));
    }
    Ok(v01_decomposition(model, n)?.value())
}

/// `V_n(1,1)`, the call node value after a first up move.
///
/// At `r = 0` this falls back to [`value_v11_exact`] and its size limit.
pub fn value_v11(model: &ModelParams, n: usize) -> Result<f64> {
    if model.is_r_zero() {
        return value_v11_exact(model, n);
    }
    Ok(v11_decomposition(model, n)?.value())
}

/// Tree delta `(u V(1,1) - d V(0,1)) / (u - d)`.
///
/// This is the hedge ratio over the first period, read as the delta at
/// time zero.
pub fn delta_tree(model: &ModelParams, n: usize) -> Result<f64> {
    let lat = LatticeParams::new(model, n)?;
    let v11 = value_v11(model, n)?;
    let v01 = value_v01(model, n)?;
    Ok((lat.u * v11 - lat.d * v01) / (lat.u - lat.d))
}

/// [`delta_tree`] from the quadratic-cost node values.
pub fn delta_tree_exact(model: &ModelParams, n: usize) -> Result<f64> {
    let lat = LatticeParams::new(model, n)?;
    let v11 = value_v11_exact(model, n)?;
    let v01 = value_v01_exact(model, n)?;
    Ok((lat.u * v11 - lat.d * v01) / (lat.u - lat.d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ModelParams {
        ModelParams::new(80.0, 0.08, 0.2, 1.0).unwrap()
    }

    #[test]
    fn fast_and_exact_agree_at_moderate_n() {
        let m = model();
        for n in [1, 2, 3, 10, 101, 1000] {
            let exact = price_call_exact(&m, n).unwrap();
            let fast = price_call_fast(&m, n).unwrap();
            assert!(
                (exact - fast).abs() <= 1e-11 * exact,
                "call n={n}: {exact} vs {fast}"
            );
            let exact = price_put_exact(&m, n).unwrap();
            let fast = price_put_fast(&m, n).unwrap();
            assert!(
                (exact - fast).abs() <= 1e-11 * exact,
                "put n={n}: {exact} vs {fast}"
            );
        }
    }

    #[test]
    fn node_values_agree() {
        let m = model();
        for n in [2, 3, 4, 9, 64, 301] {
            let a = value_v01_exact(&m, n).unwrap();
            let b = value_v01(&m, n).unwrap();
            assert!((a - b).abs() <= 1e-12, "v01 n={n}: {a} vs {b}");
            let a = value_v11_exact(&m, n).unwrap();
            let b = value_v11(&m, n).unwrap();
            assert!((a - b).abs() <= 1e-12, "v11 n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn zero_rate_series_match_exact() {
        let m = model().with_r(0.0);
        for n in [1, 2, 5, 40, 333] {
            let exact = price_call_exact(&m, n).unwrap();
            assert!((price_call_fast(&m, n).unwrap() - exact).abs() <= 1e-12 * exact);
            let exact = price_put_exact(&m, n).unwrap();
            assert!((price_put_fast(&m, n).unwrap() - exact).abs() <= 1e-12 * exact);
        }
        assert!(price_call_r0_series(&model(), 5).is_err());
        assert!(call_decomposition(&m, 5).is_err());
    }

    #[test]
    fn delta_forms_agree() {
        // r = -sigma^2/2 puts Q close to 1, where the reduced form loses a few digits
        for r in [0.08, 0.0, -0.02] {
            let m = model().with_r(r);
            for n in [2, 5, 50] {
                let a = delta_tree(&m, n).unwrap();
                let b = delta_tree_exact(&m, n).unwrap();
                assert!((a - b).abs() < 1e-10, "r={r} n={n}: {a} vs {b}");
            }
        }
    }
}
