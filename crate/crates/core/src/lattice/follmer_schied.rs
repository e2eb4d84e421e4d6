//! Prices from the distribution of the running extremum under the
//! risk-neutral measure, with no change of numeraire.

use super::exact::{check_exact_capacity, level_double_sum};
use crate::error::Result;
use crate::model::{LatticeParams, ModelParams};

/// Call price as `S0 (1 - e^{-rT} E[min S / S0])`, the expectation written
/// as a double sum over levels of the down-move lattice.
pub fn price_call_follmer_schied(model: &ModelParams, n: usize) -> Result<f64> {
    check_exact_capacity(n)?;
    let lat = LatticeParams::new(model, n)?;
    let s = lat.log_u;
    let expected_min = level_double_sum(n, lat.one_minus_p, lat.p, |j| (-(j as f64) * s).exp());
    Ok(model.s0 * (1.0 - lat.total_discount * expected_min))
}

/// Put price as `S0 (e^{-rT} E[max S / S0] - 1)`.
pub fn price_put_follmer_schied(model: &ModelParams, n: usize) -> Result<f64> {
    check_exact_capacity(n)?;
    let lat = LatticeParams::new(model, n)?;
    let s = lat.log_u;
    let expected_max = level_double_sum(n, lat.p, lat.one_minus_p, |j| (j as f64 * s).exp());
    Ok(model.s0 * (lat.total_discount * expected_max - 1.0))
}
