//! European lookback call with a fixed strike, `(max S - K)^+`, priced on
//! the lattice of the running maximum.
//!
//! Cost is quadratic in `n`.

use crate::error::{Error, Result};
use crate::model::{LatticeParams, ModelParams};
use crate::special::ln_binom_pmf;
use crate::summation::CompensatedSum;

/// Largest `n` accepted by [`price_call_fixed`].
pub const FIXED_MAX_N: usize = 5_000;

// Distance from an integer below which the starting level counts as integer.
const INTEGER_LEVEL_TOL: f64 = 1e-12;

/// Position of the strike on the lattice, in levels above the spot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedStrikeSetup {
    pub strike: f64,
    /// `ln(K/S0) / (sigma sqrt(T/n))`
    pub j0: f64,
    pub j0_floor: i64,
    /// `j0 - floor(j0)`, in `[0, 1)`.
    pub j0_frac: f64,
}

impl FixedStrikeSetup {
    pub fn new(model: &ModelParams, strike: f64, n: usize) -> Result<Self> {
        if !(strike > 0.0 && strike.is_finite()) {
            return Err(Error::domain(
                "strike",
                format!("must be > 0, got {strike}"),
            ));
        }
        let lat = LatticeParams::new(model, n)?;
        let j0 = (strike / model.s0).ln() / lat.log_u;
        let floor = j0.floor();
        Ok(FixedStrikeSetup {
            strike,
            j0,
            j0_floor: floor as i64,
            j0_frac: j0 - floor,
        })
    }

    /// Whether the strike lies on (or within tolerance of) a lattice level.
    pub fn is_integer_level(&self) -> bool {
        (self.j0 - self.j0.round()).abs() < INTEGER_LEVEL_TOL
    }
}

// ln of Λ_{0,k,m} (1-q)^k q^{m-k}; the reflection factor vanishes for 2k = m + 1.
fn ln_level_zero_weight(lat: &LatticeParams, k: usize, m: usize) -> f64 {
    let shape = (m as f64 + 1.0 - 2.0 * k as f64) / (m as f64 + 1.0 - k as f64);
    ln_binom_pmf(k as u64, m as u64, lat.one_minus_q, lat.q) + shape.ln()
}

// sum_{k=0}^{last} Λ_{0,k,m} (1-q)^k q^{m-k}
fn level_zero_mass(lat: &LatticeParams, m: usize, last: usize) -> f64 {
    (0..=last)
        .map(|k| ln_level_zero_weight(lat, k, m).exp())
        .sum::<CompensatedSum>()
        .value()
}

// e^{-rT (n - m)/n}
fn discount_from(lat: &LatticeParams, m: usize) -> f64 {
    lat.discount_periods(lat.n - m)
}

/// Fixed-strike lookback call on an `n`-period tree.
///
/// When `S0 < K` and the strike sits on a lattice level the formula does not
/// apply and [`Error::IntegerBarrier`] is returned; a neighbouring `n` avoids
/// it.
pub fn price_call_fixed(model: &ModelParams, strike: f64, n: usize) -> Result<f64> {
    if n > FIXED_MAX_N {
        return Err(Error::Capacity {
            what: "fixed-strike lattice sums",
            n,
            limit: FIXED_MAX_N,
        });
    }
    let setup = FixedStrikeSetup::new(model, strike, n)?;
    let lat = LatticeParams::new(model, n)?;
    let lead = lat.p * lat.log_u.exp_m1();

    if model.s0 >= strike {
        let sum: CompensatedSum = (0..n)
            .map(|m| discount_from(&lat, m) * level_zero_mass(&lat, m, m / 2))
            .sum();
        return Ok(model.s0 * lead * sum.value() + (model.s0 - strike) * lat.total_discount);
    }

    if setup.is_integer_level() {
        return Err(Error::IntegerBarrier { j0: setup.j0 });
    }
    let fl = setup.j0_floor as usize;
    let mut acc = CompensatedSum::new();
    // maximum first crosses the strike level at an interior step
    for m in (fl + 1)..n {
        let last = (m - 1 - fl) / 2;
        acc.add(lead * discount_from(&lat, m) * level_zero_mass(&lat, m, last));
    }
    // maximum ends between the strike and the next level up
    if fl < n {
        let partial = lat.p * (lat.u - (setup.j0_frac * lat.log_u).exp());
        for k in 0..=(n - 1 - fl) / 2 {
            let m = fl + 2 * k;
            let weight = ln_binom_pmf(k as u64, m as u64, lat.one_minus_q, lat.q)
                + ((m as f64 + 1.0 - 2.0 * k as f64) / (m as f64 + 1.0 - k as f64)).ln();
            acc.add(partial * discount_from(&lat, m) * weight.exp());
        }
    }
    Ok(model.s0 * acc.value())
}
