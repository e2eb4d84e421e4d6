//! Continuous-time (Black-Scholes) prices of floating-strike lookbacks.

use crate::error::Result;
use crate::model::ModelParams;
use crate::special::{norm_cdf, norm_pdf};

/// Shared quantities of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsInputs {
    /// `(r/sigma + sigma/2) sqrt(T)`
    pub a1: f64,
    /// `(r/sigma - sigma/2) sqrt(T)`
    pub a2: f64,
    /// `sigma^2 / (2r)`; `None` at `r = 0`.
    pub vr: Option<f64>,
    /// `e^{-rT}`
    pub disc: f64,
}

impl BsInputs {
    pub fn new(model: &ModelParams) -> Result<Self> {
        let m = model.validate()?;
        let sqrt_t = m.t.sqrt();
        let drift = m.r / m.sigma;
        let half_vol = 0.5 * m.sigma;
        Ok(BsInputs {
            a1: (drift + half_vol) * sqrt_t,
            a2: (drift - half_vol) * sqrt_t,
            vr: (!m.is_r_zero()).then(|| m.sigma * m.sigma / (2.0 * m.r)),
            disc: m.discount(),
        })
    }
}

// (1 + vr) Phi(a1) - e^{-rT} (1 - vr) Phi(a2) - vr, the call per unit spot
fn call_bracket(b: &BsInputs, vr: f64) -> f64 {
    (1.0 + vr) * norm_cdf(b.a1) - b.disc * (1.0 - vr) * norm_cdf(b.a2) - vr
}

/// Floating-strike call. At `r = 0` this is [`bs_call_r0`].
pub fn bs_call(model: &ModelParams) -> Result<f64> {
    let b = BsInputs::new(model)?;
    match b.vr {
        Some(vr) => Ok(model.s0 * call_bracket(&b, vr)),
        None => bs_call_r0(model),
    }
}

/// Floating-strike put, `C - S0 (1 - e^{-rT})(1 - sigma^2/2r)`. At `r = 0`
/// this is [`bs_put_r0`].
pub fn bs_put(model: &ModelParams) -> Result<f64> {
    let b = BsInputs::new(model)?;
    match b.vr {
        Some(vr) => {
            let one_minus_disc = -(-model.r * model.t).exp_m1();
            Ok(bs_call(model)? - model.s0 * one_minus_disc * (1.0 - vr))
        }
        None => bs_put_r0(model),
    }
}

/// Zero-rate call, the `r -> 0` limit of [`bs_call`]; ignores `model.r`.
pub fn bs_call_r0(model: &ModelParams) -> Result<f64> {
    let m = model.validate()?;
    let v = m.sigma_sqrt_t();
    let half = 0.5 * v;
    Ok(m.s0 * (v * norm_pdf(half) + norm_cdf(half) - norm_cdf(-half) * (1.0 + 0.5 * v * v)))
}

/// Zero-rate put, `C + S0 sigma^2 T / 2`; ignores `model.r`.
pub fn bs_put_r0(model: &ModelParams) -> Result<f64> {
    let v = model.sigma_sqrt_t();
    Ok(bs_call_r0(model)? + 0.5 * model.s0 * v * v)
}

/// Delta of the floating-strike call. The price is linear in the spot, so
/// this is the call price per unit spot, at every rate.
pub fn bs_delta(model: &ModelParams) -> Result<f64> {
    let b = BsInputs::new(model)?;
    match b.vr {
        Some(vr) => Ok(call_bracket(&b, vr)),
        None => Ok(bs_call_r0(model)? / model.s0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ModelParams {
        ModelParams::new(80.0, 0.08, 0.2, 1.0).unwrap()
    }

    #[test]
    fn inputs() {
        let b = BsInputs::new(&model()).unwrap();
        assert!((b.a1 - 0.5).abs() < 1e-15);
        assert!((b.a2 - 0.3).abs() < 1e-15);
        assert!((b.a1 - b.a2 - 0.2).abs() < 1e-15);
        assert!((b.vr.unwrap() - 0.25).abs() < 1e-15);
        assert!(BsInputs::new(&model().with_r(0.0)).unwrap().vr.is_none());
    }

    #[test]
    fn delta_times_spot_is_price() {
        for m in [model(), model().with_r(-0.03), model().with_r(0.0)] {
            let c = bs_call(&m).unwrap();
            assert!((bs_delta(&m).unwrap() * m.s0 - c).abs() <= 1e-14 * c);
        }
    }

    #[test]
    fn zero_rate_routing() {
        let m = model().with_r(0.0);
        assert_eq!(bs_call(&m).unwrap(), bs_call_r0(&m).unwrap());
        assert_eq!(bs_put(&m).unwrap(), bs_put_r0(&m).unwrap());
    }

    #[test]
    fn zero_rate_put_offset() {
        let m = model().with_r(0.0);
        let diff = bs_put_r0(&m).unwrap() - bs_call_r0(&m).unwrap();
        assert!((diff - 1.6).abs() < 1e-13);
    }
}
