//! Market inputs and the per-`n` CRR lattice quantities shared by every pricer.
//!
//! Besides the textbook fields (`u`, `d`, `p`, `q`, ...) the lattice also keeps
//! a handful of derived differences such as `q - 1/2` and `1 - Q d`. At large
//! `n` these are small differences of O(1) numbers, so they are formed from
//! `expm1`/`sinh` expressions instead of subtracting the rounded fields.

use crate::error::{Error, Result};

/// Contract and market inputs: spot, continuously compounded rate,
/// volatility and time to maturity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub s0: f64,
    pub r: f64,
    pub sigma: f64,
    pub t: f64,
}

impl ModelParams {
    /// Builds and validates a model in one step.
    pub fn new(s0: f64, r: f64, sigma: f64, t: f64) -> Result<Self> {
        ModelParams { s0, r, sigma, t }.validate()
    }

    /// Returns `self` if every field lies in its domain.
    pub fn validate(self) -> Result<Self> {
        check_positive("s0", self.s0)?;
        check_positive("sigma", self.sigma)?;
        check_positive("t", self.t)?;
        if !self.r.is_finite() {
            return Err(Error::domain(
                "r",
                format!("must be finite, got {}", self.r),
            ));
        }
        Ok(self)
    }

    /// `true` exactly when `r == 0.0`; no tolerance is applied.
    pub fn is_r_zero(&self) -> bool {
        self.r == 0.0
    }

    /// Same contract with a different spot.
    pub fn with_s0(self, s0: f64) -> Self {
        ModelParams { s0, ..self }
    }

    /// Same contract with a different rate.
    pub fn with_r(self, r: f64) -> Self {
        ModelParams { r, ..self }
    }

    /// `sigma * sqrt(T)`.
    pub fn sigma_sqrt_t(&self) -> f64 {
        self.sigma * self.t.sqrt()
    }

    /// `e^{-rT}`.
    pub fn discount(&self) -> f64 {
        (-self.r * self.t).exp()
    }
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::domain(field, format!("must be finite, got {value}")));
    }
    if value <= 0.0 {
        return Err(Error::domain(field, format!("must be > 0, got {value}")));
    }
    Ok(())
}

/// Quantities of the `n`-period CRR tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub model: ModelParams,
    /// Number of periods.
    pub n: usize,
    /// Up factor `e^{sigma sqrt(T/n)}`.
    pub u: f64,
    /// Down factor `1/u`.
    pub d: f64,
    /// Risk-neutral up probability.
    pub p: f64,
    /// Up probability under the stock numeraire, `p u e^{-rT/n}`.
    pub q: f64,
    /// `Q_n = q / (1 - q)`.
    pub q_ratio: f64,
    /// `e^{-rT/n}`.
    pub step_discount: f64,
    /// `e^{-rT}`.
    pub total_discount: f64,

    /// `sigma sqrt(T/n)`, i.e. `ln u`.
    pub log_u: f64,
    /// `1 - p`.
    pub one_minus_p: f64,
    /// `1 - q`.
    pub one_minus_q: f64,
    /// `p - 1/2`.
    pub p_dev: f64,
    /// `q - 1/2`.
    pub q_dev: f64,
    /// `Q_n - 1`.
    pub q_ratio_minus_one: f64,
    /// `1 - Q_n d_n`; exactly zero when `r == 0`.
    pub one_minus_qd: f64,
    /// `P_n = p / (1 - p)`.
    pub p_ratio: f64,
    /// `P_n - 1`.
    pub p_ratio_minus_one: f64,
}

impl LatticeParams {
    /// Builds the `n`-period lattice for a validated model.
    pub fn new(model: &ModelParams, n: usize) -> Result<Self> {
        let model = model.validate()?;
        if n == 0 {
            return Err(Error::domain("n", "number of periods must be at least 1"));
        }
        let dt = model.t / n as f64;
        let s = model.sigma * dt.sqrt();
        let x = model.r * dt;

        let u = s.exp();
        let d = (-s).exp();
        let two_sinh = 2.0 * s.sinh();
        let half_sinh = (0.5 * s).sinh();
        let cosh_minus_one = 2.0 * half_sinh * half_sinh;

        let p = (x.exp_m1() - (-s).exp_m1()) / two_sinh;
        let one_minus_p = (s.exp_m1() - x.exp_m1()) / two_sinh;
        if !(p > 0.0 && p < 1.0 && one_minus_p > 0.0) {
            return Err(Error::domain(
                "n",
                format!("risk-neutral probability p = {p} is outside (0, 1); e^(rT/n) must lie strictly between d and u"),
            ));
        }
        let step_discount = (-x).exp();
        let q = p * u * step_discount;
        let one_minus_q = ((-x).exp_m1() - (-s).exp_m1()) / two_sinh;
        if !(q > 0.0 && q < 1.0 && one_minus_q > 0.0) {
            return Err(Error::domain(
                "n",
                format!("shifted probability q = {q} is outside (0, 1)"),
            ));
        }

        let p_dev = (x.exp_m1() - cosh_minus_one) / two_sinh;
        let q_dev = (cosh_minus_one - (-x).exp_m1()) / two_sinh;
        let q_ratio = q / one_minus_q;
        let q_ratio_minus_one = 2.0 * q_dev / one_minus_q;
        // e^{-x} - d, the denominator of Q d
        let e_minus_d = (-x).exp_m1() - (-s).exp_m1();
        let one_minus_qd = (1.0 + d) * (-x).exp_m1() / e_minus_d;
        let p_ratio = p / one_minus_p;
        let p_ratio_minus_one = 2.0 * p_dev / one_minus_p;

        Ok(LatticeParams {
            model,
            n,
            u,
            d,
            p,
            q,
            q_ratio,
            step_discount,
            total_discount: model.discount(),
            log_u: s,
            one_minus_p,
            one_minus_q,
            p_dev,
            q_dev,
            q_ratio_minus_one,
            one_minus_qd,
            p_ratio,
            p_ratio_minus_one,
        })
    }

    /// `Q_n d_n`.
    pub fn qd(&self) -> f64 {
        1.0 - self.one_minus_qd
    }

    /// `ln Q_n`.
    pub fn ln_q_ratio(&self) -> f64 {
        self.q_ratio_minus_one.ln_1p()
    }

    /// `e^{-rT m / n}`, the discount over `m` periods.
    pub fn discount_periods(&self, m: usize) -> f64 {
        (-self.model.r * self.model.t * m as f64 / self.n as f64).exp()
    }
}

/// Validates the model and returns it unchanged.
pub fn validate(model: ModelParams) -> Result<ModelParams> {
    model.validate()
}

/// Builds the `n`-period lattice quantities.
pub fn build_lattice(model: &ModelParams, n: usize) -> Result<LatticeParams> {
    LatticeParams::new(model, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_model() -> ModelParams {
        ModelParams::new(80.0, 0.08, 0.2, 1.0).unwrap()
    }

    #[test]
    fn accepts_reference_models() {
        assert!(ModelParams::new(80.0, 0.08, 0.2, 1.0).is_ok());
        let m = ModelParams::new(80.0, 0.0, 0.2, 1.0).unwrap();
        assert!(m.is_r_zero());
        assert!(ModelParams::new(80.0, -0.05, 0.2, 1.0).is_ok());
    }

    #[test]
    fn rejects_bad_fields() {
        let cases = [
            (
                ModelParams {
                    s0: 80.0,
                    r: 0.08,
                    sigma: -0.2,
                    t: 1.0,
                },
                "sigma",
            ),
            (
                ModelParams {
                    s0: 0.0,
                    r: 0.08,
                    sigma: 0.2,
                    t: 1.0,
                },
                "s0",
            ),
            (
                ModelParams {
                    s0: 80.0,
                    r: 0.08,
                    sigma: 0.2,
                    t: 0.0,
                },
                "t",
            ),
            (
                ModelParams {
                    s0: 80.0,
                    r: f64::NAN,
                    sigma: 0.2,
                    t: 1.0,
                },
                "r",
            ),
            (
                ModelParams {
                    s0: f64::INFINITY,
                    r: 0.0,
                    sigma: 0.2,
                    t: 1.0,
                },
                "s0",
            ),
        ];
        for (model, expected) in cases {
            match model.validate() {
                Err(Error::Domain { field, .. }) => assert_eq!(field, expected),
                other => panic!("expected domain error on {expected}, got {other:?}"),
            }
        }
    }

    #[test]
    fn up_and_down_factors() {
        let lat = LatticeParams::new(&ModelParams::new(80.0, 0.08, 0.2, 1.0).unwrap(), 4).unwrap();
        assert_eq!(lat.u, 0.1f64.exp());
        assert_eq!(lat.d, (-0.1f64).exp());
        assert!((lat.u * lat.d - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn one_period_golden_values() {
        // (e^{0.08} - e^{-0.2}) / (e^{0.2} - e^{-0.2}) and q = p e^{0.12},
        // evaluated with 40-digit arithmetic.
        let lat = LatticeParams::new(&base_model(), 1).unwrap();
        let p = 0.6570020047531713_f64;
        let q = 0.7407676918405387_f64;
        assert!((lat.p - p).abs() < 2e-16, "p = {}", lat.p);
        assert!((lat.q - q).abs() < 2e-16, "q = {}", lat.q);
        assert!((lat.q - lat.p * 0.12f64.exp()).abs() < 2e-16);
    }

    #[test]
    fn zero_rate_gives_unit_qd() {
        for n in [1, 2, 7, 100, 12_345, 1_000_000] {
            let lat =
                LatticeParams::new(&ModelParams::new(80.0, 0.0, 0.2, 1.0).unwrap(), n).unwrap();
            assert_eq!(lat.one_minus_qd, 0.0);
            assert!((lat.q_ratio * lat.d - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn derived_differences_match_direct_ones() {
        for &(r, sigma) in &[(0.08, 0.2), (-0.02, 0.6), (0.0, 0.05)] {
            let m = ModelParams::new(100.0, r, sigma, 1.5).unwrap();
            for n in [1, 3, 10, 200] {
                let lat = LatticeParams::new(&m, n).unwrap();
                assert!((lat.p + lat.one_minus_p - 1.0).abs() < 1e-15);
                assert!((lat.q + lat.one_minus_q - 1.0).abs() < 1e-15);
                assert!((lat.p_dev - (lat.p - 0.5)).abs() < 1e-15);
                assert!((lat.q_dev - (lat.q - 0.5)).abs() < 1e-15);
                assert!((lat.q_ratio_minus_one - (lat.q_ratio - 1.0)).abs() < 1e-13);
                assert!((lat.one_minus_qd - (1.0 - lat.q_ratio * lat.d)).abs() < 1e-13);
                assert!(lat.q_ratio != 1.0);
            }
        }
    }

    #[test]
    fn rejects_p_outside_unit_interval() {
        // e^{rT/n} >= u when r T / n >= sigma sqrt(T/n)
        let m = ModelParams::new(100.0, 2.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            LatticeParams::new(&m, 1),
            Err(Error::Domain { .. })
        ));
        assert!(LatticeParams::new(&m, 1000).is_ok());
        assert!(LatticeParams::new(&base_model(), 0).is_err());
    }
}
