//! Coefficients of the expansion `Π_n = Π_BS + Π1/sqrt(n) + Π2/n + ...`
//! of lattice prices and of the lattice delta.

use crate::closed_form::{bs_call, bs_delta, bs_put, BsInputs};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::special::{norm_cdf, norm_pdf};

/// Which quantity an expansion describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    Call,
    Put,
    Delta,
}

/// Leading expansion coefficients of a lattice quantity in powers of
/// `n^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceExpansion {
    pub kind: ExpansionKind,
    /// Continuous-time limit.
    pub pi0: f64,
    /// Coefficient of `n^{-1/2}`.
    pub pi1: f64,
    /// Coefficient of `n^{-1}`; not available for the delta or at `r = 0`.
    pub pi2: Option<f64>,
    pub r_zero: bool,
}

/// Expansion of the call price. At `r = 0` only `pi1` is known.
pub fn call_expansion(model: &ModelParams) -> Result<PriceExpansion> {
    let c = bs_call(model)?;
    let vol = model.sigma_sqrt_t();
    let pi1 = 0.5 * vol * (c - model.s0);
    let pi2 = if model.is_r_zero() {
        None
    } else {
        let b = BsInputs::new(model)?;
        let bracket = norm_cdf(b.a1) - b.disc * norm_cdf(b.a2) - 1.5;
        Some(
            vol * vol / 12.0 * (c + 2.0 * model.s0 * bracket)
                + model.s0 * 0.5 * vol * norm_pdf(b.a1),
        )
    };
    Ok(PriceExpansion {
        kind: ExpansionKind::Call,
        pi0: c,
        pi1,
        pi2,
        r_zero: model.is_r_zero(),
    })
}

/// Expansion of the put price. At `r = 0` only `pi1` is known.
pub fn put_expansion(model: &ModelParams) -> Result<PriceExpansion> {
    let p = bs_put(model)?;
    let vol = model.sigma_sqrt_t();
    let pi1 = -0.5 * vol * (p + model.s0);
    let pi2 = if model.is_r_zero() {
        None
    } else {
        let b = BsInputs::new(model)?;
        let bracket = norm_cdf(b.a1) - b.disc * (norm_cdf(b.a2) - 1.0) + 0.5;
        Some(
            vol * vol / 12.0 * (p + 2.0 * model.s0 * bracket)
                + model.s0 * 0.5 * vol * norm_pdf(b.a1),
        )
    };
    Ok(PriceExpansion {
        kind: ExpansionKind::Put,
        pi0: p,
        pi1,
        pi2,
        r_zero: model.is_r_zero(),
    })
}

/// Expansion of the lattice delta; the next term is `O(1/n)`.
pub fn delta_expansion(model: &ModelParams) -> Result<PriceExpansion> {
    let b = BsInputs::new(model)?;
    let vr =
        b.vr.ok_or_else(|| Error::domain("r", "the delta expansion is only available for r != 0"))?;
    let pi1 = -(vr * b.a1 * norm_cdf(-b.a1)
        - b.disc * (1.0 - vr) * b.a2 * norm_cdf(b.a2)
        - norm_pdf(b.a1));
    Ok(PriceExpansion {
        kind: ExpansionKind::Delta,
        pi0: bs_delta(model)?,
        pi1,
        pi2: None,
        r_zero: false,
    })
}

/// `pi0 + pi1/sqrt(n) + pi2/n`, a missing `pi2` counting as zero.
pub fn approx_price(expansion: &PriceExpansion, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", "number of periods must be at least 1"));
    }
    let nf = n as f64;
    Ok(expansion.pi0 + expansion.pi1 / nf.sqrt() + expansion.pi2.unwrap_or(0.0) / nf)
}

/// Least-squares slope of `ln|residual|` against `ln n`.
pub fn fit_residual_order(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 4 {
        return Err(Error::DegenerateInput(format!(
            "need at least 4 points, got {}",
            series.len()
        )));
    }
    let increasing = series.windows(2).all(|w| w[1].0 > w[0].0);
    if !increasing || series[0].0 <= 0.0 {
        return Err(Error::DegenerateInput(
            "n must be positive and strictly increasing".into(),
        ));
    }
    if series.iter().any(|&(_, r)| r == 0.0 || !r.is_finite()) {
        return Err(Error::DegenerateInput(
            "residuals must be finite and nonzero".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .map(|&(n, r)| (n.ln(), r.abs().ln()))
        .collect();
    let count = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `(α, γ)` with `p_n = 1/2 + α/sqrt(n) + γ/n^{3/2} + O(n^{-5/2})`.
pub fn p_expansion_coefficients(model: &ModelParams) -> (f64, f64) {
    let (r, s, t) = (model.r, model.sigma, model.t);
    let alpha = (2.0 * r - s * s) / (4.0 * s) * t.sqrt();
    let gamma = (12.0 * r * r - 4.0 * r * s * s + s.powi(4)) / (48.0 * s) * t.powf(1.5);
    (alpha, gamma)
}

/// `(α, γ)` with `q_n = 1/2 + α/sqrt(n) + γ/n^{3/2} + O(n^{-5/2})`.
pub fn q_expansion_coefficients(model: &ModelParams) -> (f64, f64) {
    let (r, s, t) = (model.r, model.sigma, model.t);
    let alpha = (2.0 * r + s * s) / (4.0 * s) * t.sqrt();
    let gamma = -(12.0 * r * r + 4.0 * r * s * s + s.powi(4)) / (48.0 * s) * t.powf(1.5);
    (alpha, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_power_law() {
        let series: Vec<(f64, f64)> = [100.0, 400.0, 1600.0, 6400.0, 25600.0]
            .iter()
            .map(|&n: &f64| (n, -3.7 * n.powf(-1.5)))
            .collect();
        assert!((fit_residual_order(&series).unwrap() + 1.5).abs() < 1e-6);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let ok = [(1.0, 1.0), (2.0, 0.5), (3.0, 0.3), (4.0, 0.25)];
        assert!(fit_residual_order(&ok[..3]).is_err());
        let mut zero = ok;
        zero[2].1 = 0.0;
        assert!(matches!(
            fit_residual_order(&zero),
            Err(Error::DegenerateInput(_))
        ));
        let mut unsorted = ok;
        unsorted.swap(0, 1);
        assert!(fit_residual_order(&unsorted).is_err());
    }

    #[test]
    fn approx_price_limits() {
        let e = PriceExpansion {
            kind: ExpansionKind::Call,
            pi0: 2.0,
            pi1: -1.0,
            pi2: None,
            r_zero: true,
        };
        assert_eq!(approx_price(&e, 4).unwrap(), 1.5);
        assert!((approx_price(&e, 1 << 40).unwrap() - 2.0).abs() < 1e-6);
        assert!(approx_price(&e, 0).is_err());
    }

    #[test]
    fn delta_expansion_needs_nonzero_rate() {
        let m = ModelParams::new(80.0, 0.0, 0.2, 1.0).unwrap();
        assert!(delta_expansion(&m).is_err());
    }

    #[test]
    fn zero_a1_drops_the_first_term() {
        // r = -sigma^2/2 gives a1 = 0
        let m = ModelParams::new(80.0, -0.02, 0.2, 1.0).unwrap();
        let b = BsInputs::new(&m).unwrap();
        assert!(b.a1.abs() < 1e-16);
        let e = delta_expansion(&m).unwrap();
        let vr = b.vr.unwrap();
        let want = b.disc * (1.0 - vr) * b.a2 * norm_cdf(b.a2) + norm_pdf(b.a1);
        assert!((e.pi1 - want).abs() < 1e-15);
    }
}
