//! Reductions of the lattice sums to a handful of binomial distribution
//! function values.
//!
//! Each `φ` has the shape `w1 B(k) - w2 B(k-1)` with weights close to 1 at
//! large `n`; it is evaluated as `(w1 - w2) B(k-1) + w1 P(k)` with `w1 - w2`
//! formed without cancellation. The printed combination also carries a pole
//! `1/(1 - Q)` in two coefficients that cancels between them; [`PhiDecomposition::value`]
//! performs that cancellation analytically so accuracy holds when `Q` is
//! near 1, i.e. when `r` is near `-sigma^2/2`.

use crate::binomial_tail::Binomial;
use crate::error::{Error, Result};
use crate::model::{LatticeParams, ModelParams};
use crate::summation::CompensatedSum;

/// `φ` values and the coefficients that combine them into a node value.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiDecomposition {
    /// Index of the first `φ` (1, 4, 7 or 10).
    pub first: usize,
    pub phis: Vec<f64>,
    pub coefficients: Vec<f64>,
    value: f64,
}

impl PhiDecomposition {
    /// `φ_i` by its conventional index, if part of this decomposition.
    pub fn phi(&self, index: usize) -> Option<f64> {
        index
            .checked_sub(self.first)
            .and_then(|i| self.phis.get(i).copied())
    }

    /// The node value, `sum_i coefficient_i φ_i` with the `1/(1 - Q)` pole
    /// removed.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// `sum_i coefficient_i φ_i` evaluated as printed.
    pub fn direct_value(&self) -> f64 {
        self.phis
            .iter()
            .zip(&self.coefficients)
            .map(|(phi, c)| phi * c)
            .sum::<CompensatedSum>()
            .value()
    }
}

fn require_nonzero_rate(model: &ModelParams) -> Result<()> {
    if model.is_r_zero() {
        return Err(Error::domain(
            "r",
            "the reduced form is singular at r = 0 (1 - Q d vanishes)",
        ));
    }
    Ok(())
}

fn dist(n: usize, p: f64, q: f64) -> Binomial {
    Binomial::with_complement(n as u64, p, q).expect("lattice probabilities lie in (0, 1)")
}

// w1 B(k) - w2 B(k-1) given w1 and w1 - w2
fn two_point(b: &Binomial, k: i64, w1: f64, w1_minus_w2: f64) -> f64 {
    w1_minus_w2 * b.cdf_by_summation(k - 1) + w1 * b.pmf(k)
}

struct Differences {
    one_minus_d: f64,
    u_minus_one: f64,
    /// `u - Q d`
    u_minus_qd: f64,
    /// `Θ = (1 - Q)(1 - Q d)`
    theta: f64,
}

fn differences(lat: &LatticeParams) -> Differences {
    let u_minus_one = lat.log_u.exp_m1();
    Differences {
        one_minus_d: -(-lat.log_u).exp_m1(),
        u_minus_one,
        u_minus_qd: u_minus_one + lat.one_minus_qd,
        theta: -lat.q_ratio_minus_one * lat.one_minus_qd,
    }
}

// 1 + Q + ... + Q^{k-1}
fn geometric(big_q: f64, k: u32) -> f64 {
    (0..k).fold(0.0, |acc, _| acc * big_q + 1.0)
}

struct CallTerms {
    phis: Vec<f64>,
    coefficients: Vec<f64>,
    value: f64,
}

// The three call-type terms on a `steps`-step tree at CDF argument `g`.
// The second and third coefficients carry the extra factors Q^{-k} and
// (Q d)^{-k}, and `far_discount` multiplies the third.
fn call_terms(lat: &LatticeParams, steps: usize, g: i64, far_discount: f64, k: i32) -> CallTerms {
    let big_q = lat.q_ratio;
    let qd = lat.qd();
    let diff = differences(lat);
    let by_q = dist(steps, lat.q, lat.one_minus_q);
    let by_q_mirror = by_q.mirrored();
    let by_p_mirror = dist(steps, lat.one_minus_p, lat.p);
    let q_shift = big_q.powi(-k);
    let qd_shift = qd.powi(-k);

    let phis = vec![
        two_point(&by_q, g, 1.0, -lat.q_ratio_minus_one),
        two_point(&by_q_mirror, g, big_q, lat.q_ratio_minus_one),
        two_point(&by_p_mirror, g, qd, -diff.u_minus_qd),
    ];
    let coefficients = vec![
        big_q * diff.one_minus_d / diff.theta,
        q_shift / lat.q_ratio_minus_one,
        qd_shift * far_discount / lat.one_minus_qd,
    ];

    // With P_{1-q}(g) = Q^e P_q(g), e = steps - 2g, the pole terms of the
    // first two add up to Q P_q(g) (S_{e-k} - d S_{e-k+1}) / (1 - Q d).
    let e = steps as i64 - 2 * g - k as i64;
    debug_assert!(e >= 0);
    let e = e as u32;
    let pole_free = big_q * by_q.pmf(g) * (geometric(big_q, e) - lat.d * geometric(big_q, e + 1))
        / lat.one_minus_qd;
    let value = [
        big_q * diff.one_minus_d / lat.one_minus_qd * by_q.cdf_by_summation(g - 1),
        q_shift * by_q_mirror.cdf_by_summation(g - 1),
        pole_free,
        coefficients[2] * phis[2],
    ]
    .into_iter()
    .sum::<CompensatedSum>()
    .value();
    CallTerms {
        phis,
        coefficients,
        value,
    }
}

/// `φ1..φ3` of the call price.
pub fn call_decomposition(model: &ModelParams, n: usize) -> Result<PhiDecomposition> {
    require_nonzero_rate(model)?;
    let lat = LatticeParams::new(model, n)?;
    let terms = call_terms(&lat, n, (n / 2) as i64, lat.total_discount, 0);
    Ok(PhiDecomposition {
        first: 1,
        phis: terms.phis,
        coefficients: terms.coefficients,
        value: terms.value,
    })
}

/// `φ4..φ6` of the put price.
pub fn put_decomposition(model: &ModelParams, n: usize) -> Result<PhiDecomposition> {
    require_nonzero_rate(model)?;
    let lat = LatticeParams::new(model, n)?;
    let h = (n / 2) as i64;
    let big_q = lat.q_ratio;
    let diff = differences(&lat);
    let by_q = dist(n, lat.q, lat.one_minus_q);
    let by_q_mirror = by_q.mirrored();
    let by_p = dist(n, lat.p, lat.one_minus_p);
    // Q - u = -u (1 - Q d)
    let u_minus_q = lat.u * lat.one_minus_qd;
    let theta_star = -u_minus_q * lat.q_ratio_minus_one;
    let phis = vec![
        two_point(&by_q_mirror, h, big_q, lat.q_ratio_minus_one),
        two_point(&by_q, h, 1.0, -lat.q_ratio_minus_one),
        two_point(&by_p, h, lat.u, diff.u_minus_qd),
    ];
    let coefficients = vec![
        diff.u_minus_one / theta_star,
        1.0 / lat.q_ratio_minus_one,
        lat.total_discount / u_minus_q,
    ];

    // pole terms of the first two: P_q(h) ((u - 1) S_{e+1} + 1) / (Q - u)
    let e = (n as i64 - 2 * h) as u32;
    let pole_free = -by_q.pmf(h) * (diff.u_minus_one * geometric(big_q, e + 1) + 1.0) / u_minus_q;
    let value = [
        -diff.u_minus_one / u_minus_q * by_q_mirror.cdf_by_summation(h - 1),
        -by_q.cdf_by_summation(h - 1),
        pole_free,
        coefficients[2] * phis[2],
    ]
    .into_iter()
    .sum::<CompensatedSum>()
    .value();
    Ok(PhiDecomposition {
        first: 4,
        phis,
        coefficients,
        value,
    })
}

/// `φ7..φ9` of `V_n(0,1)`, the call reduction on `n - 1` steps.
pub fn v01_decomposition(model: &ModelParams, n: usize) -> Result<PhiDecomposition> {
    require_nonzero_rate(model)?;
    if n < 2 {
        return Err(Error::domain("n", "node values need at least two periods"));
    }
    let lat = LatticeParams::new(model, n)?;
    let steps = n - 1;
    let terms = call_terms(
        &lat,
        steps,
        (steps / 2) as i64,
        lat.discount_periods(steps),
        0,
    );
    Ok(PhiDecomposition {
        first: 7,
        phis: terms.phis,
        coefficients: terms.coefficients,
        value: terms.value,
    })
}

/// `φ10..φ14` of `V_n(1,1)`.
pub fn v11_decomposition(model: &ModelParams, n: usize) -> Result<PhiDecomposition> {
    require_nonzero_rate(model)?;
    if n < 2 {
        return Err(Error::domain("n", "node values need at least two periods"));
    }
    let lat = LatticeParams::new(model, n)?;
    let steps = n - 1;
    let first_tail = (n - 1 - n / 2) as i64;

    // B*(k) - R^{-2} B*(k+2) = (1 - R^{-2}) B*(k+2) + P(k+1) + P(k+2),
    // B* the strict upper tail
    let reflected = |b: &Binomial, ratio: f64, ratio_minus_one: f64| {
        let factor = ratio_minus_one * (ratio + 1.0) / (ratio * ratio);
        factor * b.tail_by_summation(first_tail + 2) + b.pmf(first_tail) + b.pmf(first_tail + 1)
    };
    let by_q = dist(steps, lat.q, lat.one_minus_q);
    let by_p = dist(steps, lat.p, lat.one_minus_p);
    let phi10 = reflected(&by_q, lat.q_ratio, lat.q_ratio_minus_one);
    let phi11 = reflected(&by_p, lat.p_ratio, lat.p_ratio_minus_one);
    // p / q = e^{rT/n} / u
    let p_over_q = (lat.model.r * lat.model.t / n as f64 - lat.log_u).exp();
    let c11 = -p_over_q * lat.total_discount;

    let far = lat.discount_periods(steps);
    let terms = call_terms(&lat, steps, (steps / 2) as i64 - 1, far, 2);
    let mut phis = vec![phi10, phi11];
    phis.extend(terms.phis);
    let mut coefficients = vec![1.0, c11];
    coefficients.extend(terms.coefficients);
    let value = [phi10, c11 * phi11, terms.value]
        .into_iter()
        .sum::<CompensatedSum>()
        .value();
    Ok(PhiDecomposition {
        first: 10,
        phis,
        coefficients,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sums() {
        assert_eq!(geometric(3.0, 0), 0.0);
        assert_eq!(geometric(3.0, 1), 1.0);
        assert_eq!(geometric(3.0, 3), 13.0);
    }

    #[test]
    fn pole_free_value_matches_printed_combination() {
        let m = ModelParams::new(80.0, 0.08, 0.2, 1.0).unwrap();
        for n in [2, 3, 10, 11, 250] {
            for d in [
                call_decomposition(&m, n).unwrap(),
                put_decomposition(&m, n).unwrap(),
                v01_decomposition(&m, n).unwrap(),
                v11_decomposition(&m, n).unwrap(),
            ] {
                assert!(
                    (d.value() - d.direct_value()).abs() < 1e-12,
                    "n={n} first={}",
                    d.first
                );
                assert_eq!(d.phis.len(), d.coefficients.len());
                assert_eq!(d.phi(d.first), Some(d.phis[0]));
                assert_eq!(d.phi(d.first - 1), None);
            }
        }
    }
}
