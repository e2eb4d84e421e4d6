//! Binomial distribution functions that stay accurate for `n` up to `10^6`,
//! and the normal-based tail expansions used to analyse the lattice prices.
//!
//! The cumulative distribution function goes through the regularized
//! incomplete beta function; a direct summation of saddle-point
//! probabilities backs it up for small `n` and whenever the continued
//! fraction runs out of iterations.

use crate::error::{Error, Result};
use crate::special::{self, incomplete_beta_pq, norm_cdf, norm_pdf};
use crate::summation::CompensatedSum;

/// `X ~ Binomial(n, p)`, carrying `1 - p` separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binomial {
    n: u64,
    p: f64,
    q: f64,
}

/// Below this size the CDF is summed directly.
pub const SUMMATION_MAX_N: u64 = 1_000;

impl Binomial {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        Self::with_complement(n, p, 1.0 - p)
    }

    /// Uses the supplied `q` as `1 - p`; `p + q` must be 1 up to rounding.
    pub fn with_complement(n: u64, p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) || !p.is_finite() {
            return Err(Error::domain("p", format!("must lie in (0, 1), got {p}")));
        }
        if !(q > 0.0 && q < 1.0) || (p + q - 1.0).abs() > 1e-12 {
            return Err(Error::domain(
                "q",
                format!("must equal 1 - p, got {q} for p = {p}"),
            ));
        }
        Ok(Binomial { n, p, q })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Distribution of `n - X`.
    pub fn mirrored(&self) -> Self {
        Binomial {
            n: self.n,
            p: self.q,
            q: self.p,
        }
    }

    pub fn pmf(&self, k: i64) -> f64 {
        if k < 0 || k as u64 > self.n {
            return 0.0;
        }
        special::binom_pmf(k as u64, self.n, self.p, self.q)
    }

    pub fn ln_pmf(&self, k: i64) -> f64 {
        if k < 0 || k as u64 > self.n {
            return f64::NEG_INFINITY;
        }
        special::ln_binom_pmf(k as u64, self.n, self.p, self.q)
    }

    /// `P(X <= k)`.
    pub fn cdf(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        if k as u64 >= self.n {
            return 1.0;
        }
        let k = k as u64;
        if self.n > SUMMATION_MAX_N {
            // P(X <= k) = I_{1-p}(n - k, k + 1)
            if let Some(v) = incomplete_beta_pq(self.n - k, k + 1, self.q, self.p) {
                return v;
            }
        }
        self.cdf_by_summation(k as i64)
    }

    /// `P(X >= j)`.
    pub fn tail(&self, j: i64) -> f64 {
        if j <= 0 {
            return 1.0;
        }
        if j as u64 > self.n {
            return 0.0;
        }
        let j = j as u64;
        if self.n > SUMMATION_MAX_N {
            // P(X >= j) = I_p(j, n - j + 1)
            if let Some(v) = incomplete_beta_pq(j, self.n - j + 1, self.p, self.q) {
                return v;
            }
        }
        self.tail_by_summation(j as i64)
    }

    /// `P(X <= k)` by summing probabilities from `k` outwards, away from
    /// the mode. Independent of the continued fraction.
    pub fn cdf_by_summation(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        if k as u64 >= self.n {
            return 1.0;
        }
        let mean = self.n as f64 * self.p;
        if (k as f64) <= mean {
            self.sum_downward(k as u64)
        } else {
            1.0 - self.sum_upward(k as u64 + 1)
        }
    }

    /// `P(X >= j)` by direct summation; see [`Binomial::cdf_by_summation`].
    pub fn tail_by_summation(&self, j: i64) -> f64 {
        if j <= 0 {
            return 1.0;
        }
        if j as u64 > self.n {
            return 0.0;
        }
        let mean = self.n as f64 * self.p;
        if (j as f64) > mean {
            self.sum_upward(j as u64)
        } else {
            1.0 - self.sum_downward(j as u64 - 1)
        }
    }

    // sum_{i <= k} P(X = i); terms fall off monotonically below the mode
    fn sum_downward(&self, k: u64) -> f64 {
        let mut acc = CompensatedSum::new();
        for i in (0..=k).rev() {
            let term = self.pmf(i as i64);
            acc.add(term);
            if term < acc.value() * 1e-18 {
                break;
            }
        }
        acc.value()
    }

    // sum_{i >= j} P(X = i)
    fn sum_upward(&self, j: u64) -> f64 {
        let mut acc = CompensatedSum::new();
        for i in j..=self.n {
            let term = self.pmf(i as i64);
            acc.add(term);
            if term < acc.value() * 1e-18 {
                break;
            }
        }
        acc.value()
    }
}

/// `P(X <= k)` for `X ~ Binomial(n, p)`.
pub fn binom_cdf(n: u64, p: f64, k: i64) -> Result<f64> {
    Ok(Binomial::new(n, p)?.cdf(k))
}

/// `P(X >= j)` for `X ~ Binomial(n, p)`.
pub fn binom_tail(n: u64, p: f64, j: i64) -> Result<f64> {
    Ok(Binomial::new(n, p)?.tail(j))
}

/// Expansion coefficients of a probability sequence
/// `p_n = 1/2 + alpha/sqrt(n) + beta/n + gamma/n^{3/2} + delta/n^2 + ...`
/// and of a threshold sequence
/// `j_n = n/2 + a sqrt(n) + 1/2 + b_n + c/sqrt(n) + d/n + ...`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TailExpansionInput {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub a: f64,
    /// Value of the bounded sequence `b_n` at the `n` of interest.
    pub b_n: f64,
    pub c: f64,
    pub d: f64,
}

impl TailExpansionInput {
    /// The family with `beta = delta = a = c = d = 0`.
    pub fn restricted(alpha: f64, gamma: f64, b_n: f64) -> Self {
        TailExpansionInput {
            alpha,
            gamma,
            b_n,
            ..Default::default()
        }
    }
}

/// Coefficients of the tail expansion
/// `Phi(A) + phi(A) (B/sqrt(n) + (C0 - C2 B^2)/n + (D0 - D1 B - D3 B^3)/n^{3/2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailExpansionTerms {
    /// `A`
    pub a: f64,
    /// `B_n`
    pub b_n: f64,
    pub c0: f64,
    pub c2: f64,
    pub d0: f64,
    pub d1: f64,
    pub d3: f64,
}

/// Expansion coefficients for `sum_{k >= j_n} C(n,k) p_n^k (1-p_n)^{n-k}`.
pub fn lemma1_terms(input: &TailExpansionInput) -> TailExpansionTerms {
    let TailExpansionInput {
        alpha,
        beta,
        gamma,
        delta,
        a,
        b_n,
        c,
        d,
    } = *input;
    let big_a = 2.0 * (alpha - a);
    let a2 = big_a * big_a;
    TailExpansionTerms {
        a: big_a,
        b_n: 2.0 * (beta - b_n),
        c0: 2.0 * (alpha * alpha * big_a + gamma - c)
            + (2.0 * alpha / 3.0 - big_a / 12.0) * (1.0 - a2),
        c2: big_a / 2.0,
        d0: 2.0 * (2.0 * alpha * beta * big_a + delta - d) + 2.0 * (1.0 - a2) * beta / 3.0,
        d1: (1.0 - 4.0 * a2 + a2 * a2) / 12.0
            - 2.0 * alpha * (alpha - big_a - alpha * a2 + a2 * big_a / 3.0)
            + 2.0 * big_a * (gamma - c),
        d3: (1.0 - a2) / 6.0,
    }
}

/// Evaluates the tail expansion at `n`; error is `O(n^{-2})`.
pub fn lemma1_tail_approx(terms: &TailExpansionTerms, n: f64) -> f64 {
    let TailExpansionTerms {
        a,
        b_n,
        c0,
        c2,
        d0,
        d1,
        d3,
    } = *terms;
    let sqrt_n = n.sqrt();
    let correction = b_n / sqrt_n
        + (c0 - c2 * b_n * b_n) / n
        + (d0 - d1 * b_n - d3 * b_n * b_n * b_n) / (n * sqrt_n);
    norm_cdf(a) + norm_pdf(a) * correction
}

/// Normal approximation with skewness and kurtosis corrections for
/// `sum_{k >= j_n} C(n,k) p_n^k (1-p_n)^{n-k}`, valid for `p_n` near 1/2.
pub fn lemma2_tail_approx(n: u64, p_n: f64, j_n: f64) -> Result<f64> {
    if !(p_n > 0.0 && p_n < 1.0) {
        return Err(Error::domain(
            "p_n",
            format!("must lie in (0, 1), got {p_n}"),
        ));
    }
    let nf = n as f64;
    if !(0.0..=nf + 1.0).contains(&j_n) {
        return Err(Error::domain(
            "j_n",
            format!("must lie in [0, n + 1], got {j_n}"),
        ));
    }
    let spread = (p_n * (1.0 - p_n)).sqrt();
    let xi = (j_n - nf * p_n - 0.5) / (nf.sqrt() * spread);
    let density = norm_pdf(xi);
    let one_minus_xi2 = 1.0 - xi * xi;
    let skew = one_minus_xi2 * density / 6.0 * (1.0 - 2.0 * p_n) / spread / nf.sqrt();
    let kurt = xi * one_minus_xi2 * density / 12.0 / nf;
    Ok(norm_cdf(-xi) - skew + kurt)
}
