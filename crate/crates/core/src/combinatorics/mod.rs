//! Path counts of the Cheuk-Vorst level process and its distribution after
//! `m` steps.
//!
//! The level `j` of a node is the number of `u` powers between the current
//! price and the running extremum. `Λ_{j,k,m}` counts the `m`-step level
//! paths from the root that end at level `j` after `k` moves away from the
//! extremum.

mod oracle;

pub use oracle::{oracle_delta, oracle_node_price, oracle_price, Payoff, ORACLE_MAX_N};

use crate::error::{Error, Result};
use crate::model::LatticeParams;
use crate::special::ln_binom_pmf;
use crate::summation::CompensatedSum;

/// Largest `m` for which [`lambda_coeff`] is offered.
pub const LAMBDA_MAX_M: usize = 60;

/// Largest `m` for which the level pmf is summed from exact counts.
const EXACT_PMF_MAX_M: usize = 60;

/// A single count `Λ_{j,k,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCount {
    pub j: usize,
    pub k: usize,
    pub m: usize,
    pub count: u128,
}

impl PathCount {
    pub fn new(j: usize, k: usize, m: usize) -> Result<Self> {
        Ok(PathCount {
            j,
            k,
            m,
            count: lambda_coeff(j, k, m)?,
        })
    }
}

/// Exact binomial coefficient; `m <= LAMBDA_MAX_M` keeps it far from overflow.
fn binomial_u128(m: usize, i: usize) -> u128 {
    if i > m {
        return 0;
    }
    let i = i.min(m - i);
    (0..i).fold(1u128, |acc, t| acc * (m - t) as u128 / (t + 1) as u128)
}

/// `Λ_{j,k,m} = C(m, k-j) - C(m, k-j-1)`, zero outside `j <= k <= (m+j)/2`.
///
/// Exact integer arithmetic; `m` above [`LAMBDA_MAX_M`] is a capacity error.
pub fn lambda_coeff(j: usize, k: usize, m: usize) -> Result<u128> {
    if m > LAMBDA_MAX_M {
        return Err(Error::Capacity {
            what: "exact path counts",
            n: m,
            limit: LAMBDA_MAX_M,
        });
    }
    if j > m {
        return Err(Error::domain(
            "j",
            format!("level {j} exceeds the period count {m}"),
        ));
    }
    if k < j || 2 * k > m + j {
        return Ok(0);
    }
    let i = k - j;
    if i == 0 {
        return Ok(1);
    }
    Ok(binomial_u128(m, i) - binomial_u128(m, i - 1))
}

/// Distribution of the level after `m` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPmf {
    pub m: usize,
    /// Probability of level `j`, for `j = 0..=m`.
    pub levels: Vec<f64>,
}

impl LevelPmf {
    pub fn get(&self, j: usize) -> f64 {
        self.levels.get(j).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.levels.iter().copied().sum::<CompensatedSum>().value()
    }
}

/// Level distribution of the call lattice, where a move away from the
/// minimum has probability `q`.
pub fn level_pmf_call(lattice: &LatticeParams, m: usize) -> Result<LevelPmf> {
    check_periods(lattice, m)?;
    Ok(level_pmf(m, lattice.q, lattice.one_minus_q))
}

/// Level distribution of the put lattice, where a move away from the
/// maximum has probability `1 - q`.
pub fn level_pmf_put(lattice: &LatticeParams, m: usize) -> Result<LevelPmf> {
    check_periods(lattice, m)?;
    Ok(level_pmf(m, lattice.one_minus_q, lattice.q))
}

fn check_periods(lattice: &LatticeParams, m: usize) -> Result<()> {
    if m == 0 || m > lattice.n {
        return Err(Error::domain(
            "m",
            format!("must lie in 1..={}, got {m}", lattice.n),
        ));
    }
    Ok(())
}

/// `P(level = j) = sum_k Λ_{j,k,m} a^k b^{m-k}` with `b = 1 - a`.
pub(crate) fn level_pmf(m: usize, a: f64, b: f64) -> LevelPmf {
    let levels = if m <= EXACT_PMF_MAX_M {
        level_pmf_exact(m, a, b)
    } else {
        level_pmf_scaled(m, a, b)
    };
    LevelPmf { m, levels }
}

fn level_pmf_exact(m: usize, a: f64, b: f64) -> Vec<f64> {
    (0..=m)
        .map(|j| {
            (j..=(m + j) / 2)
                .map(|k| {
                    let count = lambda_coeff(j, k, m).expect("m within exact range") as f64;
                    count * a.powi(k as i32) * b.powi((m - k) as i32)
                })
                .sum::<CompensatedSum>()
                .value()
        })
        .collect()
}

// With i = k - j, Λ_{j,k,m} a^k b^{m-k} = R^j w(i) where R = a/b and
// w(i) = C(m,i) a^i b^{m-i} (m+1-2i)/(m+1-i) >= 0, so level j is R^j times
// the prefix sum of w up to (m-j)/2. Prefix sums are held relative to their
// last term to avoid underflow.
fn level_pmf_scaled(m: usize, a: f64, b: f64) -> Vec<f64> {
    let half = m / 2;
    let mf = m as f64;
    let ln_ratio = a.ln() - b.ln();
    let inv_ratio = b / a;
    let mut ln_last = vec![0.0; half + 1];
    let mut relative = vec![0.0; half + 1];
    for i in 0..=half {
        let shape = (mf + 1.0 - 2.0 * i as f64) / (mf + 1.0 - i as f64);
        ln_last[i] = ln_binom_pmf(i as u64, m as u64, a, b) + shape.ln();
        relative[i] = if i == 0 {
            1.0
        } else {
            // w(i-1)/w(i) from exact rational ratios
            let i_f = i as f64;
            let back =
                i_f / (mf - i_f + 1.0) * inv_ratio * ((mf + 3.0 - 2.0 * i_f) / (mf + 2.0 - i_f))
                    / ((mf + 1.0 - 2.0 * i_f) / (mf + 1.0 - i_f));
            1.0 + relative[i - 1] * back
        };
    }
    (0..=m)
        .map(|j| {
            let t = (m - j) / 2;
            (j as f64 * ln_ratio + ln_last[t]).exp() * relative[t]
        })
        .collect()
}
