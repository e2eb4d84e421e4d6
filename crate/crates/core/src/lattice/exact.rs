//! Reference double sums over levels and up-move counts.

use crate::error::{Error, Result};
use crate::model::{LatticeParams, ModelParams};
use crate::special::ln_binom_pmf;
use crate::summation::CompensatedSum;

/// Default size limit of the quadratic-cost evaluations.
pub const EXACT_MAX_N: usize = 20_000;

// Rows of the outer sum handed to one worker.
const ROWS_PER_TASK: usize = 256;

pub(crate) fn check_exact_capacity(n: usize) -> Result<()> {
    if n > EXACT_MAX_N {
        return Err(Error::Capacity {
            what: "quadratic-cost lattice sums",
            n,
            limit: EXACT_MAX_N,
        });
    }
    Ok(())
}

/// `sum_j weight(j) sum_k Λ_{j,k,m} a^k b^{m-k}` with `b = 1 - a`.
///
/// With `i = k - j` each term is `(a/b)^j C(m,i) a^i b^{m-i} (m+1-2i)/(m+1-i)`,
/// evaluated in log space. Rows are summed in parallel in fixed blocks and
/// combined in order.
pub(crate) fn level_double_sum<W>(m: usize, a: f64, b: f64, weight: W) -> f64
where
    W: Fn(usize) -> f64 + Sync,
{
    let mf = m as f64;
    let ln_ratio = a.ln() - b.ln();
    let ln_terms: Vec<f64> = (0..=m / 2)
        .map(|i| {
            let shape = (mf + 1.0 - 2.0 * i as f64) / (mf + 1.0 - i as f64);
            ln_binom_pmf(i as u64, m as u64, a, b) + shape.ln()
        })
        .collect();
    let row = |j: usize| {
        let shift = j as f64 * ln_ratio;
        let inner: CompensatedSum = ln_terms[..=(m - j) / 2]
            .iter()
            .map(|&t| (t + shift).exp())
            .sum();
        weight(j) * inner.value()
    };
    let tasks = (m + 1).div_ceil(ROWS_PER_TASK);
    let run_task = |t: usize| {
        let mut acc = CompensatedSum::new();
        for j in t * ROWS_PER_TASK..((t + 1) * ROWS_PER_TASK).min(m + 1) {
            acc.add(row(j));
        }
        acc
    };
    let mut partial = vec![CompensatedSum::new(); tasks];
    let threads = std::thread::available_parallelism()
        .map(|t| t.get())
        .unwrap_or(1);
    if tasks == 1 || threads == 1 || m < 2_000 {
        for (t, slot) in partial.iter_mut().enumerate() {
            *slot = run_task(t);
        }
    } else {
        let per_thread = tasks.div_ceil(threads);
        std::thread::scope(|scope| {
            for (c, chunk) in partial.chunks_mut(per_thread).enumerate() {
                let run_task = &run_task;
                scope.spawn(move || {
                    for (i, slot) in chunk.iter_mut().enumerate() {
                        *slot = run_task(c * per_thread + i);
                    }
                });
            }
        });
    }
    let mut acc = CompensatedSum::new();
    for p in &partial {
        acc.merge(p);
    }
    acc.value()
}

/// `V(0,0)` of the call on an `m`-step tree with the lattice's `u` and `q`.
pub(crate) fn call_double_sum(lat: &LatticeParams, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let s = lat.log_u;
    level_double_sum(m, lat.q, lat.one_minus_q, |j| -(-(j as f64) * s).exp_m1())
}

/// `W(0,0)` of the put on an `m`-step tree.
pub(crate) fn put_double_sum(lat: &LatticeParams, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let s = lat.log_u;
    level_double_sum(m, lat.one_minus_q, lat.q, |j| (j as f64 * s).exp_m1())
}

/// Floating-strike call price from the level double sum.
///
/// Cost is quadratic in `n`; above [`EXACT_MAX_N`] a capacity error is
/// returned. Valid for every rate including zero.
pub fn price_call_exact(model: &ModelParams, n: usize) -> Result<f64> {
    check_exact_capacity(n)?;
    let lat = LatticeParams::new(model, n)?;
    Ok(model.s0 * call_double_sum(&lat, n))
}

/// Floating-strike put price from the level double sum.
pub fn price_put_exact(model: &ModelParams, n: usize) -> Result<f64> {
    check_exact_capacity(n)?;
    let lat = LatticeParams::new(model, n)?;
    Ok(model.s0 * put_double_sum(&lat, n))
}

/// `V_n(0,1)`: the node after a first down move is a new minimum, so its
/// value is the call value of an `(n-1)`-step tree.
pub fn value_v01_exact(model: &ModelParams, n: usize) -> Result<f64> {
    check_exact_capacity(n)?;
    let lat = LatticeParams::new(model, n)?;
    Ok(call_double_sum(&lat, n - 1))
}

/// `V_n(1,1)` by splitting the `n - 1` remaining steps on whether the
/// minimum is revisited below the spot.
///
/// The first two sums cover paths ending on or above the old minimum level
/// with the minimum left unchanged, using the reflection count
/// `C(n-1, k) - C(n-1, k+2)`. The third sums paths that set a new minimum.
pub fn value_v11_exact(model: &ModelParams, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("n", "node values need at least two periods"));
    }
    check_exact_capacity(n)?;
    let lat = LatticeParams::new(model, n)?;
    let big_n = n - 1;
    let s = lat.log_u;
    let (q, b) = (lat.q, lat.one_minus_q);
    let pmf = |k: usize| ln_binom_pmf(k as u64, big_n as u64, q, b).exp();
    // 1 - u^{n-2-2k}
    let gain = |k: usize| -((n as f64 - 2.0 - 2.0 * k as f64) * s).exp_m1();
    let l4 = (n - 1) / 2;
    let ln_q2 = 2.0 * lat.ln_q_ratio();

    let mut acc = CompensatedSum::new();
    for k in l4..n {
        acc.add(gain(k) * pmf(k));
    }
    // C(N, k+2) q^k (1-q)^{N-k} = P(k+2) / Q^2
    for k in l4..n.saturating_sub(2) {
        let reflected = (ln_binom_pmf(k as u64 + 2, big_n as u64, q, b) - ln_q2).exp();
        acc.add(-gain(k) * reflected);
    }
    // new minimum: levels j <= n-3, k < (N + j)/2
    let mf = big_n as f64;
    let ln_ratio = lat.ln_q_ratio();
    let ln_terms: Vec<f64> = (0..=big_n / 2)
        .map(|i| {
            let shape = (mf + 1.0 - 2.0 * i as f64) / (mf + 1.0 - i as f64);
            ln_binom_pmf(i as u64, big_n as u64, q, b) + shape.ln()
        })
        .collect();
    for j in 0..n.saturating_sub(2) {
        let upper = (big_n + j) / 2;
        if upper == j {
            continue;
        }
        let shift = j as f64 * ln_ratio;
        let inner: CompensatedSum = ln_terms[..upper - j]
            .iter()
            .map(|&t| (t + shift).exp())
            .sum();
        acc.add(-(-(j as f64) * s).exp_m1() * inner.value());
    }
    Ok(acc.value())
}
