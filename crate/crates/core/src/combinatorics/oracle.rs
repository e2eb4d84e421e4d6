//! Reference prices by enumerating every path of the CRR tree.

use crate::error::{Error, Result};
use crate::model::{LatticeParams, ModelParams};
use crate::summation::CompensatedSum;

/// Largest tree the oracle will enumerate.
pub const ORACLE_MAX_N: usize = 22;

// The mask space is cut into this many contiguous blocks regardless of how
// many threads run them, so the reduction order never changes.
const BLOCKS: u64 = 64;

/// Payoffs the oracle can price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Payoff {
    /// `S_T - min S`
    FloatingCall,
    /// `max S - S_T`
    FloatingPut,
    /// `(max S - K)^+` with strike `K`
    FixedCall(f64),
}

/// Discounted risk-neutral expectation of `payoff` over all `2^n` paths.
pub fn oracle_price(model: &ModelParams, n: usize, payoff: Payoff) -> Result<f64> {
    check_capacity(n)?;
    if let Payoff::FixedCall(k) = payoff {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::domain("strike", format!("must be > 0, got {k}")));
        }
    }
    let lat = LatticeParams::new(model, n)?;
    let value = enumerate(&lat, n, 0, payoff);
    Ok(lat.total_discount * value)
}

/// Price at time `T/n` of the floating-strike call at the node reached by
/// the first move (`first_up` selects the up move), the minimum so far
/// including the spot.
pub fn oracle_node_price(model: &ModelParams, n: usize, first_up: bool) -> Result<f64> {
    check_capacity(n)?;
    if n < 2 {
        return Err(Error::domain("n", "node prices need at least two periods"));
    }
    let lat = LatticeParams::new(model, n)?;
    let start = if first_up { 1 } else { -1 };
    let value = enumerate(&lat, n - 1, start, Payoff::FloatingCall);
    Ok(lat.discount_periods(n - 1) * value)
}

/// Tree delta from the two first-period node prices.
pub fn oracle_delta(model: &ModelParams, n: usize) -> Result<f64> {
    let lat = LatticeParams::new(model, n.max(1))?;
    let up = oracle_node_price(model, n, true)?;
    let down = oracle_node_price(model, n, false)?;
    Ok((up - down) / (model.s0 * (lat.u - lat.d)))
}

fn check_capacity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n", "number of periods must be at least 1"));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::Capacity {
            what: "path enumeration",
            n,
            limit: ORACLE_MAX_N,
        });
    }
    Ok(())
}

// Undiscounted expectation over `steps` moves from a node at exponent
// `start` whose running extremum so far spans [min(0, start), max(0, start)].
fn enumerate(lat: &LatticeParams, steps: usize, start: i32, payoff: Payoff) -> f64 {
    let n = lat.n as i32;
    let s0 = lat.model.s0;
    // powers u^e for e in -n..=n, each from a single exp
    let powers: Vec<f64> = (-n..=n).map(|e| (e as f64 * lat.log_u).exp()).collect();
    let pow = |e: i32| powers[(e + n) as usize];
    let weights: Vec<f64> = (0..=steps)
        .map(|ups| lat.p.powi(ups as i32) * lat.one_minus_p.powi((steps - ups) as i32))
        .collect();

    let total: u64 = 1 << steps;
    let block = total.div_ceil(BLOCKS);
    let run_block = |b: u64| {
        let mut acc = CompensatedSum::new();
        let lo = b * block;
        let hi = ((b + 1) * block).min(total);
        for mask in lo..hi {
            let (mut h, mut lo_e, mut hi_e) = (start, start.min(0), start.max(0));
            for step in 0..steps {
                h += if mask >> step & 1 == 1 { 1 } else { -1 };
                lo_e = lo_e.min(h);
                hi_e = hi_e.max(h);
            }
            let value = match payoff {
                Payoff::FloatingCall => s0 * (pow(h) - pow(lo_e)),
                Payoff::FloatingPut => s0 * (pow(hi_e) - pow(h)),
                Payoff::FixedCall(k) => (s0 * pow(hi_e) - k).max(0.0),
            };
            acc.add(weights[mask.count_ones() as usize] * value);
        }
        acc
    };

    let blocks = BLOCKS.min(total);
    let threads = std::thread::available_parallelism()
        .map(|t| t.get() as u64)
        .unwrap_or(1)
        .min(blocks);
    let mut partial = vec![CompensatedSum::new(); blocks as usize];
    if threads <= 1 || steps < 12 {
        for (b, slot) in partial.iter_mut().enumerate() {
            *slot = run_block(b as u64);
        }
    } else {
        let per_thread = blocks.div_ceil(threads) as usize;
        std::thread::scope(|scope| {
            for (t, chunk) in partial.chunks_mut(per_thread).enumerate() {
                let run_block = &run_block;
                scope.spawn(move || {
                    for (i, slot) in chunk.iter_mut().enumerate() {
                        *slot = run_block((t * per_thread + i) as u64);
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
