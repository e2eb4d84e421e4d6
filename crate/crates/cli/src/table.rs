//! Convergence tables of lattice values against their continuous limits.

use lookback::asymptotics::{call_expansion, delta_expansion, put_expansion, PriceExpansion};
use lookback::lattice::{delta_tree, price_call_fast, price_put_fast};
use lookback::{Error, ModelParams, Result};
use rayon::prelude::*;

/// Default period counts of a convergence table.
pub const DEFAULT_N_LIST: [usize; 5] = [1_000, 5_000, 10_000, 50_000, 100_000];

/// Quantity tabulated by [`run_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Call,
    Put,
    /// Call with the rate forced to zero.
    CallR0,
    Delta,
}

/// One column of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value_n: f64,
    pub value_bs: f64,
    /// `(value_n - value_bs) sqrt(n)`
    pub scaled1: f64,
    pub coeff1: f64,
    /// `(value_n - value_bs - coeff1/sqrt(n)) n`, present with `coeff2`.
    pub scaled2: Option<f64>,
    pub coeff2: Option<f64>,
}

impl ConvergenceRow {
    pub fn new(n: usize, value_n: f64, expansion: &PriceExpansion) -> Self {
        let root = (n as f64).sqrt();
        let diff = value_n - expansion.pi0;
        ConvergenceRow {
            n,
            value_n,
            value_bs: expansion.pi0,
            scaled1: diff * root,
            coeff1: expansion.pi1,
            scaled2: expansion
                .pi2
                .map(|_| (diff - expansion.pi1 / root) * n as f64),
            coeff2: expansion.pi2,
        }
    }
}

fn table_model(kind: TableKind, model: &ModelParams) -> ModelParams {
    match kind {
        TableKind::CallR0 => model.with_r(0.0),
        _ => *model,
    }
}

fn lattice_value(kind: TableKind, model: &ModelParams, n: usize) -> Result<f64> {
    match kind {
        TableKind::Call | TableKind::CallR0 => price_call_fast(model, n),
        TableKind::Put => price_put_fast(model, n),
        TableKind::Delta => delta_tree(model, n),
    }
}

/// Expansion coefficients for `kind`; the delta has none at `r = 0`.
pub fn expansion_for(kind: TableKind, model: &ModelParams) -> Result<PriceExpansion> {
    let model = table_model(kind, model);
    match kind {
        TableKind::Call | TableKind::CallR0 => call_expansion(&model),
        TableKind::Put => put_expansion(&model),
        TableKind::Delta => delta_expansion(&model),
    }
}

/// One row per `n`, computed in parallel and returned in input order.
///
/// `n_list` must be nonempty and strictly increasing. Any pricing error
/// aborts the whole table.
pub fn run_table(
    kind: TableKind,
    model: &ModelParams,
    n_list: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if n_list.is_empty() {
        return Err(Error::Domain {
            field: "n_list",
            reason: "must not be empty".into(),
        });
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain {
            field: "n_list",
            reason: "must be strictly increasing".into(),
        });
    }
    let model = table_model(kind, model);
    let expansion = expansion_for(kind, &model)?;
    n_list
        .par_iter()
        .map(|&n| {
            Ok(ConvergenceRow::new(
                n,
                lattice_value(kind, &model, n)?,
                &expansion,
            ))
        })
        .collect()
}

/// Removes the `n^{-1/2}` term using the last two points:
/// `(sqrt(n2) v2 - sqrt(n1) v1) / (sqrt(n2) - sqrt(n1))`.
pub fn richardson(pairs: &[(usize, f64)]) -> Result<f64> {
    let [.., (n1, v1), (n2, v2)] = pairs else {
        return Err(Error::DegenerateInput(format!(
            "need at least 2 points, got {}",
            pairs.len()
        )));
    };
    if n1 == n2 {
        return Err(Error::DegenerateInput(format!("both points have n = {n1}")));
    }
    let (r1, r2) = ((*n1 as f64).sqrt(), (*n2 as f64).sqrt());
    Ok((r2 * v2 - r1 * v1) / (r2 - r1))
}
