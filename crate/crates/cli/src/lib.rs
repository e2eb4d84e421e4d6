//! Convergence tables and output formats behind the `lookback` command.

pub mod output;
pub mod table;

pub use output::{parse_csv, to_csv, to_pretty, to_tsv, Digits, Format, HEADER};
pub use table::{expansion_for, richardson, run_table, ConvergenceRow, TableKind, DEFAULT_N_LIST};
