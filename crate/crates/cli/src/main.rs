use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lookback::combinatorics::{oracle_delta, oracle_price, Payoff};
use lookback::fixed_strike::price_call_fixed;
use lookback::lattice::{
    delta_tree, delta_tree_exact, price_call_exact, price_call_fast, price_call_follmer_schied,
    price_put_exact, price_put_fast, price_put_follmer_schied,
};
use lookback::{Error, ModelParams};
use lookback_cli::output::format_number;
use lookback_cli::{
    richardson, run_table, to_csv, to_pretty, to_tsv, Digits, TableKind, DEFAULT_N_LIST,
};

/// Lookback option prices on the binomial lattice and their convergence
/// to the continuous-time limit.
#[derive(Parser)]
#[command(name = "lookback", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Spot price.
    #[arg(long, default_value_t = 80.0)]
    s0: f64,
    /// Continuously compounded risk-free rate.
    #[arg(long, default_value_t = 0.08, allow_negative_numbers = true)]
    r: f64,
    /// Volatility.
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    /// Maturity in years.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Decimal places, or `full` for round-trip precision.
    #[arg(long, default_value = "4")]
    digits: Digits,
}

impl ModelArgs {
    fn model(&self) -> Result<ModelParams, Error> {
        ModelParams::new(self.s0, self.r, self.sigma, self.t)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OptionKind {
    Call,
    Put,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Constant number of distribution-function evaluations.
    Fast,
    /// Quadratic-cost double sum.
    Exact,
    /// Quadratic-cost sum over the terminal minimum.
    FollmerSchied,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Call,
    Put,
    CallR0,
    Delta,
}

impl From<TableArg> for TableKind {
    fn from(k: TableArg) -> Self {
        match k {
            TableArg::Call => TableKind::Call,
            TableArg::Put => TableKind::Put,
            TableArg::CallR0 => TableKind::CallR0,
            TableArg::Delta => TableKind::Delta,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Call,
    Put,
    Fixed,
    Delta,
}

#[derive(Subcommand)]
enum Command {
    /// Floating-strike price on an n-period tree.
    Price {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OptionKind::Call)]
        kind: OptionKind,
        #[arg(long, value_enum, default_value_t = Method::Fast)]
        method: Method,
    },
    /// Tree delta of the floating-strike call.
    Delta {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        /// Use the quadratic-cost node values.
        #[arg(long)]
        exact: bool,
    },
    /// Convergence table against the continuous limit and its expansion.
    Table {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = TableArg::Call)]
        kind: TableArg,
        /// Comma-separated, strictly increasing period counts.
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = FormatArg::Pretty)]
        format: FormatArg,
        /// Also print Richardson extrapolations of consecutive rows to stderr.
        #[arg(long)]
        richardson: bool,
    },
    /// Fixed-strike lookback call.
    Fixed {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        strike: f64,
    },
    /// Brute-force path enumeration (small n only).
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OracleKind::Call)]
        kind: OracleKind,
        /// Strike for `--kind fixed`.
        #[arg(long)]
        strike: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Price {
            model: args,
            n,
            kind,
            method,
        } => {
            let m = args.model()?;
            let value = match (kind, method) {
                (OptionKind::Call, Method::Fast) => price_call_fast(&m, n),
                (OptionKind::Call, Method::Exact) => price_call_exact(&m, n),
                (OptionKind::Call, Method::FollmerSchied) => price_call_follmer_schied(&m, n),
                (OptionKind::Put, Method::Fast) => price_put_fast(&m, n),
                (OptionKind::Put, Method::Exact) => price_put_exact(&m, n),
                (OptionKind::Put, Method::FollmerSchied) => price_put_follmer_schied(&m, n),
            }?;
            println!("{}", format_number(value, args.digits));
        }
        Command::Delta {
            model: args,
            n,
            exact,
        } => {
            let m = args.model()?;
            let value = if exact {
                delta_tree_exact(&m, n)
            } else {
                delta_tree(&m, n)
            }?;
            println!("{}", format_number(value, args.digits));
        }
        Command::Table {
            model: args,
            kind,
            n_list,
            format,
            richardson: extrapolate,
        } => {
            let m = args.model()?;
            let kind = TableKind::from(kind);
            let n_list = n_list.unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
            let rows = run_table(kind, &m, &n_list)?;
            let text = match format {
                FormatArg::Csv => to_csv(&rows, args.digits),
                FormatArg::Tsv => to_tsv(&rows, args.digits),
                FormatArg::Pretty => to_pretty(kind, &rows, args.digits),
            };
            print!("{text}");
            if extrapolate {
                for pair in rows.windows(2) {
                    let points = [(pair[0].n, pair[0].value_n), (pair[1].n, pair[1].value_n)];
                    let value = richardson(&points)?;
                    eprintln!(
                        "richardson n={},{}: {} (limit {})",
                        pair[0].n,
                        pair[1].n,
                        format_number(value, args.digits),
                        format_number(pair[1].value_bs, args.digits)
                    );
                }
            }
        }
        Command::Fixed {
            model: args,
            n,
            strike,
        } => {
            let m = args.model()?;
            println!(
                "{}",
                format_number(price_call_fixed(&m, strike, n)?, args.digits)
            );
        }
        Command::Oracle {
            model: args,
            n,
            kind,
            strike,
        } => {
            let m = args.model()?;
            let value = match kind {
                OracleKind::Call => oracle_price(&m, n, Payoff::FloatingCall),
                OracleKind::Put => oracle_price(&m, n, Payoff::FloatingPut),
                OracleKind::Delta => oracle_delta(&m, n),
                OracleKind::Fixed => {
                    let strike = strike.ok_or_else(|| Error::Domain {
                        field: "strike",
                        reason: "required for --kind fixed".into(),
                    })?;
                    oracle_price(&m, n, Payoff::FixedCall(strike))
                }
            }?;
            println!("{}", format_number(value, args.digits));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Capacity { .. } => 3,
                _ => 2,
            })
        }
    }
}
