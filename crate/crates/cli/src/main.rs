mod checks;
mod commands;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "moditer", version, about = "Modular iterated integrals, multiple modular L-values and MZVs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// q-expansion truncation order
    #[arg(long, global = true, env = "MODITER_ORDER", default_value_t = 64)]
    pub order: usize,
    /// Height where infinite paths are cut
    #[arg(long, global = true, env = "MODITER_HEIGHT", default_value_t = 12.0)]
    pub height: f64,
    /// Initial number of quadrature panels
    #[arg(long, global = true, env = "MODITER_PANELS", default_value_t = 64)]
    pub panels: usize,
    /// Quadrature tolerance
    #[arg(long, global = true, env = "MODITER_TOL", default_value_t = 1e-8)]
    pub tol: f64,
    /// Cutoff X for L-function sums
    #[arg(long, global = true, env = "MODITER_CUTOFF", default_value_t = 2000)]
    pub cutoff: usize,
    #[arg(long, global = true, env = "MODITER_OUTPUT", value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Coefficient file (JSON), appended after positional forms; repeatable
    #[arg(long = "form", global = true)]
    pub form_files: Vec<PathBuf>,
    /// Report wall time
    #[arg(long, global = true, env = "MODITER_TIMING")]
    pub timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LMethod {
    Direct,
    Continued,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MzvMethod {
    Series,
    P1,
    Modular,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Eta,
    Funceq,
    Thi,
    Ths,
    Mzv,
    Shuffle,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact q-expansion of a named series (F, G, theta, theta4, delta, eK, lambda)
    Qexp { name: String },
    /// Evaluate a form at a point of the upper half-plane
    Eval {
        form: Option<String>,
        /// Point as "x,y" or a complex literal such as "0.1+1.2i"
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Multiple modular L-value
    Lvalue {
        forms: Vec<String>,
        /// Exponents, comma separated (complex literals allowed)
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value_t = LMethod::Direct)]
        method: LMethod,
        /// Sharp truncation instead of the smooth cutoff
        #[arg(long)]
        sharp: bool,
        /// Skip the absolute-convergence guard
        #[arg(long)]
        no_guard: bool,
    },
    /// Regularised iterated integral from i∞ to 0
    Iterint {
        forms: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Split height (defaults to the Fricke fixed point)
        #[arg(long)]
        split: Option<f64>,
    },
    /// Check the expansion of an integral in L-values
    ThiVerify(ExpansionArgs),
    /// Check the expansion of an L-value in integrals
    ThsVerify(ExpansionArgs),
    /// Check Z(f; s) = e^{iπΣs} Z(f̃; k - s)
    FunceqVerify {
        forms: Vec<String>,
        /// Exponent vector, repeatable
        #[arg(long, allow_hyphen_values = true, required = true)]
        s: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        check_tol: f64,
    },
    /// Check the eta-quotient identities for F, G and G-16F
    EtaVerify,
    /// Multiple zeta value
    Mzv {
        /// Index k_1,...,k_d (sums over n_1 < ... < n_d)
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, default_value_t = MzvMethod::Modular)]
        method: MzvMethod,
        /// Terms in the nested series
        #[arg(long, default_value_t = 1_000_000)]
        terms: usize,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 9)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct ExpansionArgs {
    pub forms: Vec<String>,
    /// First exponent s
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Integer exponents α_2, ..., α_n, comma separated
    #[arg(long, default_value = "")]
    pub alphas: String,
    /// Skip the absolute-convergence guard of the L-sums
    #[arg(long)]
    pub no_guard: bool,
    #[arg(long, default_value_t = 1e-4)]
    pub check_tol: f64,
}

fn emit(report: &RunReport, output: Output) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match output {
        Output::Json => report.write_json(&mut out),
        Output::Csv => report.write_csv(&mut out),
    }?;
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let mut report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if cli.global.timing {
        report.wall_time_s = Some(report::round15(start.elapsed().as_secs_f64()));
    }
    if let Err(e) = emit(&report, cli.global.output) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if let Some(bad) = report.first_failure() {
        eprintln!("verification failed: {}", bad.name);
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
