mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Parser)]
#[command(name = "colmez", version, about = "Verification suites for CM heights, local kernels, the archimedean kernel and pseudo-theta series")]
struct Cli {
    /// working precision in decimal digits (at least 24; default 64)
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(24..))]
    prec: Option<u32>,
    /// output format (default text)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// key = value file supplying defaults (prec, format, discs, primes, v_d, radius)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Faltings height of CM elliptic curves against −L′/L(0) − ¼ log|d|
    Colmez(ColmezArgs),
    /// Whittaker/intertwining series against the closed-form derivatives
    Local(LocalArgs),
    /// the exact local identity on the default grid
    Prop92(Prop92Args),
    /// Legendre Q₀ quadrature and the adjunction limit
    Arch(ArchArgs),
    /// pseudo-theta approximation and the g_N separation demo
    Ptheta(PthetaArgs),
}

#[derive(Args)]
pub struct ColmezArgs {
    /// fundamental discriminants (comma-separated or repeated)
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub disc: Vec<i64>,
    /// the twelve-discriminant suite
    #[arg(long, conflicts_with = "disc")]
    pub suite: bool,
    /// a row passes when |diff| < 10^(−tol)
    #[arg(long, default_value_t = 40)]
    pub tol: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Standard,
    Unit,
    S2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RamArg {
    Inert,
    Ramified,
    Split,
}

#[derive(Args)]
pub struct LocalArgs {
    /// residue characteristics (default 2,3,5,7)
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u64>,
    /// conductor exponents v(d) (default 0,1,2)
    #[arg(long = "v-d", value_delimiter = ',')]
    pub v_d: Vec<u32>,
    /// splitting types (default all)
    #[arg(long, value_enum, value_delimiter = ',')]
    pub ram: Vec<RamArg>,
    /// Schwartz function (default: the standard choice for each field)
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
}

#[derive(Args)]
pub struct Prop92Args {
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u64>,
    #[arg(long = "v-d", value_delimiter = ',')]
    pub v_d: Vec<u32>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub ram: Vec<RamArg>,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    /// y₁ as labelled in the grid, e.g. "p^0·1" or "(p^0, p^0)"
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long = "u-val", allow_negative_numbers = true)]
    pub u_val: Option<i32>,
    /// also run the p-adic enumeration and coset-sum oracles
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArchCheck {
    Q0,
    Limit,
}

#[derive(Args)]
pub struct ArchArgs {
    #[arg(long, value_enum)]
    pub check: ArchCheck,
    /// grid size for q0
    #[arg(long, default_value_t = 30)]
    pub points: usize,
    /// number of rays for limit, evenly spaced in angle
    #[arg(long, default_value_t = 8)]
    pub rays: usize,
    /// step 10^(−h_exp) for limit (default ≈ 17·prec/64)
    #[arg(long = "h-exp")]
    pub h_exp: Option<i32>,
}

#[derive(Args)]
pub struct PthetaArgs {
    /// spec file (see README for the format)
    #[arg(long, required_unless_present = "gn_demo")]
    pub spec: Option<PathBuf>,
    /// group words such as "n(1/3)m(2)k(pi/4)" (repeatable; default "1")
    #[arg(long)]
    pub g: Vec<String>,
    /// separation demo over N = 0..=n
    #[arg(long = "gn-demo", conflicts_with_all = ["spec", "g"])]
    pub gn_demo: Option<i64>,
}

pub struct Settings {
    pub prec: u32,
    pub file: config::FileConfig,
}

pub enum Failure {
    /// bad input: exit 2
    Usage(String),
    /// computation refused or errored: exit 1
    Runtime(String),
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let file = match &cli.config {
        Some(p) => match config::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config {e}");
                return ExitCode::from(2);
            }
        },
        None => Default::default(),
    };
    let format = cli.format.or(file.format).unwrap_or(Format::Text);
    let settings = Settings { prec: cli.prec.or(file.prec).unwrap_or(64), file };
    let result = match &cli.cmd {
        Command::Colmez(a) => commands::colmez(a, &settings),
        Command::Local(a) => commands::local(a, &settings),
        Command::Prop92(a) => commands::prop92(a, &settings),
        Command::Arch(a) => commands::arch(a, &settings),
        Command::Ptheta(a) => commands::ptheta(a, &settings),
    };
    match result {
        Ok(rep) => {
            print!("{}", rep.render(format));
            if rep.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("{} of {} checks failed", rep.failed(), rep.rows.len());
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
