use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcocycle::disc_model::{Alpha, Precision};
use qcocycle::verify::{
    eval_tau_disc, eval_tau_su2, parse_q_numeric, parse_q_rational, verify_disc, verify_su2_gns, verify_su2_symbolic, DiscOptions,
    GnsOptions, Su2Options, VerificationReport, VerifyError,
};

#[derive(Parser, Debug)]
#[command(name = "qcocycle", version, about = "Checks twisted cyclic cocycles on the quantum disc and on SU_q(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// List every case, not only failures.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(Verify),
    /// Evaluate the cocycle on one tuple by every route.
    #[command(subcommand)]
    Eval(Eval),
    /// Re-render a saved JSON report.
    Report { path: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Quantum disc family on truncated weighted shifts.
    Disc(DiscArgs),
    /// Exact identities on SU_q(2) over Q(q^(1/2)).
    #[command(name = "su2-symbolic")]
    Su2Symbolic {
        #[arg(long)]
        q: String,
        /// Degree bound for the Hopf and modular checks.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Spectral trace formulas on the truncated GNS space.
    #[command(name = "su2-gns")]
    Su2Gns {
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 3.0)]
        z: f64,
        #[arg(long, default_value_t = 10)]
        degree: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct DiscArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, default_value = "1/2")]
    q: String,
    #[arg(long, default_value_t = 64)]
    window: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Replaces every default tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Eval {
    /// Three matrix units, e.g. `E00,E01,E10` or `E-1_2,E0_0,E2_-1`.
    #[command(name = "tau-disc")]
    TauDisc {
        #[command(flatten)]
        disc: DiscArgs,
        #[arg(long)]
        tuple: String,
    },
    /// Four monomials in a, b, c, d, e.g. `a,b,c,d` or `1,bc,a,d`.
    #[command(name = "tau-su2")]
    TauSu2 {
        #[arg(long, default_value = "1/2")]
        q: String,
        #[arg(long)]
        tuple: String,
        /// Also evaluate the spectral trace at this z (needs --degree).
        #[arg(long, requires = "degree")]
        z: Option<f64>,
        #[arg(long, requires = "z")]
        degree: Option<usize>,
    },
}

fn disc_options(a: &DiscArgs) -> Result<DiscOptions, VerifyError> {
    let alpha = Alpha::from_i64(a.alpha)?;
    let mut opts = DiscOptions::new(alpha, parse_q_numeric(&a.q)?);
    opts.window = a.window;
    opts.seed = a.seed;
    opts.tolerance = a.tolerance;
    if let Some(p) = Precision::from_env() {
        opts.precision = p;
    }
    Ok(opts)
}

fn run(cli: &Cli) -> Result<VerificationReport, VerifyError> {
    match &cli.command {
        Command::Verify(Verify::Disc(a)) => verify_disc(&disc_options(a)?),
        Command::Verify(Verify::Su2Symbolic { q, degree, seed }) => {
            let mut opts = Su2Options::new(parse_q_rational(q)?);
            opts.max_degree = *degree;
            opts.seed = *seed;
            verify_su2_symbolic(&opts)
        }
        Command::Verify(Verify::Su2Gns { q, z, degree, seed }) => {
            verify_su2_gns(&GnsOptions { q: parse_q_rational(q)?, z: *z, degree: *degree, seed: *seed })
        }
        Command::Eval(Eval::TauDisc { disc, tuple }) => eval_tau_disc(&disc_options(disc)?, tuple),
        Command::Eval(Eval::TauSu2 { q, tuple, z, degree }) => eval_tau_su2(&parse_q_rational(q)?, tuple, z.zip(*degree)),
        Command::Report { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| VerifyError::Usage(format!("{}: {e}", path.display())))?;
            VerificationReport::from_json(&text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(VerifyError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(VerifyError::Failure(msg)) => {
            eprintln!("check failed: {msg}");
            return ExitCode::from(1);
        }
    };
    let rendered = match cli.format {
        Format::Text => report.render_text(cli.verbose),
        Format::Json => report.to_json() + "\n",
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!("{} {}", report.check, if report.pass { "PASS" } else { "FAIL" });
        }
        None => print!("{rendered}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
