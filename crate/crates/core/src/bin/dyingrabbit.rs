use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dyingrabbit::binet::{binet_form, ratio_limit, verify};
use dyingrabbit::charpoly::{build_g, squarefree_check};
use dyingrabbit::report::{
    BinetFormRecord, Format, GridRecord, LimitRecord, RatioRecord, RealRootRecord, Render, RootSetRecord,
    SequenceRecord, SquarefreeRecord, VerifyRecord,
};
use dyingrabbit::roots::{all_roots, alpha_grid, dominant_root, limit_report_from_grid, DEFAULT_TARGET_GAP};
use dyingrabbit::sequences::{custom_seq, dying_rabbit_seq};
use dyingrabbit::{Error, InitialConditions, SequenceParams, DEFAULT_PRECISION_BITS, PRECISION_ENV_VAR};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dyingrabbit",
    version,
    about = "Dying-rabbit Fibonacci sequences, roots and closed forms"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,

    /// Working precision in bits.
    #[arg(long, global = true, env = PRECISION_ENV_VAR, default_value_t = DEFAULT_PRECISION_BITS)]
    precision: u32,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Terms C_0..C_t of the dying-rabbit sequence.
    Seq {
        k: u32,
        h: u32,
        t: u64,
        /// Comma-separated seed of length k+h-1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Option<Vec<String>>,
    },
    /// Dominant root of g_{k,h}, or every root with --all.
    Roots {
        k: u32,
        h: u32,
        #[arg(long)]
        all: bool,
    },
    /// Dominant roots for 1<=k<=kmax, 1<=h<=hmax with monotonicity flags.
    Grid { kmax: u32, hmax: u32 },
    /// Convergence of alpha_{k,h} to the row limits and to 1.
    Limits {
        kmax: u32,
        hmax: u32,
        #[arg(long, default_value_t = DEFAULT_TARGET_GAP)]
        target_gap: f64,
    },
    /// Compare the rounded closed form with exact terms for n<=n_max.
    Verify {
        k: u32,
        h: u32,
        n_max: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Option<Vec<String>>,
        /// Ceiling for automatic precision doubling.
        #[arg(long, default_value_t = 4096)]
        max_precision: u32,
    },
    /// Closed-form roots and coefficients.
    Binet {
        k: u32,
        h: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Option<Vec<String>>,
    },
    /// C_{n+1}/C_n against the dominant root.
    Ratio { k: u32, h: u32, n: u64 },
    /// gcd(g, g') certificate for g_{k,h}.
    Squarefree { k: u32, h: u32 },
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

/// Rendered text plus whether every check in it passed.
struct Outcome {
    text: String,
    ok: bool,
}

fn render<R: Render>(record: &R, format: Format, ok: bool) -> Result<Outcome, Failure> {
    Ok(Outcome {
        text: record.render(format)?,
        ok,
    })
}

fn parse_init(values: Option<Vec<String>>, params: SequenceParams) -> Result<Option<InitialConditions>, Failure> {
    let Some(values) = values else {
        return Ok(None);
    };
    let init = InitialConditions::new(
        values
            .iter()
            .map(|v| dyingrabbit::numeric::parse_integer(v))
            .collect::<Result<_, _>>()?,
    );
    init.check_order(params)?;
    Ok(Some(init))
}

fn run(command: Command, format: Format, prec: u32) -> Result<Outcome, Failure> {
    match command {
        Command::Seq { k, h, t, init } => {
            let params = SequenceParams::new(k, h)?;
            let window = match parse_init(init, params)? {
                Some(init) => custom_seq(params, &init, t)?,
                None => dying_rabbit_seq(params, t)?,
            };
            render(&SequenceRecord::from(&window), format, true)
        }
        Command::Roots { k, h, all } => {
            let params = SequenceParams::new(k, h)?;
            if all {
                render(&RootSetRecord::from(&all_roots(params, prec)?), format, true)
            } else {
                render(
                    &RealRootRecord::new(params, &dominant_root(params, prec)?),
                    format,
                    true,
                )
            }
        }
        Command::Grid { kmax, hmax } => {
            let grid = alpha_grid(kmax, hmax, prec)?;
            render(&GridRecord::from(&grid), format, grid.all_flags_true())
        }
        Command::Limits { kmax, hmax, target_gap } => {
            if !(target_gap.is_finite() && target_gap > 0.0) {
                return Err(Failure::Usage(format!("target gap must be positive, got {target_gap}")));
            }
            let grid = alpha_grid(kmax, hmax, prec)?;
            let report = limit_report_from_grid(&grid, prec, target_gap);
            render(&LimitRecord::from(&report), format, report.all_ok())
        }
        Command::Verify {
            k,
            h,
            n_max,
            init,
            max_precision,
        } => {
            let params = SequenceParams::new(k, h)?;
            let init = parse_init(init, params)?;
            let report = verify(params, init.as_ref(), n_max, prec, max_precision.max(prec))?;
            render(&VerifyRecord::from(&report), format, report.passed())
        }
        Command::Binet { k, h, init } => {
            let params = SequenceParams::new(k, h)?;
            let init = parse_init(init, params)?;
            render(
                &BinetFormRecord::from(&binet_form(params, init.as_ref(), prec)?),
                format,
                true,
            )
        }
        Command::Ratio { k, h, n } => {
            let params = SequenceParams::new(k, h)?;
            render(&RatioRecord::new(&ratio_limit(params, n, prec)?, prec), format, true)
        }
        Command::Squarefree { k, h } => {
            let params = SequenceParams::new(k, h)?;
            let g = build_g(params);
            let record = SquarefreeRecord {
                k,
                h,
                certificate: squarefree_check(&g)?,
                polynomial: g,
            };
            let ok = record.certificate.squarefree;
            render(&record, format, ok)
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let OutputArgs {
        format,
        precision,
        output,
    } = cli.out;
    match run(cli.command, format.into(), precision) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, output.as_ref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: one or more checks failed");
                ExitCode::from(EXIT_NUMERICAL)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
