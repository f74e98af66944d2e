use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ora::netdata::{parse_s_label, Selection};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "ora",
    version,
    about = "Rational macromodels of frequency-response data with stable, real, common poles"
)]
pub struct Cli {
    /// More diagnostics on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Suppress the summary and warnings.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a common-pole model to CSV or Touchstone data.
    Fit(FitArgs),
    /// Evaluate a model JSON on a frequency list.
    Eval(EvalArgs),
    /// Sweep the model order and tabulate the best rms per order.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitMode {
    /// Unit denominator.
    Unit,
    /// Lightly damped pole pairs log-spaced over the band.
    Logspaced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// State-space model JSON.
    JsonSs,
    /// Pole-residue model JSON.
    JsonPr,
    /// Data against fit, per response.
    CsvFit,
    /// Absolute error per response.
    CsvError,
}

#[derive(Debug, Clone, Args)]
pub struct FitOpts {
    /// Numerator degree (defaults to the denominator order).
    #[arg(long)]
    pub num_order: Option<usize>,
    /// SK iterations.
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    /// Responses to fit: `all`, `upper`, `row I`, or `list IJ,…` (1-based ports,
    /// entries like `21` or `10_2`). Touchstone input defaults to `upper`.
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "ARG"])]
    pub select: Option<Vec<String>>,
    /// Starting denominator.
    #[arg(long, value_enum, default_value_t = InitMode::Unit)]
    pub init: InitMode,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Input data (.csv or .sNp).
    pub input: Option<PathBuf>,
    /// Denominator order.
    #[arg(short = 'd', long)]
    pub order: usize,
    #[command(flatten)]
    pub opts: FitOpts,
    /// Artifacts to write besides the iteration log.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [OutputFormat::JsonSs, OutputFormat::CsvFit])]
    pub formats: Vec<OutputFormat>,
    /// Model JSON path; other artifacts are named after it.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model JSON (state-space or pole-residue).
    pub model: PathBuf,
    /// Comma-separated frequencies in Hz (default: the fitted grid).
    #[arg(long, value_delimiter = ',', conflicts_with = "freqs_file")]
    pub freqs: Option<Vec<f64>>,
    /// File with one frequency in Hz per line.
    #[arg(long)]
    pub freqs_file: Option<PathBuf>,
    /// Output CSV.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the response as a Touchstone file (labels must cover a full S matrix).
    #[arg(long)]
    pub touchstone: Option<PathBuf>,
    /// Touchstone number format.
    #[arg(long, value_enum, default_value_t = TsFormat::Ri)]
    pub ts_format: TsFormat,
    /// Touchstone reference impedance.
    #[arg(long, default_value_t = 50.0)]
    pub z0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TsFormat {
    Ri,
    Ma,
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Compare {
    /// Also run the orthogonal-polynomial SK variant.
    Polybasis,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Input data (.csv or .sNp).
    pub input: Option<PathBuf>,
    /// Orders to sweep: `LO..HI` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub orders: String,
    #[command(flatten)]
    pub opts: FitOpts,
    /// Add a comparison column.
    #[arg(long, value_enum)]
    pub compare: Option<Compare>,
    /// Output CSV.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parse `--select`. Because the flag takes an optional second value, a
/// one-word selection may swallow the input path; that value is returned so
/// the caller can use it as the input.
pub fn parse_selection(values: Option<&[String]>) -> Result<(Option<Selection>, Option<PathBuf>)> {
    let Some(values) = values else { return Ok((None, None)) };
    let kind = values[0].to_ascii_lowercase();
    let arg = values.get(1);
    let usage = |m: String| CliError::Usage(m);
    match kind.as_str() {
        "all" | "upper" | "upper_triangular" => {
            let sel = if kind == "all" { Selection::All } else { Selection::UpperTriangular };
            Ok((Some(sel), arg.map(PathBuf::from)))
        }
        "row" => {
            let arg = arg.ok_or_else(|| usage("--select row needs a port index".into()))?;
            let i = arg.parse().map_err(|_| usage(format!("--select row: invalid port index {arg:?}")))?;
            Ok((Some(Selection::Row(i)), None))
        }
        "list" => {
            let arg = arg.ok_or_else(|| usage("--select list needs entries such as 11,21".into()))?;
            let entries = arg
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    let label = if t.starts_with(['S', 's']) { t.to_string() } else { format!("S{t}") };
                    parse_s_label(&label).ok_or_else(|| usage(format!("--select list: invalid entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Some(Selection::List(entries)), None))
        }
        other => Err(usage(format!("unknown selection {other:?} (expected all, upper, row or list)"))),
    }
}

/// `LO..HI` or `a,b,c`.
pub fn parse_orders(text: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("--orders: expected LO..HI or a comma-separated list, got {text:?}"));
    let orders: Vec<usize> = if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    let mut orders = orders;
    orders.sort_unstable();
    orders.dedup();
    if orders.is_empty() {
        return Err(bad());
    }
    Ok(orders)
}
