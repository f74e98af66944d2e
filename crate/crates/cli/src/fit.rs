use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ora::netdata::write_fit_csv;
use ora::{run_ora, FitResult, InitialDenominator, ResponseSet, SkConfig};

use crate::args::{parse_selection, FitArgs, FitOpts, InitMode, OutputFormat};
use crate::error::{CliError, Result};
use crate::io::{self, sibling, write_atomic};
use crate::Ui;

pub fn resolve_input(positional: Option<PathBuf>, swallowed: Option<PathBuf>) -> Result<PathBuf> {
    match (positional, swallowed) {
        (Some(_), Some(extra)) => Err(CliError::Usage(format!("unexpected argument {}", extra.display()))),
        (Some(p), None) | (None, Some(p)) => Ok(p),
        (None, None) => Err(CliError::Usage("missing input file".into())),
    }
}

/// Load the input named on the command line with the requested selection.
pub fn load_input(positional: Option<PathBuf>, opts: &FitOpts, ui: &Ui) -> Result<(PathBuf, io::Input)> {
    let (selection, swallowed) = parse_selection(opts.select.as_deref())?;
    let path = resolve_input(positional, swallowed)?;
    let input = io::load(&path, selection.as_ref())?;
    for w in &input.warnings {
        ui.warn(w);
    }
    Ok((path, input))
}

pub fn config(opts: &FitOpts, order: usize, data: &ResponseSet) -> Result<SkConfig> {
    let init = match opts.init {
        InitMode::Unit => InitialDenominator::Unit,
        InitMode::Logspaced => InitialDenominator::logspaced(&data.grid, order),
    };
    let cfg = SkConfig::with_degrees(opts.num_order.unwrap_or(order), order).iterations(opts.iters).init(init);
    cfg.validate(data.m())?;
    Ok(cfg)
}

fn iteration_log(res: &FitResult) -> String {
    let mut out = format!("# best_iteration={} rms={:e}\n", res.best_iteration, res.rms);
    for (it, msg) in &res.failures {
        let _ = writeln!(out, "# iteration {it} failed: {msg}");
    }
    out.push_str("iteration,rms,residual_norm,sigma_min,sigma_next\n");
    for r in &res.per_iteration {
        let _ = writeln!(out, "{},{:e},{:e},{:e},{:e}", r.iteration, r.rms, r.residual_norm, r.sigma_min, r.sigma_next);
    }
    out
}

fn error_csv(data: &ResponseSet, fitted: &nalgebra::DMatrix<ora::Complex64>) -> String {
    let mut out = String::from("freq_hz");
    for l in &data.labels {
        let _ = write!(out, ",{l}_abs_err");
    }
    out.push('\n');
    for (i, f) in data.grid.freqs_hz().iter().enumerate() {
        let _ = write!(out, "{f:e}");
        for k in 0..data.n_responses() {
            let _ = write!(out, ",{:e}", (data.values[(i, k)] - fitted[(i, k)]).norm());
        }
        out.push('\n');
    }
    out
}

fn default_output(input: &Path) -> PathBuf {
    sibling(input, "model.json")
}

pub fn run(args: FitArgs, ui: &Ui) -> Result<()> {
    let (path, input) = load_input(args.input, &args.opts, ui)?;
    let data = &input.data;
    let cfg = config(&args.opts, args.order, data)?;
    let res = run_ora(data, &cfg)?;
    for r in &res.per_iteration {
        ui.debug(&format!("iteration {:>3}: rms {:e}, sigma_min {:e}", r.iteration, r.rms, r.sigma_min));
    }
    for (it, msg) in &res.failures {
        ui.warn(&format!("iteration {it}: {msg}"));
    }

    let model_path = args.output.unwrap_or_else(|| default_output(&path));
    let fitted = res.best_model.evaluate_many(&data.grid.points())?;
    // Render everything before writing so a late failure leaves no partial set.
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    for fmt in &args.formats {
        let entry = match fmt {
            OutputFormat::JsonSs => (model_path.clone(), res.best_model.to_json(Some(data.grid.freqs_hz()))),
            OutputFormat::JsonPr => (sibling(&model_path, "pr.json"), res.best_model.to_pole_residue()?.to_json()),
            OutputFormat::CsvFit => (sibling(&model_path, "fit.csv"), write_fit_csv(data, &fitted)),
            OutputFormat::CsvError => (sibling(&model_path, "error.csv"), error_csv(data, &fitted)),
        };
        if !files.iter().any(|(p, _)| *p == entry.0) {
            files.push(entry);
        }
    }
    files.push((sibling(&model_path, "log.csv"), iteration_log(&res)));
    for (p, text) in &files {
        write_atomic(p, text)?;
    }

    ui.info(&format!(
        "fit {}: {} responses, order {} (numerator {}), best iteration {} of {}, rms {:e}",
        path.display(),
        data.n_responses(),
        cfg.den_degree,
        cfg.num_degree,
        res.best_iteration,
        res.per_iteration.len(),
        res.rms
    ));
    for (p, _) in &files {
        ui.info(&format!("wrote {}", p.display()));
    }
    Ok(())
}
