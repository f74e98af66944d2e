use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use ora::netdata::{responses_to_network, write_touchstone, DataFormat, FreqUnit};
use ora::{Complex64, FrequencyGrid, PoleResidueModel, ResponseSet, StateSpaceModel};

use crate::args::{EvalArgs, TsFormat};
use crate::error::{CliError, Result};
use crate::io::{read_text, sibling, write_atomic};
use crate::Ui;

enum Model {
    StateSpace(StateSpaceModel),
    PoleResidue(PoleResidueModel),
}

impl Model {
    fn labels(&self) -> &[String] {
        match self {
            Model::StateSpace(m) => &m.labels,
            Model::PoleResidue(m) => &m.labels,
        }
    }

    fn evaluate(&self, s: Complex64) -> ora::Result<Vec<Complex64>> {
        match self {
            Model::StateSpace(m) => m.evaluate(s),
            Model::PoleResidue(m) => m.evaluate(s),
        }
    }
}

fn load_model(path: &Path) -> Result<(Model, Option<Vec<f64>>)> {
    let text = read_text(path)?;
    let schema = |e: ora::OraError| CliError::Parse(format!("{}: {e}", path.display()));
    match StateSpaceModel::from_json(&text) {
        Ok((m, freqs)) => Ok((Model::StateSpace(m), freqs)),
        Err(_) if text.contains("\"pole_residue\"") => {
            Ok((Model::PoleResidue(PoleResidueModel::from_json(&text).map_err(schema)?), None))
        }
        Err(e) => Err(schema(e)),
    }
}

fn read_freqs(path: &Path) -> Result<Vec<f64>> {
    read_text(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.trim().parse::<f64>().map_err(|_| {
                CliError::Parse(format!("{}: line {}: invalid frequency {:?}", path.display(), i + 1, l.trim()))
            })
        })
        .collect()
}

fn unit_for(max_hz: f64) -> FreqUnit {
    match max_hz {
        f if f >= 1e9 => FreqUnit::GHz,
        f if f >= 1e6 => FreqUnit::MHz,
        f if f >= 1e3 => FreqUnit::KHz,
        _ => FreqUnit::Hz,
    }
}

pub fn run(args: EvalArgs, ui: &Ui) -> Result<()> {
    let (model, fit_freqs) = load_model(&args.model)?;
    let freqs = match (&args.freqs, &args.freqs_file) {
        (Some(f), _) => f.clone(),
        (None, Some(p)) => read_freqs(p)?,
        (None, None) => fit_freqs.clone().ok_or_else(|| {
            CliError::Usage("the model stores no fit frequencies; pass --freqs or --freqs-file".into())
        })?,
    };
    if freqs.is_empty() {
        return Err(CliError::Usage("no frequencies to evaluate".into()));
    }
    if let Some(f) = freqs.iter().find(|f| !(f.is_finite() && **f >= 0.0)) {
        return Err(CliError::Usage(format!("invalid frequency {f}")));
    }

    let labels = model.labels().to_vec();
    let mut values = DMatrix::from_element(freqs.len(), labels.len(), Complex64::new(f64::NAN, f64::NAN));
    let mut failed = 0;
    for (i, &f) in freqs.iter().enumerate() {
        match model.evaluate(Complex64::new(0.0, 2.0 * std::f64::consts::PI * f)) {
            Ok(v) => values.row_mut(i).iter_mut().zip(v).for_each(|(dst, z)| *dst = z),
            Err(e) => {
                failed += 1;
                ui.warn(&format!("{f:e} Hz: {e}; writing NaN"));
            }
        }
    }

    let mut out = String::new();
    if let Some(fit) = fit_freqs.as_ref().filter(|f| !f.is_empty()) {
        let (lo, hi) = (fit.iter().copied().fold(f64::INFINITY, f64::min), fit.iter().copied().fold(0.0, f64::max));
        let outside = freqs.iter().filter(|&&f| f < lo || f > hi).count();
        if outside > 0 {
            let _ = writeln!(
                out,
                "# extrapolated: {outside} of {} frequencies outside the fitted range [{lo:e}, {hi:e}] Hz",
                freqs.len()
            );
        }
    }
    if failed > 0 {
        let _ = writeln!(out, "# {failed} points could not be evaluated (NaN)");
    }
    out.push_str("freq_hz");
    for l in &labels {
        let _ = write!(out, ",{l}_re,{l}_im");
    }
    out.push('\n');
    for (i, f) in freqs.iter().enumerate() {
        let _ = write!(out, "{f:e}");
        for z in values.row(i).iter() {
            let _ = write!(out, ",{:e},{:e}", z.re, z.im);
        }
        out.push('\n');
    }
    let out_path = args.output.clone().unwrap_or_else(|| sibling(&args.model, "eval.csv"));
    write_atomic(&out_path, &out)?;
    ui.info(&format!("wrote {}", out_path.display()));

    if failed == freqs.len() {
        return Err(CliError::Numerical("pole on axis", "every requested frequency hits a pole".into()));
    }

    if let Some(ts_path) = &args.touchstone {
        if failed > 0 {
            return Err(CliError::Numerical("pole on axis", "cannot export Touchstone with unevaluated points".into()));
        }
        let grid = FrequencyGrid::from_hz(&freqs).map_err(|e| CliError::Usage(format!("Touchstone export: {e}")))?;
        let resp = ResponseSet::new(grid, values, labels)?;
        let mut net = responses_to_network(&resp, args.z0)?;
        // Keep the requested frequencies exactly rather than their 2π round trip.
        net.freqs_hz = freqs.clone();
        let format = match args.ts_format {
            TsFormat::Ri => DataFormat::RI,
            TsFormat::Ma => DataFormat::MA,
            TsFormat::Db => DataFormat::DB,
        };
        let unit = unit_for(freqs.iter().copied().fold(0.0, f64::max));
        write_atomic(ts_path, &write_touchstone(&net, format, unit)?)?;
        ui.info(&format!("wrote {}", ts_path.display()));
    }
    Ok(())
}
