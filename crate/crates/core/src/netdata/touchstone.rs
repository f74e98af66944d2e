//! Touchstone v1.x reader and writer.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{NetDataError, NetworkData, Result, SourceFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FreqUnit::Hz => "HZ",
            FreqUnit::KHz => "KHZ",
            FreqUnit::MHz => "MHZ",
            FreqUnit::GHz => "GHZ",
        }
    }
}

/// Number pair convention of the data lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Real, imaginary.
    RI,
    /// Magnitude, angle in degrees.
    MA,
    /// Magnitude in dB (`20·log10`), angle in degrees.
    DB,
}

impl DataFormat {
    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::RI => Complex64::new(a, b),
            DataFormat::MA => Complex64::from_polar(a, b.to_radians()),
            DataFormat::DB => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::RI => (z.re, z.im),
            DataFormat::MA => (z.norm(), z.arg().to_degrees()),
            DataFormat::DB => (20.0 * z.norm().max(f64::MIN_POSITIVE).log10(), z.arg().to_degrees()),
        }
    }

    fn token(self) -> &'static str {
        match self {
            DataFormat::RI => "RI",
            DataFormat::MA => "MA",
            DataFormat::DB => "DB",
        }
    }
}

/// Port count from a `.sNp` extension.
pub fn ports_from_extension(path: &Path) -> Option<usize> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    let digits = ext.strip_prefix('s')?.strip_suffix('p')?;
    digits.parse().ok().filter(|&n| n >= 1)
}

/// Read a `.sNp` file, taking the port count from its extension.
pub fn read_touchstone(path: &Path) -> Result<NetworkData> {
    let io = |msg: String| NetDataError::Io { path: path.display().to_string(), msg };
    let ports = ports_from_extension(path)
        .ok_or_else(|| io("cannot infer port count from extension (expected .sNp)".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
    parse_touchstone(&text, ports)
}

struct Options {
    unit: FreqUnit,
    format: DataFormat,
    z0: f64,
}

fn parse_options(line: &str, lineno: usize) -> Result<Options> {
    let mut opts = Options { unit: FreqUnit::GHz, format: DataFormat::MA, z0: 50.0 };
    let mut tokens = line.trim_start_matches('#').split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => opts.unit = FreqUnit::Hz,
            "KHZ" => opts.unit = FreqUnit::KHz,
            "MHZ" => opts.unit = FreqUnit::MHz,
            "GHZ" => opts.unit = FreqUnit::GHz,
            "S" => {}
            p @ ("Y" | "Z" | "G" | "H") => {
                return Err(NetDataError::Unsupported {
                    line: lineno,
                    what: format!("parameter type {p} (only S is supported)"),
                })
            }
            "RI" => opts.format = DataFormat::RI,
            "MA" => opts.format = DataFormat::MA,
            "DB" => opts.format = DataFormat::DB,
            "R" => {
                let v = tokens.next().ok_or_else(|| NetDataError::Syntax {
                    line: lineno,
                    msg: "R without a reference impedance".into(),
                })?;
                opts.z0 = v.parse::<f64>().ok().filter(|z| z.is_finite() && *z > 0.0).ok_or_else(|| {
                    NetDataError::Syntax { line: lineno, msg: format!("invalid reference impedance {v:?}") }
                })?;
            }
            _ => return Err(NetDataError::UnknownOption { line: lineno, token: tok.to_string() }),
        }
    }
    Ok(opts)
}

/// Parse Touchstone v1.x text for an `n_ports` network.
///
/// Two-port data follow the v1 column order `S11 S21 S12 S22`; other port
/// counts are row-major and may wrap over several lines. A two-port noise
/// section is skipped with a warning.
pub fn parse_touchstone(text: &str, n_ports: usize) -> Result<NetworkData> {
    if n_ports == 0 {
        return Err(NetDataError::Invalid("port count must be at least 1".into()));
    }
    let expected = 1 + 2 * n_ports * n_ports;
    let mut opts: Option<Options> = None;
    let mut warnings = Vec::new();
    let mut blocks: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut current: Option<(usize, Vec<f64>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('!').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if opts.is_some() {
                warnings.push(format!("line {lineno}: additional option line ignored"));
            } else {
                opts = Some(parse_options(line, lineno)?);
            }
            continue;
        }
        if line.starts_with('[') {
            return Err(NetDataError::Unsupported {
                line: lineno,
                what: "Touchstone 2.0 keyword (only v1.x files are read)".into(),
            });
        }
        let values = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| NetDataError::Syntax { line: lineno, msg: format!("invalid number {t:?}") })
            })
            .collect::<Result<Vec<f64>>>()?;

        if current.is_none() {
            let freq = values[0];
            if let Some((_, last)) = blocks.last() {
                if freq <= last[0] {
                    if n_ports == 2 && values.len() == 5 {
                        warnings.push(format!("line {lineno}: noise parameter section skipped"));
                        break;
                    }
                    return Err(NetDataError::NonMonotone { line: lineno, freq });
                }
            }
            if !(freq.is_finite() && freq >= 0.0) {
                return Err(NetDataError::Syntax { line: lineno, msg: format!("invalid frequency {freq}") });
            }
            current = Some((lineno, Vec::with_capacity(expected)));
        }
        let (start, buf) = current.as_mut().expect("block in progress");
        if buf.len() + values.len() > expected {
            // A short block followed by the next frequency line reports its own count.
            let found = if buf.is_empty() { values.len() } else { buf.len() };
            return Err(NetDataError::ValueCount { line: *start, expected, found });
        }
        buf.extend(values);
        if buf.len() == expected {
            blocks.push(current.take().expect("block in progress"));
        }
    }
    if let Some((start, buf)) = current {
        return Err(NetDataError::ValueCount { line: start, expected, found: buf.len() });
    }
    if blocks.is_empty() {
        return Err(NetDataError::Invalid("no frequency data found".into()));
    }

    let opts = opts.unwrap_or(Options { unit: FreqUnit::GHz, format: DataFormat::MA, z0: 50.0 });
    let mult = opts.unit.multiplier();
    let mut freqs = Vec::with_capacity(blocks.len());
    let mut mats = Vec::with_capacity(blocks.len());
    for (_, vals) in &blocks {
        freqs.push(vals[0] * mult);
        let mut s = DMatrix::zeros(n_ports, n_ports);
        for (k, pair) in vals[1..].chunks_exact(2).enumerate() {
            let (i, j) = if n_ports == 2 { (k % 2, k / 2) } else { (k / n_ports, k % n_ports) };
            s[(i, j)] = opts.format.decode(pair[0], pair[1]);
        }
        mats.push(s);
    }
    let mut data = NetworkData::new(freqs, mats, opts.z0)?;
    data.source_format = SourceFormat { unit: opts.unit, format: opts.format, warnings };
    Ok(data)
}

/// Serialize as Touchstone v1 text. Numbers use the shortest representation
/// that parses back to the same `f64`.
pub fn write_touchstone(data: &NetworkData, format: DataFormat, unit: FreqUnit) -> Result<String> {
    if data.freqs_hz.is_empty() {
        return Err(NetDataError::Invalid("cannot write network data without frequencies".into()));
    }
    let n = data.n_ports;
    let mult = unit.multiplier();
    let mut out = String::new();
    let _ = writeln!(out, "! {n}-port S-parameters");
    let _ = writeln!(out, "# {} S {} R {}", unit.token(), format.token(), data.z0);
    for (f, s) in data.freqs_hz.iter().zip(&data.s_matrices) {
        let _ = write!(out, "{:e}", f / mult);
        let pair = |out: &mut String, z: Complex64| {
            let (a, b) = format.encode(z);
            let _ = write!(out, " {a:e} {b:e}");
        };
        match n {
            1 => pair(&mut out, s[(0, 0)]),
            2 => {
                for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    pair(&mut out, s[(i, j)]);
                }
            }
            _ => {
                for i in 0..n {
                    for j in 0..n {
                        if j > 0 && j % 4 == 0 {
                            out.push('\n');
                        }
                        pair(&mut out, s[(i, j)]);
                    }
                    if i + 1 < n {
                        out.push('\n');
                    }
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}
