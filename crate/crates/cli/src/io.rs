//! Input loading and atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use ora::netdata::{parse_csv, parse_s_label, ports_from_extension, read_touchstone, select_responses, Selection};
use ora::ResponseSet;

use crate::error::{CliError, Result};

/// Responses read from a CSV table or a Touchstone file.
pub struct Input {
    pub data: ResponseSet,
    pub warnings: Vec<String>,
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Load responses. Touchstone input defaults to the upper triangle; CSV
/// input defaults to every column, and S-parameter selections filter its
/// columns by label.
pub fn load(path: &Path, selection: Option<&Selection>) -> Result<Input> {
    if is_csv(path) {
        let data = parse_csv(&read_text(path)?)?;
        let data = match selection {
            None | Some(Selection::All) => data,
            Some(sel) => filter_csv(data, sel)?,
        };
        return Ok(Input { data, warnings: Vec::new() });
    }
    if ports_from_extension(path).is_none() {
        return Err(CliError::Usage(format!("{}: expected a .csv or .sNp file", path.display())));
    }
    if !path.exists() {
        return Err(CliError::Io(format!("{}: no such file", path.display())));
    }
    let net = read_touchstone(path)?;
    let data = select_responses(&net, selection.unwrap_or(&Selection::UpperTriangular))?;
    Ok(Input { data, warnings: net.source_format.warnings })
}

fn filter_csv(data: ResponseSet, sel: &Selection) -> Result<ResponseSet> {
    let keep: Vec<usize> = (0..data.labels.len())
        .filter(|&k| {
            let Some((i, j)) = parse_s_label(&data.labels[k]) else { return false };
            match sel {
                Selection::All => true,
                Selection::UpperTriangular => i <= j,
                Selection::Row(r) => i == *r,
                Selection::List(list) => list.contains(&(i, j)),
            }
        })
        .collect();
    if keep.is_empty() {
        return Err(CliError::Usage(
            "the selection matches no CSV columns (S-parameter labels such as S21 are required)".into(),
        ));
    }
    let values = data.values.select_columns(&keep);
    let labels = keep.iter().map(|&k| data.labels[k].clone()).collect();
    Ok(ResponseSet::new(data.grid, values, labels)?)
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// `dir/stem.suffix` next to `base`.
pub fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "ora".into());
    let stem = stem.strip_suffix(".model").map(str::to_string).unwrap_or(stem);
    base.with_file_name(format!("{stem}.{suffix}"))
}
