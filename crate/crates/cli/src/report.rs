use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use ora::{run_ora, BasisKind, ResponseSet};

use crate::args::{parse_orders, Compare, FitOpts, ReportArgs};
use crate::error::{CliError, Result};
use crate::fit::{config, load_input};
use crate::io::{sibling, write_atomic};
use crate::Ui;

struct Row {
    order: usize,
    ora: std::result::Result<f64, String>,
    poly: Option<std::result::Result<f64, String>>,
}

fn fit_rms(data: &ResponseSet, opts: &FitOpts, order: usize, kind: BasisKind) -> std::result::Result<f64, String> {
    let cfg = config(opts, order, data).map_err(|e| e.to_string())?.basis_kind(kind);
    run_ora(data, &cfg).map(|r| r.rms).map_err(|e| e.to_string())
}

/// Worker count: `ORA_THREADS` if set to a positive integer, otherwise the
/// available parallelism, never more than the number of jobs.
fn thread_count(jobs: usize) -> usize {
    let requested = std::env::var("ORA_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    let n = requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    n.clamp(1, jobs.max(1))
}

fn sweep(data: &ResponseSet, opts: &FitOpts, orders: &[usize], compare: bool) -> Vec<Row> {
    let next = AtomicUsize::new(0);
    let mut rows: Vec<Row> = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..thread_count(orders.len()))
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&order) = orders.get(i) else { break };
                        let ora = fit_rms(data, opts, order, BasisKind::OrthogonalRational);
                        let poly = compare.then(|| fit_rms(data, opts, order, BasisKind::OrthogonalPolynomial));
                        done.push(Row { order, ora, poly });
                    }
                    done
                })
            })
            .collect();
        workers.into_iter().flat_map(|w| w.join().expect("report worker panicked")).collect()
    });
    rows.sort_by_key(|r| r.order);
    rows
}

fn cell(r: &std::result::Result<f64, String>) -> String {
    r.as_ref().map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn run(args: ReportArgs, ui: &Ui) -> Result<()> {
    let orders = parse_orders(&args.orders)?;
    if args.opts.iters == 0 {
        return Err(CliError::Usage("at least one iteration is required".into()));
    }
    let (path, input) = load_input(args.input, &args.opts, ui)?;
    let compare = args.compare == Some(Compare::Polybasis);
    let rows = sweep(&input.data, &args.opts, &orders, compare);

    let mut out = String::from(if compare { "order,rms_ora,rms_polybasis\n" } else { "order,rms_ora\n" });
    for r in &rows {
        let _ = write!(out, "{},{}", r.order, cell(&r.ora));
        if let Some(p) = &r.poly {
            let _ = write!(out, ",{}", cell(p));
        }
        out.push('\n');
        if let Err(e) = &r.ora {
            ui.warn(&format!("order {}: {e}", r.order));
        }
        if let Some(Err(e)) = &r.poly {
            ui.warn(&format!("order {} (polybasis): {e}", r.order));
        }
    }
    let out_path = args.output.unwrap_or_else(|| sibling(&path, "report.csv"));
    write_atomic(&out_path, &out)?;
    ui.info(&format!("wrote {} ({} orders)", out_path.display(), rows.len()));
    if rows.iter().all(|r| r.ora.is_err()) {
        return Err(CliError::Numerical("numerical", "every order failed".into()));
    }
    Ok(())
}
