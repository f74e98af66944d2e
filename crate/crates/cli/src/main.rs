//! `ora`: fit, evaluate and report on rational macromodels of network data.
//!
//! Exit status: 0 on success, 1 on numerical failure, 2 on usage or I/O errors.

mod args;
mod error;
mod eval;
mod fit;
mod io;
mod report;

use clap::Parser;

use args::{Cli, Command};

/// Diagnostics sink honouring `--quiet` and `--verbose`.
pub struct Ui {
    quiet: bool,
    verbose: u8,
}

impl Ui {
    pub fn info(&self, msg: &str) {
        if !self.quiet {
            println!("{msg}");
        }
    }

    pub fn warn(&self, msg: &str) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }

    pub fn debug(&self, msg: &str) {
        if self.verbose > 0 && !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let ui = Ui { quiet: cli.quiet, verbose: cli.verbose };
    let result = match cli.command {
        Command::Fit(a) => fit::run(a, &ui),
        Command::Eval(a) => eval::run(a, &ui),
        Command::Report(a) => report::run(a, &ui),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
