//! Command-line front end for the centroaffine invariant library.

pub mod args;
pub mod config;
pub mod report;
pub mod run;

use std::fmt::Write as _;

use centroaffine::catalog::catalog_entries;
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use crate::args::{CatalogAction, Cli, Command};
use crate::config::OutputFormat;
use crate::report::{build_report, render_csv, render_json, render_text, Float};
use crate::run::{run, EXIT_ERROR, EXIT_PASS};

/// Captured result of one invocation.
#[derive(Debug, Default)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Serialize)]
struct CatalogListing {
    name: String,
    dimension: usize,
    tags: Vec<&'static str>,
    sample_box: Vec<[Float; 2]>,
}

fn catalog_list(format: OutputFormat) -> String {
    let entries = catalog_entries();
    match format {
        OutputFormat::Json => {
            let listing: Vec<CatalogListing> = entries
                .iter()
                .map(|e| CatalogListing {
                    name: e.name().to_string(),
                    dimension: e.dim(),
                    tags: e.tags().iter().map(|t| t.as_str()).collect(),
                    sample_box: e.sample_box().iter().map(|&(lo, hi)| [Float(lo), Float(hi)]).collect(),
                })
                .collect();
            serde_json::to_string_pretty(&listing).expect("catalog listing serializes") + "\n"
        }
        _ => {
            let mut out = String::new();
            let width = entries.iter().map(|e| e.name().len()).max().unwrap_or(4).max(4);
            let _ = writeln!(out, "{:width$}  {:>3}  TAGS", "NAME", "N");
            for e in &entries {
                let tags: Vec<&str> = e.tags().iter().map(|t| t.as_str()).collect();
                let _ = writeln!(out, "{:width$}  {:>3}  {}", e.name(), e.dim(), tags.join(","));
            }
            out.push_str("\nParametrized families: unit_sphere_<n>, ellipsoid_<n>, hyperboloid_<n>, shifted_paraboloid_<n>,\n");
            out.push_str("canonical_viii_<n>, perturbed_graph_<n>[?seed=<u64>&amp=<f64>] for 2 <= n <= 8, and sl3_so3.\n");
            out
        }
    }
}

/// Runs one invocation with `argv` (including the program name).
pub fn execute<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Execution { stdout: text, stderr: String::new(), code: EXIT_PASS }
                }
                _ => Execution { stdout: String::new(), stderr: text, code: EXIT_ERROR },
            };
        }
    };
    if let Command::Catalog { action: CatalogAction::List } = &cli.command {
        return Execution { stdout: catalog_list(cli.options.format()), stderr: String::new(), code: EXIT_PASS };
    }
    let outcome = args::run_config(&cli.command, &cli.options).and_then(|config| {
        let outcome = run(&config)?;
        Ok((config, outcome))
    });
    match outcome {
        Ok((config, outcome)) => {
            let report = build_report(&config, &outcome);
            let stdout = match config.format {
                OutputFormat::Json => render_json(&report),
                OutputFormat::Csv => render_csv(&report),
                OutputFormat::Text => render_text(&report),
            };
            Execution { stdout, stderr: String::new(), code: outcome.exit_code() }
        }
        Err(e) => Execution { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_ERROR },
    }
}
