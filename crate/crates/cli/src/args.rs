use clap::{Args, Parser, Subcommand};

use crate::config::{Check, OutputFormat, RunConfig, Sampling, ToleranceSet};
use crate::run::{surface_source, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "caff",
    version,
    about = "Centroaffine invariants, the optimal inequality and equality-case classification for hypersurfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in surfaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Report the pointwise invariants.
    Invariants { surface: String },
    /// Verify the inequality and the structural identities.
    Check { surface: String },
    /// Construct the Ejiri basis and check the eigenvalue bound.
    Ejiri { surface: String },
    /// Classify sample points against the equality cases.
    Classify {
        surface: String,
        /// Fail unless the aggregate verdict is this key (or `equality_everywhere`).
        #[arg(long)]
        expect: Option<String>,
    },
    /// Check the identities that hold where the covariant derivative of K is isotropic.
    Identities { surface: String },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// List names, dimensions, tags and default sample boxes.
    List,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Emit a JSON report.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit one CSV row per evaluated point.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Grid counts per axis, e.g. `10` or `5x8`.
    #[arg(long, global = true, conflicts_with_all = ["point", "samples"])]
    pub grid: Option<String>,
    /// Explicit chart point `a,b,...`; repeatable.
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "samples")]
    pub point: Vec<String>,
    /// Sample box `lo:hi,lo:hi,...` (defaults to the catalog box, or [-0.5,0.5] per axis).
    #[arg(long = "box", global = true, allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Number of seeded random points (default 20).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Comma-separated checks, overriding the command's default set.
    #[arg(long, global = true)]
    pub checks: Option<String>,
    /// Worker threads (also `CAFF_JOBS`).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_zero: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_equality: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_tchebychev: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_isotropy: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_structure: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_inequality: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_ejiri: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_identity_tangential: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_identity_normal: Option<f64>,
}

fn parse_reals(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("invalid {what} '{text}'")))
        })
        .collect()
}

fn parse_grid(text: &str) -> Result<Vec<usize>, CliError> {
    let counts: Vec<usize> = text
        .split(['x', 'X', ','])
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("invalid --grid '{text}'")))?;
    if counts.contains(&0) {
        return Err(CliError::Usage("grid counts must be at least 1".into()));
    }
    Ok(counts)
}

fn parse_box(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .map(|axis| {
            let bad = || CliError::Usage(format!("invalid --box axis '{axis}' (expected lo:hi with lo < hi)"));
            let (lo, hi) = axis.split_once(':').ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            if lo.is_finite() && hi.is_finite() && lo < hi {
                Ok((lo, hi))
            } else {
                Err(bad())
            }
        })
        .collect()
}

fn parse_checks(text: &str) -> Result<Vec<Check>, CliError> {
    let mut checks: Vec<Check> =
        text.split(',').map(|s| s.trim().parse::<Check>().map_err(CliError::Usage)).collect::<Result<_, _>>()?;
    checks.sort();
    checks.dedup();
    if checks.is_empty() {
        return Err(CliError::Usage("--checks needs at least one check".into()));
    }
    Ok(checks)
}

fn tolerance(value: Option<f64>, default: f64, flag: &str) -> Result<f64, CliError> {
    match value {
        None => Ok(default),
        Some(v) if v.is_finite() && v > 0.0 => Ok(v),
        Some(v) => Err(CliError::Usage(format!("--{flag} must be a positive number, got {v}"))),
    }
}

impl Options {
    pub fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Text
        }
    }

    fn tolerances(&self) -> Result<ToleranceSet, CliError> {
        let d = ToleranceSet::default();
        let mut t = d;
        t.analysis.zero = tolerance(self.tol_zero, d.analysis.zero, "tol-zero")?;
        t.analysis.equality = tolerance(self.tol_equality, d.analysis.equality, "tol-equality")?;
        t.analysis.tchebychev = tolerance(self.tol_tchebychev, d.analysis.tchebychev, "tol-tchebychev")?;
        t.analysis.isotropy = tolerance(self.tol_isotropy, d.analysis.isotropy, "tol-isotropy")?;
        t.analysis.structure = tolerance(self.tol_structure, d.analysis.structure, "tol-structure")?;
        t.inequality = tolerance(self.tol_inequality, d.inequality, "tol-inequality")?;
        t.ejiri = tolerance(self.tol_ejiri, d.ejiri, "tol-ejiri")?;
        t.identity_tangential =
            tolerance(self.tol_identity_tangential, d.identity_tangential, "tol-identity-tangential")?;
        t.identity_normal = tolerance(self.tol_identity_normal, d.identity_normal, "tol-identity-normal")?;
        Ok(t)
    }
}

/// Builds the run configuration for a surface command.
pub fn run_config(command: &Command, options: &Options) -> Result<RunConfig, CliError> {
    let (name, surface, default_checks, expect) = match command {
        Command::Catalog { .. } => unreachable!("catalog commands do not run the pipeline"),
        Command::Invariants { surface } => ("invariants", surface, vec![Check::Invariants], None),
        Command::Check { surface } => {
            ("check", surface, vec![Check::Inequality, Check::Residuals], None)
        }
        Command::Ejiri { surface } => ("ejiri", surface, vec![Check::Ejiri], None),
        Command::Classify { surface, expect } => ("classify", surface, vec![Check::Classify], expect.clone()),
        Command::Identities { surface } => ("identities", surface, vec![Check::Identities], None),
    };
    let checks = match &options.checks {
        Some(text) => parse_checks(text)?,
        None => default_checks,
    };
    if expect.is_some() && !checks.contains(&Check::Classify) {
        return Err(CliError::Usage("--expect needs the classify check".into()));
    }
    let sampling = if !options.point.is_empty() {
        Sampling::Points(options.point.iter().map(|p| parse_reals(p, "--point")).collect::<Result<_, _>>()?)
    } else if let Some(g) = &options.grid {
        Sampling::Grid { counts: parse_grid(g)? }
    } else {
        let count = options.samples.unwrap_or(20);
        if count == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        Sampling::Random { count }
    };
    if options.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(RunConfig {
        command: name.to_string(),
        surface: surface_source(surface),
        sampling,
        bounds: options.bounds.as_deref().map(parse_box).transpose()?,
        tolerances: options.tolerances()?,
        seed: options.seed,
        format: options.format(),
        checks,
        expect,
        jobs: options.jobs,
    })
}
