use std::path::{Path, PathBuf};

use centroaffine::analysis::{
    aggregate, classify_point, ejiri_basis, mu_gradient, proof_identity_check, tchebychev_check, EjiriBasis,
    IdentityStatus, PointClassification, SkippedPoint, SurfaceClassification, TchebychevCheck, MU_STEP,
};
use centroaffine::catalog::{grid_points, random_points, resolve, CatalogEntry, CatalogError};
use centroaffine::dsl::{parse_surface, ParseError};
use centroaffine::geometry::{
    centroaffine_data, gauss_codazzi_residuals, structure_residuals, CentroaffineData, Norms, Residuals,
    StructureResiduals,
};
use centroaffine::immersion::Immersion;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Check, RunConfig, Sampling, SurfaceSource};

/// Exit status of a run whose checks all passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status for usage, input and domain errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status when a requested check failed.
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("cannot read surface file {path}: {source}")]
    UnreadableFile { path: PathBuf, source: std::io::Error },
    #[error("invalid surface file {path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Catalog(CatalogError),
    #[error("{0}")]
    Usage(String),
    #[error("empty effective sample: none of the {skipped} requested points could be evaluated")]
    EmptySample { skipped: usize },
}

pub struct LoadedSurface {
    pub name: String,
    pub immersion: Box<dyn Immersion>,
    pub default_box: Option<Vec<(f64, f64)>>,
}

impl LoadedSurface {
    pub fn dim(&self) -> usize {
        self.immersion.dim()
    }
}

/// Treats `arg` as a file when it names an existing file or looks like a path.
pub fn surface_source(arg: &str) -> SurfaceSource {
    let path = Path::new(arg);
    let looks_like_path = !arg.contains('?') && (arg.contains('/') || path.extension().is_some());
    if path.is_file() || looks_like_path {
        SurfaceSource::File(path.to_path_buf())
    } else {
        SurfaceSource::Catalog(arg.to_string())
    }
}

pub fn load_surface(source: &SurfaceSource) -> Result<LoadedSurface, CliError> {
    match source {
        SurfaceSource::Catalog(name) => {
            let entry: CatalogEntry = resolve(name).map_err(|e| match e {
                CatalogError::UnknownSurface(n) => CliError::UnknownSurface(n),
                other => CliError::Catalog(other),
            })?;
            Ok(LoadedSurface {
                name: entry.name().to_string(),
                default_box: Some(entry.sample_box().to_vec()),
                immersion: Box::new(entry),
            })
        }
        SurfaceSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::UnreadableFile { path: path.clone(), source })?;
            let spec = parse_surface(&text).map_err(|source| CliError::Parse { path: path.clone(), source })?;
            Ok(LoadedSurface { name: spec.name.clone(), default_box: None, immersion: Box::new(spec) })
        }
    }
}

/// Sample points in a deterministic order.
pub fn sample(surface: &LoadedSurface, config: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let n = surface.dim();
    let bounds = match &config.bounds {
        Some(b) if b.len() != n => {
            return Err(CliError::Usage(format!("--box has {} axes but the surface has dimension {n}", b.len())))
        }
        Some(b) => b.clone(),
        None => surface.default_box.clone().unwrap_or_else(|| vec![(-0.5, 0.5); n]),
    };
    match &config.sampling {
        Sampling::Points(points) => {
            if let Some(p) = points.iter().find(|p| p.len() != n) {
                return Err(CliError::Usage(format!(
                    "point {p:?} has {} coordinates but the surface has dimension {n}",
                    p.len()
                )));
            }
            Ok(points.clone())
        }
        Sampling::Grid { counts } => {
            let counts = match counts.len() {
                1 => vec![counts[0]; n],
                len if len == n => counts.clone(),
                len => {
                    return Err(CliError::Usage(format!(
                        "--grid has {len} counts but the surface has dimension {n}"
                    )))
                }
            };
            Ok(grid_points(&bounds, &counts))
        }
        Sampling::Random { count } => Ok(random_points(&bounds, *count, config.seed)),
    }
}

/// Ejiri output reduced to what is reported.
#[derive(Clone, Debug, PartialEq)]
pub struct EjiriOutcome {
    pub basis: Option<EjiriBasis>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdentityOutcome {
    Status(IdentityStatus),
    Unavailable(String),
}

/// Everything computed at one point.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub index: usize,
    pub point: Vec<f64>,
    pub epsilon: f64,
    pub norms: Norms,
    pub residuals: Residuals,
    pub structure: StructureResiduals,
    pub tchebychev: TchebychevCheck,
    pub ejiri: Option<EjiriOutcome>,
    pub identities: Option<IdentityOutcome>,
    pub classification: Option<PointClassification>,
    pub checks: Vec<(Check, bool)>,
}

impl PointResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn evaluate_point(
    surface: &dyn Immersion,
    index: usize,
    point: &[f64],
    config: &RunConfig,
) -> Result<PointResult, String> {
    let data: CentroaffineData = centroaffine_data(surface, point).map_err(|e| e.to_string())?;
    let tol = &config.tolerances;
    let wants = |c: Check| config.checks.contains(&c);
    let norms = data.norms;
    let norm_k = data.norm_k();
    let residuals = gauss_codazzi_residuals(&data);
    let structure = structure_residuals(&data);
    let tchebychev = tchebychev_check(&data, tol.analysis.tchebychev);

    let ejiri = (wants(Check::Ejiri) || wants(Check::Identities)).then(|| match ejiri_basis(&data) {
        Ok(b) => EjiriOutcome { basis: Some(b), error: None },
        Err(e) => EjiriOutcome { basis: None, error: Some(e.to_string()) },
    });
    let identities = wants(Check::Identities).then(|| match ejiri.as_ref().and_then(|e| e.basis.as_ref()) {
        None => IdentityOutcome::Unavailable("no Ejiri basis".to_string()),
        Some(basis) => match mu_gradient(surface, point, MU_STEP) {
            Ok(grad) => IdentityOutcome::Status(proof_identity_check(&data, basis, &grad, tol.analysis.isotropy)),
            Err(e) => IdentityOutcome::Unavailable(format!("mu gradient: {e}")),
        },
    });
    let classification = wants(Check::Classify).then(|| classify_point(&data, &tol.analysis));

    let scale_k2 = 1.0 + norms.k2;
    let scale_nk2 = 1.0 + norms.nabla_k2;
    let mut checks = Vec::new();
    for &check in &config.checks {
        let ok = match check {
            Check::Invariants | Check::Classify => true,
            Check::Inequality => {
                norms.slack >= -tol.inequality * scale_nk2
                    && structure.slack_agreement <= tol.inequality * scale_nk2
            }
            Check::Residuals => {
                let ts = tol.analysis.structure;
                residuals.gauss <= ts * scale_k2
                    && residuals.codazzi <= ts * scale_k2
                    && structure.nabla_k_symmetry <= ts * (1.0 + data.norm_nabla_k())
                    && structure.c_symmetry <= ts * (1.0 + norm_k)
                    && structure.ktilde_trace <= ts * (1.0 + norm_k)
                    && structure.tchebychev_trace <= ts * (1.0 + norm_k)
            }
            Check::Ejiri => match ejiri.as_ref().and_then(|e| e.basis.as_ref()) {
                Some(b) => b.degenerate || b.dominance_gap() <= tol.ejiri * (1.0 + norm_k),
                None => false,
            },
            Check::Identities => match &identities {
                Some(IdentityOutcome::Status(IdentityStatus::Checked(r))) => {
                    r.mu_tangential <= tol.identity_tangential
                        && r.mixed_components <= tol.identity_tangential
                        && r.diagonal_components <= tol.identity_tangential
                        && r.mu_normal <= tol.identity_normal
                }
                Some(IdentityOutcome::Status(_)) => true,
                _ => false,
            },
        };
        checks.push((check, ok));
    }

    Ok(PointResult {
        index,
        point: point.to_vec(),
        epsilon: data.epsilon,
        norms,
        residuals,
        structure,
        tchebychev,
        ejiri,
        identities,
        classification,
        checks,
    })
}

/// Result of a whole run, before rendering.
pub struct RunOutcome {
    pub surface_name: String,
    pub dimension: usize,
    pub requested: usize,
    pub points: Vec<PointResult>,
    pub skipped: Vec<SkippedPoint>,
    pub classification: Option<SurfaceClassification>,
    /// `Some(matched)` when an expected verdict was given.
    pub expectation: Option<bool>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.points.iter().all(PointResult::passed) && self.expectation != Some(false)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

fn job_count(config: &RunConfig) -> Result<Option<usize>, CliError> {
    if let Some(j) = config.jobs {
        return Ok(Some(j));
    }
    match std::env::var("CAFF_JOBS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&j| j >= 1)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("CAFF_JOBS must be a positive integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let surface = load_surface(&config.surface)?;
    let points = sample(&surface, config)?;
    let immersion: &dyn Immersion = surface.immersion.as_ref();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = job_count(config)? {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<PointResult, String>> = pool.install(|| {
        points.par_iter().enumerate().map(|(i, p)| evaluate_point(immersion, i, p, config)).collect()
    });

    let mut evaluated = Vec::new();
    let mut skipped = Vec::new();
    for (p, r) in points.iter().zip(results) {
        match r {
            Ok(res) => evaluated.push(res),
            Err(reason) => skipped.push(SkippedPoint { point: p.clone(), reason }),
        }
    }
    if evaluated.is_empty() {
        return Err(CliError::EmptySample { skipped: skipped.len() });
    }

    let classification = if config.checks.contains(&Check::Classify) {
        let per_point: Vec<PointClassification> =
            evaluated.iter().filter_map(|r| r.classification.clone()).collect();
        Some(aggregate(per_point, skipped.clone()).map_err(|_| CliError::EmptySample { skipped: skipped.len() })?)
    } else {
        None
    };
    let expectation = config.expect.as_ref().map(|want| match &classification {
        Some(c) => match want.as_str() {
            "equality_everywhere" => c.equality_everywhere,
            key => c.uniform_verdict.is_some_and(|v| v.key() == key),
        },
        None => false,
    });

    Ok(RunOutcome {
        surface_name: surface.name.clone(),
        dimension: surface.dim(),
        requested: points.len(),
        points: evaluated,
        skipped,
        classification,
        expectation,
    })
}
