use std::collections::BTreeMap;
use std::fmt;

use super::{tchebychev_check, AnalysisError, Tolerances};
use crate::geometry::{centroaffine_data, CentroaffineData};
use crate::immersion::Immersion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    QuadricCentered,
    HyperquadricOffCenter,
    ParallelCubicForm,
    EqualityUndetermined,
    Strict,
}

impl Verdict {
    /// Stable machine-readable key.
    pub fn key(self) -> &'static str {
        match self {
            Verdict::QuadricCentered => "quadric_centered",
            Verdict::HyperquadricOffCenter => "hyperquadric_off_center",
            Verdict::ParallelCubicForm => "parallel_cubic_form",
            Verdict::EqualityUndetermined => "equality_undetermined",
            Verdict::Strict => "strict",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Verdict::QuadricCentered => "quadric centered at origin",
            Verdict::HyperquadricOffCenter => "hyperquadric without center at origin (case (i))",
            Verdict::ParallelCubicForm => "parallel cubic form (cases (ii)-(viii))",
            Verdict::EqualityUndetermined => "equality point, mixed/undetermined",
            Verdict::Strict => "strict inequality",
        }
    }

    pub fn is_equality(self) -> bool {
        self != Verdict::Strict
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Predicates {
    pub k_zero: bool,
    pub ktilde_zero: bool,
    pub nabla_k_zero: bool,
    pub equality: bool,
    pub tchebychev: bool,
    pub tchebychev_lambda: f64,
    pub mu: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointClassification {
    pub point: Vec<f64>,
    pub predicates: Predicates,
    pub verdict: Verdict,
}

pub fn classify_point(data: &CentroaffineData, tol: &Tolerances) -> PointClassification {
    let norm_k = data.norm_k();
    let tz = tol.zero;
    let tch = tchebychev_check(data, tol.tchebychev);
    let predicates = Predicates {
        k_zero: norm_k <= tz,
        ktilde_zero: data.norms.ktilde2.sqrt() <= tz * (1.0 + norm_k),
        nabla_k_zero: data.norm_nabla_k() <= tz * (1.0 + norm_k),
        equality: data.norms.slack <= tol.equality * (1.0 + data.norms.nabla_k2),
        tchebychev: tch.is_tchebychev,
        tchebychev_lambda: tch.lambda,
        mu: data.norms.mu,
    };
    let p = &predicates;
    let verdict = if p.k_zero {
        Verdict::QuadricCentered
    } else if p.ktilde_zero {
        Verdict::HyperquadricOffCenter
    } else if p.nabla_k_zero {
        Verdict::ParallelCubicForm
    } else if p.equality {
        Verdict::EqualityUndetermined
    } else {
        Verdict::Strict
    };
    PointClassification { point: data.point.clone(), predicates, verdict }
}

/// A point that could not be evaluated, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct SkippedPoint {
    pub point: Vec<f64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceClassification {
    pub points: Vec<PointClassification>,
    pub skipped: Vec<SkippedPoint>,
    /// Equality held at every evaluated point.
    pub equality_everywhere: bool,
    /// The verdict shared by every evaluated point, if there is one.
    pub uniform_verdict: Option<Verdict>,
    pub counts: BTreeMap<Verdict, usize>,
}

impl SurfaceClassification {
    pub fn summary(&self) -> String {
        match (self.uniform_verdict, self.equality_everywhere) {
            (Some(v), _) => format!("{v} at all sampled points"),
            (None, true) => "equality at all sampled points (mixed cases)".to_string(),
            (None, false) if self.counts.get(&Verdict::Strict) == Some(&self.points.len()) => {
                "strict inequality at all sampled points".to_string()
            }
            (None, false) => "mixed: equality at some sampled points only".to_string(),
        }
    }
}

/// Aggregates per-point results, in the order given.
pub fn aggregate(
    points: Vec<PointClassification>,
    skipped: Vec<SkippedPoint>,
) -> Result<SurfaceClassification, AnalysisError> {
    if points.is_empty() {
        return Err(AnalysisError::EmptySample { skipped: skipped.len() });
    }
    let mut counts = BTreeMap::new();
    for p in &points {
        *counts.entry(p.verdict).or_insert(0) += 1;
    }
    let uniform_verdict = if counts.len() == 1 { Some(points[0].verdict) } else { None };
    let equality_everywhere = points.iter().all(|p| p.predicates.equality);
    Ok(SurfaceClassification { points, skipped, equality_everywhere, uniform_verdict, counts })
}

/// Classifies every point of `points`, skipping those where the pipeline fails.
pub fn classify_surface(
    surface: &dyn Immersion,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<SurfaceClassification, AnalysisError> {
    let mut ok = Vec::new();
    let mut skipped = Vec::new();
    for p in points {
        match centroaffine_data(surface, p) {
            Ok(d) => ok.push(classify_point(&d, tol)),
            Err(e) => skipped.push(SkippedPoint { point: p.clone(), reason: e.to_string() }),
        }
    }
    aggregate(ok, skipped)
}
