use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use centroaffine::analysis::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Invariants,
    Inequality,
    Ejiri,
    Identities,
    Classify,
    Residuals,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Invariants, Check::Inequality, Check::Ejiri, Check::Identities, Check::Classify, Check::Residuals];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Invariants => "invariants",
            Check::Inequality => "inequality",
            Check::Ejiri => "ejiri",
            Check::Identities => "identities",
            Check::Classify => "classify",
            Check::Residuals => "residuals",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check '{s}' (expected one of invariants, inequality, ejiri, identities, classify, residuals)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Where the surface comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceSource {
    Catalog(String),
    File(PathBuf),
}

impl fmt::Display for SurfaceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceSource::Catalog(name) => f.write_str(name),
            SurfaceSource::File(path) => write!(f, "{}", path.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sampling {
    Points(Vec<Vec<f64>>),
    /// Equally spaced values per axis; a single count applies to every axis.
    Grid { counts: Vec<usize> },
    Random { count: usize },
}

/// Every threshold a run applies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceSet {
    pub analysis: Tolerances,
    /// Negative slack and slack-route disagreement, relative to `1 + ‖∇̂K‖²`.
    pub inequality: f64,
    /// `λ₁ ≥ 2λᵢ` slack, relative to `1 + ‖K‖`.
    pub ejiri: f64,
    /// `e_l(μ) = 0` and the two component identities.
    pub identity_tangential: f64,
    /// The `e₁(μ)` identity.
    pub identity_normal: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            analysis: Tolerances::default(),
            inequality: 1e-8,
            ejiri: 1e-7,
            identity_tangential: 1e-6,
            identity_normal: 1e-5,
        }
    }
}

impl ToleranceSet {
    /// Name/value pairs in a fixed order, as reported.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("zero", self.analysis.zero),
            ("equality", self.analysis.equality),
            ("tchebychev", self.analysis.tchebychev),
            ("isotropy", self.analysis.isotropy),
            ("structure", self.analysis.structure),
            ("inequality", self.inequality),
            ("ejiri", self.ejiri),
            ("identity_tangential", self.identity_tangential),
            ("identity_normal", self.identity_normal),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub surface: SurfaceSource,
    pub sampling: Sampling,
    /// Sample box override, one `(lo, hi)` per chart axis.
    pub bounds: Option<Vec<(f64, f64)>>,
    pub tolerances: ToleranceSet,
    pub seed: u64,
    pub format: OutputFormat,
    pub checks: Vec<Check>,
    /// Required aggregate verdict key for `classify`, if any.
    pub expect: Option<String>,
    pub jobs: Option<usize>,
}
