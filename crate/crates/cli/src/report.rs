//! Report assembly and rendering (text, JSON, CSV).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use centroaffine::analysis::IdentityStatus;
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::{RunConfig, Sampling};
use crate::run::{IdentityOutcome, PointResult, RunOutcome};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// A float written with 17 significant digits; non-finite values become `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Float(pub f64);

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        RawValue::from_string(format_float(self.0)).map_err(S::Error::custom)?.serialize(serializer)
    }
}

fn floats(v: &[f64]) -> Vec<Float> {
    v.iter().copied().map(Float).collect()
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub generated_at_unix: u64,
    pub tool: ToolInfo,
    pub config: ConfigInfo,
    pub points: Vec<PointReport>,
    pub skipped: Vec<SkippedReport>,
    pub aggregate: AggregateReport,
}

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct ConfigInfo {
    pub command: String,
    pub surface: String,
    pub dimension: usize,
    pub checks: Vec<&'static str>,
    pub seed: u64,
    pub sampling: SamplingInfo,
    pub bounds: Option<Vec<[Float; 2]>>,
    pub tolerances: BTreeMap<&'static str, Float>,
    pub expect: Option<String>,
}

#[derive(Serialize)]
pub struct SamplingInfo {
    pub kind: &'static str,
    pub counts: Option<Vec<usize>>,
    pub count: usize,
}

#[derive(Serialize)]
pub struct InvariantsReport {
    pub norm_k2: Float,
    pub norm_ktilde2: Float,
    pub norm_nabla_k2: Float,
    pub norm_nabla_t2: Float,
    pub norm_t2: Float,
    pub norm_rhat2: Float,
    pub scalar_curvature: Float,
    pub slack: Float,
    pub slack_difference: Float,
    pub mu: Float,
    pub tchebychev_lambda: Float,
    pub tchebychev_residual: Float,
    pub is_tchebychev: bool,
}

#[derive(Serialize)]
pub struct ResidualsReport {
    pub gauss: Float,
    pub codazzi: Float,
    pub nabla_k_symmetry: Float,
    pub c_symmetry: Float,
    pub ktilde_trace: Float,
    pub tchebychev_trace: Float,
    pub slack_agreement: Float,
}

#[derive(Serialize)]
pub struct EjiriReport {
    /// `ok`, `degenerate` or `failed`.
    pub status: &'static str,
    pub error: Option<String>,
    pub fmax: Option<Float>,
    pub lambda: Vec<Float>,
    pub vectors: Vec<Vec<Float>>,
    pub converged_starts: usize,
}

#[derive(Serialize)]
pub struct IdentityReport {
    /// `checked`, `not_applicable`, `degenerate` or `unavailable`.
    pub status: &'static str,
    pub reason: Option<String>,
    pub isotropy_deviation: Option<Float>,
    pub directional_mu: Vec<Float>,
    pub mu_tangential: Option<Float>,
    pub mu_normal: Option<Float>,
    pub mixed_components: Option<Float>,
    pub diagonal_components: Option<Float>,
}

#[derive(Serialize)]
pub struct ClassificationReport {
    pub verdict: &'static str,
    pub description: &'static str,
    pub k_zero: bool,
    pub ktilde_zero: bool,
    pub nabla_k_zero: bool,
    pub equality: bool,
    pub tchebychev: bool,
}

#[derive(Serialize)]
pub struct PointReport {
    pub index: usize,
    pub point: Vec<Float>,
    pub epsilon: Float,
    pub invariants: InvariantsReport,
    pub residuals: ResidualsReport,
    pub ejiri: Option<EjiriReport>,
    pub identities: Option<IdentityReport>,
    pub classification: Option<ClassificationReport>,
    pub checks: BTreeMap<&'static str, bool>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct SkippedReport {
    pub point: Vec<Float>,
    pub reason: String,
}

#[derive(Serialize)]
pub struct CheckSummary {
    pub failed_points: usize,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct AggregateClassification {
    pub verdict: Option<&'static str>,
    pub summary: String,
    pub equality_everywhere: bool,
    pub counts: BTreeMap<&'static str, usize>,
}

#[derive(Serialize)]
pub struct AggregateReport {
    pub requested: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub min_slack: Float,
    pub max_slack_disagreement: Float,
    pub max_gauss_residual: Float,
    pub max_codazzi_residual: Float,
    pub max_nabla_k_asymmetry: Float,
    pub min_mu: Float,
    pub max_mu: Float,
    pub checks: BTreeMap<&'static str, CheckSummary>,
    pub classification: Option<AggregateClassification>,
    pub expectation_met: Option<bool>,
    pub passed: bool,
}

fn point_report(r: &PointResult) -> PointReport {
    let n = &r.norms;
    let ejiri = r.ejiri.as_ref().map(|e| match &e.basis {
        Some(b) => EjiriReport {
            status: if b.degenerate { "degenerate" } else { "ok" },
            error: None,
            fmax: Some(Float(b.fmax)),
            lambda: floats(&b.lambda),
            vectors: b.vectors.iter().map(|v| floats(v)).collect(),
            converged_starts: b.converged_starts,
        },
        None => EjiriReport {
            status: "failed",
            error: e.error.clone(),
            fmax: None,
            lambda: vec![],
            vectors: vec![],
            converged_starts: 0,
        },
    });
    let identities = r.identities.as_ref().map(|id| {
        let empty = |status, reason, deviation| IdentityReport {
            status,
            reason,
            isotropy_deviation: deviation,
            directional_mu: vec![],
            mu_tangential: None,
            mu_normal: None,
            mixed_components: None,
            diagonal_components: None,
        };
        match id {
            IdentityOutcome::Status(IdentityStatus::Checked(res)) => IdentityReport {
                status: "checked",
                reason: None,
                isotropy_deviation: None,
                directional_mu: floats(&res.directional_mu),
                mu_tangential: Some(Float(res.mu_tangential)),
                mu_normal: Some(Float(res.mu_normal)),
                mixed_components: Some(Float(res.mixed_components)),
                diagonal_components: Some(Float(res.diagonal_components)),
            },
            IdentityOutcome::Status(IdentityStatus::NotApplicable { deviation }) => {
                empty("not_applicable", None, Some(Float(*deviation)))
            }
            IdentityOutcome::Status(IdentityStatus::Degenerate) => empty("degenerate", None, None),
            IdentityOutcome::Unavailable(reason) => empty("unavailable", Some(reason.clone()), None),
        }
    });
    let classification = r.classification.as_ref().map(|c| ClassificationReport {
        verdict: c.verdict.key(),
        description: c.verdict.describe(),
        k_zero: c.predicates.k_zero,
        ktilde_zero: c.predicates.ktilde_zero,
        nabla_k_zero: c.predicates.nabla_k_zero,
        equality: c.predicates.equality,
        tchebychev: c.predicates.tchebychev,
    });
    PointReport {
        index: r.index,
        point: floats(&r.point),
        epsilon: Float(r.epsilon),
        invariants: InvariantsReport {
            norm_k2: Float(n.k2),
            norm_ktilde2: Float(n.ktilde2),
            norm_nabla_k2: Float(n.nabla_k2),
            norm_nabla_t2: Float(n.nabla_t2),
            norm_t2: Float(n.t2),
            norm_rhat2: Float(n.rhat2),
            scalar_curvature: Float(n.scalar_curvature),
            slack: Float(n.slack),
            slack_difference: Float(n.slack_difference),
            mu: Float(n.mu),
            tchebychev_lambda: Float(r.tchebychev.lambda),
            tchebychev_residual: Float(r.tchebychev.residual),
            is_tchebychev: r.tchebychev.is_tchebychev,
        },
        residuals: ResidualsReport {
            gauss: Float(r.residuals.gauss),
            codazzi: Float(r.residuals.codazzi),
            nabla_k_symmetry: Float(r.structure.nabla_k_symmetry),
            c_symmetry: Float(r.structure.c_symmetry),
            ktilde_trace: Float(r.structure.ktilde_trace),
            tchebychev_trace: Float(r.structure.tchebychev_trace),
            slack_agreement: Float(r.structure.slack_agreement),
        },
        ejiri,
        identities,
        classification,
        checks: r.checks.iter().map(|(c, ok)| (c.as_str(), *ok)).collect(),
        passed: r.passed(),
    }
}

fn fold(outcome: &RunOutcome, f: impl Fn(&PointResult) -> f64, pick: fn(f64, f64) -> f64, start: f64) -> Float {
    Float(outcome.points.iter().map(f).fold(start, pick))
}

pub fn build_report(config: &RunConfig, outcome: &RunOutcome) -> Report {
    let sampling = match &config.sampling {
        Sampling::Points(p) => SamplingInfo { kind: "points", counts: None, count: p.len() },
        Sampling::Grid { counts } => SamplingInfo { kind: "grid", counts: Some(counts.clone()), count: outcome.requested },
        Sampling::Random { count } => SamplingInfo { kind: "random", counts: None, count: *count },
    };
    let checks = config
        .checks
        .iter()
        .map(|&c| {
            let failed = outcome.points.iter().filter(|p| p.checks.iter().any(|(k, ok)| *k == c && !ok)).count();
            (c.as_str(), CheckSummary { failed_points: failed, passed: failed == 0 })
        })
        .collect();
    let classification = outcome.classification.as_ref().map(|c| AggregateClassification {
        verdict: c.uniform_verdict.map(|v| v.key()),
        summary: c.summary(),
        equality_everywhere: c.equality_everywhere,
        counts: c.counts.iter().map(|(v, n)| (v.key(), *n)).collect(),
    });
    let inf = f64::INFINITY;
    Report {
        schema_version: SCHEMA_VERSION,
        generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        tool: ToolInfo { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") },
        config: ConfigInfo {
            command: config.command.clone(),
            surface: outcome.surface_name.clone(),
            dimension: outcome.dimension,
            checks: config.checks.iter().map(|c| c.as_str()).collect(),
            seed: config.seed,
            sampling,
            bounds: config.bounds.as_ref().map(|b| b.iter().map(|&(lo, hi)| [Float(lo), Float(hi)]).collect()),
            tolerances: config.tolerances.entries().into_iter().map(|(k, v)| (k, Float(v))).collect(),
            expect: config.expect.clone(),
        },
        points: outcome.points.iter().map(point_report).collect(),
        skipped: outcome
            .skipped
            .iter()
            .map(|s| SkippedReport { point: floats(&s.point), reason: s.reason.clone() })
            .collect(),
        aggregate: AggregateReport {
            requested: outcome.requested,
            evaluated: outcome.points.len(),
            skipped: outcome.skipped.len(),
            min_slack: fold(outcome, |p| p.norms.slack, f64::min, inf),
            max_slack_disagreement: fold(
                outcome,
                |p| p.structure.slack_agreement / (1.0 + p.norms.nabla_k2),
                f64::max,
                0.0,
            ),
            max_gauss_residual: fold(outcome, |p| p.residuals.gauss, f64::max, 0.0),
            max_codazzi_residual: fold(outcome, |p| p.residuals.codazzi, f64::max, 0.0),
            max_nabla_k_asymmetry: fold(outcome, |p| p.structure.nabla_k_symmetry, f64::max, 0.0),
            min_mu: fold(outcome, |p| p.norms.mu, f64::min, inf),
            max_mu: fold(outcome, |p| p.norms.mu, f64::max, -inf),
            checks,
            classification,
            expectation_met: outcome.expectation,
            passed: outcome.passed(),
        },
    }
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

/// Fixed CSV columns; `u1..un` and `lambda_1..lambda_n` expand with the dimension.
pub fn csv_header(n: usize) -> Vec<String> {
    let mut h = vec!["index".to_string()];
    h.extend((1..=n).map(|i| format!("u{i}")));
    h.extend(
        [
            "epsilon",
            "norm_k2",
            "norm_ktilde2",
            "norm_nabla_k2",
            "norm_nabla_t2",
            "slack",
            "slack_difference",
            "mu",
            "tchebychev_lambda",
            "gauss_residual",
            "codazzi_residual",
            "nabla_k_symmetry",
        ]
        .map(String::from),
    );
    h.extend((1..=n).map(|i| format!("lambda_{i}")));
    h.extend(["verdict", "passed"].map(String::from));
    h
}

pub fn render_csv(report: &Report) -> String {
    let n = report.config.dimension;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(n)).expect("in-memory write");
    for p in &report.points {
        let f = |x: &Float| format_float(x.0);
        let mut row = vec![p.index.to_string()];
        row.extend(p.point.iter().map(f));
        let inv = &p.invariants;
        row.extend(
            [
                &p.epsilon,
                &inv.norm_k2,
                &inv.norm_ktilde2,
                &inv.norm_nabla_k2,
                &inv.norm_nabla_t2,
                &inv.slack,
                &inv.slack_difference,
                &inv.mu,
                &inv.tchebychev_lambda,
                &p.residuals.gauss,
                &p.residuals.codazzi,
                &p.residuals.nabla_k_symmetry,
            ]
            .map(f),
        );
        let lambda = p.ejiri.as_ref().map(|e| e.lambda.as_slice()).unwrap_or(&[]);
        row.extend((0..n).map(|i| lambda.get(i).map(f).unwrap_or_default()));
        row.push(p.classification.as_ref().map(|c| c.verdict.to_string()).unwrap_or_default());
        row.push(p.passed.to_string());
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3e}")
    } else {
        "-".to_string()
    }
}

pub fn render_text(report: &Report) -> String {
    let c = &report.config;
    let a = &report.aggregate;
    let mut out = String::new();
    let _ = writeln!(out, "surface   {} (n = {})", c.surface, c.dimension);
    let _ = writeln!(out, "command   {}   checks: {}", c.command, c.checks.join(", "));
    let _ = writeln!(out, "sample    {} requested, {} evaluated, {} skipped", a.requested, a.evaluated, a.skipped);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>4}  {:<28} {:>3} {:>11} {:>11} {:>11} {:>11} {:>10} {:>10}  notes",
        "#", "point", "eps", "|nabla K|^2", "|nabla T|^2", "slack", "mu", "gauss", "codazzi"
    );
    for p in &report.points {
        let point = p.point.iter().map(|x| format!("{:.4}", x.0)).collect::<Vec<_>>().join(", ");
        let mut notes = Vec::new();
        if let Some(e) = &p.ejiri {
            let l: Vec<String> = e.lambda.iter().map(|x| format!("{:.4}", x.0)).collect();
            notes.push(format!("ejiri {} [{}]", e.status, l.join(", ")));
        }
        if let Some(id) = &p.identities {
            let mut s = format!("identities {}", id.status);
            if let (Some(t), Some(nm)) = (id.mu_tangential, id.mu_normal) {
                let _ = write!(s, " ({:.1e}, {:.1e})", t.0, nm.0);
            }
            notes.push(s);
        }
        if let Some(cl) = &p.classification {
            notes.push(cl.description.to_string());
        }
        if !p.passed {
            let failed: Vec<&str> = p.checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
            notes.push(format!("FAILED {}", failed.join(",")));
        }
        let inv = &p.invariants;
        let _ = writeln!(
            out,
            "{:>4}  {:<28} {:>+3} {:>11} {:>11} {:>11} {:>11} {:>10} {:>10}  {}",
            p.index,
            format!("({point})"),
            p.epsilon.0 as i32,
            sci(inv.norm_nabla_k2.0),
            sci(inv.norm_nabla_t2.0),
            sci(inv.slack.0),
            sci(inv.mu.0),
            sci(p.residuals.gauss.0),
            sci(p.residuals.codazzi.0),
            notes.join("; ")
        );
    }
    for s in &report.skipped {
        let point = s.point.iter().map(|x| format!("{:.4}", x.0)).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "skipped ({point}): {}", s.reason);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "min slack              {}", sci(a.min_slack.0));
    let _ = writeln!(out, "max slack disagreement {}", sci(a.max_slack_disagreement.0));
    let _ = writeln!(out, "max gauss residual     {}", sci(a.max_gauss_residual.0));
    let _ = writeln!(out, "max codazzi residual   {}", sci(a.max_codazzi_residual.0));
    let _ = writeln!(out, "mu range               [{}, {}]", sci(a.min_mu.0), sci(a.max_mu.0));
    if let Some(cl) = &a.classification {
        let _ = writeln!(out, "classification         {}", cl.summary);
    }
    if let Some(met) = a.expectation_met {
        let _ = writeln!(out, "expected verdict       {}", if met { "met" } else { "NOT met" });
    }
    for (name, s) in &a.checks {
        let status = if s.passed { "pass".to_string() } else { format!("FAIL ({} points)", s.failed_points) };
        let _ = writeln!(out, "check {name:<16} {status}");
    }
    let _ = writeln!(out, "result                 {}", if a.passed { "PASS" } else { "FAIL" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for x in [0.0, -0.5, 1.0 / 3.0, 6.02214076e23, f64::MIN_POSITIVE, -1e-300] {
            let text = serde_json::to_string(&Float(x)).unwrap();
            assert_eq!(text.parse::<f64>().unwrap(), x, "{text}");
        }
        assert_eq!(serde_json::to_string(&Float(f64::NAN)).unwrap(), "null");
        assert_eq!(format_float(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn csv_header_names_chart_coordinates() {
        let h = csv_header(3);
        assert_eq!(&h[..5], &["index", "u1", "u2", "u3", "epsilon"]);
        assert_eq!(h.last().map(String::as_str), Some("passed"));
    }
}
