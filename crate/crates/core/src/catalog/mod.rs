//! Built-in hypersurfaces with known centroaffine behaviour.
//!
//! Every entry has a native evaluator (generic over [`Scalar`]) and an
//! equivalent surface-file text, a default sample box inside its chart
//! domain, and the properties it is expected to exhibit.

mod scalar;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dsl::{parse_surface, EvalError, SurfaceSpec};
use crate::immersion::Immersion;
use crate::jets::{JetError, TaylorJet, MAX_VARS};

pub use scalar::Scalar;

/// Machine-checkable expectations attached to an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    KZero,
    KtildeZero,
    NablaKZero,
    FlatMetric,
    Equality,
    Strict,
    TZero,
}

impl Tag {
    pub const ALL: [Tag; 7] =
        [Tag::KZero, Tag::KtildeZero, Tag::NablaKZero, Tag::FlatMetric, Tag::Equality, Tag::Strict, Tag::TZero];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::KZero => "K_zero",
            Tag::KtildeZero => "Ktilde_zero",
            Tag::NablaKZero => "nablaK_zero",
            Tag::FlatMetric => "flat_metric",
            Tag::Equality => "equality",
            Tag::Strict => "strict",
            Tag::TZero => "T_zero",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| CatalogError::UnknownTag(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("unknown tag '{0}'")]
    UnknownTag(String),
    #[error("invalid parameter '{key}' for {surface}: {reason}")]
    InvalidParameter { surface: String, key: String, reason: String },
    #[error("sl3_so3 chart needs d1 > 0 and d2 > 0, got d1={d1}, d2={d2}")]
    NonPositiveDiagonal { d1: f64, d2: f64 },
}

pub const DEFAULT_PERTURBATION_SEED: u64 = 7;
pub const DEFAULT_PERTURBATION_AMPLITUDE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    Sphere,
    Ellipsoid { axes: Vec<f64> },
    Hyperboloid,
    ShiftedParaboloid,
    CanonicalViii,
    Sl3So3,
    /// Shifted paraboloid plus `Σ coeff·u^exponents` over cubic and quartic monomials.
    PerturbedGraph { seed: u64, amplitude: f64, terms: Vec<(f64, Vec<u8>)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    name: String,
    n: usize,
    shape: Shape,
    sample_box: Vec<(f64, f64)>,
    tags: Vec<Tag>,
}

impl CatalogEntry {
    pub fn unit_sphere(n: usize) -> CatalogEntry {
        CatalogEntry {
            name: format!("unit_sphere_{n}"),
            n,
            shape: Shape::Sphere,
            sample_box: vec![(-0.5, 0.5); n],
            tags: vec![Tag::KZero, Tag::Equality],
        }
    }

    /// Axes `1, 1.5, 2, …` along the ambient coordinates.
    pub fn ellipsoid(n: usize) -> CatalogEntry {
        CatalogEntry {
            name: format!("ellipsoid_{n}"),
            n,
            shape: Shape::Ellipsoid { axes: (0..=n).map(|i| 1.0 + 0.5 * i as f64).collect() },
            sample_box: vec![(-0.5, 0.5); n],
            tags: vec![Tag::KZero, Tag::Equality],
        }
    }

    pub fn hyperboloid(n: usize) -> CatalogEntry {
        CatalogEntry {
            name: format!("hyperboloid_{n}"),
            n,
            shape: Shape::Hyperboloid,
            sample_box: vec![(-1.0, 1.0); n],
            tags: vec![Tag::KZero, Tag::Equality],
        }
    }

    pub fn shifted_paraboloid(n: usize) -> CatalogEntry {
        CatalogEntry {
            name: format!("shifted_paraboloid_{n}"),
            n,
            shape: Shape::ShiftedParaboloid,
            sample_box: vec![(-0.6, 0.6); n],
            tags: vec![Tag::KtildeZero, Tag::Equality],
        }
    }

    pub fn canonical_viii(n: usize) -> CatalogEntry {
        let mut sample_box = vec![(-1.0, 1.0); n];
        sample_box[0] = (0.5, 2.0);
        CatalogEntry {
            name: format!("canonical_viii_{n}"),
            n,
            shape: Shape::CanonicalViii,
            sample_box,
            tags: vec![Tag::NablaKZero, Tag::FlatMetric, Tag::Equality],
        }
    }

    /// Unimodular positive definite symmetric 3×3 matrices, `n = 5`.
    pub fn sl3_so3() -> CatalogEntry {
        CatalogEntry {
            name: "sl3_so3".to_string(),
            n: 5,
            shape: Shape::Sl3So3,
            sample_box: vec![(-0.5, 0.5), (-0.5, 0.5), (-0.5, 0.5), (0.5, 2.0), (0.5, 2.0)],
            tags: vec![Tag::NablaKZero, Tag::TZero, Tag::Equality],
        }
    }

    pub fn perturbed_graph(n: usize, seed: u64, amplitude: f64) -> CatalogEntry {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for degree in 3..=4 {
            for exponents in monomials(n, degree) {
                terms.push((amplitude * rng.gen_range(-1.0..=1.0), exponents));
            }
        }
        let name = if seed == DEFAULT_PERTURBATION_SEED && amplitude == DEFAULT_PERTURBATION_AMPLITUDE {
            format!("perturbed_graph_{n}")
        } else {
            format!("perturbed_graph_{n}?seed={seed}&amp={amplitude}")
        };
        CatalogEntry {
            name,
            n,
            shape: Shape::PerturbedGraph { seed, amplitude, terms },
            sample_box: vec![(-0.5, 0.5); n],
            tags: vec![Tag::Strict],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sample_box(&self) -> &[(f64, f64)] {
        &self.sample_box
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    /// Sign of the Gauss formula, when it is known in advance.
    pub fn expected_epsilon(&self) -> Option<f64> {
        match self.shape {
            Shape::Sphere | Shape::Ellipsoid { .. } => Some(1.0),
            Shape::Hyperboloid | Shape::ShiftedParaboloid => Some(-1.0),
            _ => None,
        }
    }

    /// Seed and amplitude of a perturbed graph.
    pub fn perturbation(&self) -> Option<(u64, f64)> {
        match self.shape {
            Shape::PerturbedGraph { seed, amplitude, .. } => Some((seed, amplitude)),
            _ => None,
        }
    }

    /// Native evaluation of the ambient coordinates.
    pub fn evaluate<S: Scalar>(&self, u: &[S]) -> Result<Vec<S>, JetError> {
        if u.len() != self.n {
            return Err(JetError::DimensionMismatch { expected: self.n, found: u.len() });
        }
        let one = u[0].lift(1.0);
        let r2 = u.iter().fold(u[0].lift(0.0), |acc, ui| acc.add(&ui.square()));
        let mut x: Vec<S> = u.to_vec();
        match &self.shape {
            Shape::Sphere => x.push(one.sub(&r2).sqrt()?),
            Shape::Ellipsoid { axes } => {
                x.push(one.sub(&r2).sqrt()?);
                for (xi, a) in x.iter_mut().zip(axes) {
                    *xi = xi.scale(*a);
                }
            }
            Shape::Hyperboloid => x.push(one.add(&r2).sqrt()?),
            Shape::ShiftedParaboloid => x.push(r2.scale(0.5).add_const(1.0)),
            Shape::CanonicalViii => {
                let rest = u[1..].iter().fold(u[0].lift(0.0), |acc, ui| acc.add(&ui.square()));
                let last = rest.div(&u[0].scale(2.0))?.add(&u[0].mul(&u[0].ln()?));
                x.push(last);
            }
            Shape::Sl3So3 => x = sl3_so3_entries(u)?,
            Shape::PerturbedGraph { terms, .. } => {
                let mut last = r2.scale(0.5).add_const(1.0);
                for (coeff, exponents) in terms {
                    let mut m = u[0].lift(*coeff);
                    for (ui, &e) in u.iter().zip(exponents) {
                        for _ in 0..e {
                            m = m.mul(ui);
                        }
                    }
                    last = last.add(&m);
                }
                x.push(last);
            }
        }
        Ok(x)
    }

    /// Text in the surface-file format describing the same immersion.
    pub fn dsl_text(&self) -> String {
        let n = self.n;
        let vars: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
        let r2 = vars.iter().map(|v| format!("{v}^2")).collect::<Vec<_>>().join("+");
        let mut lines = vec![format!("name={}", self.name), format!("n={n}")];
        let mut comps: Vec<String> = vars.clone();
        let mut guards = Vec::new();
        match &self.shape {
            Shape::Sphere => {
                comps.push(format!("sqrt(1-({r2}))"));
                guards.push(format!("1-({r2})"));
            }
            Shape::Ellipsoid { axes } => {
                comps.push(format!("sqrt(1-({r2}))"));
                for (c, a) in comps.iter_mut().zip(axes) {
                    *c = format!("{a:?}*{c}");
                }
                guards.push(format!("1-({r2})"));
            }
            Shape::Hyperboloid => comps.push(format!("sqrt(1+{r2})")),
            Shape::ShiftedParaboloid => {
                comps.push(format!("1+({r2})/2"));
                guards.push(format!("2-({r2})"));
            }
            Shape::CanonicalViii => {
                let rest: Vec<String> = vars[1..].iter().map(|v| format!("{v}^2")).collect();
                if rest.is_empty() {
                    comps.push("u1*ln(u1)".to_string());
                } else {
                    comps.push(format!("({})/(2*u1)+u1*ln(u1)", rest.join("+")));
                }
                guards.push("u1".to_string());
            }
            Shape::Sl3So3 => {
                comps = vec![
                    "u4".into(),
                    "u1^2*u4+u5".into(),
                    "u2^2*u4+u3^2*u5+1/(u4*u5)".into(),
                    "u1*u4".into(),
                    "u2*u4".into(),
                    "u1*u2*u4+u3*u5".into(),
                ];
                guards.push("u4".into());
                guards.push("u5".into());
            }
            Shape::PerturbedGraph { terms, .. } => {
                let mut last = format!("1+({r2})/2");
                for (coeff, exponents) in terms {
                    last.push_str(&format!("+({coeff:?})"));
                    for (v, &e) in vars.iter().zip(exponents) {
                        match e {
                            0 => {}
                            1 => last.push_str(&format!("*{v}")),
                            _ => last.push_str(&format!("*{v}^{e}")),
                        }
                    }
                }
                comps.push(last);
                guards.push(format!("2-({r2})"));
            }
        }
        for (k, c) in comps.iter().enumerate() {
            lines.push(format!("x{}={c}", k + 1));
        }
        for g in guards {
            lines.push(format!("guard={g}"));
        }
        lines.join("\n") + "\n"
    }

    /// The entry parsed from [`dsl_text`](Self::dsl_text).
    pub fn spec(&self) -> SurfaceSpec {
        parse_surface(&self.dsl_text()).expect("catalog text is valid")
    }

    /// `count` pseudo-random points of the sample box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        random_points(&self.sample_box, count, seed)
    }
}

impl Immersion for CatalogEntry {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError> {
        self.evaluate(inputs).map_err(|source| EvalError { expr: self.name.clone(), source })
    }

    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.evaluate(point).map_err(|source| EvalError { expr: self.name.clone(), source })
    }

    fn in_domain(&self, u: &[f64]) -> bool {
        if u.len() != self.n || u.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let r2: f64 = u.iter().map(|v| v * v).sum();
        match self.shape {
            Shape::Sphere | Shape::Ellipsoid { .. } => 1.0 - r2 > 0.0,
            Shape::Hyperboloid => true,
            Shape::ShiftedParaboloid | Shape::PerturbedGraph { .. } => 2.0 - r2 > 0.0,
            Shape::CanonicalViii => u[0] > 0.0,
            Shape::Sl3So3 => u[3] > 0.0 && u[4] > 0.0,
        }
    }
}

fn sl3_so3_entries<S: Scalar>(p: &[S]) -> Result<Vec<S>, JetError> {
    let (a, b, c, d1, d2) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
    let d3 = d1.lift(1.0).div(&d1.mul(d2))?;
    Ok(vec![
        d1.clone(),
        a.square().mul(d1).add(d2),
        b.square().mul(d1).add(&c.square().mul(d2)).add(&d3),
        a.mul(d1),
        b.mul(d1),
        a.mul(b).mul(d1).add(&c.mul(d2)),
    ])
}

/// `A = L·diag(d₁, d₂, 1/(d₁d₂))·Lᵀ` for unit lower-triangular `L` with
/// entries `(l₂₁, l₃₁, l₃₂)`, flattened as `(A₁₁, A₂₂, A₃₃, A₁₂, A₁₃, A₂₃)`.
pub fn sl3_so3_chart(params: [f64; 5]) -> Result<[f64; 6], CatalogError> {
    let [_, _, _, d1, d2] = params;
    if !(d1 > 0.0 && d2 > 0.0) {
        return Err(CatalogError::NonPositiveDiagonal { d1, d2 });
    }
    let v = sl3_so3_entries(&params).expect("positive diagonal");
    Ok([v[0], v[1], v[2], v[3], v[4], v[5]])
}

/// Exponent vectors of all monomials of exactly `degree` in `n` variables.
fn monomials(n: usize, degree: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() + 1 == n {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u8);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, &mut Vec::new(), &mut out);
    out
}

/// Uniform pseudo-random points of an axis-aligned box.
pub fn random_points(bounds: &[(f64, f64)], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| bounds.iter().map(|&(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect())
        .collect()
}

/// Tensor grid with `counts[i]` equally spaced values on axis `i`
/// (endpoints included; a single value sits at the midpoint). The last
/// axis varies fastest.
pub fn grid_points(bounds: &[(f64, f64)], counts: &[usize]) -> Vec<Vec<f64>> {
    assert_eq!(bounds.len(), counts.len());
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .zip(counts)
        .map(|(&(lo, hi), &c)| match c {
            0 => vec![],
            1 => vec![0.5 * (lo + hi)],
            _ => (0..c).map(|k| lo + (hi - lo) * k as f64 / (c - 1) as f64).collect(),
        })
        .collect();
    let mut out: Vec<Vec<f64>> = vec![vec![]];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Entries listed by `catalog list`: every family at `n ∈ {2, 3}` plus
/// the five-dimensional symmetric space.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for n in [2, 3] {
        out.push(CatalogEntry::unit_sphere(n));
        out.push(CatalogEntry::ellipsoid(n));
        out.push(CatalogEntry::hyperboloid(n));
        out.push(CatalogEntry::shifted_paraboloid(n));
        out.push(CatalogEntry::canonical_viii(n));
        out.push(CatalogEntry::perturbed_graph(n, DEFAULT_PERTURBATION_SEED, DEFAULT_PERTURBATION_AMPLITUDE));
    }
    out.push(CatalogEntry::sl3_so3());
    out
}

/// Looks up an entry by name, e.g. `unit_sphere_4`, `sl3_so3`, or
/// `perturbed_graph_2?seed=11&amp=0.02`.
pub fn resolve(name: &str) -> Result<CatalogEntry, CatalogError> {
    let unknown = || CatalogError::UnknownSurface(name.to_string());
    let (base, query) = match name.split_once('?') {
        Some((b, q)) => (b, Some(q)),
        None => (name, None),
    };
    if base == "sl3_so3" || base == "sl3_so3_5" {
        return if query.is_none() { Ok(CatalogEntry::sl3_so3()) } else { Err(unknown()) };
    }
    let (family, n) = base.rsplit_once('_').ok_or_else(unknown)?;
    let n: usize = n.parse().map_err(|_| unknown())?;
    if !(1..=MAX_VARS).contains(&n) {
        return Err(unknown());
    }
    if family == "perturbed_graph" {
        let mut seed = DEFAULT_PERTURBATION_SEED;
        let mut amplitude = DEFAULT_PERTURBATION_AMPLITUDE;
        for pair in query.into_iter().flat_map(|q| q.split('&')).filter(|p| !p.is_empty()) {
            let invalid = |key: &str, reason: &str| CatalogError::InvalidParameter {
                surface: base.to_string(),
                key: key.to_string(),
                reason: reason.to_string(),
            };
            let (key, value) = pair.split_once('=').ok_or_else(|| invalid(pair, "expected key=value"))?;
            match key {
                "seed" => seed = value.parse().map_err(|_| invalid(key, "not an unsigned integer"))?,
                "amp" => {
                    amplitude = value
                        .parse::<f64>()
                        .ok()
                        .filter(|a| a.is_finite())
                        .ok_or_else(|| invalid(key, "not a finite number"))?
                }
                _ => return Err(invalid(key, "unknown parameter")),
            }
        }
        return Ok(CatalogEntry::perturbed_graph(n, seed, amplitude));
    }
    if query.is_some() {
        return Err(unknown());
    }
    match family {
        "unit_sphere" => Ok(CatalogEntry::unit_sphere(n)),
        "ellipsoid" => Ok(CatalogEntry::ellipsoid(n)),
        "hyperboloid" => Ok(CatalogEntry::hyperboloid(n)),
        "shifted_paraboloid" => Ok(CatalogEntry::shifted_paraboloid(n)),
        "canonical_viii" => Ok(CatalogEntry::canonical_viii(n)),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::immersion_jet;
    use crate::jets::seed_point;
    use approx::assert_relative_eq;

    #[test]
    fn sl3_so3_chart_examples() {
        assert_eq!(sl3_so3_chart([0.0, 0.0, 0.0, 1.0, 1.0]).unwrap(), [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(sl3_so3_chart([0.0, 0.0, 0.0, 2.0, 1.0]).unwrap(), [2.0, 1.0, 0.5, 0.0, 0.0, 0.0]);
        assert!(sl3_so3_chart([0.0, 0.0, 0.0, 0.0, 1.0]).is_err());
        assert!(sl3_so3_chart([0.0, 0.0, 0.0, 1.0, -2.0]).is_err());
    }

    #[test]
    fn sl3_so3_determinant_is_one() {
        for p in CatalogEntry::sl3_so3().sample_points(20, 3) {
            let [a11, a22, a33, a12, a13, a23] = sl3_so3_chart(p.clone().try_into().unwrap()).unwrap();
            let m = nalgebra::Matrix3::new(a11, a12, a13, a12, a22, a23, a13, a23, a33);
            assert!((m.determinant() - 1.0).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn canonical_viii_value() {
        let e = CatalogEntry::canonical_viii(3);
        let x = e.evaluate(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(x[3], 0.0);
        let jet = immersion_jet(&e, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(jet.position[3].value(), 0.0);
        assert!(immersion_jet(&e, &[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn sphere_base_position() {
        let jet = immersion_jet(&CatalogEntry::unit_sphere(3), &[0.0; 3]).unwrap();
        let values: Vec<f64> = jet.position.iter().map(TaylorJet::value).collect();
        assert_eq!(values, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn perturbed_graph_is_deterministic() {
        let a = CatalogEntry::perturbed_graph(2, 7, 0.05);
        let b = resolve("perturbed_graph_2").unwrap();
        assert_eq!(a, b);
        let c = resolve("perturbed_graph_2?seed=8&amp=0.05").unwrap();
        assert_ne!(a, c);
        assert_eq!(c.name(), "perturbed_graph_2?seed=8&amp=0.05");
        assert_eq!(resolve(c.name()).unwrap(), c);
    }

    #[test]
    fn resolve_names() {
        for e in catalog_entries() {
            assert_eq!(resolve(e.name()).unwrap(), e);
        }
        assert!(resolve("nosuch").is_err());
        assert!(resolve("unit_sphere_0").is_err());
        assert!(resolve("unit_sphere_2?seed=1").is_err());
        assert!(resolve("perturbed_graph_2?colour=red").is_err());
        assert_eq!(resolve("unit_sphere_5").unwrap().dim(), 5);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 4).len(), 15);
        assert!(monomials(3, 4).iter().all(|m| m.iter().map(|&e| e as usize).sum::<usize>() == 4));
    }

    #[test]
    fn grid_layout() {
        let g = grid_points(&[(0.0, 1.0), (-1.0, 1.0)], &[2, 3]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![0.0, -1.0]);
        assert_eq!(g[1], vec![0.0, 0.0]);
        assert_eq!(g[5], vec![1.0, 1.0]);
        assert_eq!(grid_points(&[(0.0, 2.0)], &[1]), vec![vec![1.0]]);
    }

    #[test]
    fn native_and_text_agree() {
        for e in catalog_entries() {
            let spec = e.spec();
            assert_eq!(spec.name, e.name());
            for p in e.sample_points(5, 11) {
                assert!(e.in_domain(&p) && spec.in_domain(&p));
                let seeds = seed_point(&p).unwrap();
                let native = e.eval_jets(&seeds).unwrap();
                let text = spec.eval_jets(&seeds).unwrap();
                for (a, b) in native.iter().zip(&text) {
                    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                        assert_relative_eq!(*x, *y, epsilon = 1e-14, max_relative = 1e-14);
                    }
                }
                let nv = e.eval_values(&p).unwrap();
                let tv = spec.eval_values(&p).unwrap();
                for (x, y) in nv.iter().zip(&tv) {
                    assert_relative_eq!(*x, *y, epsilon = 1e-14, max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn guards_agree_outside_boxes() {
        let probes = random_points(&[(-3.0, 3.0); 5], 200, 5);
        for e in catalog_entries() {
            let spec = e.spec();
            for p in &probes {
                let p = &p[..e.dim()];
                assert_eq!(e.in_domain(p), spec.in_domain(p), "{} at {p:?}", e.name());
            }
        }
    }
}
