use centroaffine::catalog::{resolve, CatalogEntry};
use centroaffine::geometry::{centroaffine_data, Norms};
use centroaffine::immersion::{AmbientTransformed, Reparametrized};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalars(epsilon: f64, n: &Norms) -> [(&'static str, f64); 11] {
    [
        ("epsilon", epsilon),
        ("k2", n.k2),
        ("ktilde2", n.ktilde2),
        ("nabla_k2", n.nabla_k2),
        ("nabla_t2", n.nabla_t2),
        ("slack", n.slack),
        ("slack_difference", n.slack_difference),
        ("mu", n.mu),
        ("t2", n.t2),
        ("rhat2", n.rhat2),
        ("scalar_curvature", n.scalar_curvature),
    ]
}

fn well_conditioned(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    loop {
        let m = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { 0.0 } + rng.gen_range(-0.6..0.6));
        let sv = m.clone().svd(false, false).singular_values;
        let cond: f64 = sv.max() / sv.min();
        if cond.is_finite() && cond <= 10.0 {
            return m;
        }
    }
}

fn assert_same(name: &str, what: &str, base: &[(&str, f64)], other: &[(&str, f64)]) {
    for ((label, a), (_, b)) in base.iter().zip(other) {
        assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()), "{name} {what}: {label} {a} vs {b}");
    }
}

fn surfaces() -> Vec<CatalogEntry> {
    ["perturbed_graph_2", "perturbed_graph_3", "shifted_paraboloid_3"].iter().map(|n| resolve(n).unwrap()).collect()
}

#[test]
fn scalar_invariants_are_unchanged_by_ambient_linear_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for entry in surfaces() {
        let points = entry.sample_points(3, 2);
        for _ in 0..10 {
            let a = well_conditioned(&mut rng, entry.dim() + 1);
            let moved = AmbientTransformed { inner: &entry, matrix: a };
            for p in &points {
                let base = centroaffine_data(&entry, p).unwrap();
                let other = centroaffine_data(&moved, p).unwrap();
                assert_same(
                    entry.name(),
                    "ambient map",
                    &scalars(base.epsilon, &base.norms),
                    &scalars(other.epsilon, &other.norms),
                );
            }
        }
    }
}

#[test]
fn scalar_invariants_are_unchanged_by_affine_reparametrization() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for entry in surfaces() {
        let n = entry.dim();
        let points = entry.sample_points(3, 3);
        for _ in 0..10 {
            let b = well_conditioned(&mut rng, n);
            let offset: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.1..0.1)).collect();
            let chart = Reparametrized { inner: &entry, matrix: b, offset };
            for p in &points {
                let v = chart.pullback_point(p).unwrap();
                let base = centroaffine_data(&entry, p).unwrap();
                let other = centroaffine_data(&chart, &v).unwrap();
                assert_same(
                    entry.name(),
                    "reparametrization",
                    &scalars(base.epsilon, &base.norms),
                    &scalars(other.epsilon, &other.norms),
                );
            }
        }
    }
}
