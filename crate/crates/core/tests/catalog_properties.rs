use centroaffine::catalog::{catalog_entries, Tag};
use centroaffine::geometry::{centroaffine_data, gauss_codazzi_residuals};

#[test]
fn tags_hold_at_seeded_points() {
    for entry in catalog_entries() {
        for p in entry.sample_points(20, 3) {
            assert!(entry.sample_box().iter().zip(&p).all(|(&(lo, hi), x)| lo <= *x && *x <= hi));
            let d = centroaffine_data(&entry, &p).unwrap();
            let name = entry.name();
            let norm_k = d.norm_k();
            let n = &d.norms;
            if let Some(eps) = entry.expected_epsilon() {
                assert_eq!(d.epsilon, eps, "{name} at {p:?}");
            }
            if entry.has_tag(Tag::KZero) {
                assert!(norm_k <= 1e-7, "{name}: |K| = {norm_k}");
            }
            if entry.has_tag(Tag::KtildeZero) {
                assert!(n.ktilde2.sqrt() <= 1e-9 * (1.0 + norm_k), "{name}: |K~|^2 = {}", n.ktilde2);
            }
            if entry.has_tag(Tag::NablaKZero) {
                assert!(d.norm_nabla_k() <= 1e-7 * (1.0 + norm_k), "{name}: |nabla K| = {}", d.norm_nabla_k());
            }
            if entry.has_tag(Tag::TZero) {
                assert!(n.t2.sqrt() <= 1e-7, "{name}: |T|^2 = {}", n.t2);
            }
            if entry.has_tag(Tag::FlatMetric) {
                assert!(n.rhat2.sqrt() <= 1e-8, "{name}: |R|^2 = {}", n.rhat2);
            }
            if entry.has_tag(Tag::Equality) {
                assert!(n.slack.abs() <= 1e-8 * (1.0 + n.nabla_k2), "{name}: slack {}", n.slack);
            }
            if entry.has_tag(Tag::Strict) {
                assert!(n.slack > 0.0, "{name}: slack {}", n.slack);
            }
            let r = gauss_codazzi_residuals(&d);
            assert!(r.gauss <= 1e-8 * (1.0 + n.k2) && r.codazzi <= 1e-8 * (1.0 + n.k2), "{name}: {r:?}");
        }
    }
}

#[test]
fn curvature_constant_on_quadrics_centered_at_origin() {
    for name in ["unit_sphere_3", "hyperboloid_3", "ellipsoid_2"] {
        let entry = centroaffine::catalog::resolve(name).unwrap();
        let n = entry.dim() as f64;
        for p in entry.sample_points(5, 4) {
            let d = centroaffine_data(&entry, &p).unwrap();
            // R̂ᵢⱼₖₗ = ε(hᵢₗhⱼₖ − hᵢₖhⱼₗ) when K = 0.
            let expected = d.epsilon * n * (n - 1.0);
            assert!((d.norms.scalar_curvature - expected).abs() <= 1e-9, "{name}: {}", d.norms.scalar_curvature);
        }
    }
}

mod random_perturbations {
    use centroaffine::catalog::CatalogEntry;
    use centroaffine::geometry::{centroaffine_data, structure_residuals};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn inequality_holds_and_both_slack_routes_agree(
            n in 2usize..=3,
            seed in any::<u64>(),
            amp in 0.0..0.15f64,
            t in prop::collection::vec(0.0..1.0f64, 3),
        ) {
            let entry = CatalogEntry::perturbed_graph(n, seed, amp);
            let p: Vec<f64> = entry.sample_box().iter().zip(&t).map(|(&(lo, hi), s)| lo + s * (hi - lo)).collect();
            let d = centroaffine_data(&entry, &p).unwrap();
            let scale = 1.0 + d.norms.nabla_k2;
            prop_assert!(d.norms.slack >= -1e-8 * scale);
            prop_assert!(structure_residuals(&d).slack_agreement <= 1e-8 * scale);
        }
    }
}
