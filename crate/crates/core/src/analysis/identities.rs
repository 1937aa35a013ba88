use nalgebra::DMatrix;

use super::{AnalysisError, EjiriBasis};
use crate::geometry::{centroaffine_data, CentroaffineData};
use crate::immersion::Immersion;
use crate::tensor::{Frame, Lower, Tensor, Upper};

/// Central-difference step used for `∇μ`.
pub const MU_STEP: f64 = 1e-4;

/// Outcome of the conformal-vector-field test on `T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TchebychevCheck {
    pub is_tchebychev: bool,
    /// `tr(∇̂T)/n`.
    pub lambda: f64,
    /// `max |Tʲ,ᵢ − λδʲᵢ|` in the orthonormal frame.
    pub residual: f64,
}

pub fn tchebychev_check(data: &CentroaffineData, tol: f64) -> TchebychevCheck {
    let n = data.n;
    let tf = data.nabla_t.to_frame([Upper, Lower], &data.frame);
    let lambda = (0..n).map(|i| tf[[i, i]]).sum::<f64>() / n as f64;
    let residual = tf
        .indices()
        .map(|[j, i]| (tf[[j, i]] - if i == j { lambda } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let norm = data.norms.nabla_t2.sqrt();
    TchebychevCheck { is_tchebychev: residual <= tol * (1.0 + norm), lambda, residual }
}

/// `S[k,i,j,l] = δₖₗδᵢⱼ + δᵢₗδⱼₖ + δⱼₗδᵢₖ`.
fn isotropic(n: usize) -> Tensor<4> {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Tensor::from_fn(n, |[k, i, j, l]| d(k, l) * d(i, j) + d(i, l) * d(j, k) + d(j, l) * d(i, k))
}

/// Frobenius distance, in the orthonormal frame, between `∇̂K` and `μS`.
pub fn isotropy_deviation(data: &CentroaffineData) -> f64 {
    let nkf = data.nabla_k.to_frame([Upper, Lower, Lower, Lower], &data.frame);
    nkf.sub(&isotropic(data.n).scale(data.norms.mu)).sum_squares().sqrt()
}

/// Chart gradient `∂ₗμ` by central differences with step `step`.
pub fn mu_gradient(surface: &dyn Immersion, point: &[f64], step: f64) -> Result<Vec<f64>, AnalysisError> {
    (0..point.len())
        .map(|l| {
            let mut plus = point.to_vec();
            let mut minus = point.to_vec();
            plus[l] += step;
            minus[l] -= step;
            let mp = centroaffine_data(surface, &plus)?.norms.mu;
            let mm = centroaffine_data(surface, &minus)?.norms.mu;
            Ok((mp - mm) / (2.0 * step))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `eₐ(μ)` along the basis.
    pub directional_mu: Vec<f64>,
    /// `max_{l≥2} |e_l(μ)|`.
    pub mu_tangential: f64,
    /// `max_{l≥2} |e₁(μ) − (2λₗ−λ₁)(λₗ²−λ₁λₗ+ε)|`.
    pub mu_normal: f64,
    /// `max |(2λₖ−λ₁)(λₗ−λⱼ)Kˡⱼₖ|` over `2≤j≠l`, all `k`.
    pub mixed_components: f64,
    /// `max_{l≥2} |(λₗ²−λ₁λₗ+ε)Kˡₗₗ|`.
    pub diagonal_components: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdentityStatus {
    Checked(IdentityResiduals),
    /// `∇̂K` is not of the isotropic form, so nothing is claimed.
    NotApplicable { deviation: f64 },
    /// The Ejiri basis is degenerate and `λ₁` carries no information.
    Degenerate,
}

/// Checks the identities forced on a point where `∇̂K = μS`.
/// `mu_grad` holds the chart partials `∂ₗμ`.
pub fn proof_identity_check(
    data: &CentroaffineData,
    basis: &EjiriBasis,
    mu_grad: &[f64],
    tol: f64,
) -> IdentityStatus {
    let n = data.n;
    let deviation = isotropy_deviation(data);
    if deviation > tol * (1.0 + data.norm_nabla_k()) {
        return IdentityStatus::NotApplicable { deviation };
    }
    if basis.degenerate {
        return IdentityStatus::Degenerate;
    }
    let directional_mu: Vec<f64> = basis
        .vectors
        .iter()
        .map(|e| e.iter().zip(mu_grad).map(|(a, b)| a * b).sum())
        .collect();
    let lam = &basis.lambda;
    let eps = data.epsilon;
    let mu_tangential = directional_mu[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mu_normal = (1..n)
        .map(|l| (directional_mu[0] - (2.0 * lam[l] - lam[0]) * (lam[l] * lam[l] - lam[0] * lam[l] + eps)).abs())
        .fold(0.0, f64::max);

    let e = DMatrix::from_fn(n, n, |i, a| basis.vectors[a][i]);
    let ejiri = Frame { coframe: e.transpose() * &data.h, e };
    let kb = data.k.to_frame([Upper, Lower, Lower], &ejiri);
    let mut mixed_components = 0.0_f64;
    for j in 1..n {
        for l in 1..n {
            if j == l {
                continue;
            }
            for k in 0..n {
                let v = (2.0 * lam[k] - lam[0]) * (lam[l] - lam[j]) * kb[[l, j, k]];
                mixed_components = mixed_components.max(v.abs());
            }
        }
    }
    let diagonal_components = (1..n)
        .map(|l| ((lam[l] * lam[l] - lam[0] * lam[l] + eps) * kb[[l, l, l]]).abs())
        .fold(0.0, f64::max);
    IdentityStatus::Checked(IdentityResiduals {
        directional_mu,
        mu_tangential,
        mu_normal,
        mixed_components,
        diagonal_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::ejiri_basis;
    use crate::catalog::CatalogEntry;
    use approx::assert_abs_diff_eq;

    #[test]
    fn paraboloid_origin_is_conformal() {
        let d = centroaffine_data(&CatalogEntry::shifted_paraboloid(2), &[0.0, 0.0]).unwrap();
        let c = tchebychev_check(&d, 1e-7);
        assert!(c.is_tchebychev);
        assert_abs_diff_eq!(c.lambda, -1.0, epsilon = 1e-12);
        assert!(c.residual < 1e-12);
        assert!(isotropy_deviation(&d) < 1e-12);
    }

    #[test]
    fn sphere_is_conformal() {
        let d = centroaffine_data(&CatalogEntry::unit_sphere(3), &[0.1, 0.0, -0.2]).unwrap();
        let c = tchebychev_check(&d, 1e-7);
        assert!(c.is_tchebychev);
        assert!(c.lambda.abs() < 1e-12);
    }

    #[test]
    fn perturbed_graph_is_not_conformal() {
        let e = CatalogEntry::perturbed_graph(2, 7, 0.05);
        let d = centroaffine_data(&e, &[0.2, -0.1]).unwrap();
        let c = tchebychev_check(&d, 1e-7);
        assert!(!c.is_tchebychev);
        // oracle: the off-diagonal frame component itself
        let tf = d.nabla_t.to_frame([Upper, Lower], &d.frame);
        assert!(c.residual >= tf[[0, 1]].abs());
        let b = ejiri_basis(&d).unwrap();
        let g = mu_gradient(&e, &d.point, MU_STEP).unwrap();
        assert!(matches!(proof_identity_check(&d, &b, &g, 1e-7), IdentityStatus::NotApplicable { .. }));
    }

    #[test]
    fn paraboloid_identities() {
        let e = CatalogEntry::shifted_paraboloid(2);
        let d = centroaffine_data(&e, &[0.5, 0.0]).unwrap();
        let b = ejiri_basis(&d).unwrap();
        let g = mu_gradient(&e, &d.point, MU_STEP).unwrap();
        let IdentityStatus::Checked(r) = proof_identity_check(&d, &b, &g, 1e-7) else {
            panic!("identities should apply on a quadric");
        };
        assert!(r.mu_tangential < 1e-6, "{r:?}");
        assert!(r.mu_normal < 1e-5, "{r:?}");
        assert!(r.mixed_components < 1e-8 && r.diagonal_components < 1e-8, "{r:?}");
    }
}
