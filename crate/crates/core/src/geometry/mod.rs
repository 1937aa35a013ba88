//! Pointwise centroaffine invariants of a hypersurface, computed in chart
//! coordinates from an order-4 jet of the immersion.

mod connection;
mod gauss;
mod invariants;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::dsl::EvalError;
use crate::immersion::Immersion;
use crate::jets::{JetError, TaylorJet};
use crate::tensor::{Frame, Lower, Tensor, Upper};

pub use connection::{covariant_derivative_12, covariant_derivative_vector, curvature, inverse_metric, levi_civita};
pub use gauss::{gauss_split, immersion_jet, GaussSplit, ImmersionJet};
pub use invariants::{
    gauss_codazzi_residuals, structure_residuals, traceless_part, Residuals, StructureResiduals,
};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("expected a point with {expected} coordinates, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },
    #[error(transparent)]
    Eval(EvalError),
    #[error("immersion produced non-finite derivatives")]
    NonFinite,
    #[error("position vector is not transversal (not a centroaffine hypersurface here)")]
    NotCentroaffine,
    #[error("centroaffine metric is indefinite or degenerate (not locally strongly convex)")]
    NotLocallyStronglyConvex,
    #[error("metric is not invertible")]
    MetricNotInvertible,
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Scalar summaries of one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms {
    pub k2: f64,
    pub ktilde2: f64,
    pub nabla_k2: f64,
    pub nabla_t2: f64,
    /// `‖∇̂K̃‖²`, contracted directly.
    pub slack: f64,
    /// `‖∇̂K‖² − 3n²/(n+2)·‖∇̂T‖²`.
    pub slack_difference: f64,
    pub mu: f64,
    pub t2: f64,
    pub rhat2: f64,
    pub scalar_curvature: f64,
}

/// Everything computed at one chart point.
///
/// Tensors are in coordinate components. Index layout: `K`, `K̃`, `Γ`, `Γ̂` at
/// `[k, i, j]` for `Kᵏᵢⱼ`; `∇̂K` at `[k, i, j, l]` for `Kᵏᵢⱼ,ₗ`; `∇̂T` at
/// `[j, i]` for `Tʲ,ᵢ`; `R̂` fully lowered.
#[derive(Clone, Debug)]
pub struct CentroaffineData {
    pub n: usize,
    pub point: Vec<f64>,
    pub epsilon: f64,
    pub h_jet: Tensor<2, TaylorJet>,
    pub gamma: Tensor<3, TaylorJet>,
    pub gamma_hat: Tensor<3, TaylorJet>,
    pub k_jet: Tensor<3, TaylorJet>,
    pub h: DMatrix<f64>,
    pub h_inv: DMatrix<f64>,
    pub frame: Frame,
    pub k: Tensor<3>,
    pub c: Tensor<3>,
    pub t: Vec<f64>,
    pub ktilde: Tensor<3>,
    pub nabla_k: Tensor<4>,
    pub nabla_t: Tensor<2>,
    pub nabla_ktilde: Tensor<4>,
    pub rhat: Tensor<4>,
    pub norms: Norms,
}

impl CentroaffineData {
    pub fn norm_k(&self) -> f64 {
        self.norms.k2.sqrt()
    }

    pub fn norm_nabla_k(&self) -> f64 {
        self.norms.nabla_k2.sqrt()
    }

    /// `T♭ = h·T`.
    pub fn t_flat(&self) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.h[(i, j)] * self.t[j]).sum()).collect()
    }

    /// `∇̂K` with the upper index lowered, `(∇̂K)ᵢⱼₖₗ = hₖₘ Kᵐᵢⱼ,ₗ`, stored at
    /// `[k, i, j, l]`.
    pub fn nabla_k_lowered(&self) -> Tensor<4> {
        self.nabla_k.contract_index(0, &self.h)
    }
}

/// Full pipeline at `point`.
pub fn centroaffine_data(surface: &dyn Immersion, point: &[f64]) -> Result<CentroaffineData, GeometryError> {
    let jet = immersion_jet(surface, point)?;
    from_immersion_jet(&jet)
}

pub fn from_immersion_jet(jet: &ImmersionJet) -> Result<CentroaffineData, GeometryError> {
    let n = jet.n;
    let nv = n;
    let split = gauss_split(jet)?;
    let h_inv_jet = inverse_metric(&split.h)?;
    let gamma_hat = levi_civita(&split.h)?;
    let k_jet: Tensor<3, TaylorJet> =
        Tensor::from_fn(n, |idx| (&split.gamma[idx] - &gamma_hat[idx]).truncate(1));

    let t_jet: Vec<TaylorJet> = (0..n)
        .map(|i| {
            let mut acc = TaylorJet::zero(nv);
            for j in 0..n {
                for k in 0..n {
                    acc += &(&h_inv_jet[[j, k]] * &k_jet[[i, j, k]]);
                }
            }
            acc.scale(1.0 / n as f64).truncate(1)
        })
        .collect();
    let ktilde_jet = traceless_part(&k_jet, &t_jet, &split.h);

    let h = DMatrix::from_fn(n, n, |i, j| split.h[[i, j]].value());
    let h_inv = DMatrix::from_fn(n, n, |i, j| h_inv_jet[[i, j]].value());
    let frame = Frame::from_metric(&h).ok_or(GeometryError::NotLocallyStronglyConvex)?;

    let k = k_jet.map(TaylorJet::value);
    let k_low = k.contract_index(0, &h);
    let c = Tensor::from_fn(n, |[i, j, l]| -2.0 * k_low[[l, i, j]]);
    let t: Vec<f64> = t_jet.iter().map(TaylorJet::value).collect();
    let ktilde = ktilde_jet.map(TaylorJet::value);
    let nabla_k = covariant_derivative_12(&k_jet, &gamma_hat);
    let nabla_t = covariant_derivative_vector(&t_jet, &gamma_hat);
    let nabla_ktilde = covariant_derivative_12(&ktilde_jet, &gamma_hat);
    let rhat = curvature(&gamma_hat, &h);

    let v3 = [Upper, Lower, Lower];
    let v4 = [Upper, Lower, Lower, Lower];
    let nf = n as f64;
    let nabla_k2 = nabla_k.metric_norm2(v4, &h, &h_inv);
    let nabla_t2 = nabla_t.metric_norm2([Upper, Lower], &h, &h_inv);
    let trace_nabla_t: f64 = (0..n).map(|i| nabla_t[[i, i]]).sum();
    let ricci_trace: f64 = {
        // s = hⁱᵏ hʲˡ R̂ᵢⱼₖₗ
        let mut s = 0.0;
        for [i, j, k2, l] in rhat.indices().collect::<Vec<_>>() {
            s += h_inv[(i, k2)] * h_inv[(j, l)] * rhat[[i, j, k2, l]];
        }
        s
    };
    let norms = Norms {
        k2: k.metric_norm2(v3, &h, &h_inv),
        ktilde2: ktilde.metric_norm2(v3, &h, &h_inv),
        nabla_k2,
        nabla_t2,
        slack: nabla_ktilde.metric_norm2(v4, &h, &h_inv),
        slack_difference: nabla_k2 - 3.0 * nf * nf / (nf + 2.0) * nabla_t2,
        mu: trace_nabla_t / (nf + 2.0),
        t2: (0..n).map(|i| (0..n).map(|j| h[(i, j)] * t[i] * t[j]).sum::<f64>()).sum(),
        rhat2: rhat.metric_norm2([Lower; 4], &h, &h_inv),
        scalar_curvature: ricci_trace,
    };

    let all_finite = [norms.k2, norms.nabla_k2, norms.nabla_t2, norms.slack, norms.rhat2]
        .iter()
        .all(|v| v.is_finite());
    if !all_finite {
        return Err(GeometryError::NonFinite);
    }

    Ok(CentroaffineData {
        n,
        point: jet.base_point.clone(),
        epsilon: split.epsilon,
        h_jet: split.h,
        gamma: split.gamma,
        gamma_hat,
        k_jet,
        h,
        h_inv,
        frame,
        k,
        c,
        t,
        ktilde,
        nabla_k,
        nabla_t,
        nabla_ktilde,
        rhat,
        norms,
    })
}
