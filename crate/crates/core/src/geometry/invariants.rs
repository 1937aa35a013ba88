use super::CentroaffineData;
use crate::jets::TaylorJet;
use crate::tensor::{Lower, Tensor, Upper};

/// `K̃ᵏᵢⱼ = Kᵏᵢⱼ − n/(n+2)·(Tᵏ hᵢⱼ + T♭ᵢ δᵏⱼ + T♭ⱼ δᵏᵢ)` with `T♭ = h·T`,
/// as jets truncated to degree 1.
pub fn traceless_part(
    k: &Tensor<3, TaylorJet>,
    t: &[TaylorJet],
    h: &Tensor<2, TaylorJet>,
) -> Tensor<3, TaylorJet> {
    let n = k.dim();
    let nv = t[0].nvars();
    let t_flat: Vec<TaylorJet> = (0..n)
        .map(|i| {
            let mut acc = TaylorJet::zero(nv);
            for j in 0..n {
                acc += &(&h[[i, j]] * &t[j]);
            }
            acc
        })
        .collect();
    let factor = n as f64 / (n as f64 + 2.0);
    Tensor::from_fn(n, |[a, i, j]| {
        let mut trace = &t[a] * &h[[i, j]];
        if a == j {
            trace += &t_flat[i];
        }
        if a == i {
            trace += &t_flat[j];
        }
        let mut out = k[[a, i, j]].clone();
        out.axpy(-factor, &trace);
        out.truncate(1)
    })
}

/// Gauss and Codazzi residuals, evaluated in the h-orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    pub gauss: f64,
    pub codazzi: f64,
}

pub fn gauss_codazzi_residuals(data: &CentroaffineData) -> Residuals {
    residuals_for(data, &data.k)
}

/// Residuals with an explicitly supplied `K` (values), so a corrupted
/// tensor can be checked against the curvature of the true metric.
pub(crate) fn residuals_for(data: &CentroaffineData, k: &Tensor<3>) -> Residuals {
    let n = data.n;
    let kf = k.to_frame([Upper, Lower, Lower], &data.frame);
    let rf = data.rhat.to_frame([Lower; 4], &data.frame);
    let nkf = data.nabla_k.to_frame([Upper, Lower, Lower, Lower], &data.frame);
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let eps = data.epsilon;

    let mut gauss = 0.0_f64;
    for [i, j, k2, l] in rf.indices().collect::<Vec<_>>() {
        let mut quad = 0.0;
        for m in 0..n {
            quad += kf[[m, i, l]] * kf[[m, j, k2]] - kf[[m, i, k2]] * kf[[m, j, l]];
        }
        let r = rf[[i, j, k2, l]] - eps * (d(i, k2) * d(j, l) - d(i, l) * d(j, k2)) - quad;
        gauss = gauss.max(r.abs());
    }
    let mut codazzi = 0.0_f64;
    for [k2, i, j, l] in nkf.indices().collect::<Vec<_>>() {
        codazzi = codazzi.max((nkf[[k2, i, j, l]] - nkf[[l, i, j, k2]]).abs());
    }
    Residuals { gauss, codazzi }
}

/// Algebraic identities every point must satisfy, as max-abs deviations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureResiduals {
    /// `hʲᵏ K̃ⁱⱼₖ`.
    pub ktilde_trace: f64,
    /// `n·T♭(∂ᵢ) − tr K_{∂ᵢ}`.
    pub tchebychev_trace: f64,
    pub c_symmetry: f64,
    pub nabla_k_symmetry: f64,
    /// `|slack − slack_difference|`.
    pub slack_agreement: f64,
}

pub fn structure_residuals(data: &CentroaffineData) -> StructureResiduals {
    let n = data.n;
    let ktilde_trace = (0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += data.h_inv[(j, k)] * data.ktilde[[i, j, k]];
                }
            }
            s.abs()
        })
        .fold(0.0, f64::max);
    let t_flat = data.t_flat();
    let tchebychev_trace = (0..n)
        .map(|i| {
            let tr: f64 = (0..n).map(|k| data.k[[k, i, k]]).sum();
            (n as f64 * t_flat[i] - tr).abs()
        })
        .fold(0.0, f64::max);
    StructureResiduals {
        ktilde_trace,
        tchebychev_trace,
        c_symmetry: data.c.total_asymmetry(),
        nabla_k_symmetry: data.nabla_k_lowered().total_asymmetry(),
        slack_agreement: (data.norms.slack - data.norms.slack_difference).abs(),
    }
}
