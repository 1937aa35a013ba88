use nalgebra::DMatrix;

use super::GeometryError;
use crate::jets::{jet_linear_solve_many, TaylorJet};
use crate::tensor::Tensor;

/// Inverse metric as jets (exact through the degree of `h`).
pub fn inverse_metric(h: &Tensor<2, TaylorJet>) -> Result<Tensor<2, TaylorJet>, GeometryError> {
    let n = h.dim();
    let nv = h[[0, 0]].nvars();
    let rows: Vec<Vec<TaylorJet>> = (0..n).map(|i| (0..n).map(|j| h[[i, j]].clone()).collect()).collect();
    let unit: Vec<Vec<TaylorJet>> = (0..n)
        .map(|c| (0..n).map(|r| TaylorJet::constant(if r == c { 1.0 } else { 0.0 }, nv)).collect())
        .collect();
    let cols = jet_linear_solve_many(&rows, &unit).map_err(|_| GeometryError::MetricNotInvertible)?;
    Ok(Tensor::from_fn(n, |[i, j]| cols[j][i].clone()))
}

/// Christoffel symbols of `h`, `Γ̂ᵏᵢⱼ = ½ hᵏˡ(∂ᵢhⱼₗ + ∂ⱼhᵢₗ − ∂ₗhᵢⱼ)`, stored at
/// `[k, i, j]` and exact through degree 1.
pub fn levi_civita(h: &Tensor<2, TaylorJet>) -> Result<Tensor<3, TaylorJet>, GeometryError> {
    let n = h.dim();
    let h_inv = inverse_metric(h)?;
    let dh: Vec<Tensor<2, TaylorJet>> = (0..n).map(|l| h.map(|hij| hij.derivative(l))).collect();
    // first kind, [l, i, j]
    let first: Tensor<3, TaylorJet> = Tensor::from_fn(n, |[l, i, j]| {
        let mut s = dh[i][[j, l]].clone();
        s += &dh[j][[i, l]];
        s -= &dh[l][[i, j]];
        s.scale(0.5)
    });
    Ok(Tensor::from_fn(n, |[k, i, j]| {
        let mut acc = TaylorJet::zero(h[[0, 0]].nvars());
        for l in 0..n {
            acc += &(&h_inv[[k, l]] * &first[[l, i, j]]);
        }
        acc.truncate(1)
    }))
}

/// Values at the base point of `∇̂_l A` for a (1,2) tensor field `A^k_ij`
/// given as jets, stored at `[k, i, j, l]`.
pub fn covariant_derivative_12(a: &Tensor<3, TaylorJet>, gamma_hat: &Tensor<3, TaylorJet>) -> Tensor<4> {
    let n = a.dim();
    let av = a.map(TaylorJet::value);
    let g = gamma_hat.map(TaylorJet::value);
    Tensor::from_fn(n, |[k, i, j, l]| {
        let mut s = a[[k, i, j]].d(l);
        for m in 0..n {
            s += g[[k, l, m]] * av[[m, i, j]];
            s -= g[[m, l, i]] * av[[k, m, j]];
            s -= g[[m, l, j]] * av[[k, i, m]];
        }
        s
    })
}

/// Values of `Tʲ,ᵢ = ∂ᵢTʲ + Γ̂ʲᵢₘTᵐ`, stored at `[j, i]`.
pub fn covariant_derivative_vector(t: &[TaylorJet], gamma_hat: &Tensor<3, TaylorJet>) -> Tensor<2> {
    let n = t.len();
    Tensor::from_fn(n, |[j, i]| {
        t[j].d(i) + (0..n).map(|m| gamma_hat[[j, i, m]].value() * t[m].value()).sum::<f64>()
    })
}

/// Fully lowered curvature `R̂ᵢⱼₖₗ = h(R(∂ᵢ,∂ⱼ)∂ₗ, ∂ₖ)`, so that the unit
/// sphere has `R̂₁₂₁₂ = +1`.
pub fn curvature(gamma_hat: &Tensor<3, TaylorJet>, h: &DMatrix<f64>) -> Tensor<4> {
    let n = gamma_hat.dim();
    let g = gamma_hat.map(TaylorJet::value);
    // R^a_{bcd}, with R(∂c,∂d)∂b = R^a_bcd ∂a, at [a, b, c, d]
    let r_up: Tensor<4> = Tensor::from_fn(n, |[a, b, c, d]| {
        let mut s = gamma_hat[[a, d, b]].d(c) - gamma_hat[[a, c, b]].d(d);
        for e in 0..n {
            s += g[[a, c, e]] * g[[e, d, b]] - g[[a, d, e]] * g[[e, c, b]];
        }
        s
    });
    Tensor::from_fn(n, |[i, j, k, l]| (0..n).map(|m| h[(k, m)] * r_up[[m, l, i, j]]).sum())
}
