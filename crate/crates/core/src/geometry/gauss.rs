use nalgebra::DMatrix;

use super::GeometryError;
use crate::immersion::Immersion;
use crate::jets::{jet_linear_solve_many, JetError, TaylorJet};
use crate::tensor::Tensor;

/// Ambient position jets at one chart point.
#[derive(Clone, Debug)]
pub struct ImmersionJet {
    pub n: usize,
    /// `n + 1` jets, one per ambient coordinate.
    pub position: Vec<TaylorJet>,
    pub base_point: Vec<f64>,
}

/// Evaluates the immersion on seeded jets at `point`.
pub fn immersion_jet(surface: &dyn Immersion, point: &[f64]) -> Result<ImmersionJet, GeometryError> {
    let n = surface.dim();
    if point.len() != n {
        return Err(GeometryError::Dimension { expected: n, found: point.len() });
    }
    if !surface.in_domain(point) {
        return Err(GeometryError::OutsideDomain { point: point.to_vec() });
    }
    let position = surface.position_jets(point).map_err(GeometryError::Eval)?;
    if position.len() != n + 1 {
        return Err(GeometryError::Dimension { expected: n + 1, found: position.len() });
    }
    if position.iter().any(|j| !j.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    Ok(ImmersionJet { n, position, base_point: point.to_vec() })
}

/// Output of the centroaffine Gauss formula
/// `∂ᵢ∂ⱼx = Γᵏᵢⱼ ∂ₖx − ε hᵢⱼ x`.
#[derive(Clone, Debug)]
pub struct GaussSplit {
    /// `+1` or `-1`, chosen so that `h` is positive definite.
    pub epsilon: f64,
    /// Metric `h_ij`, jets exact through degree 2.
    pub h: Tensor<2, TaylorJet>,
    /// Induced connection `Γᵏᵢⱼ` stored at `[k, i, j]`, exact through degree 1.
    pub gamma: Tensor<3, TaylorJet>,
}

pub fn gauss_split(ij: &ImmersionJet) -> Result<GaussSplit, GeometryError> {
    let n = ij.n;
    let x = &ij.position;
    let tangents: Vec<Vec<TaylorJet>> =
        (0..n).map(|k| x.iter().map(|xr| xr.derivative(k)).collect()).collect();

    // rows: ambient coordinates; columns: ∂₁x … ∂ₙx, x
    let frame: Vec<Vec<TaylorJet>> = (0..=n)
        .map(|r| {
            let mut row: Vec<TaylorJet> = (0..n).map(|k| tangents[k][r].clone()).collect();
            row.push(x[r].clone());
            row
        })
        .collect();

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let rhs: Vec<Vec<TaylorJet>> = pairs
        .iter()
        .map(|&(i, j)| tangents[i].iter().map(|t| t.derivative(j)).collect())
        .collect();

    let solutions = jet_linear_solve_many(&frame, &rhs).map_err(|e| match e {
        JetError::SingularSystem { .. } => GeometryError::NotCentroaffine,
        other => GeometryError::Jet(other),
    })?;

    let nv = x[0].nvars();
    let mut c = Tensor::<2, TaylorJet>::from_fn(n, |_| TaylorJet::zero(nv));
    let mut gamma = Tensor::<3, TaylorJet>::from_fn(n, |_| TaylorJet::zero(nv));
    for (&(i, j), y) in pairs.iter().zip(&solutions) {
        for k in 0..n {
            let g = y[k].truncate(1);
            gamma[[k, i, j]] = g.clone();
            gamma[[k, j, i]] = g;
        }
        let cij = y[n].truncate(2);
        c[[i, j]] = cij.clone();
        c[[j, i]] = cij;
    }

    let c0 = DMatrix::from_fn(n, n, |i, j| c[[i, j]].value());
    let epsilon = if is_positive_definite(&(-&c0)) {
        1.0
    } else if is_positive_definite(&c0) {
        -1.0
    } else {
        return Err(GeometryError::NotLocallyStronglyConvex);
    };
    // c = -ε h
    let h = c.map(|cij| cij.scale(-epsilon));
    Ok(GaussSplit { epsilon, h, gamma })
}

/// Cholesky succeeds and no pivot is negligible relative to the diagonal.
pub(crate) fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    let scale = m.diagonal().iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if scale == 0.0 || !m.iter().all(|v| v.is_finite()) {
        return false;
    }
    match m.clone().cholesky() {
        Some(ch) => ch.l().diagonal().iter().all(|d| d * d > 1e-12 * scale),
        None => false,
    }
}
