//! Sources of immersion jets: parsed surfaces, catalog entries, and the
//! transformed variants used to check invariance.

use nalgebra::{DMatrix, DVector};

use crate::dsl::{eval_f64, eval_jet, EvalError, SurfaceSpec};
use crate::jets::{seed_point, TaylorJet};

/// A parametrized hypersurface `x: U ⊂ ℝⁿ → ℝⁿ⁺¹`.
pub trait Immersion: Send + Sync {
    fn name(&self) -> &str;

    /// Chart dimension `n`.
    fn dim(&self) -> usize;

    /// Ambient coordinates evaluated on arbitrary input jets, one per
    /// chart variable.
    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError>;

    /// Plain evaluation of the ambient coordinates.
    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError>;

    /// Whether `point` lies where the chart is declared valid.
    fn in_domain(&self, point: &[f64]) -> bool;

    /// Ambient coordinates as jets seeded at `point`.
    fn position_jets(&self, point: &[f64]) -> Result<Vec<TaylorJet>, EvalError> {
        let seeds = seed_point(point).map_err(|source| EvalError { expr: "chart point".into(), source })?;
        self.eval_jets(&seeds)
    }
}

impl Immersion for SurfaceSpec {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.nvars
    }

    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError> {
        self.components.iter().map(|c| eval_jet(c, inputs)).collect()
    }

    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.components.iter().map(|c| eval_f64(c, point)).collect()
    }

    fn in_domain(&self, point: &[f64]) -> bool {
        SurfaceSpec::in_domain(self, point)
    }
}

impl<S: Immersion + ?Sized> Immersion for &S {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError> {
        (**self).eval_jets(inputs)
    }
    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        (**self).eval_values(point)
    }
    fn in_domain(&self, point: &[f64]) -> bool {
        (**self).in_domain(point)
    }
}

impl<S: Immersion + ?Sized> Immersion for Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError> {
        (**self).eval_jets(inputs)
    }
    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        (**self).eval_values(point)
    }
    fn in_domain(&self, point: &[f64]) -> bool {
        (**self).in_domain(point)
    }
}

/// `A ∘ x` for an invertible `(n+1)×(n+1)` matrix `A`.
pub struct AmbientTransformed<S> {
    pub inner: S,
    pub matrix: DMatrix<f64>,
}

impl<S: Immersion> Immersion for AmbientTransformed<S> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError> {
        let x = self.inner.eval_jets(inputs)?;
        let nv = inputs[0].nvars();
        Ok((0..x.len())
            .map(|r| {
                let mut acc = TaylorJet::zero(nv);
                for (c, xc) in x.iter().enumerate() {
                    acc.axpy(self.matrix[(r, c)], xc);
                }
                acc
            })
            .collect())
    }

    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        let x = DVector::from_vec(self.inner.eval_values(point)?);
        Ok((&self.matrix * x).iter().copied().collect())
    }

    fn in_domain(&self, point: &[f64]) -> bool {
        self.inner.in_domain(point)
    }
}

/// `v ↦ x(B v + c)` for an invertible `n×n` matrix `B`.
pub struct Reparametrized<S> {
    pub inner: S,
    pub matrix: DMatrix<f64>,
    pub offset: Vec<f64>,
}

impl<S> Reparametrized<S> {
    /// Chart point `v` with `B v + c = u`.
    pub fn pullback_point(&self, u: &[f64]) -> Option<Vec<f64>> {
        let rhs = DVector::from_iterator(u.len(), u.iter().zip(&self.offset).map(|(a, b)| a - b));
        let v = self.matrix.clone().lu().solve(&rhs)?;
        Some(v.iter().copied().collect())
    }

    fn forward(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| self.offset[i] + (0..n).map(|j| self.matrix[(i, j)] * v[j]).sum::<f64>())
            .collect()
    }
}

impl<S: Immersion> Immersion for Reparametrized<S> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval_jets(&self, inputs: &[TaylorJet]) -> Result<Vec<TaylorJet>, EvalError> {
        let n = inputs.len();
        let nv = inputs[0].nvars();
        let u: Vec<TaylorJet> = (0..n)
            .map(|i| {
                let mut acc = TaylorJet::constant(self.offset[i], nv);
                for (j, vj) in inputs.iter().enumerate() {
                    acc.axpy(self.matrix[(i, j)], vj);
                }
                acc
            })
            .collect();
        self.inner.eval_jets(&u)
    }

    fn eval_values(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.inner.eval_values(&self.forward(point))
    }

    fn in_domain(&self, point: &[f64]) -> bool {
        self.inner.in_domain(&self.forward(point))
    }
}
