//! Dense rank-R tensors in coordinate components, plus the metric
//! operations (index raising/lowering, frame changes, norms) the geometry
//! needs.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

/// Dense tensor with `R` indices, each running over `0..dim`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<const R: usize, T = f64> {
    dim: usize,
    data: Vec<T>,
}

/// Position of an index: contravariant (upper) or covariant (lower).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Upper,
    Lower,
}

pub use Variance::{Lower, Upper};

impl<const R: usize, T> Tensor<R, T> {
    pub fn from_fn(dim: usize, mut f: impl FnMut([usize; R]) -> T) -> Self {
        let data = (0..dim.pow(R as u32)).map(|flat| f(unflatten(flat, dim))).collect();
        Tensor { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Tensor<R, U> {
        Tensor { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    /// All index tuples in storage order.
    pub fn indices(&self) -> impl Iterator<Item = [usize; R]> {
        let dim = self.dim;
        (0..self.data.len()).map(move |flat| unflatten(flat, dim))
    }

    fn offset(&self, idx: [usize; R]) -> usize {
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }
}

fn unflatten<const R: usize>(mut flat: usize, dim: usize) -> [usize; R] {
    let mut idx = [0; R];
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
    idx
}

impl<const R: usize, T> Index<[usize; R]> for Tensor<R, T> {
    type Output = T;
    fn index(&self, idx: [usize; R]) -> &T {
        &self.data[self.offset(idx)]
    }
}

impl<const R: usize, T> IndexMut<[usize; R]> for Tensor<R, T> {
    fn index_mut(&mut self, idx: [usize; R]) -> &mut T {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}

impl<const R: usize> Tensor<R, f64> {
    pub fn zeros(dim: usize) -> Self {
        Tensor { dim, data: vec![0.0; dim.pow(R as u32)] }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Plain sum of squares of the components (no metric).
    pub fn sum_squares(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Tensor { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    /// `t'[.., a, ..] = Σ_i m[(i, a)] t[.., i, ..]` on index `pos`.
    pub fn contract_index(&self, pos: usize, m: &DMatrix<f64>) -> Self {
        assert!(pos < R);
        let n = self.dim;
        Tensor::from_fn(n, |idx| {
            let mut src = idx;
            (0..n)
                .map(|i| {
                    src[pos] = i;
                    m[(i, idx[pos])] * self[src]
                })
                .sum()
        })
    }

    /// Lowers every upper index with `h`.
    pub fn lower_all(&self, variance: [Variance; R], h: &DMatrix<f64>) -> Self {
        let mut t = self.clone();
        for (pos, v) in variance.iter().enumerate() {
            if *v == Upper {
                t = t.contract_index(pos, h);
            }
        }
        t
    }

    /// Raises every lower index with `h_inv`.
    pub fn raise_all(&self, variance: [Variance; R], h_inv: &DMatrix<f64>) -> Self {
        let mut t = self.clone();
        for (pos, v) in variance.iter().enumerate() {
            if *v == Lower {
                t = t.contract_index(pos, h_inv);
            }
        }
        t
    }

    /// Squared tensorial norm: every index contracted with its own copy
    /// through the metric.
    pub fn metric_norm2(&self, variance: [Variance; R], h: &DMatrix<f64>, h_inv: &DMatrix<f64>) -> f64 {
        let lowered = self.lower_all(variance, h);
        let raised = self.raise_all(variance, h_inv);
        lowered.data.iter().zip(&raised.data).map(|(a, b)| a * b).sum()
    }

    /// Components in the frame `e_a = Σ_i frame.e[(i, a)] ∂_i`.
    pub fn to_frame(&self, variance: [Variance; R], frame: &Frame) -> Self {
        let co = frame.coframe.transpose();
        let mut t = self.clone();
        for (pos, v) in variance.iter().enumerate() {
            t = match v {
                Lower => t.contract_index(pos, &frame.e),
                Upper => t.contract_index(pos, &co),
            };
        }
        t
    }

    /// Largest deviation from invariance under swapping indices `a` and `b`.
    pub fn asymmetry(&self, a: usize, b: usize) -> f64 {
        self.indices()
            .map(|idx| {
                let mut sw = idx;
                sw.swap(a, b);
                (self[idx] - self[sw]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation from total symmetry (adjacent transpositions
    /// generate every permutation).
    pub fn total_asymmetry(&self) -> f64 {
        (0..R.saturating_sub(1)).map(|p| self.asymmetry(p, p + 1)).fold(0.0, f64::max)
    }
}

/// An h-orthonormal frame: columns of `e` are the frame vectors in
/// coordinates, rows of `coframe = e⁻¹` the dual covectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub e: DMatrix<f64>,
    pub coframe: DMatrix<f64>,
}

impl Frame {
    /// Frame from the Cholesky factor `h = L Lᵀ`: `e = L⁻ᵀ` (upper
    /// triangular) and `coframe = Lᵀ`. `None` if `h` is not positive
    /// definite.
    pub fn from_metric(h: &DMatrix<f64>) -> Option<Frame> {
        let chol = h.clone().cholesky()?;
        let l = chol.l();
        let lt = l.transpose();
        let e = lt.clone().try_inverse()?;
        Some(Frame { e, coframe: lt })
    }

    /// Coordinate components of a frame vector given in frame components.
    pub fn vector_to_coords(&self, v: &[f64]) -> Vec<f64> {
        let n = self.e.nrows();
        (0..n).map(|i| (0..n).map(|a| self.e[(i, a)] * v[a]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.0])
    }

    #[test]
    fn indexing_round_trip() {
        let t: Tensor<3> = Tensor::from_fn(3, |[i, j, k]| (100 * i + 10 * j + k) as f64);
        assert_eq!(t[[2, 0, 1]], 201.0);
        let idx: Vec<[usize; 3]> = t.indices().take(4).collect();
        assert_eq!(idx, vec![[0, 0, 0], [0, 0, 1], [0, 0, 2], [0, 1, 0]]);
    }

    #[test]
    fn frame_is_orthonormal() {
        let h = metric();
        let f = Frame::from_metric(&h).unwrap();
        let g = f.e.transpose() * &h * &f.e;
        assert!((g - DMatrix::identity(3, 3)).abs().max() < 1e-14);
        assert!((&f.coframe * &f.e - DMatrix::identity(3, 3)).abs().max() < 1e-14);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(f.e[(i, j)], 0.0, "upper triangular");
            }
        }
        assert!(Frame::from_metric(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_none());
    }

    #[test]
    fn metric_norm_matches_frame_sum_of_squares() {
        let h = metric();
        let h_inv = h.clone().try_inverse().unwrap();
        let frame = Frame::from_metric(&h).unwrap();
        let t: Tensor<3> = Tensor::from_fn(3, |[i, j, k]| ((i * 7 + j * 3 + k) as f64).sin());
        let var = [Upper, Lower, Lower];
        let a = t.metric_norm2(var, &h, &h_inv);
        let b = t.to_frame(var, &frame).sum_squares();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn symmetry_checks() {
        let t: Tensor<3> = Tensor::from_fn(2, |[i, j, k]| (i + j + k) as f64);
        assert_eq!(t.total_asymmetry(), 0.0);
        let s: Tensor<3> = Tensor::from_fn(2, |[i, j, k]| (i + 2 * j + k) as f64);
        assert_eq!(s.asymmetry(0, 2), 0.0);
        assert_eq!(s.total_asymmetry(), 1.0);
    }
}
