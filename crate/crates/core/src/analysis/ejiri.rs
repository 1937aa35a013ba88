use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AnalysisError;
use crate::geometry::CentroaffineData;
use crate::tensor::{Lower, Tensor, Upper};

const MAX_ITERATIONS: usize = 500;
const STEP_TOLERANCE: f64 = 1e-12;
const NEWTON_ITERATIONS: usize = 30;
const GRADIENT_TOLERANCE: f64 = 1e-9;
const START_SEED: u64 = 0x00e1_1a1b;

/// h-orthonormal basis whose first vector maximizes `f(u) = h(K_u u, u)` on
/// the unit sphere and which diagonalizes `K_{e₁}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EjiriBasis {
    /// Basis vectors in chart coordinates.
    pub vectors: Vec<Vec<f64>>,
    /// Basis vectors as columns, in components of the Cholesky frame.
    pub frame_components: DMatrix<f64>,
    /// `λ₁ = f(e₁)`, then the remaining eigenvalues of `K_{e₁}` in
    /// descending order.
    pub lambda: Vec<f64>,
    pub fmax: f64,
    pub degenerate: bool,
    /// Starts whose polished iterate was a critical point.
    pub converged_starts: usize,
}

impl EjiriBasis {
    /// `max_{i≥2} (2λᵢ − λ₁)`, non-positive when `λ₁ ≥ 2λᵢ` holds.
    pub fn dominance_gap(&self) -> f64 {
        let l1 = self.lambda[0];
        self.lambda[1..].iter().map(|l| 2.0 * l - l1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_{i≥2} |λ₁ − 3λᵢ| / |λ₁|`.
    pub fn quadric_ratio_residual(&self) -> f64 {
        let l1 = self.lambda[0];
        self.lambda[1..].iter().map(|l| (l1 - 3.0 * l).abs() / l1.abs()).fold(0.0, f64::max)
    }
}

/// `f(x) = Σ G[a,b,c] xₐ x_b x_c` and the vector `(G x x)ₐ`.
fn cubic(g: &Tensor<3>, x: &[f64]) -> (f64, Vec<f64>) {
    let n = x.len();
    let gxx: Vec<f64> = (0..n)
        .map(|a| {
            let mut s = 0.0;
            for b in 0..n {
                for c in 0..n {
                    s += g[[a, b, c]] * x[b] * x[c];
                }
            }
            s
        })
        .collect();
    (dot(x, &gxx), gxx)
}

/// The matrix of `K_x` in an orthonormal frame: `M[a, c] = Σ_b G[a,b,c] x_b`.
fn operator(g: &Tensor<3>, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::from_fn(n, n, |a, c| (0..n).map(|b| g[[a, b, c]] * x[b]).sum())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let r = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= r);
    r
}

/// Orthonormal basis of the complement of the unit vector `x`, as columns.
fn complement(x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut cols: Vec<Vec<f64>> = vec![x.to_vec()];
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for _ in 0..2 {
            for c in &cols {
                let p = dot(&v, c);
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
            }
        }
        if dot(&v, &v) > 1e-6 {
            normalize(&mut v);
            cols.push(v);
        }
    }
    DMatrix::from_fn(n, n - 1, |r, c| cols[c + 1][r])
}

/// Shifted symmetric higher-order power iteration from `x`, then Newton
/// steps on the sphere. Returns the final point, `f` there and the
/// tangential gradient norm.
fn maximize_from(g: &Tensor<3>, mut x: Vec<f64>, alpha: f64) -> (Vec<f64>, f64, f64) {
    let n = x.len();
    for _ in 0..MAX_ITERATIONS {
        let (_, gxx) = cubic(g, &x);
        let mut y: Vec<f64> = gxx.iter().zip(&x).map(|(a, b)| a + alpha * b).collect();
        normalize(&mut y);
        let step = y.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        x = y;
        if step <= STEP_TOLERANCE {
            break;
        }
    }

    let gradient = |x: &[f64]| -> (f64, Vec<f64>) {
        let (f, gxx) = cubic(g, x);
        (f, gxx.iter().zip(x).map(|(a, b)| 3.0 * (a - f * b)).collect())
    };
    let (mut f, mut grad) = gradient(&x);
    if n > 1 {
        for _ in 0..NEWTON_ITERATIONS {
            if dot(&grad, &grad).sqrt() <= 1e-15 {
                break;
            }
            let q = complement(&x);
            let hess = operator(g, &x).scale(6.0) - DMatrix::identity(n, n).scale(3.0 * f);
            let reduced = q.transpose() * &hess * &q;
            let rhs = -(q.transpose() * DVector::from_column_slice(&grad));
            let Some(s) = reduced.lu().solve(&rhs) else { break };
            let mut trial: Vec<f64> = (&q * s).iter().zip(&x).map(|(d, xi)| xi + d).collect();
            normalize(&mut trial);
            let (tf, tgrad) = gradient(&trial);
            if tf < f - 1e-15 || dot(&tgrad, &tgrad) >= dot(&grad, &grad) {
                break;
            }
            x = trial;
            f = tf;
            grad = tgrad;
        }
    }
    let gnorm = dot(&grad, &grad).sqrt();
    (x, f, gnorm)
}

fn degeneracy_threshold(norm_k: f64) -> f64 {
    1e-9 * (1.0 + norm_k.powf(1.5))
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-9 {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

pub fn ejiri_basis(data: &CentroaffineData) -> Result<EjiriBasis, AnalysisError> {
    let n = data.n;
    let kf = data.k.to_frame([Upper, Lower, Lower], &data.frame);
    let norm_k = kf.sum_squares().sqrt();
    let to_coords = |v: &[f64]| data.frame.vector_to_coords(v);

    let mut e1 = {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        v
    };
    let mut converged_starts = 0;
    // fmax ≤ ‖K‖, so below this the point is degenerate whatever e₁ is
    if norm_k > degeneracy_threshold(norm_k) {
        let g = kf.scale(1.0 / norm_k);
        let alpha = 1.0 + g.sum_squares().sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
        let mut starts: Vec<Vec<f64>> = Vec::with_capacity(10 * n);
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut v = vec![0.0; n];
                v[i] = sign;
                starts.push(v);
            }
        }
        while starts.len() < 10 * n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if dot(&v, &v) > 1e-4 {
                normalize(&mut v);
                starts.push(v);
            }
        }

        let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        for start in starts {
            let (x, f, gnorm) = maximize_from(&g, start, alpha);
            if gnorm > GRADIENT_TOLERANCE {
                continue;
            }
            converged_starts += 1;
            let coords = to_coords(&x);
            best = match best {
                None => Some((f, x, coords)),
                Some((bf, bx, bc)) => {
                    let better = f > bf + 1e-12
                        || ((f - bf).abs() <= 1e-12 && lexicographic(&coords, &bc) == Ordering::Less);
                    if better {
                        Some((f, x, coords))
                    } else {
                        Some((bf, bx, bc))
                    }
                }
            };
        }
        let Some((_, x, _)) = best else {
            return Err(AnalysisError::OptimizerFailed { point: data.point.clone() });
        };
        e1 = x;
    }

    let op = operator(&kf, &e1);
    let fmax = cubic(&kf, &e1).0;
    let degenerate = fmax <= degeneracy_threshold(norm_k);

    let mut columns: Vec<Vec<f64>> = vec![e1.clone()];
    let mut lambda = vec![fmax];
    if n > 1 {
        let q = complement(&e1);
        let restricted = q.transpose() * &op * &q;
        let eig = SymmetricEigen::new(restricted);
        let mut order: Vec<usize> = (0..n - 1).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(Ordering::Equal));
        for i in order {
            let mut v: Vec<f64> = (&q * eig.eigenvectors.column(i)).iter().copied().collect();
            if to_coords(&v).iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            columns.push(v);
            lambda.push(eig.eigenvalues[i]);
        }
    }
    let frame_components = DMatrix::from_fn(n, n, |r, c| columns[c][r]);
    let vectors = columns.iter().map(|c| to_coords(c)).collect();
    Ok(EjiriBasis { vectors, frame_components, lambda, fmax, degenerate, converged_starts })
}
