use super::{JetError, TaylorJet};

/// Relative pivot threshold for the constant-term matrix.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Solves `A x = b` in jet arithmetic.
///
/// `a` is given by rows. Gaussian elimination with partial pivoting on the
/// constant terms; all products are truncated at order 4.
pub fn jet_linear_solve(a: &[Vec<TaylorJet>], b: &[TaylorJet]) -> Result<Vec<TaylorJet>, JetError> {
    let mut sols = jet_linear_solve_many(a, std::slice::from_ref(&b.to_vec()))?;
    Ok(sols.pop().expect("one right-hand side"))
}

/// Same as [`jet_linear_solve`] for several right-hand sides sharing one
/// elimination.
pub fn jet_linear_solve_many(
    a: &[Vec<TaylorJet>],
    rhs: &[Vec<TaylorJet>],
) -> Result<Vec<Vec<TaylorJet>>, JetError> {
    let n = a.len();
    if n == 0 {
        return Ok(rhs.iter().map(|_| Vec::new()).collect());
    }
    let nvars = a[0][0].nvars();
    for row in a {
        if row.len() != n {
            return Err(JetError::DimensionMismatch { expected: n, found: row.len() });
        }
        if let Some(bad) = row.iter().find(|j| j.nvars() != nvars) {
            return Err(JetError::NvarsMismatch { left: nvars, right: bad.nvars() });
        }
    }
    for b in rhs {
        if b.len() != n {
            return Err(JetError::DimensionMismatch { expected: n, found: b.len() });
        }
        if let Some(bad) = b.iter().find(|j| j.nvars() != nvars) {
            return Err(JetError::NvarsMismatch { left: nvars, right: bad.nvars() });
        }
    }

    let mut m: Vec<Vec<TaylorJet>> = a.to_vec();
    let mut bs: Vec<Vec<TaylorJet>> = rhs.to_vec();
    let row_scale: Vec<f64> = m
        .iter()
        .map(|row| row.iter().fold(0.0_f64, |s, j| s.max(j.value().abs())))
        .collect();
    let mut scale: Vec<f64> = row_scale.clone();
    let mut inv_pivots = Vec::with_capacity(n);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| m[r][col].value().abs().total_cmp(&m[s][col].value().abs()))
            .expect("non-empty range");
        let pivot = m[pivot_row][col].value();
        if scale[pivot_row] == 0.0 || pivot.abs() < PIVOT_TOLERANCE * scale[pivot_row] {
            return Err(JetError::SingularSystem { column: col });
        }
        m.swap(col, pivot_row);
        scale.swap(col, pivot_row);
        for b in bs.iter_mut() {
            b.swap(col, pivot_row);
        }
        let inv = m[col][col].recip()?;
        for r in col + 1..n {
            let factor = &m[r][col] * &inv;
            let (upper, lower) = m.split_at_mut(r);
            for (target, source) in lower[0][col + 1..].iter_mut().zip(&upper[col][col + 1..]) {
                *target -= &(&factor * source);
            }
            for b in bs.iter_mut() {
                let t = &factor * &b[col];
                b[r] -= &t;
            }
            m[r][col] = TaylorJet::zero(nvars);
        }
        inv_pivots.push(inv);
    }

    let solutions = bs
        .into_iter()
        .map(|b| {
            let mut x: Vec<TaylorJet> = vec![TaylorJet::zero(nvars); n];
            for row in (0..n).rev() {
                let mut acc = b[row].clone();
                for c in row + 1..n {
                    acc -= &(&m[row][c] * &x[c]);
                }
                x[row] = &acc * &inv_pivots[row];
            }
            x
        })
        .collect();
    Ok(solutions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(v: f64, n: usize) -> TaylorJet {
        TaylorJet::constant(v, n)
    }

    #[test]
    fn identity_returns_rhs() {
        let n = 2;
        let u = TaylorJet::variable(0, 0.2, n).unwrap();
        let w = TaylorJet::variable(1, -0.4, n).unwrap();
        let b = vec![&u * &w, u.sin(), w.exp()];
        let a: Vec<Vec<TaylorJet>> = (0..3)
            .map(|i| (0..3).map(|j| c(if i == j { 1.0 } else { 0.0 }, n)).collect())
            .collect();
        let x = jet_linear_solve(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_geometric_series() {
        let u = TaylorJet::variable(0, 0.0, 1).unwrap();
        let a = vec![vec![u.add_scalar(1.0)]];
        let x = jet_linear_solve(&a, &[c(1.0, 1)]).unwrap();
        let expected = [1.0, -1.0, 1.0, -1.0, 1.0];
        for (got, want) in x[0].coeffs().iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_constant_matrix_is_singular() {
        let u = TaylorJet::variable(0, 0.0, 2).unwrap();
        let v = TaylorJet::variable(1, 0.0, 2).unwrap();
        let a = vec![vec![u.clone(), v.clone()], vec![v, u]];
        assert!(matches!(
            jet_linear_solve(&a, &[c(1.0, 2), c(1.0, 2)]),
            Err(JetError::SingularSystem { column: 0 })
        ));
        let rank_one = vec![vec![c(1.0, 2), c(2.0, 2)], vec![c(2.0, 2), c(4.0, 2)]];
        assert!(matches!(
            jet_linear_solve(&rank_one, &[c(1.0, 2), c(1.0, 2)]),
            Err(JetError::SingularSystem { .. })
        ));
    }

    #[test]
    fn residual_small_for_dense_system() {
        let n = 3;
        let vars: Vec<TaylorJet> =
            (0..n).map(|i| TaylorJet::variable(i, 0.1 * i as f64, n).unwrap()).collect();
        // A_ij = cos(u_i + j) + 3 δ_ij, b_i = exp(u_i)
        let a: Vec<Vec<TaylorJet>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| vars[i].add_scalar(j as f64).cos().add_scalar(if i == j { 3.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        let b: Vec<TaylorJet> = vars.iter().map(TaylorJet::exp).collect();
        let x = jet_linear_solve(&a, &b).unwrap();
        for i in 0..n {
            let mut r = b[i].clone();
            for j in 0..n {
                r -= &(&a[i][j] * &x[j]);
            }
            assert!(r.max_abs() < 1e-13, "row {i}: {r:?}");
        }
    }
}
