use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::layout::{layout, Layout, MultiIndex};
use super::{JetError, ORDER};

/// Order-4 truncated Taylor expansion of a scalar function of `nvars`
/// variables around a base point.
///
/// The coefficient stored for a multi-index `α` is `∂^α f / α!`, so the
/// jet is literally the Taylor polynomial in the displacement from the
/// base point.
#[derive(Clone, PartialEq)]
pub struct TaylorJet {
    nvars: usize,
    coeffs: Vec<f64>,
}

/// Binary operation selector for [`TaylorJet::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl TaylorJet {
    pub fn zero(nvars: usize) -> Self {
        TaylorJet { nvars, coeffs: vec![0.0; layout(nvars).len()] }
    }

    pub fn constant(value: f64, nvars: usize) -> Self {
        let mut jet = TaylorJet::zero(nvars);
        jet.coeffs[0] = value;
        jet
    }

    /// The jet of the coordinate function `u_index` at a base point whose
    /// `index` coordinate is `value`.
    pub fn variable(index: usize, value: f64, nvars: usize) -> Result<Self, JetError> {
        if index >= nvars {
            return Err(JetError::VarOutOfRange { index, nvars });
        }
        let mut jet = TaylorJet::constant(value, nvars);
        let slot = jet.layout().unit_slot(index);
        jet.coeffs[slot] = 1.0;
        Ok(jet)
    }

    /// Builds a jet from raw coefficients in layout order.
    pub fn from_coeffs(nvars: usize, coeffs: Vec<f64>) -> Result<Self, JetError> {
        let expected = layout(nvars).len();
        if coeffs.len() != expected {
            return Err(JetError::DimensionMismatch { expected, found: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(JetError::NonFinite);
        }
        Ok(TaylorJet { nvars, coeffs })
    }

    fn layout(&self) -> &'static Layout {
        layout(self.nvars)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Multi-indices in coefficient order.
    pub fn indices(&self) -> &'static [MultiIndex] {
        &self.layout().indices
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Result<f64, JetError> {
        self.check_index(alpha)?;
        Ok(self.coeffs[self.layout().slot(alpha).expect("degree checked")])
    }

    pub fn set_coeff(&mut self, alpha: &MultiIndex, value: f64) -> Result<(), JetError> {
        self.check_index(alpha)?;
        let slot = self.layout().slot(alpha).expect("degree checked");
        self.coeffs[slot] = value;
        Ok(())
    }

    fn check_index(&self, alpha: &MultiIndex) -> Result<(), JetError> {
        if alpha.nvars() != self.nvars {
            return Err(JetError::NvarsMismatch { left: self.nvars, right: alpha.nvars() });
        }
        if alpha.degree() > ORDER {
            return Err(JetError::DegreeTooHigh { degree: alpha.degree() });
        }
        Ok(())
    }

    /// The raw partial derivative `∂^α f` at the base point.
    pub fn partial(&self, alpha: &MultiIndex) -> Result<f64, JetError> {
        Ok(alpha.factorial() * self.coeff(alpha)?)
    }

    /// First partial `∂f/∂u_var` at the base point.
    pub fn d(&self, var: usize) -> f64 {
        self.coeffs[self.layout().unit_slot(var)]
    }

    /// Formal partial derivative. The result is exact through degree 3;
    /// its degree-4 part is zero.
    pub fn derivative(&self, var: usize) -> TaylorJet {
        assert!(var < self.nvars, "variable {var} out of range");
        let mut out = TaylorJet::zero(self.nvars);
        for &(src, dst, factor) in &self.layout().derivatives[var] {
            out.coeffs[dst as usize] += factor * self.coeffs[src as usize];
        }
        out
    }

    /// Drops every coefficient of degree above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> TaylorJet {
        let degrees = &self.layout().degrees;
        let coeffs = self
            .coeffs
            .iter()
            .zip(degrees)
            .map(|(&c, &d)| if d > max_degree { 0.0 } else { c })
            .collect();
        TaylorJet { nvars: self.nvars, coeffs }
    }

    /// The non-constant part `f - f(p)`.
    pub fn displacement(&self) -> TaylorJet {
        let mut out = self.clone();
        out.coeffs[0] = 0.0;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, factor: f64) -> TaylorJet {
        TaylorJet { nvars: self.nvars, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn add_scalar(&self, value: f64) -> TaylorJet {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: f64, other: &TaylorJet) {
        self.assert_compatible(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    fn assert_compatible(&self, other: &TaylorJet) {
        assert_eq!(self.nvars, other.nvars, "jets over different variable counts");
    }

    fn compatible(&self, other: &TaylorJet) -> Result<(), JetError> {
        if self.nvars != other.nvars {
            return Err(JetError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    fn mul_into(&self, other: &TaylorJet, out: &mut [f64]) {
        let a = &self.coeffs;
        let b = &other.coeffs;
        for &(i, j, k) in &self.layout().products {
            out[k as usize] += a[i as usize] * b[j as usize];
        }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Result<TaylorJet, JetError> {
        let c = self.value();
        if c == 0.0 {
            return Err(JetError::SingularJet);
        }
        let inv = 1.0 / c;
        // 1/(c + δ) = Σ (-δ)^k / c^(k+1)
        let series = [inv, -inv * inv, inv.powi(3), -inv.powi(4), inv.powi(5)];
        Ok(self.compose(&series))
    }

    /// Evaluates `Σ series[k] (self - self(p))^k` by Horner's rule.
    pub(crate) fn compose(&self, series: &[f64; ORDER + 1]) -> TaylorJet {
        let delta = self.displacement();
        let mut acc = TaylorJet::constant(series[ORDER], self.nvars);
        for k in (0..ORDER).rev() {
            acc = &acc * &delta;
            acc.coeffs[0] += series[k];
        }
        acc
    }

    pub fn checked_div(&self, other: &TaylorJet) -> Result<TaylorJet, JetError> {
        self.compatible(other)?;
        Ok(self * &other.recip()?)
    }

    /// Pointwise arithmetic with explicit error reporting.
    pub fn arith(&self, other: &TaylorJet, op: ArithOp) -> Result<TaylorJet, JetError> {
        self.compatible(other)?;
        Ok(match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
            ArithOp::Div => self.checked_div(other)?,
        })
    }
}

impl fmt::Debug for TaylorJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "TaylorJet[")?;
        for (c, alpha) in self.coeffs.iter().zip(self.indices()) {
            if *c == 0.0 && alpha.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}·u^{alpha}")?;
        }
        write!(f, "]")
    }
}

impl Add for &TaylorJet {
    type Output = TaylorJet;
    fn add(self, rhs: &TaylorJet) -> TaylorJet {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &TaylorJet {
    type Output = TaylorJet;
    fn sub(self, rhs: &TaylorJet) -> TaylorJet {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &TaylorJet {
    type Output = TaylorJet;
    fn mul(self, rhs: &TaylorJet) -> TaylorJet {
        self.assert_compatible(rhs);
        let mut out = TaylorJet::zero(self.nvars);
        self.mul_into(rhs, &mut out.coeffs);
        out
    }
}

impl Neg for &TaylorJet {
    type Output = TaylorJet;
    fn neg(self) -> TaylorJet {
        self.scale(-1.0)
    }
}

impl AddAssign<&TaylorJet> for TaylorJet {
    fn add_assign(&mut self, rhs: &TaylorJet) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&TaylorJet> for TaylorJet {
    fn sub_assign(&mut self, rhs: &TaylorJet) {
        self.axpy(-1.0, rhs);
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TaylorJet {
            type Output = TaylorJet;
            fn $m(self, rhs: TaylorJet) -> TaylorJet { (&self).$m(&rhs) }
        }
        impl $tr<&TaylorJet> for TaylorJet {
            type Output = TaylorJet;
            fn $m(self, rhs: &TaylorJet) -> TaylorJet { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for TaylorJet {
    type Output = TaylorJet;
    fn neg(self) -> TaylorJet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: usize, n: usize) -> TaylorJet {
        TaylorJet::variable(i, 0.0, n).unwrap()
    }

    #[test]
    fn seed_variable() {
        let x = TaylorJet::variable(0, 0.3, 2).unwrap();
        assert_eq!(x.value(), 0.3);
        assert_eq!(x.d(0), 1.0);
        assert_eq!(x.d(1), 0.0);
        assert!(x.coeffs()[3..].iter().all(|&c| c == 0.0));

        let y = TaylorJet::variable(1, 0.0, 2).unwrap();
        assert_eq!(y.d(1), 1.0);
        assert_eq!(y.coeffs().iter().filter(|&&c| c != 0.0).count(), 1);

        assert!(matches!(
            TaylorJet::variable(3, 1.0, 2),
            Err(JetError::VarOutOfRange { index: 3, nvars: 2 })
        ));
    }

    #[test]
    fn difference_of_squares() {
        let one = TaylorJet::constant(1.0, 1);
        let x = u(0, 1);
        let p = (&one + &x) * (&one - &x);
        assert_eq!(p.coeffs(), &[1.0, 0.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn geometric_series() {
        let one = TaylorJet::constant(1.0, 1);
        let g = one.arith(&(&one - &u(0, 1)), ArithOp::Div).unwrap();
        assert_eq!(g.coeffs(), &[1.0; 5]);
    }

    #[test]
    fn division_by_zero_constant() {
        let one = TaylorJet::constant(1.0, 2);
        assert!(matches!(one.arith(&u(0, 2), ArithOp::Div), Err(JetError::SingularJet)));
    }

    #[test]
    fn mismatched_nvars() {
        let a = TaylorJet::constant(1.0, 2);
        let b = TaylorJet::constant(1.0, 3);
        assert!(matches!(a.arith(&b, ArithOp::Add), Err(JetError::NvarsMismatch { .. })));
    }

    #[test]
    fn partials() {
        let x = u(0, 1);
        let x4 = &(&x * &x) * &(&x * &x);
        assert_eq!(x4.partial(&MultiIndex::new(vec![4]).unwrap()).unwrap(), 24.0);

        let c = TaylorJet::constant(2.5, 2);
        assert_eq!(c.partial(&MultiIndex::new(vec![1, 0]).unwrap()).unwrap(), 0.0);

        let xy = &u(0, 2) * &u(1, 2);
        assert_eq!(xy.partial(&MultiIndex::new(vec![1, 1]).unwrap()).unwrap(), 1.0);

        assert!(matches!(MultiIndex::new(vec![3, 2]), Err(JetError::DegreeTooHigh { degree: 5 })));
    }

    #[test]
    fn products_truncate_at_order_four() {
        let x = u(0, 1);
        let x3 = &(&x * &x) * &x;
        assert_eq!((&x3 * &x3).max_abs(), 0.0);
    }

    #[test]
    fn formal_derivative() {
        // d/du (u^2 v + v^3) = 2uv
        let (x, y) = (u(0, 2), u(1, 2));
        let f = &(&(&x * &x) * &y) + &(&(&y * &y) * &y);
        let df = f.derivative(0);
        let expected = (&x * &y).scale(2.0);
        assert_eq!(df, expected);
    }

    #[test]
    fn from_coeffs_rejects_nan() {
        let mut c = vec![0.0; 5];
        c[2] = f64::NAN;
        assert!(matches!(TaylorJet::from_coeffs(1, c), Err(JetError::NonFinite)));
    }
}
