use crate::jets::{JetError, TaylorJet};

/// Arithmetic shared by plain floats and jets, so each catalog surface is
/// written once and evaluated either way.
pub trait Scalar: Clone {
    fn lift(&self, c: f64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: f64) -> Self;
    fn div(&self, other: &Self) -> Result<Self, JetError>;
    fn sqrt(&self) -> Result<Self, JetError>;
    fn ln(&self) -> Result<Self, JetError>;

    fn add_const(&self, c: f64) -> Self {
        self.add(&self.lift(c))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }
}

impl Scalar for f64 {
    fn lift(&self, c: f64) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn div(&self, other: &Self) -> Result<Self, JetError> {
        if *other == 0.0 {
            return Err(JetError::SingularJet);
        }
        Ok(self / other)
    }
    fn sqrt(&self) -> Result<Self, JetError> {
        if *self <= 0.0 {
            return Err(JetError::Domain { function: "sqrt", value: *self });
        }
        Ok(f64::sqrt(*self))
    }
    fn ln(&self) -> Result<Self, JetError> {
        if *self <= 0.0 {
            return Err(JetError::Domain { function: "ln", value: *self });
        }
        Ok(f64::ln(*self))
    }
}

impl Scalar for TaylorJet {
    fn lift(&self, c: f64) -> Self {
        TaylorJet::constant(c, self.nvars())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: f64) -> Self {
        TaylorJet::scale(self, c)
    }
    fn div(&self, other: &Self) -> Result<Self, JetError> {
        self.checked_div(other)
    }
    fn sqrt(&self) -> Result<Self, JetError> {
        TaylorJet::sqrt(self)
    }
    fn ln(&self) -> Result<Self, JetError> {
        TaylorJet::ln(self)
    }
}
