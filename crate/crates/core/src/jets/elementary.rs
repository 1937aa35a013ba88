use super::{JetError, TaylorJet, ORDER};

/// Univariate functions that can be composed with a jet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Elementary {
    Sqrt,
    Ln,
    Exp,
    Pow(f64),
    Sin,
    Cos,
}

impl Elementary {
    pub fn name(&self) -> &'static str {
        match self {
            Elementary::Sqrt => "sqrt",
            Elementary::Ln => "ln",
            Elementary::Exp => "exp",
            Elementary::Pow(_) => "pow",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
        }
    }
}

/// Exponents this close to an integer of modest size use repeated products.
fn as_small_integer(r: f64) -> Option<i32> {
    (r.fract() == 0.0 && r.abs() <= 64.0).then_some(r as i32)
}

impl TaylorJet {
    pub fn elementary(&self, f: Elementary) -> Result<TaylorJet, JetError> {
        let c = self.value();
        let domain = |function: &'static str| JetError::Domain { function, value: c };
        let series: [f64; ORDER + 1] = match f {
            Elementary::Sqrt => {
                if c <= 0.0 {
                    return Err(domain("sqrt"));
                }
                let s = c.sqrt();
                [s, 0.5 / s, -0.125 / (s * c), 0.0625 / (s * c * c), -0.0390625 / (s * c * c * c)]
            }
            Elementary::Ln => {
                if c <= 0.0 {
                    return Err(domain("ln"));
                }
                let inv = 1.0 / c;
                [c.ln(), inv, -0.5 * inv * inv, inv.powi(3) / 3.0, -0.25 * inv.powi(4)]
            }
            Elementary::Exp => {
                let e = c.exp();
                [e, e, e / 2.0, e / 6.0, e / 24.0]
            }
            Elementary::Sin => {
                let (s, co) = c.sin_cos();
                [s, co, -s / 2.0, -co / 6.0, s / 24.0]
            }
            Elementary::Cos => {
                let (s, co) = c.sin_cos();
                [co, -s, -co / 2.0, s / 6.0, co / 24.0]
            }
            Elementary::Pow(r) => {
                if let Some(k) = as_small_integer(r) {
                    return self.powi(k);
                }
                if c <= 0.0 {
                    return Err(domain("pow"));
                }
                // non-integer powers go through exp(r ln x)
                return self.elementary(Elementary::Ln)?.scale(r).elementary(Elementary::Exp);
            }
        };
        let out = self.compose(&series);
        if !out.is_finite() {
            return Err(JetError::NonFinite);
        }
        Ok(out)
    }

    pub fn sqrt(&self) -> Result<TaylorJet, JetError> {
        self.elementary(Elementary::Sqrt)
    }

    pub fn ln(&self) -> Result<TaylorJet, JetError> {
        self.elementary(Elementary::Ln)
    }

    pub fn exp(&self) -> TaylorJet {
        self.elementary(Elementary::Exp).expect("exp is total")
    }

    pub fn sin(&self) -> TaylorJet {
        self.elementary(Elementary::Sin).expect("sin is total")
    }

    pub fn cos(&self) -> TaylorJet {
        self.elementary(Elementary::Cos).expect("cos is total")
    }

    pub fn powf(&self, r: f64) -> Result<TaylorJet, JetError> {
        self.elementary(Elementary::Pow(r))
    }

    /// Integer power by repeated squaring; negative powers need a nonzero
    /// constant term.
    pub fn powi(&self, k: i32) -> Result<TaylorJet, JetError> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = TaylorJet::constant(1.0, self.nvars());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn x(value: f64) -> TaylorJet {
        TaylorJet::variable(0, value, 1).unwrap()
    }

    #[test]
    fn ln_one_plus_u() {
        let l = x(1.0).ln().unwrap();
        let expected = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25];
        for (c, e) in l.coeffs().iter().zip(expected) {
            assert_relative_eq!(*c, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn sqrt_of_constant() {
        let s = TaylorJet::constant(4.0, 2).sqrt().unwrap();
        assert_eq!(s.value(), 2.0);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn domain_errors() {
        let neg = TaylorJet::constant(-1.0, 1);
        assert!(matches!(neg.ln(), Err(JetError::Domain { function: "ln", .. })));
        assert!(matches!(neg.sqrt(), Err(JetError::Domain { function: "sqrt", .. })));
        assert!(matches!(neg.powf(0.5), Err(JetError::Domain { function: "pow", .. })));
        assert!(matches!(TaylorJet::constant(0.0, 1).ln(), Err(JetError::Domain { .. })));
    }

    #[test]
    fn sqrt_series_at_four() {
        // sqrt(4+t) = 2 + t/4 - t^2/64 + t^3/512 - 5 t^4/16384
        let s = x(4.0).sqrt().unwrap();
        let expected = [2.0, 0.25, -1.0 / 64.0, 1.0 / 512.0, -5.0 / 16384.0];
        for (c, e) in s.coeffs().iter().zip(expected) {
            assert_relative_eq!(*c, e, epsilon = 1e-16);
        }
    }

    #[test]
    fn trig_and_exp() {
        let t = x(0.0);
        let s = t.sin();
        let c = t.cos();
        let e = t.exp();
        let expect_s = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0];
        let expect_c = [1.0, 0.0, -0.5, 0.0, 1.0 / 24.0];
        let expect_e = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for i in 0..5 {
            assert_relative_eq!(s.coeffs()[i], expect_s[i], epsilon = 1e-16);
            assert_relative_eq!(c.coeffs()[i], expect_c[i], epsilon = 1e-16);
            assert_relative_eq!(e.coeffs()[i], expect_e[i], epsilon = 1e-16);
        }
        // sin^2 + cos^2 = 1 at a generic point
        let t = x(0.7);
        let one = &(&t.sin() * &t.sin()) + &(&t.cos() * &t.cos());
        assert_relative_eq!(one.value(), 1.0, epsilon = 1e-15);
        assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn powers_agree() {
        let t = x(1.7);
        let cube = t.powi(3).unwrap();
        let via_pow = t.powf(3.0).unwrap();
        let via_exp = (t.ln().unwrap().scale(3.0)).exp();
        for i in 0..5 {
            assert_relative_eq!(cube.coeffs()[i], via_pow.coeffs()[i], epsilon = 1e-14);
            assert_relative_eq!(cube.coeffs()[i], via_exp.coeffs()[i], epsilon = 1e-13, max_relative = 1e-13);
        }
        // negative integer powers of negative bases are fine
        let m = x(-2.0).powi(-2).unwrap();
        assert_relative_eq!(m.value(), 0.25);
        assert_relative_eq!(m.d(0), 0.25, epsilon = 1e-16); // d/dt t^-2 = -2 t^-3 = 0.25
        assert!(matches!(x(0.0).powi(-1), Err(JetError::SingularJet)));
    }

    #[test]
    fn fractional_power_matches_sqrt() {
        let t = x(2.3);
        let a = t.powf(0.5).unwrap();
        let b = t.sqrt().unwrap();
        for i in 0..5 {
            assert_relative_eq!(a.coeffs()[i], b.coeffs()[i], max_relative = 1e-13);
        }
    }
}
