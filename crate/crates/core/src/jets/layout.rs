//! Multi-index bookkeeping shared by every jet with the same number of variables.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::{JetError, MAX_VARS, ORDER};

/// Exponent vector of a monomial `u1^a1 ... un^an`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    exponents: Vec<u8>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u8>) -> Result<Self, JetError> {
        let alpha = MultiIndex { exponents };
        if alpha.degree() > ORDER {
            return Err(JetError::DegreeTooHigh { degree: alpha.degree() });
        }
        Ok(alpha)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex { exponents: vec![0; nvars] }
    }

    /// The degree-1 index selecting variable `var`.
    pub fn unit(var: usize, nvars: usize) -> Self {
        let mut exponents = vec![0; nvars];
        exponents[var] = 1;
        MultiIndex { exponents }
    }

    /// Index of a mixed partial `∂_{vars[0]} ∂_{vars[1]} ...`.
    pub fn from_vars(vars: &[usize], nvars: usize) -> Result<Self, JetError> {
        let mut exponents = vec![0u8; nvars];
        for &v in vars {
            if v >= nvars {
                return Err(JetError::VarOutOfRange { index: v, nvars });
            }
            exponents[v] += 1;
        }
        MultiIndex::new(exponents)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    /// `α! = Π αᵢ!`
    pub fn factorial(&self) -> f64 {
        self.exponents
            .iter()
            .map(|&e| (1..=e as u32).product::<u32>() as f64)
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Dense slot layout for jets in `nvars` variables, graded lexicographic order.
pub(crate) struct Layout {
    pub indices: Vec<MultiIndex>,
    pub degrees: Vec<usize>,
    lookup: HashMap<Vec<u8>, usize>,
    /// `(a, b, c)`: slot a times slot b lands in slot c.
    pub products: Vec<(u32, u32, u32)>,
    /// Per variable `(src, dst, factor)` for the formal partial derivative.
    pub derivatives: Vec<Vec<(u32, u32, f64)>>,
}

impl Layout {
    fn build(nvars: usize) -> Layout {
        let mut indices = Vec::new();
        for degree in 0..=ORDER {
            let mut level = Vec::new();
            enumerate(nvars, degree, &mut vec![0; nvars], 0, &mut level);
            // graded lex: within a degree, larger leading exponents first
            level.sort_by(|a: &Vec<u8>, b| b.cmp(a));
            indices.extend(level.into_iter().map(|exponents| MultiIndex { exponents }));
        }
        let degrees: Vec<usize> = indices.iter().map(MultiIndex::degree).collect();
        let lookup: HashMap<Vec<u8>, usize> = indices
            .iter()
            .enumerate()
            .map(|(slot, m)| (m.exponents.clone(), slot))
            .collect();

        let mut products = Vec::new();
        for (a, ma) in indices.iter().enumerate() {
            for (b, mb) in indices.iter().enumerate() {
                if degrees[a] + degrees[b] > ORDER {
                    continue;
                }
                let sum: Vec<u8> = ma
                    .exponents
                    .iter()
                    .zip(&mb.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                products.push((a as u32, b as u32, lookup[&sum] as u32));
            }
        }

        let derivatives = (0..nvars)
            .map(|var| {
                indices
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.exponents[var] > 0)
                    .map(|(src, m)| {
                        let mut lowered = m.exponents.clone();
                        lowered[var] -= 1;
                        (src as u32, lookup[&lowered] as u32, m.exponents[var] as f64)
                    })
                    .collect()
            })
            .collect();

        Layout { indices, degrees, lookup, products, derivatives }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn slot(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(&alpha.exponents).copied()
    }

    pub fn unit_slot(&self, var: usize) -> usize {
        // degree-1 slots directly follow the constant, in variable order
        1 + var
    }
}

fn enumerate(nvars: usize, remaining: usize, cur: &mut Vec<u8>, pos: usize, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == nvars {
        cur[pos] = remaining as u8;
        out.push(cur.clone());
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e as u8;
        enumerate(nvars, remaining - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

pub(crate) fn layout(nvars: usize) -> &'static Layout {
    static LAYOUTS: [OnceLock<Layout>; MAX_VARS] = [const { OnceLock::new() }; MAX_VARS];
    assert!(
        (1..=MAX_VARS).contains(&nvars),
        "jets support 1..={MAX_VARS} variables, got {nvars}"
    );
    LAYOUTS[nvars - 1].get_or_init(|| Layout::build(nvars))
}

/// `binomial(n + 4, 4)`, the number of coefficients of an order-4 jet.
pub fn jet_len(nvars: usize) -> usize {
    (1..=ORDER).fold(1, |acc, k| acc * (nvars + k) / k)
}
