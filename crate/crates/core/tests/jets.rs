use centroaffine::catalog::catalog_entries;
use centroaffine::dsl::{eval_expr_jet, parse_expr};
use centroaffine::immersion::Immersion;
use centroaffine::jets::{jet_len, jet_linear_solve, seed_point, MultiIndex, TaylorJet, ORDER};
use proptest::prelude::*;

fn jet_strategy(nvars: usize) -> impl Strategy<Value = TaylorJet> {
    prop::collection::vec(-2.0..2.0f64, jet_len(nvars))
        .prop_map(move |coeffs| TaylorJet::from_coeffs(nvars, coeffs).unwrap())
}

fn close(a: &TaylorJet, b: &TaylorJet, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

proptest! {
    #[test]
    fn truncation_commutes_with_products(a in jet_strategy(3), b in jet_strategy(3), k in 0usize..=ORDER) {
        let full = (&a * &b).truncate(k);
        let low = (&a.truncate(k) * &b.truncate(k)).truncate(k);
        prop_assert!(close(&full, &low, 1e-12));
    }

    #[test]
    fn product_rule(a in jet_strategy(2), b in jet_strategy(2), var in 0usize..2) {
        let lhs = (&a * &b).derivative(var).truncate(ORDER - 1);
        let rhs = (&a.derivative(var) * &b + &a * &b.derivative(var)).truncate(ORDER - 1);
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in jet_strategy(2), b in jet_strategy(2), c in jet_strategy(2)) {
        prop_assert!(close(&(&a * &b), &(&b * &a), 1e-13));
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-11));
    }

    #[test]
    fn reciprocal_inverts(mut a in jet_strategy(3), v in 0.5..3.0f64) {
        let mut coeffs = a.coeffs().to_vec();
        coeffs[0] = v;
        a = TaylorJet::from_coeffs(3, coeffs).unwrap();
        let one = &a * &a.recip().unwrap();
        prop_assert!(close(&one, &TaylorJet::constant(1.0, 3), 1e-10));
    }

    #[test]
    fn exp_inverts_ln(mut a in jet_strategy(2), v in 0.5..3.0f64) {
        let mut coeffs = a.coeffs().to_vec();
        coeffs[0] = v;
        a = TaylorJet::from_coeffs(2, coeffs).unwrap();
        prop_assert!(close(&a.ln().unwrap().exp(), &a, 1e-10));
        let s = a.sqrt().unwrap();
        prop_assert!(close(&(&s * &s), &a, 1e-10));
    }

    #[test]
    fn linear_solve_satisfies_system(
        entries in prop::collection::vec(jet_strategy(2), 9),
        rhs in prop::collection::vec(jet_strategy(2), 3),
    ) {
        let mut a: Vec<Vec<TaylorJet>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = row[i].add_scalar(8.0);
        }
        let x = jet_linear_solve(&a, &rhs).unwrap();
        for (row, b) in a.iter().zip(&rhs) {
            let mut acc = TaylorJet::zero(2);
            for (aij, xj) in row.iter().zip(&x) {
                acc += &(aij * xj);
            }
            prop_assert!(close(&acc, b, 1e-10));
        }
    }
}

/// One-dimensional central difference of order `k` along `var`.
fn central(f: &dyn Fn(&[f64]) -> f64, x: &[f64], var: usize, k: u8, h: f64) -> f64 {
    let at = |s: f64| {
        let mut y = x.to_vec();
        y[var] += s * h;
        f(&y)
    };
    match k {
        0 => f(x),
        1 => (at(1.0) - at(-1.0)) / (2.0 * h),
        2 => (at(1.0) - 2.0 * at(0.0) + at(-1.0)) / (h * h),
        3 => (at(2.0) - 2.0 * at(1.0) + 2.0 * at(-1.0) - at(-2.0)) / (2.0 * h.powi(3)),
        4 => (at(2.0) - 4.0 * at(1.0) + 6.0 * at(0.0) - 4.0 * at(-1.0) + at(-2.0)) / h.powi(4),
        _ => unreachable!(),
    }
}

/// Tensor-product central difference for `∂^α f`, second-order accurate.
fn mixed(f: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[u8], h: f64) -> f64 {
    match alpha.iter().position(|&a| a > 0) {
        None => f(x),
        Some(var) => {
            let mut rest = alpha.to_vec();
            let k = rest[var];
            rest[var] = 0;
            let inner = |y: &[f64]| mixed(f, y, &rest, h);
            central(&inner, x, var, k, h)
        }
    }
}

fn richardson(f: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[u8], h: f64) -> f64 {
    (4.0 * mixed(f, x, alpha, h / 2.0) - mixed(f, x, alpha, h)) / 3.0
}

#[test]
fn catalog_partials_match_finite_differences() {
    let mut worst: f64 = 0.0;
    for entry in catalog_entries() {
        for p in entry.sample_points(2, 5) {
            let jets = entry.position_jets(&p).unwrap();
            for (c, jet) in jets.iter().enumerate() {
                let f = |y: &[f64]| entry.eval_values(y).unwrap()[c];
                for alpha in jet.indices() {
                    if alpha.degree() == 0 {
                        continue;
                    }
                    let exact = jet.partial(alpha).unwrap();
                    let fd = richardson(&f, &p, alpha.exponents(), 1e-2);
                    let err = (exact - fd).abs() / fd.abs().max(1.0);
                    worst = worst.max(err);
                    assert!(
                        err <= 1e-5,
                        "{} component {c} at {p:?}, {:?}: jet {exact} vs fd {fd}",
                        entry.name(),
                        alpha.exponents()
                    );
                }
            }
        }
    }
    assert!(worst > 0.0);
}

/// Expanded polynomial as `(coefficient, exponents)` terms.
type Terms = Vec<(f64, [u8; 3])>;

fn polynomial_identities() -> Vec<(&'static str, Terms)> {
    vec![
        ("(u1+u2)^2", vec![(1.0, [2, 0, 0]), (2.0, [1, 1, 0]), (1.0, [0, 2, 0])]),
        ("(u1-u2)^3", vec![(1.0, [3, 0, 0]), (-3.0, [2, 1, 0]), (3.0, [1, 2, 0]), (-1.0, [0, 3, 0])]),
        ("(u1+1)^4", vec![(1.0, [4, 0, 0]), (4.0, [3, 0, 0]), (6.0, [2, 0, 0]), (4.0, [1, 0, 0]), (1.0, [0, 0, 0])]),
        ("(u1*u2)^2", vec![(1.0, [2, 2, 0])]),
        (
            "(u1+u2+u3)^2",
            vec![(1.0, [2, 0, 0]), (1.0, [0, 2, 0]), (1.0, [0, 0, 2]), (2.0, [1, 1, 0]), (2.0, [1, 0, 1]), (2.0, [0, 1, 1])],
        ),
        ("u1^5", vec![(1.0, [5, 0, 0])]),
        ("(u1-2*u2)*(u1+2*u2)", vec![(1.0, [2, 0, 0]), (-4.0, [0, 2, 0])]),
        ("(1+u1)*(1-u1)*(1+u1^2)", vec![(1.0, [0, 0, 0]), (-1.0, [4, 0, 0])]),
        ("(u1^2+u2^2)^2", vec![(1.0, [4, 0, 0]), (2.0, [2, 2, 0]), (1.0, [0, 4, 0])]),
        ("u1*(u2+u3)-u2*(u1-u3)", vec![(1.0, [1, 0, 1]), (1.0, [0, 1, 1])]),
        ("(2*u1+3)^3", vec![(8.0, [3, 0, 0]), (36.0, [2, 0, 0]), (54.0, [1, 0, 0]), (27.0, [0, 0, 0])]),
        (
            "(u1+u2)^4",
            vec![(1.0, [4, 0, 0]), (4.0, [3, 1, 0]), (6.0, [2, 2, 0]), (4.0, [1, 3, 0]), (1.0, [0, 4, 0])],
        ),
        ("-(u1-u2)^2+(u1+u2)^2", vec![(4.0, [1, 1, 0])]),
        ("u1^3*u2-u2*u1^3", vec![]),
        ("u1*u2*u3", vec![(1.0, [1, 1, 1])]),
        (
            "(u1-1)^2*(u2+1)^2",
            vec![
                (1.0, [2, 2, 0]),
                (2.0, [2, 1, 0]),
                (1.0, [2, 0, 0]),
                (-2.0, [1, 2, 0]),
                (-4.0, [1, 1, 0]),
                (-2.0, [1, 0, 0]),
                (1.0, [0, 2, 0]),
                (2.0, [0, 1, 0]),
                (1.0, [0, 0, 0]),
            ],
        ),
        ("(u1+u2)^3-(u1-u2)^3", vec![(6.0, [2, 1, 0]), (2.0, [0, 3, 0])]),
        ("((u1+u2)/2)^2", vec![(0.25, [2, 0, 0]), (0.5, [1, 1, 0]), (0.25, [0, 2, 0])]),
        ("u1^2*u2^2*u3", vec![(1.0, [2, 2, 1])]),
        (
            "(3*u1-u2+2*u3)^2",
            vec![
                (9.0, [2, 0, 0]),
                (1.0, [0, 2, 0]),
                (4.0, [0, 0, 2]),
                (-6.0, [1, 1, 0]),
                (12.0, [1, 0, 1]),
                (-4.0, [0, 1, 1]),
            ],
        ),
    ]
}

fn binomial(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Taylor coefficient of `x^alpha` of the polynomial re-expanded about `p`.
fn shifted_coefficient(terms: &[(f64, [u8; 3])], p: &[f64; 3], alpha: &[u8]) -> f64 {
    terms
        .iter()
        .filter(|(_, e)| e.iter().zip(alpha).all(|(ei, ai)| ei >= ai))
        .map(|(c, e)| {
            let mut v = *c;
            for i in 0..3 {
                v *= binomial(e[i], alpha[i]) * p[i].powi(i32::from(e[i] - alpha[i]));
            }
            v
        })
        .sum()
}

#[test]
fn polynomial_identities_hold_coefficientwise() {
    let identities = polynomial_identities();
    assert_eq!(identities.len(), 20);
    for p in [[0.0, 0.0, 0.0], [1.0, -2.0, 3.0], [-1.0, 0.5, 2.0]] {
        for (text, terms) in &identities {
            let expr = parse_expr(text, 3).unwrap();
            let jet = eval_expr_jet(&expr, &p).unwrap();
            for alpha in jet.indices() {
                let expected = shifted_coefficient(terms, &p, alpha.exponents());
                let got = jet.coeff(alpha).unwrap();
                assert_eq!(got, expected, "{text} at {p:?}, coefficient {:?}", alpha.exponents());
            }
        }
    }
}

#[test]
fn seeded_variables_are_unit_linear() {
    let seeds = seed_point(&[0.25, -1.0, 2.0]).unwrap();
    for (i, s) in seeds.iter().enumerate() {
        for j in 0..3 {
            assert_eq!(s.coeff(&MultiIndex::unit(j, 3)).unwrap(), if i == j { 1.0 } else { 0.0 });
        }
        assert_eq!(s.truncate(1), *s);
    }
}
