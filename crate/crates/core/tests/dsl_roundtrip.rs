use centroaffine::catalog::catalog_entries;
use centroaffine::dsl::{eval_f64, parse_expr, parse_surface, BinOp, ExprNode, Func};
use proptest::prelude::*;

fn expr_strategy(nvars: usize) -> impl Strategy<Value = ExprNode> {
    let leaf = prop_oneof![
        (-5.0..5.0f64).prop_map(ExprNode::Constant),
        (0..nvars).prop_map(ExprNode::Variable),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| ExprNode::Neg(Box::new(a))),
            (inner.clone(), inner.clone(), prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)])
                .prop_map(|(a, b, op)| ExprNode::binary(op, a, b)),
            (inner.clone(), 0u8..4).prop_map(|(a, k)| ExprNode::binary(BinOp::Pow, a, ExprNode::Constant(f64::from(k)))),
            (inner, prop_oneof![Just(Func::Exp), Just(Func::Sin), Just(Func::Cos), Just(Func::Sqrt), Just(Func::Ln)])
                .prop_map(|(a, f)| ExprNode::call(f, a)),
        ]
    })
}

fn same_value(a: &Result<f64, impl std::fmt::Debug>, b: &Result<f64, impl std::fmt::Debug>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()),
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

proptest! {
    #[test]
    fn printed_expressions_reparse_to_the_same_function(
        e in expr_strategy(3),
        p in prop::collection::vec(-1.5..1.5f64, 3),
    ) {
        let text = e.to_string();
        let parsed = parse_expr(&text, 3).unwrap();
        prop_assert_eq!(parsed.to_string(), text.clone());
        prop_assert!(same_value(&eval_f64(&e, &p), &eval_f64(&parsed, &p)), "{}", text);
    }
}

#[test]
fn catalog_surfaces_roundtrip_through_text() {
    for entry in catalog_entries() {
        let spec = entry.spec();
        let reparsed = parse_surface(&spec.to_text()).unwrap();
        assert_eq!(reparsed.to_text(), spec.to_text(), "{}", entry.name());
        assert_eq!(reparsed.components.len(), entry.dim() + 1);
    }
}
