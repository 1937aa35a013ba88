use super::ast::{BinOp, ExprNode, Func};
use super::EvalError;
use crate::jets::{seed_point, Elementary, JetError, TaylorJet};

fn fail(node: &ExprNode, source: JetError) -> EvalError {
    EvalError { expr: node.to_string(), source }
}

fn constant_exponent(node: &ExprNode) -> Result<f64, EvalError> {
    eval_f64(node, &[])
}

/// Evaluates `node` on arbitrary input jets (one per chart variable).
pub fn eval_jet(node: &ExprNode, inputs: &[TaylorJet]) -> Result<TaylorJet, EvalError> {
    let nvars = inputs.first().map(TaylorJet::nvars).ok_or_else(|| {
        fail(node, JetError::DimensionMismatch { expected: 1, found: 0 })
    })?;
    match node {
        ExprNode::Constant(v) => Ok(TaylorJet::constant(*v, nvars)),
        ExprNode::Variable(i) => inputs
            .get(*i)
            .cloned()
            .ok_or_else(|| fail(node, JetError::VarOutOfRange { index: *i, nvars: inputs.len() })),
        ExprNode::Neg(a) => Ok(-eval_jet(a, inputs)?),
        ExprNode::Binary { op: BinOp::Pow, lhs, rhs } => {
            let r = constant_exponent(rhs)?;
            eval_jet(lhs, inputs)?.powf(r).map_err(|e| fail(node, e))
        }
        ExprNode::Binary { op, lhs, rhs } => {
            let a = eval_jet(lhs, inputs)?;
            let b = eval_jet(rhs, inputs)?;
            Ok(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a.checked_div(&b).map_err(|e| fail(node, e))?,
                BinOp::Pow => unreachable!(),
            })
        }
        ExprNode::Call { func, arg } => {
            let a = eval_jet(arg, inputs)?;
            let f = match func {
                Func::Sqrt => Elementary::Sqrt,
                Func::Ln => Elementary::Ln,
                Func::Exp => Elementary::Exp,
                Func::Sin => Elementary::Sin,
                Func::Cos => Elementary::Cos,
            };
            a.elementary(f).map_err(|e| fail(node, e))
        }
    }
}

/// Jet of the expression at `point`, seeding one variable per coordinate.
pub fn eval_expr_jet(node: &ExprNode, point: &[f64]) -> Result<TaylorJet, EvalError> {
    let seeds = seed_point(point).map_err(|e| fail(node, e))?;
    eval_jet(node, &seeds)
}

/// Plain floating-point evaluation, independent of the jet machinery.
/// Domain rules match the jet evaluator.
pub fn eval_f64(node: &ExprNode, point: &[f64]) -> Result<f64, EvalError> {
    let domain = |function: &'static str, value: f64| fail(node, JetError::Domain { function, value });
    match node {
        ExprNode::Constant(v) => Ok(*v),
        ExprNode::Variable(i) => point
            .get(*i)
            .copied()
            .ok_or_else(|| fail(node, JetError::VarOutOfRange { index: *i, nvars: point.len() })),
        ExprNode::Neg(a) => Ok(-eval_f64(a, point)?),
        ExprNode::Binary { op, lhs, rhs } => {
            let a = eval_f64(lhs, point)?;
            let b = eval_f64(rhs, point)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div if b == 0.0 => Err(fail(node, JetError::SingularJet)),
                BinOp::Div => Ok(a / b),
                BinOp::Pow if b.fract() == 0.0 && b.abs() <= 64.0 => {
                    if a == 0.0 && b < 0.0 {
                        Err(fail(node, JetError::SingularJet))
                    } else {
                        Ok(a.powi(b as i32))
                    }
                }
                BinOp::Pow if a <= 0.0 => Err(domain("pow", a)),
                BinOp::Pow => Ok(a.powf(b)),
            }
        }
        ExprNode::Call { func, arg } => {
            let a = eval_f64(arg, point)?;
            match func {
                Func::Sqrt if a <= 0.0 => Err(domain("sqrt", a)),
                Func::Sqrt => Ok(a.sqrt()),
                Func::Ln if a <= 0.0 => Err(domain("ln", a)),
                Func::Ln => Ok(a.ln()),
                Func::Exp => Ok(a.exp()),
                Func::Sin => Ok(a.sin()),
                Func::Cos => Ok(a.cos()),
            }
        }
    }
}
