//! Textual immersion definitions.
//!
//! A surface file lists one expression per ambient coordinate in the chart
//! variables `u1 … un`; see [`parser`] for the grammar. Parsed trees
//! evaluate either on jets (all derivatives through order 4) or on plain
//! floats.

mod ast;
mod eval;
pub mod parser;

use std::fmt::Write as _;

use thiserror::Error;

pub use ast::{BinOp, ExprNode, Func};
pub use eval::{eval_expr_jet, eval_f64, eval_jet};
pub use parser::{parse_expr, parse_surface};

use crate::jets::JetError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown identifier '{name}' at line {line}, column {column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
    #[error("expected {expected} components x1..x{expected}, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("missing dimension line 'n=<int>'")]
    MissingDimension,
    #[error("invalid dimension '{value}' at line {line}")]
    InvalidDimension { line: usize, value: String },
    #[error("duplicate key '{key}' at line {line}")]
    DuplicateKey { key: String, line: usize },
    #[error("unknown key '{key}' at line {line}")]
    UnknownKey { key: String, line: usize },
}

/// Failure while evaluating an expression; `expr` is the offending
/// subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate {expr}: {source}")]
pub struct EvalError {
    pub expr: String,
    pub source: JetError,
}

/// A parametrized hypersurface `x: U ⊂ ℝⁿ → ℝⁿ⁺¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSpec {
    pub name: String,
    pub nvars: usize,
    /// Exactly `nvars + 1` ambient coordinates.
    pub components: Vec<ExprNode>,
    /// The chart is valid where every guard is positive.
    pub guards: Vec<ExprNode>,
}

impl SurfaceSpec {
    /// Guards are advisory: a point where a guard cannot even be evaluated
    /// counts as outside.
    pub fn in_domain(&self, point: &[f64]) -> bool {
        self.guards
            .iter()
            .all(|g| matches!(eval_f64(g, point), Ok(v) if v > 0.0))
    }

    /// Renders the surface in the file format accepted by [`parse_surface`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name={}", self.name).unwrap();
        writeln!(out, "n={}", self.nvars).unwrap();
        for (k, c) in self.components.iter().enumerate() {
            writeln!(out, "x{}={}", k + 1, c).unwrap();
        }
        for g in &self.guards {
            writeln!(out, "guard={g}").unwrap();
        }
        out
    }
}
