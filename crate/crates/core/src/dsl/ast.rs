use std::fmt;

/// Built-in functions callable from surface expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Ln,
    Exp,
    Sin,
    Cos,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Right operand is always variable-free.
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree over chart variables `u1 … un` (stored zero-based).
#[derive(Clone, Debug, PartialEq)]
pub enum ExprNode {
    Constant(f64),
    Variable(usize),
    Neg(Box<ExprNode>),
    Binary { op: BinOp, lhs: Box<ExprNode>, rhs: Box<ExprNode> },
    Call { func: Func, arg: Box<ExprNode> },
}

impl ExprNode {
    pub fn binary(op: BinOp, lhs: ExprNode, rhs: ExprNode) -> ExprNode {
        ExprNode::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn call(func: Func, arg: ExprNode) -> ExprNode {
        ExprNode::Call { func, arg: Box::new(arg) }
    }

    /// Largest variable index referenced, if any.
    pub fn max_variable(&self) -> Option<usize> {
        match self {
            ExprNode::Constant(_) => None,
            ExprNode::Variable(i) => Some(*i),
            ExprNode::Neg(a) | ExprNode::Call { arg: a, .. } => a.max_variable(),
            ExprNode::Binary { lhs, rhs, .. } => match (lhs.max_variable(), rhs.max_variable()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }

    pub fn is_constant(&self) -> bool {
        self.max_variable().is_none()
    }
}

/// Prints fully parenthesized binary and unary nodes so that parsing the
/// output reproduces the same tree.
impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Constant(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            ExprNode::Constant(v) => write!(f, "{v:?}"),
            ExprNode::Variable(i) => write!(f, "u{}", i + 1),
            ExprNode::Neg(a) => write!(f, "(-{a})"),
            ExprNode::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            ExprNode::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}
