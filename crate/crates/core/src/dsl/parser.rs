//! Recursive-descent parser for surface expressions and surface files.
//!
//! Expression grammar (whitespace insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := '-' exponent | power          (must not mention any u_k)
//! primary  := number | 'u' digits | func '(' expr ')' | '(' expr ')'
//! func     := 'sqrt' | 'ln' | 'exp' | 'sin' | 'cos'
//! number   := digits ['.' digits*] [('e' | 'E') ['+' | '-'] digits]
//!           | '.' digits [exponent part]
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so
//! `-u1^2^0.5` is `-(u1^(2^0.5))`.

use std::collections::BTreeMap;

use super::ast::{BinOp, ExprNode, Func};
use super::{ParseError, SurfaceSpec};
use crate::jets::MAX_VARS;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |column: usize, message: String| ParseError::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let column = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lexeme: String = chars[start..i].iter().collect();
            let value: f64 = lexeme
                .parse()
                .map_err(|_| syntax(column, format!("malformed number '{lexeme}'")))?;
            out.push(Token { tok: Tok::Num(value), line, column });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, column });
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(syntax(column, format!("unexpected character '{c}'"))),
        };
        out.push(Token { tok, line, column });
        i += 1;
    }
    out.push(Token { tok: Tok::End, line, column: col0 + chars.len() });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: tok.line, column: tok.column, message: message.into() }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of expression".into(),
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = ExprNode::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = ExprNode::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<ExprNode, ParseError> {
        if self.peek().tok == Tok::Op('-') {
            self.advance();
            return Ok(ExprNode::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.advance();
        let start = self.peek().clone();
        let exponent = self.exponent()?;
        if !exponent.is_constant() {
            return Err(self.error_at(&start, "exponent must be a constant"));
        }
        Ok(ExprNode::binary(BinOp::Pow, base, exponent))
    }

    fn exponent(&mut self) -> Result<ExprNode, ParseError> {
        if self.peek().tok == Tok::Op('-') {
            self.advance();
            return Ok(ExprNode::Neg(Box::new(self.exponent()?)));
        }
        self.power()
    }

    fn primary(&mut self) -> Result<ExprNode, ParseError> {
        let tok = self.advance();
        match &tok.tok {
            Tok::Num(v) => Ok(ExprNode::Constant(*v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(name) {
                    let open = self.advance();
                    if open.tok != Tok::LParen {
                        return Err(self.error_at(&open, format!("expected '(' after {name}")));
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(ExprNode::call(func, arg));
                }
                match variable_index(name) {
                    Some(k) if k >= 1 && k <= self.nvars => Ok(ExprNode::Variable(k - 1)),
                    _ => Err(ParseError::UnknownIdentifier {
                        name: name.clone(),
                        line: tok.line,
                        column: tok.column,
                    }),
                }
            }
            other => Err(self.error_at(&tok, format!("unexpected {}", Self::describe(other)))),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        let close = self.advance();
        if close.tok != Tok::RParen {
            return Err(self.error_at(&close, format!("expected ')', found {}", Self::describe(&close.tok))));
        }
        Ok(())
    }
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('u')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

fn parse_expr_at(text: &str, nvars: usize, line: usize, col0: usize) -> Result<ExprNode, ParseError> {
    let tokens = tokenize(text, line, col0)?;
    let mut p = Parser { tokens, pos: 0, nvars };
    if p.peek().tok == Tok::End {
        let t = p.peek().clone();
        return Err(p.error_at(&t, "empty expression"));
    }
    let node = p.expr()?;
    let rest = p.peek().clone();
    if rest.tok != Tok::End {
        return Err(p.error_at(&rest, format!("unexpected {}", Parser::describe(&rest.tok))));
    }
    Ok(node)
}

/// Parses a single expression in the variables `u1 … u{nvars}`.
pub fn parse_expr(text: &str, nvars: usize) -> Result<ExprNode, ParseError> {
    parse_expr_at(text, nvars, 1, 1)
}

struct Statement {
    key: String,
    value: String,
    line: usize,
    /// 1-based column of the first value character.
    value_column: usize,
}

fn statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content: &str = raw.split('#').next().unwrap_or("");
        let mut offset = 0; // char offset of the current piece
        for piece in content.split(';') {
            let piece_len = piece.chars().count();
            if !piece.trim().is_empty() {
                let Some(eq) = piece.find('=') else {
                    let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
                    return Err(ParseError::Syntax {
                        line,
                        column: offset + lead + 1,
                        message: "expected 'key=value'".into(),
                    });
                };
                let key = piece[..eq].trim().to_string();
                let value = piece[eq + 1..].to_string();
                let value_column = offset + piece[..eq + 1].chars().count() + 1;
                out.push(Statement { key, value, line, value_column });
            }
            offset += piece_len + 1;
        }
    }
    Ok(out)
}

/// Parses a surface definition: `n=<int>`, `x1=…` through `x{n+1}=…`,
/// optional `guard=…` (repeatable, conjunctive) and `name=…`, separated by
/// newlines or `;`, with `#` comments.
pub fn parse_surface(text: &str) -> Result<SurfaceSpec, ParseError> {
    let stmts = statements(text)?;
    let mut nvars: Option<usize> = None;
    let mut name: Option<String> = None;
    let mut components: BTreeMap<usize, &Statement> = BTreeMap::new();
    let mut guards: Vec<&Statement> = Vec::new();

    for st in &stmts {
        match st.key.as_str() {
            "n" => {
                if nvars.is_some() {
                    return Err(ParseError::DuplicateKey { key: st.key.clone(), line: st.line });
                }
                let n: usize = st.value.trim().parse().map_err(|_| ParseError::InvalidDimension {
                    line: st.line,
                    value: st.value.trim().to_string(),
                })?;
                if n == 0 || n > MAX_VARS {
                    return Err(ParseError::InvalidDimension { line: st.line, value: n.to_string() });
                }
                nvars = Some(n);
            }
            "name" => {
                if name.is_some() {
                    return Err(ParseError::DuplicateKey { key: st.key.clone(), line: st.line });
                }
                name = Some(st.value.trim().to_string());
            }
            "guard" => guards.push(st),
            key => {
                let index = key
                    .strip_prefix('x')
                    .and_then(|d| if d.starts_with('0') { None } else { d.parse::<usize>().ok() })
                    .filter(|&k| k >= 1);
                let Some(k) = index else {
                    return Err(ParseError::UnknownKey { key: key.to_string(), line: st.line });
                };
                if components.insert(k, st).is_some() {
                    return Err(ParseError::DuplicateKey { key: st.key.clone(), line: st.line });
                }
            }
        }
    }

    let n = nvars.ok_or(ParseError::MissingDimension)?;
    let expected: Vec<usize> = (1..=n + 1).collect();
    if components.keys().copied().collect::<Vec<_>>() != expected {
        return Err(ParseError::ComponentCount { expected: n + 1, found: components.len() });
    }
    let parse = |st: &Statement| parse_expr_at(&st.value, n, st.line, st.value_column);
    let components = components.values().map(|st| parse(st)).collect::<Result<Vec<_>, _>>()?;
    let guards = guards.into_iter().map(parse).collect::<Result<Vec<_>, _>>()?;
    Ok(SurfaceSpec { name: name.unwrap_or_else(|| "surface".to_string()), nvars: n, components, guards })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(text: &str) -> ExprNode {
        parse_expr(text, 3).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        use BinOp::*;
        use ExprNode::*;
        let v = |i| Variable(i);
        let c = Constant;
        assert_eq!(e("u1 + u2 * u3"), ExprNode::binary(Add, v(0), ExprNode::binary(Mul, v(1), v(2))));
        assert_eq!(e("u1 - u2 - u3"), ExprNode::binary(Sub, ExprNode::binary(Sub, v(0), v(1)), v(2)));
        assert_eq!(
            e("u1^2^3"),
            ExprNode::binary(Pow, v(0), ExprNode::binary(Pow, c(2.0), c(3.0)))
        );
        assert_eq!(e("-u1^2"), Neg(Box::new(ExprNode::binary(Pow, v(0), c(2.0)))));
        assert_eq!(e("u1^-1"), ExprNode::binary(Pow, v(0), Neg(Box::new(c(1.0)))));
        assert_eq!(e("2.5e-3"), c(2.5e-3));
        assert_eq!(e(".5"), c(0.5));
        assert_eq!(e("sqrt(1 - u1)"), ExprNode::call(Func::Sqrt, ExprNode::binary(Sub, c(1.0), v(0))));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_surface("n=2; x1=u1; x2=u2; x3=u1 + * u2").unwrap_err();
        match err {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 1);
                assert_eq!(column, 28);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_expr("(u1 + u2", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("u1 u2", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("u1 $ 2", 2), Err(ParseError::Syntax { column: 4, .. })));
        assert!(matches!(parse_expr("u1^u2", 2), Err(ParseError::Syntax { column: 4, .. })));
    }

    #[test]
    fn unknown_identifiers() {
        assert!(matches!(
            parse_expr("u1 + u3", 2),
            Err(ParseError::UnknownIdentifier { ref name, column: 6, .. }) if name == "u3"
        ));
        assert!(matches!(parse_expr("tan(u1)", 2), Err(ParseError::UnknownIdentifier { .. })));
        assert!(matches!(parse_expr("u0", 2), Err(ParseError::UnknownIdentifier { .. })));
        assert!(matches!(parse_expr("u01", 2), Err(ParseError::UnknownIdentifier { .. })));
    }

    #[test]
    fn surface_files() {
        let s = parse_surface("n=2; x1=u1; x2=u2; x3=1+(u1^2+u2^2)/2").unwrap();
        assert_eq!(s.nvars, 2);
        assert_eq!(s.components.len(), 3);
        assert!(s.guards.is_empty());

        let s = parse_surface("n=1; x1=u1; x2=ln(u1); guard=u1").unwrap();
        assert_eq!(s.guards, vec![ExprNode::Variable(0)]);

        let text = "# a comment line\nname = demo  # trailing\nn = 1\nx2 = u1^2\nx1 = u1\n";
        let s = parse_surface(text).unwrap();
        assert_eq!(s.name, "demo");
        assert_eq!(s.components[0], ExprNode::Variable(0));
    }

    #[test]
    fn component_count_mismatch() {
        assert!(matches!(
            parse_surface("n=2; x1=u1; x2=u2"),
            Err(ParseError::ComponentCount { expected: 3, found: 2 })
        ));
        assert!(matches!(
            parse_surface("n=1; x1=u1; x2=u1; x3=u1"),
            Err(ParseError::ComponentCount { expected: 2, found: 3 })
        ));
        assert!(matches!(
            parse_surface("n=1; x1=u1; x3=u1"),
            Err(ParseError::ComponentCount { .. })
        ));
        assert!(matches!(parse_surface("x1=u1"), Err(ParseError::MissingDimension)));
        assert!(matches!(parse_surface("n=0; x1=1"), Err(ParseError::InvalidDimension { .. })));
        assert!(matches!(parse_surface("n=1; x1=u1; x1=u1; x2=1"), Err(ParseError::DuplicateKey { .. })));
        assert!(matches!(parse_surface("n=1; y=2"), Err(ParseError::UnknownKey { .. })));
        assert!(matches!(parse_surface("n=1; x1"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn errors_on_later_lines() {
        let err = parse_surface("n=1\nx1=u1\nx2=ln(u2)").unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { line: 3, column: 7, .. }), "{err:?}");
    }
}
