use super::lexer::{lex, Tok, Token};
use super::{BinaryOp, Expr, ExprError, UnaryOp};
use num_traits::ToPrimitive;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
    end_line: u32,
    end_col: u32,
}

pub fn parse(source: &str, dim: usize) -> Result<Expr, ExprError> {
    assert!(dim >= 1, "dim must be at least 1");
    let tokens = lex(source)?;
    let (end_line, end_col) = tokens
        .last()
        .map(|t| (t.line, t.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser {
        tokens,
        pos: 0,
        dim,
        end_line,
        end_col,
    };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ExprError::Syntax {
            line: t.line,
            col: t.col,
            message: format!("unexpected `{}`", tok_name(&t.tok)),
        });
    }
    Ok(e)
}

fn tok_name(t: &Tok) -> String {
    match t {
        Tok::Number(s) => format!("{s}"),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: String) -> ExprError {
        match self.peek() {
            Some(t) => ExprError::Syntax {
                line: t.line,
                col: t.col,
                message,
            },
            None => ExprError::Syntax {
                line: self.end_line,
                col: self.end_col,
                message: format!("{message} (at end of input)"),
            },
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => BinaryOp::Add,
                Some(Tok::Minus) => BinaryOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Star) => BinaryOp::Mul,
                Some(Tok::Slash) => BinaryOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.pos += 1;
            let exponent = self.integer_exponent()?;
            return Ok(Expr::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    /// Exponents are integer literals, optionally signed and optionally
    /// parenthesized: `x^2`, `x^-2`, `x^(-2)`.
    fn integer_exponent(&mut self) -> Result<i32, ExprError> {
        let parens = matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen));
        if parens {
            self.pos += 1;
        }
        let negative = matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus));
        if negative {
            self.pos += 1;
        }
        let t = self
            .bump()
            .ok_or_else(|| self.err_here("expected integer exponent".into()))?;
        let value = match &t.tok {
            Tok::Number(s) => match s.as_exact() {
                Some(r) if r.is_integer() => r.numer().to_i32(),
                _ => None,
            },
            _ => None,
        }
        .ok_or(ExprError::Syntax {
            line: t.line,
            col: t.col,
            message: "exponent must be an integer literal".into(),
        })?;
        if parens {
            self.expect(Tok::RParen, "`)` after exponent")?;
        }
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let t = self
            .bump()
            .ok_or_else(|| self.err_here("expected expression".into()))?;
        match t.tok {
            Tok::Number(s) => Ok(Expr::Const(s)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(rest) = name.strip_prefix('x') {
                    if let Ok(idx) = rest.parse::<usize>() {
                        if idx >= self.dim {
                            return Err(ExprError::VarOutOfRange {
                                line: t.line,
                                col: t.col,
                                index: idx,
                                dim: self.dim,
                            });
                        }
                        return Ok(Expr::Var(idx));
                    }
                }
                let func = match name.as_str() {
                    "sin" => Some(UnaryOp::Sin),
                    "cos" => Some(UnaryOp::Cos),
                    "exp" => Some(UnaryOp::Exp),
                    "log" => Some(UnaryOp::Log),
                    "sqrt" => Some(UnaryOp::Sqrt),
                    _ => None,
                };
                match func {
                    Some(op) => {
                        self.expect(Tok::LParen, "`(` after function name")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Unary(op, Box::new(arg)))
                    }
                    None => Err(ExprError::UnknownIdent {
                        line: t.line,
                        col: t.col,
                        name,
                    }),
                }
            }
            other => Err(ExprError::Syntax {
                line: t.line,
                col: t.col,
                message: format!("unexpected `{}`", tok_name(&other)),
            }),
        }
    }
}
