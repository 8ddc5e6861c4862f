//! The coefficient-expression language used by frame manifests.
//!
//! Variables are `x0..xd` for the declared chart dimension; the grammar has
//! the usual precedence (`^` > unary minus > `*` `/` > `+` `-`), left
//! associativity and parentheses, with `sin cos exp log sqrt` as the only
//! functions. Expressions evaluate over IEEE doubles and over weighted
//! jets; polynomial trees with rational literals evaluate exactly.
//!
//! The grammar in EBNF (documented in the repository README):
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = atom [ "^" exponent ] ;
//! exponent = [ "-" ] integer | "(" [ "-" ] integer ")" ;
//! atom     = number | variable | function "(" expr ")" | "(" expr ")" ;
//! ```

mod lexer;
mod parser;

use crate::jet::{var_weight, WeightedJet};
use crate::scalar::Scalar;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Debug, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: u32, col: u32, message: String },
    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdent { line: u32, col: u32, name: String },
    #[error("variable x{index} out of range at {line}:{col} (chart has x0..x{})", dim - 1)]
    VarOutOfRange {
        line: u32,
        col: u32,
        index: usize,
        dim: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Parse `source` against a chart with coordinates `x0..x{dim-1}`.
pub fn parse(source: &str, dim: usize) -> Result<Expr, ExprError> {
    parser::parse(source, dim)
}

impl Expr {
    pub fn eval_real(&self, point: &[f64]) -> Result<f64, ExprError> {
        Ok(match self {
            Expr::Const(c) => c.to_f64(),
            Expr::Var(i) => point[*i],
            Expr::Unary(op, e) => {
                let v = e.eval_real(point)?;
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Log => {
                        if v <= 0.0 {
                            return Err(ExprError::Domain(format!("log of {v}")));
                        }
                        v.ln()
                    }
                    UnaryOp::Sqrt => {
                        if v < 0.0 {
                            return Err(ExprError::Domain(format!("sqrt of {v}")));
                        }
                        v.sqrt()
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval_real(point)?;
                let y = b.eval_real(point)?;
                match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div => {
                        if y == 0.0 {
                            return Err(ExprError::Domain("division by zero".into()));
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(base, n) => {
                let v = base.eval_real(point)?;
                if v == 0.0 && *n < 0 {
                    return Err(ExprError::Domain("zero raised to negative power".into()));
                }
                v.powi(*n)
            }
        })
    }

    /// Weighted Taylor jet of the expression at `center`, truncated at the
    /// given weighted order. Exact for polynomial subtrees with exact
    /// centers; elementary functions switch the affected coefficients to
    /// doubles via truncated series.
    pub fn eval_jet(&self, center: &[Scalar], order: u32) -> Result<WeightedJet, ExprError> {
        let nv = center.len();
        Ok(match self {
            Expr::Const(c) => WeightedJet::constant(nv, order, c.clone()),
            Expr::Var(i) => {
                let mut jet = WeightedJet::constant(nv, order, center[*i].clone());
                if var_weight(*i) <= order {
                    jet = jet.add(&WeightedJet::variable(nv, order, *i));
                }
                jet
            }
            Expr::Unary(op, e) => {
                let inner = e.eval_jet(center, order)?;
                match op {
                    UnaryOp::Neg => inner.neg(),
                    UnaryOp::Sin => inner.compose_series(&sin_series(inner.constant_term().to_f64(), order)),
                    UnaryOp::Cos => inner.compose_series(&cos_series(inner.constant_term().to_f64(), order)),
                    UnaryOp::Exp => inner.compose_series(&exp_series(inner.constant_term().to_f64(), order)),
                    UnaryOp::Log => {
                        let c = inner.constant_term().to_f64();
                        if c <= 0.0 {
                            return Err(ExprError::Domain(format!("log of {c} at center")));
                        }
                        inner.compose_series(&log_series(c, order))
                    }
                    UnaryOp::Sqrt => {
                        let c = inner.constant_term().to_f64();
                        if c <= 0.0 {
                            return Err(ExprError::Domain(format!("sqrt of {c} at center")));
                        }
                        inner.compose_series(&sqrt_series(c, order))
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval_jet(center, order)?;
                let y = b.eval_jet(center, order)?;
                match op {
                    BinaryOp::Add => x.add(&y),
                    BinaryOp::Sub => x.sub(&y),
                    BinaryOp::Mul => x.mul(&y),
                    BinaryOp::Div => x.mul(&jet_recip(&y)?),
                }
            }
            Expr::Pow(base, n) => {
                let b = base.eval_jet(center, order)?;
                jet_powi(&b, *n)?
            }
        })
    }

    /// Polynomial trees stay inside exact rational arithmetic end to end.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Unary(UnaryOp::Neg, e) => e.is_polynomial(),
            Expr::Unary(..) => false,
            Expr::Binary(BinaryOp::Div, ..) => false,
            Expr::Binary(_, a, b) => a.is_polynomial() && b.is_polynomial(),
            Expr::Pow(base, n) => *n >= 0 && base.is_polynomial(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// 1/(c + h) as a truncated series; errors when the constant term vanishes.
fn jet_recip(jet: &WeightedJet) -> Result<WeightedJet, ExprError> {
    let c = jet.constant_term();
    if c.is_zero() {
        return Err(ExprError::Domain(
            "division by expression vanishing at center".into(),
        ));
    }
    let cinv = c.recip().unwrap();
    let mut series = Vec::with_capacity(jet.order() as usize + 1);
    let mut coeff = cinv.clone();
    for _ in 0..=jet.order() {
        series.push(coeff.clone());
        coeff = -(&coeff * &cinv);
    }
    Ok(jet.compose_series(&series))
}

fn jet_powi(jet: &WeightedJet, n: i32) -> Result<WeightedJet, ExprError> {
    let nv = jet.nvars();
    let order = jet.order();
    if n == 0 {
        return Ok(WeightedJet::constant(nv, order, Scalar::one()));
    }
    let base = if n > 0 {
        jet.clone()
    } else {
        jet_recip(jet)?
    };
    let mut out = WeightedJet::constant(nv, order, Scalar::one());
    for _ in 0..n.unsigned_abs() {
        out = out.mul(&base);
    }
    Ok(out)
}

fn sin_series(c: f64, order: u32) -> Vec<Scalar> {
    derivative_cycle(order, [c.sin(), c.cos(), -c.sin(), -c.cos()])
}

fn cos_series(c: f64, order: u32) -> Vec<Scalar> {
    derivative_cycle(order, [c.cos(), -c.sin(), -c.cos(), c.sin()])
}

fn derivative_cycle(order: u32, cycle: [f64; 4]) -> Vec<Scalar> {
    let mut fact = 1.0;
    (0..=order)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            Scalar::from_f64(cycle[(k % 4) as usize] / fact)
        })
        .collect()
}

fn exp_series(c: f64, order: u32) -> Vec<Scalar> {
    let e = c.exp();
    let mut fact = 1.0;
    (0..=order)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            Scalar::from_f64(e / fact)
        })
        .collect()
}

fn log_series(c: f64, order: u32) -> Vec<Scalar> {
    (0..=order)
        .map(|k| {
            if k == 0 {
                Scalar::from_f64(c.ln())
            } else {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                Scalar::from_f64(sign / (k as f64 * c.powi(k as i32)))
            }
        })
        .collect()
}

fn sqrt_series(c: f64, order: u32) -> Vec<Scalar> {
    // d^k/du^k sqrt(u) / k! at u=c
    let mut coeff = c.sqrt();
    (0..=order)
        .map(|k| {
            if k > 0 {
                let kf = k as f64;
                coeff *= (1.5 - kf) / kf / c;
            }
            Scalar::from_f64(coeff)
        })
        .collect()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(c) => {
                if c.to_f64() < 0.0 {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Unary(UnaryOp::Neg, e) => {
                write!(f, "-")?;
                paren(f, e, 3)
            }
            Expr::Unary(op, e) => {
                let name = match op {
                    UnaryOp::Sin => "sin",
                    UnaryOp::Cos => "cos",
                    UnaryOp::Exp => "exp",
                    UnaryOp::Log => "log",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}({e})")
            }
            Expr::Binary(op, a, b) => {
                let (sym, prec) = match op {
                    BinaryOp::Add => ("+", 1),
                    BinaryOp::Sub => ("-", 1),
                    BinaryOp::Mul => ("*", 2),
                    BinaryOp::Div => ("/", 2),
                };
                paren(f, a, prec)?;
                write!(f, " {sym} ")?;
                // left associativity: the right operand needs strictly
                // higher precedence to omit parentheses
                paren(f, b, prec + 1)
            }
            Expr::Pow(base, n) => {
                paren(f, base, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_example() {
        let e = parse("x1*x2 + 3", 3).unwrap();
        assert_eq!(e.eval_real(&[0.0, 2.0, 5.0]).unwrap(), 13.0);
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse("x1 +* 2", 3).unwrap_err();
        match err {
            ExprError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn variable_range_is_checked() {
        assert!(matches!(
            parse("x3", 3).unwrap_err(),
            ExprError::VarOutOfRange { index: 3, dim: 3, .. }
        ));
    }

    #[test]
    fn unknown_identifier_is_rejected() {
        assert!(matches!(
            parse("y1 + 2", 3).unwrap_err(),
            ExprError::UnknownIdent { .. }
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("2 - 3 - 4", 1).unwrap();
        assert_eq!(e.eval_real(&[0.0]).unwrap(), -5.0);
        let e = parse("2 + 3 * x0^2", 1).unwrap();
        assert_eq!(e.eval_real(&[2.0]).unwrap(), 14.0);
        let e = parse("-x0^2", 1).unwrap();
        assert_eq!(e.eval_real(&[3.0]).unwrap(), -9.0);
        let e = parse("x0^-2", 1).unwrap();
        assert_eq!(e.eval_real(&[2.0]).unwrap(), 0.25);
        let e = parse("x0^(-2)", 1).unwrap();
        assert_eq!(e.eval_real(&[2.0]).unwrap(), 0.25);
    }

    #[test]
    fn trig_at_zero() {
        let e = parse("sin(x0)", 2).unwrap();
        assert_eq!(e.eval_real(&[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn jet_of_product_monomial() {
        let e = parse("x1*x2", 3).unwrap();
        let j = e
            .eval_jet(&[Scalar::zero(), Scalar::zero(), Scalar::zero()], 2)
            .unwrap();
        assert_eq!(j.coefficient(&[0, 1, 1]), Scalar::one());
        assert_eq!(j.terms().count(), 1);
    }

    #[test]
    fn jet_of_sin_matches_taylor() {
        let e = parse("sin(x1)", 3).unwrap();
        let j = e
            .eval_jet(&[Scalar::zero(), Scalar::zero(), Scalar::zero()], 3)
            .unwrap();
        assert!((j.coefficient(&[0, 1, 0]).to_f64() - 1.0).abs() < 1e-15);
        assert!((j.coefficient(&[0, 3, 0]).to_f64() + 1.0 / 6.0).abs() < 1e-15);
        assert!(j.coefficient(&[0, 2, 0]).is_zero());
    }

    #[test]
    fn weighted_truncation_of_exp() {
        // x0 has weight 2, so at order 2 only 1 + x0 survives
        let e = parse("exp(x0)", 2).unwrap();
        let j = e.eval_jet(&[Scalar::zero(), Scalar::zero()], 2).unwrap();
        assert!((j.constant_term().to_f64() - 1.0).abs() < 1e-15);
        assert!((j.coefficient(&[1, 0]).to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(j.terms().count(), 2);
    }

    #[test]
    fn division_by_vanishing_center_is_domain_error() {
        let e = parse("1/x1", 2).unwrap();
        assert!(matches!(
            e.eval_jet(&[Scalar::zero(), Scalar::zero()], 2),
            Err(ExprError::Domain(_))
        ));
    }

    #[test]
    fn rational_division_stays_exact_in_jets() {
        let e = parse("x1 / (1 + x1)", 2).unwrap();
        let j = e.eval_jet(&[Scalar::zero(), Scalar::zero()], 2).unwrap();
        // x1 - x1^2 + ...
        assert!(j.coefficient(&[0, 1]).eq_exact(&Scalar::one()));
        assert!(j.coefficient(&[0, 2]).eq_exact(&Scalar::from_int(-1)));
        assert!(j.is_exact());
    }

    #[test]
    fn pretty_print_parse_roundtrip_is_idempotent() {
        for src in [
            "x1*x2 + 3",
            "-(x0 + x1)^2 * sin(x2) - 1/2",
            "x0 - x1 - x2",
            "x0 / (x1 / x2)",
            "sqrt(exp(x0) + 1) * log(2 + cos(x1))",
        ] {
            let once = parse(src, 3).unwrap().to_string();
            let twice = parse(&once, 3).unwrap().to_string();
            assert_eq!(once, twice, "not idempotent for `{src}`");
        }
    }
}
