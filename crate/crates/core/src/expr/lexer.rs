use super::ExprError;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Number(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub fn lex(source: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |n: usize, chars: &[char], line: &mut u32, col: &mut u32, i: &mut usize| {
            for k in 0..n {
                if chars[*i + k] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
            *i += n;
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => advance(1, &chars, &mut line, &mut col, &mut i),
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Token {
                    tok,
                    line: tline,
                    col: tcol,
                });
                advance(1, &chars, &mut line, &mut col, &mut i);
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j < chars.len() && chars[j] == '.' {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        j = k;
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let text: String = chars[start..j].iter().collect();
                let value = parse_number(&text).ok_or_else(|| ExprError::Syntax {
                    line: tline,
                    col: tcol,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push(Token {
                    tok: Tok::Number(value),
                    line: tline,
                    col: tcol,
                });
                advance(j - start, &chars, &mut line, &mut col, &mut i);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let text: String = chars[start..j].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(text),
                    line: tline,
                    col: tcol,
                });
                advance(j - start, &chars, &mut line, &mut col, &mut i);
            }
            other => {
                return Err(ExprError::Syntax {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Decimal literals become exact rationals, e.g. "1.25" -> 5/4 and
/// "2e-3" -> 1/500, so rational-mode frames stay exact.
fn parse_number(text: &str) -> Option<Scalar> {
    let (mantissa, exp10) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = text[pos + 1..].parse().ok()?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let shift = exp10 - frac_part.len() as i64;
    let mut num = numer;
    let mut den = BigInt::one();
    let ten = BigInt::from(10);
    if shift >= 0 {
        for _ in 0..shift {
            num *= &ten;
        }
    } else {
        for _ in 0..(-shift) {
            den *= &ten;
        }
    }
    Some(Scalar::Exact(BigRational::new(num, den)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        let toks = lex("1.25 + 2e-3").unwrap();
        match &toks[0].tok {
            Tok::Number(s) => assert!(s.eq_exact(&Scalar::ratio(5, 4))),
            other => panic!("expected number, got {other:?}"),
        }
        match &toks[2].tok {
            Tok::Number(s) => assert!(s.eq_exact(&Scalar::ratio(1, 500))),
            other => panic!("expected number, got {other:?}"),
        }
    }

    #[test]
    fn positions_are_tracked() {
        let toks = lex("x1 +\n  y").unwrap();
        assert_eq!((toks[2].line, toks[2].col), (2, 3));
    }
}
