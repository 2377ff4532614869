//! Text grammar for scalars, shared with the structure-file format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | generator | '(' expr ')'
//! ```
//!
//! The generator is `z` in a cyclotomic field and the indeterminate name in a
//! rational-function field; the rationals have none.

use thiserror::Error;

use super::{FieldDescriptor, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("scalar parse error at position {position}: {message}")]
pub struct ParseScalarError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(num_bigint::BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    field: &'a FieldDescriptor,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseScalarError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().expect("digits parse as an integer");
            out.push((start, Token::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Sym(c)));
            i += 1;
        } else {
            return Err(ParseScalarError {
                position: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseScalarError> {
        Err(ParseScalarError {
            position: self.position(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn arith(
        &self,
        at: usize,
        r: Result<Scalar, ScalarError>,
    ) -> Result<Scalar, ParseScalarError> {
        r.map_err(|e| ParseScalarError {
            position: at,
            message: e.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                acc = &acc + &rhs;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = &acc - &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = &acc * &rhs;
            } else if self.peek() == Some(&Token::Sym('/')) {
                let at = self.position();
                self.pos += 1;
                let rhs = self.unary()?;
                acc = self.arith(at, acc.try_div(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ParseScalarError> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Scalar, ParseScalarError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.position();
        let negative = self.eat('-');
        let exponent = match self.peek() {
            Some(Token::Int(n)) => {
                let Ok(e) = i64::try_from(n) else {
                    return self.error("exponent out of range");
                };
                self.pos += 1;
                e
            }
            _ => return self.error("expected an integer exponent"),
        };
        let exponent = if negative { -exponent } else { exponent };
        self.arith(at, base.pow(exponent))
    }

    fn atom(&mut self) -> Result<Scalar, ParseScalarError> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Scalar::from_rational(
                    self.field,
                    num_rational::BigRational::from_integer(n),
                ))
            }
            Some(Token::Ident(name)) => {
                if self.field.generator_name() == Some(name.as_str()) {
                    self.pos += 1;
                    Ok(Scalar::generator(self.field).expect("field has a generator"))
                } else {
                    self.error(format!("{name:?} is not an element of {}", self.field))
                }
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Some(Token::Sym(c)) => self.error(format!("unexpected {c:?}")),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parse `text` as an element of `field`.
pub fn parse_scalar(text: &str, field: &FieldDescriptor) -> Result<Scalar, ParseScalarError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        field,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction() {
        let f = FieldDescriptor::Rationals;
        assert_eq!(parse_scalar("-3/4", &f).unwrap(), Scalar::fraction(&f, -3, 4));
        assert_eq!(parse_scalar(" 7 ", &f).unwrap(), Scalar::from_int(&f, 7));
    }

    #[test]
    fn laurent_polynomial() {
        let f = FieldDescriptor::rational_functions("q").unwrap();
        let v = parse_scalar("q^2 - q^-1", &f).unwrap();
        let q = Scalar::generator(&f).unwrap();
        assert_eq!(v, &(&q * &q) - &q.inv().unwrap());
        assert_eq!(v.to_string(), "q^2 - q^-1");
    }

    #[test]
    fn cyclotomic_sum() {
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        let v = parse_scalar("z + 1", &f).unwrap();
        let z = Scalar::generator(&f).unwrap();
        assert_eq!(v, &z + &Scalar::one(&f));
        // z^2 = -z - 1
        assert_eq!(parse_scalar("z^2", &f).unwrap(), v.neg());
    }

    #[test]
    fn out_of_field_token() {
        let err = parse_scalar("1 + q", &FieldDescriptor::Rationals).unwrap_err();
        assert_eq!(err.position, 4);
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        assert!(parse_scalar("q", &f).is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let f = FieldDescriptor::Rationals;
        assert_eq!(parse_scalar("1 + * 2", &f).unwrap_err().position, 4);
        assert_eq!(parse_scalar("(1", &f).unwrap_err().position, 2);
        assert_eq!(parse_scalar("1 $", &f).unwrap_err().position, 2);
        assert_eq!(parse_scalar("1/0", &f).unwrap_err().position, 1);
        assert_eq!(parse_scalar("", &f).unwrap_err().position, 0);
        assert_eq!(parse_scalar("2 3", &f).unwrap_err().position, 2);
    }

    #[test]
    fn rendered_rational_functions_parse_back() {
        let f = FieldDescriptor::rational_functions("t").unwrap();
        let v = parse_scalar("(t^2 + 1)/(3*t - 6) - 2*t^-3", &f).unwrap();
        assert_eq!(parse_scalar(&v.to_string(), &f).unwrap(), v);
    }
}
