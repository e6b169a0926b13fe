//! Small recursive-descent parser for arithmetic expressions, shared by the
//! polynomial and CM-point readers.

use super::poly::IntPoly;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Longest accepted input, in bytes.
pub const MAX_INPUT: usize = 4096;
/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 512;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    if s.len() > MAX_INPUT {
        return Err(format!("input longer than {MAX_INPUT} bytes"));
    }
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().map_err(|_| "bad number".to_string())?));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            '√' => {
                out.push(Tok::Ident("sqrt".into()));
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            _ => return Err(format!("unexpected character {c:?}")),
        }
    }
    Ok(out)
}

/// Values an expression can evaluate to.
pub trait ExprValue: Sized + Clone {
    fn from_int(n: BigInt) -> Self;
    fn add(&self, o: &Self) -> Result<Self, String>;
    fn sub(&self, o: &Self) -> Result<Self, String>;
    fn mul(&self, o: &Self) -> Result<Self, String>;
    fn div(&self, o: &Self) -> Result<Self, String>;
    fn pow(&self, n: u32) -> Result<Self, String>;
    /// A bare identifier (`arg = None`) or a one-argument call.
    fn ident(name: &str, arg: Option<Self>) -> Result<Self, String>;
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    depth: usize,
}

const MAX_DEPTH: usize = 64;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr<V: ExprValue>(&mut self) -> Result<V, String> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err("expression nested too deeply".into());
        }
        let mut acc = self.term::<V>()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term<V: ExprValue>(&mut self) -> Result<V, String> {
        let mut acc = self.unary::<V>()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                // Implicit multiplication: `3x`, `2i`, `x(x+1)`.
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::Num(_)) => {
                    acc = acc.mul(&self.power()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary<V: ExprValue>(&mut self) -> Result<V, String> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err("expression nested too deeply".into());
                }
                let v: V = self.unary()?;
                self.depth -= 1;
                V::from_int(BigInt::zero()).sub(&v)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<V: ExprValue>(&mut self) -> Result<V, String> {
        let base = self.atom::<V>()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.next() {
                Some(Tok::Num(n)) => n,
                _ => return Err("exponent must be a non-negative integer literal".into()),
            };
            let e = e.to_u32().filter(|&e| e <= MAX_EXPONENT).ok_or("exponent too large")?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom<V: ExprValue>(&mut self) -> Result<V, String> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(V::from_int(n)),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let arg = self.expr::<V>()?;
                    if self.next() != Some(Tok::RParen) {
                        return Err("missing ')'".into());
                    }
                    V::ident(&name, Some(arg))
                } else if name == "sqrt" && matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_))) {
                    // Prefix radical: `√7`, `√√2`.
                    self.depth += 1;
                    if self.depth > MAX_DEPTH {
                        return Err("expression nested too deeply".into());
                    }
                    let arg = self.atom::<V>()?;
                    self.depth -= 1;
                    V::ident("sqrt", Some(arg))
                } else {
                    V::ident(&name, None)
                }
            }
            Some(Tok::LParen) => {
                let v = self.expr::<V>()?;
                if self.next() != Some(Tok::RParen) {
                    return Err("missing ')'".into());
                }
                Ok(v)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

/// Parses and evaluates an arithmetic expression.
pub fn parse_expr<V: ExprValue>(s: &str) -> Result<V, String> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks: &toks, pos: 0, depth: 0 };
    let v = p.expr::<V>()?;
    if p.pos != toks.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(v)
}

/// Highest degree accepted while evaluating a polynomial expression.
pub const MAX_PARSED_DEGREE: usize = 4096;
/// Bound on degree times coefficient bits of any intermediate result.
const MAX_PARSED_BITS: u64 = 1 << 20;

fn max_bits(p: &IntPoly) -> u64 {
    p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn check_size(deg: usize, bits: u64) -> Result<(), String> {
    if deg > MAX_PARSED_DEGREE {
        return Err("polynomial degree too large".into());
    }
    if (deg as u64 + 1).saturating_mul(bits) > MAX_PARSED_BITS {
        return Err("coefficients too large".into());
    }
    Ok(())
}

impl ExprValue for IntPoly {
    fn from_int(n: BigInt) -> Self {
        IntPoly::constant(n)
    }
    fn add(&self, o: &Self) -> Result<Self, String> {
        Ok(IntPoly::add(self, o))
    }
    fn sub(&self, o: &Self) -> Result<Self, String> {
        Ok(IntPoly::sub(self, o))
    }
    fn mul(&self, o: &Self) -> Result<Self, String> {
        let terms = (self.deg().min(o.deg()) + 1) as u64;
        check_size(self.deg() + o.deg(), max_bits(self) + max_bits(o) + 64 - terms.leading_zeros() as u64)?;
        Ok(IntPoly::mul(self, o))
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        if o.is_zero() {
            return Err("division by zero".into());
        }
        self.div_exact(o).ok_or_else(|| "inexact polynomial division".to_string())
    }
    fn pow(&self, n: u32) -> Result<Self, String> {
        let deg = self.deg().saturating_mul(n as usize);
        let terms = (self.deg() + 1) as u64;
        let bits = (max_bits(self) + 64 - terms.leading_zeros() as u64).saturating_mul(u64::from(n));
        check_size(deg, bits)?;
        Ok(IntPoly::pow(self, n))
    }
    fn ident(name: &str, arg: Option<Self>) -> Result<Self, String> {
        match (name, arg) {
            ("x", None) => Ok(IntPoly::x()),
            _ => Err(format!("unknown symbol {name:?} (polynomials use the variable x)")),
        }
    }
}

/// Parses `x^2 + 1` style input or a JSON coefficient list `[1, 0, 1]`
/// (lowest degree first).
pub fn parse_poly(s: &str) -> Result<IntPoly, String> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(t).map_err(|e| format!("bad JSON: {e}"))?;
        return poly_from_json(&v);
    }
    parse_expr::<IntPoly>(t)
}

/// Reads a JSON array of integers or decimal strings, lowest degree first.
pub fn poly_from_json(v: &serde_json::Value) -> Result<IntPoly, String> {
    let arr = v.as_array().ok_or("polynomial must be a JSON array")?;
    if arr.len() > MAX_PARSED_DEGREE + 1 {
        return Err("polynomial degree too large".into());
    }
    let mut out = Vec::with_capacity(arr.len());
    for c in arr {
        let n = match c {
            serde_json::Value::Number(n) => {
                n.as_i64().map(BigInt::from).ok_or_else(|| format!("non-integer coefficient {n}"))?
            }
            serde_json::Value::String(s) => {
                s.trim().parse::<BigInt>().map_err(|_| format!("bad integer coefficient {s:?}"))?
            }
            _ => return Err("coefficients must be integers or decimal strings".into()),
        };
        out.push(n);
    }
    Ok(IntPoly::new(out))
}

/// JSON array of decimal strings, lowest degree first.
pub fn poly_to_json(p: &IntPoly) -> serde_json::Value {
    serde_json::Value::Array(p.coeffs().iter().map(|c| serde_json::Value::String(c.to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_poly("x^2+1").unwrap(), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(parse_poly("x^4 - x^3 + x^2 - x + 1").unwrap(), IntPoly::from_i64(&[1, -1, 1, -1, 1]));
        assert_eq!(parse_poly("3x^2 - 2").unwrap(), IntPoly::from_i64(&[-2, 0, 3]));
        assert_eq!(parse_poly("(x-1)(x+1)").unwrap(), IntPoly::from_i64(&[-1, 0, 1]));
        assert_eq!(parse_poly("-x^3 − 2").unwrap(), IntPoly::from_i64(&[-2, 0, 0, -1]));
        assert_eq!(parse_poly("[1, 0, \"1\"]").unwrap(), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(parse_poly("(x^2-1)/(x-1)").unwrap(), IntPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x^", "x^-1", "y", "x^100000", "(x", "x)", "1/x", "[1.5]", "x $ 1", "[", "2^999999", "0/0", "x/0"] {
            assert!(parse_poly(bad).is_err(), "{bad:?} should fail");
        }
        let deep = "(".repeat(1000) + "x" + &")".repeat(1000);
        assert!(parse_poly(&deep).is_err());
        assert!(parse_poly("(2224222222222200170469222222+(2224222222222200170469222222+x)^26*6*x)^26").is_err());
        let negs = "-".repeat(1000) + "x";
        assert!(parse_poly(&negs).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = parse_poly("x^5 - 123456789012345678901234567890").unwrap();
        assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
    }
}
