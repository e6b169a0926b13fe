//! Exact quadratic irrationalities `a + b√d`, used to read CM points such as
//! `2i` or `(1+i√7)/2`.

use super::NumericError;
use crate::ball::{BallComplex, BallReal};
use crate::exact::parse::{parse_expr, ExprValue};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Radicands are factored by trial division up to this bound.
const MAX_RADICAND: u64 = 1_000_000_000_000;

/// `a + b√d` with `d` squarefree and different from 0 and 1; `d = 0` marks a
/// rational value (and then `b = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

fn squarefree_split(n: &BigInt) -> Result<(BigInt, BigInt), String> {
    // n = s^2 * d with d squarefree, sign carried by d.
    let m = n.abs().to_u64().filter(|&m| m <= MAX_RADICAND).ok_or("radicand too large")?;
    let mut rest = m;
    let mut s = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    d *= rest;
    let d = if n.is_negative() { -BigInt::from(d) } else { BigInt::from(d) };
    Ok((BigInt::from(s), d))
}

impl QuadraticNumber {
    pub fn rational(a: BigRational) -> Self {
        QuadraticNumber { a, b: BigRational::zero(), d: BigInt::zero() }
    }

    /// `a + b√d` for an arbitrary nonzero integer `d`, normalized.
    pub fn new(a: BigRational, b: BigRational, d: &BigInt) -> Result<Self, String> {
        if b.is_zero() || d.is_zero() {
            return Ok(Self::rational(a));
        }
        let (s, d) = squarefree_split(d)?;
        let b = b * BigRational::from_integer(s);
        if d.is_one() {
            return Ok(Self::rational(a + b));
        }
        Ok(QuadraticNumber { a, b, d })
    }

    pub fn i() -> Self {
        QuadraticNumber { a: BigRational::zero(), b: BigRational::one(), d: BigInt::from(-1) }
    }

    pub fn re_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_coeff(&self) -> &BigRational {
        &self.b
    }

    /// Squarefree radicand, 0 for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True for a non-real value with positive imaginary part.
    pub fn in_upper_half_plane(&self) -> bool {
        self.d.is_negative() && self.b.is_positive()
    }

    /// Primitive integer minimal polynomial `A x^2 + B x + C` (`A > 0`) of an
    /// irrational value.
    pub fn min_poly(&self) -> Option<(BigInt, BigInt, BigInt)> {
        if self.is_rational() {
            return None;
        }
        let d = BigRational::from_integer(self.d.clone());
        let b1 = -(&self.a + &self.a);
        let c0 = &self.a * &self.a - &self.b * &self.b * d;
        let l = b1.denom().lcm(c0.denom());
        let big_a = l.clone();
        let big_b = (b1 * BigRational::from_integer(l.clone())).to_integer();
        let big_c = (c0 * BigRational::from_integer(l)).to_integer();
        let g = big_a.gcd(&big_b).gcd(&big_c);
        Some((big_a / &g, big_b / &g, big_c / &g))
    }

    /// Discriminant `B^2 - 4AC` of the minimal polynomial.
    pub fn discriminant(&self) -> Option<BigInt> {
        let (a, b, c) = self.min_poly()?;
        Some(&b * &b - BigInt::from(4) * a * c)
    }

    pub fn to_ball(&self, prec: u32) -> BallComplex {
        let a = BallReal::from_rational(&self.a, prec);
        if self.is_rational() {
            return BallComplex::from_real(a);
        }
        let b = BallReal::from_rational(&self.b, prec);
        let r = BallReal::from_bigint(&self.d.abs(), prec + 8).sqrt().expect("positive radicand").with_prec(prec);
        if self.d.is_negative() {
            BallComplex::new(a, b.mul(&r))
        } else {
            BallComplex::from_real(a.add(&b.mul(&r)))
        }
    }

    fn inv(&self) -> Result<Self, String> {
        let d = BigRational::from_integer(self.d.clone());
        let n = &self.a * &self.a - &self.b * &self.b * d;
        if n.is_zero() {
            return Err("division by zero".into());
        }
        Ok(QuadraticNumber { a: &self.a / &n, b: -(&self.b / &n), d: self.d.clone() })
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let rad = if self.d == BigInt::from(-1) { "i".to_string() } else { format!("sqrt({})", self.d) };
        let mag = self.b.abs();
        let term = if mag.is_one() {
            rad
        } else if mag.is_integer() {
            format!("{mag}*{rad}")
        } else {
            format!("({mag})*{rad}")
        };
        let neg = self.b.is_negative();
        match (self.a.is_zero(), neg) {
            (true, false) => write!(f, "{term}"),
            (true, true) => write!(f, "-{term}"),
            (false, false) => write!(f, "{} + {term}", self.a),
            (false, true) => write!(f, "{} - {term}", self.a),
        }
    }
}

impl ExprValue for QuadraticNumber {
    fn from_int(n: BigInt) -> Self {
        Self::rational(BigRational::from_integer(n))
    }

    fn add(&self, o: &Self) -> Result<Self, String> {
        if o.is_rational() || self.is_rational() || self.d == o.d {
            let d = if self.is_rational() { &o.d } else { &self.d };
            return QuadraticNumber::new(&self.a + &o.a, &self.b + &o.b, d);
        }
        Err("expression leaves a quadratic field".into())
    }

    fn sub(&self, o: &Self) -> Result<Self, String> {
        let neg = QuadraticNumber { a: -o.a.clone(), b: -o.b.clone(), d: o.d.clone() };
        self.add(&neg)
    }

    fn mul(&self, o: &Self) -> Result<Self, String> {
        if self.is_rational() {
            return QuadraticNumber::new(&self.a * &o.a, &self.a * &o.b, &o.d);
        }
        if o.is_rational() {
            return QuadraticNumber::new(&self.a * &o.a, &self.b * &o.a, &self.d);
        }
        if self.d == o.d {
            let d = BigRational::from_integer(self.d.clone());
            let a = &self.a * &o.a + &self.b * &o.b * d;
            let b = &self.a * &o.b + &self.b * &o.a;
            return QuadraticNumber::new(a, b, &self.d);
        }
        if self.a.is_zero() && o.a.is_zero() {
            // Principal branches: √d1·√d2 = -√(d1 d2) when both are negative.
            let mut b = &self.b * &o.b;
            if self.d.is_negative() && o.d.is_negative() {
                b = -b;
            }
            return QuadraticNumber::new(BigRational::zero(), b, &(&self.d * &o.d));
        }
        Err("expression leaves a quadratic field".into())
    }

    fn div(&self, o: &Self) -> Result<Self, String> {
        self.mul(&o.inv()?)
    }

    fn pow(&self, n: u32) -> Result<Self, String> {
        let mut acc = Self::from_int(BigInt::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn ident(name: &str, arg: Option<Self>) -> Result<Self, String> {
        match (name, arg) {
            ("i" | "I", None) => Ok(Self::i()),
            ("rho", None) => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                QuadraticNumber::new(-half.clone(), half, &BigInt::from(-3))
            }
            ("sqrt", Some(v)) => {
                if !v.is_rational() {
                    return Err("square roots of irrational values are not supported".into());
                }
                let (p, q) = (v.a.numer().clone(), v.a.denom().clone());
                // √(p/q) = √(pq)/q.
                QuadraticNumber::new(BigRational::zero(), BigRational::new(BigInt::one(), q.clone()), &(p * q))
            }
            (n, _) => Err(format!("unknown symbol {n:?}")),
        }
    }
}

/// Parses a CM point such as `2i`, `(1+i√7)/2` or `(1+sqrt(-7))/2`.
pub fn parse_tau(s: &str) -> Result<QuadraticNumber, NumericError> {
    let v: QuadraticNumber = parse_expr(s).map_err(NumericError::Parse)?;
    if !v.in_upper_half_plane() {
        return Err(NumericError::NotUpperHalfPlane);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(s: &str) -> i64 {
        parse_tau(s).unwrap().discriminant().unwrap().to_i64().unwrap()
    }

    #[test]
    fn display_round_trips() {
        for s in ["2i", "(1+sqrt(-7))/2", "rho", "-1/3+sqrt(-2)/5", "3+2*i-5", "sqrt(-163)"] {
            let t = parse_tau(s).unwrap();
            assert_eq!(parse_tau(&t.to_string()).unwrap(), t, "{t}");
        }
        assert_eq!(parse_tau("2i").unwrap().to_string(), "2*i");
        assert_eq!(parse_tau("(1+sqrt(-7))/2").unwrap().to_string(), "1/2 + (1/2)*sqrt(-7)");
    }

    #[test]
    fn discriminants() {
        assert_eq!(disc("i"), -4);
        assert_eq!(disc("2i"), -16);
        assert_eq!(disc("(1+i√7)/2"), -7);
        assert_eq!(disc("(1+sqrt(-7))/2"), -7);
        assert_eq!(disc("rho"), -3);
        assert_eq!(disc("sqrt(-2)"), -8);
        assert_eq!(disc("i*sqrt(2)"), -8);
        assert_eq!(disc("(1 + sqrt(-163))/2"), -163);
        assert_eq!(disc("3 + 2i"), -16);
    }

    #[test]
    fn radicals_normalize() {
        let v: QuadraticNumber = parse_expr("sqrt(12)").unwrap();
        assert_eq!(v.radicand(), &BigInt::from(3));
        assert_eq!(v.radical_coeff(), &BigRational::from_integer(BigInt::from(2)));
        let w: QuadraticNumber = parse_expr("i*i").unwrap();
        assert_eq!(w, QuadraticNumber::from_int(BigInt::from(-1)));
        let u: QuadraticNumber = parse_expr("sqrt(-2)*sqrt(-3)").unwrap();
        assert_eq!(u.radicand(), &BigInt::from(6));
        assert!(u.radical_coeff().is_negative());
        let z: QuadraticNumber = parse_expr("1/(1+i)").unwrap();
        assert_eq!(z.re_part(), &BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn rejects() {
        assert!(matches!(parse_tau("-i"), Err(NumericError::NotUpperHalfPlane)));
        assert!(matches!(parse_tau("3"), Err(NumericError::NotUpperHalfPlane)));
        assert!(parse_tau("sqrt(2)+i").is_err());
        assert!(parse_tau("1/0").is_err());
        assert!(parse_tau("x").is_err());
        assert!(parse_tau("sqrt(i)").is_err());
    }

    #[test]
    fn ball_value() {
        let t = parse_tau("(1+i√7)/2").unwrap().to_ball(128);
        assert!((t.re.to_f64() - 0.5).abs() < 1e-15);
        assert!((t.im.to_f64() - 7f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
