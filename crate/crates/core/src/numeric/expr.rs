//! Constant expressions over `π`, `i`, square roots and CM periods,
//! evaluated lazily to any precision.

use super::periods::cm_theta;
use super::NumericError;
use crate::ball::{pi, BallComplex};
use crate::exact::parse::{parse_expr, ExprValue};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::rc::Rc;

/// Deepest expression tree accepted.
pub const MAX_EXPR_DEPTH: usize = 128;

#[derive(Debug)]
enum Node {
    Int(BigInt),
    Add(ValueExpr, ValueExpr),
    Sub(ValueExpr, ValueExpr),
    Mul(ValueExpr, ValueExpr),
    Div(ValueExpr, ValueExpr),
    Pow(ValueExpr, u32),
    Pi,
    I,
    Sqrt(ValueExpr),
    Theta(i64),
}

#[derive(Clone, Debug)]
pub struct ValueExpr {
    node: Rc<Node>,
    depth: usize,
}

impl ValueExpr {
    fn leaf(n: Node) -> Self {
        ValueExpr { node: Rc::new(n), depth: 1 }
    }

    fn binary(a: &Self, b: &Self, f: fn(ValueExpr, ValueExpr) -> Node) -> Result<Self, String> {
        let depth = a.depth.max(b.depth) + 1;
        if depth > MAX_EXPR_DEPTH {
            return Err("expression nested too deeply".into());
        }
        Ok(ValueExpr { node: Rc::new(f(a.clone(), b.clone())), depth })
    }

    fn unary(a: &Self, n: Node) -> Result<Self, String> {
        if a.depth + 1 > MAX_EXPR_DEPTH {
            return Err("expression nested too deeply".into());
        }
        Ok(ValueExpr { node: Rc::new(n), depth: a.depth + 1 })
    }

    /// Exact integer value of an expression built from integers by `+ - *`.
    fn as_int(&self) -> Option<BigInt> {
        match &*self.node {
            Node::Int(n) => Some(n.clone()),
            Node::Add(a, b) => Some(a.as_int()? + b.as_int()?),
            Node::Sub(a, b) => Some(a.as_int()? - b.as_int()?),
            Node::Mul(a, b) => Some(a.as_int()? * b.as_int()?),
            _ => None,
        }
    }

    pub fn eval(&self, prec: u32) -> Result<BallComplex, NumericError> {
        Ok(self.eval_at(prec + 32 + self.depth as u32)?.with_prec(prec))
    }

    fn eval_at(&self, wp: u32) -> Result<BallComplex, NumericError> {
        Ok(match &*self.node {
            Node::Int(n) => BallComplex::from_bigint(n, wp),
            Node::Add(a, b) => a.eval_at(wp)?.add(&b.eval_at(wp)?),
            Node::Sub(a, b) => a.eval_at(wp)?.sub(&b.eval_at(wp)?),
            Node::Mul(a, b) => a.eval_at(wp)?.mul(&b.eval_at(wp)?),
            Node::Div(a, b) => a.eval_at(wp)?.div(&b.eval_at(wp)?)?,
            Node::Pow(a, e) => a.eval_at(wp)?.pow_u(u64::from(*e)),
            Node::Pi => BallComplex::from_real(pi(wp)),
            Node::I => BallComplex::i(wp),
            Node::Sqrt(a) => a.eval_at(wp)?.sqrt()?,
            Node::Theta(d) => cm_theta(*d, wp)?,
        })
    }
}

impl ExprValue for ValueExpr {
    fn from_int(n: BigInt) -> Self {
        ValueExpr::leaf(Node::Int(n))
    }
    fn add(&self, o: &Self) -> Result<Self, String> {
        ValueExpr::binary(self, o, Node::Add)
    }
    fn sub(&self, o: &Self) -> Result<Self, String> {
        ValueExpr::binary(self, o, Node::Sub)
    }
    fn mul(&self, o: &Self) -> Result<Self, String> {
        ValueExpr::binary(self, o, Node::Mul)
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        if o.as_int().is_some_and(|n| n.is_zero()) {
            return Err("division by zero".into());
        }
        ValueExpr::binary(self, o, Node::Div)
    }
    fn pow(&self, n: u32) -> Result<Self, String> {
        ValueExpr::unary(self, Node::Pow(self.clone(), n))
    }
    fn ident(name: &str, arg: Option<Self>) -> Result<Self, String> {
        match (name, arg) {
            ("pi" | "π", None) => Ok(ValueExpr::leaf(Node::Pi)),
            ("i" | "I", None) => Ok(ValueExpr::leaf(Node::I)),
            ("sqrt", Some(a)) => ValueExpr::unary(&a, Node::Sqrt(a.clone())),
            ("theta", Some(a)) => {
                let d = a.as_int().and_then(|d| d.to_i64()).ok_or("theta takes an integer discriminant")?;
                Ok(ValueExpr::leaf(Node::Theta(d)))
            }
            (n, _) => Err(format!("unknown symbol {n:?} (known: pi, i, sqrt, theta)")),
        }
    }
}

pub fn parse_value(s: &str) -> Result<ValueExpr, NumericError> {
    parse_expr(s).map_err(NumericError::Parse)
}
