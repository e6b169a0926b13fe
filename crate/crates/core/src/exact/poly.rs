use crate::ball::{BallComplex, BallReal};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial with integer coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x^n`.
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, n: u32) -> IntPoly {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Gcd of the coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// `p(x)` composed with `q(x)`.
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `p(x + a)`.
    pub fn shift(&self, a: &BigInt) -> IntPoly {
        self.compose(&Self::new(vec![a.clone(), BigInt::one()]))
    }

    /// `x^deg p(1/x)`.
    pub fn reverse(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_ball(&self, z: &BallComplex) -> BallComplex {
        let prec = z.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(BallComplex::zero(prec), |acc, c| acc.mul(z).add(&BallComplex::from_bigint(c, prec)))
    }

    pub fn eval_ball_real(&self, x: &BallReal) -> BallReal {
        let prec = x.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(BallReal::zero(prec), |acc, c| acc.mul(x).add(&BallReal::from_bigint(c, prec)))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Exact quotient `self / d` when `d` divides `self` in `Z[x]`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.to_rat().div_rem(&d.to_rat());
        if !r.is_zero() {
            return None;
        }
        q.to_int()
    }

    /// Remainder of `self` modulo a monic `m`, staying in `Z[x]`.
    pub fn rem_monic(&self, m: &IntPoly) -> IntPoly {
        assert!(m.is_monic(), "rem_monic needs a monic modulus");
        let dm = m.deg();
        let mut r = self.coeffs.clone();
        while r.len() > dm && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].clone();
            if !c.is_zero() {
                for (i, mc) in m.coeffs.iter().enumerate() {
                    r[top - dm + i] -= &c * mc;
                }
            }
            r.pop();
            trim(&mut r);
        }
        Self::new(r)
    }

    /// Primitive gcd in `Z[x]` with positive leading coefficient.
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        let g = self.to_rat().gcd(&o.to_rat());
        g.to_primitive_int()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() <= 0
    }

    /// Squarefree part (primitive).
    pub fn squarefree_part(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        self.primitive_part().to_rat().div_rem(&g.to_rat()).0.to_primitive_int()
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() <= 0 {
            return 0;
        }
        let mut seq = vec![self.to_rat(), self.derivative().to_rat()];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let changes = |signs: Vec<i32>| {
            let s: Vec<i32> = signs.into_iter().filter(|&x| x != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |c: &BigRational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
        let at_pos: Vec<i32> = seq.iter().map(|p| sign(&p.lead())).collect();
        let at_neg: Vec<i32> = seq
            .iter()
            .map(|p| if p.deg() % 2 == 0 { sign(&p.lead()) } else { -sign(&p.lead()) })
            .collect();
        changes(at_neg) - changes(at_pos)
    }

    /// Cauchy bound: every complex root has modulus below `2^bound`.
    pub fn root_bound_log2(&self) -> i64 {
        let lead = self.lead().abs();
        let mut best = 0f64;
        let n = self.deg();
        for (i, c) in self.coeffs.iter().enumerate().take(n) {
            if c.is_zero() {
                continue;
            }
            let ratio = big_log2(&c.abs()) - big_log2(&lead);
            best = best.max((ratio + 1.0) / (n - i) as f64);
        }
        best.ceil() as i64 + 1
    }

    /// Product over the complex roots of `g(root)` for monic `self`, i.e. the
    /// resultant `Res(self, g)`, computed exactly as a determinant of the
    /// multiplication-by-`g` map on `Z[x]/(self)`.
    pub fn resultant_monic(&self, g: &IntPoly) -> BigInt {
        let n = self.deg();
        let r = g.rem_monic(self);
        let mut rows = Vec::with_capacity(n);
        let mut cur = r;
        for _ in 0..n {
            rows.push((0..n).map(|i| cur.coeff(i)).collect::<Vec<_>>());
            cur = cur.mul(&IntPoly::x()).rem_monic(self);
        }
        super::matrix::IntMatrix::from_rows(rows).det()
    }

    /// Discriminant of a monic polynomial.
    pub fn discriminant_monic(&self) -> BigInt {
        let n = self.deg() as u64;
        let r = self.resultant_monic(&self.derivative());
        if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Integer polynomial from JSON-style decimal strings or numbers.
    pub fn from_strs(cs: &[String]) -> Result<IntPoly, String> {
        cs.iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|_| format!("bad integer coefficient {s:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(IntPoly::new)
    }
}

/// Approximate `log2 |n|`.
pub fn big_log2(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 60 {
        return (n.abs().to_string().parse::<f64>().unwrap_or(1.0)).log2();
    }
    let top: BigInt = n.abs() >> (bits - 60) as usize;
    top.to_string().parse::<f64>().unwrap_or(1.0).log2() + (bits - 60) as f64
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let lead_inv = d.lead().recip();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Integer polynomial when every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    /// Clears denominators and returns the primitive integer multiple.
    pub fn to_primitive_int(&self) -> IntPoly {
        let l = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let v = self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        IntPoly::new(v).primitive_part()
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> RatPoly {
        let n = xs.len();
        // Newton divided differences.
        let mut dd: Vec<BigRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = RatPoly::new(vec![dd[n - 1].clone()]);
        for i in (0..n - 1).rev() {
            let lin = RatPoly::new(vec![-xs[i].clone(), BigRational::one()]);
            acc = acc.mul(&lin).add(&RatPoly::new(vec![dd[i].clone()]));
        }
        acc
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "RatPoly[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn display_formats() {
        assert_eq!(p(&[1, 0, 1]).to_string(), "x^2 + 1");
        assert_eq!(p(&[1, -1, 1, -1, 1]).to_string(), "x^4 - x^3 + x^2 - x + 1");
        assert_eq!(p(&[-2, 0, 3]).to_string(), "3*x^2 - 2");
        assert_eq!(p(&[]).to_string(), "0");
    }

    #[test]
    fn gcd_and_exact_division() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn squarefree() {
        assert!(p(&[1, 0, 1]).is_squarefree());
        let sq = p(&[1, 1]).mul(&p(&[1, 1])).mul(&p(&[0, 1]));
        assert!(!sq.is_squarefree());
        assert_eq!(sq.squarefree_part(), p(&[0, 1, 1]));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0);
        assert_eq!(p(&[-2, 0, 0, 1]).count_real_roots(), 1);
        assert_eq!(p(&[0, -1, 0, 1]).count_real_roots(), 3);
        assert_eq!(p(&[1, 0, -2, 0, 1]).count_real_roots(), 2);
    }

    #[test]
    fn discriminants() {
        assert_eq!(p(&[1, 0, 1]).discriminant_monic(), BigInt::from(-4));
        assert_eq!(p(&[1, 1, 1]).discriminant_monic(), BigInt::from(-3));
        // x^3 + a x + b has discriminant -4a^3 - 27b^2.
        assert_eq!(p(&[-98, -35, 0, 1]).discriminant_monic(), BigInt::from(4 * 35i64.pow(3) - 27 * 98 * 98));
        assert_eq!(p(&[1, 1, 1, 1, 1]).discriminant_monic(), BigInt::from(125));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -1, 0, 2]).to_rat();
        let xs: Vec<BigRational> = (0..4).map(|i| BigRational::from_integer(BigInt::from(i))).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(RatPoly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn root_bound_holds() {
        let f = p(&[-1000, 0, 1]);
        assert!(f.root_bound_log2() >= 5);
    }
}
