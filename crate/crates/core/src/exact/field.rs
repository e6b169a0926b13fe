//! Number fields `Q[x]/(f)` with certified complex embeddings.

use super::factor::is_irreducible;
use super::poly::{IntPoly, RatPoly};
use super::roots::{isolate_roots, refine_roots};
use super::ExactError;
use crate::ball::{BallComplex, Mag};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Precision at which embeddings are isolated on construction.
pub const BASE_PREC: u32 = 128;

#[derive(Clone)]
pub struct NumberField {
    min_poly: IntPoly,
    embeddings: Vec<BallComplex>,
    primary: usize,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}, root {})", self.min_poly, self.primary)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.min_poly == o.min_poly
    }
}

impl Eq for NumberField {}

/// Builds `Q[x]/(min_poly)` with its embeddings in canonical order; the
/// generator maps to root `root_index`.
pub fn nf_create(min_poly: &IntPoly, root_index: usize) -> Result<NumberField, ExactError> {
    NumberField::new(min_poly, root_index)
}

impl NumberField {
    pub fn new(min_poly: &IntPoly, root_index: usize) -> Result<Self, ExactError> {
        if min_poly.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        if min_poly.degree() < 1 || !min_poly.is_monic() {
            return Err(ExactError::NotMonic);
        }
        if root_index >= min_poly.deg() {
            return Err(ExactError::RootIndexOutOfRange { index: root_index, degree: min_poly.deg() });
        }
        if !is_irreducible(min_poly)? {
            return Err(ExactError::ReduciblePolynomial);
        }
        let embeddings = isolate_roots(min_poly, BASE_PREC)?;
        Ok(NumberField { min_poly: min_poly.clone(), embeddings, primary: root_index })
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    pub fn primary_index(&self) -> usize {
        self.primary
    }

    /// Embeddings at the construction precision.
    pub fn embeddings(&self) -> &[BallComplex] {
        &self.embeddings
    }

    /// All embeddings certified to relative radius `2^-prec`, same order.
    pub fn embeddings_at(&self, prec: u32) -> Result<Vec<BallComplex>, ExactError> {
        if prec <= BASE_PREC {
            return Ok(self.embeddings.clone());
        }
        refine_roots(&self.min_poly, &self.embeddings, prec)
    }

    pub fn embedding(&self, index: usize, prec: u32) -> Result<BallComplex, ExactError> {
        if index >= self.degree() {
            return Err(ExactError::RootIndexOutOfRange { index, degree: self.degree() });
        }
        Ok(self.embeddings_at(prec)?.swap_remove(index))
    }

    /// Indices of the embeddings with exactly real image.
    pub fn real_embeddings(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.embeddings[i].is_real_exact()).collect()
    }

    /// The generator, realized at the primary embedding.
    pub fn generator(self: &Arc<Self>) -> AlgebraicNumber {
        AlgebraicNumber::from_poly(self, &RatPoly::new(vec![BigRational::zero(), BigRational::one()]), self.primary)
    }
}

/// An element `a(x) mod f` of a number field, together with the embedding
/// used when it is evaluated numerically.
#[derive(Clone)]
pub struct AlgebraicNumber {
    parent: Arc<NumberField>,
    coords: Vec<BigRational>,
    embedding_index: usize,
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] in Q[x]/({}) at root {}", cs.join(", "), self.parent.min_poly, self.embedding_index)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.parent == o.parent && self.coords == o.coords
    }
}

fn rat_ext_gcd(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    // Returns (g, s) with s a = g (mod b), g monic.
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (RatPoly::new(vec![BigRational::one()]), RatPoly::zero());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let ns = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, ns);
    }
    let l = r0.lead().recip();
    (r0.scale(&l), s0.scale(&l))
}

impl AlgebraicNumber {
    pub fn from_poly(parent: &Arc<NumberField>, a: &RatPoly, embedding_index: usize) -> Self {
        let m = parent.min_poly.to_rat();
        let r = if a.degree() >= m.degree() { a.div_rem(&m).1 } else { a.clone() };
        let n = parent.degree();
        let coords = (0..n).map(|i| r.coeff(i)).collect();
        AlgebraicNumber { parent: parent.clone(), coords, embedding_index }
    }

    pub fn from_rational(parent: &Arc<NumberField>, q: BigRational) -> Self {
        Self::from_poly(parent, &RatPoly::new(vec![q]), parent.primary)
    }

    pub fn from_int(parent: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(parent, BigRational::from_integer(n.into()))
    }

    pub fn parent(&self) -> &Arc<NumberField> {
        &self.parent
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn embedding_index(&self) -> usize {
        self.embedding_index
    }

    /// The same element realized at another embedding.
    pub fn at_embedding(&self, index: usize) -> Result<Self, ExactError> {
        if index >= self.parent.degree() {
            return Err(ExactError::RootIndexOutOfRange { index, degree: self.parent.degree() });
        }
        Ok(AlgebraicNumber { embedding_index: index, ..self.clone() })
    }

    pub fn as_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    fn same_parent(&self, o: &Self) {
        assert!(self.parent == o.parent, "algebraic numbers from different fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_parent(o);
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        AlgebraicNumber { coords, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_parent(o);
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        AlgebraicNumber { coords, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber { coords: self.coords.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_parent(o);
        Self::from_poly(&self.parent, &self.as_poly().mul(&o.as_poly()), self.embedding_index)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        AlgebraicNumber { coords: self.coords.iter().map(|c| c * q).collect(), ..self.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (g, s) = rat_ext_gcd(&self.as_poly(), &self.parent.min_poly.to_rat());
        debug_assert_eq!(g.degree(), 0, "minimal polynomial is irreducible");
        Some(Self::from_poly(&self.parent, &s, self.embedding_index))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::from_int(&self.parent, 1).at_embedding(self.embedding_index).expect("index valid");
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Integer polynomial `P` and denominator `d` with `self = P(x) / d`.
    pub fn numerator_denominator(&self) -> (IntPoly, BigInt) {
        let d = self.coords.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let p = self.coords.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect();
        (IntPoly::new(p), d)
    }

    /// Value at the tagged embedding with relative radius at most `2^-prec`.
    pub fn eval(&self, prec: u32) -> Result<BallComplex, ExactError> {
        self.eval_at(self.embedding_index, prec)
    }

    pub fn eval_at(&self, index: usize, prec: u32) -> Result<BallComplex, ExactError> {
        let (p, d) = self.numerator_denominator();
        let bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
        let mut w = prec + 16 + bits + 2 * self.parent.degree() as u32;
        for _ in 0..6 {
            let root = self.parent.embedding(index, w)?;
            let v = p.eval_ball(&root).div(&BallComplex::from_bigint(&d, w)).expect("nonzero denominator");
            let target = Mag::pow2(-i64::from(prec)).mul_up(&v.abs_down().max(Mag::pow2(-i64::from(prec))));
            if v.rad().le(&target) || self.is_zero() {
                return Ok(v);
            }
            w *= 2;
        }
        Err(ExactError::InsufficientPrecision { have: w, need: prec })
    }

    /// Characteristic polynomial of multiplication by `self` (monic, degree
    /// `[K:Q]`), by Faddeev-LeVerrier on the multiplication matrix.
    pub fn charpoly(&self) -> RatPoly {
        let n = self.parent.degree();
        let x = RatPoly::new(vec![BigRational::zero(), BigRational::one()]);
        let mut basis = RatPoly::new(vec![BigRational::one()]);
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            cols.push(Self::from_poly(&self.parent, &basis.mul(&self.as_poly()), 0).coords);
            basis = basis.mul(&x);
        }
        // m[i][j] = coefficient i of self * x^j.
        let m: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let matmul = |a: &Vec<Vec<BigRational>>, b: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
        };
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut mk = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k) / k.
            let mut next = matmul(&m, &mk);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &c[n - k + 1];
            }
            mk = next;
            let am = matmul(&m, &mk);
            let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
            c[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        }
        RatPoly::new(c)
    }

    /// Primitive integer minimal polynomial.
    pub fn minpoly(&self) -> IntPoly {
        let cp = self.charpoly().to_primitive_int();
        let sq = cp.squarefree_part();
        let lc = sq.lead();
        if lc < BigInt::zero() {
            sq.neg()
        } else {
            sq
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::factor::factor_q;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gaussian_field() {
        let k = nf_create(&p(&[1, 0, 1]), 0).unwrap();
        assert_eq!(k.degree(), 2);
        assert!(k.embeddings()[0].contains(&BallComplex::i(64)));
        let k = Arc::new(k);
        let i = k.generator();
        assert_eq!(i.mul(&i), AlgebraicNumber::from_int(&k, -1));
    }

    #[test]
    fn tenth_cyclotomic_is_irreducible_by_oracle() {
        let f = p(&[1, -1, 1, -1, 1]);
        assert_eq!(factor_q(&f).unwrap().factors.len(), 1);
        assert_eq!(nf_create(&f, 0).unwrap().degree(), 4);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(nf_create(&p(&[-1, 0, 1]), 0).unwrap_err(), ExactError::ReduciblePolynomial);
        assert!(matches!(nf_create(&p(&[1, 0, 1]), 2), Err(ExactError::RootIndexOutOfRange { .. })));
        assert_eq!(nf_create(&p(&[1, 0, 2]), 0).unwrap_err(), ExactError::NotMonic);
    }

    #[test]
    fn inverse_and_eval() {
        let k = Arc::new(nf_create(&p(&[-2, 0, 0, 1]), 0).unwrap());
        let a = k.generator().add(&AlgebraicNumber::from_int(&k, 1));
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), AlgebraicNumber::from_int(&k, 1));
        let v = a.eval(300).unwrap();
        let w = b.eval(300).unwrap();
        assert!(v.mul(&w).overlaps(&BallComplex::one(300)));
        assert!(v.rad().le(&Mag::pow2(-299)));
    }

    #[test]
    fn minimal_polynomials() {
        let k = Arc::new(nf_create(&p(&[1, 1, 1, 1, 1]), 0).unwrap());
        let z = k.generator();
        // z + 1/z generates the real quadratic subfield: x^2 + x - 1.
        let r = z.add(&z.inv().unwrap());
        assert_eq!(r.minpoly(), p(&[-1, 1, 1]));
        assert_eq!(z.minpoly(), p(&[1, 1, 1, 1, 1]));
        assert_eq!(AlgebraicNumber::from_int(&k, 3).minpoly(), p(&[-3, 1]));
    }
}
