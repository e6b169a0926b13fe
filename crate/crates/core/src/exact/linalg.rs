//! Exact rank computations over fields: `Q`, number fields and `F_p`.

use super::field::AlgebraicNumber;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field elements that know how to build the constants of their own field.
pub trait Field: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for AlgebraicNumber {
    fn zero_like(&self) -> Self {
        AlgebraicNumber::from_int(self.parent(), 0)
    }
    fn one_like(&self) -> Self {
        AlgebraicNumber::from_int(self.parent(), 1)
    }
    fn is_zero(&self) -> bool {
        AlgebraicNumber::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        AlgebraicNumber::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        AlgebraicNumber::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        AlgebraicNumber::mul(self, o)
    }
    fn inv(&self) -> Option<Self> {
        AlgebraicNumber::inv(self)
    }
}

/// An element of `F_p` for a word-sized prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gfp {
    pub value: u64,
    pub p: u64,
}

impl Gfp {
    pub fn new(value: i64, p: u64) -> Self {
        Gfp { value: value.rem_euclid(p as i64) as u64, p }
    }
}

impl Field for Gfp {
    fn zero_like(&self) -> Self {
        Gfp { value: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Gfp { value: 1 % self.p, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, o: &Self) -> Self {
        Gfp { value: (self.value + o.value) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Gfp { value: (self.value + self.p - o.value) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Gfp { value: ((self.value as u128 * o.value as u128) % self.p as u128) as u64, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        Some(Gfp { value: super::modp::powmod_u(self.value, self.p - 2, self.p), p: self.p })
    }
}

/// Row echelon form by Gaussian elimination; returns the nonzero rows.
pub fn echelon<F: Field>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        let pivot: Vec<F> = m[r].iter().map(|x| x.mul(&inv)).collect();
        m[r] = pivot.clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Rank of the matrix with the given rows.
pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    echelon(rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::nf_create;
    use crate::exact::poly::IntPoly;
    use std::sync::Arc;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_rank() {
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(0), q(4)]]), 2);
        assert_eq!(rank::<BigRational>(&[]), 0);
    }

    #[test]
    fn rank_over_gaussian_field() {
        let k = Arc::new(nf_create(&IntPoly::from_i64(&[1, 0, 1]), 0).unwrap());
        let i = k.generator();
        let one = AlgebraicNumber::from_int(&k, 1);
        // (1, i) and (i, -1) are proportional over Q(i).
        let rows = vec![vec![one.clone(), i.clone()], vec![i.clone(), i.mul(&i)]];
        assert_eq!(rank(&rows), 1);
        let rows = vec![vec![one.clone(), i.clone()], vec![one.clone(), one]];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn rank_mod_p() {
        let r = |v: &[i64]| v.iter().map(|&x| Gfp::new(x, 3)).collect::<Vec<_>>();
        assert_eq!(rank(&[r(&[1, 1]), r(&[2, 2])]), 1);
        assert_eq!(rank(&[r(&[1, 2]), r(&[2, 1])]), 1);
    }
}
