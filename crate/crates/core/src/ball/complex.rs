use super::{BallError, BallReal, Mag};
use num_bigint::BigInt;
use std::fmt;

/// A rectangular complex ball: a real ball for each of the two parts.
#[derive(Clone)]
pub struct BallComplex {
    pub re: BallReal,
    pub im: BallReal,
}

impl fmt::Debug for BallComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})i", self.re, self.im)
    }
}

impl BallComplex {
    pub fn new(re: BallReal, im: BallReal) -> Self {
        BallComplex { re, im }
    }

    pub fn from_real(re: BallReal) -> Self {
        let prec = re.prec();
        BallComplex { re, im: BallReal::zero(prec) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_real(BallReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(BallReal::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        BallComplex { re: BallReal::zero(prec), im: BallReal::one(prec) }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::from_real(BallReal::from_int(n, prec))
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::from_real(BallReal::from_bigint(n, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BallComplex { re: BallReal::from_f64(re, prec), im: BallReal::from_f64(im, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(self, prec: u32) -> Self {
        BallComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    /// Upper bound of the distance from the midpoint to any point of the ball.
    pub fn rad(&self) -> Mag {
        self.re.rad().add_up(&self.im.rad())
    }

    pub fn with_radius(self, r: Mag) -> Self {
        BallComplex { re: self.re.with_radius(r), im: self.im.with_radius(r) }
    }

    pub fn midpoint(&self) -> Self {
        BallComplex { re: self.re.midpoint(), im: self.im.midpoint() }
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// True when both parts overlap.
    pub fn overlaps(&self, other: &BallComplex) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn contains(&self, other: &BallComplex) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    /// Certainly real: the imaginary part is exactly zero.
    pub fn is_real_exact(&self) -> bool {
        self.im.is_exact() && self.im.contains_zero()
    }

    pub fn neg(&self) -> Self {
        BallComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BallComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &BallComplex) -> Self {
        BallComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &BallComplex) -> Self {
        BallComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &BallComplex) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        BallComplex { re, im }
    }

    pub fn sqr(&self) -> Self {
        let re = self.re.sqr().sub(&self.im.sqr());
        let im = self.re.mul(&self.im).mul_2exp(1);
        BallComplex { re, im }
    }

    pub fn mul_real(&self, x: &BallReal) -> Self {
        BallComplex { re: self.re.mul(x), im: self.im.mul(x) }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        BallComplex { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        BallComplex { re: self.re.mul_bigint(k), im: self.im.mul_bigint(k) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        BallComplex { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        BallComplex { re: self.re.mul_2exp(k), im: self.im.mul_2exp(k) }
    }

    pub fn div_int(&self, k: i64) -> Self {
        BallComplex { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    pub fn div_real(&self, x: &BallReal) -> Result<Self, BallError> {
        Ok(BallComplex { re: self.re.div(x)?, im: self.im.div(x)? })
    }

    /// `|z|^2` as a real ball.
    pub fn norm_sqr(&self) -> BallReal {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn inv(&self) -> Result<Self, BallError> {
        let n = self.norm_sqr();
        if n.contains_zero() {
            return Err(BallError::DivisionByZero);
        }
        Ok(BallComplex { re: self.re.div(&n)?, im: self.im.neg().div(&n)? })
    }

    pub fn div(&self, o: &BallComplex) -> Result<Self, BallError> {
        let n = o.norm_sqr();
        if n.contains_zero() {
            return Err(BallError::DivisionByZero);
        }
        let num = self.mul(&o.conj());
        Ok(BallComplex { re: num.re.div(&n)?, im: num.im.div(&n)? })
    }

    pub fn pow_u(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = BallComplex::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn pow_i(&self, n: i64) -> Result<Self, BallError> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            self.inv().map(|z| z.pow_u(n.unsigned_abs()))
        }
    }

    /// Upper bound of `|z|` over the ball.
    pub fn abs_up(&self) -> Mag {
        let a = self.re.abs_up();
        let b = self.im.abs_up();
        a.mul_up(&a).add_up(&b.mul_up(&b)).sqrt_up()
    }

    /// Lower bound of `|z|` over the ball.
    pub fn abs_down(&self) -> Mag {
        let a = self.re.abs_down();
        let b = self.im.abs_down();
        a.mul_down(&a).add_down(&b.mul_down(&b)).sqrt_down()
    }

    pub fn abs(&self) -> Result<BallReal, BallError> {
        self.norm_sqr().abs().sqrt()
    }

    /// Principal square root. Fails when the ball touches the branch cut
    /// on the non-positive real axis.
    pub fn sqrt(&self) -> Result<Self, BallError> {
        if self.im.is_exact() && self.im.contains_zero() {
            if self.re.is_positive() || (self.re.is_exact() && self.re.contains_zero()) {
                return Ok(BallComplex::from_real(self.re.sqrt()?));
            }
            if self.re.is_negative() {
                let s = self.re.neg().sqrt()?;
                return Ok(BallComplex { re: BallReal::zero(s.prec()), im: s });
            }
        }
        let r = self.abs()?;
        if self.re.is_positive() {
            let t = r.add(&self.re).mul_2exp(-1).sqrt()?;
            let im = self.im.div(&t.mul_2exp(1))?;
            return Ok(BallComplex { re: t, im });
        }
        let s = r.sub(&self.re).mul_2exp(-1).sqrt()?;
        if self.im.is_positive() {
            Ok(BallComplex { re: self.im.div(&s.mul_2exp(1))?, im: s })
        } else if self.im.is_negative() {
            Ok(BallComplex { re: self.im.neg().div(&s.mul_2exp(1))?, im: s.neg() })
        } else {
            Err(BallError::BranchCut)
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Argument of the midpoint in `[0, 2pi)`, as an `f64`.
    pub fn arg_f64(&self) -> f64 {
        let (x, y) = self.to_f64_pair();
        let a = y.atan2(x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = BallComplex::i(64);
        let m = i.sqr();
        assert!(m.add(&BallComplex::one(64)).contains_zero());
        assert!(m.is_exact());
    }

    #[test]
    fn division_round_trip() {
        let a = BallComplex::from_f64(3.0, -2.0, 128);
        let b = BallComplex::from_f64(0.5, 7.25, 128);
        let q = a.div(&b).unwrap();
        assert!(q.mul(&b).sub(&a).contains_zero());
    }

    #[test]
    fn sqrt_of_negative_real_and_generic() {
        let s = BallComplex::from_int(-4, 64).sqrt().unwrap();
        assert!(s.sub(&BallComplex::i(64).mul_int(2)).contains_zero());
        let z = BallComplex::from_f64(-3.0, 4.0, 128);
        let r = z.sqrt().unwrap();
        assert!(r.sub(&BallComplex::from_f64(1.0, 2.0, 128)).contains_zero());
        assert!(r.sqr().sub(&z).contains_zero());
    }

    #[test]
    fn sqrt_on_cut_with_uncertain_imaginary_part_fails() {
        let z = BallComplex::from_f64(-1.0, 0.0, 64).with_radius(Mag::pow2(-20));
        assert!(matches!(z.sqrt(), Err(BallError::BranchCut)));
    }

    #[test]
    fn abs_bounds_bracket() {
        let z = BallComplex::from_f64(3.0, 4.0, 64);
        assert!(z.abs_down().to_f64() <= 5.0 && z.abs_up().to_f64() >= 5.0);
        assert!((z.abs_up().to_f64() - 5.0).abs() < 1e-6);
    }
}
