use super::{BallError, Mag};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A real ball `[mid * 2^exp - rad, mid * 2^exp + rad]`.
///
/// Midpoints are rounded to `prec` significant bits after every operation and
/// the rounding error is folded into the radius, so every result encloses the
/// exact result of the operation applied to any points of the input balls.
#[derive(Clone)]
pub struct BallReal {
    mid: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

impl fmt::Debug for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} +/- {:.3e}", self.to_f64(), self.rad.to_f64())
    }
}

fn bits_of(m: &BigInt) -> i64 {
    m.bits() as i64
}

impl BallReal {
    pub fn zero(prec: u32) -> Self {
        BallReal { mid: BigInt::zero(), exp: 0, rad: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BallReal { mid: BigInt::from(n), exp: 0, rad: Mag::ZERO, prec }.rounded()
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        BallReal { mid: n.clone(), exp: 0, rad: Mag::ZERO, prec }.rounded()
    }

    /// Exact dyadic `m * 2^e` (rounded to `prec`).
    pub fn from_dyadic(m: BigInt, e: i64, prec: u32) -> Self {
        BallReal { mid: m, exp: e, rad: Mag::ZERO, prec }.rounded()
    }

    /// The exact binary value of a finite `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "BallReal::from_f64 on {x}");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1 << 52), raw_exp - 1075) };
        Self::from_dyadic(BigInt::from(man) * sign, e, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let num = Self::from_bigint(q.numer(), prec + 4);
        let den = Self::from_bigint(q.denom(), prec + 4);
        num.div(&den).expect("rational with nonzero denominator").with_prec(prec)
    }

    /// A ball with the given midpoint and an added radius.
    pub fn with_radius(mut self, extra: Mag) -> Self {
        self.rad = self.rad.add_up(&extra);
        self
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    /// Returns a copy working at `prec` bits, rounding the midpoint if needed.
    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.rounded()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn rounded(mut self) -> Self {
        let bits = bits_of(&self.mid);
        let p = i64::from(self.prec.max(2));
        if bits > p {
            let shift = (bits - p) as usize;
            self.mid >>= shift;
            self.exp += shift as i64;
            self.rad = self.rad.add_up(&Mag::pow2(self.exp));
        }
        if self.mid.is_zero() {
            self.exp = 0;
        }
        self
    }

    /// Upper bound of `|mid|`.
    pub fn mid_abs_up(&self) -> Mag {
        Mag::from_bigint_up(&self.mid, self.exp)
    }

    /// Upper bound of every `|x|` in the ball.
    pub fn abs_up(&self) -> Mag {
        self.mid_abs_up().add_up(&self.rad)
    }

    /// Lower bound of every `|x|` in the ball, zero if the ball contains zero.
    pub fn abs_down(&self) -> Mag {
        Mag::from_bigint_down(&self.mid, self.exp).sub_down(&self.rad).unwrap_or(Mag::ZERO)
    }

    pub fn contains_zero(&self) -> bool {
        Mag::from_bigint_down(&self.mid, self.exp).sub_down(&self.rad).is_none()
    }

    /// Certainly strictly positive.
    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && !self.contains_zero()
    }

    pub fn mid_sign(&self) -> Sign {
        self.mid.sign()
    }

    pub fn to_f64(&self) -> f64 {
        if self.mid.is_zero() {
            return 0.0;
        }
        let bits = bits_of(&self.mid);
        let (m, e) = if bits > 60 {
            let s = (bits - 60) as usize;
            ((&self.mid >> s).to_f64().unwrap_or(0.0), self.exp + s as i64)
        } else {
            (self.mid.to_f64().unwrap_or(0.0), self.exp)
        };
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// `log2 |mid|` (approximate), `-inf` for a zero midpoint.
    pub fn mid_log2(&self) -> f64 {
        self.mid_abs_up().log2()
    }

    /// Relative accuracy in bits: `log2(|mid| / rad)`; `u32::MAX`-like for exact balls.
    pub fn rel_accuracy_bits(&self) -> i64 {
        if self.rad.is_zero() {
            return i64::from(u32::MAX);
        }
        if self.mid.is_zero() {
            return i64::MIN / 2;
        }
        (self.mid_log2() - self.rad.log2()).floor() as i64
    }

    /// Midpoint as an exact rational.
    pub fn mid_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mid << self.exp as usize)
        } else {
            BigRational::new(self.mid.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// `round(mid * 2^scale)`.
    pub fn to_fixed(&self, scale: i64) -> BigInt {
        let e = self.exp + scale;
        if e >= 0 {
            &self.mid << e as usize
        } else {
            let s = (-e) as usize;
            let half = BigInt::one() << (s - 1);
            (&self.mid + half) >> s
        }
    }

    /// The unique integer in the ball, if the ball is narrower than one and
    /// contains an integer.
    pub fn unique_integer(&self) -> Option<BigInt> {
        if !self.rad.lt(&Mag::pow2(-1)) {
            return None;
        }
        let n = self.to_fixed(0);
        let diff = self.sub(&BallReal::from_bigint(&n, self.prec.max(bits_of(&n) as u32 + 8)));
        if diff.contains_zero() {
            Some(n)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        BallReal { mid: -&self.mid, exp: self.exp, rad: self.rad, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        BallReal { mid: self.mid.clone(), exp: self.exp + k, rad: self.rad.mul_2exp(k), prec: self.prec }
    }

    pub fn add(&self, other: &BallReal) -> BallReal {
        let prec = self.prec.max(other.prec);
        if other.mid.is_zero() {
            let mut r = self.clone();
            r.rad = r.rad.add_up(&other.rad);
            r.prec = prec;
            return r.rounded();
        }
        if self.mid.is_zero() {
            let mut r = other.clone();
            r.rad = r.rad.add_up(&self.rad);
            r.prec = prec;
            return r.rounded();
        }
        let top_a = self.exp + bits_of(&self.mid);
        let top_b = other.exp + bits_of(&other.mid);
        let window = i64::from(prec) + 8;
        if top_b < top_a - window {
            let rad = self.rad.add_up(&other.abs_up());
            return BallReal { mid: self.mid.clone(), exp: self.exp, rad, prec }.rounded();
        }
        if top_a < top_b - window {
            let rad = other.rad.add_up(&self.abs_up());
            return BallReal { mid: other.mid.clone(), exp: other.exp, rad, prec }.rounded();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mid << (self.exp - e) as usize;
        let b = &other.mid << (other.exp - e) as usize;
        BallReal { mid: a + b, exp: e, rad: self.rad.add_up(&other.rad), prec }.rounded()
    }

    pub fn sub(&self, other: &BallReal) -> BallReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BallReal) -> BallReal {
        let prec = self.prec.max(other.prec);
        let mid = &self.mid * &other.mid;
        let exp = self.exp + other.exp;
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Mag::ZERO
        } else {
            self.mid_abs_up()
                .mul_up(&other.rad)
                .add_up(&other.mid_abs_up().mul_up(&self.rad))
                .add_up(&self.rad.mul_up(&other.rad))
        };
        BallReal { mid, exp, rad, prec }.rounded()
    }

    pub fn sqr(&self) -> BallReal {
        self.mul(self)
    }

    pub fn mul_int(&self, k: i64) -> BallReal {
        let kb = BigInt::from(k);
        let rad = self.rad.mul_up(&Mag::from_bigint_up(&kb, 0));
        BallReal { mid: &self.mid * kb, exp: self.exp, rad, prec: self.prec }.rounded()
    }

    pub fn mul_bigint(&self, k: &BigInt) -> BallReal {
        let rad = self.rad.mul_up(&Mag::from_bigint_up(k, 0));
        BallReal { mid: &self.mid * k, exp: self.exp, rad, prec: self.prec }.rounded()
    }

    pub fn div(&self, other: &BallReal) -> Result<BallReal, BallError> {
        let prec = self.prec.max(other.prec);
        let ym_down = Mag::from_bigint_down(&other.mid, other.exp);
        let y_low = ym_down.sub_down(&other.rad).ok_or(BallError::DivisionByZero)?;
        if self.mid.is_zero() {
            let rad = self.rad.div_up(&y_low);
            return Ok(BallReal { mid: BigInt::zero(), exp: 0, rad, prec });
        }
        let s = (i64::from(prec) + 4 + bits_of(&other.mid) - bits_of(&self.mid)).max(0);
        let num = &self.mid << s as usize;
        let (q, r) = num.div_rem(&other.mid);
        let exp = self.exp - other.exp - s;
        let mut rad = if r.is_zero() { Mag::ZERO } else { Mag::pow2(exp) };
        if !(self.rad.is_zero() && other.rad.is_zero()) {
            let num_err = self.mid_abs_up().mul_up(&other.rad).add_up(&other.mid_abs_up().mul_up(&self.rad));
            let den = ym_down.mul_down(&y_low);
            rad = rad.add_up(&num_err.div_up(&den));
        }
        Ok(BallReal { mid: q, exp, rad, prec }.rounded())
    }

    pub fn div_int(&self, k: i64) -> BallReal {
        self.div(&BallReal::from_int(k, self.prec)).expect("nonzero integer divisor")
    }

    pub fn inv(&self) -> Result<BallReal, BallError> {
        BallReal::one(self.prec).div(self)
    }

    /// Square root of a ball that is certainly non-negative.
    pub fn sqrt(&self) -> Result<BallReal, BallError> {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(self.clone());
        }
        if self.mid.is_negative() {
            return Err(BallError::NegativeSqrt);
        }
        let m_down = Mag::from_bigint_down(&self.mid, self.exp);
        let x_low = m_down.sub_down(&self.rad).ok_or(BallError::NegativeSqrt)?;
        let prec = self.prec;
        // mid * 2^exp = (mid << k) * 2^(exp - k) with exp - k even.
        let want = 2 * i64::from(prec) + 8;
        let mut k = (want - bits_of(&self.mid)).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let shifted = &self.mid << k as usize;
        let root = shifted.sqrt();
        let exact = &root * &root == shifted;
        let exp = (self.exp - k) / 2;
        let mut rad = if exact { Mag::ZERO } else { Mag::pow2(exp) };
        if !self.rad.is_zero() {
            rad = rad.add_up(&self.rad.div_up(&x_low.sqrt_down()));
        }
        Ok(BallReal { mid: root, exp, rad, prec }.rounded())
    }

    pub fn pow_u(&self, mut n: u64) -> BallReal {
        let mut base = self.clone();
        let mut acc = BallReal::one(self.prec);
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

    /// Smallest ball containing both inputs (and every value between them).
    pub fn hull(&self, other: &BallReal) -> BallReal {
        let prec = self.prec.max(other.prec);
        let sum = self.add(other);
        let center = BallReal { mid: sum.mid.clone(), exp: sum.exp - 1, rad: Mag::ZERO, prec };
        let half_diff = self.sub(other).mul_2exp(-1).abs_up();
        let rad = half_diff.add_up(&self.rad.max(other.rad)).add_up(&sum.rad);
        BallReal { mid: center.mid, exp: center.exp, rad, prec }.rounded()
    }

    /// True when the balls share at least one point.
    pub fn overlaps(&self, other: &BallReal) -> bool {
        let d = BallReal {
            mid: self.mid.clone(),
            exp: self.exp,
            rad: Mag::ZERO,
            prec: u32::MAX / 4,
        }
        .sub(&BallReal { mid: other.mid.clone(), exp: other.exp, rad: Mag::ZERO, prec: u32::MAX / 4 });
        let gap = Mag::from_bigint_down(&d.mid, d.exp);
        gap.le(&self.rad.add_up(&other.rad))
    }

    /// True when every point of `other` lies in `self`.
    pub fn contains(&self, other: &BallReal) -> bool {
        let d = BallReal { mid: self.mid.clone(), exp: self.exp, rad: Mag::ZERO, prec: u32::MAX / 4 }
            .sub(&BallReal { mid: other.mid.clone(), exp: other.exp, rad: Mag::ZERO, prec: u32::MAX / 4 });
        let dist = Mag::from_bigint_up(&d.mid, d.exp);
        dist.add_up(&other.rad).le(&self.rad)
    }

    /// Compares midpoints exactly.
    pub fn cmp_mid(&self, other: &BallReal) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mid << (self.exp - e) as usize;
        let b = &other.mid << (other.exp - e) as usize;
        a.cmp(&b)
    }

    /// Certainly `self < other`.
    pub fn lt(&self, other: &BallReal) -> bool {
        other.sub(self).is_positive()
    }

    /// Drops the radius, keeping only the midpoint.
    pub fn midpoint(&self) -> BallReal {
        BallReal { mid: self.mid.clone(), exp: self.exp, rad: Mag::ZERO, prec: self.prec }
    }

    /// Sign-aware `f64` rendering for reports.
    pub fn describe(&self) -> String {
        format!("{:.17e} +/- 2^{:.1}", self.to_f64(), self.rad.log2())
    }

    /// Decimal string of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.mid.is_zero() {
            return "0".to_string();
        }
        let q = self.mid_rational();
        let neg = q.is_negative();
        let q = q.abs();
        let log10 = self.mid_log2() * std::f64::consts::LOG10_2;
        let e10 = log10.floor() as i64;
        let shift = digits as i64 - 1 - e10;
        let scaled = if shift >= 0 {
            q * BigRational::from_integer(BigInt::from(10).pow(shift as u32))
        } else {
            q / BigRational::from_integer(BigInt::from(10).pow((-shift) as u32))
        };
        let n = scaled.round().to_integer();
        let s = n.to_string();
        let (head, tail) = s.split_at(1);
        let exp10 = e10 + (s.len() as i64 - digits as i64);
        format!("{}{}.{}e{}", if neg { "-" } else { "" }, head, tail, exp10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: f64) -> BallReal {
        BallReal::from_f64(x, 64)
    }

    #[test]
    fn exact_small_arithmetic_stays_exact() {
        let x = BallReal::from_int(7, 64).mul(&BallReal::from_int(-3, 64)).add(&BallReal::from_int(22, 64));
        assert!(x.is_exact());
        assert_eq!(x.unique_integer(), Some(BigInt::from(1)));
    }

    #[test]
    fn division_encloses_quotient() {
        let q = BallReal::from_int(1, 200).div(&BallReal::from_int(3, 200)).unwrap();
        let back = q.mul_int(3);
        assert!(back.sub(&BallReal::one(200)).contains_zero());
        assert!(q.rad().log2() < -195.0);
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let z = BallReal::zero(64).with_radius(Mag::pow2(-10));
        assert!(BallReal::one(64).div(&z).is_err());
    }

    #[test]
    fn sqrt_two_squares_back() {
        let r = BallReal::from_int(2, 300).sqrt().unwrap();
        assert!(r.sqr().sub(&BallReal::from_int(2, 300)).contains_zero());
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(r.rad().log2() < -290.0);
    }

    #[test]
    fn cancellation_is_tracked() {
        let x = b(1.0).with_radius(Mag::pow2(-40));
        let d = x.sub(&x);
        assert!(d.contains_zero());
        assert!(d.rad().log2() <= -38.9);
    }

    #[test]
    fn hull_contains_both() {
        let a = BallReal::from_int(3, 64);
        let c = BallReal::from_int(5, 64);
        let h = a.hull(&c);
        assert!(h.contains(&a) && h.contains(&c));
        assert!(h.contains(&BallReal::from_int(4, 64)));
    }

    #[test]
    fn decimal_rendering() {
        let x = BallReal::from_int(287496, 64);
        assert_eq!(x.to_decimal(6), "2.87496e5");
    }
}
