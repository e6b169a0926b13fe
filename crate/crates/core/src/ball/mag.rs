use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use std::cmp::Ordering;

const MAG_BITS: u32 = 30;
const MAG_ONE: u64 = 1 << (MAG_BITS - 1);

/// A non-negative dyadic bound `man * 2^exp` with a 30-bit mantissa.
///
/// Every constructor and operation documents its rounding direction; the
/// `_up` family rounds away from zero and is used for radii, the `_down`
/// family rounds towards zero and is used for lower bounds of magnitudes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn normalize_up(mut man: u128, mut exp: i64) -> Mag {
    if man == 0 {
        return Mag::ZERO;
    }
    let bits = 128 - man.leading_zeros();
    if bits > MAG_BITS {
        let shift = bits - MAG_BITS;
        let truncated = man >> shift;
        let inexact = truncated << shift != man;
        man = truncated + u128::from(inexact);
        exp += i64::from(shift);
        if man >> MAG_BITS != 0 {
            man >>= 1;
            exp += 1;
        }
    } else {
        let shift = MAG_BITS - bits;
        man <<= shift;
        exp -= i64::from(shift);
    }
    Mag { man: man as u64, exp }
}

fn normalize_down(mut man: u128, mut exp: i64) -> Mag {
    if man == 0 {
        return Mag::ZERO;
    }
    let bits = 128 - man.leading_zeros();
    if bits > MAG_BITS {
        let shift = bits - MAG_BITS;
        man >>= shift;
        exp += i64::from(shift);
    } else {
        let shift = MAG_BITS - bits;
        man <<= shift;
        exp -= i64::from(shift);
    }
    Mag { man: man as u64, exp }
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { man: MAG_ONE, exp: e - i64::from(MAG_BITS - 1) }
    }

    pub fn from_u64_up(m: u64, e: i64) -> Mag {
        normalize_up(u128::from(m), e)
    }

    pub fn from_u64_down(m: u64, e: i64) -> Mag {
        normalize_down(u128::from(m), e)
    }

    fn from_biguint(m: &BigUint, e: i64, up: bool) -> Mag {
        let bits = m.bits();
        if bits <= 64 {
            let v = u128::from(m.to_u64().unwrap_or(0));
            return if up { normalize_up(v, e) } else { normalize_down(v, e) };
        }
        let shift = bits - 64;
        let top: BigUint = m >> shift;
        let mut v = u128::from(top.to_u64().unwrap_or(u64::MAX));
        if up && &(top << shift) != m {
            v += 1;
        }
        let e = e + shift as i64;
        if up {
            normalize_up(v, e)
        } else {
            normalize_down(v, e)
        }
    }

    /// Upper bound of `|m| * 2^e`.
    pub fn from_bigint_up(m: &BigInt, e: i64) -> Mag {
        Self::from_biguint(m.magnitude(), e, true)
    }

    /// Lower bound of `|m| * 2^e`.
    pub fn from_bigint_down(m: &BigInt, e: i64) -> Mag {
        Self::from_biguint(m.magnitude(), e, false)
    }

    /// Upper bound of a finite non-negative `f64`.
    pub fn from_f64_up(x: f64) -> Mag {
        assert!(x.is_finite() && x >= 0.0, "Mag::from_f64_up on {x}");
        if x == 0.0 {
            return Mag::ZERO;
        }
        let bits = x.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1 << 52), raw_exp - 1075) };
        normalize_up(u128::from(man), e)
    }

    pub fn max(self, other: Mag) -> Mag {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Approximate value; saturates to `0.0` or `inf` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.man == 0 {
            return 0.0;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        (self.man as f64) * 2f64.powi(e)
    }

    /// `log2` of the value (approximate), `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.man == 0 {
            return f64::NEG_INFINITY;
        }
        (self.man as f64).log2() + self.exp as f64
    }

    /// The smallest `k` with `self <= 2^k` (`i64::MIN` for zero).
    pub fn ceil_log2(&self) -> i64 {
        if self.man == 0 {
            return i64::MIN;
        }
        let bits = i64::from(64 - self.man.leading_zeros());
        let exact = self.man.is_power_of_two();
        self.exp + bits - i64::from(exact)
    }

    pub fn cmp_value(&self, other: &Mag) -> Ordering {
        match (self.man == 0, other.man == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // Normalized mantissas share a bit length, so exponents decide first.
        self.exp.cmp(&other.exp).then(self.man.cmp(&other.man))
    }

    pub fn le(&self, other: &Mag) -> bool {
        self.cmp_value(other) != Ordering::Greater
    }

    pub fn lt(&self, other: &Mag) -> bool {
        self.cmp_value(other) == Ordering::Less
    }

    pub fn add_up(&self, other: &Mag) -> Mag {
        if self.man == 0 {
            return *other;
        }
        if other.man == 0 {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = hi.exp - lo.exp;
        if d >= i64::from(MAG_BITS) + 2 {
            return normalize_up(u128::from(hi.man) + 1, hi.exp);
        }
        let v = (u128::from(hi.man) << d) + u128::from(lo.man);
        normalize_up(v, lo.exp)
    }

    /// Lower bound of `self + other`.
    pub fn add_down(&self, other: &Mag) -> Mag {
        if self.man == 0 {
            return *other;
        }
        if other.man == 0 {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = hi.exp - lo.exp;
        if d >= i64::from(MAG_BITS) + 2 {
            return *hi;
        }
        let v = (u128::from(hi.man) << d) + u128::from(lo.man);
        normalize_down(v, lo.exp)
    }

    /// Lower bound of `self - other`, or `None` when that difference may be `<= 0`.
    /// `self` is taken as a lower bound and `other` as an upper bound.
    pub fn sub_down(&self, other: &Mag) -> Option<Mag> {
        if other.man == 0 {
            return if self.man == 0 { None } else { Some(*self) };
        }
        if self.cmp_value(other) != Ordering::Greater {
            return None;
        }
        let d = self.exp - other.exp;
        if d >= i64::from(MAG_BITS) + 2 {
            // other < 2^(exp_self) is at most one unit of self's mantissa.
            let m = self.man - 1;
            return if m == 0 { None } else { Some(normalize_down(u128::from(m), self.exp)) };
        }
        // d >= 0 here because self > other with equal-length mantissas.
        let v = (u128::from(self.man) << d) - u128::from(other.man);
        if v == 0 {
            None
        } else {
            Some(normalize_down(v, other.exp))
        }
    }

    pub fn mul_up(&self, other: &Mag) -> Mag {
        if self.man == 0 || other.man == 0 {
            return Mag::ZERO;
        }
        normalize_up(u128::from(self.man) * u128::from(other.man), self.exp + other.exp)
    }

    pub fn mul_down(&self, other: &Mag) -> Mag {
        if self.man == 0 || other.man == 0 {
            return Mag::ZERO;
        }
        normalize_down(u128::from(self.man) * u128::from(other.man), self.exp + other.exp)
    }

    pub fn mul_u64_up(&self, k: u64) -> Mag {
        if self.man == 0 || k == 0 {
            return Mag::ZERO;
        }
        normalize_up(u128::from(self.man) * u128::from(k), self.exp)
    }

    /// Upper bound of `self / other`, where `other` is a lower bound of the divisor.
    pub fn div_up(&self, other: &Mag) -> Mag {
        assert!(other.man != 0, "Mag::div_up by zero");
        if self.man == 0 {
            return Mag::ZERO;
        }
        let num = u128::from(self.man) << 64;
        let den = u128::from(other.man);
        let q = num / den + u128::from(num % den != 0);
        normalize_up(q, self.exp - 64 - other.exp)
    }

    /// Lower bound of `self / other`, where `other` is an upper bound of the divisor.
    pub fn div_down(&self, other: &Mag) -> Mag {
        assert!(other.man != 0, "Mag::div_down by zero");
        if self.man == 0 {
            return Mag::ZERO;
        }
        let num = u128::from(self.man) << 64;
        normalize_down(num / u128::from(other.man), self.exp - 64 - other.exp)
    }

    pub fn div_u64_up(&self, k: u64) -> Mag {
        self.div_up(&Mag::from_u64_down(k, 0))
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.man == 0 {
            return Mag::ZERO;
        }
        Mag { man: self.man, exp: self.exp + k }
    }

    pub fn pow_up(&self, mut n: u64) -> Mag {
        let mut base = *self;
        let mut acc = Mag::pow2(0);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_up(&base);
            }
            base = base.mul_up(&base);
            n >>= 1;
        }
        acc
    }

    fn sqrt_impl(&self, up: bool) -> Mag {
        if self.man == 0 {
            return Mag::ZERO;
        }
        // Scale to an even exponent with about 120 bits of mantissa.
        let mut e = self.exp - 90;
        let mut v = u128::from(self.man) << 90;
        if e % 2 != 0 {
            v <<= 1;
            e -= 1;
        }
        let mut r = isqrt_u128(v);
        if up && r * r != v {
            r += 1;
        }
        if up {
            normalize_up(r, e / 2)
        } else {
            normalize_down(r, e / 2)
        }
    }

    pub fn sqrt_up(&self) -> Mag {
        self.sqrt_impl(true)
    }

    pub fn sqrt_down(&self) -> Mag {
        self.sqrt_impl(false)
    }

    /// Exact value as a dyadic pair `(m, e)` with value `m * 2^e`.
    pub fn to_parts(&self) -> (BigInt, i64) {
        (BigInt::from(self.man), self.exp)
    }
}

fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as u128;
    // Correct the floating estimate in both directions.
    while x.checked_mul(x).is_none_or(|sq| sq > v) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= v) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_directions_bracket_the_value() {
        let m = BigInt::from(123_456_789_123_456_789u64);
        let up = Mag::from_bigint_up(&m, -10);
        let down = Mag::from_bigint_down(&m, -10);
        let exact = 123_456_789_123_456_789f64 / 1024.0;
        assert!(up.to_f64() >= exact * (1.0 - 1e-15));
        assert!(down.to_f64() <= exact * (1.0 + 1e-15));
        assert!(down.le(&up));
    }

    #[test]
    fn sub_down_detects_nonpositive() {
        let a = Mag::from_u64_down(5, 0);
        let b = Mag::from_u64_up(5, 0);
        assert!(a.sub_down(&b).is_none());
        let c = Mag::from_u64_up(3, 0);
        let d = a.sub_down(&c).unwrap();
        assert!(d.to_f64() <= 2.0 && d.to_f64() > 1.99);
    }

    #[test]
    fn sqrt_brackets() {
        let two = Mag::from_u64_up(2, 0);
        let up = two.sqrt_up().to_f64();
        let down = two.sqrt_down().to_f64();
        assert!(down <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= up);
    }

    #[test]
    fn far_apart_sums_round_up() {
        let big = Mag::pow2(100);
        let tiny = Mag::pow2(-100);
        assert!(big.lt(&big.add_up(&tiny)));
        assert_eq!(big.add_down(&tiny), big);
    }

    #[test]
    fn ceil_log2_of_powers() {
        assert_eq!(Mag::pow2(7).ceil_log2(), 7);
        assert_eq!(Mag::from_u64_up(5, 0).ceil_log2(), 3);
    }
}
