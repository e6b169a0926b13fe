//! Certified constants and elementary functions on balls.

use super::{BallComplex, BallError, BallReal, Mag};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `atan(1/k) * 2^w` in fixed point, with the number of truncation ulps.
fn atan_inv_fixed(k: u64, w: u64) -> (BigInt, u64) {
    let one = BigInt::one() << w as usize;
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = &one / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    let mut ulps = 1u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        ulps += 2;
        n += 1;
    }
    (sum, ulps)
}

/// `pi` to `prec` bits.
pub fn pi(prec: u32) -> BallReal {
    let w = u64::from(prec) + 24;
    let (a, ea) = atan_inv_fixed(5, w);
    let (b, eb) = atan_inv_fixed(239, w);
    let v = a * 16 - b * 4;
    // Truncation of each term plus the alternating tail (at most one term, an ulp).
    let err = 16 * (ea + 1) + 4 * (eb + 1);
    BallReal::from_dyadic(v, -(w as i64), prec).with_radius(Mag::from_u64_up(err, -(w as i64)))
}

/// `2*pi*i`.
pub fn two_pi_i(prec: u32) -> BallComplex {
    BallComplex::new(BallReal::zero(prec), pi(prec).mul_2exp(1))
}

/// Complex exponential by argument halving, a Taylor polynomial with a
/// rigorous tail bound, and repeated squaring.
pub fn exp(z: &BallComplex) -> BallComplex {
    let prec = z.prec();
    let mag = z.abs_up();
    let lg = if mag.is_zero() { -64 } else { mag.ceil_log2() };
    let r = ((f64::from(prec)).sqrt() / 2.0).ceil() as i64;
    let s = (lg + r).max(0);
    let wp = prec + s as u32 + 16 + (lg.max(0) as u32);
    let w = z.clone().with_prec(wp).mul_2exp(-s);
    // |w| <= 2^-r <= 1/2, so the tail after n terms is below 2 |w|^n / n!.
    let wmag = w.abs_up();
    let mut term = BallComplex::one(wp);
    let mut sum = BallComplex::one(wp);
    let mut n = 1u64;
    let mut bound = wmag;
    let eps = Mag::pow2(-(i64::from(wp)) - 4);
    loop {
        term = term.mul(&w).div_int(n as i64);
        sum = sum.add(&term);
        n += 1;
        bound = bound.mul_up(&wmag).div_u64_up(n);
        if bound.mul_2exp(1).lt(&eps) || n > 100_000 {
            break;
        }
    }
    let mut result = sum.with_radius(bound.mul_2exp(1));
    for _ in 0..s {
        result = result.sqr();
    }
    result.with_prec(prec)
}

/// Real exponential.
pub fn exp_real(x: &BallReal) -> BallReal {
    exp(&BallComplex::from_real(x.clone())).re
}

/// Arithmetic-geometric mean of two positive real balls.
pub fn agm(a: &BallReal, b: &BallReal) -> Result<BallReal, BallError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(BallError::NotPositive);
    }
    let prec = a.prec().max(b.prec());
    let wp = prec + 32;
    let mut x = a.midpoint().with_prec(wp);
    let mut y = b.midpoint().with_prec(wp);
    for _ in 0..(4 * wp.ilog2() + 64) {
        let nx = x.add(&y).mul_2exp(-1);
        let ny = x.mul(&y).sqrt()?;
        x = nx;
        y = ny;
        let d = x.sub(&y);
        if d.contains_zero() || d.abs_up().log2() < -(f64::from(wp)) + x.mid_log2() + 2.0 {
            break;
        }
    }
    // After one step the two sequences bracket the mean of the midpoints.
    let m = x.hull(&y);
    // agm is increasing in both arguments and homogeneous of degree one, so a
    // relative perturbation eps of the inputs moves it by at most eps * agm.
    let eps = a.rad().div_up(&a.abs_down()).max(b.rad().div_up(&b.abs_down()));
    let extra = eps.mul_up(&m.abs_up());
    Ok(m.with_radius(extra).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(400);
        assert!(p.rad().log2() < -395.0);
        assert_eq!(
            p.to_decimal(50),
            "3.1415926535897932384626433832795028841971693993751e0"
        );
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = BallComplex::new(BallReal::zero(256), pi(256));
        let e = exp(&z);
        assert!(e.add(&BallComplex::one(256)).contains_zero());
        assert!(e.rad().log2() < -240.0);
    }

    #[test]
    fn exp_additivity() {
        let a = BallComplex::from_f64(1.25, -3.5, 200);
        let b = BallComplex::from_f64(-7.0, 0.75, 200);
        let lhs = exp(&a.add(&b));
        let rhs = exp(&a).mul(&exp(&b));
        assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn exp_large_negative_argument() {
        let x = exp_real(&BallReal::from_int(-100, 128));
        assert!((x.to_f64() / (-100f64).exp() - 1.0).abs() < 1e-14);
        assert!(x.rel_accuracy_bits() > 110);
    }

    #[test]
    fn agm_of_one_and_root_two() {
        // Gauss's constant relationship: agm(1, sqrt 2) = 1.19814023473559220744...
        let two = BallReal::from_int(2, 128);
        let m = agm(&BallReal::one(128), &two.sqrt().unwrap()).unwrap();
        assert_eq!(m.to_decimal(20), "1.1981402347355922074e0");
        assert!(m.rad().log2() < -120.0, "{}", m.rad().log2());
    }
}
