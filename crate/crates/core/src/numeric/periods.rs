//! Periods and quasi-periods of elliptic curves.
//!
//! Conventions. For the lattice `Z + τZ` the periods are `ω1 = 1`,
//! `ω2 = τ` and the quasi-periods are `η1 = G2(τ)`, `η2 = G2(-1/τ)/τ`, so
//! that `ω2 η1 - ω1 η2 = 2πi`. For a model `y^2 = x^3 + a x + b` the
//! representative `θ` is the period `Ω` of `dx/y` computed by AGM: the real
//! period when the cubic has three real roots, and the real generator of the
//! real sublattice otherwise.

use super::modular::{e4_e6, g2_weight2};
use super::NumericError;
use crate::ball::{agm, pi, BallComplex, BallReal};
use crate::exact::roots::isolate_roots;
use crate::exact::IntPoly;
use num_bigint::BigInt;
use num_traits::Zero;

/// Period data of the lattice `Z + τZ`.
#[derive(Clone, Debug)]
pub struct PeriodDataG1 {
    pub tau: BallComplex,
    pub omega1: BallComplex,
    pub omega2: BallComplex,
    pub eta1: BallComplex,
    pub eta2: BallComplex,
    /// Representative holomorphic period, `ω1`.
    pub theta: BallComplex,
    /// Weierstrass invariants `g2 = 60 G4`, `g3 = 140 G6` of the lattice.
    pub g2: BallComplex,
    pub g3: BallComplex,
}

impl PeriodDataG1 {
    /// `ω2 η1 - ω1 η2 - 2πi`.
    pub fn legendre_residual(&self) -> BallComplex {
        let prec = self.omega2.prec();
        self.omega2.mul(&self.eta1).sub(&self.omega1.mul(&self.eta2)).sub(&crate::ball::two_pi_i(prec))
    }
}

pub fn elliptic_periods(tau: &BallComplex, prec: u32) -> Result<PeriodDataG1, NumericError> {
    if !tau.im.is_positive() {
        return Err(NumericError::NotUpperHalfPlane);
    }
    let wp = prec + 16;
    let t = tau.clone().with_prec(wp);
    let eta1 = g2_weight2(&t, wp)?;
    let minus_inv = t.inv()?.neg();
    let eta2 = g2_weight2(&minus_inv, wp)?.div(&t)?;
    let (e4, e6) = e4_e6(&t, wp)?;
    let p = pi(wp);
    let p2 = p.sqr();
    let p4 = p2.sqr();
    let g2 = e4.mul_real(&p4.mul_int(4).div_int(3));
    let g3 = e6.mul_real(&p4.mul(&p2).mul_int(8).div_int(27));
    let r = |z: BallComplex| z.with_prec(prec);
    Ok(PeriodDataG1 {
        tau: tau.clone(),
        omega1: BallComplex::one(prec),
        omega2: r(t),
        eta1: r(eta1),
        eta2: r(eta2),
        theta: BallComplex::one(prec),
        g2: r(g2),
        g3: r(g3),
    })
}

/// Discriminants of imaginary quadratic orders of class number one.
pub const SUPPORTED_DISCRIMINANTS: [i64; 13] = [-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163];

/// Short Weierstrass model `y^2 = x^3 + a x + b` over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub a: BigInt,
    pub b: BigInt,
}

impl CurveModel {
    pub fn new(a: i64, b: i64) -> Self {
        CurveModel { a: a.into(), b: b.into() }
    }

    pub fn cubic(&self) -> IntPoly {
        IntPoly::new(vec![self.b.clone(), self.a.clone(), BigInt::zero(), BigInt::from(1)])
    }

    /// `-16 (4a^3 + 27b^2)`.
    pub fn discriminant(&self) -> BigInt {
        let a3 = &self.a * &self.a * &self.a;
        BigInt::from(-16) * (BigInt::from(4) * a3 + BigInt::from(27) * &self.b * &self.b)
    }

    /// `(u^4 a, u^6 b)`, isomorphic over `Q(u)`.
    pub fn scaled(&self, u: i64) -> Self {
        let u2 = BigInt::from(u) * u;
        let u4 = &u2 * &u2;
        CurveModel { a: &self.a * &u4, b: &self.b * &u4 * &u2 }
    }
}

/// The model with CM by the order of discriminant `disc`.
pub fn cm_model(disc: i64) -> Result<CurveModel, NumericError> {
    let (a, b) = match disc {
        -3 => (0, 1),
        -4 => (-1, 0),
        -7 => (-35, -98),
        -8 => (-30, 56),
        -11 => (-264, -1694),
        -12 => (-15, 22),
        -16 => (-11, 14),
        -19 => (-152, -722),
        -27 => (-120, -506),
        -28 => (-595, 5586),
        -43 => (-3440, -77658),
        -67 => (-29480, -1948226),
        -163 => (-8697680, -9873093538),
        _ => return Err(NumericError::UnsupportedDiscriminant(disc)),
    };
    Ok(CurveModel::new(a, b))
}

/// Period pair `(Ω, Ω')` of `dx/y` with `Ω` real, `Im(Ω'/Ω) > 0`.
pub fn model_periods(model: &CurveModel, prec: u32) -> Result<(BallComplex, BallComplex), NumericError> {
    if model.discriminant().is_zero() {
        return Err(NumericError::SingularModel);
    }
    let wp = prec + 32;
    let f = model.cubic();
    let nreal = f.count_real_roots();
    let mut roots = isolate_roots(&f, wp + 32)?;
    roots.sort_by(|x, y| x.im.abs_up().cmp_value(&y.im.abs_up()));
    let mut real: Vec<BallReal> = roots.into_iter().take(nreal).map(|z| z.re.with_prec(wp)).collect();
    real.sort_by(|x, y| y.cmp_mid(x));
    let p = pi(wp);
    let two_pi = p.mul_2exp(1);
    let (o1, o2) = if nreal == 3 {
        let (e1, e2, e3) = (&real[0], &real[1], &real[2]);
        let s13 = e1.sub(e3).sqrt()?;
        let o = two_pi.div(&agm(&s13, &e1.sub(e2).sqrt()?)?)?;
        let o2 = two_pi.div(&agm(&s13, &e2.sub(e3).sqrt()?)?)?;
        (BallComplex::from_real(o), BallComplex::new(BallReal::zero(wp), o2))
    } else {
        let e1 = &real[0];
        let a = BallReal::from_bigint(&model.a, wp);
        let beta = e1.sqr().mul_int(3).add(&a).sqrt()?;
        let m = beta.sqrt()?.mul_2exp(1);
        let o = p.mul_2exp(2).div(&agm(&m, &beta.mul_2exp(1).add(&e1.mul_int(3)).sqrt()?)?)?;
        let im = two_pi.div(&agm(&m, &beta.mul_2exp(1).sub(&e1.mul_int(3)).sqrt()?)?)?;
        (BallComplex::from_real(o.clone()), BallComplex::new(o.mul_2exp(-1), im))
    };
    Ok((o1.with_prec(prec), o2.with_prec(prec)))
}

/// Representative period `θ` of the CM curve of discriminant `disc`.
pub fn cm_theta(disc: i64, prec: u32) -> Result<BallComplex, NumericError> {
    let model = cm_model(disc)?;
    Ok(model_periods(&model, prec)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::two_pi_i;
    use crate::exact::{algdep, IntPoly};
    use proptest::prelude::*;

    fn big(n: u64) -> BigInt {
        BigInt::from(n)
    }

    /// `∫_0^1 dx / sqrt(1 - x^4)` by tanh-sinh quadrature in `f64`.
    fn lemniscate_quadrature() -> f64 {
        use std::f64::consts::FRAC_PI_2;
        let h = 1.0 / 64.0;
        let mut s = 0.0;
        for k in -400i32..=400 {
            let t = f64::from(k) * h;
            let y = FRAC_PI_2 * t.sinh();
            let u = y.tanh();
            let w = FRAC_PI_2 * t.cosh() / y.cosh().powi(2);
            let one_minus_u = if y > 0.0 { 2.0 / (1.0 + (2.0 * y).exp()) } else { 1.0 - u };
            // x = (1 + u)/2 and 1 - x^4 = (1 - x)(1 + x)(1 + x^2).
            let x = (1.0 + u) / 2.0;
            let g = one_minus_u / 2.0 * (1.0 + x) * (1.0 + x * x);
            if g > 0.0 && w.is_finite() {
                s += w / 2.0 / g.sqrt();
            }
        }
        s * h
    }

    #[test]
    fn lemniscatic_period() {
        // Real period of y^2 = x^3 - x is 2 ∫_1^∞ dx/sqrt(x^3 - x) = 4 ∫_0^1 du/sqrt(1 - u^4),
        // twice the lemniscate constant.
        let theta = cm_theta(-4, 128).unwrap();
        let q = 4.0 * lemniscate_quadrature();
        assert!((theta.re.to_f64() - q).abs() < 1e-12, "{} vs {q}", theta.re.to_f64());
        assert!(theta.im.contains_zero());
    }

    #[test]
    fn periods_recover_invariants() {
        // (4π^4/3) E4(τ) / (Ω/2)^4 = -4a and (8π^6/27) E6(τ) / (Ω/2)^6 = -4b.
        for &d in &SUPPORTED_DISCRIMINANTS {
            let m = cm_model(d).unwrap();
            let (o1, o2) = model_periods(&m, 200).unwrap();
            let tau = o2.div(&o1).unwrap();
            assert!(tau.im.is_positive());
            let (e4, e6) = e4_e6(&tau, 200).unwrap();
            let half = o1.mul_2exp(-1);
            let p = pi(200);
            let g2 = e4.mul_real(&p.pow_u(4).mul_int(4).div_int(3)).div(&half.pow_u(4)).unwrap();
            let g3 = e6.mul_real(&p.pow_u(6).mul_int(8).div_int(27)).div(&half.pow_u(6)).unwrap();
            let a4 = BallComplex::from_bigint(&(-BigInt::from(4) * &m.a), 64);
            let b4 = BallComplex::from_bigint(&(-BigInt::from(4) * &m.b), 64);
            assert!(g2.overlaps(&a4), "disc {d}: g2");
            assert!(g3.overlaps(&b4), "disc {d}: g3");
            assert!(g2.rad().log2() < -100.0);
        }
    }

    #[test]
    fn unsupported() {
        assert!(matches!(cm_theta(-5, 64), Err(NumericError::UnsupportedDiscriminant(-5))));
        assert!(matches!(cm_theta(-20, 64), Err(NumericError::UnsupportedDiscriminant(-20))));
        assert!(matches!(model_periods(&CurveModel::new(-3, 2), 64), Err(NumericError::SingularModel)));
    }

    #[test]
    fn class_is_model_independent() {
        // Scaling by u multiplies θ by 1/u; y^2 = x^3 + 4x is a twist of
        // y^2 = x^3 - x by 1 + i. Both ratios are algebraic.
        let base = cm_theta(-4, 400).unwrap();
        for m in [cm_model(-4).unwrap().scaled(2), CurveModel::new(4, 0)] {
            let (o, _) = model_periods(&m, 400).unwrap();
            let ratio = base.div(&o).unwrap();
            let cert = algdep(&ratio, 4, &big(1000)).unwrap().expect("algebraic ratio");
            assert!(cert.poly.deg() <= 4);
        }
        let scaled = model_periods(&cm_model(-7).unwrap().scaled(3), 300).unwrap().0;
        let r = cm_theta(-7, 300).unwrap().div(&scaled).unwrap();
        let cert = algdep(&r, 2, &big(100)).unwrap().unwrap();
        assert_eq!(cert.poly, IntPoly::from_i64(&[-3, 1]));
    }

    #[test]
    fn square_lattice() {
        let d = elliptic_periods(&BallComplex::i(200), 200).unwrap();
        assert!(d.eta1.mul(&d.omega1).overlaps(&BallComplex::from_real(pi(200))));
        assert!(d.legendre_residual().contains_zero());
        assert!(d.g3.contains_zero());
    }

    #[test]
    fn lattice_periodicity() {
        let t = BallComplex::from_f64(0.2, 1.1, 256);
        let a = elliptic_periods(&t, 192).unwrap();
        let b = elliptic_periods(&t.add(&BallComplex::one(256)), 192).unwrap();
        assert!(a.g2.overlaps(&b.g2) && a.g3.overlaps(&b.g3));
        assert!(a.eta1.overlaps(&b.eta1));
    }

    #[test]
    fn legendre_sign() {
        let d = elliptic_periods(&BallComplex::from_f64(-0.3, 0.8, 128), 128).unwrap();
        let lhs = d.omega2.mul(&d.eta1).sub(&d.omega1.mul(&d.eta2));
        assert!(lhs.overlaps(&two_pi_i(128)));
        assert!(!lhs.overlaps(&two_pi_i(128).neg()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn containment_across_precisions(re in -1.0f64..1.0, im in 0.6f64..2.0) {
            let t = BallComplex::from_f64(re, im, 512);
            let lo = elliptic_periods(&t, 96).unwrap();
            let hi = elliptic_periods(&t, 192).unwrap();
            prop_assert!(lo.eta1.contains(&hi.eta1.midpoint()));
            prop_assert!(lo.eta2.contains(&hi.eta2.midpoint()));
            prop_assert!(lo.g2.contains(&hi.g2.midpoint()));
        }
    }
}
