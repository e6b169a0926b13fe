//! Integer relation detection and minimal-polynomial reconstruction by LLL.
//!
//! The lattice for values `v_1..v_n` has rows
//! `(e_i, round(2^w Re v_i), round(2^w Im v_i))`; short reduced rows give
//! candidate relations, each of which must then pass a residual test. The
//! refinable entry points re-evaluate the inputs at twice the search
//! precision and re-check the residual there.

use super::factor::factor_q;
use super::lll::{lll_reduce, norm_sqr};
use super::matrix::IntMatrix;
use super::poly::{big_log2, IntPoly};
use super::ExactError;
use crate::ball::{BallComplex, Mag};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A value source that can be re-evaluated at any precision.
pub type Source<'a> = dyn Fn(u32) -> Result<BallComplex, ExactError> + 'a;
/// A vector-valued source.
pub type VecSource<'a> = dyn Fn(u32) -> Result<Vec<BallComplex>, ExactError> + 'a;

/// Extra scaling headroom kept below the input accuracy.
const GUARD_BITS: i64 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCertificate {
    pub coeffs: Vec<BigInt>,
    pub search_prec: u32,
    pub verified_prec: u32,
    pub residual_log2: f64,
    /// True when verification used a fresh evaluation at twice the search
    /// precision.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgdepCertificate {
    pub poly: IntPoly,
    pub irreducible: bool,
    pub search_prec: u32,
    pub verified_prec: u32,
    pub residual_log2: f64,
    pub refined: bool,
}

/// Minimum accepted precision for a search of `terms` unknowns of height
/// at most `height`: `ceil(1.2 * terms * log2 height) + 8`.
pub fn required_precision(terms: usize, height: &BigInt) -> u32 {
    let lh = big_log2(height).max(1.0);
    (1.2 * terms as f64 * lh).ceil() as u32 + 8
}

/// Precision at which searches actually run: enough for LLL to separate a
/// true relation of the given height from spurious short vectors.
pub fn search_precision(dim: usize, height: &BigInt, prec: u32) -> u32 {
    let lh = big_log2(height).max(1.0);
    let need = dim as f64 * (lh + (dim as f64).log2() / 2.0 + 2.0);
    prec.max(need.ceil() as u32)
}

/// Accuracy in bits of a ball, relative to `max(1, |v|)`, capped by its
/// working precision.
pub fn accuracy_bits(v: &BallComplex) -> u32 {
    let r = v.rad();
    if r.is_zero() {
        return v.prec();
    }
    let scale = v.abs_up().max(Mag::pow2(0));
    let bits = scale.log2() - r.log2();
    if bits <= 0.0 {
        0
    } else {
        (bits.floor() as u32).min(v.prec())
    }
}

fn tolerance(q: u32, coeffs: &[BigInt], vals: &[BallComplex]) -> Mag {
    let mut scale = Mag::pow2(0);
    let mut sum = Mag::ZERO;
    for (c, v) in coeffs.iter().zip(vals) {
        sum = sum.add_up(&Mag::from_bigint_up(c, 0).mul_up(&v.abs_up()));
    }
    scale = scale.max(sum);
    Mag::pow2(-(i64::from(q) * 7 / 8)).mul_up(&scale)
}

fn residual(coeffs: &[BigInt], vals: &[BallComplex]) -> BallComplex {
    let prec = vals.iter().map(|v| v.prec()).max().unwrap_or(64);
    coeffs.iter().zip(vals).fold(BallComplex::zero(prec), |acc, (c, v)| acc.add(&v.mul_bigint(c)))
}

fn passes(coeffs: &[BigInt], vals: &[BallComplex], q: u32) -> Option<f64> {
    let r = residual(coeffs, vals).abs_up();
    if r.le(&tolerance(q, coeffs, vals)) {
        Some(r.log2())
    } else {
        None
    }
}

/// Candidate relations among `vals` from one LLL reduction, shortest first.
fn candidates(vals: &[BallComplex], height: &BigInt, q: u32) -> Result<Vec<Vec<BigInt>>, ExactError> {
    let n = vals.len();
    let top = vals.iter().map(|v| v.abs_up().max(Mag::pow2(0)).ceil_log2()).max().unwrap_or(0);
    let w = i64::from(q) - top - GUARD_BITS;
    if w < 1 {
        return Ok(Vec::new());
    }
    let use_im = !vals.iter().all(|v| v.is_real_exact());
    let cols = n + 1 + usize::from(use_im);
    let mut rows = Vec::with_capacity(n);
    for (i, v) in vals.iter().enumerate() {
        let mut r = vec![BigInt::zero(); cols];
        r[i] = BigInt::from(1);
        r[n] = v.re.to_fixed(w);
        if use_im {
            r[n + 1] = v.im.to_fixed(w);
        }
        rows.push(r);
    }
    let red = lll_reduce(&IntMatrix::from_rows_with_cols(rows, cols))?;
    let mut out: Vec<Vec<BigInt>> = red
        .row_vecs()
        .into_iter()
        .map(|r| r[..n].to_vec())
        .filter(|c| c.iter().any(|x| !x.is_zero()) && c.iter().all(|x| x.abs() <= *height))
        .filter(|c| passes(c, vals, q).is_some())
        .collect();
    out.sort_by_key(|c| norm_sqr(c));
    Ok(out)
}

fn normalize_sign(mut c: Vec<BigInt>) -> Vec<BigInt> {
    if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        c = c.into_iter().map(|x| -x).collect();
    }
    c
}

fn check_bounds(n: usize, height: &BigInt) -> Result<(), ExactError> {
    if n < 2 {
        return Err(ExactError::DimensionMismatch("need at least two values".into()));
    }
    if !height.is_positive() {
        return Err(ExactError::DimensionMismatch("height bound must be positive".into()));
    }
    Ok(())
}

/// Integer relation among fixed balls. The search and the residual test
/// both run at the accuracy of the inputs (no refinement is possible).
pub fn integer_relation(values: &[BallComplex], height: &BigInt) -> Result<Option<RelationCertificate>, ExactError> {
    check_bounds(values.len(), height)?;
    let q = values.iter().map(accuracy_bits).min().unwrap_or(0);
    let need = required_precision(values.len() - 1, height);
    if q < need {
        return Err(ExactError::InsufficientPrecision { have: q, need });
    }
    for c in candidates(values, height, q)? {
        if let Some(r) = passes(&c, values, q) {
            return Ok(Some(RelationCertificate {
                coeffs: normalize_sign(c),
                search_prec: q,
                verified_prec: q,
                residual_log2: r,
                refined: false,
            }));
        }
    }
    Ok(None)
}

/// Integer relation among values supplied by `source`. Candidates found at
/// the search precision are re-verified on a fresh evaluation at twice that
/// precision.
pub fn integer_relation_refinable(
    source: &VecSource<'_>,
    prec: u32,
    height: &BigInt,
) -> Result<Option<RelationCertificate>, ExactError> {
    let probe = source(prec)?;
    check_bounds(probe.len(), height)?;
    let n = probe.len();
    let need = required_precision(n - 1, height);
    if prec < need {
        return Err(ExactError::InsufficientPrecision { have: prec, need });
    }
    let s = search_precision(n, height, prec);
    let vals = if s == prec { probe } else { source(s)? };
    let q = vals.iter().map(accuracy_bits).min().unwrap_or(0).min(s);
    let cands = candidates(&vals, height, q)?;
    if cands.is_empty() {
        return Ok(None);
    }
    let fine = source(2 * s)?;
    let qf = fine.iter().map(accuracy_bits).min().unwrap_or(0).min(2 * s);
    for c in cands {
        if let Some(r) = passes(&c, &fine, qf) {
            return Ok(Some(RelationCertificate {
                coeffs: normalize_sign(c),
                search_prec: s,
                verified_prec: 2 * s,
                residual_log2: r,
                refined: true,
            }));
        }
    }
    Ok(None)
}

fn powers(x: &BallComplex, k: usize) -> Vec<BallComplex> {
    let mut out = vec![BallComplex::one(x.prec())];
    for i in 1..=k {
        let next = out[i - 1].mul(x);
        out.push(next);
    }
    out
}

fn eval_poly(p: &IntPoly, x: &BallComplex) -> (Vec<BigInt>, Vec<BallComplex>) {
    (p.coeffs().to_vec(), powers(x, p.deg()))
}

/// Replaces a candidate by its irreducible factor that vanishes at `x`.
fn vanishing_factor(p: &IntPoly, x: &BallComplex, q: u32) -> (IntPoly, bool) {
    let Ok(fac) = factor_q(p) else { return (p.clone(), false) };
    let mut best: Option<(IntPoly, Mag)> = None;
    for (g, _) in fac.factors {
        let (c, v) = eval_poly(&g, x);
        let r = residual(&c, &v).abs_up();
        if passes(&c, &v, q).is_some() && best.as_ref().is_none_or(|(_, b)| r.lt(b)) {
            best = Some((g, r));
        }
    }
    match best {
        Some((g, _)) => (g, true),
        None => (p.clone(), false),
    }
}

fn canonical_poly(c: &[BigInt]) -> IntPoly {
    let p = IntPoly::new(c.to_vec()).primitive_part();
    if p.lead().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Minimal polynomial search on a fixed ball, degree by degree up to
/// `degree_bound`.
pub fn algdep(x: &BallComplex, degree_bound: usize, height: &BigInt) -> Result<Option<AlgdepCertificate>, ExactError> {
    check_bounds(degree_bound + 1, height)?;
    let q = accuracy_bits(x);
    let need = required_precision(degree_bound, height);
    if q < need {
        return Err(ExactError::InsufficientPrecision { have: q, need });
    }
    for k in 1..=degree_bound {
        let vals = powers(x, k);
        let qk = vals.iter().map(accuracy_bits).min().unwrap_or(0);
        for c in candidates(&vals, height, qk)? {
            if c[k].is_zero() {
                continue;
            }
            let (g, irreducible) = vanishing_factor(&canonical_poly(&c), x, qk);
            let (gc, gv) = eval_poly(&g, x);
            if let Some(r) = passes(&gc, &gv, qk) {
                return Ok(Some(AlgdepCertificate {
                    poly: g,
                    irreducible,
                    search_prec: qk,
                    verified_prec: qk,
                    residual_log2: r,
                    refined: false,
                }));
            }
        }
    }
    Ok(None)
}

/// Minimal polynomial search on a refinable value; every returned
/// polynomial re-verifies on an evaluation at twice the search precision.
pub fn algdep_refinable(
    source: &Source<'_>,
    prec: u32,
    degree_bound: usize,
    height: &BigInt,
) -> Result<Option<AlgdepCertificate>, ExactError> {
    check_bounds(degree_bound + 1, height)?;
    let need = required_precision(degree_bound, height);
    if prec < need {
        return Err(ExactError::InsufficientPrecision { have: prec, need });
    }
    let s = search_precision(degree_bound + 1, height, prec);
    // Powers lose a few bits each; evaluate the base with headroom.
    let headroom = 8 + 2 * degree_bound as u32;
    let x = source(s + headroom)?;
    let mut fine: Option<BallComplex> = None;
    for k in 1..=degree_bound {
        let vals = powers(&x, k);
        let qk = vals.iter().map(accuracy_bits).min().unwrap_or(0).min(s);
        for c in candidates(&vals, height, qk)? {
            if c[k].is_zero() {
                continue;
            }
            let (g, irreducible) = vanishing_factor(&canonical_poly(&c), &x, qk);
            if fine.is_none() {
                fine = Some(source(2 * s + headroom)?);
            }
            let xf = fine.as_ref().expect("evaluated");
            let (gc, gv) = eval_poly(&g, xf);
            let qf = gv.iter().map(accuracy_bits).min().unwrap_or(0).min(2 * s);
            if let Some(r) = passes(&gc, &gv, qf) {
                return Ok(Some(AlgdepCertificate {
                    poly: g,
                    irreducible,
                    search_prec: s,
                    verified_prec: 2 * s,
                    residual_log2: r,
                    refined: true,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{pi, BallReal};
    use proptest::prelude::*;

    fn sqrt2(prec: u32) -> BallComplex {
        BallComplex::from_real(BallReal::from_int(2, prec).sqrt().unwrap())
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sqrt2_minimal_polynomial() {
        let c = algdep(&sqrt2(100), 4, &big(1000)).unwrap().unwrap();
        assert_eq!(c.poly, IntPoly::from_i64(&[-2, 0, 1]));
        assert!(c.irreducible);
    }

    #[test]
    fn golden_ratio() {
        let src = |p: u32| -> Result<BallComplex, ExactError> {
            let s5 = BallReal::from_int(5, p).sqrt().unwrap();
            Ok(BallComplex::from_real(s5.add(&BallReal::one(p)).mul_2exp(-1)))
        };
        let c = algdep_refinable(&src, 100, 4, &big(1000)).unwrap().unwrap();
        assert_eq!(c.poly, IntPoly::from_i64(&[-1, -1, 1]));
        assert!(c.refined && c.verified_prec == 2 * c.search_prec);
    }

    #[test]
    fn pi_has_no_small_polynomial() {
        let src = |p: u32| Ok(BallComplex::from_real(pi(p)));
        assert_eq!(algdep_refinable(&src, 200, 8, &big(1_000_000)).unwrap(), None);
    }

    #[test]
    fn precision_gate() {
        let err = algdep(&sqrt2(40), 8, &big(1_000_000)).unwrap_err();
        assert!(matches!(err, ExactError::InsufficientPrecision { .. }));
    }

    #[test]
    fn simple_relations() {
        let p = 128;
        let vals = vec![BallComplex::one(p), sqrt2(p), sqrt2(p).add(&BallComplex::one(p))];
        let r = integer_relation(&vals, &big(10)).unwrap().unwrap();
        assert_eq!(r.coeffs, vec![big(1), big(1), big(-1)]);
        let src = |q: u32| Ok(vec![BallComplex::from_real(pi(q)), BallComplex::from_real(pi(q).mul_int(2))]);
        let r = integer_relation_refinable(&src, 128, &big(10)).unwrap().unwrap();
        assert_eq!(r.coeffs, vec![big(2), big(-1)]);
        let src = |q: u32| Ok(vec![BallComplex::one(q), BallComplex::from_real(pi(q))]);
        assert_eq!(integer_relation_refinable(&src, 300, &big(1_000_000)).unwrap(), None);
    }

    #[test]
    fn complex_values() {
        // i satisfies x^2 + 1.
        let c = algdep(&BallComplex::i(128), 4, &big(100)).unwrap().unwrap();
        assert_eq!(c.poly, IntPoly::from_i64(&[1, 0, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn recovers_planted_minimal_polynomials(c in proptest::collection::vec(-30i64..31, 2..6), lead in 1i64..20) {
            let mut coeffs = c.clone();
            coeffs.push(lead);
            let f = IntPoly::from_i64(&coeffs);
            prop_assume!(f.coeff(0) != BigInt::zero());
            let fac = factor_q(&f).unwrap();
            // Take the first irreducible factor with a root, at its first root.
            let g = fac.factors[0].0.clone();
            prop_assume!(g.deg() >= 1);
            let roots = crate::exact::roots::isolate_roots(&g, 64).unwrap();
            let src = move |p: u32| -> Result<BallComplex, ExactError> {
                crate::exact::roots::refine_roots(&g, &roots, p).map(|mut v| v.swap_remove(0))
            };
            let h = BigInt::from(1000);
            let d = 6;
            let prec = required_precision(d, &h);
            let got = algdep_refinable(&src, prec, d, &h).unwrap();
            prop_assert_eq!(got.map(|c| c.poly), Some(canonical_poly(fac.factors[0].0.coeffs())));
        }

        #[test]
        fn planted_integer_relations(m in proptest::collection::vec(-1000i64..1001, 3), seeds in proptest::collection::vec(1i64..50, 2)) {
            prop_assume!(m[2] != 0);
            // v3 = -(m0 v0 + m1 v1) / m2 with v0 = sqrt(seed0), v1 = pi * seed1.
            let h = BigInt::from(1000);
            let src = |p: u32| -> Result<Vec<BallComplex>, ExactError> {
                let v0 = BallComplex::from_real(BallReal::from_int(seeds[0] + 1, p).sqrt().unwrap());
                let v1 = BallComplex::from_real(pi(p).mul_int(seeds[1]));
                let s = v0.mul_int(m[0]).add(&v1.mul_int(m[1])).neg().div_int(m[2]);
                Ok(vec![v0, v1, s])
            };
            let r = integer_relation_refinable(&src, 256, &h).unwrap().expect("planted relation");
            let vals = src(2 * r.search_prec).unwrap();
            prop_assert!(residual(&r.coeffs, &vals).contains_zero() || r.residual_log2 < -300.0);
        }
    }
}
