//! Certified complex root isolation for squarefree integer polynomials.
//!
//! Approximations come from Aberth iterations and Newton polishing on exact
//! dyadic midpoints. They are certified with Weierstrass inclusion disks
//! `D(z_i, n |f(z_i) / (lc * prod_{j != i} (z_i - z_j))|)`, which contain all
//! roots; when they are pairwise disjoint each holds exactly one root.

use super::poly::IntPoly;
use super::ExactError;
use crate::ball::{BallComplex, BallReal, Mag};
use num_traits::Zero;
use std::cmp::Ordering;

const ABERTH_START_PREC: u32 = 96;
const MAX_ABERTH_ITERS: usize = 2000;
const MAX_DOUBLINGS: usize = 8;

/// Arguments closer than this are treated as equal when ordering roots.
pub const ARG_TIE: f64 = 1e-9;

fn mid(z: &BallComplex) -> BallComplex {
    z.midpoint()
}

fn rel_tol(z: &BallComplex, bits: u32) -> Mag {
    Mag::pow2(-i64::from(bits)).mul_up(&z.abs_up().max(Mag::pow2(0)))
}

fn aberth(f: &IntPoly, df: &IntPoly, w: u32) -> Vec<BallComplex> {
    let n = f.deg();
    let lc = f.lead();
    let c0 = f.coeff(0);
    let rho = if c0.is_zero() {
        1.0
    } else {
        let l = (super::poly::big_log2(&c0) - super::poly::big_log2(&lc)) / n as f64;
        2f64.powf(l.clamp(-60.0, 60.0))
    };
    let mut z: Vec<BallComplex> = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64 + 0.7;
            BallComplex::from_f64(rho * a.cos(), rho * a.sin(), w)
        })
        .collect();
    for _ in 0..MAX_ABERTH_ITERS {
        let mut done = true;
        for i in 0..n {
            let fz = mid(&f.eval_ball(&z[i]));
            if fz.is_exact() && fz.contains_zero() {
                continue;
            }
            let dfz = mid(&df.eval_ball(&z[i]));
            let Ok(ratio) = fz.div(&dfz) else {
                z[i] = z[i].add(&BallComplex::from_f64(1e-3, 1e-3, w));
                done = false;
                continue;
            };
            let ratio = mid(&ratio);
            let mut s = BallComplex::zero(w);
            for j in 0..n {
                if j != i {
                    if let Ok(t) = z[i].sub(&z[j]).inv() {
                        s = mid(&s.add(&t));
                    }
                }
            }
            let denom = BallComplex::one(w).sub(&ratio.mul(&s));
            let step = match ratio.div(&denom) {
                Ok(s) => mid(&s),
                Err(_) => ratio,
            };
            if !step.abs_up().le(&rel_tol(&z[i], w - 36)) {
                done = false;
            }
            z[i] = mid(&z[i].sub(&step));
        }
        if done {
            break;
        }
    }
    z
}

fn newton_polish(f: &IntPoly, df: &IntPoly, z: &mut [BallComplex], w: u32) {
    for zi in z.iter_mut() {
        *zi = zi.clone().with_prec(w);
        for _ in 0..64 {
            let fz = mid(&f.eval_ball(zi));
            let dfz = mid(&df.eval_ball(zi));
            let Ok(step) = fz.div(&dfz) else { break };
            let step = mid(&step);
            *zi = mid(&zi.sub(&step));
            if step.abs_up().le(&rel_tol(zi, w - 12)) {
                break;
            }
        }
    }
}

/// Weierstrass radii for exact centers, or `None` when two disks meet.
fn certify(f: &IntPoly, z: &[BallComplex], w: u32) -> Option<Vec<Mag>> {
    let n = z.len();
    let lc = BallComplex::from_bigint(&f.lead(), w);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let fz = f.eval_ball(&z[i]);
        let mut d = lc.clone();
        for j in 0..n {
            if j != i {
                d = d.mul(&z[i].sub(&z[j]));
            }
        }
        let lo = d.abs_down();
        if lo.is_zero() {
            return None;
        }
        radii.push(fz.abs_up().div_up(&lo).mul_u64_up(n as u64));
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = z[i].sub(&z[j]).abs_down();
            if !radii[i].add_up(&radii[j]).lt(&gap) {
                return None;
            }
        }
    }
    Some(radii)
}

/// Builds the output balls; real roots get an exact zero imaginary part once
/// the disks meeting the real axis are as many as the Sturm count.
fn finish(z: &[BallComplex], radii: &[Mag], prec: u32, real_count: usize) -> Option<Vec<BallComplex>> {
    let meets_axis: Vec<bool> = z.iter().zip(radii).map(|(c, r)| c.im.abs_up().le(r)).collect();
    if meets_axis.iter().filter(|&&b| b).count() != real_count {
        return None;
    }
    let out = z
        .iter()
        .zip(radii)
        .zip(&meets_axis)
        .map(|((c, r), &real)| {
            if real {
                BallComplex::new(c.re.clone().with_radius(*r), BallReal::zero(prec))
            } else {
                c.clone().with_radius(*r)
            }
        })
        .collect();
    Some(out)
}

/// Orders roots by argument in `[0, 2pi)`, ties broken by modulus.
pub fn canonical_cmp(a: &BallComplex, b: &BallComplex) -> Ordering {
    let (aa, ab) = (a.arg_f64(), b.arg_f64());
    // Arguments just below 2pi belong next to 0 on the positive real axis.
    let norm = |x: f64| if std::f64::consts::TAU - x < ARG_TIE { 0.0 } else { x };
    let (aa, ab) = (norm(aa), norm(ab));
    if (aa - ab).abs() < ARG_TIE {
        let ma = a.abs_up().to_f64();
        let mb = b.abs_up().to_f64();
        ma.partial_cmp(&mb).unwrap_or(Ordering::Equal)
    } else {
        aa.partial_cmp(&ab).unwrap_or(Ordering::Equal)
    }
}

fn check_input(f: &IntPoly) -> Result<(), ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if !f.is_squarefree() {
        return Err(ExactError::NotSquarefree);
    }
    Ok(())
}

fn accurate_enough(balls: &[BallComplex], prec: u32) -> bool {
    balls.iter().all(|b| b.rad().le(&rel_tol(b, prec)))
}

/// All complex roots of a squarefree `f`, as pairwise disjoint balls of
/// relative radius at most `2^-prec`, in canonical order.
pub fn isolate_roots(f: &IntPoly, prec: u32) -> Result<Vec<BallComplex>, ExactError> {
    check_input(f)?;
    if f.degree() < 1 {
        return Ok(Vec::new());
    }
    let df = f.derivative();
    let real_count = f.count_real_roots();
    let start = ABERTH_START_PREC.max(64 + 2 * f.root_bound_log2().unsigned_abs() as u32);
    let mut z = aberth(f, &df, start);
    let mut w = prec + 48 + f.deg().ilog2() * 2;
    for _ in 0..MAX_DOUBLINGS {
        newton_polish(f, &df, &mut z, w);
        if let Some(radii) = certify(f, &z, w) {
            if let Some(mut out) = finish(&z, &radii, prec, real_count) {
                if accurate_enough(&out, prec) {
                    out.sort_by(canonical_cmp);
                    return Ok(out);
                }
            }
        }
        // Restart the global iteration at higher precision in case two
        // approximations converged to the same root.
        let again = aberth(f, &df, w.min(4 * start));
        if certify(f, &again, w.min(4 * start)).is_some() {
            z = again;
        }
        w *= 2;
    }
    Err(ExactError::Unsupported(format!("root isolation did not converge for {f}")))
}

/// Re-certifies previously isolated roots at a higher precision, preserving
/// their order. Each new ball lies inside the corresponding old one's
/// neighborhood (checked by overlap).
pub fn refine_roots(f: &IntPoly, old: &[BallComplex], prec: u32) -> Result<Vec<BallComplex>, ExactError> {
    check_input(f)?;
    if old.len() != f.deg() {
        return Err(ExactError::DimensionMismatch("root count differs from degree".into()));
    }
    let df = f.derivative();
    let real_count = f.count_real_roots();
    let mut z: Vec<BallComplex> = old.iter().map(mid).collect();
    let mut w = prec + 48 + f.deg().max(1).ilog2() * 2;
    for _ in 0..3 {
        newton_polish(f, &df, &mut z, w);
        if let Some(radii) = certify(f, &z, w) {
            if let Some(out) = finish(&z, &radii, prec, real_count) {
                if accurate_enough(&out, prec) && out.iter().zip(old).all(|(n, o)| n.overlaps(o)) {
                    return Ok(out);
                }
            }
        }
        w *= 2;
    }
    // Fall back to a fresh isolation matched by overlap.
    let fresh = isolate_roots(f, prec)?;
    let mut out = Vec::with_capacity(old.len());
    for o in old {
        let hits: Vec<&BallComplex> = fresh.iter().filter(|n| n.overlaps(o)).collect();
        if hits.len() != 1 {
            return Err(ExactError::Unsupported("root refinement lost track of a root".into()));
        }
        out.push(hits[0].clone());
    }
    Ok(out)
}
