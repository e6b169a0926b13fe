//! Eisenstein series, `j` and `j'` from q-expansions with explicit tail
//! bounds.

use super::NumericError;
use crate::ball::{exp, pi, two_pi_i, BallComplex, Mag};

/// Hard cap on the number of q-series terms.
pub const MAX_TERMS: usize = 20_000;

/// Below this imaginary part, quasi-modular series are evaluated at a
/// reduced point instead.
const IM_FLOOR: f64 = 0.1;

/// `SL2(Z)` element `(a, b; c, d)` acting by Möbius transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1, b: 0, c: 0, d: 1 };

    /// `self ∘ o`.
    pub fn compose(&self, o: &Mobius) -> Option<Mobius> {
        Some(Mobius {
            a: self.a.checked_mul(o.a)?.checked_add(self.b.checked_mul(o.c)?)?,
            b: self.a.checked_mul(o.b)?.checked_add(self.b.checked_mul(o.d)?)?,
            c: self.c.checked_mul(o.a)?.checked_add(self.d.checked_mul(o.c)?)?,
            d: self.c.checked_mul(o.b)?.checked_add(self.d.checked_mul(o.d)?)?,
        })
    }

    /// `c τ + d`.
    pub fn factor(&self, tau: &BallComplex) -> BallComplex {
        tau.mul_int(self.c).add(&BallComplex::from_int(self.d, tau.prec()))
    }

    pub fn apply(&self, tau: &BallComplex) -> Result<BallComplex, NumericError> {
        let num = tau.mul_int(self.a).add(&BallComplex::from_int(self.b, tau.prec()));
        Ok(num.div(&self.factor(tau))?)
    }
}

fn check_upper(tau: &BallComplex) -> Result<(), NumericError> {
    if tau.im.is_positive() {
        Ok(())
    } else {
        Err(NumericError::NotUpperHalfPlane)
    }
}

/// Moves `tau` into the standard fundamental domain. Returns the reduced
/// point `γτ` and `γ`.
pub fn reduce(tau: &BallComplex) -> Result<(BallComplex, Mobius), NumericError> {
    check_upper(tau)?;
    let (mut x, mut y) = tau.to_f64_pair();
    let mut g = Mobius::IDENTITY;
    let overflow = || NumericError::PrecisionExhausted("reduction matrix overflow".into());
    for _ in 0..10_000 {
        let n = x.round();
        if n != 0.0 {
            let t = Mobius { a: 1, b: -(n as i64), c: 0, d: 1 };
            g = t.compose(&g).ok_or_else(overflow)?;
            x -= n;
        }
        let r = x * x + y * y;
        if r >= 1.0 - 1e-12 {
            let red = g.apply(tau)?;
            return Ok((red, g));
        }
        g = Mobius { a: 0, b: -1, c: 1, d: 0 }.compose(&g).ok_or_else(overflow)?;
        x = -x / r;
        y /= r;
    }
    Err(overflow())
}

/// Sum of `k`-th powers of divisors for `n ≤ len`.
fn sigma_table(len: usize, k: u32) -> Vec<u128> {
    let mut s = vec![0u128; len + 1];
    for d in 1..=len {
        let p = (d as u128).pow(k);
        let mut m = d;
        while m <= len {
            s[m] += p;
            m += d;
        }
    }
    s
}

/// Upper bound for sum over `n > n0` of `C n^m r^n`, as `log2`.
fn tail_log2(c_log2: f64, m: u32, r_log2: f64, n0: usize) -> Option<f64> {
    let n1 = (n0 + 1) as f64;
    let rho_log2 = f64::from(m) * (1.0 + 1.0 / n1).log2() + r_log2;
    if rho_log2 >= -1e-9 {
        return None;
    }
    let one_minus = 1.0 - rho_log2.exp2();
    Some(c_log2 + f64::from(m) * n1.log2() + n1 * r_log2 - one_minus.log2())
}

/// Number of terms for which the tail is below `2^-bits`.
fn terms_needed(c_log2: f64, m: u32, r_log2: f64, bits: u32) -> Result<usize, NumericError> {
    let target = -f64::from(bits) - 8.0;
    let mut n = 1usize;
    loop {
        if let Some(t) = tail_log2(c_log2, m, r_log2, n) {
            if t < target {
                return Ok(n);
            }
        }
        n = if n < 64 { n + 1 } else { n + n / 8 };
        if n > MAX_TERMS {
            return Err(NumericError::PrecisionExhausted(format!(
                "q-series needs more than {MAX_TERMS} terms (|q| too close to 1)"
            )));
        }
    }
}

/// A series `1 + c Σ f(n) q^n` with `|f(n)| ≤ n^m`.
struct Spec {
    c: i64,
    constant: i64,
    m: u32,
    coeff: fn(usize, &Tables) -> u128,
}

struct Tables {
    s1: Vec<u128>,
    s3: Vec<u128>,
    s5: Vec<u128>,
}

fn eval_series(q: &BallComplex, specs: &[Spec], bits: u32) -> Result<Vec<BallComplex>, NumericError> {
    let prec = q.prec();
    let r = q.abs_up();
    if !r.lt(&Mag::pow2(0)) {
        return Err(NumericError::PrecisionExhausted("|q| is not below 1".into()));
    }
    let r_log2 = if r.is_zero() { -f64::from(bits) - 64.0 } else { r.log2() + 1e-9 };
    let mut n_max = 1;
    for s in specs {
        let c_log2 = (s.c.unsigned_abs() as f64).log2();
        n_max = n_max.max(terms_needed(c_log2, s.m, r_log2, bits)?);
    }
    let tables = Tables { s1: sigma_table(n_max, 1), s3: sigma_table(n_max, 3), s5: sigma_table(n_max, 5) };
    let mut sums = vec![BallComplex::zero(prec); specs.len()];
    let mut qn = BallComplex::one(prec);
    for n in 1..=n_max {
        qn = qn.mul(q);
        for (sum, s) in sums.iter_mut().zip(specs) {
            let k = (s.coeff)(n, &tables);
            *sum = sum.add(&qn.mul_bigint(&k.into()));
        }
    }
    let mut out = Vec::with_capacity(specs.len());
    for (sum, s) in sums.into_iter().zip(specs) {
        // Tail of Σ f(n) q^n, scaled by |c| below.
        let t = tail_log2(0.0, s.m, r_log2, n_max).expect("checked in terms_needed");
        let tail = Mag::pow2(t.ceil() as i64 + 1);
        let v = sum.with_radius(tail).mul_int(s.c);
        out.push(v.add(&BallComplex::from_int(s.constant, prec)));
    }
    Ok(out)
}

const E2: Spec = Spec { c: -24, constant: 1, m: 2, coeff: |n, t| t.s1[n] };
const E4: Spec = Spec { c: 240, constant: 1, m: 4, coeff: |n, t| t.s3[n] };
const E6: Spec = Spec { c: -504, constant: 1, m: 6, coeff: |n, t| t.s5[n] };
/// `q d/dq E4` and `q d/dq E6`.
const DE4: Spec = Spec { c: 240, constant: 0, m: 5, coeff: |n, t| n as u128 * t.s3[n] };
const DE6: Spec = Spec { c: -504, constant: 0, m: 7, coeff: |n, t| n as u128 * t.s5[n] };

fn nome(tau: &BallComplex) -> BallComplex {
    exp(&two_pi_i(tau.prec()).mul(tau))
}

fn working(tau: &BallComplex, prec: u32) -> BallComplex {
    tau.clone().with_prec(prec + 64)
}

/// `E2, E4, E6` at `tau` by direct summation (no reduction).
pub fn eisenstein_direct(tau: &BallComplex, prec: u32) -> Result<[BallComplex; 3], NumericError> {
    check_upper(tau)?;
    let w = working(tau, prec);
    let v = eval_series(&nome(&w), &[E2, E4, E6], prec + 32)?;
    Ok([v[0].clone().with_prec(prec), v[1].clone().with_prec(prec), v[2].clone().with_prec(prec)])
}

/// `G2(τ) = (π²/3) E2(τ)`, the quasi-period of `1` in the lattice `Z + τZ`.
pub fn g2_weight2(tau: &BallComplex, prec: u32) -> Result<BallComplex, NumericError> {
    check_upper(tau)?;
    let w = working(tau, prec);
    let wp = w.prec();
    let scale = pi(wp).sqr().div_int(3);
    if tau.im.to_f64() >= IM_FLOOR {
        let e2 = eval_series(&nome(&w), &[E2], prec + 32)?.remove(0);
        return Ok(e2.mul_real(&scale).with_prec(prec));
    }
    // G2(γτ) = (cτ+d)^2 G2(τ) - 2πi c (cτ+d).
    let (red, g) = reduce(&w)?;
    let e2 = eval_series(&nome(&red), &[E2], prec + 32)?.remove(0);
    let f = g.factor(&w);
    let num = e2.mul_real(&scale).add(&two_pi_i(wp).mul(&f).mul_int(g.c));
    Ok(num.div(&f.sqr())?.with_prec(prec))
}

/// Extra bits lost to `E4^3 - E6^2 ≈ 1728 q` at a reduced point.
const MAX_EXTRA_BITS: f64 = 100_000.0;

/// The input at working precision, its reduction `γτ` and `γ`. The working
/// precision covers the cancellation in `E4^3 - E6^2`.
fn reduced_working(tau: &BallComplex, prec: u32) -> Result<(BallComplex, BallComplex, Mobius), NumericError> {
    let (probe, g) = reduce(tau)?;
    let extra = (9.1 * probe.im.to_f64()).ceil();
    if extra.is_nan() || extra > MAX_EXTRA_BITS {
        return Err(NumericError::PrecisionExhausted("reduced point too far up the cusp".into()));
    }
    let w = tau.clone().with_prec(prec + 64 + extra as u32);
    let red = g.apply(&w)?;
    Ok((w, red, g))
}

/// `E4` and `E6` at `tau`, evaluated at the reduced point and transformed.
pub fn e4_e6(tau: &BallComplex, prec: u32) -> Result<(BallComplex, BallComplex), NumericError> {
    let (w, red, g) = reduced_working(tau, prec)?;
    let v = eval_series(&nome(&red), &[E4, E6], red.prec() - 32)?;
    let f = g.factor(&w);
    let f4 = f.pow_u(4);
    let e4 = v[0].div(&f4)?;
    let e6 = v[1].div(&f4.mul(&f.sqr()))?;
    Ok((e4.with_prec(prec), e6.with_prec(prec)))
}

/// `j(τ)` and `dj/dτ`, via the reduced point and `j'(τ) = j'(γτ)/(cτ+d)^2`.
pub fn j_and_derivative(tau: &BallComplex, prec: u32) -> Result<(BallComplex, BallComplex), NumericError> {
    let (w, red, g) = reduced_working(tau, prec)?;
    let wp = w.prec();
    let v = eval_series(&nome(&red), &[E4, E6, DE4, DE6], wp - 32)?;
    let (e4, e6, de4, de6) = (&v[0], &v[1], &v[2], &v[3]);
    let e4sq = e4.sqr();
    let e4cu = e4sq.mul(e4);
    let e6sq = e6.sqr();
    let den = e4cu.sub(&e6sq);
    let j = e4cu.mul_int(1728).div(&den)?;
    // q dj/dq = 1728 (2 E4^3 E6 DE6 - 3 E4^2 E6^2 DE4) / (E4^3 - E6^2)^2.
    let num = e4cu.mul(e6).mul(de6).mul_int(2).sub(&e4sq.mul(&e6sq).mul(de4).mul_int(3));
    let dj = num.mul_int(1728).div(&den.sqr())?;
    let jp_red = two_pi_i(wp).mul(&dj);
    let jp = jp_red.div(&g.factor(&w).sqr())?;
    Ok((j.with_prec(prec), jp.with_prec(prec)))
}

/// `dj/dτ` through the Ramanujan identity `q dj/dq = -1728 E4^2 E6 / (E4^3 - E6^2)`,
/// a second route used in tests.
#[cfg(test)]
pub(crate) fn jprime_ramanujan(tau: &BallComplex, prec: u32) -> Result<BallComplex, NumericError> {
    let (w, _, _) = reduced_working(tau, prec)?;
    let (e4, e6) = e4_e6(&w, w.prec())?;
    let den = e4.pow_u(3).sub(&e6.sqr());
    let dj = e4.sqr().mul(&e6).mul_int(-1728).div(&den)?;
    Ok(two_pi_i(w.prec()).mul(&dj).with_prec(prec))
}
