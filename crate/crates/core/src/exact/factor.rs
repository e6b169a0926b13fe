//! Factorization in `Z[x]`: squarefree decomposition, then Zassenhaus
//! (factorization mod p, quadratic Hensel lifting, subset recombination).

use super::modp::{self, Fp};
use super::poly::{IntPoly, RatPoly};
use super::ExactError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest degree accepted by [`factor_q`].
pub const DEGREE_CAP: usize = 48;

/// `unit * prod f_i^{e_i}`, with each `f_i` primitive, irreducible and with
/// positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = acc.mul(&f.pow(*e));
        }
        acc
    }

    /// Irreducible factors without multiplicity.
    pub fn irreducibles(&self) -> Vec<IntPoly> {
        self.factors.iter().map(|(f, _)| f.clone()).collect()
    }
}

/// Factors a nonzero integer polynomial into irreducibles over `Q`.
pub fn factor_q(f: &IntPoly) -> Result<Factorization, ExactError> {
    factor_with_cap(f, DEGREE_CAP)
}

/// As [`factor_q`] with a caller-chosen degree cap.
pub fn factor_with_cap(f: &IntPoly, cap: usize) -> Result<Factorization, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if f.deg() > cap {
        return Err(ExactError::DegreeCapExceeded { degree: f.deg(), cap });
    }
    let mut factors = Vec::new();
    for (part, e) in squarefree_decomposition(&f.primitive_part()) {
        for g in factor_squarefree(&part)? {
            factors.push((g, e));
        }
    }
    factors.sort_by(|a, b| (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs())));
    let prod = factors.iter().fold(BigInt::one(), |acc, (g, e)| acc * g.lead().pow(*e));
    let unit = f.lead() / prod;
    Ok(Factorization { unit, factors })
}

/// True when `f` (of positive degree) is irreducible over `Q`.
pub fn is_irreducible(f: &IntPoly) -> Result<bool, ExactError> {
    if f.degree() < 1 {
        return Ok(false);
    }
    let fac = factor_with_cap(f, usize::MAX)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

/// Yun's algorithm on a primitive polynomial: `(a_i, i)` with `f = prod a_i^i`
/// up to a constant.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if f.degree() < 1 {
        return out;
    }
    let fr = f.to_rat();
    let df = f.derivative().to_rat();
    let b = fr.gcd(&df);
    let mut c = fr.div_rem(&b).0;
    let mut d = df.div_rem(&b).0.sub(&derivative_rat(&c));
    let mut i = 1;
    while c.degree() > 0 {
        let a = c.gcd(&d);
        if a.degree() > 0 {
            out.push((a.to_primitive_int(), i));
        }
        c = c.div_rem(&a).0;
        d = d.div_rem(&a).0.sub(&derivative_rat(&c));
        i += 1;
    }
    out
}

fn derivative_rat(p: &RatPoly) -> RatPoly {
    RatPoly::new(
        p.coeffs().iter().enumerate().skip(1).map(|(i, c)| c * num_rational::BigRational::from_integer(i.into())).collect(),
    )
}

/// Factors a primitive squarefree polynomial with positive leading coefficient.
pub fn factor_squarefree(f: &IntPoly) -> Result<Vec<IntPoly>, ExactError> {
    if f.degree() <= 1 {
        return Ok(vec![f.primitive_part()]);
    }
    let mut out = Vec::new();
    let mut g = f.primitive_part();
    if g.coeff(0).is_zero() {
        out.push(IntPoly::x());
        g = g.div_exact(&IntPoly::x()).expect("x divides");
    }
    if g.degree() <= 1 {
        if g.degree() == 1 {
            out.push(g);
        }
        return Ok(out);
    }
    out.extend(zassenhaus(&g));
    Ok(out)
}

pub(super) fn to_fp(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut v: Fp = f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap_or(0)).collect();
    modp::trim(&mut v);
    v
}

/// Picks the prime with the fewest modular factors among a handful of good ones.
fn choose_prime(f: &IntPoly) -> (u64, Vec<Fp>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 8 {
        p += 1;
        if !modp::is_prime(p) {
            continue;
        }
        let fp = to_fp(f, p);
        if fp.len() != f.coeffs().len() {
            continue;
        }
        let fm = modp::monic(&fp, p);
        if modp::gcd(&fm, &modp::derivative(&fm, p), p).len() > 1 {
            continue;
        }
        tried += 1;
        let fs = modp::factor_squarefree(&fm, p, &mut rng);
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            let done = fs.len() == 1;
            best = Some((p, fs));
            if done {
                break;
            }
        }
    }
    best.expect("some prime is good for a squarefree polynomial")
}

fn sym_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

// Polynomials over Z/mZ as coefficient vectors reduced into [0, m).
mod zm {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    pub type P = Vec<BigInt>;

    pub fn reduce(a: &[BigInt], m: &BigInt) -> P {
        let mut v: P = a.iter().map(|c| c.mod_floor(m)).collect();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn add(a: &P, b: &P, m: &BigInt) -> P {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        reduce(&(0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect::<Vec<_>>(), m)
    }

    pub fn sub(a: &P, b: &P, m: &BigInt) -> P {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        reduce(&(0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect::<Vec<_>>(), m)
    }

    pub fn mul(a: &P, b: &P, m: &BigInt) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] += x * y;
            }
        }
        reduce(&r, m)
    }

    pub fn inv(a: &BigInt, m: &BigInt) -> BigInt {
        let e = a.extended_gcd(m);
        assert!(e.gcd.is_one() || e.gcd == -BigInt::one(), "non-invertible leading coefficient");
        (e.x * e.gcd).mod_floor(m)
    }

    pub fn div_rem(a: &P, b: &P, m: &BigInt) -> (P, P) {
        let db = b.len() - 1;
        let mut r = a.clone();
        if r.len() <= db {
            return (Vec::new(), reduce(&r, m));
        }
        let li = inv(&b[db], m);
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = (&r[k + db] * &li).mod_floor(m);
            if !c.is_zero() {
                for (i, bi) in b.iter().enumerate() {
                    r[k + i] = (&r[k + i] - &c * bi).mod_floor(m);
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        (reduce(&q, m), reduce(&r, m))
    }
}

/// Extended Euclid mod p: `s a + t b = 1`.
fn ext_gcd_fp(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = modp::div_rem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let ns = modp::sub(&s0, &modp::mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, ns);
        let nt = modp::sub(&t0, &modp::mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, nt);
    }
    let inv = modp::inv_u(*r0.last().expect("coprime inputs"), p);
    (modp::scale(&s0, inv, p), modp::scale(&t0, inv, p))
}

fn fp_to_big(a: &Fp) -> zm::P {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f = g h (mod p)` with `g` monic to a factorization modulo
/// `p^(2^j) >= target`; returns `(g, h, modulus)`.
fn hensel_pair(f: &[BigInt], g: &Fp, h: &Fp, p: u64, target: &BigInt) -> (zm::P, zm::P, BigInt) {
    let (s, t) = ext_gcd_fp(g, h, p);
    let mut m = BigInt::from(p);
    let mut g = fp_to_big(g);
    let mut h = fp_to_big(h);
    let mut s = fp_to_big(&s);
    let mut t = fp_to_big(&t);
    while m < *target {
        let m2 = &m * &m;
        let f2 = zm::reduce(f, &m2);
        let e = zm::sub(&f2, &zm::mul(&g, &h, &m2), &m2);
        let (q, r) = zm::div_rem(&zm::mul(&s, &e, &m2), &h, &m2);
        let gn = zm::add(&zm::add(&g, &zm::mul(&t, &e, &m2), &m2), &zm::mul(&q, &g, &m2), &m2);
        let hn = zm::add(&h, &r, &m2);
        let b = zm::sub(&zm::add(&zm::mul(&s, &gn, &m2), &zm::mul(&t, &hn, &m2), &m2), &vec![BigInt::one()], &m2);
        let (c, d) = zm::div_rem(&zm::mul(&s, &b, &m2), &hn, &m2);
        s = zm::sub(&s, &d, &m2);
        t = zm::sub(&zm::sub(&t, &zm::mul(&t, &b, &m2), &m2), &zm::mul(&c, &gn, &m2), &m2);
        g = gn;
        h = hn;
        m = m2;
    }
    (g, h, m)
}

/// Lifts the monic modular factors of `f` (leading coefficient `lc`) to
/// monic factors modulo `pk`.
fn hensel_all(f: &[BigInt], factors: &[Fp], p: u64, pk: &BigInt) -> Vec<zm::P> {
    let lc = f.last().expect("nonzero").clone();
    if factors.len() == 1 {
        let inv = zm::inv(&lc, pk);
        let v: Vec<BigInt> = f.iter().map(|c| c * &inv).collect();
        return vec![zm::reduce(&v, pk)];
    }
    let half = factors.len() / 2;
    let g0 = factors[..half].iter().fold(vec![1u64], |a, b| modp::mul(&a, b, p));
    let mut h0 = factors[half..].iter().fold(vec![1u64], |a, b| modp::mul(&a, b, p));
    let lcp = lc.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
    h0 = modp::scale(&h0, lcp, p);
    let (g, h, m) = hensel_pair(f, &g0, &h0, p, pk);
    let g = zm::reduce(&g, pk);
    let h = zm::reduce(&h, pk);
    debug_assert!(m >= *pk);
    let mut out = hensel_all(&g, &factors[..half], p, pk);
    out.extend(hensel_all(&h, &factors[half..], p, pk));
    out
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = idx.clone();
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    })
}

/// Zassenhaus on a primitive squarefree `f` with `f(0) != 0`, degree >= 2.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let (p, local) = choose_prime(f);
    if local.len() == 1 {
        return vec![f.clone()];
    }
    let lc = f.lead().abs();
    // Coefficients of any factor of lc * g, g | f, are below 2^n |f|_2 |lc|.
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << f.deg()) * norm2 * &lc * 2 + 1;
    let mut pk = BigInt::from(p);
    while pk < bound {
        pk *= p;
    }
    let lifted = hensel_all(f.coeffs(), &local, p, &pk);
    let mut remaining: Vec<zm::P> = lifted;
    let mut g = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        let lcg = g.lead();
        let const_target = &lcg * g.coeff(0);
        for combo in combinations(remaining.len(), s) {
            let c0 = combo.iter().fold(lcg.clone(), |acc, &i| (acc * remaining[i].first().cloned().unwrap_or_default()).mod_floor(&pk));
            let c0 = sym_mod(&c0, &pk);
            if c0.is_zero() || !(&const_target % &c0).is_zero() {
                continue;
            }
            let prod = combo.iter().fold(vec![lcg.clone()], |acc, &i| zm::mul(&acc, &remaining[i], &pk));
            let cand = IntPoly::new(prod.iter().map(|c| sym_mod(c, &pk)).collect()).primitive_part();
            if let Some(q) = g.div_exact(&cand) {
                found = Some((combo, cand, q));
                break;
            }
        }
        match found {
            Some((combo, cand, q)) => {
                out.push(cand);
                g = q.primitive_part();
                remaining = remaining.into_iter().enumerate().filter(|(i, _)| !combo.contains(i)).map(|(_, v)| v).collect();
            }
            None => s += 1,
        }
    }
    out.push(g.primitive_part());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn degrees(f: &IntPoly) -> Vec<usize> {
        let mut d: Vec<usize> = factor_q(f).unwrap().factors.iter().map(|(g, _)| g.deg()).collect();
        d.sort();
        d
    }

    #[test]
    fn spec_examples() {
        let f = factor_q(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f.irreducibles(), vec![p(&[-1, 1]), p(&[1, 1])]);
        let f = factor_q(&p(&[4, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.irreducibles(), vec![p(&[2, -2, 1]), p(&[2, 2, 1])]);
        assert_eq!(f.expand(), p(&[4, 0, 0, 0, 1]));
        assert_eq!(factor_q(&p(&[1, 0, 1])).unwrap().irreducibles(), vec![p(&[1, 0, 1])]);
    }

    #[test]
    fn multiplicity_and_content() {
        let f = p(&[-1, 1]).pow(3).mul(&p(&[1, 0, 1])).scale(&BigInt::from(-6));
        let fac = factor_q(&f).unwrap();
        assert_eq!(fac.unit, BigInt::from(-6));
        assert_eq!(fac.expand(), f);
        assert!(fac.factors.contains(&(p(&[-1, 1]), 3)));
    }

    #[test]
    fn swinnerton_dyer_style_many_local_factors() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime.
        assert_eq!(degrees(&p(&[1, 0, -10, 0, 1])), vec![4]);
        // Cyclotomic x^12 - 1.
        assert_eq!(degrees(&p(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1])), vec![1, 1, 2, 2, 2, 4]);
    }

    #[test]
    fn non_monic_factors() {
        let f = p(&[3, 2]).mul(&p(&[-5, 0, 7])).mul(&p(&[3, 1, 0, 4]));
        let fac = factor_q(&f).unwrap();
        assert_eq!(fac.expand(), f);
        assert_eq!(degrees(&f), vec![1, 2, 3]);
    }

    #[test]
    fn degree_cap() {
        let f = IntPoly::monomial(BigInt::one(), 60).add(&IntPoly::one());
        assert!(matches!(factor_q(&f), Err(ExactError::DegreeCapExceeded { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn product_of_random_factors(parts in proptest::collection::vec(proptest::collection::vec(-9i64..10, 2..5), 1..4)) {
            let polys: Vec<IntPoly> = parts.iter().map(|c| p(c)).filter(|g| g.degree() >= 1).collect();
            prop_assume!(!polys.is_empty());
            let f = polys.iter().fold(IntPoly::one(), |a, g| a.mul(g));
            let fac = factor_q(&f).unwrap();
            prop_assert_eq!(fac.expand(), f.clone());
            // Every irreducible factor has no nontrivial factorization mod-free recheck:
            // refactoring it returns itself.
            for (g, _) in &fac.factors {
                let again = factor_q(g).unwrap();
                prop_assert_eq!(again.factors.len(), 1);
            }
            let total: usize = fac.factors.iter().map(|(g, e)| g.deg() * *e as usize).sum();
            prop_assert_eq!(total, f.deg());
            prop_assert!(!fac.factors.is_empty());
        }
    }
}
