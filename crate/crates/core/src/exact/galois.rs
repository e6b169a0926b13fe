//! Splitting fields and Galois groups of integer polynomials.
//!
//! [`splitting_field_order`] builds a tower `Q = K_0 < K_1 < ...` where each
//! `K_i = Q[z]/M_i` is given by a primitive element. Factoring over `K_i`
//! uses Trager's norm: `N(x) = Res_z(M(z), c(x - s z))` is factored over `Q`,
//! and its irreducible factors correspond to the irreducible factors of `c`
//! over `K_i` once `N` is squarefree.
//!
//! [`galois_group`] is an independent numeric-exact route: it factors the
//! resolvent `prod_{pi in W} (x - sum_i c_i r_{pi(i)})` over a candidate group
//! `W` containing the Galois group.

use super::factor::{factor_with_cap, is_irreducible, to_fp};
use super::modp;
use super::matrix::IntMatrix;
use super::poly::{IntPoly, RatPoly};
use super::roots::refine_roots;
use super::ExactError;
use crate::ball::BallComplex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Largest accepted input degree for [`splitting_field_order`].
pub const SPLITTING_DEGREE_CAP: usize = 8;
/// Largest norm degree the tower will factor.
pub const NORM_DEGREE_CAP: usize = 192;
/// Largest candidate group accepted by [`galois_group`].
pub const GROUP_CAP: usize = 64;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Arithmetic in `Q[z]/(m)` for a monic irreducible integer `m`.
#[derive(Clone, Debug)]
struct Qz {
    m: IntPoly,
    mr: RatPoly,
}

impl Qz {
    fn new(m: IntPoly) -> Self {
        let mr = m.to_rat();
        Qz { m, mr }
    }

    fn deg(&self) -> usize {
        self.m.deg()
    }

    fn reduce(&self, a: &RatPoly) -> RatPoly {
        if a.degree() < self.mr.degree() {
            a.clone()
        } else {
            a.div_rem(&self.mr).1
        }
    }

    fn mul(&self, a: &RatPoly, b: &RatPoly) -> RatPoly {
        self.reduce(&a.mul(b))
    }

    fn constant(q: BigRational) -> RatPoly {
        RatPoly::new(vec![q])
    }

    fn gen(&self) -> RatPoly {
        self.reduce(&RatPoly::new(vec![rat(0), rat(1)]))
    }

    /// `det` of multiplication by `h` on `Q[z]/(m)`, i.e. `Res(m, h)`.
    fn norm_of(&self, h: &RatPoly) -> BigRational {
        let d = self.deg();
        let den = h.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let hi: RatPoly = h.scale(&BigRational::from_integer(den.clone()));
        let z = self.gen();
        let mut col = self.reduce(&hi);
        let mut cols = Vec::with_capacity(d);
        for _ in 0..d {
            cols.push((0..d).map(|i| col.coeff(i).to_integer()).collect::<Vec<BigInt>>());
            col = self.mul(&col, &z);
        }
        let mat = IntMatrix::from_rows(cols).transpose();
        BigRational::new(mat.det(), den.pow(d as u32))
    }
}

/// `N(x) = Res_z(M(z), f(x - s z))`, exactly, by evaluation at integer
/// points and interpolation.
fn norm_poly(k: &Qz, f: &IntPoly, s: i64) -> IntPoly {
    let n = f.deg() * k.deg();
    let sz = k.gen().scale(&rat(s));
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    for a in 0..=n as i64 {
        let arg = Qz::constant(rat(a)).sub(&sz);
        let mut acc = RatPoly::zero();
        for c in f.coeffs().iter().rev() {
            acc = k.mul(&acc, &arg).add(&Qz::constant(BigRational::from_integer(c.clone())));
        }
        xs.push(rat(a));
        ys.push(k.norm_of(&acc));
    }
    RatPoly::interpolate(&xs, &ys).to_int().expect("norm of an integer polynomial is integral")
}

/// Order of the Galois group of the splitting field of a squarefree `f`
/// (degree at most 8).
///
/// Full symmetric and alternating groups are recognised from Frobenius
/// cycle types first, since their towers reach degree `n!`; everything else
/// goes through [`splitting_tower`].
pub fn splitting_field_order(f: &IntPoly) -> Result<u64, ExactError> {
    if f.deg() >= 4 && f.deg() <= SPLITTING_DEGREE_CAP && f.is_squarefree() && is_irreducible(f)? {
        if let Some(order) = large_group_order(&monic_transform(&f.primitive_part())) {
            return Ok(order);
        }
    }
    Ok(splitting_tower(f)?.order)
}

/// `lc^(n-1) f(x / lc)`: monic with the same splitting field.
fn monic_transform(f: &IntPoly) -> IntPoly {
    let n = f.deg();
    let lc = f.lead();
    let mut c: Vec<BigInt> = (0..=n).map(|i| f.coeff(i) * lc.pow((n - 1 - i.min(n - 1)) as u32)).collect();
    c[n] = BigInt::one();
    IntPoly::new(c)
}

/// Multiset of factor degrees of `f` mod `p`, or `None` if `p` divides the
/// leading coefficient or `f` is not squarefree mod `p`.
pub fn frobenius_cycle_type(f: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let fp = to_fp(f, p);
    if fp.len() != f.deg() + 1 {
        return None;
    }
    let fm = modp::monic(&fp, p);
    if modp::gcd(&fm, &modp::derivative(&fm, p), p).len() > 1 {
        return None;
    }
    let mut out: Vec<usize> = modp::distinct_degree(&fm, p)
        .into_iter()
        .flat_map(|(g, d)| std::iter::repeat_n(d, (g.len() - 1) / d))
        .collect();
    out.sort_unstable();
    Some(out)
}

/// `n!` or `n!/2` when Frobenius elements prove that the Galois group of the
/// irreducible `f` contains `A_n`, by Jordan's theorems: a primitive group
/// with a transposition is `S_n`, one with a 3-cycle contains `A_n`.
/// Primitivity follows from a prime cycle of length `> n/2` (or `n` prime),
/// or from an `(n-1)`-cycle.
fn large_group_order(f: &IntPoly) -> Option<u64> {
    let n = f.deg();
    let isolated = |ty: &[usize], len: usize| {
        ty.iter().filter(|&&c| c == len).count() == 1 && ty.iter().all(|&c| c == len || c % len != 0)
    };
    let mut primitive = modp::is_prime(n as u64);
    let (mut transposition, mut three) = (false, false);
    let mut seen = 0;
    for p in (3u64..5000).filter(|&p| modp::is_prime(p)) {
        let Some(ty) = frobenius_cycle_type(f, p) else { continue };
        seen += 1;
        primitive |= ty == [1, n - 1] || ty.iter().any(|&c| 2 * c > n && modp::is_prime(c as u64));
        // A power of the element is a single 2- or 3-cycle.
        transposition |= isolated(&ty, 2) && ty.iter().all(|&c| c == 2 || c % 2 == 1);
        three |= isolated(&ty, 3);
        if primitive && (transposition || three) || seen >= 300 {
            break;
        }
    }
    if !primitive || !(transposition || three) {
        return None;
    }
    let full: u64 = (1..=n as u64).product();
    if transposition {
        return Some(full);
    }
    let d = f.discriminant_monic();
    let square = !d.is_negative() && {
        let r = num_integer::Roots::sqrt(&d);
        &r * &r == d
    };
    Some(if square { full / 2 } else { full })
}

/// `degrees` are the absolute degrees `[K_i : Q]` of successive fields.
#[derive(Debug, Clone)]
pub struct SplittingTower {
    pub order: u64,
    pub degrees: Vec<usize>,
}

pub fn splitting_tower(f: &IntPoly) -> Result<SplittingTower, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if f.deg() > SPLITTING_DEGREE_CAP {
        return Err(ExactError::DegreeCapExceeded { degree: f.deg(), cap: SPLITTING_DEGREE_CAP });
    }
    if !f.is_squarefree() {
        return Err(ExactError::NotSquarefree);
    }
    let f = f.primitive_part();
    if f.degree() <= 1 {
        return Ok(SplittingTower { order: 1, degrees: vec![1] });
    }
    let n = f.deg();
    let fm = monic_transform(&f);

    let mut k = Qz::new(IntPoly::x());
    let mut degrees = vec![1usize];
    loop {
        let d = k.deg();
        let nd = n * d;
        if nd > NORM_DEGREE_CAP {
            return Err(ExactError::DegreeCapExceeded { degree: nd, cap: NORM_DEGREE_CAP });
        }
        let norm = (0..40)
            .map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 })
            .map(|s| norm_poly(&k, &fm, s))
            .find(|nrm| nrm.is_squarefree())
            .ok_or_else(|| ExactError::Unsupported("no squarefree norm found".into()))?;
        let fac = factor_with_cap(&norm, NORM_DEGREE_CAP)?;
        // Factor degrees of f over K, and the norm of a smallest nonlinear one.
        let mut over_k: Vec<(usize, &IntPoly)> = fac.factors.iter().map(|(g, _)| (g.deg() / d, g)).collect();
        over_k.sort_by_key(|(e, _)| *e);
        let nonlinear: Vec<&(usize, &IntPoly)> = over_k.iter().filter(|(e, _)| *e > 1).collect();
        match nonlinear.as_slice() {
            [] => break,
            // Adjoining one root of a lone quadratic splits it.
            [(2, _)] => {
                degrees.push(2 * d);
                return Ok(SplittingTower { order: 2 * d as u64, degrees });
            }
            [(_, g), ..] => {
                k = Qz::new((*g).clone());
                degrees.push(k.deg());
            }
        }
    }
    Ok(SplittingTower { order: k.deg() as u64, degrees })
}

/// A permutation of root indices: `p[i]` is the image of `i`.
pub type Perm = Vec<usize>;

pub fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a o b)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

pub fn symmetric_group(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p: Perm = (0..n).collect();
    fn rec(k: usize, p: &mut Perm, out: &mut Vec<Perm>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Permutations commuting with the fixed-point-free involution `conj` and
/// preserving each block of `blocks` (lists of indices closed under `conj`).
pub fn centralizer_of_involution(conj: &[usize], blocks: &[Vec<usize>]) -> Result<Vec<Perm>, ExactError> {
    let n = conj.len();
    let mut size: usize = 1;
    for b in blocks {
        let g = b.len() / 2;
        size = size.saturating_mul((1..=g).product::<usize>().saturating_mul(1 << g.min(60)));
    }
    if size > GROUP_CAP {
        return Err(ExactError::DegreeCapExceeded { degree: size, cap: GROUP_CAP });
    }
    let mut group: Vec<Perm> = vec![(0..n).collect()];
    for b in blocks {
        let reps: Vec<usize> = b.iter().copied().filter(|&i| i < conj[i]).collect();
        let g = reps.len();
        let mut local = Vec::new();
        for sigma in symmetric_group(g) {
            for flips in 0..(1usize << g) {
                let mut p: Perm = (0..n).collect();
                for (a, &ra) in reps.iter().enumerate() {
                    let target = reps[sigma[a]];
                    let (t, tc) = if flips >> a & 1 == 1 { (conj[target], target) } else { (target, conj[target]) };
                    p[ra] = t;
                    p[conj[ra]] = tc;
                }
                local.push(p);
            }
        }
        group = group.iter().flat_map(|h| local.iter().map(move |l| compose(l, h))).collect();
    }
    group.sort();
    group.dedup();
    Ok(group)
}

fn resolvent_values(roots: &[BallComplex], cands: &[Perm], c: &[i64]) -> Vec<BallComplex> {
    let prec = roots[0].prec();
    cands
        .iter()
        .map(|p| {
            p.iter().zip(c).fold(BallComplex::zero(prec), |acc, (&pi, &ci)| acc.add(&roots[pi].mul_int(ci)))
        })
        .collect()
}

/// Expands `prod (x - v_k)` and rounds every coefficient to the unique
/// integer it contains; `None` when some coefficient is not yet determined.
fn integer_product(vals: &[BallComplex]) -> Option<IntPoly> {
    let prec = vals[0].prec();
    let mut coeffs = vec![BallComplex::one(prec)];
    for v in vals {
        let mut next = vec![BallComplex::zero(prec); coeffs.len() + 1];
        for (i, a) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a);
            next[i] = next[i].sub(&a.mul(v));
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for b in coeffs {
        if !b.im.contains_zero() {
            return None;
        }
        out.push(b.re.unique_integer()?);
    }
    Some(IntPoly::new(out))
}

/// The Galois group of a monic squarefree `f` as a subset of `cands`
/// (which must be a group containing it), acting on the indices of `roots`.
///
/// `sigma` is in the result iff `r_i -> r_{sigma(i)}` extends to a field
/// automorphism.
pub fn galois_group(f: &IntPoly, roots: &[BallComplex], cands: &[Perm]) -> Result<Vec<Perm>, ExactError> {
    if !f.is_monic() {
        return Err(ExactError::NotMonic);
    }
    let n = f.deg();
    if roots.len() != n {
        return Err(ExactError::DimensionMismatch("root count differs from degree".into()));
    }
    if cands.len() > GROUP_CAP {
        return Err(ExactError::DegreeCapExceeded { degree: cands.len(), cap: GROUP_CAP });
    }
    if n <= 1 {
        return Ok(vec![(0..n).collect()]);
    }
    let id: Perm = (0..n).collect();
    let id_pos = cands.iter().position(|p| *p == id).ok_or_else(|| {
        ExactError::DimensionMismatch("candidate set must contain the identity".into())
    })?;
    let height_bits = f.root_bound_log2().max(1) as u32;
    // Deterministic coefficient choices for the linear form.
    let mut attempt = 0u64;
    loop {
        attempt += 1;
        if attempt > 64 {
            return Err(ExactError::Unsupported("no squarefree resolvent found".into()));
        }
        let c: Vec<i64> = (0..n as u64).map(|i| ((i * 7 + attempt * 13 + i * i * attempt) % 11) as i64 - 5).collect();
        let cmax = c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(1).max(1);
        let per_value = height_bits + cmax.ilog2() + 2 + (n as u32).ilog2() + 1;
        let mut prec = (cands.len() as u32) * per_value + 64;
        let mut resolvent = None;
        for _ in 0..6 {
            let rs = refine_roots(f, roots, prec)?;
            let vals = resolvent_values(&rs, cands, &c);
            if let Some(r) = integer_product(&vals) {
                resolvent = Some((r, rs));
                break;
            }
            prec *= 2;
        }
        let Some((r, _)) = resolvent else { continue };
        if !r.is_squarefree() {
            continue;
        }
        let fac = factor_with_cap(&r, GROUP_CAP)?;
        let mut prec_check = 128u32.max(prec / 4);
        for _ in 0..8 {
            let rs = refine_roots(f, roots, prec_check)?;
            let vals = resolvent_values(&rs, cands, &c);
            let owner: Vec<&IntPoly> = fac.factors.iter().map(|(g, _)| g).collect();
            let Some(g) = owner.iter().find(|g| g.eval_ball(&vals[id_pos]).contains_zero()) else {
                prec_check *= 2;
                continue;
            };
            let hits: Vec<usize> = (0..cands.len()).filter(|&i| g.eval_ball(&vals[i]).contains_zero()).collect();
            // Every non-root excludes zero once the count matches the degree.
            if hits.len() == g.deg() && owner.iter().filter(|h| h.eval_ball(&vals[id_pos]).contains_zero()).count() == 1 {
                let mut out: Vec<Perm> = hits.into_iter().map(|i| cands[i].clone()).collect();
                out.sort();
                return Ok(out);
            }
            prec_check *= 2;
        }
        return Err(ExactError::Unsupported("resolvent factors could not be separated".into()));
    }
}

/// Coefficient bits, used to size precisions.
pub fn coeff_bits(f: &IntPoly) -> u64 {
    f.coeffs().iter().map(|c| c.abs().bits()).max().unwrap_or(0)
}

/// Order of a group of permutations given as a list (its length); kept as a
/// helper for callers that check closure.
pub fn is_closed(group: &[Perm]) -> bool {
    let set: std::collections::BTreeSet<&Perm> = group.iter().collect();
    group.iter().all(|a| group.iter().all(|b| set.contains(&compose(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::roots::isolate_roots;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn large_groups_from_frobenius() {
        let order = |c: &[i64]| splitting_field_order(&IntPoly::from_i64(c)).unwrap();
        assert_eq!(order(&[-1, -1, 0, 0, 0, 1]), 120);
        assert_eq!(order(&[16, 20, 0, 0, 0, 1]), 60);
        assert_eq!(order(&[-1, -1, 0, 0, 0, 0, 0, 1]), 5040);
        assert_eq!(order(&[-1, -1, 0, 0, 0, 0, 0, 0, 1]), 40320);
        assert_eq!(order(&[-1, -1, 0, 0, 0, 3]), 120);
        // Small groups are left to the tower.
        assert!(large_group_order(&IntPoly::from_i64(&[-2, 0, 0, 0, 0, 1])).is_none());
        let ty = frobenius_cycle_type(&IntPoly::from_i64(&[-1, -1, 0, 0, 0, 1]), 7).unwrap();
        assert_eq!(ty.iter().sum::<usize>(), 5);
        assert!(frobenius_cycle_type(&IntPoly::from_i64(&[0, 0, 1]), 3).is_none());
    }

    #[test]
    fn small_orders() {
        assert_eq!(splitting_field_order(&p(&[1, 0, 1])).unwrap(), 2);
        assert_eq!(splitting_field_order(&p(&[-2, 0, 0, 1])).unwrap(), 6);
        assert_eq!(splitting_field_order(&p(&[1, 1, 1, 1, 1])).unwrap(), 4);
        assert_eq!(splitting_field_order(&p(&[-1, 0, 1])).unwrap(), 1);
        // x^4 + 5x^2 + 2: dihedral of order 8.
        assert_eq!(splitting_field_order(&p(&[2, 0, 5, 0, 1])).unwrap(), 8);
        // x^4 - 10x^2 + 1: Klein four.
        assert_eq!(splitting_field_order(&p(&[1, 0, -10, 0, 1])).unwrap(), 4);
    }

    #[test]
    fn symmetric_quartic() {
        assert_eq!(splitting_field_order(&p(&[-1, -1, 0, 0, 1])).unwrap(), 24);
        assert_eq!(splitting_tower(&p(&[-1, -1, 0, 0, 1])).unwrap().order, 24);
        // A_4 by the tower and by Frobenius elements.
        assert_eq!(splitting_tower(&p(&[12, 8, 0, 0, 1])).unwrap().order, 12);
        assert_eq!(splitting_field_order(&p(&[12, 8, 0, 0, 1])).unwrap(), 12);
    }

    #[test]
    fn non_monic_input() {
        // 2x^2 - 1 splits over Q(sqrt 2).
        assert_eq!(splitting_field_order(&p(&[-1, 0, 2])).unwrap(), 2);
        assert_eq!(splitting_field_order(&p(&[1, 0, 0, 2])).unwrap(), 6);
    }

    #[test]
    fn caps_and_errors() {
        assert!(matches!(splitting_field_order(&p(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 1])), Err(ExactError::DegreeCapExceeded { .. })));
        assert_eq!(splitting_field_order(&p(&[1, 2, 1])).unwrap_err(), ExactError::NotSquarefree);
    }

    #[test]
    fn cube_root_two_group_by_resolvent() {
        let f = p(&[-2, 0, 0, 1]);
        let roots = isolate_roots(&f, 64).unwrap();
        let g = galois_group(&f, &roots, &symmetric_group(3)).unwrap();
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn cyclotomic_group_is_cyclic() {
        let f = p(&[1, 1, 1, 1, 1]);
        let roots = isolate_roots(&f, 64).unwrap();
        let g = galois_group(&f, &roots, &symmetric_group(4)).unwrap();
        assert_eq!(g.len(), 4);
        assert!(is_closed(&g));
        // zeta -> zeta^2 maps root k (zeta^(k+1)) to zeta^(2k+2).
        let sq: Perm = (0..4).map(|k| (2 * (k + 1) % 5) - 1).collect();
        assert!(g.contains(&sq));
    }

    #[test]
    fn hyperoctahedral_sizes() {
        let conj = vec![3, 2, 1, 0];
        let w = centralizer_of_involution(&conj, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(w.len(), 8);
        assert!(is_closed(&w));
        let conj6 = vec![5, 4, 3, 2, 1, 0];
        assert_eq!(centralizer_of_involution(&conj6, &[(0..6).collect()]).unwrap().len(), 48);
        let two = centralizer_of_involution(&conj, &[vec![0, 3], vec![1, 2]]).unwrap();
        assert_eq!(two.len(), 4);
    }

    #[test]
    fn routes_agree_on_quartics() {
        for c in [[2i64, 0, 5, 0, 1], [1, 0, -10, 0, 1], [1, 1, 1, 1, 1], [-1, -1, 0, 0, 1], [5, 0, 5, 0, 1]] {
            let f = p(&c);
            let roots = isolate_roots(&f, 64).unwrap();
            let g = galois_group(&f, &roots, &symmetric_group(4)).unwrap();
            assert_eq!(g.len() as u64, splitting_tower(&f).unwrap().order, "{f}");
            assert_eq!(g.len() as u64, splitting_field_order(&f).unwrap(), "{f}");
        }
    }
}
