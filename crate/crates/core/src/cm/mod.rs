//! CM fields, CM types, Mumford-Tate ranks and monomial relation lattices.
//!
//! For a list of CM types (a product of CM abelian varieties) the embedding
//! set `Sigma` is the disjoint union of the embeddings of each factor. The
//! Galois group of the compositum acts on `Sigma`; the rank of the orbit of
//! the indicator vectors `mu_Phi` is the Mumford-Tate dimension, and the
//! integer vectors orthogonal to the orbit, read through the dictionary
//! `e_sigma -> t_sigma`, `e_{c sigma} -> L / t_sigma`, are the monomial
//! relations among `L = 2 pi i` and the periods.

mod field;
mod lattice;

pub use field::{is_cm_field, CmField, CmType, TotallyRealSubfield};
pub use lattice::RelationLattice;

use crate::exact::galois::{centralizer_of_involution, galois_group, splitting_field_order};
use crate::exact::{ExactError, IntMatrix, IntPoly};
use crate::ball::BallComplex;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::sync::Arc;
use thiserror::Error;

/// Largest field degree accepted by [`CmField::new`].
pub const MAX_FIELD_DEGREE: usize = 16;
/// Largest field degree for Galois computations.
pub const GALOIS_DEGREE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("polynomial has odd degree")]
    OddDegree,
    #[error("not a CM field: {0}")]
    NotCm(String),
    #[error("invalid CM type: {0}")]
    InvalidType(String),
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn cap_error(e: ExactError) -> CmError {
    match e {
        ExactError::DegreeCapExceeded { degree, cap } => CmError::DegreeCapExceeded { degree, cap },
        e => CmError::Exact(e),
    }
}

/// The Galois orbit of `(mu_Phi1, ..., mu_Phir)` on the disjoint union of
/// embeddings, one distinct 0/1 row per orbit element, in order of first
/// appearance over the sorted group.
pub fn galois_orbit_product(ts: &[CmType]) -> Result<IntMatrix, CmError> {
    if ts.is_empty() {
        return Err(CmError::InvalidType("at least one CM type is required".into()));
    }
    // Distinct fields, their offsets in the concatenated root list.
    let mut fields: Vec<Arc<CmField>> = Vec::new();
    for t in ts {
        if t.field().degree() > GALOIS_DEGREE_CAP {
            return Err(CmError::DegreeCapExceeded { degree: t.field().degree(), cap: GALOIS_DEGREE_CAP });
        }
        if !fields.iter().any(|f| **f == **t.field()) {
            fields.push(t.field().clone());
        }
    }
    let mut offsets = Vec::with_capacity(fields.len());
    let mut poly = IntPoly::one();
    let mut roots: Vec<BallComplex> = Vec::new();
    let mut conj: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();
    for f in &fields {
        let o = roots.len();
        offsets.push(o);
        poly = poly.mul(f.min_poly());
        roots.extend(f.field().embeddings().iter().cloned());
        conj.extend(f.conjugation().iter().map(|&c| c + o));
        blocks.push((o..o + f.degree()).collect::<Vec<usize>>());
    }
    let w = centralizer_of_involution(&conj, &blocks).map_err(cap_error)?;
    let group = galois_group(&poly, &roots, &w).map_err(cap_error)?;
    let width: usize = ts.iter().map(|t| t.field().degree()).sum();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for pi in &group {
        let mut row = Vec::with_capacity(width);
        for t in ts {
            let fi = fields.iter().position(|f| **f == **t.field()).expect("field registered");
            let o = offsets[fi];
            let n = t.field().degree();
            let mut local = vec![0i64; n];
            for &s in t.phi() {
                local[pi[o + s] - o] = 1;
            }
            row.extend(local.into_iter().map(BigInt::from));
        }
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    Ok(IntMatrix::from_rows(rows))
}

pub fn galois_orbit_mu(t: &CmType) -> Result<IntMatrix, CmError> {
    galois_orbit_product(std::slice::from_ref(t))
}

pub fn mt_dimension(t: &CmType) -> Result<usize, CmError> {
    Ok(galois_orbit_mu(t)?.rank())
}

pub fn mt_dimension_product(ts: &[CmType]) -> Result<usize, CmError> {
    Ok(galois_orbit_product(ts)?.rank())
}

/// Pushes `v` in `Z^Sigma` to exponents `(a_0; a_1..a_g)`: `e_sigma -> t_sigma`
/// and `e_{c sigma} -> L t_sigma^-1` for `sigma` in each `Phi`, with the
/// symbols numbered through the types in order.
pub fn push_forward(ts: &[CmType], v: &[BigInt]) -> Vec<BigInt> {
    let g: usize = ts.iter().map(|t| t.g()).sum();
    let mut out = vec![BigInt::zero(); g + 1];
    let (mut col, mut sym) = (0usize, 1usize);
    for t in ts {
        let conj = t.field().conjugation();
        for (j, &s) in t.phi().iter().enumerate() {
            out[sym + j] += &v[col + s];
            out[0] += &v[col + conj[s]];
            out[sym + j] -= &v[col + conj[s]];
        }
        col += t.field().degree();
        sym += t.g();
    }
    out
}

/// The lattice of monomial relations predicted by the Mumford-Tate torus.
pub fn relation_lattice(ts: &[CmType]) -> Result<RelationLattice, CmError> {
    let m = galois_orbit_product(ts)?;
    check_pairing(ts, &m)?;
    let g: usize = ts.iter().map(|t| t.g()).sum();
    let mt = m.rank();
    let kernel = m.kernel_lattice();
    let image: Vec<Vec<BigInt>> = kernel.row_vecs().iter().map(|r| push_forward(ts, r)).collect();
    let basis = IntMatrix::from_rows_with_cols(image, g + 1);
    RelationLattice::new(g, basis, mt).map_err(CmError::Invariant)
}

/// `<e_sigma + e_{c sigma}, rho mu> = 1` for every orbit row and pair.
fn check_pairing(ts: &[CmType], m: &IntMatrix) -> Result<(), CmError> {
    for r in 0..m.nrows() {
        let row = m.row(r);
        let mut col = 0;
        for t in ts {
            for (a, b) in t.field().pairs() {
                if &row[col + a] + &row[col + b] != BigInt::one() {
                    return Err(CmError::Invariant(format!("pairing relation fails on orbit row {r}")));
                }
            }
            col += t.field().degree();
        }
    }
    Ok(())
}

/// Classes of the products `theta_j theta_j'` modulo a relation lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticReport {
    /// Classes of 1-based index pairs `(j, j')`, `j <= j'`.
    pub classes: Vec<Vec<(usize, usize)>>,
    pub predicted_dim: usize,
    /// Consecutive members of each class: `theta_j theta_j' / theta_k theta_k'` algebraic.
    pub elementary: Vec<((usize, usize), (usize, usize))>,
}

impl QuadraticReport {
    pub fn to_json(&self) -> Value {
        let pair = |p: &(usize, usize)| json!([p.0, p.1]);
        json!({
            "classes": self.classes.iter().map(|c| c.iter().map(pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "predicted_dim": self.predicted_dim,
            "elementary": self.elementary.iter().map(|(a, b)| json!([pair(a), pair(b)])).collect::<Vec<_>>(),
        })
    }
}

pub fn quadratic_analysis_for(r: &RelationLattice) -> QuadraticReport {
    let g = r.g();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let exps = |(j, k): (usize, usize)| {
        let mut v = vec![BigInt::zero(); g + 1];
        v[j] += 1;
        v[k] += 1;
        v
    };
    for j in 1..=g {
        for k in j..=g {
            let e = exps((j, k));
            let found = classes.iter_mut().find(|c| {
                let d: Vec<BigInt> = e.iter().zip(exps(c[0])).map(|(a, b)| a - b).collect();
                r.contains(&d)
            });
            match found {
                Some(c) => c.push((j, k)),
                None => classes.push(vec![(j, k)]),
            }
        }
    }
    let elementary = classes.iter().flat_map(|c| c.windows(2).map(|w| (w[0], w[1]))).collect();
    QuadraticReport { predicted_dim: classes.len(), classes, elementary }
}

pub fn quadratic_analysis(ts: &[CmType]) -> Result<QuadraticReport, CmError> {
    Ok(quadratic_analysis_for(&relation_lattice(ts)?))
}

/// Weyl (Galois generic): the Galois closure has order `2^g g!`.
pub fn weyl_check(e: &CmField) -> Result<bool, CmError> {
    if e.degree() > GALOIS_DEGREE_CAP {
        return Err(CmError::DegreeCapExceeded { degree: e.degree(), cap: GALOIS_DEGREE_CAP });
    }
    let g = e.g() as u64;
    let order = splitting_field_order(e.min_poly()).map_err(cap_error)?;
    Ok(order == (1u64 << g) * (1..=g).product::<u64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn field(c: &[i64]) -> Arc<CmField> {
        Arc::new(is_cm_field(&p(c)).unwrap())
    }

    fn rows(m: &IntMatrix) -> Vec<Vec<i64>> {
        let mut r: Vec<Vec<i64>> =
            m.row_vecs().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        r.sort();
        r
    }

    #[test]
    fn recognition() {
        let qi = field(&[1, 0, 1]);
        assert_eq!(qi.g(), 1);
        assert_eq!(qi.conjugation(), &[1, 0]);
        let z5 = field(&[1, 1, 1, 1, 1]);
        assert_eq!(z5.g(), 2);
        assert_eq!(z5.conjugation(), &[3, 2, 1, 0]);
        assert_eq!(is_cm_field(&p(&[-2, 0, 0, 1])).unwrap_err(), CmError::OddDegree);
        assert!(matches!(is_cm_field(&p(&[-2, 0, 1])), Err(CmError::NotCm(_))));
        // Totally imaginary but not CM.
        assert!(matches!(is_cm_field(&p(&[1, 1, 0, 0, 1])), Err(CmError::NotCm(_))));
    }

    #[test]
    fn conjugation_is_exact() {
        let e = field(&[2, 0, 5, 0, 1]);
        let x = e.field().generator();
        let cx = e.conjugate(&x);
        assert_eq!(e.conjugate(&cx), x);
        // The fixed field is Q(sqrt 17).
        let f = e.totally_real_subfield().unwrap();
        assert_eq!(f.field.degree(), 2);
        assert_eq!(e.conjugate(&f.generator), f.generator);
        let d = f.field.min_poly();
        let disc = d.coeff(1) * d.coeff(1) - BigInt::from(4) * d.coeff(0);
        // Squarefree part of the discriminant is 17.
        let mut s = disc.clone();
        for q in 2..100i64 {
            while (&s % (q * q)).is_zero() {
                s /= q * q;
            }
        }
        assert_eq!(s, BigInt::from(17));
    }

    #[test]
    fn types() {
        assert_eq!(field(&[1, 0, 1]).cm_types().len(), 2);
        assert_eq!(field(&[1, 1, 1, 1, 1]).cm_types().len(), 4);
        // Q(zeta_7) has g = 3.
        assert_eq!(field(&[1, 1, 1, 1, 1, 1, 1]).cm_types().len(), 8);
        let qi = field(&[1, 0, 1]);
        assert!(CmType::new(qi.clone(), vec![0, 1]).is_err());
        assert!(CmType::new(qi, vec![2]).is_err());
    }

    #[test]
    fn orbits() {
        let qi = field(&[1, 0, 1]);
        let t = CmType::new(qi, vec![0]).unwrap();
        assert_eq!(rows(&galois_orbit_mu(&t).unwrap()), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(mt_dimension(&t).unwrap(), 2);
        let z5 = field(&[1, 1, 1, 1, 1]);
        let t5 = CmType::new(z5, vec![0, 1]).unwrap();
        let mut expect = vec![vec![1, 1, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 1], vec![1, 0, 1, 0]];
        expect.sort();
        assert_eq!(rows(&galois_orbit_mu(&t5).unwrap()), expect);
        assert_eq!(mt_dimension(&t5).unwrap(), 3);
        let c = t5.conjugate_type();
        let conj: Vec<Vec<i64>> = expect.iter().map(|r| (0..4).map(|i| r[[3, 2, 1, 0][i]]).collect()).collect();
        let mut conj = conj;
        conj.sort();
        assert_eq!(rows(&galois_orbit_mu(&c).unwrap()), conj);
    }

    #[test]
    fn lattices() {
        let qi = field(&[1, 0, 1]);
        let t = CmType::new(qi, vec![0]).unwrap();
        assert_eq!(relation_lattice(std::slice::from_ref(&t)).unwrap().rank(), 0);
        let z5 = field(&[1, 1, 1, 1, 1]);
        let t5 = CmType::new(z5, vec![0, 1]).unwrap();
        assert_eq!(relation_lattice(&[t5]).unwrap().rank(), 0);
        let two = relation_lattice(&[t.clone(), t.clone()]).unwrap();
        assert_eq!(two.mt_dim(), 2);
        assert_eq!(rows(two.basis()), vec![vec![0, 1, -1]]);
    }

    #[test]
    fn quadratic_reports() {
        let qi = field(&[1, 0, 1]);
        let t = CmType::new(qi, vec![0]).unwrap();
        let one = quadratic_analysis(std::slice::from_ref(&t)).unwrap();
        assert_eq!(one.classes, vec![vec![(1, 1)]]);
        assert!(one.elementary.is_empty());
        let z5 = field(&[1, 1, 1, 1, 1]);
        let t5 = CmType::new(z5, vec![0, 1]).unwrap();
        assert_eq!(quadratic_analysis(&[t5]).unwrap().predicted_dim, 3);
        let two = quadratic_analysis(&[t.clone(), t]).unwrap();
        assert_eq!(two.predicted_dim, 1);
        assert_eq!(two.elementary, vec![((1, 1), (1, 2)), ((1, 2), (2, 2))]);
    }

    #[test]
    fn weyl() {
        assert!(weyl_check(&field(&[1, 0, 1])).unwrap());
        assert!(weyl_check(&field(&[1, 1, 1])).unwrap());
        assert!(!weyl_check(&field(&[1, 1, 1, 1, 1])).unwrap());
        assert!(weyl_check(&field(&[2, 0, 5, 0, 1])).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let z5 = field(&[1, 1, 1, 1, 1]);
        let t5 = CmType::new(z5, vec![0, 1]).unwrap();
        assert_eq!(CmType::from_json(&t5.to_json()).unwrap(), t5);
        let v = json!({"min_poly": "x^2+1", "phi": [1]});
        assert_eq!(CmType::from_json(&v).unwrap().phi(), &[1]);
    }
}
