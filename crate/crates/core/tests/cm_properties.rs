use cmpl_core::cm::{galois_orbit_product, relation_lattice, CmField, CmType};
use cmpl_core::exact::IntPoly;
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

fn field(c: &[i64]) -> Arc<CmField> {
    Arc::new(CmField::new(&IntPoly::from_i64(c)).unwrap())
}

fn ty(f: &Arc<CmField>, phi: &[usize]) -> CmType {
    CmType::new(f.clone(), phi.to_vec()).unwrap()
}

/// Test data: single fields and products, all with g <= 2.
fn cases() -> Vec<Vec<CmType>> {
    let qi = field(&[1, 0, 1]);
    let q3 = field(&[1, 1, 1]);
    let q2 = field(&[2, 0, 1]);
    let z5 = field(&[1, 1, 1, 1, 1]);
    let weyl = field(&[2, 0, 5, 0, 1]);
    let biquad = field(&[1, 0, 0, 0, 1]);
    let mut out = vec![
        vec![ty(&qi, &[0])],
        vec![ty(&qi, &[0]), ty(&qi, &[0])],
        vec![ty(&qi, &[0]), ty(&qi, &[1])],
        vec![ty(&qi, &[0]), ty(&q3, &[0])],
        vec![ty(&q2, &[1]), ty(&q3, &[0])],
    ];
    for f in [&z5, &weyl, &biquad] {
        for t in f.cm_types() {
            out.push(vec![t]);
        }
    }
    out
}

fn boxed(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-r..=r).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// A preimage of `(a_0; a)` in `Z^Sigma` under `e_sigma -> t_sigma`,
/// `e_{c sigma} -> L t_sigma^-1`.
fn preimage(ts: &[CmType], a: &[i64]) -> Vec<i64> {
    let width: usize = ts.iter().map(|t| t.field().degree()).sum();
    let mut v = vec![0i64; width];
    let (mut col, mut sym) = (0, 1);
    for t in ts {
        for (j, &s) in t.phi().iter().enumerate() {
            v[col + s] += a[sym + j];
        }
        col += t.field().degree();
        sym += t.g();
    }
    // L^a0 = (e_sigma + e_{c sigma})^a0 for the first pair.
    let (s0, c0) = (ts[0].phi()[0], ts[0].field().conjugation()[ts[0].phi()[0]]);
    v[s0] += a[0];
    v[c0] += a[0];
    v
}

#[test]
fn lattice_matches_orthogonality_oracle() {
    for ts in cases() {
        let g: usize = ts.iter().map(|t| t.g()).sum();
        let r = relation_lattice(&ts).unwrap();
        let orbit = galois_orbit_product(&ts).unwrap();
        for a in boxed(g + 1, 3) {
            let v = preimage(&ts, &a);
            let orth = (0..orbit.nrows()).all(|i| {
                orbit.row(i).iter().zip(&v).map(|(x, &y)| x * BigInt::from(y)).sum::<BigInt>().is_zero()
            });
            let big: Vec<BigInt> = a.iter().map(|&x| x.into()).collect();
            assert_eq!(r.contains(&big), orth, "{a:?} for {:?}", ts.iter().map(|t| t.to_json()).collect::<Vec<_>>());
        }
    }
}

#[test]
fn rank_identity() {
    for ts in cases() {
        let r = relation_lattice(&ts).unwrap();
        assert_eq!(r.rank(), r.g() + 1 - r.mt_dim());
    }
}

#[test]
fn conjugate_type_lattice() {
    for ts in cases().into_iter().filter(|ts| ts.len() == 1) {
        let t = &ts[0];
        let c = t.conjugate_type();
        let (r, rc) = (relation_lattice(&ts).unwrap(), relation_lattice(std::slice::from_ref(&c)).unwrap());
        assert_eq!(r.mt_dim(), rc.mt_dim());
        let conj = t.field().conjugation();
        // theta'_j ~ L / theta_k where phi'_j = c(phi_k).
        let k_of: Vec<usize> = c.phi().iter().map(|&s| t.phi().iter().position(|&p| conj[p] == s).unwrap()).collect();
        for b in boxed(t.g() + 1, 3) {
            let mut a = vec![0i64; t.g() + 1];
            a[0] = b[0] + b[1..].iter().sum::<i64>();
            for (j, &k) in k_of.iter().enumerate() {
                a[k + 1] = -b[j + 1];
            }
            let bb: Vec<BigInt> = b.iter().map(|&x| x.into()).collect();
            let aa: Vec<BigInt> = a.iter().map(|&x| x.into()).collect();
            assert_eq!(rc.contains(&bb), r.contains(&aa), "{b:?}");
        }
    }
}

#[test]
fn products_only_add_relations() {
    for ts in cases().into_iter().filter(|ts| ts.len() == 2) {
        let whole = relation_lattice(&ts).unwrap();
        let first = relation_lattice(&ts[..1]).unwrap();
        assert!(first.mt_dim() <= whole.mt_dim());
        for row in first.basis().row_vecs() {
            let mut v = row.clone();
            v.resize(whole.g() + 1, BigInt::zero());
            assert!(whole.contains(&v));
        }
    }
}

#[test]
fn known_lattices() {
    let qi = field(&[1, 0, 1]);
    assert_eq!(relation_lattice(&[ty(&qi, &[0])]).unwrap().rank(), 0);
    let z5 = field(&[1, 1, 1, 1, 1]);
    assert_eq!(relation_lattice(&[ty(&z5, &[0, 1])]).unwrap().rank(), 0);
    let two = relation_lattice(&[ty(&qi, &[0]), ty(&qi, &[0])]).unwrap();
    assert_eq!(two.rank(), 1);
    assert!(two.contains(&[0.into(), 1.into(), (-1).into()]));
    assert!(!two.contains(&[0.into(), 1.into(), 0.into()]));
}
