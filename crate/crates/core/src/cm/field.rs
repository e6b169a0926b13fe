//! CM fields and CM types.

use super::CmError;
use crate::ball::BallComplex;
use crate::exact::factor::is_irreducible;
use crate::exact::{AlgebraicNumber, IntPoly, NumberField, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::sync::Arc;

/// `p(a)` computed in the field of `a`.
pub(crate) fn eval_at_element(p: &RatPoly, a: &AlgebraicNumber) -> AlgebraicNumber {
    let k = a.parent();
    let mut acc = AlgebraicNumber::from_int(k, 0).at_embedding(a.embedding_index()).expect("valid index");
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(a).add(&AlgebraicNumber::from_rational(k, c.clone()).at_embedding(a.embedding_index()).expect("valid index"));
    }
    acc
}

/// A CM field `Q[x]/(f)` with its complex conjugation, both as the
/// automorphism `x -> h(x)` and as a permutation of embedding indices.
#[derive(Clone, Debug)]
pub struct CmField {
    field: Arc<NumberField>,
    conj_poly: RatPoly,
    conjugation: Vec<usize>,
}

impl PartialEq for CmField {
    fn eq(&self, o: &Self) -> bool {
        self.field.min_poly() == o.field.min_poly()
    }
}

impl Eq for CmField {}

/// Coefficients of `P(t) = sum_k conj(z_k) f(t) / (t - z_k)`, which satisfies
/// `P(z_j) = conj(z_j) f'(z_j)`; integral when conjugation is an automorphism.
fn conjugation_numerator(f: &IntPoly, roots: &[BallComplex]) -> Vec<BallComplex> {
    let n = f.deg();
    let prec = roots[0].prec();
    let mut out = vec![BallComplex::zero(prec); n];
    for z in roots {
        // Synthetic division of f by (t - z).
        let mut q = vec![BallComplex::zero(prec); n];
        let mut acc = BallComplex::from_bigint(&f.coeff(n), prec);
        for i in (0..n).rev() {
            q[i] = acc.clone();
            acc = acc.mul(z).add(&BallComplex::from_bigint(&f.coeff(i), prec));
        }
        let cz = z.conj();
        for i in 0..n {
            out[i] = out[i].add(&q[i].mul(&cz));
        }
    }
    out
}

impl CmField {
    /// Recognizes a CM field and constructs its conjugation.
    pub fn new(f: &IntPoly) -> Result<Self, CmError> {
        if f.is_zero() || !f.is_monic() || f.deg() == 0 {
            return Err(CmError::Exact(crate::exact::ExactError::NotMonic));
        }
        if f.deg() % 2 == 1 {
            return Err(CmError::OddDegree);
        }
        if f.deg() > super::MAX_FIELD_DEGREE {
            return Err(CmError::DegreeCapExceeded { degree: f.deg(), cap: super::MAX_FIELD_DEGREE });
        }
        if !is_irreducible(f)? {
            return Err(CmError::Exact(crate::exact::ExactError::ReduciblePolynomial));
        }
        if f.count_real_roots() > 0 {
            return Err(CmError::NotCm("the field has a real embedding".into()));
        }
        let field = Arc::new(NumberField::new(f, 0)?);
        let n = f.deg();
        let mut prec = 128u32;
        let numer = loop {
            let roots = field.embeddings_at(prec)?;
            let cs = conjugation_numerator(f, &roots);
            let mut ints = Vec::with_capacity(n);
            let mut undecided = false;
            for c in &cs {
                if !c.im.contains_zero() {
                    return Err(CmError::NotCm("conjugation is not defined over Q".into()));
                }
                match c.re.unique_integer() {
                    Some(k) => ints.push(k),
                    None => {
                        if c.re.rad().lt(&crate::ball::Mag::pow2(-2)) {
                            return Err(CmError::NotCm("conjugation is not an automorphism".into()));
                        }
                        undecided = true;
                        break;
                    }
                }
            }
            if !undecided {
                break IntPoly::new(ints);
            }
            prec *= 2;
            if prec > 1 << 14 {
                return Err(CmError::NotCm("conjugation numerator could not be certified".into()));
            }
        };
        let k = &field;
        let fp = AlgebraicNumber::from_poly(k, &f.derivative().to_rat(), 0);
        let h = AlgebraicNumber::from_poly(k, &numer.to_rat(), 0).mul(&fp.inv().expect("f is squarefree"));
        let fr = f.to_rat();
        if !eval_at_element(&fr, &h).is_zero() {
            return Err(CmError::NotCm("candidate conjugation is not a root of f".into()));
        }
        let hp = h.as_poly();
        if eval_at_element(&hp, &h) != k.generator() || h == k.generator() {
            return Err(CmError::NotCm("candidate conjugation is not an involution".into()));
        }
        // h(z_k) = conj(z_k) at every embedding, certified by ball separation.
        let roots = field.embeddings_at(128)?;
        let mut conjugation = vec![0usize; n];
        for (i, z) in roots.iter().enumerate() {
            let v = h.eval_at(i, 128)?;
            let hits: Vec<usize> = (0..n).filter(|&j| roots[j].overlaps(&v)).collect();
            let conj_hits: Vec<usize> = (0..n).filter(|&j| roots[j].overlaps(&z.conj())).collect();
            if hits.len() != 1 || hits != conj_hits || hits[0] == i {
                return Err(CmError::NotCm("conjugation does not commute with the embeddings".into()));
            }
            conjugation[i] = hits[0];
        }
        Ok(CmField { field, conj_poly: hp, conjugation })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn min_poly(&self) -> &IntPoly {
        self.field.min_poly()
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn g(&self) -> usize {
        self.field.degree() / 2
    }

    /// `conjugation()[i]` is the index of the conjugate of embedding `i`.
    pub fn conjugation(&self) -> &[usize] {
        &self.conjugation
    }

    /// `h` with `conj(x) = h(x)` in `Q[x]/(f)`.
    pub fn conjugation_poly(&self) -> &RatPoly {
        &self.conj_poly
    }

    /// Complex conjugation applied to an element.
    pub fn conjugate(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        let h = AlgebraicNumber::from_poly(&self.field, &self.conj_poly, a.embedding_index());
        eval_at_element(&a.as_poly(), &h)
    }

    /// Conjugate pairs `(i, c(i))` with `i < c(i)`, in increasing order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.degree()).filter(|&i| i < self.conjugation[i]).map(|i| (i, self.conjugation[i])).collect()
    }

    /// The maximal totally real subfield, as a field generated by an element
    /// fixed by conjugation.
    pub fn totally_real_subfield(&self) -> Result<TotallyRealSubfield, CmError> {
        let k = &self.field;
        let g = self.g();
        let x = k.generator();
        // Traces a + c(a) of powers span the fixed field.
        let traces: Vec<AlgebraicNumber> =
            (1..self.degree()).map(|e| { let a = x.pow(e as u32); a.add(&self.conjugate(&a)) }).collect();
        let mut candidates: Vec<AlgebraicNumber> = vec![x.mul(&self.conjugate(&x))];
        candidates.extend(traces.iter().cloned());
        for (i, a) in traces.iter().enumerate() {
            for b in traces.iter().skip(i + 1) {
                for m in 1..=3i64 {
                    candidates.push(a.add(&b.scale(&BigRational::from_integer(BigInt::from(m)))));
                }
            }
        }
        for c in candidates {
            let mp = c.minpoly();
            if mp.deg() == g {
                let v = c.eval_at(0, 128)?;
                let rf = NumberField::new(&mp, 0)?;
                let idx = (0..g)
                    .find(|&i| rf.embeddings()[i].overlaps(&v))
                    .ok_or_else(|| CmError::Invariant("real subfield embedding not found".into()))?;
                let field = NumberField::new(&mp, idx)?;
                return Ok(TotallyRealSubfield { field, generator: c });
            }
        }
        Err(CmError::Invariant("no generator of the totally real subfield found".into()))
    }

    /// All `2^g` CM types: bit `k` of the index chooses `c(i_k)` over `i_k`
    /// for the `k`-th conjugate pair.
    pub fn cm_types(self: &Arc<Self>) -> Vec<CmType> {
        let pairs = self.pairs();
        (0..1usize << pairs.len())
            .map(|mask| {
                let mut phi: Vec<usize> =
                    pairs.iter().enumerate().map(|(k, &(a, b))| if mask >> k & 1 == 1 { b } else { a }).collect();
                phi.sort_unstable();
                CmType { field: self.clone(), phi }
            })
            .collect()
    }
}

/// The fixed field of conjugation and the element of `E` generating it.
#[derive(Clone, Debug)]
pub struct TotallyRealSubfield {
    pub field: NumberField,
    pub generator: AlgebraicNumber,
}

pub fn is_cm_field(f: &IntPoly) -> Result<CmField, CmError> {
    CmField::new(f)
}

/// A choice of one embedding from each conjugate pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmType {
    field: Arc<CmField>,
    phi: Vec<usize>,
}

impl CmType {
    pub fn new(field: Arc<CmField>, mut phi: Vec<usize>) -> Result<Self, CmError> {
        phi.sort_unstable();
        let n = field.degree();
        if phi.len() != field.g() || phi.iter().any(|&i| i >= n) {
            return Err(CmError::InvalidType(format!("a CM type needs {} indices below {n}", field.g())));
        }
        if phi.windows(2).any(|w| w[0] == w[1]) || phi.iter().any(|&i| phi.contains(&field.conjugation()[i])) {
            return Err(CmError::InvalidType("type contains a conjugate pair".into()));
        }
        Ok(CmType { field, phi })
    }

    pub fn field(&self) -> &Arc<CmField> {
        &self.field
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn g(&self) -> usize {
        self.field.g()
    }

    /// `c o Phi`.
    pub fn conjugate_type(&self) -> CmType {
        let mut phi: Vec<usize> = self.phi.iter().map(|&i| self.field.conjugation()[i]).collect();
        phi.sort_unstable();
        CmType { field: self.field.clone(), phi }
    }

    /// Indicator vector of `Phi` on the embeddings.
    pub fn mu(&self) -> Vec<i64> {
        (0..self.field.degree()).map(|i| i64::from(self.phi.contains(&i))).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({"min_poly": crate::exact::poly_to_json(self.field.min_poly()), "phi": self.phi})
    }

    pub fn from_json(v: &Value) -> Result<Self, CmError> {
        let p = v.get("min_poly").ok_or_else(|| CmError::Parse("missing min_poly".into()))?;
        let f = match p {
            Value::String(s) => crate::exact::parse_poly(s),
            _ => crate::exact::poly_from_json(p),
        }
        .map_err(CmError::Parse)?;
        let phi = v
            .get("phi")
            .and_then(Value::as_array)
            .ok_or_else(|| CmError::Parse("missing phi array".into()))?
            .iter()
            .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| CmError::Parse("phi entries must be indices".into())))
            .collect::<Result<Vec<_>, _>>()?;
        if f.degree() > super::MAX_FIELD_DEGREE as isize {
            return Err(CmError::DegreeCapExceeded { degree: f.deg(), cap: super::MAX_FIELD_DEGREE });
        }
        let field = Arc::new(CmField::new(&f)?);
        Self::new(field, phi)
    }
}

