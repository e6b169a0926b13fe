//! Lattices of monomial relations among `L = 2 pi i` and `t_1, ..., t_g`.

use crate::exact::IntMatrix;
use num_bigint::BigInt;
use serde_json::{json, Value};

/// Integer lattice of exponent vectors `(a_0; a_1, ..., a_g)` whose monomials
/// `L^a_0 t_1^a_1 ... t_g^a_g` are predicted algebraic. The basis is kept in
/// Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    g: usize,
    basis: IntMatrix,
    mt_dim: usize,
}

impl RelationLattice {
    /// Validates `rank(basis) = g + 1 - mt_dim` and normalizes to HNF.
    pub fn new(g: usize, basis: IntMatrix, mt_dim: usize) -> Result<Self, String> {
        if basis.ncols() != g + 1 && !(basis.nrows() == 0 && basis.ncols() == 0) {
            return Err(format!("basis has {} columns, expected {}", basis.ncols(), g + 1));
        }
        let basis = if basis.nrows() == 0 { IntMatrix::zeros(0, g + 1) } else { basis.row_lattice_basis() };
        if mt_dim > g + 1 || basis.nrows() != g + 1 - mt_dim {
            return Err(format!("rank {} is inconsistent with g = {g}, mt_dim = {mt_dim}", basis.nrows()));
        }
        Ok(RelationLattice { g, basis, mt_dim })
    }

    /// The lattice with no relations (`mt_dim = g + 1`).
    pub fn empty(g: usize) -> Self {
        RelationLattice { g, basis: IntMatrix::zeros(0, g + 1), mt_dim: g + 1 }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn mt_dim(&self) -> usize {
        self.mt_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// Membership of an exponent vector `(a_0; a_1..a_g)`.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.g + 1, "exponent vector length");
        if self.basis.nrows() == 0 {
            return v.iter().all(|x| x.sign() == num_bigint::Sign::NoSign);
        }
        self.basis.lattice_contains(v)
    }

    pub fn to_json(&self) -> Value {
        json!({"g": self.g, "mt_dim": self.mt_dim, "basis": self.basis.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let g = v.get("g").and_then(Value::as_u64).ok_or("missing integer field g")? as usize;
        let mt = v.get("mt_dim").and_then(Value::as_u64).ok_or("missing integer field mt_dim")? as usize;
        if g > 1024 {
            return Err("g is too large".into());
        }
        let basis = IntMatrix::from_json(v.get("basis").ok_or("missing field basis")?)?;
        Self::new(g, basis, mt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn membership() {
        let r = RelationLattice::new(2, IntMatrix::from_i64(&[vec![0, 2, -2]]), 2).unwrap();
        assert!(r.contains(&v(&[0, -4, 4])));
        assert!(!r.contains(&v(&[0, 1, -1])));
        assert!(RelationLattice::empty(3).contains(&v(&[0, 0, 0, 0])));
        assert!(!RelationLattice::empty(1).contains(&v(&[1, 0])));
    }

    #[test]
    fn rank_is_checked() {
        assert!(RelationLattice::new(2, IntMatrix::from_i64(&[vec![0, 1, -1]]), 3).is_err());
        assert!(RelationLattice::new(2, IntMatrix::from_i64(&[vec![1, 1]]), 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = RelationLattice::new(2, IntMatrix::from_i64(&[vec![0, 1, -1]]), 2).unwrap();
        assert_eq!(RelationLattice::from_json(&r.to_json()).unwrap(), r);
        let e = RelationLattice::empty(1);
        assert_eq!(RelationLattice::from_json(&e.to_json()).unwrap(), e);
    }
}
