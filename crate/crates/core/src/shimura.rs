//! Root data of `GSp(2g)` with respect to a CM torus, and the period labels
//! of the Siegel and Hilbert tangent spaces at a CM point.
//!
//! Characters are integer vectors over `eps_0, eps_1, ..., eps_g`; `eps_0` is
//! the similitude character and never appears in a root.

use crate::biq::{isotypic_partition, PeriodMonomial, SplitBiQ};
use crate::cm::{weyl_check, CmError, CmField, RelationLattice};
use crate::exact::NumberField;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShimuraError {
    #[error("g must be at least 1")]
    InvalidG,
    #[error("index out of range: need 1 <= j <= j' <= {g}, got ({j}, {jp})")]
    IndexOutOfRange { g: usize, j: usize, jp: usize },
    #[error("relation lattice has g = {have}, expected {want}")]
    LatticeMismatch { have: usize, want: usize },
    #[error("the CM field is not a Weyl point")]
    NotWeyl,
    #[error(transparent)]
    Cm(#[from] CmError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coordinates on `eps_0..eps_g`.
    pub vector: Vec<i64>,
    pub compact: bool,
    pub positive: bool,
}

/// The full root system `{±(eps_j + eps_j')} ∪ {eps_j - eps_j' : j != j'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatumGSp {
    g: usize,
    roots: Vec<Root>,
}

fn eps_sum(g: usize, j: usize, jp: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0i64; g + 1];
    v[j] += sign;
    v[jp] += sign;
    v
}

pub fn roots(g: usize) -> Result<RootDatumGSp, ShimuraError> {
    if g == 0 {
        return Err(ShimuraError::InvalidG);
    }
    let mut out = Vec::new();
    for j in 1..=g {
        for jp in j..=g {
            out.push(Root { vector: eps_sum(g, j, jp, 1), compact: false, positive: true });
        }
    }
    for j in 1..=g {
        for jp in j..=g {
            out.push(Root { vector: eps_sum(g, j, jp, -1), compact: false, positive: false });
        }
    }
    for j in 1..=g {
        for jp in 1..=g {
            if j != jp {
                let mut v = vec![0i64; g + 1];
                v[j] = 1;
                v[jp] = -1;
                out.push(Root { vector: v, compact: true, positive: j < jp });
            }
        }
    }
    Ok(RootDatumGSp { g, roots: out })
}

impl RootDatumGSp {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn all(&self) -> &[Root] {
        &self.roots
    }

    /// `Phi_M^+ = {eps_j + eps_j' : j <= j'}`, lexicographic in `(j, j')`.
    pub fn noncompact_positive(&self) -> Vec<&Root> {
        self.roots.iter().filter(|r| !r.compact && r.positive).collect()
    }

    pub fn compact(&self) -> Vec<&Root> {
        self.roots.iter().filter(|r| r.compact).collect()
    }

    pub fn positive(&self) -> Vec<&Root> {
        self.roots.iter().filter(|r| r.positive).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "g": self.g,
            "roots": self.roots.iter().map(|r| json!({"vector": r.vector, "compact": r.compact, "positive": r.positive})).collect::<Vec<_>>(),
        })
    }
}

fn tangent_label(j: usize, jp: usize) -> PeriodMonomial {
    PeriodMonomial::t(j - 1).mul(&PeriodMonomial::t(jp - 1)).mul(&PeriodMonomial::tate().inv())
}

/// Lines of the Siegel tangent space, `(j, j')` with `1 <= j <= j' <= g`.
pub fn siegel_lines(g: usize) -> Vec<(usize, usize)> {
    (1..=g).flat_map(|j| (j..=g).map(move |jp| (j, jp))).collect()
}

/// `(C^{g(g+1)/2}; t_j t_j' L^-1)`, ordered by `(j, j')`.
pub fn siegel_tangent_biq(g: usize) -> Result<SplitBiQ, ShimuraError> {
    if g == 0 {
        return Err(ShimuraError::InvalidG);
    }
    Ok(SplitBiQ::new(siegel_lines(g).into_iter().map(|(j, jp)| tangent_label(j, jp)).collect()))
}

/// `(C^g; t_j^2 L^-1)`.
pub fn hilbert_tangent_biq(g: usize) -> Result<SplitBiQ, ShimuraError> {
    if g == 0 {
        return Err(ShimuraError::InvalidG);
    }
    Ok(SplitBiQ::new((1..=g).map(|j| tangent_label(j, j)).collect()))
}

/// The root `eps_j + eps_j'` and the period label of its line.
pub fn root_for_line(g: usize, j: usize, jp: usize) -> Result<(Vec<i64>, PeriodMonomial), ShimuraError> {
    if j == 0 || j > jp || jp > g {
        return Err(ShimuraError::IndexOutOfRange { g, j, jp });
    }
    Ok((eps_sum(g, j, jp, 1), tangent_label(j, jp)))
}

/// Inverse of [`root_for_line`] on `Phi_M^+`.
pub fn line_for_root(v: &[i64]) -> Option<(usize, usize)> {
    if v.is_empty() || v[0] != 0 || v.iter().any(|&x| x < 0) || v.iter().sum::<i64>() != 2 {
        return None;
    }
    let g = v.len() - 1;
    let idx: Vec<usize> = (1..=g).flat_map(|j| std::iter::repeat_n(j, v[j] as usize)).collect();
    Some((idx[0], idx[1]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootspaceReport {
    /// Every ratio `theta_j theta_j' / theta_k theta_k'` is transcendental
    /// modulo the lattice.
    pub condition_i: bool,
    /// Isotypic blocks of Siegel lines.
    pub blocks: Vec<Vec<(usize, usize)>>,
    /// Blocks of dimension at least 2, which contain bi-Qbar lines that are
    /// not root spaces.
    pub non_root_families: Vec<Vec<(usize, usize)>>,
}

impl RootspaceReport {
    pub fn to_json(&self) -> Value {
        let conv = |bs: &Vec<Vec<(usize, usize)>>| -> Value {
            json!(bs.iter().map(|b| b.iter().map(|&(j, k)| json!([j, k])).collect::<Vec<_>>()).collect::<Vec<_>>())
        };
        json!({"condition_i": self.condition_i, "blocks": conv(&self.blocks), "non_root_families": conv(&self.non_root_families)})
    }
}

pub fn rootspace_analysis(g: usize, r: &RelationLattice) -> Result<RootspaceReport, ShimuraError> {
    if r.g() != g {
        return Err(ShimuraError::LatticeMismatch { have: r.g(), want: g });
    }
    let s = siegel_tangent_biq(g)?;
    let lines = siegel_lines(g);
    let blocks = isotypic_partition(&s, Some(r)).map_err(|e| ShimuraError::Cm(CmError::Invariant(e.to_string())))?;
    let blocks: Vec<Vec<(usize, usize)>> = blocks.iter().map(|b| b.iter().map(|&i| lines[i]).collect()).collect();
    let non_root_families: Vec<_> = blocks.iter().filter(|b| b.len() >= 2).cloned().collect();
    Ok(RootspaceReport { condition_i: non_root_families.is_empty(), blocks, non_root_families })
}

#[derive(Clone, Debug)]
pub enum SubvarietyKind {
    Point,
    /// Hilbert modular subvariety attached to the totally real field `F`.
    Hilbert(NumberField),
    Full,
}

#[derive(Clone, Debug)]
pub struct SpecialSubvarietyDescriptor {
    pub kind: SubvarietyKind,
    pub dim: usize,
}

impl SpecialSubvarietyDescriptor {
    pub fn to_json(&self) -> Value {
        match &self.kind {
            SubvarietyKind::Point => json!({"kind": "point", "dim": self.dim}),
            SubvarietyKind::Full => json!({"kind": "full", "dim": self.dim}),
            SubvarietyKind::Hilbert(f) => json!({
                "kind": "hilbert",
                "dim": self.dim,
                "field": crate::exact::poly_to_json(f.min_poly()),
            }),
        }
    }
}

/// The special subvarieties through a Weyl CM point: the point, the Hilbert
/// subvariety of the totally real subfield, and the whole space. For `g = 1`
/// the last two coincide and two entries are returned.
pub fn special_subvarieties_weyl(e: &CmField) -> Result<Vec<SpecialSubvarietyDescriptor>, ShimuraError> {
    if !weyl_check(e)? {
        return Err(ShimuraError::NotWeyl);
    }
    let g = e.g();
    let point = SpecialSubvarietyDescriptor { kind: SubvarietyKind::Point, dim: 0 };
    let full = SpecialSubvarietyDescriptor { kind: SubvarietyKind::Full, dim: g * (g + 1) / 2 };
    if g == 1 {
        return Ok(vec![point, full]);
    }
    let f = e.totally_real_subfield()?;
    Ok(vec![point, SpecialSubvarietyDescriptor { kind: SubvarietyKind::Hilbert(f.field), dim: g }, full])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biq::{sym2, tate_twist};
    use crate::exact::{IntMatrix, IntPoly};

    #[test]
    fn root_counts() {
        let r1 = roots(1).unwrap();
        assert_eq!(r1.noncompact_positive().len(), 1);
        assert_eq!(r1.noncompact_positive()[0].vector, vec![0, 2]);
        assert!(r1.compact().is_empty());
        let r2 = roots(2).unwrap();
        assert_eq!((r2.noncompact_positive().len(), r2.compact().len()), (3, 2));
        assert_eq!(roots(3).unwrap().noncompact_positive().len(), 6);
        assert_eq!(roots(0).unwrap_err(), ShimuraError::InvalidG);
    }

    #[test]
    fn tangent_structures() {
        let s2 = siegel_tangent_biq(2).unwrap();
        let f: Vec<String> = s2.labels().iter().map(|l| l.formal()).collect();
        assert_eq!(f, ["t1^2 L^-1", "t1 t2 L^-1", "t2^2 L^-1"]);
        assert_eq!(hilbert_tangent_biq(1).unwrap(), siegel_tangent_biq(1).unwrap());
        let h2 = hilbert_tangent_biq(2).unwrap();
        assert_eq!(h2.labels(), &[s2.labels()[0].clone(), s2.labels()[2].clone()]);
        for g in 1..=4 {
            assert_eq!(tate_twist(&siegel_tangent_biq(g).unwrap(), 1), sym2(&SplitBiQ::cm_standard(g)));
        }
    }

    #[test]
    fn line_bijection() {
        let (v, l) = root_for_line(2, 1, 2).unwrap();
        assert_eq!(v, vec![0, 1, 1]);
        assert_eq!(l.formal(), "t1 t2 L^-1");
        assert_eq!(root_for_line(1, 1, 1).unwrap().0, vec![0, 2]);
        assert!(root_for_line(2, 2, 1).is_err());
        assert!(root_for_line(2, 0, 1).is_err());
        for g in 1..=5 {
            for (j, jp) in siegel_lines(g) {
                assert_eq!(line_for_root(&root_for_line(g, j, jp).unwrap().0), Some((j, jp)));
            }
        }
    }

    #[test]
    fn rootspaces() {
        let e = rootspace_analysis(2, &RelationLattice::empty(2)).unwrap();
        assert!(e.condition_i);
        assert_eq!(e.blocks.len(), 3);
        let r = RelationLattice::new(2, IntMatrix::from_i64(&[vec![0, 1, -1]]), 2).unwrap();
        let m = rootspace_analysis(2, &r).unwrap();
        assert!(!m.condition_i);
        assert_eq!(m.blocks, vec![vec![(1, 1), (1, 2), (2, 2)]]);
        let r1 = RelationLattice::new(1, IntMatrix::from_i64(&[vec![1, -2]]), 1).unwrap();
        assert!(rootspace_analysis(1, &r1).unwrap().condition_i);
        assert!(rootspace_analysis(1, &r).is_err());
    }

    #[test]
    fn special_subvarieties() {
        let e = CmField::new(&IntPoly::from_i64(&[2, 0, 5, 0, 1])).unwrap();
        let d = special_subvarieties_weyl(&e).unwrap();
        assert_eq!(d.iter().map(|x| x.dim).collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(matches!(d[1].kind, SubvarietyKind::Hilbert(ref f) if f.degree() == 2));
        let z5 = CmField::new(&IntPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(special_subvarieties_weyl(&z5).unwrap_err(), ShimuraError::NotWeyl);
        let qi = CmField::new(&IntPoly::from_i64(&[1, 0, 1])).unwrap();
        assert_eq!(special_subvarieties_weyl(&qi).unwrap().len(), 2);
    }
}
