//! Split bi-algebraic structures `(C^n; theta_1, ..., theta_n)`.
//!
//! Each coordinate line carries a [`PeriodMonomial`], a formal class in
//! `C* / Qbar*`. Classes are compared symbolically, by exponent equality or
//! modulo a [`RelationLattice`].

use crate::cm::RelationLattice;
use crate::exact::linalg::{rank, Field};
use crate::exact::{AlgebraicNumber, IntPoly, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiqError {
    #[error("symbol mismatch: {0}")]
    SymbolMismatch(String),
    #[error("subspace is not a bi-Qbar subspace")]
    NotBiQ,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("spanning columns are linearly dependent")]
    DependentColumns,
    #[error("parse error: {0}")]
    Parse(String),
}

/// `L^l * t_1^theta[0] * t_2^theta[1] * ...` with `L = 2 pi i`.
///
/// Trailing zero exponents are dropped, so symbols beyond the stored length
/// are implicitly absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodMonomial {
    l: i64,
    theta: Vec<i64>,
}

impl PeriodMonomial {
    pub fn new(l: i64, mut theta: Vec<i64>) -> Self {
        while theta.last() == Some(&0) {
            theta.pop();
        }
        PeriodMonomial { l, theta }
    }

    pub fn one() -> Self {
        Self::new(0, Vec::new())
    }

    /// The Tate period `L`.
    pub fn tate() -> Self {
        Self::new(1, Vec::new())
    }

    /// The symbol `t_j` (0-based `j`).
    pub fn t(j: usize) -> Self {
        let mut th = vec![0; j + 1];
        th[j] = 1;
        Self::new(0, th)
    }

    pub fn l_exp(&self) -> i64 {
        self.l
    }

    pub fn theta_exp(&self) -> &[i64] {
        &self.theta
    }

    pub fn theta(&self, j: usize) -> i64 {
        self.theta.get(j).copied().unwrap_or(0)
    }

    /// Number of `t` symbols the monomial involves (highest index + 1).
    pub fn symbols(&self) -> usize {
        self.theta.len()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.theta.len().max(o.theta.len());
        Self::new(self.l + o.l, (0..n).map(|j| self.theta(j) + o.theta(j)).collect())
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.l, self.theta.iter().map(|x| -x).collect())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(self.l * k, self.theta.iter().map(|x| x * k).collect())
    }

    pub fn is_one(&self) -> bool {
        self.l == 0 && self.theta.is_empty()
    }

    /// Exponent vector `(l; theta_1..theta_g)` padded to `g` symbols.
    pub fn exponents(&self, g: usize) -> Vec<BigInt> {
        std::iter::once(self.l).chain((0..g).map(|j| self.theta(j))).map(BigInt::from).collect()
    }

    /// Whether `self` and `o` define the same class, exactly or modulo `r`.
    pub fn equivalent(&self, o: &Self, r: Option<&RelationLattice>) -> Result<bool, BiqError> {
        let d = self.div(o);
        match r {
            None => Ok(d.is_one()),
            Some(r) => {
                if d.symbols() > r.g() {
                    return Err(BiqError::SymbolMismatch(format!(
                        "label uses t_{} but the relation lattice has g = {}",
                        d.symbols(),
                        r.g()
                    )));
                }
                Ok(r.contains(&d.exponents(r.g())))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"L": self.l, "theta": self.theta})
    }

    pub fn from_json(v: &Value) -> Result<Self, BiqError> {
        let obj = v.as_object().ok_or_else(|| BiqError::Parse("label must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| *k != "L" && *k != "theta") {
            return Err(BiqError::Parse(format!("unknown label field {k:?}")));
        }
        let l = match obj.get("L") {
            None => 0,
            Some(x) => x.as_i64().ok_or_else(|| BiqError::Parse("L must be an integer".into()))?,
        };
        let theta = match obj.get("theta") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| BiqError::Parse("theta entries must be integers".into())))
                .collect::<Result<Vec<_>, _>>()?,
            Some(_) => return Err(BiqError::Parse("theta must be an array".into())),
        };
        if theta.len() > 4096 || l.unsigned_abs() > 1 << 40 || theta.iter().any(|x| x.unsigned_abs() > 1 << 40) {
            return Err(BiqError::Parse("label exponent out of range".into()));
        }
        Ok(Self::new(l, theta))
    }

    /// Formal notation, e.g. `t1^2 t2 L^-1`; `1` for the trivial class.
    pub fn formal(&self) -> String {
        let mut parts = Vec::new();
        for (j, &e) in self.theta.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("t{}", j + 1)),
                _ => parts.push(format!("t{}^{}", j + 1, e)),
            }
        }
        match self.l {
            0 => {}
            1 => parts.push("L".into()),
            e => parts.push(format!("L^{e}")),
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Period notation with `pi` standing for `L` (they agree modulo `Qbar*`),
    /// e.g. `θ1θ2/π`.
    pub fn theta_pi(&self) -> String {
        fn factor(sym: &str, e: i64) -> String {
            match e {
                1 => sym.to_string(),
                2 => format!("{sym}²"),
                3 => format!("{sym}³"),
                _ => format!("{sym}^{e}"),
            }
        }
        let mut num = String::new();
        let mut den = String::new();
        for (j, &e) in self.theta.iter().enumerate() {
            let sym = format!("θ{}", j + 1);
            if e > 0 {
                num += &factor(&sym, e);
            } else if e < 0 {
                den += &factor(&sym, -e);
            }
        }
        if self.l > 0 {
            num += &factor("π", self.l);
        } else if self.l < 0 {
            den += &factor("π", -self.l);
        }
        if num.is_empty() {
            num = "1".into();
        }
        if den.is_empty() {
            num
        } else {
            format!("{num}/{den}")
        }
    }
}

impl fmt::Display for PeriodMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formal())
    }
}

/// `(C^n; theta_1, ..., theta_n)`: one label per coordinate line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBiQ {
    labels: Vec<PeriodMonomial>,
}

impl SplitBiQ {
    pub fn new(labels: Vec<PeriodMonomial>) -> Self {
        SplitBiQ { labels }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[PeriodMonomial] {
        &self.labels
    }

    /// Largest symbol count over all labels.
    pub fn symbols(&self) -> usize {
        self.labels.iter().map(|m| m.symbols()).max().unwrap_or(0)
    }

    /// The CM-type structure `(C^g; t_1, ..., t_g)`.
    pub fn cm_standard(g: usize) -> Self {
        Self::new((0..g).map(PeriodMonomial::t).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({"dim": self.dim(), "labels": self.labels.iter().map(|l| l.to_json()).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self, BiqError> {
        let labels = v
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| BiqError::Parse("missing labels array".into()))?;
        let labels = labels.iter().map(PeriodMonomial::from_json).collect::<Result<Vec<_>, _>>()?;
        if let Some(d) = v.get("dim") {
            let d = d.as_u64().ok_or_else(|| BiqError::Parse("dim must be a non-negative integer".into()))?;
            if d as usize != labels.len() {
                return Err(BiqError::DimensionMismatch(format!("dim {d} but {} labels", labels.len())));
            }
        }
        if labels.is_empty() {
            return Err(BiqError::Parse("dim must be positive".into()));
        }
        Ok(Self::new(labels))
    }
}

/// Labels of the tensor product, ordered by `(i, j)` lexicographically.
pub fn tensor(a: &SplitBiQ, b: &SplitBiQ) -> SplitBiQ {
    SplitBiQ::new(a.labels.iter().flat_map(|x| b.labels.iter().map(move |y| x.mul(y))).collect())
}

/// Symmetric square: labels `theta_i theta_j` for `i <= j`, lexicographic.
pub fn sym2(s: &SplitBiQ) -> SplitBiQ {
    let n = s.dim();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(s.labels[i].mul(&s.labels[j]));
        }
    }
    SplitBiQ::new(out)
}

/// Multiplies every label by `L^k`.
pub fn tate_twist(s: &SplitBiQ, k: i64) -> SplitBiQ {
    SplitBiQ::new(s.labels.iter().map(|m| m.mul(&PeriodMonomial::tate().pow(k))).collect())
}

fn check_symbols(s: &SplitBiQ, r: Option<&RelationLattice>) -> Result<(), BiqError> {
    if let Some(r) = r {
        if s.symbols() > r.g() {
            return Err(BiqError::SymbolMismatch(format!(
                "structure uses {} symbols but the relation lattice has g = {}",
                s.symbols(),
                r.g()
            )));
        }
    }
    Ok(())
}

/// Blocks of indices (0-based) with equal label classes, each sorted, in
/// order of their smallest element.
pub fn isotypic_partition(s: &SplitBiQ, r: Option<&RelationLattice>) -> Result<Vec<Vec<usize>>, BiqError> {
    check_symbols(s, r)?;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    'outer: for (i, li) in s.labels.iter().enumerate() {
        for b in blocks.iter_mut() {
            if li.equivalent(&s.labels[b[0]], r)? {
                b.push(i);
                continue 'outer;
            }
        }
        blocks.push(vec![i]);
    }
    Ok(blocks)
}

/// Number of bi-Qbar subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubspaceCount {
    Finite(BigInt),
    Infinite,
}

impl SubspaceCount {
    pub fn to_json(&self) -> Value {
        match self {
            SubspaceCount::Infinite => Value::String("infinite".into()),
            SubspaceCount::Finite(n) => match u64::try_from(n) {
                Ok(x) => json!(x),
                Err(_) => Value::String(n.to_string()),
            },
        }
    }
}

impl fmt::Display for SubspaceCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceCount::Infinite => f.write_str("infinite"),
            SubspaceCount::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// `2^n` when every isotypic block is a line, otherwise infinitely many.
pub fn count_biq_subspaces(s: &SplitBiQ, r: Option<&RelationLattice>) -> Result<SubspaceCount, BiqError> {
    let blocks = isotypic_partition(s, r)?;
    if blocks.iter().any(|b| b.len() >= 2) {
        Ok(SubspaceCount::Infinite)
    } else {
        Ok(SubspaceCount::Finite(BigInt::from(1) << s.dim()))
    }
}

/// `sum_s dim(V ∩ V_s) = dim V`, where `V` is spanned by `columns` (vectors of
/// length `n`) and `V_s` is the coordinate subspace of block `s`.
///
/// `dim(V ∩ V_s) = dim V - rank` of the coordinates outside `s`.
pub fn decomposes<F: Field>(columns: &[Vec<F>], blocks: &[Vec<usize>]) -> bool {
    let d = rank(columns);
    let n = columns.first().map_or(0, |c| c.len());
    let mut total = 0;
    for b in blocks {
        let outside: Vec<Vec<F>> =
            columns.iter().map(|c| (0..n).filter(|i| !b.contains(i)).map(|i| c[i].clone()).collect()).collect();
        let r = if outside.first().is_some_and(|c| !c.is_empty()) { rank(&outside) } else { 0 };
        total += d - r;
    }
    total == d
}

/// A subspace of the ambient structure given by spanning columns in the
/// first rational structure.
#[derive(Clone, Debug)]
pub struct SubspacePresentation {
    ambient: SplitBiQ,
    columns: Vec<Vec<AlgebraicNumber>>,
}

impl SubspacePresentation {
    pub fn new(ambient: SplitBiQ, columns: Vec<Vec<AlgebraicNumber>>) -> Result<Self, BiqError> {
        let n = ambient.dim();
        if columns.iter().any(|c| c.len() != n) {
            return Err(BiqError::DimensionMismatch(format!("columns must have length {n}")));
        }
        if columns.len() > n {
            return Err(BiqError::DependentColumns);
        }
        let parent = columns.first().and_then(|c| c.first()).map(|a| a.parent().clone());
        if let Some(p) = &parent {
            if columns.iter().flatten().any(|a| a.parent() != p) {
                return Err(BiqError::DimensionMismatch("entries lie in different number fields".into()));
            }
        }
        if rank(&columns) != columns.len() {
            return Err(BiqError::DependentColumns);
        }
        Ok(SubspacePresentation { ambient, columns })
    }

    /// Rational columns over `Q`.
    pub fn rational(ambient: SplitBiQ, columns: &[Vec<i64>]) -> Result<Self, BiqError> {
        let q = Arc::new(NumberField::new(&IntPoly::x(), 0).expect("Q is a field"));
        let cols = columns
            .iter()
            .map(|c| c.iter().map(|&x| AlgebraicNumber::from_int(&q, x)).collect())
            .collect();
        Self::new(ambient, cols)
    }

    /// The coordinate subspace on `indices`.
    pub fn coordinate(ambient: SplitBiQ, indices: &[usize]) -> Result<Self, BiqError> {
        let n = ambient.dim();
        if indices.iter().any(|&i| i >= n) {
            return Err(BiqError::DimensionMismatch("coordinate index out of range".into()));
        }
        let cols: Vec<Vec<i64>> =
            indices.iter().map(|&i| (0..n).map(|k| i64::from(k == i)).collect()).collect();
        Self::rational(ambient, &cols)
    }

    pub fn ambient(&self) -> &SplitBiQ {
        &self.ambient
    }

    pub fn columns(&self) -> &[Vec<AlgebraicNumber>] {
        &self.columns
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// `{ambient, field?, columns}`; `field` is `{min_poly, root_index}` and
    /// defaults to `Q`. Entries are rationals (`3`, `"-2/5"`) or coordinate
    /// arrays in the power basis of the field generator.
    pub fn from_json(v: &Value) -> Result<Self, BiqError> {
        let ambient = SplitBiQ::from_json(v.get("ambient").ok_or_else(|| BiqError::Parse("missing ambient".into()))?)?;
        let field = match v.get("field") {
            None | Some(Value::Null) => NumberField::new(&IntPoly::x(), 0),
            Some(f) => {
                let p = crate::exact::poly_from_json(f.get("min_poly").ok_or_else(|| BiqError::Parse("missing min_poly".into()))?)
                    .map_err(|e| BiqError::Parse(e.to_string()))?;
                if p.degree() > 16 {
                    return Err(BiqError::Parse("field degree above 16".into()));
                }
                let idx = f.get("root_index").and_then(Value::as_u64).unwrap_or(0) as usize;
                NumberField::new(&p, idx)
            }
        }
        .map_err(|e| BiqError::Parse(e.to_string()))?;
        let field = Arc::new(field);
        let cols = v
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| BiqError::Parse("missing columns array".into()))?;
        let mut out = Vec::with_capacity(cols.len());
        for c in cols {
            let c = c.as_array().ok_or_else(|| BiqError::Parse("columns must be arrays".into()))?;
            let mut col = Vec::with_capacity(c.len());
            for e in c {
                col.push(entry_from_json(&field, e)?);
            }
            out.push(col);
        }
        Self::new(ambient, out)
    }

    pub fn to_json(&self) -> Value {
        let field = self.columns.first().and_then(|c| c.first()).map(|a| a.parent().clone());
        let mut v = json!({
            "ambient": self.ambient.to_json(),
            "columns": self.columns.iter().map(|c| c.iter().map(|a| {
                Value::Array(a.coords().iter().map(|q| Value::String(q.to_string())).collect())
            }).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        if let Some(f) = field {
            if f.degree() > 1 {
                v["field"] = json!({"min_poly": crate::exact::poly_to_json(f.min_poly()), "root_index": f.primary_index()});
            }
        }
        v
    }
}

fn rational_from_json(e: &Value) -> Result<BigRational, BiqError> {
    match e {
        Value::Number(n) => n
            .as_i64()
            .map(|x| BigRational::from_integer(BigInt::from(x)))
            .ok_or_else(|| BiqError::Parse(format!("bad rational {n}"))),
        Value::String(s) => {
            let s = s.trim();
            let (a, b) = s.split_once('/').unwrap_or((s, "1"));
            let a: BigInt = a.trim().parse().map_err(|_| BiqError::Parse(format!("bad rational {s:?}")))?;
            let b: BigInt = b.trim().parse().map_err(|_| BiqError::Parse(format!("bad rational {s:?}")))?;
            if b == BigInt::from(0) {
                return Err(BiqError::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(a, b))
        }
        _ => Err(BiqError::Parse("rational must be an integer or a string".into())),
    }
}

fn entry_from_json(field: &Arc<NumberField>, e: &Value) -> Result<AlgebraicNumber, BiqError> {
    let coords = match e {
        Value::Array(a) => a.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>()?,
        _ => vec![rational_from_json(e)?],
    };
    if coords.len() > field.degree() {
        return Err(BiqError::Parse(format!("entry has more than {} coordinates", field.degree())));
    }
    Ok(AlgebraicNumber::from_poly(field, &crate::exact::RatPoly::new(coords), field.primary_index()))
}

/// Whether `V` is the direct sum of its intersections with the isotypic
/// blocks.
pub fn is_biq_subspace(v: &SubspacePresentation, r: Option<&RelationLattice>) -> Result<bool, BiqError> {
    let blocks = isotypic_partition(&v.ambient, r)?;
    if v.columns.is_empty() {
        return Ok(true);
    }
    Ok(decomposes(&v.columns, &blocks))
}

/// The common label class of the block containing a bi-Qbar line.
pub fn period_of_line(v: &SubspacePresentation, r: Option<&RelationLattice>) -> Result<PeriodMonomial, BiqError> {
    if v.dim() != 1 {
        return Err(BiqError::DimensionMismatch(format!("expected a line, got dimension {}", v.dim())));
    }
    let blocks = isotypic_partition(&v.ambient, r)?;
    let col = &v.columns[0];
    let support: Vec<usize> = (0..col.len()).filter(|&i| !col[i].is_zero()).collect();
    let block = blocks
        .iter()
        .find(|b| support.iter().all(|i| b.contains(i)))
        .ok_or(BiqError::NotBiQ)?;
    Ok(v.ambient.labels[block[0]].clone())
}

/// Partition as JSON: list of index lists.
pub fn partition_to_json(p: &[Vec<usize>]) -> Value {
    let mut p = p.to_vec();
    for b in p.iter_mut() {
        b.sort_unstable();
    }
    p.sort();
    json!(p)
}
