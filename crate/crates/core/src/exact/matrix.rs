use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use std::fmt;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Extended gcd: `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; an empty list gives a `0 x 0` matrix.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Like `from_rows` but keeps the column count for an empty row list.
    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        if rows.is_empty() {
            return Self::zeros(0, cols);
        }
        Self::from_rows(rows)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = a * o.get(k, j);
                    m.data[i * o.cols + j] += v;
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = k * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] += v;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = k * &self.data[i * self.cols + src];
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Replaces rows `a`, `b` by `(x a + y b, u a + v b)`.
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let ra = self.data[a * self.cols + j].clone();
            let rb = self.data[b * self.cols + j].clone();
            self.data[a * self.cols + j] = x * &ra + y * &rb;
            self.data[b * self.cols + j] = u * &ra + v * &rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let ca = self.data[i * self.cols + a].clone();
            let cb = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = x * &ca + y * &cb;
            self.data[i * self.cols + b] = u * &ca + v * &cb;
        }
    }

    /// Row Hermite normal form `H = U A` with `U` unimodular.
    ///
    /// `H` is in row echelon form with positive pivots, entries above each
    /// pivot reduced into `[0, pivot)`, and zero rows at the bottom.
    pub fn hnf_with_transform(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Bring a nonzero entry to row r.
            let Some(p) = (r..self.rows).filter(|&i| !h.get(i, c).is_zero()).min_by_key(|&i| h.get(i, c).abs())
            else {
                continue;
            };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            for i in r + 1..self.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let a = h.get(r, c).clone();
                let b = h.get(i, c).clone();
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    h.add_row_multiple(i, r, &q);
                    u.add_row_multiple(i, r, &q);
                    continue;
                }
                let (g, x, y) = ext_gcd(&a, &b);
                let (ua, ub) = (-(&b / &g), &a / &g);
                h.combine_rows(r, i, &x, &y, &ua, &ub);
                u.combine_rows(r, i, &x, &y, &ua, &ub);
            }
            if h.get(r, c).is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            let piv = h.get(r, c).clone();
            for k in 0..r {
                let q = h.get(k, c).div_floor(&piv);
                if !q.is_zero() {
                    let nq = -q;
                    h.add_row_multiple(k, r, &nq);
                    u.add_row_multiple(k, r, &nq);
                }
            }
            r += 1;
        }
        (h, u)
    }

    pub fn hnf(&self) -> IntMatrix {
        self.hnf_with_transform().0
    }

    /// The nonzero rows of the Hermite normal form: a canonical basis of
    /// the row lattice.
    pub fn row_lattice_basis(&self) -> IntMatrix {
        let h = self.hnf();
        let rows: Vec<Vec<BigInt>> = h.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        IntMatrix::from_rows_with_cols(rows, self.cols)
    }

    /// Smith normal form `D = U A V` with `U`, `V` unimodular and
    /// `d_1 | d_2 | ...` on the diagonal.
    pub fn snf_with_transform(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    if !d.get(i, j).is_zero()
                        && best.is_none_or(|(bi, bj)| d.get(i, j).abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            loop {
                let mut changed = false;
                for i in t + 1..self.rows {
                    if d.get(i, t).is_zero() {
                        continue;
                    }
                    let a = d.get(t, t).clone();
                    let b = d.get(i, t).clone();
                    if (&b % &a).is_zero() {
                        let q = -(&b / &a);
                        d.add_row_multiple(i, t, &q);
                        u.add_row_multiple(i, t, &q);
                        continue;
                    }
                    let (g, x, y) = ext_gcd(&a, &b);
                    let (ua, ub) = (-(&b / &g), &a / &g);
                    d.combine_rows(t, i, &x, &y, &ua, &ub);
                    u.combine_rows(t, i, &x, &y, &ua, &ub);
                    changed = true;
                }
                for j in t + 1..self.cols {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let a = d.get(t, t).clone();
                    let b = d.get(t, j).clone();
                    if (&b % &a).is_zero() {
                        let q = -(&b / &a);
                        d.add_col_multiple(j, t, &q);
                        v.add_col_multiple(j, t, &q);
                        continue;
                    }
                    let (g, x, y) = ext_gcd(&a, &b);
                    let (ua, ub) = (-(&b / &g), &a / &g);
                    d.combine_cols(t, j, &x, &y, &ua, &ub);
                    v.combine_cols(t, j, &x, &y, &ua, &ub);
                    changed = true;
                }
                if !changed {
                    // Enforce divisibility of the remaining block by the pivot.
                    let piv = d.get(t, t).clone();
                    let bad = (t + 1..self.rows)
                        .find(|&i| (t + 1..self.cols).any(|j| !(d.get(i, j) % &piv).is_zero()));
                    match bad {
                        Some(i) => {
                            let one = BigInt::one();
                            d.add_row_multiple(t, i, &one);
                            u.add_row_multiple(t, i, &one);
                        }
                        None => break,
                    }
                }
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        (d, u, v)
    }

    /// Invariant factors (the nonzero diagonal of the Smith normal form).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let (d, _, _) = self.snf_with_transform();
        (0..self.rows.min(self.cols)).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }

    /// Fraction-free Gaussian elimination; returns the rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(rank, p);
            let piv = m.get(rank, c).clone();
            for i in rank + 1..self.rows {
                let f = m.get(i, c).clone();
                for j in c..self.cols {
                    let v = (&piv * m.get(i, j) - &f * m.get(rank, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = piv;
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Determinant by the Bareiss algorithm.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else { return BigInt::zero() };
            if p != k {
                m.swap_rows(k, p);
                sign = -sign;
            }
            let piv = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&piv * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = piv;
        }
        sign * m.get(n - 1, n - 1)
    }

    /// Basis (rows, in Hermite normal form) of the saturated integer kernel
    /// `{ v in Z^cols : A v^T = 0 }`.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let (h, u) = self.transpose().hnf_with_transform();
        let mut rows = Vec::new();
        for i in 0..h.nrows() {
            if h.row(i).iter().all(|x| x.is_zero()) {
                rows.push(u.row(i).to_vec());
            }
        }
        IntMatrix::from_rows_with_cols(rows, self.cols).row_lattice_basis()
    }

    /// True when `v` lies in the row lattice of `self`.
    pub fn lattice_contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let h = self.hnf();
        let mut w = v.to_vec();
        let mut c = 0;
        for i in 0..h.nrows() {
            while c < self.cols && h.get(i, c).is_zero() {
                if !w[c].is_zero() {
                    return false;
                }
                c += 1;
            }
            if c == self.cols {
                break;
            }
            let piv = h.get(i, c);
            if !(&w[c] % piv).is_zero() {
                return false;
            }
            let q = &w[c] / piv;
            for (j, wj) in w.iter_mut().enumerate().skip(c) {
                *wj -= &q * h.get(i, j);
            }
            c += 1;
        }
        w.iter().all(|x| x.is_zero())
    }

    /// Row-major array of rows of decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        )
    }

    /// Accepts decimal strings or integer JSON numbers.
    pub fn from_json(v: &Value) -> Result<IntMatrix, String> {
        let rows = v.as_array().ok_or("matrix must be a JSON array of rows")?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or("matrix rows must be arrays")?;
            let mut row = Vec::with_capacity(r.len());
            for x in r {
                let n = match x {
                    Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| format!("bad integer {s:?}"))?,
                    Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| format!("bad integer {n}"))?,
                    _ => return Err("matrix entries must be decimal strings".into()),
                };
                row.push(n);
            }
            out.push(row);
        }
        let c = out.first().map_or(0, |r| r.len());
        if out.iter().any(|r| r.len() != c) {
            return Err("ragged matrix rows".into());
        }
        Ok(IntMatrix::from_rows(out))
    }

    /// True when `self` is in the row Hermite normal form produced above.
    pub fn is_hnf(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..self.rows {
            let p = (0..self.cols).find(|&j| !self.get(i, j).is_zero());
            match p {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.is_some_and(|l| c <= l) || !self.get(i, c).is_positive() {
                        return false;
                    }
                    let piv = self.get(i, c);
                    for k in 0..i {
                        let e = self.get(k, c);
                        if e.is_negative() || e >= piv {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn hnf_of_identity_and_zero() {
        let i = IntMatrix::identity(3);
        let (h, u) = i.hnf_with_transform();
        assert_eq!(h, i);
        assert_eq!(u, i);
        let z = IntMatrix::zeros(2, 2);
        let (h, u) = z.hnf_with_transform();
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_small_example() {
        let a = m(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = a.hnf_with_transform();
        assert_eq!(h, m(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn kernel_examples() {
        let k = m(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).kernel_lattice();
        assert_eq!(k.nrows(), 2);
        assert!(k.lattice_contains(&[1, 0, -1, 0].map(BigInt::from)));
        assert_eq!(IntMatrix::identity(3).kernel_lattice().nrows(), 0);
        let full = IntMatrix::zeros(1, 3).kernel_lattice();
        assert_eq!(full, IntMatrix::identity(3));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (2, -1), not (4, -2).
        let k = m(&[vec![2, 4]]).kernel_lattice();
        assert_eq!(k.nrows(), 1);
        assert!(k.lattice_contains(&[BigInt::from(2), BigInt::from(-1)]));
    }

    #[test]
    fn snf_example() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let (d, u, v) = a.snf_with_transform();
        assert_eq!(u.mul(&a).mul(&v), d);
        assert_eq!(a.invariant_factors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn det_and_rank() {
        let a = m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(a.det(), BigInt::from(-3));
        assert_eq!(m(&[vec![1, 2, 3], vec![2, 4, 6]]).rank(), 1);
        assert_eq!(a.rank(), 3);
    }

    #[test]
    fn membership() {
        let b = m(&[vec![2, 0], vec![0, 3]]);
        assert!(b.lattice_contains(&[BigInt::from(4), BigInt::from(-3)]));
        assert!(!b.lattice_contains(&[BigInt::from(1), BigInt::from(0)]));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r).prop_map(|rows| m(&rows))
        })
    }

    /// Rank over the rationals by plain fraction elimination.
    fn rational_rank(a: &IntMatrix) -> usize {
        use num_rational::BigRational;
        let mut rows: Vec<Vec<BigRational>> = a
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let mut rank = 0;
        for c in 0..a.ncols() {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && !rows[i][c].is_zero() {
                    let f = &rows[i][c] / &rows[rank][c];
                    let pivot_row = rows[rank].clone();
                    for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn hnf_is_idempotent_and_verified(a in small_matrix()) {
            let (h, u) = a.hnf_with_transform();
            prop_assert!(h.is_hnf());
            prop_assert_eq!(u.mul(&a), h.clone());
            prop_assert_eq!(u.det().abs(), BigInt::one());
            prop_assert_eq!(h.hnf(), h);
        }

        #[test]
        fn kernel_rank_identity(a in small_matrix()) {
            let k = a.kernel_lattice();
            for i in 0..k.nrows() {
                let v = IntMatrix::from_rows(vec![k.row(i).to_vec()]).transpose();
                prop_assert!(a.mul(&v).is_zero());
            }
            prop_assert_eq!(k.nrows() + rational_rank(&a), a.ncols());
            prop_assert_eq!(a.rank(), rational_rank(&a));
            // Saturation: the Smith invariants of the kernel basis are all one.
            prop_assert!(k.invariant_factors().iter().all(|d| d.is_one()));
        }

        #[test]
        fn snf_verified(a in small_matrix()) {
            let (d, u, v) = a.snf_with_transform();
            prop_assert_eq!(u.mul(&a).mul(&v), d.clone());
            let f = a.invariant_factors();
            for w in f.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            for i in 0..d.nrows() {
                for j in 0..d.ncols() {
                    if i != j {
                        prop_assert!(d.get(i, j).is_zero());
                    }
                }
            }
        }

        #[test]
        fn json_round_trip(a in small_matrix()) {
            prop_assert_eq!(IntMatrix::from_json(&a.to_json()).unwrap(), a);
        }
    }
}
