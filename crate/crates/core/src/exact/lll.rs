//! Exact integral LLL reduction.

use super::matrix::IntMatrix;
use super::ExactError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Lovász parameter `delta = DELTA_NUM / DELTA_DEN`.
pub const DELTA_NUM: i64 = 99;
pub const DELTA_DEN: i64 = 100;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * 2u32 + b).div_floor(&(b * 2u32))
}

struct State {
    b: Vec<Vec<BigInt>>,
    // d[i] is the Gram determinant of the first i vectors.
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (&self.lambda[k][l] * 2u32).abs() <= *dl {
            return;
        }
        let q = round_div(&self.lambda[k][l], dl);
        let bl = self.b[l].clone();
        for (x, y) in self.b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        let t = &q * &self.d[l + 1];
        self.lambda[k][l] -= t;
        for i in 0..l {
            let t = &q * &self.lambda[l][i];
            self.lambda[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lambda[k][j].clone();
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], t);
        }
        let lam = self.lambda[k][k - 1].clone();
        let bnew = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k + 1] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&bnew * &t + &lam * &self.lambda[i][k]) / &self.d[k + 1];
        }
        self.d[k] = bnew;
    }
}

/// LLL-reduces the rows of `basis` (which must be linearly independent).
pub fn lll_reduce(basis: &IntMatrix) -> Result<IntMatrix, ExactError> {
    let n = basis.nrows();
    let cols = basis.ncols();
    if n == 0 {
        return Ok(basis.clone());
    }
    let mut st = State { b: basis.row_vecs(), d: vec![BigInt::zero(); n + 1], lambda: vec![vec![BigInt::zero(); n]; n] };
    st.d[0] = BigInt::one();
    st.d[1] = dot(&st.b[0], &st.b[0]);
    if st.d[1].is_zero() {
        return Err(ExactError::DependentRows);
    }
    let p = BigInt::from(DELTA_NUM);
    let q = BigInt::from(DELTA_DEN);
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&st.b[k], &st.b[j]);
                for i in 0..j {
                    u = (&st.d[i + 1] * &u - &st.lambda[k][i] * &st.lambda[j][i]) / &st.d[i];
                }
                if j < k {
                    st.lambda[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(ExactError::DependentRows);
                    }
                    st.d[k + 1] = u;
                }
            }
        }
        st.red(k, k - 1);
        let lam = &st.lambda[k][k - 1];
        if &q * &st.d[k + 1] * &st.d[k - 1] < &p * &st.d[k] * &st.d[k] - &q * lam * lam {
            st.swap(k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                st.red(k, l);
            }
            k += 1;
        }
    }
    Ok(IntMatrix::from_rows_with_cols(st.b, cols))
}

/// Squared Euclidean norm of a row.
pub fn norm_sqr(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    /// Checks size reduction and the Lovász condition with rational Gram-Schmidt.
    fn is_reduced(b: &IntMatrix) -> bool {
        let n = b.nrows();
        let rows: Vec<Vec<BigRational>> = b
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let dotq = |a: &[BigRational], c: &[BigRational]| -> BigRational { a.iter().zip(c).map(|(x, y)| x * y).sum() };
        let mut star: Vec<Vec<BigRational>> = Vec::new();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut v = rows[i].clone();
            for j in 0..i {
                mu[i][j] = dotq(&rows[i], &star[j]) / dotq(&star[j], &star[j]);
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            star.push(v);
        }
        let half = BigRational::new(1.into(), 2.into());
        let delta = BigRational::new(DELTA_NUM.into(), DELTA_DEN.into());
        if mu.iter().enumerate().any(|(i, row)| row[..i].iter().any(|m| m.abs() > half)) {
            return false;
        }
        for k in 1..n {
            let lhs = dotq(&star[k], &star[k]);
            let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dotq(&star[k - 1], &star[k - 1]);
            if lhs < rhs {
                return false;
            }
        }
        true
    }

    #[test]
    fn identity_is_fixed() {
        let i = IntMatrix::identity(4);
        assert_eq!(lll_reduce(&i).unwrap(), i);
    }

    #[test]
    fn skewed_basis_is_reduced() {
        let b = m(&[vec![1, 0], vec![1_000_000, 1]]);
        let r = lll_reduce(&b).unwrap();
        assert!(is_reduced(&r));
        assert_eq!(r.row_lattice_basis(), b.row_lattice_basis());
        assert!(r.row_vecs().iter().all(|v| norm_sqr(v) <= BigInt::from(2)));
    }

    #[test]
    fn planted_knapsack_vector() {
        // sum a_i s_i = target with s = (1,0,1,1,0,1): rows (e_i, N a_i), last row (0, .., N target).
        let a = [366i64, 385, 392, 401, 422, 437];
        let s = [1i64, 0, 1, 1, 0, 1];
        let target: i64 = a.iter().zip(&s).map(|(x, y)| x * y).sum();
        let big = 1i64 << 20;
        let mut rows = Vec::new();
        for (i, &ai) in a.iter().enumerate() {
            let mut r = vec![0i64; 7];
            r[i] = 2;
            r[6] = big * ai;
            rows.push(r);
        }
        let mut last = vec![1i64; 7];
        last[6] = big * target;
        rows.push(last);
        let r = lll_reduce(&m(&rows)).unwrap();
        let planted: Vec<BigInt> = s.iter().map(|&si| BigInt::from(1 - 2 * si)).collect();
        let negated: Vec<BigInt> = planted.iter().map(|x| -x).collect();
        let found =
            r.row_vecs().into_iter().any(|v| v[6].is_zero() && (v[..6] == planted[..] || v[..6] == negated[..]));
        assert!(found, "planted vector not recovered: {r:?}");
    }

    #[test]
    fn dependent_rows_rejected() {
        assert!(matches!(lll_reduce(&m(&[vec![1, 2], vec![2, 4]])), Err(ExactError::DependentRows)));
    }

    proptest! {
        #[test]
        fn reduces_and_preserves_lattice(rows in proptest::collection::vec(proptest::collection::vec(-50i64..50, 4), 1..5)) {
            let b = m(&rows);
            prop_assume!(b.rank() == b.nrows());
            let r = lll_reduce(&b).unwrap();
            prop_assert!(is_reduced(&r));
            prop_assert_eq!(r.row_lattice_basis(), b.row_lattice_basis());
        }
    }
}
