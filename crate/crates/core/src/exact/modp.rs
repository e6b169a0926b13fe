//! Dense polynomials over `F_p` for word-sized primes. Internal to the
//! factorization code.

use num_bigint::BigUint;
use rand::Rng;

pub type Fp = Vec<u64>;

pub fn trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod_u(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_u(a: u64, p: u64) -> u64 {
    powmod_u(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut r: Fp = (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    trim(&mut r);
    r
}

pub fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut r: Fp =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect();
    trim(&mut r);
    r
}

pub fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut out: Fp = r.into_iter().map(|x| x as u64).collect();
    trim(&mut out);
    out
}

pub fn scale(a: &Fp, k: u64, p: u64) -> Fp {
    let mut r: Fp = a.iter().map(|&x| mulmod(x, k, p)).collect();
    trim(&mut r);
    r
}

pub fn div_rem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = inv_u(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - mulmod(c, bi, p)) % p;
            }
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    div_rem(a, b, p).1
}

pub fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv_u(l, p), p),
    }
}

pub fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &Fp, p: u64) -> Fp {
    let mut r: Fp = a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
    trim(&mut r);
    r
}

/// `base^e mod m`.
pub fn powmod(base: &Fp, mut e: u128, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Distinct-degree factorization of a monic squarefree `f`: pairs
/// `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            out.push((g.clone(), g.len() - 1));
            break;
        }
        h = powmod(&h, p as u128, &g, p);
        let c = gcd(&sub(&h, &x, p), &g, p);
        if c.len() > 1 {
            g = div_rem(&g, &c, p).0;
            h = rem(&h, &g, p);
            out.push((c, d));
        }
    }
    out
}

/// Splits a product of distinct monic irreducibles of equal degree `d`.
pub fn equal_degree<R: Rng>(f: &Fp, d: usize, p: u64, rng: &mut R) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a: Fp = {
            let mut v: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() < 2 {
            continue;
        }
        let b = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = rem(&mul(&t, &t, p), f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            sub(&powmod_big(&a, &e, f, p), &vec![1], p)
        };
        let g = gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = div_rem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn powmod_big(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = rem(&mul(&result, &result, p), m, p);
        if e.bit(i) {
            result = rem(&mul(&result, &b, p), m, p);
        }
    }
    result
}

/// Complete factorization of a monic squarefree polynomial into monic irreducibles.
pub fn factor_squarefree<R: Rng>(f: &Fp, p: u64, rng: &mut R) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `base^(p^k) mod m` by repeated `p`-th powers.
    fn frob_pow(base: &Fp, k: usize, m: &Fp, p: u64) -> Fp {
        let mut r = rem(base, m, p);
        for _ in 0..k {
            r = powmod(&r, p as u128, m, p);
        }
        r
    }

    /// Rabin's test: independent of the factorizer.
    fn is_irreducible(f: &Fp, p: u64) -> bool {
        let n = f.len() - 1;
        if n <= 1 {
            return true;
        }
        let x: Fp = vec![0, 1];
        if frob_pow(&x, n, f, p) != rem(&x, f, p) {
            return false;
        }
        for q in (2..=n).filter(|&q| n.is_multiple_of(q) && is_prime(q as u64)) {
            let h = frob_pow(&x, n / q, f, p);
            if gcd(&sub(&h, &x, p), f, p).len() > 1 {
                return false;
            }
        }
        true
    }

    #[test]
    fn factors_x4_minus_1_mod_5() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f: Fp = vec![4, 0, 0, 0, 1];
        let fs = factor_squarefree(&f, 5, &mut rng);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|g| g.len() == 2));
        let prod = fs.iter().fold(vec![1u64], |a, g| mul(&a, g, 5));
        assert_eq!(prod, f);
    }

    #[test]
    fn irreducibility_over_small_fields() {
        assert!(is_irreducible(&vec![1, 1, 1], 2));
        assert!(!is_irreducible(&vec![1, 0, 1], 2));
        assert!(is_irreducible(&vec![2, 0, 0, 1], 7));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // x^4 + 1 splits into quadratics mod 3.
        let fs = factor_squarefree(&vec![1, 0, 0, 0, 1], 3, &mut rng);
        assert_eq!(fs.iter().map(|g| g.len() - 1).collect::<Vec<_>>(), vec![2, 2]);
        let fs2 = factor_squarefree(&vec![1, 1, 0, 0, 0, 1], 2, &mut rng);
        let prod = fs2.iter().fold(vec![1u64], |a, g| mul(&a, g, 2));
        assert_eq!(prod, vec![1, 1, 0, 0, 0, 1]);
    }
}
