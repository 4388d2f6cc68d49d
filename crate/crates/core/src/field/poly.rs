//! Small-integer helpers for building the prime-power field: primality,
//! factorization, and dense polynomial arithmetic over GF(p).
//!
//! Polynomials are coefficient vectors, lowest degree first.

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is small; Fermat is plenty.
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo the nonzero polynomial `b` over GF(p).
pub(crate) fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if db == 0 {
        return vec![0];
    }
    let lead_inv = inv_mod(b[db], p) as u64;
    let p64 = p as u64;
    let mut r = a.to_vec();
    for i in (db..r.len()).rev() {
        let c = r[i] as u64 * lead_inv % p64;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let t = (c * bj as u64 % p64) as u32;
            let slot = &mut r[i - db + j];
            *slot = (*slot + p - t) % p;
        }
    }
    r.truncate(db);
    trim(r)
}

/// Base-`p` digits of `index`, `len` of them, least significant first.
pub(crate) fn digits(mut index: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = index % p;
        index /= p;
    }
    out
}

/// Monic polynomial of degree `k` whose lower coefficients are the base-`p`
/// digits of `index`.
fn monic_from_index(index: u32, p: u32, k: usize) -> Vec<u32> {
    let mut c = digits(index, p, k);
    c.push(1);
    c
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return true;
    }
    for deg in 1..=k / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let g = monic_from_index(idx, p, deg);
            let r = rem(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The first monic irreducible polynomial of degree `k` over GF(p), where
/// candidates are ordered by the integer whose base-`p` digits are the
/// non-leading coefficients (constant term least significant).
pub(crate) fn first_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = p.pow(k as u32);
    (0..count)
        .map(|idx| monic_from_index(idx, p, k))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
