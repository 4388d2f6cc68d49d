//! Table-driven arithmetic in the tower GF(p) ⊂ GF(q) ⊂ GF(q²), q = p^k odd.
//!
//! GF(q) is GF(p)[x]/(g1) for the first monic irreducible `g1` of degree `k`;
//! GF(q²) is GF(q)[Y]/(Y² − n) for the smallest nonsquare `n` of GF(q).
//!
//! Elements of GF(q) are stored by their *encoding index*
//! `c0 + c1·p + … + c_{k−1}·p^{k−1}`, where `c_i` are the coefficients of the
//! polynomial representative. Integer order on the index is the encoding
//! order used for every "smallest" choice in the crate. An element `u + vY`
//! of GF(q²) has encoding index `u·q + v`, so its order is lexicographic on
//! `(u, v)`.
//!
//! GF(q) addition and multiplication use full `q × q` tables; GF(q²)
//! multiplication goes through discrete log/exp tables with respect to the
//! primitive element `gamma`. Fields up to [`MAX_ORDER`] are supported.

mod poly;

use std::fmt;

use thiserror::Error;

pub(crate) use poly::gcd;

/// Largest supported q. Tables are O(q²) entries.
pub const MAX_ORDER: u32 = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("q = {p}^{k} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge { p: u32, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NonSquare,
    #[error("zero has no discrete logarithm")]
    ZeroElement,
    #[error("{d} does not divide q^2 - 1 = {order}")]
    BadModulus { d: u64, order: u64 },
    #[error("coefficient vector {0:?} is not a valid element encoding")]
    BadEncoding(Vec<u32>),
}

/// An element of GF(q), identified by its encoding index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The element `u + vY` of GF(q²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq2 {
    pub u: Fq,
    pub v: Fq,
}

impl Fq2 {
    pub const ZERO: Fq2 = Fq2 { u: Fq::ZERO, v: Fq::ZERO };
    pub const ONE: Fq2 = Fq2 { u: Fq::ONE, v: Fq::ZERO };

    pub fn new(u: Fq, v: Fq) -> Self {
        Fq2 { u, v }
    }

    pub fn is_zero(self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// True when the element lies in the subfield GF(q).
    pub fn is_base(self) -> bool {
        self.v.is_zero()
    }
}

impl From<Fq> for Fq2 {
    fn from(u: Fq) -> Self {
        Fq2 { u, v: Fq::ZERO }
    }
}

/// Immutable arithmetic context for one tower; cheap to share across threads.
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    g1: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    sgn: Vec<i8>,
    n: Fq,
    base_primitive: Fq,
    gamma: Fq2,
    exp2: Vec<Fq2>,
    log2: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("g1", &self.g1)
            .field("n", &self.n)
            .field("gamma", &self.gamma)
            .finish()
    }
}

/// Build the tower for q = p^k.
pub fn make_field_ctx(p: u32, k: u32) -> Result<FieldCtx, FieldError> {
    FieldCtx::new(p, k)
}

impl FieldCtx {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !poly::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if k == 0 {
            return Err(FieldError::TooLarge { p, k });
        }
        let q = match p.checked_pow(k) {
            Some(q) if q <= MAX_ORDER => q,
            _ => return Err(FieldError::TooLarge { p, k }),
        };
        let ku = k as usize;
        let g1 = poly::first_irreducible(p, ku);
        let qs = q as usize;

        let digits: Vec<Vec<u32>> = (0..q).map(|i| poly::digits(i, p, ku)).collect();
        let encode = |c: &[u32]| -> u16 {
            c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16
        };

        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in a..qs {
                let s: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                let mut prod = vec![0u32; 2 * ku - 1];
                for (i, &x) in digits[a].iter().enumerate() {
                    for (j, &y) in digits[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly::rem(&prod, &g1, p);
                r.resize(ku, 0);
                let (s, r) = (encode(&s), encode(&r));
                add[a * qs + b] = s;
                add[b * qs + a] = s;
                mul[a * qs + b] = r;
                mul[b * qs + a] = r;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }

        let mut ctx = FieldCtx {
            p,
            k,
            q,
            g1,
            add,
            mul,
            neg,
            inv,
            sgn: Vec::new(),
            n: Fq::ZERO,
            base_primitive: Fq::ONE,
            gamma: Fq2::ONE,
            exp2: Vec::new(),
            log2: Vec::new(),
        };

        let half = (q as u64 - 1) / 2;
        let minus_one = ctx.neg(Fq::ONE);
        ctx.sgn = (0..qs)
            .map(|i| {
                let x = Fq(i as u16);
                if x.is_zero() {
                    0
                } else if ctx.pow(x, half) == Fq::ONE {
                    1
                } else {
                    debug_assert_eq!(ctx.pow(x, half), minus_one);
                    -1
                }
            })
            .collect();
        ctx.n = (1..qs)
            .map(|i| Fq(i as u16))
            .find(|&x| ctx.sgn[x.index()] < 0)
            .expect("odd q has nonsquares");

        let base_order = q as u64 - 1;
        let base_factors = poly::prime_factors(base_order);
        ctx.base_primitive = (1..qs)
            .map(|i| Fq(i as u16))
            .find(|&x| base_factors.iter().all(|&r| ctx.pow(x, base_order / r) != Fq::ONE))
            .expect("GF(q)* is cyclic");

        let order = ctx.ext_order();
        let factors = poly::prime_factors(order);
        let gamma = (1..qs * qs)
            .map(|i| ctx.from_index2(i))
            .find(|&x| factors.iter().all(|&r| ctx.pow2_slow(x, order / r) != Fq2::ONE))
            .expect("GF(q^2)* is cyclic");
        ctx.gamma = gamma;

        let mut exp2 = Vec::with_capacity(order as usize);
        let mut log2 = vec![u32::MAX; qs * qs];
        let mut cur = Fq2::ONE;
        for i in 0..order as u32 {
            exp2.push(cur);
            log2[ctx.index2(cur)] = i;
            cur = ctx.mul2_slow(cur, gamma);
        }
        debug_assert_eq!(cur, Fq2::ONE);
        ctx.exp2 = exp2;
        ctx.log2 = log2;

        if q % 4 == 3 {
            assert_eq!(gcd(q as u64 + 1, (q as u64 - 1) / 2), 1);
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial of GF(q), constant term first.
    pub fn g1(&self) -> &[u32] {
        &self.g1
    }

    /// The fixed nonsquare with GF(q²) = GF(q)[Y]/(Y² − n).
    pub fn nonsquare(&self) -> Fq {
        self.n
    }

    /// The fixed primitive element of GF(q²).
    pub fn gamma(&self) -> Fq2 {
        self.gamma
    }

    /// Smallest element of GF(q) generating GF(q)*.
    pub fn base_primitive(&self) -> Fq {
        self.base_primitive
    }

    /// |GF(q²)*| = q² − 1.
    pub fn ext_order(&self) -> u64 {
        let q = self.q as u64;
        q * q - 1
    }

    // ---- encodings ----

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q as u16).map(Fq)
    }

    pub fn elements2(&self) -> impl Iterator<Item = Fq2> + '_ {
        (0..(self.q * self.q) as usize).map(|i| self.from_index2(i))
    }

    pub fn from_index(&self, i: usize) -> Fq {
        assert!(i < self.q as usize, "index {i} out of range for GF({})", self.q);
        Fq(i as u16)
    }

    pub fn index2(&self, x: Fq2) -> usize {
        x.u.index() * self.q as usize + x.v.index()
    }

    pub fn from_index2(&self, i: usize) -> Fq2 {
        let q = self.q as usize;
        Fq2::new(self.from_index(i / q), self.from_index(i % q))
    }

    /// The image of an integer under Z → GF(p) ⊂ GF(q).
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u16)
    }

    /// Coefficient vector over GF(p), constant term first, length k.
    pub fn coeffs(&self, x: Fq) -> Vec<u32> {
        poly::digits(x.0 as u32, self.p, self.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fq, FieldError> {
        if c.len() != self.k as usize || c.iter().any(|&d| d >= self.p) {
            return Err(FieldError::BadEncoding(c.to_vec()));
        }
        Ok(Fq(c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d) as u16))
    }

    // ---- GF(q) ----

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.index() * self.q as usize + b.index()])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(Fq(self.inv[a.index()]))
        }
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, mut base: Fq, mut e: u64) -> Fq {
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character extended by zero: +1 on nonzero squares, −1 on
    /// nonsquares, 0 on zero.
    #[inline]
    pub fn sgn(&self, x: Fq) -> i8 {
        self.sgn[x.index()]
    }

    /// The canonical square root: the smaller of `{r, −r}` in encoding order.
    pub fn sqrt(&self, x: Fq) -> Result<Fq, FieldError> {
        if self.sgn(x) < 0 {
            return Err(FieldError::NonSquare);
        }
        let r = if self.q % 4 == 3 {
            self.pow(x, (self.q as u64 + 1) / 4)
        } else {
            self.elements()
                .find(|&r| self.mul(r, r) == x)
                .ok_or(FieldError::NonSquare)?
        };
        Ok(r.min(self.neg(r)))
    }

    /// Σ over λ ∈ GF(q) of sgn(λ² + cλ + 1).
    pub fn quad_char_sum(&self, c: Fq) -> i64 {
        self.elements()
            .map(|l| {
                let v = self.add(self.mul(l, self.add(l, c)), Fq::ONE);
                self.sgn(v) as i64
            })
            .sum()
    }

    // ---- GF(q²) ----

    #[inline]
    pub fn add2(&self, a: Fq2, b: Fq2) -> Fq2 {
        Fq2::new(self.add(a.u, b.u), self.add(a.v, b.v))
    }

    #[inline]
    pub fn neg2(&self, a: Fq2) -> Fq2 {
        Fq2::new(self.neg(a.u), self.neg(a.v))
    }

    #[inline]
    pub fn sub2(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.add2(a, self.neg2(b))
    }

    fn mul2_slow(&self, a: Fq2, b: Fq2) -> Fq2 {
        let uu = self.mul(a.u, b.u);
        let vv = self.mul(self.n, self.mul(a.v, b.v));
        let uv = self.add(self.mul(a.u, b.v), self.mul(a.v, b.u));
        Fq2::new(self.add(uu, vv), uv)
    }

    fn pow2_slow(&self, mut base: Fq2, mut e: u64) -> Fq2 {
        let mut acc = Fq2::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul2_slow(acc, base);
            }
            base = self.mul2_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul2(&self, a: Fq2, b: Fq2) -> Fq2 {
        if a.is_zero() || b.is_zero() {
            return Fq2::ZERO;
        }
        let order = self.exp2.len() as u32;
        let e = self.log2[self.index2(a)] + self.log2[self.index2(b)];
        self.exp2[(if e >= order { e - order } else { e }) as usize]
    }

    /// Multiply by an element of the subfield.
    #[inline]
    pub fn scale2(&self, c: Fq, a: Fq2) -> Fq2 {
        Fq2::new(self.mul(c, a.u), self.mul(c, a.v))
    }

    pub fn inv2(&self, a: Fq2) -> Result<Fq2, FieldError> {
        let l = self.log(a).map_err(|_| FieldError::DivisionByZero)?;
        Ok(self.exp(self.ext_order() - l))
    }

    pub fn pow2(&self, a: Fq2, e: u64) -> Fq2 {
        if e == 0 {
            return Fq2::ONE;
        }
        match self.log(a) {
            Ok(l) => self.exp((l as u128 * e as u128 % self.ext_order() as u128) as u64),
            Err(_) => Fq2::ZERO,
        }
    }

    /// Discrete log base `gamma`, in `[0, q² − 1)`.
    pub fn log(&self, a: Fq2) -> Result<u64, FieldError> {
        if a.is_zero() {
            Err(FieldError::ZeroElement)
        } else {
            Ok(self.log2[self.index2(a)] as u64)
        }
    }

    /// `gamma^e`.
    pub fn exp(&self, e: u64) -> Fq2 {
        self.exp2[(e % self.ext_order()) as usize]
    }

    /// x ↦ x^q, which is (u, v) ↦ (u, −v) since Y^q = −Y.
    #[inline]
    pub fn frobenius(&self, a: Fq2) -> Fq2 {
        Fq2::new(a.u, self.neg(a.v))
    }

    /// x + x^q = 2u.
    #[inline]
    pub fn trace(&self, a: Fq2) -> Fq {
        self.add(a.u, a.u)
    }

    /// x^(q+1) = u² − n·v².
    #[inline]
    pub fn norm(&self, a: Fq2) -> Fq {
        self.sub(self.mul(a.u, a.u), self.mul(self.n, self.mul(a.v, a.v)))
    }

    /// Index `i` of the cyclotomic class C_i^(d, q²) containing `x`, i.e.
    /// `log_gamma(x) mod d`.
    pub fn cyclotomic_index(&self, x: Fq2, d: u64) -> Result<u64, FieldError> {
        let order = self.ext_order();
        if d == 0 || order % d != 0 {
            return Err(FieldError::BadModulus { d, order });
        }
        Ok(self.log(x)? % d)
    }

    /// Index `i` of the class C_i^(e, q) = gamma^{i(q+1)} C_0^(e(q+1), q²)
    /// containing the subfield element `x`; requires e | q − 1.
    pub fn subfield_cyclotomic_index(&self, x: Fq, e: u64) -> Result<u64, FieldError> {
        let q1 = self.q as u64 + 1;
        let l = self.cyclotomic_index(Fq2::from(x), e * q1)?;
        debug_assert_eq!(l % q1, 0);
        Ok(l / q1)
    }
}
