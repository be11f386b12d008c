//! Exact arithmetic in the tower GF(p) ⊂ GF(q) ⊂ GF(q²), q = p^e.
//!
//! Elements of GF(q²) are canonical integer encodings: the base-p digits of
//! the encoding are the coefficients of the element written as a polynomial
//! in the class of the variable t modulo a fixed irreducible polynomial of
//! degree 2e over GF(p). The modulus is chosen deterministically as the
//! lexicographically smallest monic irreducible whose root t is primitive,
//! so encodings are reproducible across runs and implementations. α denotes
//! that root and β = α^(q+1) generates the multiplicative group of GF(q).
//!
//! Multiplication, inversion and powers go through discrete-log tables;
//! addition is digit-wise mod p (XOR in characteristic 2). A context is
//! immutable after construction and every operation is a pure function of
//! (context, inputs), so contexts can be shared freely across threads.

use crate::{Error, Result};
use serde::Serialize;

/// Default cap on |GF(q²)|; covers q up to 256.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 16;

const LOG_SENTINEL: u32 = u32::MAX;

/// An element of GF(q²) as its canonical integer encoding.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

pub const ZERO: Elem = Elem(0);
pub const ONE: Elem = Elem(1);

/// Immutable arithmetic context for GF(q²) with q = p^e.
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    q2: u32,
    /// Monic modulus of degree 2e, coefficients low-to-high over GF(p).
    modulus: Vec<u32>,
    /// exp[i] = encoding of α^i for 0 ≤ i < 2(q²−1); doubled so products
    /// of two logs never need a reduction.
    exp: Vec<u32>,
    /// log[enc] for enc ≠ 0; log[0] is a sentinel.
    log: Vec<u32>,
    beta: Elem,
}

impl FieldCtx {
    /// Builds GF(q²) for q = p^e under the default table limit.
    pub fn new(p: u32, e: u32) -> Result<FieldCtx> {
        FieldCtx::with_table_limit(p, e, DEFAULT_TABLE_LIMIT)
    }

    /// Builds the context for a prime power q given directly.
    pub fn for_q(q: u32) -> Result<FieldCtx> {
        let (p, e) = factor_prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("q={q} is not a prime power")))?;
        FieldCtx::new(p, e)
    }

    pub fn with_table_limit(p: u32, e: u32, limit: u64) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("extension degree must be ≥ 1".into()));
        }
        let q2_wide = (p as u64).checked_pow(2 * e).ok_or(Error::FieldTooLarge {
            q2: u64::MAX,
            limit,
        })?;
        if q2_wide > limit {
            return Err(Error::FieldTooLarge { q2: q2_wide, limit });
        }
        let q = (p as u64).pow(e) as u32;
        let q2 = q2_wide as u32;

        let modulus = find_modulus(p, 2 * e as usize);
        let ord = (q2 - 1) as usize;

        // Power up t itself; each step is a shift plus one reduction.
        let mut exp = vec![0u32; 2 * ord];
        let mut log = vec![LOG_SENTINEL; q2 as usize];
        let mut cur = vec![0u32; 2 * e as usize];
        cur[0] = 1;
        for i in 0..ord {
            let enc = encode(&cur, p);
            assert!(
                i == 0 || enc != 1,
                "modulus root fails to have order q^2-1"
            );
            exp[i] = enc;
            log[enc as usize] = i as u32;
            mul_by_t_in_place(&mut cur, &modulus, p);
        }
        assert_eq!(encode(&cur, p), 1, "alpha^(q^2-1) != 1");
        for i in 0..ord {
            exp[ord + i] = exp[i];
        }
        debug_assert!(log.iter().skip(1).all(|&l| l != LOG_SENTINEL));

        let beta = Elem(exp[(q as usize + 1) % ord]);
        Ok(FieldCtx {
            p,
            e,
            q,
            q2,
            modulus,
            exp,
            log,
            beta,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn q2(&self) -> u32 {
        self.q2
    }

    /// True in characteristic 2.
    pub fn even(&self) -> bool {
        self.p == 2
    }

    /// Modulus coefficients, low-to-high, length 2e+1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed primitive element α (the class of t, encoding p).
    pub fn alpha(&self) -> Elem {
        Elem(self.exp[1])
    }

    /// β = α^(q+1), a primitive element of the subfield GF(q).
    pub fn beta(&self) -> Elem {
        self.beta
    }

    /// α^k for any signed k.
    pub fn alpha_pow(&self, k: i64) -> Elem {
        let ord = (self.q2 - 1) as i64;
        Elem(self.exp[k.rem_euclid(ord) as usize])
    }

    /// Discrete log base α; None for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// The prime-subfield element n·1 (encoding n mod p).
    pub fn int(&self, n: u64) -> Elem {
        Elem((n % self.p as u64) as u32)
    }

    /// All q² elements in ascending encoding order.
    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        (0..self.q2).map(Elem)
    }

    pub fn nonzero_elems(&self) -> impl Iterator<Item = Elem> {
        (1..self.q2).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out: u64 = 0;
        let mut place: u64 = 1;
        while x != 0 || y != 0 {
            out += ((x % p + y % p) % p) * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut x = a.0 as u64;
        let mut out: u64 = 0;
        let mut place: u64 = 1;
        while x != 0 {
            out += ((p - x % p) % p) * place;
            place *= p;
            x /= p;
        }
        Elem(out as u32)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return ZERO;
        }
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Elem(self.exp[i])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let ord = (self.q2 - 1) as usize;
        let l = self.log[a.0 as usize] as usize;
        Ok(Elem(self.exp[(ord - l) % ord]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    #[inline]
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if a.0 == 0 {
            return if k == 0 { ONE } else { ZERO };
        }
        let ord = (self.q2 - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[(l * (k % ord) % ord) as usize])
    }

    /// The norm into GF(q): x ↦ x^(q+1).
    #[inline]
    pub fn norm(&self, a: Elem) -> Elem {
        self.pow(a, self.q as u64 + 1)
    }

    /// The trace into GF(q): x ↦ x^q + x.
    #[inline]
    pub fn trace(&self, a: Elem) -> Elem {
        self.add(self.frobenius(a), a)
    }

    /// Conjugation x ↦ x^q; an involution fixing exactly GF(q).
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.q as u64)
    }

    /// Membership in the subfield GF(q) = fixed points of x ↦ x^q.
    #[inline]
    pub fn in_subfield(&self, a: Elem) -> bool {
        self.frobenius(a) == a
    }

    /// The q elements of GF(q) = {0} ∪ {β^i}, ascending by encoding.
    pub fn subfield_elems(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.elems().filter(|&a| self.in_subfield(a)).collect();
        debug_assert_eq!(out.len(), self.q as usize);
        out.sort();
        out
    }

    /// Trace from GF(q) down to the prime field, returned as an integer in
    /// [0, p). The input must lie in GF(q).
    pub fn trace_to_prime(&self, a: Elem) -> Result<u32> {
        if !self.in_subfield(a) {
            return Err(Error::NotInSubfield(a.0));
        }
        let mut acc = ZERO;
        let mut cur = a;
        for _ in 0..self.e {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        Ok(acc.0)
    }

    /// Squares of GF(q²). In even characteristic squaring is a bijection,
    /// so everything is a square; in odd characteristic the nonzero squares
    /// are the even discrete logs.
    pub fn is_square(&self, a: Elem) -> bool {
        if self.p == 2 || a.0 == 0 {
            return true;
        }
        self.log[a.0 as usize] % 2 == 0
    }

    /// Square root in odd characteristic: α^(log/2) for even logs, 0 ↦ 0.
    pub fn sqrt(&self, a: Elem) -> Result<Elem> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if a.0 == 0 {
            return Ok(ZERO);
        }
        let l = self.log[a.0 as usize];
        if l % 2 != 0 {
            return Err(Error::NotASquare(a.0));
        }
        Ok(Elem(self.exp[(l / 2) as usize]))
    }

    /// Square root in even characteristic, the inverse of the squaring
    /// bijection: x ↦ x^(q²/2).
    pub fn sqrt_even_char(&self, a: Elem) -> Result<Elem> {
        if self.p != 2 {
            return Err(Error::OddCharacteristic);
        }
        Ok(self.pow(a, self.q2 as u64 / 2))
    }

    /// Whether a nonzero subfield element is a square *within* GF(q)
    /// (odd characteristic). Zero counts as a square.
    pub fn is_subfield_square(&self, a: Elem) -> Result<bool> {
        if !self.in_subfield(a) {
            return Err(Error::NotInSubfield(a.0));
        }
        if a.0 == 0 {
            return Ok(true);
        }
        let l = self.log[a.0 as usize];
        debug_assert_eq!(l % (self.q + 1), 0);
        Ok((l / (self.q + 1)) % 2 == 0)
    }
}

/// q = p^e for prime p, or None.
pub fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut n = q;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            return if n == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Base-p digit encoding of a coefficient vector.
fn encode(coeffs: &[u32], p: u32) -> u32 {
    let mut out: u64 = 0;
    for &c in coeffs.iter().rev() {
        out = out * p as u64 + c as u64;
    }
    out as u32
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = (n % p as u64) as u32;
        n /= p as u64;
    }
    debug_assert_eq!(n, 0);
    out
}

/// Multiplies a degree-<n polynomial (n coefficients) by t and reduces by
/// the monic degree-n modulus.
fn mul_by_t_in_place(coeffs: &mut [u32], modulus: &[u32], p: u32) {
    let n = coeffs.len();
    let top = coeffs[n - 1];
    for i in (1..n).rev() {
        coeffs[i] = coeffs[i - 1];
    }
    coeffs[0] = 0;
    if top != 0 {
        for i in 0..n {
            // coeffs[i] -= top * modulus[i]
            let m = (top as u64 * modulus[i] as u64) % p as u64;
            coeffs[i] = ((coeffs[i] as u64 + p as u64 - m) % p as u64) as u32;
        }
    }
}

fn poly_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of a by b over GF(p); b monic.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() as u64;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let m = (lead * b[i] as u64) % p as u64;
            let idx = shift + i;
            r[idx] = ((r[idx] as u64 + p as u64 - m) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
        }
    }
    poly_rem(&prod, modulus, p)
}

fn poly_powmod(base: &[u32], mut k: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = base.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        k >>= 1;
    }
    acc
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    // Trial division by every monic polynomial of degree up to n/2.
    for d in 1..=n / 2 {
        for low in 0..(p as u64).pow(d as u32) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The class of t has full multiplicative order p^n − 1 modulo f.
fn root_is_primitive(f: &[u32], p: u32, n: usize) -> bool {
    let ord = (p as u64).pow(n as u32) - 1;
    let t = vec![0, 1];
    for r in prime_factors(ord) {
        if poly_powmod(&t, ord / r, f, p) == vec![1] {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree n over GF(p)
/// whose root is primitive, scanning candidates in ascending encoding order.
fn find_modulus(p: u32, n: usize) -> Vec<u32> {
    for low in 0..(p as u64).pow(n as u32) {
        let mut f = digits(low, p, n);
        f.push(1);
        if is_irreducible(&f, p) && root_is_primitive(&f, p, n) {
            return f;
        }
    }
    unreachable!("primitive polynomials of degree {n} exist over GF({p})")
}
