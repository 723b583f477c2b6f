//! Finite fields F_{p^f} as F_p[t]/(h) with h monic irreducible, plus the
//! F_p[x] polynomial helpers shared with the Hensel-lifting code.

use super::field::FieldElem;
use crate::error::{Error, Result};
use rug::{Integer};
use std::fmt;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// polynomials over F_p, represented as Vec<Integer> with entries in [0, p)
// ---------------------------------------------------------------------------

pub fn fp_trim(a: &mut Vec<Integer>) {
    while a.last().map_or(false, |c| *c == 0) {
        a.pop();
    }
}

pub fn fp_add(a: &[Integer], b: &[Integer], p: &Integer) -> Vec<Integer> {
    let n = a.len().max(b.len());
    let mut out = vec![Integer::new(); n];
    for i in 0..n {
        let mut c = Integer::new();
        if let Some(x) = a.get(i) {
            c += x;
        }
        if let Some(y) = b.get(i) {
            c += y;
        }
        out[i] = c % p;
        if out[i] < 0 {
            out[i] += p;
        }
    }
    fp_trim(&mut out);
    out
}

pub fn fp_neg(a: &[Integer], p: &Integer) -> Vec<Integer> {
    let mut out: Vec<Integer> = a.iter().map(|c| ((p.clone() - c) % p.clone())).collect();
    fp_trim(&mut out);
    out
}

pub fn fp_sub(a: &[Integer], b: &[Integer], p: &Integer) -> Vec<Integer> {
    fp_add(a, &fp_neg(b, p), p)
}

pub fn fp_mul(a: &[Integer], b: &[Integer], p: &Integer) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    for c in out.iter_mut() {
        *c %= p;
        if *c < 0 {
            *c += p;
        }
    }
    fp_trim(&mut out);
    out
}

/// Division with remainder; divisor need not be monic (p prime).
pub fn fp_divrem(a: &[Integer], d: &[Integer], p: &Integer) -> (Vec<Integer>, Vec<Integer>) {
    assert!(!d.is_empty(), "division by zero polynomial");
    let mut rem: Vec<Integer> = a.to_vec();
    fp_trim(&mut rem);
    let dd = d.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let lead_inv = d[dd].clone().invert(p).expect("leading coeff invertible");
    let mut q = vec![Integer::new(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = Integer::from(&rem[i] * &lead_inv) % p;
        if c == 0 {
            continue;
        }
        q[i - dd] = c.clone();
        for j in 0..=dd {
            let t = Integer::from(&c * &d[j]);
            rem[i - dd + j] = (Integer::from(&rem[i - dd + j] - t) % p + p) % p.clone();
        }
    }
    fp_trim(&mut rem);
    fp_trim(&mut q);
    (q, rem)
}

pub fn fp_rem(a: &[Integer], d: &[Integer], p: &Integer) -> Vec<Integer> {
    fp_divrem(a, d, p).1
}

pub fn fp_gcd(a: &[Integer], b: &[Integer], p: &Integer) -> Vec<Integer> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        let li = l.invert(p).unwrap();
        x = x.iter().map(|c| Integer::from(c * &li) % p).collect();
    }
    x
}

/// Extended gcd over F_p: (g, s, t) with s·a + t·b = g, g monic.
pub fn fp_xgcd(a: &[Integer], b: &[Integer], p: &Integer) -> (Vec<Integer>, Vec<Integer>, Vec<Integer>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    let mut s0 = vec![Integer::from(1)];
    let mut s1: Vec<Integer> = vec![];
    let mut t0: Vec<Integer> = vec![];
    let mut t1 = vec![Integer::from(1)];
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let ns = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let nt = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    if let Some(l) = r0.last().cloned() {
        let li = l.invert(p).unwrap();
        let norm = |v: &[Integer]| v.iter().map(|c| Integer::from(c * &li) % p).collect::<Vec<_>>();
        return (norm(&r0), norm(&s0), norm(&t0));
    }
    (r0, s0, t0)
}

pub fn fp_pow_mod(base: &[Integer], mut e: Integer, modulus: &[Integer], p: &Integer) -> Vec<Integer> {
    let mut acc = vec![Integer::from(1)];
    let mut b = fp_rem(base, modulus, p);
    while e > 0 {
        if e.is_odd() {
            acc = fp_rem(&fp_mul(&acc, &b, p), modulus, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    acc
}

/// Monic irreducible polynomial of degree f over F_p (deterministic search
/// seeded by small coefficients, then pseudo-random sweep).
pub fn fp_irreducible(p: &Integer, f: u32) -> Vec<Integer> {
    assert!(f >= 1);
    if f == 1 {
        return vec![Integer::new(), Integer::from(1)];
    }
    let mut counter = Integer::new();
    loop {
        // candidate: x^f + (counter expanded base p)
        let mut cand = vec![Integer::new(); f as usize + 1];
        cand[f as usize] = Integer::from(1);
        let mut c = counter.clone();
        let mut i = 0;
        while c > 0 && i < f as usize {
            let (q, r) = c.div_rem(p.clone());
            cand[i] = r;
            c = q;
            i += 1;
        }
        counter += 1;
        if fp_is_irreducible(&cand, p) {
            return cand;
        }
        assert!(counter.significant_bits() < 64, "irreducible search runaway");
    }
}

pub fn fp_is_irreducible(h: &[Integer], p: &Integer) -> bool {
    let f = h.len() - 1;
    if f == 0 {
        return false;
    }
    // x^{p^f} ≡ x mod h, and gcd(x^{p^{f/ℓ}} − x, h) = 1 for primes ℓ | f
    let x = vec![Integer::new(), Integer::from(1)];
    let pf = p.clone().pow(f as u32);
    let xq = fp_pow_mod(&x, pf, h, p);
    if !fp_rem(&fp_sub(&xq, &x, p), h, p).is_empty() {
        return false;
    }
    let mut rem = f as u32;
    let mut ell = 2u32;
    let mut prime_divs = vec![];
    while ell * ell <= rem {
        if rem % ell == 0 {
            prime_divs.push(ell);
            while rem % ell == 0 {
                rem /= ell;
            }
        }
        ell += 1;
    }
    if rem > 1 {
        prime_divs.push(rem);
    }
    for ell in prime_divs {
        let e = p.clone().pow(f as u32 / ell);
        let xe = fp_pow_mod(&x, e, h, p);
        let g = fp_gcd(&fp_sub(&xe, &x, p), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

use rug::ops::Pow;

// ---------------------------------------------------------------------------
// the field F_q
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct FqCtx {
    pub p: Integer,
    pub f: u32,
    /// monic irreducible modulus of degree f
    pub modulus: Vec<Integer>,
}

impl FqCtx {
    pub fn new(p: Integer, f: u32) -> Arc<Self> {
        let modulus = fp_irreducible(&p, f);
        Arc::new(FqCtx { p, f, modulus })
    }

    pub fn order(&self) -> Integer {
        self.p.clone().pow(self.f)
    }
}

#[derive(Clone)]
pub struct FqElem {
    pub ctx: Arc<FqCtx>,
    /// coefficients mod p, degree < f (trailing zeros trimmed)
    pub c: Vec<Integer>,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(w, "Fq[{}^{}]{:?}", self.ctx.p, self.ctx.f, self.c)
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(Arc::ptr_eq(&self.ctx, &other.ctx) || (self.ctx.p == other.ctx.p && self.ctx.modulus == other.ctx.modulus));
        self.c == other.c
    }
}

impl FqElem {
    pub fn new(ctx: &Arc<FqCtx>, poly: Vec<Integer>) -> Self {
        let mut red = fp_rem(&poly, &ctx.modulus, &ctx.p);
        for c in red.iter_mut() {
            if *c < 0 {
                *c += &ctx.p;
            }
        }
        FqElem { ctx: Arc::clone(ctx), c: red }
    }

    pub fn from_integer(ctx: &Arc<FqCtx>, n: &Integer) -> Self {
        let r = Integer::from(Integer::from(Integer::from(n % &ctx.p) + &ctx.p) % &ctx.p);
        FqElem::new(ctx, vec![r])
    }

    pub fn zero(ctx: &Arc<FqCtx>) -> Self {
        FqElem { ctx: Arc::clone(ctx), c: vec![] }
    }

    pub fn one(ctx: &Arc<FqCtx>) -> Self {
        FqElem { ctx: Arc::clone(ctx), c: vec![Integer::from(1)] }
    }

    pub fn gen(ctx: &Arc<FqCtx>) -> Self {
        FqElem::new(ctx, vec![Integer::new(), Integer::from(1)])
    }

    pub fn pow(&self, e: &Integer) -> Self {
        if *e < 0 {
            return self.inv().expect("pow of zero with negative exponent").pow(&Integer::from(-e));
        }
        FqElem {
            ctx: Arc::clone(&self.ctx),
            c: fp_pow_mod(&self.c, e.clone(), &self.ctx.modulus, &self.ctx.p),
        }
    }

    /// Frobenius x ↦ x^p.
    pub fn frobenius(&self) -> Self {
        self.pow(&self.ctx.p.clone())
    }

    /// Multiplicative order (requires nonzero); factors q−1 only through the
    /// exponent-limiting interface `order_divides`.
    pub fn has_exact_order(&self, m: u32) -> bool {
        if self.c.is_empty() {
            return false;
        }
        if !self.pow(&Integer::from(m)).is_one_elem() {
            return false;
        }
        // check proper divisors via prime factors of m
        let mut rem = m;
        let mut ps = vec![];
        let mut d = 2u32;
        while d * d <= rem {
            if rem % d == 0 {
                ps.push(d);
                while rem % d == 0 {
                    rem /= d;
                }
            }
            d += 1;
        }
        if rem > 1 {
            ps.push(rem);
        }
        for ell in ps {
            if self.pow(&Integer::from(m / ell)).is_one_elem() {
                return false;
            }
        }
        true
    }

    pub fn is_one_elem(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }
}

use rug::Complete;

impl FieldElem for FqElem {
    fn zero_like(&self) -> Self {
        FqElem::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        FqElem::one(&self.ctx)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        FqElem { ctx: Arc::clone(&self.ctx), c: fp_add(&self.c, &other.c, &self.ctx.p) }
    }
    fn sub(&self, other: &Self) -> Self {
        FqElem { ctx: Arc::clone(&self.ctx), c: fp_sub(&self.c, &other.c, &self.ctx.p) }
    }
    fn mul(&self, other: &Self) -> Self {
        FqElem {
            ctx: Arc::clone(&self.ctx),
            c: fp_rem(&fp_mul(&self.c, &other.c, &self.ctx.p), &self.ctx.modulus, &self.ctx.p),
        }
    }
    fn neg(&self) -> Self {
        FqElem { ctx: Arc::clone(&self.ctx), c: fp_neg(&self.c, &self.ctx.p) }
    }
    fn inv(&self) -> Option<Self> {
        if self.c.is_empty() {
            return None;
        }
        let (g, s, _t) = fp_xgcd(&self.c, &self.ctx.modulus, &self.ctx.p);
        debug_assert_eq!(g, vec![Integer::from(1)]);
        Some(FqElem::new(&self.ctx, s))
    }
    fn from_i64_like(&self, n: i64) -> Self {
        FqElem::from_integer(&self.ctx, &Integer::from(n))
    }
}

/// A primitive m-th root of unity in F_{p^f}, where f is the multiplicative
/// order of p mod m (so m | p^f − 1).
pub fn primitive_root_of_unity(ctx: &Arc<FqCtx>, m: u32) -> Result<FqElem> {
    let q1 = ctx.order() - Integer::from(1);
    assert!(q1.is_divisible(&Integer::from(m)));
    let exp = q1.clone() / Integer::from(m);
    // deterministic sweep over small field elements
    for trial in 1u64..10_000 {
        // encode trial in base p as a field element
        let mut c = vec![];
        let mut t = Integer::from(trial + 1);
        while t > 0 {
            let (q, r) = t.div_rem(ctx.p.clone());
            c.push(r);
            t = q;
        }
        let x = FqElem::new(ctx, c);
        if FieldElem::is_zero(&x) {
            continue;
        }
        let y = x.pow(&exp);
        if y.has_exact_order(m) {
            return Ok(y);
        }
    }
    Err(Error::PrecisionExhausted("no primitive root of unity found".into()))
}
