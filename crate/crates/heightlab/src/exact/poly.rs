//! Dense univariate polynomials over a field, plus integer-polynomial
//! utilities (cyclotomic polynomials, content, resultants).

use super::field::FieldElem;
use rug::{Integer, Rational};

/// Dense polynomial; `coeffs[i]` is the coefficient of x^i, no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: FieldElem> {
    pub coeffs: Vec<F>,
}

impl<F: FieldElem> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// x - c
    pub fn linear_root(c: &F) -> Self {
        Poly::new(vec![c.neg(), c.one_like()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> &F {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.deg() < d.deg() {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.lead().inv().expect("leading coefficient not invertible");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let n = rem.len() - 1;
        let mut q = vec![self.coeffs[0].zero_like(); n - dd + 1];
        for i in (dd..=n).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = rem[i].mul(&lead_inv);
            q[i - dd] = c.clone();
            for j in 0..=dd {
                rem[i - dd + j] = rem[i - dd + j].sub(&c.mul(&d.coeffs[j]));
            }
        }
        (Poly::new(q), Poly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&c.from_i64_like(i as i64)));
        }
        Poly::new(out)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let li = self.lead().inv().expect("leading coefficient not invertible");
        self.scale(&li)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, s, t) monic with s·self + t·o = g.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = o.clone();
        let one = Poly::constant(match self.coeffs.first().or(o.coeffs.first()) {
            Some(c) => c.one_like(),
            None => panic!("xgcd of two zero polynomials"),
        });
        let mut s0 = one.clone();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = one;
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = r0.lead().inv().unwrap();
        (r0.scale(&li), s0.scale(&li), t0.scale(&li))
    }

    /// Square-free part: self / gcd(self, self').
    pub fn squarefree_part(&self) -> Self {
        if self.deg() <= 1 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.deg() == 0 {
            return self.monic();
        }
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    /// Resultant of self and o via the Euclidean remainder chain.
    pub fn resultant(&self, o: &Self) -> F {
        let some = self
            .coeffs
            .first()
            .or(o.coeffs.first())
            .expect("resultant of zero polynomials");
        let one = some.one_like();
        let mut a = self.clone();
        let mut b = o.clone();
        let mut acc = one.clone();
        let mut sign_flip = false;
        loop {
            if b.is_zero() {
                return some.zero_like();
            }
            if b.deg() == 0 {
                // res(a, c) = c^deg(a)
                let mut c = one.clone();
                for _ in 0..a.deg() {
                    c = c.mul(b.lead());
                }
                let mut out = acc.mul(&c);
                if sign_flip {
                    out = out.neg();
                }
                return out;
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return some.zero_like();
            }
            // res(a, b) = (-1)^{deg a · deg b} lc(b)^{deg a - deg r} res(b, r)
            let mut lc_pow = one.clone();
            for _ in 0..(a.deg() - r.deg()) {
                lc_pow = lc_pow.mul(b.lead());
            }
            acc = acc.mul(&lc_pow);
            if (a.deg() * b.deg()) % 2 == 1 {
                sign_flip = !sign_flip;
            }
            a = b;
            b = r;
        }
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let one = Poly::constant(modulus.lead().one_like());
        let mut base = self.rem(modulus);
        let mut acc = one;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }
}

pub type QPoly = Poly<Rational>;

/// Integer content of a rational polynomial: (content, primitive integer poly)
/// with `poly = content · primitive` and primitive having coprime integer
/// coefficients and positive leading coefficient.
pub fn primitive_part(p: &QPoly) -> (Rational, Vec<Integer>) {
    assert!(!p.is_zero());
    let mut den = Integer::from(1);
    for c in &p.coeffs {
        den.lcm_mut(c.denom());
    }
    let ints: Vec<Integer> = p
        .coeffs
        .iter()
        .map(|c| Integer::from(c.numer() * &den) / c.denom().clone())
        .collect();
    let mut g = Integer::new();
    for c in &ints {
        g.gcd_mut(c);
    }
    if ints.last().unwrap() < &0 {
        g = -g;
    }
    let prim: Vec<Integer> = ints.iter().map(|c| Integer::from(c / &g)).collect();
    (Rational::from((g, den)), prim)
}

pub fn qpoly_from_ints(v: &[i64]) -> QPoly {
    Poly::new(v.iter().map(|&c| Rational::from(c)).collect())
}

pub fn qpoly_from_integers(v: &[Integer]) -> QPoly {
    Poly::new(v.iter().map(|c| Rational::from(c)).collect())
}

/// The m-th cyclotomic polynomial Φ_m as an integer-coefficient QPoly,
/// computed by exact division of x^m − 1 by the proper-divisor cyclotomics.
pub fn cyclotomic_poly(m: u32) -> QPoly {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&m) {
        return Poly { coeffs: c.clone() };
    }
    let phi = compute_cyclotomic(m);
    cache.lock().unwrap().insert(m, phi.coeffs.clone());
    phi
}

fn compute_cyclotomic(m: u32) -> QPoly {
    // x^m - 1
    let mut xm = vec![Rational::from(-1)];
    xm.extend(std::iter::repeat(Rational::new()).take(m as usize - 1));
    xm.push(Rational::from(1));
    let mut num = Poly::new(xm);
    for d in 1..m {
        if m % d == 0 {
            let (q, r) = num.divrem(&cyclotomic_poly(d));
            debug_assert!(r.is_zero());
            num = q;
        }
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        // (x^2 - 1) / (x - 1) = x + 1
        let a = qpoly_from_ints(&[-1, 0, 1]);
        let b = qpoly_from_ints(&[-1, 1]);
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, qpoly_from_ints(&[1, 1]));
        let g = a.gcd(&qpoly_from_ints(&[1, 1]));
        assert_eq!(g, qpoly_from_ints(&[1, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic_poly(1), qpoly_from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), qpoly_from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), qpoly_from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(5), qpoly_from_ints(&[1, 1, 1, 1, 1]));
        assert_eq!(
            cyclotomic_poly(12),
            qpoly_from_ints(&[1, 0, -1, 0, 1])
        );
        // Φ_105 is the first with a coefficient of magnitude 2
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.deg(), 48);
        assert!(p105.coeffs.iter().any(|c| *c == Rational::from(-2)));
    }

    #[test]
    fn resultant_matches_known() {
        // res(x^2+1, x^2-2) = (roots of x^2+1 into x^2-2) = (i^2-2)(-i^2-2)... = 9
        let a = qpoly_from_ints(&[1, 0, 1]);
        let b = qpoly_from_ints(&[-2, 0, 1]);
        assert_eq!(a.resultant(&b), Rational::from(9));
        // res(x-3, x-5) = 3 - 5... = g(3) = -2 with res(f,g)=prod g over roots of f
        let f = qpoly_from_ints(&[-3, 1]);
        let g = qpoly_from_ints(&[-5, 1]);
        assert_eq!(f.resultant(&g), Rational::from(-2));
    }

    #[test]
    fn squarefree() {
        // (x-1)^2 (x+2) -> (x-1)(x+2)
        let sq = qpoly_from_ints(&[1, -2, 1]).mul(&qpoly_from_ints(&[2, 1]));
        let sf = sq.squarefree_part();
        assert_eq!(sf, qpoly_from_ints(&[-2, 1, 1]).monic());
    }

    #[test]
    fn primitive() {
        let p = Poly::new(vec![
            Rational::from((3, 2)),
            Rational::from((9, 4)),
        ]);
        let (c, prim) = primitive_part(&p);
        assert_eq!(prim, vec![Integer::from(2), Integer::from(3)]);
        assert_eq!(c, Rational::from((3, 4)));
    }
}
