//! Elements of ℚ(ζ_m) as rational-coefficient polynomials in ζ_m reduced
//! modulo the m-th cyclotomic polynomial. Elements carry their conductor;
//! mixed-conductor arithmetic lifts both operands to the lcm.

use super::ball::ComplexBall;
use super::field::FieldElem;
use super::poly::{cyclotomic_poly, Poly, QPoly};
use super::rat::{euler_phi, gcd_u64};
use rug::{Integer, Rational};

#[derive(Clone, Debug)]
pub struct Cyclo {
    m: u32,
    /// Exactly φ(m) coefficients of ζ^0 .. ζ^{φ(m)-1}.
    coeffs: Vec<Rational>,
}

impl Cyclo {
    /// Canonical representative of a polynomial in ζ_m (arbitrary degree,
    /// indexed by exponent) modulo Φ_m.
    pub fn reduce(m: u32, zeta_poly: &[Rational]) -> Self {
        assert!(m >= 1);
        // fold exponents mod m first, then reduce mod Φ_m
        let mut folded = vec![Rational::new(); m as usize];
        for (i, c) in zeta_poly.iter().enumerate() {
            let e = i % m as usize;
            folded[e] += c;
        }
        let phi = euler_phi(m) as usize;
        let p = Poly::new(folded);
        let r = p.rem(&cyclotomic_poly(m));
        let mut coeffs = r.coeffs;
        coeffs.resize(phi, Rational::new());
        Cyclo { m, coeffs }
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclo { m: 1, coeffs: vec![q] }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    /// ζ_m itself.
    pub fn zeta(m: u32) -> Self {
        let mut v = vec![Rational::new(); 2];
        v[1] = Rational::from(1);
        Cyclo::reduce(m, &v)
    }

    /// ζ_m^k
    pub fn zeta_pow(m: u32, k: u64) -> Self {
        let e = (k % m as u64) as usize;
        let mut v = vec![Rational::new(); e + 1];
        v[e] = Rational::from(1);
        Cyclo::reduce(m, &v)
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn phi(&self) -> u32 {
        euler_phi(self.m)
    }

    /// Lift to conductor M (m must divide M): ζ_m = ζ_M^{M/m}.
    pub fn lift(&self, big_m: u32) -> Self {
        assert_eq!(big_m % self.m, 0, "lift target must be a multiple of the conductor");
        if big_m == self.m {
            return self.clone();
        }
        let step = (big_m / self.m) as usize;
        let mut v = vec![Rational::new(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Cyclo::reduce(big_m, &v)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.m == b.m {
            return (a.clone(), b.clone());
        }
        let l = a.m as u64 * b.m as u64 / gcd_u64(a.m as u64, b.m as u64);
        let l = u32::try_from(l).expect("conductor overflow");
        (a.lift(l), b.lift(l))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| *c == 0)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Apply ζ_m ↦ ζ_m^s for gcd(s, m) = 1.
    pub fn galois(&self, s: u64) -> Self {
        assert_eq!(gcd_u64(s % self.m as u64, self.m as u64).max(1), 1, "galois exponent must be invertible");
        let mut v = vec![Rational::new(); self.m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = (i as u64 * s % self.m as u64) as usize;
            v[e] += c;
        }
        Cyclo::reduce(self.m, &v)
    }

    /// Complex conjugation (ζ ↦ ζ^{-1}).
    pub fn conj(&self) -> Self {
        if self.m == 1 {
            return self.clone();
        }
        self.galois(self.m as u64 - 1)
    }

    /// The representative polynomial as a QPoly in ζ.
    pub fn as_poly(&self) -> QPoly {
        Poly::new(self.coeffs.clone())
    }

    /// One ball per embedding ζ_m ↦ e^{2πik/m}, gcd(k, m) = 1, k ascending.
    pub fn complex_embeddings(&self, prec: u32) -> Vec<ComplexBall> {
        assert!(prec >= 32, "precision must be at least 32 bits");
        let mut out = Vec::with_capacity(self.phi() as usize);
        for k in embedding_exponents(self.m) {
            out.push(self.embed(prec, k));
        }
        out
    }

    /// Evaluate at ζ_m ↦ e^{2πik/m}.
    pub fn embed(&self, prec: u32, k: u32) -> ComplexBall {
        let root = ComplexBall::root_of_unity(prec, k, self.m);
        let mut acc = ComplexBall::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&root).add(&ComplexBall::from_rational(prec, c));
        }
        acc
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, q: &Rational) -> Self {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|c| Rational::from(c * q)).collect() }
    }

    /// Common denominator of the coefficients.
    pub fn denominator(&self) -> Integer {
        let mut d = Integer::from(1);
        for c in &self.coeffs {
            d.lcm_mut(c.denom());
        }
        d
    }

    /// True if all coefficients are p-integral.
    pub fn is_p_integral(&self, p: &Integer) -> bool {
        self.coeffs.iter().all(|c| !c.denom().is_divisible(p))
    }
}

/// Exponents k with gcd(k, m) = 1, ascending; the embedding index order.
pub fn embedding_exponents(m: u32) -> Vec<u32> {
    (1..=m.max(1))
        .filter(|k| gcd_u64(*k as u64, m as u64) == 1)
        .take(euler_phi(m) as usize)
        .collect()
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclo::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl FieldElem for Cyclo {
    fn zero_like(&self) -> Self {
        Cyclo { m: self.m, coeffs: vec![Rational::new(); self.coeffs.len()] }
    }

    fn one_like(&self) -> Self {
        let mut c = vec![Rational::new(); self.coeffs.len()];
        c[0] = Rational::from(1);
        Cyclo { m: self.m, coeffs: c }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    fn add(&self, other: &Self) -> Self {
        let (a, b) = Cyclo::common(self, other);
        Cyclo {
            m: a.m,
            coeffs: a
                .coeffs
                .iter()
                .zip(b.coeffs.iter())
                .map(|(x, y)| Rational::from(x + y))
                .collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        let (a, b) = Cyclo::common(self, other);
        let prod = a.as_poly().mul(&b.as_poly());
        let mut v: Vec<Rational> = prod.coeffs;
        v.resize(v.len().max(1), Rational::new());
        Cyclo::reduce(a.m, &v)
    }

    fn neg(&self) -> Self {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect() }
    }

    fn inv(&self) -> Option<Self> {
        if FieldElem::is_zero(self) {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(Cyclo {
                m: self.m,
                coeffs: {
                    let mut v = vec![Rational::new(); self.coeffs.len()];
                    v[0] = Rational::from(q.recip_ref());
                    v
                },
            });
        }
        let phi_m = cyclotomic_poly(self.m);
        let (g, s, _t) = self.as_poly().xgcd(&phi_m);
        debug_assert_eq!(g.deg(), 0, "cyclotomic polynomial not coprime to nonzero element");
        let ginv = g.coeffs[0].clone().recip();
        let inv = s.scale(&ginv);
        let mut v = inv.coeffs;
        v.resize(self.coeffs.len().max(v.len()), Rational::new());
        Some(Cyclo::reduce(self.m, &v))
    }

    fn from_i64_like(&self, n: i64) -> Self {
        let mut c = vec![Rational::new(); self.coeffs.len()];
        c[0] = Rational::from(n);
        Cyclo { m: self.m, coeffs: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn reduce_examples() {
        // ζ_4^2 = -1
        let a = Cyclo::zeta_pow(4, 2);
        assert_eq!(a, Cyclo::from_i64(-1));
        // ζ_6^3 = -1
        let b = Cyclo::zeta_pow(6, 3);
        assert_eq!(b, Cyclo::from_i64(-1));
        // ζ_5^7 = ζ_5^2
        let c = Cyclo::zeta_pow(5, 7);
        assert_eq!(c, Cyclo::zeta_pow(5, 2));
    }

    #[test]
    fn field_ops() {
        let z = Cyclo::zeta(5);
        // 1 + ζ + ζ^2 + ζ^3 + ζ^4 = 0
        let mut s = Cyclo::from_i64(1).lift(5);
        for k in 1..5 {
            s = s.add(&Cyclo::zeta_pow(5, k));
        }
        assert!(FieldElem::is_zero(&s));
        // ζ · ζ^4 = 1
        assert!(z.mul(&Cyclo::zeta_pow(5, 4)).is_one());
        // inverse
        let a = z.add(&Cyclo::from_i64(3)); // 3 + ζ
        let ai = a.inv().unwrap();
        assert!(a.mul(&ai).is_one());
    }

    #[test]
    fn mixed_conductors() {
        // ζ_6 = -ζ_3^2: check ζ_6^2 = ζ_3
        let z6 = Cyclo::zeta(6);
        let z3 = Cyclo::zeta(3);
        assert_eq!(z6.mul(&z6), z3);
        // i + ζ_3 lives in conductor 12
        let i = Cyclo::zeta(4);
        let s = i.add(&z3);
        assert_eq!(s.conductor(), 12);
    }

    #[test]
    fn galois_and_conj() {
        let z = Cyclo::zeta(5);
        let g = z.galois(2);
        assert_eq!(g, Cyclo::zeta_pow(5, 2));
        // conj(i) = -i
        let i = Cyclo::zeta(4);
        assert_eq!(i.conj(), i.neg());
        // sqrt(5) = ζ5 - ζ5^2 - ζ5^3 + ζ5^4 is fixed by ζ→ζ^4
        let s5 = Cyclo::zeta(5)
            .sub(&Cyclo::zeta_pow(5, 2))
            .sub(&Cyclo::zeta_pow(5, 3))
            .add(&Cyclo::zeta_pow(5, 4));
        assert_eq!(s5.galois(4), s5);
        assert_eq!(s5.galois(2), s5.neg());
        assert_eq!(s5.mul(&s5), Cyclo::from_i64(5).lift(5));
    }

    #[test]
    fn embeddings() {
        // embeddings of ζ_4: ±i
        let i = Cyclo::zeta(4);
        let em = i.complex_embeddings(96);
        assert_eq!(em.len(), 2);
        assert!(em[0].im.contains(&q(1)) && em[0].re.contains_zero());
        assert!(em[1].im.contains(&q(-1)) && em[1].re.contains_zero());
        // sum of embeddings of ζ_5 is -1
        let z5 = Cyclo::zeta(5);
        let mut s = ComplexBall::zero(96);
        for e in z5.complex_embeddings(96) {
            s = s.add(&e);
        }
        assert!(s.re.contains(&q(-1)));
        assert!(s.im.contains_zero());
    }
}
