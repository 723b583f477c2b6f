//! Elements of a real or imaginary quadratic field ℚ(√d), d a squarefree
//! nonzero integer. Used for quadratic-slice points and their local data at
//! ramified places.

use super::field::FieldElem;
use rug::{Integer, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Quad {
    pub a: Rational,
    pub b: Rational,
    /// squarefree, not 0 or 1
    pub d: Integer,
}

impl Quad {
    pub fn new(a: Rational, b: Rational, d: Integer) -> Self {
        debug_assert!(d != 0 && d != 1);
        Quad { a, b, d }
    }

    pub fn from_rational(a: Rational, d: Integer) -> Self {
        Quad { a, b: Rational::new(), d }
    }

    pub fn sqrt_d(d: Integer) -> Self {
        Quad { a: Rational::new(), b: Rational::from(1), d }
    }

    pub fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: Rational::from(-&self.b), d: self.d.clone() }
    }

    pub fn norm(&self) -> Rational {
        Rational::from(&self.a * &self.a) - Rational::from(&self.b * &self.b) * Rational::from(&self.d)
    }

    pub fn trace(&self) -> Rational {
        Rational::from(2) * &self.a
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    /// Monic minimal polynomial over ℚ: x − a if rational, else x² − tr·x + nm.
    pub fn min_poly(&self) -> Vec<Rational> {
        if self.is_rational() {
            vec![Rational::from(-&self.a), Rational::from(1)]
        } else {
            vec![self.norm(), -self.trace(), Rational::from(1)]
        }
    }

    /// Valuation at the ramified place over p (requires p | d exactly once):
    /// v_w(a + b√d) = min(2·v_p(a), 2·v_p(b) + 1), normalized v_w(√d-part) = 1.
    /// Returns None for zero.
    pub fn ram_valuation(&self, p: &Integer) -> Option<i64> {
        use super::rat::val_rat;
        debug_assert!(self.d.is_divisible(p));
        debug_assert!(!(self.d.clone() / p.clone()).is_divisible(p));
        let va = if self.a == 0 { None } else { Some(2 * val_rat(&self.a, p)) };
        let vb = if self.b == 0 { None } else { Some(2 * val_rat(&self.b, p) + 1) };
        match (va, vb) {
            (None, None) => None,
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y),
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }
}

impl FieldElem for Quad {
    fn zero_like(&self) -> Self {
        Quad { a: Rational::new(), b: Rational::new(), d: self.d.clone() }
    }
    fn one_like(&self) -> Self {
        Quad { a: Rational::from(1), b: Rational::new(), d: self.d.clone() }
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        Quad {
            a: Rational::from(&self.a + &o.a),
            b: Rational::from(&self.b + &o.b),
            d: self.d.clone(),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        let a = Rational::from(&self.a * &o.a)
            + Rational::from(&self.b * &o.b) * Rational::from(&self.d);
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        Quad { a, b, d: self.d.clone() }
    }
    fn neg(&self) -> Self {
        Quad { a: Rational::from(-&self.a), b: Rational::from(-&self.b), d: self.d.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if FieldElem::is_zero(self) {
            return None;
        }
        let n = self.norm();
        debug_assert!(n != 0, "nonzero element of a quadratic field has nonzero norm");
        let ni = Rational::from(n.recip_ref());
        let c = self.conj();
        Some(Quad { a: Rational::from(&c.a * &ni), b: Rational::from(&c.b * &ni), d: self.d.clone() })
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Quad { a: Rational::from(n), b: Rational::new(), d: self.d.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let s5 = Quad::sqrt_d(Integer::from(5));
        assert_eq!(s5.mul(&s5), Quad::from_rational(Rational::from(5), Integer::from(5)));
        let x = Quad::new(Rational::from(1), Rational::from(2), Integer::from(5)); // 1 + 2√5
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).is_one());
        assert_eq!(x.norm(), Rational::from(-19));
    }

    #[test]
    fn ramified_valuations() {
        let p = Integer::from(5);
        // v(√5) = 1, v(5) = 2, v(1/5 + √5) = min(-2·... ) = -2
        let s5 = Quad::sqrt_d(Integer::from(5));
        assert_eq!(s5.ram_valuation(&p), Some(1));
        let five = Quad::from_rational(Rational::from(5), Integer::from(5));
        assert_eq!(five.ram_valuation(&p), Some(2));
        let mix = Quad::new(Rational::from((1, 5)), Rational::from(1), Integer::from(5));
        assert_eq!(mix.ram_valuation(&p), Some(-2));
        assert_eq!(Quad::from_rational(Rational::new(), Integer::from(5)).ram_valuation(&p), None);
    }
}
