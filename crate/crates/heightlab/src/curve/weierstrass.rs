//! Long-Weierstrass curves y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over an
//! exact field, with the full chord–tangent group law.

use crate::error::{Error, Result};
use crate::exact::field::FieldElem;

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticCurve<F: FieldElem> {
    pub a1: F,
    pub a2: F,
    pub a3: F,
    pub a4: F,
    pub a6: F,
    // cached invariants
    pub b2: F,
    pub b4: F,
    pub b6: F,
    pub b8: F,
    pub c4: F,
    pub c6: F,
    pub disc: F,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point<F: FieldElem> {
    Infinity,
    Affine(F, F),
}

impl<F: FieldElem> Point<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine(_, y) => Some(y),
        }
    }
}

impl<F: FieldElem> EllipticCurve<F> {
    pub fn new(a1: F, a2: F, a3: F, a4: F, a6: F) -> Result<Self> {
        let b2 = a1.square().add(&a2.mul_i64(4));
        let b4 = a4.mul_i64(2).add(&a1.mul(&a3));
        let b6 = a3.square().add(&a6.mul_i64(4));
        let b8 = a1
            .square()
            .mul(&a6)
            .add(&a2.mul(&a6).mul_i64(4))
            .sub(&a1.mul(&a3).mul(&a4))
            .add(&a2.mul(&a3.square()))
            .sub(&a4.square());
        let c4 = b2.square().sub(&b4.mul_i64(24));
        let c6 = b2
            .square()
            .mul(&b2)
            .neg()
            .add(&b2.mul(&b4).mul_i64(36))
            .sub(&b6.mul_i64(216));
        let disc = b2
            .square()
            .mul(&b8)
            .neg()
            .sub(&b4.square().mul(&b4).mul_i64(8))
            .sub(&b6.square().mul_i64(27))
            .add(&b2.mul(&b4).mul(&b6).mul_i64(9));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        debug_assert!({
            // 4 b8 = b2 b6 − b4², 1728 Δ = c4³ − c6²
            let lhs = b8.mul_i64(4);
            let rhs = b2.mul(&b6).sub(&b4.square());
            let lhs2 = disc.mul_i64(1728);
            let rhs2 = c4.square().mul(&c4).sub(&c6.square());
            lhs == rhs && lhs2 == rhs2
        });
        Ok(EllipticCurve { a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, disc })
    }

    pub fn j_invariant(&self) -> F {
        self.c4
            .square()
            .mul(&self.c4)
            .div(&self.disc)
            .expect("nonzero discriminant")
    }

    /// Right-hand side evaluated minus left-hand side at (x, y); zero iff on curve.
    pub fn equation_residue(&self, x: &F, y: &F) -> F {
        let lhs = y.square().add(&self.a1.mul(x).mul(y)).add(&self.a3.mul(y));
        let rhs = x
            .square()
            .mul(x)
            .add(&self.a2.mul(&x.square()))
            .add(&self.a4.mul(x))
            .add(&self.a6);
        rhs.sub(&lhs)
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.equation_residue(x, y).is_zero(),
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let ny = y.neg().sub(&self.a1.mul(x)).sub(&self.a3);
                Point::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        match (p, q) {
            (Point::Infinity, _) => q.clone(),
            (_, Point::Infinity) => p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                if x1 == x2 {
                    // q = -p ?
                    let neg_y1 = y1.neg().sub(&self.a1.mul(x1)).sub(&self.a3);
                    if *y2 == neg_y1 {
                        return Point::Infinity;
                    }
                }
                let lambda = if x1 == x2 {
                    // tangent: (3x² + 2a2x + a4 − a1y) / (2y + a1x + a3)
                    let num = x1
                        .square()
                        .mul_i64(3)
                        .add(&self.a2.mul(x1).mul_i64(2))
                        .add(&self.a4)
                        .sub(&self.a1.mul(y1));
                    let den = y1.mul_i64(2).add(&self.a1.mul(x1)).add(&self.a3);
                    num.div(&den).expect("tangent denominator nonzero off 2-torsion")
                } else {
                    let num = y2.sub(y1);
                    let den = x2.sub(x1);
                    num.div(&den).expect("distinct x")
                };
                let x3 = lambda
                    .square()
                    .add(&self.a1.mul(&lambda))
                    .sub(&self.a2)
                    .sub(x1)
                    .sub(x2);
                let y3 = lambda
                    .mul(&x1.sub(&x3))
                    .sub(y1)
                    .sub(&self.a1.mul(&x3))
                    .sub(&self.a3);
                Point::Affine(x3, y3)
            }
        }
    }

    pub fn sub(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &Point<F>) -> Point<F> {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, n: i64, p: &Point<F>) -> Point<F> {
        if n == 0 || p.is_infinity() {
            return Point::Infinity;
        }
        let (mut k, base) = if n < 0 {
            (n.unsigned_abs(), self.neg(p))
        } else {
            (n as u64, p.clone())
        };
        let mut acc = Point::Infinity;
        let mut cur = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            k >>= 1;
            if k > 0 {
                cur = self.double(&cur);
            }
        }
        acc
    }

    /// 2y + a1·x + a3 at an affine point.
    pub fn psi2(&self, p: &Point<F>) -> Option<F> {
        match p {
            Point::Infinity => None,
            Point::Affine(x, y) => Some(y.mul_i64(2).add(&self.a1.mul(x)).add(&self.a3)),
        }
    }

    /// 3x⁴ + b2·x³ + 3b4·x² + 3b6·x + b8 at an affine point (the 3-division value).
    pub fn psi3(&self, p: &Point<F>) -> Option<F> {
        let x = p.x()?;
        let x2 = x.square();
        Some(
            x2.square()
                .mul_i64(3)
                .add(&self.b2.mul(&x2).mul(x))
                .add(&self.b4.mul(&x2).mul_i64(3))
                .add(&self.b6.mul(x).mul_i64(3))
                .add(&self.b8),
        )
    }

    /// Map the curve through another field via a coefficient-wise homomorphism.
    pub fn map_coeffs<G: FieldElem>(&self, f: impl Fn(&F) -> G) -> Result<EllipticCurve<G>> {
        EllipticCurve::new(f(&self.a1), f(&self.a2), f(&self.a3), f(&self.a4), f(&self.a6))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn curve_37a() -> EllipticCurve<Rational> {
        // y² + y = x³ − x
        EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap()
    }

    #[test]
    fn invariants_examples() {
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        assert_eq!(e.disc, q(64));
        assert_eq!(e.j_invariant(), q(1728));
        let e = EllipticCurve::new(q(0), q(0), q(0), q(0), q(1)).unwrap();
        assert_eq!(e.disc, q(-432));
        assert_eq!(e.j_invariant(), q(0));
        let e = curve_37a();
        assert_eq!(e.disc, q(37));
        assert_eq!(e.j_invariant(), Rational::from((110592, 37)));
        assert!(EllipticCurve::new(q(0), q(0), q(0), q(0), q(0)).is_err());
    }

    #[test]
    fn group_law_basics() {
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        let p = Point::Affine(q(0), q(0));
        assert!(e.contains(&p));
        // P + O = P
        assert_eq!(e.add(&p, &Point::Infinity), p);
        // 2-torsion: (0,0) + (0,0) = O
        assert_eq!(e.add(&p, &p), Point::Infinity);
        // 2(0,0) on 37a is (1,0)
        let e = curve_37a();
        let p = Point::Affine(q(0), q(0));
        let two_p = e.double(&p);
        assert_eq!(two_p, Point::Affine(q(1), q(0)));
        assert!(e.contains(&two_p));
    }

    #[test]
    fn scalar_mul_matches_repeated_add() {
        let e = curve_37a();
        let p = Point::Affine(q(0), q(0));
        let mut acc = Point::Infinity;
        for n in 1..=12i64 {
            acc = e.add(&acc, &p);
            assert_eq!(e.scalar_mul(n, &p), acc, "n = {n}");
            assert!(e.contains(&acc));
            assert_eq!(e.scalar_mul(-n, &p), e.neg(&acc));
        }
    }

    #[test]
    fn associativity_random() {
        let e = curve_37a();
        let p = Point::Affine(q(0), q(0));
        // random-ish multiples provide triples
        for (i, j, k) in [(2i64, 3i64, 5i64), (4, -7, 9), (-3, 11, -6), (8, 2, -5)] {
            let a = e.scalar_mul(i, &p);
            let b = e.scalar_mul(j, &p);
            let c = e.scalar_mul(k, &p);
            let left = e.add(&e.add(&a, &b), &c);
            let right = e.add(&a, &e.add(&b, &c));
            assert_eq!(left, right);
        }
    }
}
