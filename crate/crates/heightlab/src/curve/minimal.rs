//! Global minimal Weierstrass models over ℚ (Laska–Kraus–Connell) and the
//! coordinate maps between models.

use super::weierstrass::{EllipticCurve, Point};
use crate::error::Result;
use crate::exact::field::FieldElem;
use crate::exact::rat::val_int;
use rug::ops::{Pow, RemRounding};
use rug::{Integer, Rational};

/// Coordinate change [u; r, s, t]: (x, y) = (u²x' + r, u³y' + s·u²x' + t).
#[derive(Clone, Debug, PartialEq)]
pub struct ModelMap {
    pub u: Rational,
    pub r: Rational,
    pub s: Rational,
    pub t: Rational,
}

impl ModelMap {
    pub fn identity() -> Self {
        ModelMap {
            u: Rational::from(1),
            r: Rational::new(),
            s: Rational::new(),
            t: Rational::new(),
        }
    }

    /// Old-model point to new-model point.
    pub fn forward(&self, p: &Point<Rational>) -> Point<Rational> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let u2 = Rational::from(&self.u * &self.u);
                let u3 = Rational::from(&u2 * &self.u);
                let xs = Rational::from(x - &self.r);
                let xp = Rational::from(&xs / &u2);
                let yp = Rational::from(y - &self.t) - Rational::from(&self.s * &xs);
                Point::Affine(xp, Rational::from(&yp / &u3))
            }
        }
    }

    /// New-model point back to the old model.
    pub fn backward(&self, p: &Point<Rational>) -> Point<Rational> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(xp, yp) => {
                let u2 = Rational::from(&self.u * &self.u);
                let u3 = Rational::from(&u2 * &self.u);
                let x = Rational::from(&u2 * xp) + &self.r;
                let y = Rational::from(&u3 * yp)
                    + Rational::from(&self.s * &Rational::from(&u2 * xp))
                    + &self.t;
                Point::Affine(x, y)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinimalModel {
    /// the global minimal model (integral a-invariants)
    pub curve: EllipticCurve<Rational>,
    /// map from the input model to the minimal model
    pub map: ModelMap,
}

/// Global minimal model of E/ℚ via minimization of (c4, c6) subject to the
/// Kraus integrality conditions, then recovery of small a-invariants.
pub fn global_minimal_model(e: &EllipticCurve<Rational>) -> Result<MinimalModel> {
    // scale to make c4, c6, Δ integral: u = 1/d with d⁴c4, d⁶c6, d¹²Δ ∈ ℤ
    let mut d = Integer::from(1);
    for (val, pow) in [(&e.c4, 4u32), (&e.c6, 6), (&e.disc, 12)] {
        let den = val.denom();
        let mut rem = den.clone();
        let mut q = Integer::from(2);
        while rem > 1 {
            if rem.is_divisible(&q) {
                let mut v = 0u32;
                while rem.is_divisible(&q) {
                    rem /= &q;
                    v += 1;
                }
                let need = (v + pow - 1) / pow;
                let cur = val_int(&d, &q);
                if need > cur {
                    d *= q.clone().pow(need - cur);
                }
            }
            q = q.next_prime();
        }
    }
    let c4i = Rational::from(&e.c4 * &Rational::from(d.clone().pow(4)));
    let c6i = Rational::from(&e.c6 * &Rational::from(d.clone().pow(6)));
    let disci = Rational::from(&e.disc * &Rational::from(d.clone().pow(12)));
    assert_eq!(*c4i.denom(), 1);
    assert_eq!(*c6i.denom(), 1);
    assert_eq!(*disci.denom(), 1);
    let mut c4 = c4i.numer().clone();
    let mut c6 = c6i.numer().clone();
    let mut disc: Integer = disci.numer().clone();
    debug_assert_eq!(
        Integer::from(1728) * disc.clone(),
        c4.clone().pow(3) - c6.clone().pow(2)
    );
    // maximal scaling exponent per prime
    let g = Integer::from(disc.gcd_ref(&c6.clone().square()));
    let mut u_total = Rational::from((1, d));
    let mut primes: Vec<Integer> = vec![Integer::from(2), Integer::from(3)];
    {
        let mut rem = g.clone();
        for q in [Integer::from(2), Integer::from(3)] {
            while rem.is_divisible(&q) {
                rem /= &q;
            }
        }
        let mut q = Integer::from(5);
        while rem > 1 && Integer::from(q.square_ref()) <= rem {
            if rem.is_divisible(&q) {
                primes.push(q.clone());
                while rem.is_divisible(&q) {
                    rem /= &q;
                }
            }
            q = q.next_prime();
        }
        if rem > 1 {
            primes.push(rem);
        }
    }
    for p in primes {
        loop {
            let dv = if disc == 0 { 0 } else { val_int(&disc, &p) };
            let cv4 = if c4 == 0 { u32::MAX } else { val_int(&c4, &p) };
            let cv6 = if c6 == 0 { u32::MAX } else { val_int(&c6, &p) };
            let e_max = (dv / 12).min(cv4 / 4).min(cv6 / 6);
            if e_max == 0 {
                break;
            }
            // trial single-step descale by p and test Kraus
            let p4 = p.clone().pow(4);
            let p6 = p.clone().pow(6);
            let p12 = p.clone().pow(12);
            let nc4 = Integer::from(&c4 / &p4);
            let nc6 = Integer::from(&c6 / &p6);
            let ndisc = Integer::from(&disc / &p12);
            if kraus_ok(&nc4, &nc6) {
                c4 = nc4;
                c6 = nc6;
                disc = ndisc;
                u_total *= Rational::from(&p);
            } else {
                break;
            }
        }
    }
    // recover small integral a-invariants from (c4, c6)
    let curve = curve_from_c4c6(&c4, &c6).expect("Kraus conditions guarantee a model");
    // solve [u, r, s, t] from the two models
    let u = u_total;
    let u2 = Rational::from(&u * &u);
    let u3 = Rational::from(&u2 * &u);
    let u4 = Rational::from(&u2 * &u2);
    let u6 = Rational::from(&u3 * &u3);
    let s = (Rational::from(&curve.a1 * &u) - &e.a1) / Rational::from(2);
    let r = (Rational::from(&curve.a2 * &u2) - &e.a2 + Rational::from(&s * &e.a1) + Rational::from(s.clone().square()))
        / Rational::from(3);
    let t = (Rational::from(&curve.a3 * &u3) - &e.a3 - Rational::from(&r * &e.a1)) / Rational::from(2);
    // verify the remaining equations
    let a4_check = Rational::from(&e.a4)
        - Rational::from(&s * &e.a3)
        + Rational::from(2) * Rational::from(&r * &e.a2)
        - (Rational::from(&t) + Rational::from(&r * &s)) * Rational::from(&e.a1)
        + Rational::from(3) * Rational::from(r.clone().square())
        - Rational::from(2) * Rational::from(&s * &t);
    assert_eq!(a4_check, Rational::from(&curve.a4 * &u4), "model map a4 mismatch");
    let a6_check = Rational::from(&e.a6) + Rational::from(&r * &e.a4)
        + Rational::from(r.clone().square()) * Rational::from(&e.a2)
        + Rational::from(r.clone().square()) * Rational::from(&r)
        - Rational::from(&t * &e.a3)
        - Rational::from(t.clone().square())
        - Rational::from(&r * &t) * Rational::from(&e.a1);
    assert_eq!(a6_check, Rational::from(&curve.a6 * &u6), "model map a6 mismatch");
    Ok(MinimalModel { curve, map: ModelMap { u, r, s, t } })
}

/// Kraus integrality conditions for a (c4, c6) pair with Δ ∈ ℤ.
fn kraus_ok(c4: &Integer, c6: &Integer) -> bool {
    // at 3: v3(c6) ≠ 2
    if *c6 != 0 && val_int(c6, &Integer::from(3)) == 2 {
        return false;
    }
    // at 2: c6 ≡ −1 mod 4, or (c4 ≡ 0 mod 16 and c6 ≡ 0 or 8 mod 32)
    let c6m4 = Integer::from(c6 % &Integer::from(4));
    let c6m4 = if c6m4 < 0 { c6m4 + 4 } else { c6m4 };
    if c6m4 == 3 {
        return true;
    }
    let c4m16 = Integer::from(c4 % &Integer::from(16));
    let c6m32 = Integer::from(c6 % &Integer::from(32));
    let c6m32 = if c6m32 < 0 { c6m32 + 32 } else { c6m32 };
    c4m16 == 0 && (c6m32 == 0 || c6m32 == 8)
}

/// Integral model with the given (c4, c6), with a1, a3 ∈ {0, 1} and |a2| ≤ 1.
pub fn curve_from_c4c6(c4: &Integer, c6: &Integer) -> Option<EllipticCurve<Rational>> {
    for b2_try in -5i64..=6 {
        let b2 = Integer::from(b2_try);
        let num4 = Integer::from(b2.clone().square() - c4);
        if !num4.is_divisible_u(24) {
            continue;
        }
        let b4 = num4 / Integer::from(24);
        let num6: Integer = -b2.clone().pow(3) + Integer::from(36) * Integer::from(&b2 * &b4) - c6;
        if !num6.is_divisible_u(216) {
            continue;
        }
        let b6 = num6 / Integer::from(216);
        // recover a-invariants
        let a1 = Integer::from(b2.clone().rem_euc(Integer::from(2)));
        let a2: Integer = (b2.clone() - a1.clone().square()) / Integer::from(4);
        let a3 = Integer::from(b6.clone().rem_euc(Integer::from(2)));
        let a6: Integer = (b6.clone() - a3.clone().square()) / Integer::from(4);
        let num_a4: Integer = b4.clone() - Integer::from(&a1 * &a3);
        if !num_a4.is_divisible_u(2) {
            continue;
        }
        let a4 = num_a4 / Integer::from(2);
        if Integer::from(4) * a2.clone() + a1.clone().square() != b2 {
            continue;
        }
        let cand = EllipticCurve::new(
            Rational::from(a1),
            Rational::from(a2),
            Rational::from(a3),
            Rational::from(a4),
            Rational::from(a6),
        )
        .ok()?;
        if cand.c4 == Rational::from(c4) && cand.c6 == Rational::from(c6) {
            return Some(cand);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn already_minimal() {
        // 37a1 is globally minimal
        let e = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let m = global_minimal_model(&e).unwrap();
        assert_eq!(m.curve, e);
        assert_eq!(m.map, ModelMap::identity());
    }

    #[test]
    fn scaled_model_reduces() {
        // scale 37a1 by u = 2: x = 4x', y = 8y' gives a1=0,a2=0,a3=8,a4=-16,a6=0
        let e = EllipticCurve::new(q(0), q(0), q(8), q(-16), q(0)).unwrap();
        let m = global_minimal_model(&e).unwrap();
        let expect = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        assert_eq!(m.curve, expect);
        // map points: (0,0) on minimal pulls back to (0,0)
        let p_min = Point::Affine(q(0), q(0));
        let p_orig = m.map.backward(&p_min);
        assert!(e.contains(&p_orig));
        assert_eq!(m.map.forward(&p_orig), p_min);
    }

    #[test]
    fn y2_eq_x3_minus_x_is_minimal() {
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        let m = global_minimal_model(&e).unwrap();
        assert_eq!(m.curve.disc, q(64));
        // rescaling x by u² = 16: y² = x³ − 256x has minimal model y² = x³ − x
        let e2 = EllipticCurve::new(q(0), q(0), q(0), q(-256), q(0)).unwrap();
        let m2 = global_minimal_model(&e2).unwrap();
        assert_eq!(m2.curve.disc, q(64));
        assert_eq!(m2.map.u, Rational::from(4));
        // point transport: (16, 60) on e2 ↦ (1, 15/16·...) check roundtrip instead
        let pt = Point::Affine(q(-16), q(-0) * q(1));
        if e2.contains(&pt) {
            assert!(m2.curve.contains(&m2.map.forward(&pt)));
        }
    }

    #[test]
    fn non_integral_input() {
        // y² = x³ − x/16 scaled down: has integral minimal model
        let e = EllipticCurve::new(q(0), q(0), q(0), Rational::from((-1, 16)), q(0)).unwrap();
        let m = global_minimal_model(&e).unwrap();
        assert_eq!(*m.curve.disc.denom(), 1);
        // j-invariant preserved
        assert_eq!(m.curve.j_invariant(), e.j_invariant());
        // a point maps onto the curve
        let p = Point::Affine(Rational::from((1, 4)), Rational::from(0));
        if e.contains(&p) {
            let pm = m.map.forward(&p);
            assert!(m.curve.contains(&pm));
        }
    }

    #[test]
    fn y2_x3_minus_25x() {
        // rank-1 twist: minimal, disc = 2^6 5^6... compute and sanity check integrality
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-25), q(0)).unwrap();
        let m = global_minimal_model(&e).unwrap();
        assert_eq!(m.curve.j_invariant(), q(1728));
        assert_eq!(*m.curve.disc.denom(), 1);
        let p = Point::Affine(q(-4), q(6));
        assert!(e.contains(&p));
        let pm = m.map.forward(&p);
        assert!(m.curve.contains(&pm));
    }
}
