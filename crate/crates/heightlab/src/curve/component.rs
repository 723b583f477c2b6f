//! Component index of a point at a multiplicative prime: the image under
//! E(ℚ_p) → Φ ≅ (1/ν)ℤ/ℤ, canonicalized to k ↦ min(k, ν−k) (every consumer
//! is even in the index).

use super::reduction::{ReductionData, ReductionType};
use super::weierstrass::Point;
use crate::error::{Error, Result};
use crate::exact::rat::val_rat;
use rug::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentIndex {
    /// canonical residue, 0 ≤ k ≤ ν/2
    pub k: u32,
    pub nu: u32,
}

impl ComponentIndex {
    /// B2(k/ν) = (k/ν)² − (k/ν) + 1/6, exactly.
    pub fn bernoulli2(&self) -> Rational {
        let t = Rational::from((self.k, self.nu));
        Rational::from(&t * &t) - &t + Rational::from((1, 6))
    }
}

/// Component index of a rational point at a multiplicative prime.
/// The input point is given on the same model as `rd` was computed from.
pub fn component_index(p: &Point<Rational>, rd: &ReductionData) -> Result<ComponentIndex> {
    if !rd.rtype.is_multiplicative() {
        return Err(Error::WrongReductionType {
            expected: "multiplicative".into(),
            found: rd.rtype.label().into(),
        });
    }
    let nu = rd.nu;
    let pm = rd.minimal.map.forward(p);
    let (x, _y) = match &pm {
        Point::Infinity => return Ok(ComponentIndex { k: 0, nu }),
        Point::Affine(x, y) => (x.clone(), y.clone()),
    };
    if nu == 1 {
        return Ok(ComponentIndex { k: 0, nu });
    }
    // nonsingular reduction ⟺ identity-component-or-smooth ⟹ k = 0.
    if !reduces_to_singular(&pm, rd) {
        return Ok(ComponentIndex { k: 0, nu });
    }
    let _ = x;
    // singular reduction: k̃ = min(v_p(ψ₂(P)), ν/2) on the minimal model
    let psi2 = rd.minimal.curve.psi2(&pm).expect("affine point");
    let v = if psi2 == 0 { i64::MAX } else { val_rat(&psi2, &rd.p) };
    debug_assert!(v >= 1, "singular reduction forces positive ψ₂ valuation");
    let half = nu / 2;
    let k = if v as u64 >= half as u64 { half } else { v as u32 };
    // for odd ν the index cannot reach ν/2
    debug_assert!(2 * k <= nu);
    Ok(ComponentIndex { k, nu })
}

/// True iff the point (on the given model) reduces to the singular point of
/// the special fiber at rd.p.
pub fn reduces_to_singular(p_min: &Point<Rational>, rd: &ReductionData) -> bool {
    let e = &rd.minimal.curve;
    match p_min {
        Point::Infinity => false,
        Point::Affine(x, y) => {
            if val_rat(x, &rd.p) < 0 {
                return false; // reduces to O
            }
            // singular ⟺ both partials vanish mod p at the reduced point
            let fx = Rational::from(&e.a1 * y)
                - Rational::from(3) * Rational::from(x * x)
                - Rational::from(2) * Rational::from(&e.a2 * x)
                - &e.a4;
            let fy = Rational::from(2) * y + Rational::from(&e.a1 * x) + &e.a3;
            let vx = if fx == 0 { i64::MAX } else { val_rat(&fx, &rd.p) };
            let vy = if fy == 0 { i64::MAX } else { val_rat(&fy, &rd.p) };
            vx >= 1 && vy >= 1
        }
    }
}

/// Same-orientation addition in (1/ν)ℤ/ℤ on canonical representatives is not
/// well defined (the map forgets sign); expose the raw test used by the
/// homomorphism property instead: indices k₁, k₂, k₃ are compatible if
/// k₃ ≡ ±k₁ ± k₂ (mod ν) for some signs.
pub fn additive_compatible(k1: &ComponentIndex, k2: &ComponentIndex, k3: &ComponentIndex) -> bool {
    let nu = k1.nu as i64;
    debug_assert_eq!(k2.nu as i64, nu);
    debug_assert_eq!(k3.nu as i64, nu);
    for s1 in [-1i64, 1] {
        for s2 in [-1i64, 1] {
            let sum = (s1 * k1.k as i64 + s2 * k2.k as i64).rem_euclid(nu);
            let canon = sum.min(nu - sum);
            if canon == k3.k as i64 {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::reduction::reduction_data;
    use crate::curve::weierstrass::EllipticCurve;
    use rug::Integer;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn nu_one_is_trivial() {
        let e = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let rd = reduction_data(&e, &Integer::from(37)).unwrap();
        let p = Point::Affine(q(0), q(0));
        let c = component_index(&p, &rd).unwrap();
        assert_eq!(c, ComponentIndex { k: 0, nu: 1 });
        assert_eq!(c.bernoulli2(), Rational::from((1, 6)));
    }

    #[test]
    fn wrong_type_rejected() {
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        let rd = reduction_data(&e, &Integer::from(5)).unwrap();
        let p = Point::Affine(q(0), q(0));
        assert!(component_index(&p, &rd).is_err());
    }

    #[test]
    fn b2_evenness() {
        for nu in 2u32..=9 {
            for k in 0..=nu / 2 {
                // B2({t}) = B2({−t}): compare k/ν against (ν−k)/ν
                let b2 = |t: &Rational| Rational::from(t * t) - t + Rational::from((1, 6));
                let t1 = Rational::from((k, nu));
                let t2 = Rational::from(((nu - k) % nu, nu));
                assert_eq!(b2(&t1), b2(&t2));
            }
        }
    }
}
