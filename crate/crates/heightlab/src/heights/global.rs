//! Global canonical heights by two independent routes:
//! the sum of Néron local heights over all places, and the doubling limit of
//! naive heights. Both use ĥ(P) = (1/2)·lim 4^{−n} h(x(2ⁿP)).

use super::arch::ArchContext;
use super::nonarch::{lambda_nonarch_with, LocalHeight};
use super::value::HeightValue;
use super::xonly::{doubling_height_x, duplication_data, xcoord_forward, DoublingParams, XCoord};
use crate::curve::reduction::{reduction_data, ReductionData};
use crate::curve::weierstrass::{EllipticCurve, Point};
use crate::error::{Error, Result};
use crate::exact::ball::RealBall;
use crate::exact::cyclotomic::Cyclo;
use crate::exact::quad::Quad;
use crate::exact::rat::val_rat;
use rug::{Integer, Rational};
use serde::Serialize;

/// One row of the local decomposition: place label, weight d_w, λ value.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionEntry {
    pub place: String,
    pub weight: f64,
    pub lambda: HeightValue,
}

#[derive(Clone, Debug)]
pub struct HeightDecomposition {
    pub entries: Vec<DecompositionEntry>,
    pub total: RealBall,
    /// exact non-archimedean parts, for exact-arithmetic consumers
    pub locals: Vec<LocalHeight>,
}

/// ĥ(P) as the weighted sum of local heights (rational points).
/// All computations run on the global minimal model; omitted places are
/// exactly zero there (good reduction, integral x, nonsingular image).
pub fn canonical_height_local_sum(
    e: &EllipticCurve<Rational>,
    p: &Point<Rational>,
    prec: u32,
) -> Result<HeightDecomposition> {
    if p.is_infinity() {
        return Ok(HeightDecomposition {
            entries: vec![],
            total: RealBall::zero(prec),
            locals: vec![],
        });
    }
    let minimal = crate::curve::minimal::global_minimal_model(e)?;
    let pm = minimal.map.forward(p);
    let em = &minimal.curve;
    let xm = pm.x().expect("affine").clone();
    // archimedean part
    let arch = ArchContext::new(em, prec)?;
    let lam_inf = arch.lambda_x(&RealBall::from_rational(prec, &xm))?;
    let mut entries = vec![DecompositionEntry {
        place: "inf".into(),
        weight: 1.0,
        lambda: HeightValue::from_ball(&lam_inf),
    }];
    let mut total = lam_inf;
    // finite places: p | Δ_min or p | denominator of x
    let mut primes: Vec<Integer> = vec![];
    let mut push_primes = |n: &Integer| {
        let mut rem = n.clone().abs();
        let mut q = Integer::from(2);
        while rem > 1 {
            if rem.is_divisible(&q) {
                if !primes.contains(&q) {
                    primes.push(q.clone());
                }
                while rem.is_divisible(&q) {
                    rem /= &q;
                }
            }
            q = q.next_prime();
        }
    };
    push_primes(em.disc.numer());
    push_primes(xm.denom());
    primes.sort();
    let mut locals = vec![];
    for q in &primes {
        let rd = ReductionData {
            p: q.clone(),
            minimal: crate::curve::minimal::MinimalModel {
                curve: em.clone(),
                map: crate::curve::minimal::ModelMap::identity(),
            },
            rtype: classify_on_minimal(em, q),
            nu: nu_on_minimal(em, q),
        };
        let lh = lambda_nonarch_with(&rd, &pm)?;
        let ball = lh.to_ball(prec);
        entries.push(DecompositionEntry {
            place: q.to_string(),
            weight: 1.0,
            lambda: HeightValue::from_ball(&ball),
        });
        total = total.add(&ball);
        locals.push(lh);
    }
    Ok(HeightDecomposition { entries, total, locals })
}

fn classify_on_minimal(em: &EllipticCurve<Rational>, q: &Integer) -> crate::curve::reduction::ReductionType {
    // reuse the classifier via reduction_data on the (already minimal) model
    reduction_data(em, q).expect("nonsingular").rtype
}

fn nu_on_minimal(em: &EllipticCurve<Rational>, q: &Integer) -> u32 {
    let d = em.disc.numer();
    if d.is_divisible(q) {
        crate::exact::rat::val_int(d, q)
    } else {
        0
    }
}

/// ĥ(P) by the doubling limit, for points over ℚ or ℚ(ζ_m).
/// `target_radius` controls the 4^{−n}-tail (default 1e-9).
pub fn canonical_height_doubling(
    e: &EllipticCurve<Rational>,
    p: &Point<Cyclo>,
    prec: u32,
    target_radius: Option<f64>,
) -> Result<RealBall> {
    let x = match p {
        Point::Infinity => return Ok(RealBall::zero(prec)),
        Point::Affine(x, _) => x.clone(),
    };
    canonical_height_doubling_from_x(e, XCoord::from_cyclo(&x), prec, target_radius)
}

/// Doubling-limit height from an x-coordinate (any of the supported backends).
pub fn canonical_height_doubling_from_x(
    e: &EllipticCurve<Rational>,
    x: XCoord,
    prec: u32,
    target_radius: Option<f64>,
) -> Result<RealBall> {
    let minimal = crate::curve::minimal::global_minimal_model(e)?;
    let xm = xcoord_forward(&minimal.map, &x);
    let dd = duplication_data(&minimal.curve);
    let params = DoublingParams {
        target_radius: target_radius.unwrap_or(1e-9),
        prec,
        ..Default::default()
    };
    doubling_height_x(&dd, xm, &params)
}

/// Doubling-limit height of a quadratic-slice point from its Quad x.
pub fn canonical_height_doubling_quad(
    e: &EllipticCurve<Rational>,
    x: &Quad,
    prec: u32,
    target_radius: Option<f64>,
) -> Result<RealBall> {
    canonical_height_doubling_from_x(e, XCoord::Quad(x.clone()), prec, target_radius)
}

/// Convenience: doubling height of a rational point.
pub fn canonical_height_doubling_rational(
    e: &EllipticCurve<Rational>,
    p: &Point<Rational>,
    prec: u32,
    target_radius: Option<f64>,
) -> Result<RealBall> {
    match p {
        Point::Infinity => Ok(RealBall::zero(prec)),
        Point::Affine(x, _) => {
            canonical_height_doubling_from_x(e, XCoord::from_rational(x), prec, target_radius)
        }
    }
}

/// Convenience wrapper asserting P has everywhere-nonnegative contributions;
/// used by torsion tests: ĥ with both methods cross-checked.
pub fn canonical_height_checked(
    e: &EllipticCurve<Rational>,
    p: &Point<Rational>,
    prec: u32,
    target_radius: f64,
) -> Result<RealBall> {
    let a = canonical_height_local_sum(e, p, prec)?;
    let b = canonical_height_doubling_rational(e, p, prec, Some(target_radius))?;
    let diff = a.total.sub(&b);
    if !diff.contains_zero() {
        return Err(Error::Validation(format!(
            "height methods disagree: {} vs {} (radii {:.2e}, {:.2e})",
            a.total.to_f64(),
            b.to_f64(),
            a.total.rad_f64(),
            b.rad_f64()
        )));
    }
    Ok(a.total.union(&b))
}

/// Is |x|_v-denominator support consistent: helper for tests.
pub fn x_denominator_valuation(p: &Point<Rational>, q: &Integer) -> i64 {
    match p {
        Point::Infinity => 0,
        Point::Affine(x, _) => {
            if *x == 0 {
                0
            } else {
                val_rat(x, q).min(0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn curve_37a() -> EllipticCurve<Rational> {
        EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap()
    }

    #[test]
    fn cross_method_37a_generator() {
        let e = curve_37a();
        let p = Point::Affine(q(0), q(0));
        let dec = canonical_height_local_sum(&e, &p, 96).unwrap();
        let dbl = canonical_height_doubling_rational(&e, &p, 96, Some(1e-9)).unwrap();
        let diff = (dec.total.to_f64() - dbl.to_f64()).abs();
        assert!(
            diff <= dec.total.rad_f64() + dbl.rad_f64(),
            "local sum {} vs doubling {} (diff {:.2e})",
            dec.total.to_f64(),
            dbl.to_f64(),
            diff
        );
        // the known value
        assert!((dec.total.to_f64() - 0.0255557041197745).abs() < 1e-9);
    }

    #[test]
    fn cross_method_multiple_points() {
        let e = curve_37a();
        let gen = Point::Affine(q(0), q(0));
        for n in [2i64, 3, -4, 5] {
            let p = e.scalar_mul(n, &gen);
            let dec = canonical_height_local_sum(&e, &p, 96).unwrap();
            let dbl = canonical_height_doubling_rational(&e, &p, 96, Some(1e-8)).unwrap();
            let diff = (dec.total.to_f64() - dbl.to_f64()).abs();
            assert!(
                diff <= dec.total.rad_f64() + dbl.rad_f64() + 1e-12,
                "n = {n}: {} vs {}",
                dec.total.to_f64(),
                dbl.to_f64()
            );
        }
    }

    #[test]
    fn torsion_height_zero_both_methods() {
        // y² = x³ − x: all points are torsion (rank 0, full 2-torsion)
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        for x in [0i64, 1, -1] {
            let p = Point::Affine(q(x), q(0));
            let dec = canonical_height_local_sum(&e, &p, 96).unwrap();
            assert!(
                dec.total.contains_zero(),
                "x = {x}: local sum {} ± {:.2e}",
                dec.total.to_f64(),
                dec.total.rad_f64()
            );
            let dbl = canonical_height_doubling_rational(&e, &p, 96, Some(1e-9)).unwrap();
            assert_eq!(dbl.to_f64(), 0.0);
        }
    }

    #[test]
    fn cross_method_cm_curve_rank_one() {
        // y² = x³ − 25x, generator (−4, 6); bad primes 2, 5
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-25), q(0)).unwrap();
        let p = Point::Affine(q(-4), q(6));
        let dec = canonical_height_local_sum(&e, &p, 96).unwrap();
        let dbl = canonical_height_doubling_rational(&e, &p, 96, Some(1e-8)).unwrap();
        let diff = (dec.total.to_f64() - dbl.to_f64()).abs();
        assert!(
            diff <= dec.total.rad_f64() + dbl.rad_f64() + 1e-12,
            "{} vs {} (diff {:.2e})",
            dec.total.to_f64(),
            dbl.to_f64(),
            diff
        );
        assert!(dec.total.to_f64() > 0.2);
    }

    #[test]
    fn cross_method_additive_curve() {
        // y² = x³ + 5 (additive at 5 and at 3? Δ = −2160·…): exercise descent paths
        let e = EllipticCurve::new(q(0), q(0), q(0), q(0), q(5)).unwrap();
        let g = Point::Affine(q(-1), q(2));
        for n in [1i64, 2, 3, 5] {
            let p = e.scalar_mul(n, &g);
            if p.is_infinity() {
                continue;
            }
            let dec = canonical_height_local_sum(&e, &p, 96).unwrap();
            let dbl = canonical_height_doubling_rational(&e, &p, 96, Some(1e-8)).unwrap();
            let diff = (dec.total.to_f64() - dbl.to_f64()).abs();
            assert!(
                diff <= dec.total.rad_f64() + dbl.rad_f64() + 1e-12,
                "n = {n}: {} vs {} (diff {:.2e})",
                dec.total.to_f64(),
                dbl.to_f64(),
                diff
            );
        }
    }

    #[test]
    fn gaussian_coordinates_cross_check() {
        // P = (4, 6i) on y² = x³ − 25x (x rational, y purely imaginary):
        // x-only doubling in ℚ(i) equals the rational x-only value.
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-25), q(0)).unwrap();
        let x = Cyclo::from_i64(4).lift(4);
        let p: Point<Cyclo> = Point::Affine(
            x,
            Cyclo::zeta(4).mul(&Cyclo::from_i64(6)),
        );
        // it lies on the curve over ℚ(i)
        let ec = e.map_coeffs(|c| Cyclo::from_rational(c.clone()).lift(4)).unwrap();
        assert!(ec.contains(&p));
        let h_gauss = canonical_height_doubling(&e, &p, 96, Some(1e-7)).unwrap();
        let h_rat = canonical_height_doubling_from_x(
            &e,
            XCoord::from_rational(&q(4)),
            96,
            Some(1e-7),
        )
        .unwrap();
        assert!((h_gauss.to_f64() - h_rat.to_f64()).abs() <= h_gauss.rad_f64() + h_rat.rad_f64());
        assert!(h_gauss.to_f64() > 0.1);
    }

    use crate::exact::field::FieldElem;
}
