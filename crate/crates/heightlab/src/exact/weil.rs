//! Absolute logarithmic Weil height of cyclotomic numbers.

use super::ball::RealBall;
use super::cyclotomic::Cyclo;
use super::mahler::log_mahler;
use super::minpoly::minimal_polynomial;
use super::poly::primitive_part;
use super::field::FieldElem;
use crate::error::Result;
use rug::{Integer, Rational};

/// h(α) = log M(primitive integer multiple of the minimal polynomial) / deg α.
/// Nonnegative; h(0) = 0 and h of roots of unity is 0.
pub fn weil_height(alpha: &Cyclo, prec: u32) -> Result<RealBall> {
    if let Some(q) = alpha.to_rational() {
        return weil_height_rational(&q, prec);
    }
    let mp = minimal_polynomial(alpha);
    let deg = mp.deg() as u32;
    let (_, prim) = primitive_part(&mp);
    let lm = log_mahler(&prim, prec)?;
    Ok(lm.mul(&RealBall::from_rational(prec, &Rational::from((1, deg)))))
}

/// h(p/q) = log max(|p|, |q|).
pub fn weil_height_rational(x: &Rational, prec: u32) -> Result<RealBall> {
    if *x == 0 {
        return Ok(RealBall::zero(prec));
    }
    let n = x.numer().clone().abs();
    let d = x.denom().clone();
    let m: Integer = if n > d { n } else { d };
    if m == 1 {
        return Ok(RealBall::zero(prec));
    }
    RealBall::from_integer(prec, &m).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_have_height_zero() {
        for m in [3u32, 4, 5, 8, 12] {
            let h = weil_height(&Cyclo::zeta(m), 96).unwrap();
            assert!(h.contains(&Rational::new()), "m = {m}");
            assert!(h.rad_f64() < 1e-9);
        }
    }

    #[test]
    fn height_of_two() {
        let h = weil_height(&Cyclo::from_i64(2), 96).unwrap();
        assert!((h.to_f64() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn golden_ratio_height() {
        // root of x² − x − 1 has height (1/2) log((1+√5)/2); build it inside ℚ(ζ5):
        // (1+√5)/2 = −(ζ5² + ζ5³)
        let phi = Cyclo::zeta_pow(5, 2).add(&Cyclo::zeta_pow(5, 3)).neg();
        let h = weil_height(&phi, 96).unwrap();
        let expect = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2.0;
        assert!((h.to_f64() - expect).abs() < 1e-10, "{} vs {}", h.to_f64(), expect);
    }

    #[test]
    fn galois_invariance() {
        // h(σα) = h(α) for all automorphisms
        let alpha = Cyclo::zeta(5).mul(&Cyclo::from_i64(2)).add(&Cyclo::from_i64(1).lift(5));
        let h0 = weil_height(&alpha, 96).unwrap();
        for s in [2u64, 3, 4] {
            let hs = weil_height(&alpha.galois(s), 96).unwrap();
            assert!((h0.to_f64() - hs.to_f64()).abs() < 1e-12);
        }
    }
}
