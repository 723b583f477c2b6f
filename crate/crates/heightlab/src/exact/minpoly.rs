//! Minimal polynomials and norms of cyclotomic numbers.

use super::cyclotomic::Cyclo;
use super::field::FieldElem;
use super::poly::{cyclotomic_poly, Poly, QPoly};
use rug::Rational;

/// Characteristic polynomial of multiplication-by-α on the power basis of
/// ℚ(ζ_m), by Faddeev–LeVerrier. Monic of degree φ(m).
pub fn char_poly(alpha: &Cyclo) -> QPoly {
    let n = alpha.phi() as usize;
    // columns: α · ζ^j in the power basis
    let mut mat = vec![vec![Rational::new(); n]; n];
    let mut col = alpha.clone().lift(alpha.conductor());
    let zeta = Cyclo::zeta(alpha.conductor());
    for j in 0..n {
        for (i, c) in col.coeffs().iter().enumerate() {
            mat[i][j] = c.clone();
        }
        if j + 1 < n {
            col = col.mul(&zeta);
        }
    }
    // Faddeev–LeVerrier: M_1 = M, c_k = -tr(M M_{k-1} ...)/k
    let mut coeffs = vec![Rational::new(); n + 1];
    coeffs[n] = Rational::from(1);
    let mut mk = mat.clone();
    for k in 1..=n {
        let tr: Rational = {
            let mut t = Rational::new();
            for i in 0..n {
                t += &mk[i][i];
            }
            t
        };
        let ck = Rational::from(-tr / Rational::from(k as i64));
        coeffs[n - k] = ck.clone();
        if k == n {
            break;
        }
        // M_{k+1} = M (M_k + c_k I)
        let mut shifted = mk.clone();
        for i in 0..n {
            shifted[i][i] += &ck;
        }
        let mut next = vec![vec![Rational::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::new();
                for l in 0..n {
                    s += Rational::from(&mat[i][l] * &shifted[l][j]);
                }
                next[i][j] = s;
            }
        }
        mk = next;
    }
    Poly::new(coeffs)
}

/// Monic minimal polynomial of α over ℚ: the square-free part of the
/// characteristic polynomial of multiplication-by-α.
pub fn minimal_polynomial(alpha: &Cyclo) -> QPoly {
    if let Some(q) = alpha.to_rational() {
        return Poly::new(vec![Rational::from(-q), Rational::from(1)]);
    }
    char_poly(alpha).squarefree_part()
}

/// Degree of ℚ(α) over ℚ.
pub fn degree(alpha: &Cyclo) -> u32 {
    minimal_polynomial(alpha).deg() as u32
}

/// Field norm from ℚ(ζ_m) of α, via the resultant Res_ζ(Φ_m, α(ζ)).
pub fn norm_resultant(alpha: &Cyclo) -> Rational {
    if alpha.conductor() == 1 {
        return alpha.to_rational().unwrap();
    }
    if FieldElem::is_zero(alpha) {
        return Rational::new();
    }
    cyclotomic_poly(alpha.conductor()).resultant(&alpha.as_poly())
}

/// Trace from ℚ(ζ_m) of α (sum over embeddings), from the multiplication
/// matrix diagonal.
pub fn trace(alpha: &Cyclo) -> Rational {
    let cp = char_poly(alpha);
    let n = cp.deg() as usize;
    Rational::from(-cp.coeffs[n - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::qpoly_from_ints;

    #[test]
    fn minpoly_zeta4() {
        // ζ_4 -> x^2 + 1
        let p = minimal_polynomial(&Cyclo::zeta(4));
        assert_eq!(p, qpoly_from_ints(&[1, 0, 1]));
    }

    #[test]
    fn minpoly_one_plus_zeta3() {
        // oracle: Res_y(Φ_3(y), x − (1 + y)), then square-free part
        let phi3 = cyclotomic_poly(3);
        // resultant in y: treat x as parameter by evaluating symbolically is
        // overkill here; expand by hand instead: conjugates are 1 + ζ3, 1 + ζ3²,
        // so the oracle polynomial is (x − 1 − ζ3)(x − 1 − ζ3²) = x² − x + 1
        // (sum of conjugates = 2 + (−1) = 1, product = (1+ζ)(1+ζ²) = 1).
        let alpha = Cyclo::from_i64(1).add(&Cyclo::zeta(3));
        let p = minimal_polynomial(&alpha);
        assert_eq!(p, qpoly_from_ints(&[1, -1, 1]));
        // cross-check the two symmetric functions against the resultant norm
        assert_eq!(norm_resultant(&alpha), Rational::from(1));
        assert_eq!(trace(&alpha), Rational::from(1));
        let _ = phi3;
    }

    #[test]
    fn minpoly_rational() {
        let p = minimal_polynomial(&Cyclo::from_rational(Rational::from((3, 2))));
        assert_eq!(
            p,
            Poly::new(vec![Rational::from((-3, 2)), Rational::from(1)])
        );
    }

    #[test]
    fn charpoly_is_minpoly_power() {
        // sqrt5 in Q(zeta5) has min poly x^2 - 5 and char poly (x^2-5)^2
        let s5 = Cyclo::zeta(5)
            .sub(&Cyclo::zeta_pow(5, 2))
            .sub(&Cyclo::zeta_pow(5, 3))
            .add(&Cyclo::zeta_pow(5, 4));
        let cp = char_poly(&s5);
        let mp = minimal_polynomial(&s5);
        assert_eq!(mp, qpoly_from_ints(&[-5, 0, 1]));
        assert_eq!(cp, mp.mul(&mp));
        assert_eq!(norm_resultant(&s5), Rational::from(25));
    }
}
