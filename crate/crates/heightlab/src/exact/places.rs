//! Finite places of ℚ(ζ_m) above a rational prime p with p ∤ m.
//!
//! Each place corresponds to a monic irreducible degree-f factor of Φ_m mod p
//! (f = multiplicative order of p mod m). Valuations are read off by mapping
//! ζ_m to a Hensel-lifted root of that factor in the unramified extension,
//! working modulo p^N with N doubled on demand.

use super::cyclotomic::Cyclo;
use super::ffield::{fp_divrem, fp_mul, fp_sub, fp_trim, fp_xgcd, primitive_root_of_unity, FqCtx, FqElem};
use super::field::FieldElem;
use super::poly::{cyclotomic_poly, primitive_part};
use super::rat::{euler_phi, gcd_u64, mult_order, val_int};
use crate::error::{Error, Result};
use rug::ops::RemRounding;
use rug::{Complete, Integer};
use std::sync::Arc;

pub const DEFAULT_HENSEL_PREC: u32 = 64;

#[derive(Clone, Debug)]
pub struct FinitePlaceData {
    pub p: Integer,
    pub m: u32,
    /// residue degree = multiplicative order of p mod m
    pub f: u32,
    /// residue field F_{p^f}
    pub fq: Arc<FqCtx>,
    /// primitive m-th root of unity in F_{p^f}: the reduction of ζ_m at this place
    pub root: FqElem,
    /// monic degree-f factor of Φ_m mod p with `root` as a root
    pub factor_mod_p: Vec<Integer>,
    /// Hensel precision exponent N
    pub n_prec: u32,
    /// p^N
    pub modulus: Integer,
    /// the factor lifted to ℤ/p^N, monic of degree f; ζ_m ↦ Y in ℤ[Y]/(p^N, g)
    pub g: Vec<Integer>,
}

impl FinitePlaceData {
    /// Local-degree weight d_w = f / φ(m) (over ℚ: Σ_{w|p} d_w = 1).
    pub fn weight(&self) -> rug::Rational {
        rug::Rational::from((self.f, euler_phi(self.m)))
    }

    /// A fresh copy lifted to precision p^N.
    pub fn relift(&self, n: u32) -> Result<Self> {
        let mut out = self.clone();
        let (g, modulus) = hensel_lift_factor(self.m, &self.p, &self.factor_mod_p, n)?;
        out.g = g;
        out.modulus = modulus;
        out.n_prec = n;
        Ok(out)
    }
}

/// All places of ℚ(ζ_m) above p, for p ∤ m. Returns φ(m)/f places.
pub fn place_structure(m: u32, p: &Integer) -> Result<Vec<FinitePlaceData>> {
    place_structure_prec(m, p, DEFAULT_HENSEL_PREC)
}

pub fn place_structure_prec(m: u32, p: &Integer, n_prec: u32) -> Result<Vec<FinitePlaceData>> {
    assert!(m >= 1);
    if m > 1 && Integer::from(m).is_divisible(p) {
        return Err(Error::RamifiedUnsupported { p: p.to_u64().unwrap_or(0), m });
    }
    if m == 1 {
        // the single place of ℚ above p: Φ_1 = x − 1, root 1
        let fq = FqCtx::new(p.clone(), 1);
        let root = FqElem::one(&fq);
        let g = vec![Integer::from((-Integer::from(1)).rem_euc(&p.clone().pow(n_prec))), Integer::from(1)];
        return Ok(vec![FinitePlaceData {
            p: p.clone(),
            m,
            f: 1,
            fq,
            root,
            factor_mod_p: vec![Integer::from((-Integer::from(1)).rem_euc(p)), Integer::from(1)],
            n_prec,
            modulus: p.clone().pow(n_prec),
            g,
        }]);
    }
    let pm = Integer::from(p % Integer::from(m)).to_u64().unwrap();
    let f = mult_order(pm, m);
    let fq = FqCtx::new(p.clone(), f);
    let zeta = primitive_root_of_unity(&fq, m)?;
    // Frobenius orbits on exponents coprime to m
    let mut orbits: Vec<Vec<u64>> = vec![];
    let mut seen = vec![false; m as usize];
    for k in 1..m as u64 {
        if gcd_u64(k, m as u64) != 1 || seen[k as usize] {
            continue;
        }
        let mut orbit = vec![];
        let mut e = k;
        loop {
            orbit.push(e);
            seen[e as usize] = true;
            e = e * pm % m as u64;
            if e == k {
                break;
            }
        }
        debug_assert_eq!(orbit.len() as u32, f);
        orbits.push(orbit);
    }
    debug_assert_eq!(orbits.len() as u32, euler_phi(m) / f);
    let mut places = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        // factor over F_p: Π (Y − ζ^e) computed in F_q[Y]
        let mut poly: Vec<FqElem> = vec![FqElem::one(&fq)];
        for &e in &orbit {
            let r = zeta.pow(&Integer::from(e));
            // multiply by (Y − r)
            let mut next = vec![FqElem::zero(&fq); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(&r));
            }
            poly = next;
        }
        // coefficients must be scalars in F_p
        let mut factor: Vec<Integer> = Vec::with_capacity(poly.len());
        for c in &poly {
            assert!(c.c.len() <= 1, "orbit factor must have prime-field coefficients");
            factor.push(c.c.first().cloned().unwrap_or_default());
        }
        let (g, modulus) = hensel_lift_factor(m, p, &factor, n_prec)?;
        let root = zeta.pow(&Integer::from(orbit[0]));
        places.push(FinitePlaceData {
            p: p.clone(),
            m,
            f,
            fq: Arc::clone(&fq),
            root,
            factor_mod_p: factor,
            n_prec,
            modulus,
            g,
        });
    }
    Ok(places)
}

// ---------------------------------------------------------------------------
// ℤ/q[Y] helpers (q = p^N, not prime): ring ops and division by monic
// ---------------------------------------------------------------------------

fn zq_norm(a: &mut Vec<Integer>, q: &Integer) {
    for c in a.iter_mut() {
        *c = Integer::from(c.clone().rem_euc(q));
    }
    fp_trim(a);
}

fn zq_mul(a: &[Integer], b: &[Integer], q: &Integer) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += (x * y).complete();
        }
    }
    zq_norm(&mut out, q);
    out
}

fn zq_add(a: &[Integer], b: &[Integer], q: &Integer) -> Vec<Integer> {
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
        out[i] = c;
    }
    zq_norm(&mut out, q);
    out
}

fn zq_sub(a: &[Integer], b: &[Integer], q: &Integer) -> Vec<Integer> {
    let neg: Vec<Integer> = b.iter().map(|c| (-c).complete()).collect();
    zq_add(a, &neg, q)
}

/// Division with remainder by a monic divisor, valid over ℤ/q.
fn zq_divrem_monic(a: &[Integer], d: &[Integer], q: &Integer) -> (Vec<Integer>, Vec<Integer>) {
    assert!(d.last().map_or(false, |c| *c == 1), "divisor must be monic");
    let mut rem: Vec<Integer> = a.to_vec();
    zq_norm(&mut rem, q);
    let dd = d.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut qout = vec![Integer::new(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c == 0 {
            continue;
        }
        qout[i - dd] = c.clone();
        for j in 0..=dd {
            rem[i - dd + j] = Integer::from(Integer::from(&rem[i - dd + j] - Integer::from(&c * &d[j])).rem_euc(q));
        }
    }
    fp_trim(&mut rem);
    fp_trim(&mut qout);
    (qout, rem)
}

/// Lift the factorization Φ_m ≡ factor · cofactor (mod p) to modulus p^N.
/// Returns (g mod p^N, p^N) with g monic, g ≡ factor mod p, g | Φ_m mod p^N.
fn hensel_lift_factor(m: u32, p: &Integer, factor: &[Integer], n_prec: u32) -> Result<(Vec<Integer>, Integer)> {
    let phi_poly = cyclotomic_poly(m);
    let (_, f_int) = primitive_part(&phi_poly);
    let target = p.clone().pow(n_prec);
    if factor.len() == f_int.len() {
        // the factor is Φ_m itself (inert case): no lifting needed
        let mut g = f_int;
        zq_norm(&mut g, &target);
        // zq_norm trims trailing zeros only; monic lead 1 survives
        return Ok((g, target));
    }
    // cofactor mod p
    let (h0, r0) = fp_divrem(&f_int, factor, p);
    assert!(r0.is_empty(), "factor must divide Φ_m mod p");
    // Bezout: s·h + t·g ≡ 1 (g = our factor, kept monic through lifting)
    let (one, s0, t0) = fp_xgcd(&h0, factor, p);
    assert_eq!(one, vec![Integer::from(1)], "factor and cofactor must be coprime mod p");
    let mut g = factor.to_vec();
    let mut h = h0;
    let mut s = s0; // multiplies h
    let mut t = t0; // multiplies g
    let mut e_exp = 1u32;
    let mut q = p.clone();
    while e_exp < n_prec {
        let new_exp = (2 * e_exp).min(n_prec);
        let q2 = p.clone().pow(new_exp);
        // err = Φ − h·g mod q2
        let mut f_mod: Vec<Integer> = f_int.clone();
        zq_norm(&mut f_mod, &q2);
        let err = zq_sub(&f_mod, &zq_mul(&h, &g, &q2), &q2);
        // write err ≡ (s err)·h + (t err)·g; divide s·err by g (monic) for the g-correction
        let se = zq_mul(&s, &err, &q2);
        let (qq, r) = zq_divrem_monic(&se, &g, &q2);
        // g* = g + r (stays monic), h* = h + t·err + qq·h
        let g_new = zq_add(&g, &r, &q2);
        let h_new = zq_add(&h, &zq_add(&zq_mul(&t, &err, &q2), &zq_mul(&qq, &h, &q2), &q2), &q2);
        // lift Bezout: b = s h* + t g* − 1
        let mut bb = zq_sub(
            &zq_add(&zq_mul(&s, &h_new, &q2), &zq_mul(&t, &g_new, &q2), &q2),
            &vec![Integer::from(1)],
            &q2,
        );
        zq_norm(&mut bb, &q2);
        let sb = zq_mul(&s, &bb, &q2);
        let (cc, dd) = zq_divrem_monic(&sb, &g_new, &q2);
        let s_new = zq_sub(&s, &dd, &q2);
        let t_new = zq_sub(&zq_sub(&t, &zq_mul(&t, &bb, &q2), &q2), &zq_mul(&cc, &h_new, &q2), &q2);
        g = g_new;
        h = h_new;
        s = s_new;
        t = t_new;
        e_exp = new_exp;
        q = q2;
    }
    debug_assert!(g.last().map_or(false, |c| *c == 1), "lifted factor must be monic");
    // final verification: Φ ≡ g·h mod p^N
    let mut f_mod: Vec<Integer> = f_int;
    zq_norm(&mut f_mod, &q);
    let check = zq_sub(&f_mod, &zq_mul(&h, &g, &q), &q);
    if !check.is_empty() {
        return Err(Error::PrecisionExhausted("Hensel lift verification failed".into()));
    }
    Ok((g, q))
}

// ---------------------------------------------------------------------------
// valuations and residue maps
// ---------------------------------------------------------------------------

/// w-adic valuation of α ∈ ℚ(ζ_m), normalized with valuation(p) = 1.
/// Returns `None` for α = 0 (+∞). The conductor of α must divide the
/// place's m. Errors with `PrecisionExhausted` when p^N cannot resolve it.
pub fn valuation(alpha: &Cyclo, place: &FinitePlaceData) -> Result<Option<i64>> {
    if FieldElem::is_zero(alpha) {
        return Ok(None);
    }
    let a = if alpha.conductor() == place.m { alpha.clone() } else { alpha.lift(place.m) };
    let d = a.denominator();
    let vd = if d == 1 { 0 } else { val_int(&d, &place.p) } as i64;
    // integral coefficient vector of d·α
    let beta: Vec<Integer> = a
        .coeffs()
        .iter()
        .map(|c| Integer::from(c.numer() * Integer::from(&d / c.denom())))
        .collect();
    let v = integral_valuation(&beta, place)?;
    match v {
        None => Err(Error::PrecisionExhausted(format!(
            "valuation exceeds Hensel precision p^{}",
            place.n_prec
        ))),
        Some(v) => Ok(Some(v as i64 - vd)),
    }
}

/// Valuation with automatic relift on precision exhaustion.
pub fn valuation_auto(alpha: &Cyclo, place: &FinitePlaceData) -> Result<Option<i64>> {
    let mut pl = place.clone();
    for _ in 0..6 {
        match valuation(alpha, &pl) {
            Err(Error::PrecisionExhausted(_)) => {
                pl = pl.relift(pl.n_prec * 2)?;
            }
            other => return other,
        }
    }
    Err(Error::PrecisionExhausted("valuation did not resolve after relifting".into()))
}

/// Valuation of an integral coefficient vector (poly in ζ); `None` when the
/// image vanishes to precision p^N (unresolved).
fn integral_valuation(beta: &[Integer], place: &FinitePlaceData) -> Result<Option<u32>> {
    let mut b: Vec<Integer> = beta.to_vec();
    zq_norm(&mut b, &place.modulus);
    let (_, rem) = zq_divrem_monic(&b, &place.g, &place.modulus);
    let mut min_v: Option<u32> = None;
    for c in &rem {
        if *c == 0 {
            continue;
        }
        let v = val_int(c, &place.p);
        min_v = Some(min_v.map_or(v, |m| m.min(v)));
    }
    Ok(min_v)
}

/// Residue of a place-integral α in F_{p^f} (ζ_m ↦ root).
pub fn residue(alpha: &Cyclo, place: &FinitePlaceData) -> Result<FqElem> {
    let a = if alpha.conductor() == place.m { alpha.clone() } else { alpha.lift(place.m) };
    let d = a.denominator();
    let vd = if d == 1 { 0 } else { val_int(&d, &place.p) };
    let beta: Vec<Integer> = a
        .coeffs()
        .iter()
        .map(|c| Integer::from(c.numer() * Integer::from(&d / c.denom())))
        .collect();
    let needed = vd + 1;
    let pl;
    let place = if place.n_prec < needed {
        pl = place.relift(needed.max(place.n_prec * 2))?;
        &pl
    } else {
        place
    };
    let mut b = beta;
    zq_norm(&mut b, &place.modulus);
    let (_, rem) = zq_divrem_monic(&b, &place.g, &place.modulus);
    // divide by p^vd coefficient-wise; a nonzero remainder means v_w(α) < 0
    let pv = place.p.clone().pow(vd);
    let mut res_coeffs = Vec::with_capacity(rem.len());
    for c in &rem {
        let (q, r) = c.clone().div_rem(pv.clone());
        if r != 0 {
            return Err(Error::InvalidPlace("residue of a non-integral element".into()));
        }
        res_coeffs.push(q);
    }
    // now reduce mod p and evaluate at the root
    let unit = {
        let du = (&d / &pv).complete();
        let dm = du.rem_euc(&place.p);
        dm.invert(&place.p).map_err(|_| Error::InvalidPlace("denominator unit inversion failed".into()))?
    };
    let mut acc = FqElem::zero(&place.fq);
    for c in res_coeffs.iter().rev() {
        acc = acc.mul(&place.root).add(&FqElem::from_integer(&place.fq, c));
    }
    Ok(acc.mul(&FqElem::from_integer(&place.fq, &unit)))
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::minpoly::norm_resultant;
    use rug::Rational;

    #[test]
    fn structure_examples() {
        // (m=5, p=11): 11 ≡ 1 mod 5 → 4 places with f = 1
        let pl = place_structure(5, &Integer::from(11)).unwrap();
        assert_eq!(pl.len(), 4);
        assert!(pl.iter().all(|w| w.f == 1));
        // (m=4, p=3): 3² ≡ 1 mod 4 → 1 place with f = 2
        let pl = place_structure(4, &Integer::from(3)).unwrap();
        assert_eq!(pl.len(), 1);
        assert_eq!(pl[0].f, 2);
        // (m=10, p=5): ramified
        assert!(matches!(
            place_structure(10, &Integer::from(5)),
            Err(Error::RamifiedUnsupported { p: 5, m: 10 })
        ));
    }

    #[test]
    fn weights_sum_to_one() {
        for (m, p) in [(5u32, 11u64), (4, 3), (8, 5), (20, 13), (7, 2), (12, 7)] {
            let pl = place_structure(m, &Integer::from(p)).unwrap();
            let sum: Rational = pl.iter().map(|w| w.weight()).sum();
            assert_eq!(sum, Rational::from(1), "m={m} p={p}");
        }
    }

    #[test]
    fn valuation_examples() {
        let pl = place_structure(5, &Integer::from(11)).unwrap();
        // v(p) = 1 at every place
        for w in &pl {
            let v = valuation(&Cyclo::from_i64(11).lift(5), w).unwrap();
            assert_eq!(v, Some(1));
        }
        // v(0) = +infinity
        assert_eq!(valuation(&Cyclo::from_i64(0), &pl[0]).unwrap(), None);
        // hensel root satisfies Φ_m to precision p^N: v(Φ(ζ)) unresolvable... instead
        // check that g divides Φ exactly mod p^N (done inside lift verification).
    }

    #[test]
    fn norm_valuation_compatibility() {
        // Σ_w f·v_w(α) = v_p(Norm(α)) for a sample of α and (m, p)
        let cases = [(5u32, 11u64), (4, 13), (8, 7), (12, 5)];
        for (m, p) in cases {
            let places = place_structure(m, &Integer::from(p)).unwrap();
            for seed in 1..6i64 {
                // α = (seed + ζ) · (3 − ζ²) + p-power twist
                let z = Cyclo::zeta(m);
                let alpha = Cyclo::from_i64(seed)
                    .add(&z)
                    .mul(&Cyclo::from_i64(3).sub(&z.mul(&z)))
                    .mul(&Cyclo::from_rational(Rational::from((p as i64, 1))));
                let n = norm_resultant(&alpha);
                let vp_norm = crate::exact::rat::val_rat(&n, &Integer::from(p));
                let mut total = 0i64;
                for w in &places {
                    let v = valuation_auto(&alpha, w).unwrap().unwrap();
                    total += w.f as i64 * v;
                }
                assert_eq!(total, vp_norm, "m={m} p={p} seed={seed}");
            }
        }
    }

    #[test]
    fn residue_map() {
        // residue of ζ_5 at a place over 11 is an element of order 5 in F_11
        let places = place_structure(5, &Integer::from(11)).unwrap();
        let z = Cyclo::zeta(5);
        for w in &places {
            let r = residue(&z, w).unwrap();
            assert!(r.has_exact_order(5));
        }
        // residue of 1/11 fails (non-integral)
        let bad = Cyclo::from_rational(Rational::from((1, 11))).lift(5);
        assert!(residue(&bad, &places[0]).is_err());
        // residue of 11/(1) is zero
        let z11 = Cyclo::from_i64(11).lift(5);
        assert!(FieldElem::is_zero(&residue(&z11, &places[0]).unwrap()));
    }
}
