//! Certified log Mahler measure of integer polynomials:
//! log M(f) = log|lead| + Σ log⁺|roots|, with roots located by Aberth–Ehrlich
//! simultaneous iteration in MPFR complex arithmetic and certified a
//! posteriori by disc bounds.

use super::ball::RealBall;
use crate::error::{Error, Result};
use rug::ops::CompleteRound;
use rug::{Float, Integer};

/// Complex number as a pair of MPFR floats (approximate arithmetic; rigor is
/// restored by the a-posteriori certification step).
#[derive(Clone, Debug)]
struct Cf {
    re: Float,
    im: Float,
}

impl Cf {
    fn new(prec: u32) -> Self {
        Cf { re: Float::new(prec), im: Float::new(prec) }
    }
    fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cf { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }
    fn prec(&self) -> u32 {
        self.re.prec()
    }
    fn add(&self, o: &Cf) -> Cf {
        let p = self.prec();
        Cf { re: (&self.re + &o.re).complete(p), im: (&self.im + &o.im).complete(p) }
    }
    fn sub(&self, o: &Cf) -> Cf {
        let p = self.prec();
        Cf { re: (&self.re - &o.re).complete(p), im: (&self.im - &o.im).complete(p) }
    }
    fn mul(&self, o: &Cf) -> Cf {
        let p = self.prec();
        Cf {
            re: Float::with_val(p, (&self.re * &o.re).complete(p) - (&self.im * &o.im).complete(p)),
            im: Float::with_val(p, (&self.re * &o.im).complete(p) + (&self.im * &o.re).complete(p)),
        }
    }
    fn add_int(&self, n: &Integer) -> Cf {
        let p = self.prec();
        Cf { re: (&self.re + n).complete(p), im: self.im.clone() }
    }
    fn norm_sq(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, (&self.re * &self.re).complete(p) + (&self.im * &self.im).complete(p))
    }
    fn abs(&self) -> Float {
        self.norm_sq().sqrt()
    }
    fn div(&self, o: &Cf) -> Cf {
        let p = self.prec();
        let n = o.norm_sq();
        let num = self.mul(&o.conj());
        Cf { re: (&num.re / &n).complete(p), im: (&num.im / &n).complete(p) }
    }
    fn conj(&self) -> Cf {
        Cf { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }
    fn recip(&self) -> Cf {
        let p = self.prec();
        let one = Cf { re: Float::with_val(p, 1), im: Float::new(p) };
        one.div(self)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

fn horner_with_deriv(c: &[Integer], z: &Cf) -> (Cf, Cf) {
    let p = z.prec();
    let mut v = Cf::new(p);
    let mut d = Cf::new(p);
    for k in (0..c.len()).rev() {
        d = d.mul(z).add(&v);
        v = v.mul(z).add_int(&c[k]);
    }
    (v, d)
}

/// log M(f) with a rigorous error radius. `coeffs[i]` is the coefficient
/// of x^i; the polynomial must be nonzero.
pub fn log_mahler(coeffs: &[Integer], prec: u32) -> Result<RealBall> {
    let mut attempt_prec = working_prec(coeffs, prec);
    for _ in 0..4 {
        match log_mahler_at(coeffs, prec, attempt_prec) {
            Ok(v) => return Ok(v),
            Err(Error::PrecisionExhausted(_)) => {
                attempt_prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    log_mahler_at(coeffs, prec, attempt_prec)
}

fn working_prec(coeffs: &[Integer], prec: u32) -> u32 {
    let bits = coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    let deg = coeffs.len() as u32;
    (prec + 32).max(64 + 8 * deg).max(bits / 8 + 64).min(1 << 20)
}

fn log_mahler_at(coeffs: &[Integer], prec: u32, wp: u32) -> Result<RealBall> {
    let mut c: Vec<Integer> = coeffs.to_vec();
    while c.last().map_or(false, |x| *x == 0) {
        c.pop();
    }
    assert!(!c.is_empty(), "Mahler measure of the zero polynomial");
    let nz = c.iter().position(|x| *x != 0).unwrap();
    let c = &c[nz..];
    let lead = c.last().unwrap().clone();
    let deg = c.len() - 1;
    let log_lead = RealBall::from_integer(prec, &lead.clone().abs()).ln()?;
    if deg == 0 {
        return Ok(log_lead);
    }
    // repeated roots: split off gcd(f, f') and recurse (measure is multiplicative)
    let fpr: Vec<Integer> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, x)| Integer::from(x * i as u64))
        .collect();
    let g = int_poly_gcd(c, &fpr);
    if g.len() > 1 {
        let q = int_poly_divexact(c, &g);
        return Ok(log_mahler_at(&q, prec, wp)?.add(&log_mahler_at(&g, prec, wp)?));
    }
    let roots = aberth(c, wp)
        .ok_or_else(|| Error::PrecisionExhausted("root iteration failed to converge".into()))?;
    // Certification: for a squarefree f with approximations z_1..z_n, every
    // root of f lies in the union of discs D(z_i, r_i) with
    //   r_i = n·|f(z_i)| / (|lead|·Π_{j≠i}|z_i − z_j|)
    // (Lagrange interpolation of f / (lead·Π(x−z_j))). Pairwise-disjoint
    // discs therefore isolate one root each.
    let n = deg;
    let mut rad: Vec<Float> = Vec::with_capacity(n);
    for i in 0..n {
        let (fz, _) = horner_with_deriv(c, &roots[i]);
        // |f(z_i)| upper bound: approximate value + generous evaluation slop
        let fabs = fz.abs();
        let slop_factor = Float::with_val(wp, 1) + Float::with_val(wp, c.len() as u64 * 8) * Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 4));
        let coeff_mag = c.iter().map(|x| Float::with_val(wp, x).abs()).fold(Float::new(wp), |a, b| if b > a { b } else { a });
        let zmag = {
            let a = roots[i].abs();
            if a > 1 { a } else { Float::with_val(wp, 1) }
        };
        let zpow = {
            use rug::ops::Pow;
            Float::with_val(wp, (&zmag).pow(c.len() as u32))
        };
        let abs_slop = coeff_mag * zpow * Float::with_val(wp, c.len() as u64) * Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 4));
        let fabs_up: Float = fabs * slop_factor + abs_slop;
        let mut denom = Float::with_val(wp, &lead).abs();
        for j in 0..n {
            if j != i {
                denom *= roots[i].sub(&roots[j]).abs();
            }
        }
        if denom.is_zero() || !denom.is_finite() {
            return Err(Error::PrecisionExhausted("root certification degenerate".into()));
        }
        let r: Float = Float::with_val(wp, n as u64) * fabs_up / denom;
        let r = r * Float::with_val(wp, 1.0 + 1e-12);
        if !r.is_finite() {
            return Err(Error::PrecisionExhausted("root certification radius overflow".into()));
        }
        rad.push(r);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = roots[i].sub(&roots[j]).abs();
            let rr = (&rad[i] + &rad[j]).complete(wp);
            if dist <= rr {
                return Err(Error::PrecisionExhausted(
                    "root discs overlap; cannot certify isolation".into(),
                ));
            }
        }
    }
    let one = Float::with_val(wp, 1);
    let mut total = log_lead;
    for i in 0..n {
        let zabs = roots[i].abs();
        let lo: Float = (&zabs - &rad[i]).complete(wp);
        let hi: Float = (&zabs + &rad[i]).complete(wp);
        if lo <= 0 {
            return Err(Error::PrecisionExhausted("root disc reaches zero".into()));
        }
        let log_lo = if lo <= one { Float::new(wp) } else { lo.ln() };
        let log_hi = if hi <= one { Float::new(wp) } else { hi.ln() };
        let mid = Float::with_val(prec.max(64), (&log_lo + &log_hi).complete(wp) / 2u32);
        let half_width: Float = (Float::with_val(wp, &log_hi - &log_lo) / 2u32).into();
        let term = RealBall::exact(mid)
            .add_error(&Float::with_val(32, half_width))
            .add_error_f64(1e-300);
        // extra slop for the two ln roundings
        let term = term.add_error_f64(f64::exp2(-(wp as f64) + 6.0));
        total = total.add(&term);
    }
    Ok(total)
}

/// Aberth–Ehrlich iteration at precision `wp`; `None` if no convergence.
fn aberth(c: &[Integer], wp: u32) -> Option<Vec<Cf>> {
    let n = c.len() - 1;
    // initial points on a circle of radius from the max |c_i/lead|^{1/(n-i)} bound
    let lead_bits = c[n].significant_bits() as i64;
    let mut rexp = 0i64;
    for (i, x) in c.iter().enumerate().take(n) {
        if *x == 0 {
            continue;
        }
        let e = (x.significant_bits() as i64 - lead_bits) / (n - i) as i64 + 2;
        rexp = rexp.max(e);
    }
    let mut z: Vec<Cf> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / n as f64;
            let mut p = Cf::from_f64(wp, 0.71 * t.cos(), 0.71 * t.sin());
            p.re <<= rexp as i32;
            p.im <<= rexp as i32;
            p
        })
        .collect();
    let tol = Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 8));
    for _iter in 0..600 {
        let mut moved = Float::new(wp);
        for i in 0..n {
            let (p, dp) = horner_with_deriv(c, &z[i]);
            if p.is_zero() {
                continue;
            }
            if dp.is_zero() {
                z[i].re += Float::with_val(wp, 1e-6 * (i as f64 + 1.0));
                continue;
            }
            let nw = p.div(&dp);
            let mut s = Cf::new(wp);
            for j in 0..n {
                if i != j {
                    let d = z[i].sub(&z[j]);
                    if d.is_zero() {
                        continue;
                    }
                    s = s.add(&d.recip());
                }
            }
            let one = Cf::from_f64(wp, 1.0, 0.0);
            let den = one.sub(&nw.mul(&s));
            let step = if den.is_zero() { nw.clone() } else { nw.div(&den) };
            z[i] = z[i].sub(&step);
            let rel = step.abs() / (Float::with_val(wp, 1) + z[i].abs());
            if rel > moved {
                moved = rel;
            }
        }
        if moved < tol {
            return Some(z);
        }
    }
    Some(z)
}

/// Primitive gcd of integer polynomials (via rational gcd then primitivization).
fn int_poly_gcd(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    use super::poly::{primitive_part, qpoly_from_integers};
    let pa = qpoly_from_integers(a);
    let pb = qpoly_from_integers(b);
    if pb.is_zero() {
        return a.to_vec();
    }
    let g = pa.gcd(&pb);
    if g.deg() <= 0 {
        return vec![Integer::from(1)];
    }
    primitive_part(&g).1
}

fn int_poly_divexact(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    use super::poly::{primitive_part, qpoly_from_integers};
    let (q, r) = qpoly_from_integers(a).divrem(&qpoly_from_integers(b));
    assert!(r.is_zero(), "inexact integer polynomial division");
    let (content, prim) = primitive_part(&q);
    assert_eq!(*content.denom(), 1);
    prim.iter().map(|c| Integer::from(c * content.numer())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn cyclotomic_measure_zero() {
        let m = log_mahler(&ints(&[1, 0, 1]), 96).unwrap();
        assert!(m.contains(&Rational::new()));
        assert!(m.rad_f64() < 1e-9);
    }

    #[test]
    fn leading_coefficient_only() {
        let m = log_mahler(&ints(&[-1, 2]), 96).unwrap();
        assert!((m.to_f64() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn golden_ratio() {
        let m = log_mahler(&ints(&[-1, -1, 1]), 96).unwrap();
        let expect = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((m.to_f64() - expect).abs() < 1e-12, "{} vs {}", m.to_f64(), expect);
    }

    #[test]
    fn multiplicativity() {
        let pa = log_mahler(&ints(&[-1, -1, 1]), 96).unwrap();
        let pb = log_mahler(&ints(&[-1, 2]), 96).unwrap();
        let pc = log_mahler(&ints(&[1, -1, -3, 2]), 96).unwrap();
        let sum = pa.add(&pb);
        assert!((sum.to_f64() - pc.to_f64()).abs() < sum.rad_f64() + pc.rad_f64() + 1e-12);
    }

    #[test]
    fn repeated_roots() {
        let m = log_mahler(&ints(&[4, -4, 1]), 96).unwrap();
        assert!((m.to_f64() - 2.0 * 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn lehmer_polynomial() {
        // Lehmer's degree-10 polynomial, log M ≈ 0.162357612
        let l = ints(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let m = log_mahler(&l, 96).unwrap();
        assert!((m.to_f64() - 0.1623576120).abs() < 1e-8, "{}", m.to_f64());
    }

    #[test]
    fn huge_coefficients() {
        // x^2 - 2^700 x + 1: roots ~2^700 and ~2^-700; log M ≈ 700 log 2
        let mut c = ints(&[1, 0, 1]);
        c[1] = -Integer::from(Integer::from(1) << 700);
        let m = log_mahler(&c, 96).unwrap();
        assert!((m.to_f64() - 700.0 * 2f64.ln()).abs() < 1e-6, "{}", m.to_f64());
    }
}
