//! Archimedean Néron local height at the real embedding, evaluated through
//! the Tate parametrization: periods by AGM, elliptic logarithms by Carlson's
//! R_F, and the q-series
//!   λ(P) = −(1/12)·log|q| − log|1 − w| − Σ_{n≥1} log|(1 − qⁿw)(1 − qⁿw̄)|
//! for |w| = 1 (points on the neutral component), normalized so that
//! λ(P) − (1/2)·log|x(P)| → −(1/12)·log|Δ| as x → ∞.
//!
//! Supported real forms: Δ > 0 (rectangular lattice), and Δ < 0 with c4 ≥ 0
//! (rhombic); the remaining real form (Δ < 0, c4 < 0) is out of desk scope.

use crate::curve::weierstrass::{EllipticCurve, Point};
use crate::error::{Error, Result};
use crate::exact::ball::{ComplexBall, RealBall};
use rug::{Integer, Rational};

/// λ at the real embedding for a rational point P ≠ O.
pub fn lambda_arch(e: &EllipticCurve<Rational>, p: &Point<Rational>, prec: u32) -> Result<RealBall> {
    let x = match p {
        Point::Infinity => return Err(Error::Validation("archimedean height of the zero point".into())),
        Point::Affine(x, _) => x.clone(),
    };
    lambda_arch_x(e, &RealBall::from_rational(prec, &x), prec)
}

/// λ as a function of x(P) (the local height depends only on ±P). The x-ball
/// must consist of x-coordinates of real points.
pub fn lambda_arch_x(e: &EllipticCurve<Rational>, x: &RealBall, prec: u32) -> Result<RealBall> {
    let ctx = ArchContext::new(e, prec)?;
    ctx.lambda_x(x)
}

/// Cached per-curve archimedean data: roots, periods, and the nome.
pub struct ArchContext {
    pub prec: u32,
    pub b2_exact: Rational,
    pub b2: RealBall,
    pub b4: RealBall,
    pub b6: RealBall,
    pub log_abs_disc: RealBall,
    /// Δ > 0: three real roots e1 > e2 > e3 of 4x³+b2x²+2b4x+b6.
    /// Δ < 0: e1 the real root; quadratic factor 4(x−e1)(x²+Bx+C).
    pub disc_positive: bool,
    pub e1: RealBall,
    pub e23: Option<(RealBall, RealBall)>,
    pub quad_bc: Option<(RealBall, RealBall)>,
    /// real period ω₁ and the (real) nome q with |q| < 1
    pub omega1: RealBall,
    pub q: RealBall,
}

impl ArchContext {
    pub fn new(e: &EllipticCurve<Rational>, prec: u32) -> Result<Self> {
        let rb = |r: &Rational| RealBall::from_rational(prec, r);
        let b2 = rb(&e.b2);
        let b4 = rb(&e.b4);
        let b6 = rb(&e.b6);
        let disc_positive = e.disc > 0;
        let log_abs_disc = rb(&Rational::from(e.disc.clone().abs())).ln()?;
        let roots = real_roots_of_g(e, prec)?;
        if disc_positive {
            let (e1, e2, e3) = match &roots[..] {
                [a, b, c] => (c.clone(), b.clone(), a.clone()),
                _ => return Err(Error::PrecisionExhausted("expected three real roots".into())),
            };
            // ω₁ = π / AGM(√(e1−e3), √(e1−e2)), q = exp(−π·AGM(1,√(1−m))/AGM(1,√m)),
            // m = (e2−e3)/(e1−e3)
            let s13 = e1.sub(&e3).sqrt()?;
            let s12 = e1.sub(&e2).sqrt()?;
            let omega1 = RealBall::pi(prec).div(&agm(&s13, &s12)?)?;
            let m = e2.sub(&e3).div(&e1.sub(&e3))?;
            let one = RealBall::from_i64(prec, 1);
            let k = m.sqrt()?;
            let kp = one.sub(&m).sqrt()?;
            let ratio = agm(&one, &kp)?.div(&agm(&one, &k)?)?;
            let q = RealBall::pi(prec).neg().mul_2exp(1).mul(&ratio).exp();
            Ok(ArchContext {
                prec,
                b2_exact: e.b2.clone(),
                b2,
                b4,
                b6,
                log_abs_disc,
                disc_positive,
                e1,
                e23: Some((e2, e3)),
                quad_bc: None,
                omega1,
                q,
            })
        } else {
            if e.c4 < 0 {
                return Err(Error::PrecisionExhausted(
                    "real form with negative discriminant and c4 < 0 is out of scope".into(),
                ));
            }
            let e1 = match &roots[..] {
                [a] => a.clone(),
                _ => return Err(Error::PrecisionExhausted("expected one real root".into())),
            };
            // in the shifted variable ξ = x − e1:
            //   g = 4ξ(ξ² + B̃ξ + C̃), B̃ = 3e1 + b2/4, C̃ = 3e1² + (b2/2)e1 + b4/2
            let quarter = RealBall::from_rational(prec, &Rational::from((1, 4)));
            let bq = e1.mul_i64(3).add(&b2.mul(&quarter));
            let cq = e1
                .square()
                .mul_i64(3)
                .add(&b2.mul(&e1).mul_2exp(-1))
                .add(&b4.mul_2exp(-1));
            // sanity: C̃ = g'(e1)/4 with g' = 12x² + 2b2x + 2b4
            debug_assert!({
                let gp = e1
                    .square()
                    .mul_i64(12)
                    .add(&b2.mul(&e1).mul_2exp(1))
                    .add(&b4.mul_2exp(1));
                gp.mul(&quarter).sub(&cq).contains_zero()
            });
            // 2-isogenous rectangular curve in ξ' : Y² = 4ξ'(ξ'² − 2Bξ' + (B² − 4C))
            let b_im = bq.mul_i64(-2);
            let c_im = bq.square().sub(&cq.mul_i64(4));
            // roots of ξ'² + b_im ξ' + c_im: B ± 2√C  (C > 0)
            let sc = cq.sqrt()?;
            let r_hi = bq.add(&sc.mul_i64(2));
            let r_lo = bq.sub(&sc.mul_i64(2));
            let zero = RealBall::zero(prec);
            let mut rr = [zero.clone(), r_hi.clone(), r_lo.clone()];
            sort_balls(&mut rr)?;
            let (f3, f2, f1) = (rr[0].clone(), rr[1].clone(), rr[2].clone());
            let s13 = f1.sub(&f3).sqrt()?;
            let s12 = f1.sub(&f2).sqrt()?;
            let omega1_iso = RealBall::pi(prec).div(&agm(&s13, &s12)?)?;
            let m = f2.sub(&f3).div(&f1.sub(&f3))?;
            let one = RealBall::from_i64(prec, 1);
            let ratio = agm(&one, &one.sub(&m).sqrt()?)?.div(&agm(&one, &m.sqrt()?)?)?;
            let q_iso = RealBall::pi(prec).neg().mul_2exp(1).mul(&ratio).exp();
            // the kernel is the real 2-torsion (e1, ·): ω₁ = 2·ω₁', q = −√q'
            let omega1 = omega1_iso.mul_i64(2);
            let q = q_iso.sqrt()?.neg();
            let _ = (b_im, c_im);
            Ok(ArchContext {
                prec,
                b2_exact: e.b2.clone(),
                b2,
                b4,
                b6,
                log_abs_disc,
                disc_positive,
                e1,
                e23: None,
                quad_bc: Some((bq, cq)),
                omega1,
                q,
            })
        }
    }

    /// g(x) = 4x³ + b2x² + 2b4x + b6 as a ball.
    pub fn g_at(&self, x: &RealBall) -> RealBall {
        let four = RealBall::from_i64(self.prec, 4);
        x.mul(&four)
            .add(&self.b2)
            .mul(x)
            .add(&self.b4.mul_i64(2))
            .mul(x)
            .add(&self.b6)
    }

    /// φ₂(x) = x⁴ − b4x² − 2b6x − b8, with b8 = (b2·b6 − b4²)/4.
    fn phi2_at(&self, x: &RealBall) -> RealBall {
        let b8 = self
            .b2
            .mul(&self.b6)
            .sub(&self.b4.square())
            .mul(&RealBall::from_rational(self.prec, &Rational::from((1, 4))));
        let x2 = x.square();
        x2.square()
            .sub(&self.b4.mul(&x2))
            .sub(&self.b6.mul(x).mul_2exp(1))
            .sub(&b8)
    }

    /// λ as a function of x(P), with egg-component points pushed through one
    /// duplication and 2-torsion handled by the half-period series.
    pub fn lambda_x(&self, x: &RealBall) -> Result<RealBall> {
        self.lambda_x_depth(x, 0)
    }

    fn lambda_x_depth(&self, x: &RealBall, depth: u32) -> Result<RealBall> {
        if depth > 3 {
            return Err(Error::PrecisionExhausted("egg descent failed to terminate".into()));
        }
        let prec = self.prec;
        // on the neutral component if x ≥ e1 (within ball resolution)
        let diff = x.sub(&self.e1);
        if diff.is_strictly_negative() {
            if !self.disc_positive {
                return Err(Error::PrecisionExhausted(
                    "x below the real root on a one-component curve".into(),
                ));
            }
            // egg point. 2-torsion? g(x) ≈ 0 ⟺ x ∈ {e2, e3}
            let g = self.g_at(x);
            if g.is_strictly_positive() {
                // λ(P) = [λ(2P) + (1/2)·log g(x) − (1/4)·log|Δ|]/4
                let x2 = self.phi2_at(x).div(&g)?;
                let l2 = self.lambda_x_depth(&x2, depth + 1)?;
                let val = l2
                    .add(&g.ln()?.mul_2exp(-1))
                    .sub(&self.log_abs_disc.mul(&RealBall::from_rational(prec, &Rational::from((1, 4)))));
                return Ok(val.mul(&RealBall::from_rational(prec, &Rational::from((1, 4)))));
            }
            if g.contains_zero() {
                // egg 2-torsion: exact half-lattice points; series with w = ±√|q|
                return self.lambda_egg_two_torsion(x);
            }
            return Err(Error::PrecisionExhausted("x-ball not on the real locus".into()));
        }
        if !diff.is_strictly_positive() && self.disc_positive {
            // x-ball touches e1: the point is (near) the neutral 2-torsion, w = −1
            let w = ComplexBall::from_i64(prec, -1);
            return self.lambda_from_w(&w, None);
        }
        // elliptic log on the neutral component
        let z = self.elliptic_log(x)?;
        let ell = z.div(&self.omega1)?;
        let two_pi = RealBall::pi(prec).mul_2exp(1);
        let (s, c) = ell.mul(&two_pi).sin_cos();
        let w = ComplexBall { re: c, im: s };
        self.lambda_from_w(&w, Some(&ell))
    }

    /// z(P) = ∫_x^∞ dt/√g(t) = R_F(x−e1, x−e2, x−e3); for Δ < 0 the point is
    /// first pushed through the real 2-isogeny, which preserves z.
    pub fn elliptic_log(&self, x: &RealBall) -> Result<RealBall> {
        if self.disc_positive {
            let (e2, e3) = self.e23.as_ref().unwrap();
            carlson_rf(&x.sub(&self.e1), &x.sub(e2), &x.sub(e3))
        } else {
            let (bq, cq) = self.quad_bc.as_ref().unwrap();
            let xi = x.sub(&self.e1);
            // ξ' = ξ + B̃ + C̃/ξ; roots of the image cubic: 0, B̃ ± 2√C̃
            let xi_p = xi.add(bq).add(&cq.div(&xi)?);
            let sc = cq.sqrt()?;
            let r_hi = bq.add(&sc.mul_i64(2));
            let r_lo = bq.sub(&sc.mul_i64(2));
            let zero = RealBall::zero(self.prec);
            let mut rr = [zero, r_hi, r_lo];
            sort_balls(&mut rr)?;
            let z_iso = carlson_rf(&xi_p.sub(&rr[2]), &xi_p.sub(&rr[1]), &xi_p.sub(&rr[0]))?;
            // the isogeny identifies ξ with C̃/ξ (translation by the real
            // 2-torsion); unfold: z = z' when ξ > √C̃, else ω₁/2 − z'
            let folded = self.omega1.mul_2exp(-1).sub(&z_iso);
            let fix = xi.sub(&sc);
            if fix.is_strictly_positive() {
                Ok(z_iso)
            } else if fix.is_strictly_negative() {
                Ok(folded)
            } else {
                Ok(z_iso.union(&folded))
            }
        }
    }

    /// The q-series for |w| = 1 (t-parameter 0).
    fn lambda_from_w(&self, w: &ComplexBall, _ell: Option<&RealBall>) -> Result<RealBall> {
        let prec = self.prec;
        let absq = self.q.abs();
        let log_q = absq.ln()?;
        let mut total = log_q.mul(&RealBall::from_rational(prec, &Rational::from((-1, 12))));
        // −log|1−w|
        let one = ComplexBall::from_i64(prec, 1);
        total = total.sub(&one.sub(w).log_abs()?);
        // series terms
        let qb = &self.q;
        let mut qn = qb.clone();
        let n_terms = ((prec as f64) / (-absq.abs_upper_f64().ln()) * 0.75).ceil() as usize + 6;
        let wconj = w.conj();
        for _ in 0..n_terms {
            let t1 = one.sub(&wconj.mul_real(&qn).conj());
            let t2 = one.sub(&wconj.mul_real(&qn));
            total = total.sub(&t1.mul(&t2).log_abs()?);
            qn = qn.mul(qb);
        }
        // tail: |log|1−u|| ≤ |u|/(1−|u|) per factor; Σ_{n>N} 2|q|ⁿ/(1−|q|)
        let qa = absq.abs_upper_f64();
        let qn_up = qn.abs().abs_upper_f64();
        let tail = 2.0 * qn_up / (1.0 - qa) / (1.0 - qa);
        Ok(total.add_error_f64(tail))
    }

    /// λ at the egg 2-torsion points: w = ±√|q| (q > 0, rectangular case),
    /// with the sign resolved by matching x against e2 (w > 0) and e3 (w < 0).
    fn lambda_egg_two_torsion(&self, x: &RealBall) -> Result<RealBall> {
        let prec = self.prec;
        let (e2, e3) = self
            .e23
            .as_ref()
            .ok_or_else(|| Error::PrecisionExhausted("egg torsion on one-component curve".into()))?;
        let sq = self.q.sqrt()?;
        let to_e2 = x.sub(e2);
        let to_e3 = x.sub(e3);
        let w = if to_e2.contains_zero() && !to_e3.contains_zero() {
            ComplexBall::from_real(sq)
        } else if to_e3.contains_zero() && !to_e2.contains_zero() {
            ComplexBall::from_real(sq.neg())
        } else {
            return Err(Error::PrecisionExhausted("cannot separate egg 2-torsion points".into()));
        };
        // t-parameter 1/2: λ = −(1/2)B2(1/2)log|q| − log|1−w| − Σ …, B2(1/2) = −1/12
        let absq = self.q.abs();
        let log_q = absq.ln()?;
        let mut total = log_q.mul(&RealBall::from_rational(prec, &Rational::from((1, 24))));
        let one = ComplexBall::from_i64(prec, 1);
        total = total.sub(&one.sub(&w).log_abs()?);
        let mut qn = self.q.clone();
        let n_terms = ((prec as f64) / (-absq.abs_upper_f64().ln())).ceil() as usize + 6;
        // w real: w̄⁻¹-side uses w⁻¹ = 1/w
        let winv = w.recip()?;
        for _ in 0..n_terms {
            let t1 = one.sub(&w.mul_real(&qn));
            let t2 = one.sub(&winv.mul_real(&qn));
            total = total.sub(&t1.mul(&t2).log_abs()?);
            qn = qn.mul(&self.q);
        }
        let qa = absq.abs_upper_f64();
        // |w⁻¹qⁿ| ≤ |q|^{n−1/2}: dominate with √q-factor
        let tail = 2.0 * qn.abs().abs_upper_f64() / (1.0 - qa) / (1.0 - qa) / qa.sqrt();
        Ok(total.add_error_f64(tail))
    }
}

/// AGM of two positive balls; rigorous enclosure by the final bracket.
pub fn agm(a0: &RealBall, b0: &RealBall) -> Result<RealBall> {
    let prec = a0.prec().max(b0.prec());
    let mut a = a0.clone();
    let mut b = b0.clone();
    if !(a.is_strictly_positive() && b.is_strictly_positive()) {
        return Err(Error::PrecisionExhausted("agm of non-positive balls".into()));
    }
    for _ in 0..(32 + prec / 2) {
        let am = a.add(&b).mul_2exp(-1);
        let gm = a.mul(&b).sqrt()?;
        a = am;
        b = gm;
        let d = a.sub(&b);
        // consecutive iterates bracket the limit once |a−b| is below the radii
        if d.abs().abs_upper_f64() <= a.rad_f64().max(b.rad_f64()).max(1e-300) * 4.0 {
            return Ok(a.union(&b));
        }
    }
    Ok(a.union(&b))
}

/// Carlson's symmetric elliptic integral R_F(x, y, z) for nonnegative real
/// balls (at most one zero): duplication until the arguments coalesce, then
/// the enclosure 1/√max ≤ R_F ≤ 1/√min.
pub fn carlson_rf(x0: &RealBall, y0: &RealBall, z0: &RealBall) -> Result<RealBall> {
    let prec = x0.prec().max(y0.prec()).max(z0.prec());
    let mut x = x0.clone();
    let mut y = y0.clone();
    let mut z = z0.clone();
    for _ in 0..(64 + prec) {
        let sx = x.sqrt_allow_zero()?;
        let sy = y.sqrt_allow_zero()?;
        let sz = z.sqrt_allow_zero()?;
        let lam = sx.mul(&sy).add(&sy.mul(&sz)).add(&sz.mul(&sx));
        x = x.add(&lam).mul_2exp(-2);
        y = y.add(&lam).mul_2exp(-2);
        z = z.add(&lam).mul_2exp(-2);
        // stop when relative spread is inside the ball radii
        let hi = ball_max(&ball_max(&x, &y)?, &z)?;
        let lo = ball_min(&ball_min(&x, &y)?, &z)?;
        let spread = hi.sub(&lo);
        if spread.abs().abs_upper_f64()
            <= 4.0 * (x.rad_f64().max(y.rad_f64()).max(z.rad_f64())).max(1e-300)
        {
            let inv_hi = hi.sqrt()?.recip()?;
            let inv_lo = lo.sqrt()?.recip()?;
            return Ok(inv_hi.union(&inv_lo));
        }
    }
    Err(Error::PrecisionExhausted("Carlson R_F did not coalesce".into()))
}

trait SqrtAllowZero {
    fn sqrt_allow_zero(&self) -> Result<RealBall>;
}

impl SqrtAllowZero for RealBall {
    fn sqrt_allow_zero(&self) -> Result<RealBall> {
        if self.is_strictly_positive() {
            return self.sqrt();
        }
        // ball touching zero from above: enclose √ by [0, √(hi)]
        let hi = self.abs_upper_f64();
        if self.is_strictly_negative() {
            return Err(Error::PrecisionExhausted("sqrt of negative ball".into()));
        }
        let prec = self.prec();
        let half = RealBall::from_f64(prec, hi.sqrt() / 2.0);
        Ok(half.add_error_f64(hi.sqrt() / 2.0 + 1e-300))
    }
}

fn ball_max(a: &RealBall, b: &RealBall) -> Result<RealBall> {
    // enclosure of max(a, b)
    Ok(if a.sub(b).is_strictly_positive() {
        a.clone()
    } else if b.sub(a).is_strictly_positive() {
        b.clone()
    } else {
        a.union(b)
    })
}

fn ball_min(a: &RealBall, b: &RealBall) -> Result<RealBall> {
    Ok(if a.sub(b).is_strictly_positive() {
        b.clone()
    } else if b.sub(a).is_strictly_positive() {
        a.clone()
    } else {
        a.union(b)
    })
}

fn sort_balls(v: &mut [RealBall; 3]) -> Result<()> {
    // ascending; entries must be separated or equal-as-balls
    for i in 0..3 {
        for j in (i + 1)..3 {
            if v[j].sub(&v[i]).is_strictly_negative() {
                v.swap(i, j);
            }
        }
    }
    Ok(())
}

/// Real roots of g(x) = 4x³ + b2x² + 2b4x + b6, ascending, isolated by exact
/// rational bisection then polished as balls.
fn real_roots_of_g(e: &EllipticCurve<Rational>, prec: u32) -> Result<Vec<RealBall>> {
    let g = |x: &Rational| -> Rational {
        let mut acc = Rational::from(4);
        acc = Rational::from(&acc * x) + &e.b2;
        acc = Rational::from(&acc * x) + Rational::from(2) * Rational::from(&e.b4);
        acc = Rational::from(&acc * x) + &e.b6;
        acc
    };
    // Cauchy bound: 1 + max|coeff|/4
    let bound = {
        let m = [
            e.b2.clone().abs(),
            Rational::from(2) * Rational::from(e.b4.clone().abs()),
            e.b6.clone().abs(),
        ]
        .into_iter()
        .max()
        .unwrap();
        Rational::from(1) + m / Rational::from(4)
    };
    let nroots = if e.disc > 0 { 3 } else { 1 };
    // exact bisection on a sign-change grid
    let mut intervals: Vec<(Rational, Rational)> = vec![];
    let steps = 64u32;
    let width = Rational::from(2) * &bound / Rational::from(steps);
    let mut grid: Vec<(Rational, Rational)> = vec![];
    for i in 0..=steps {
        let x = Rational::from(-&bound) + Rational::from(&width * &Rational::from(i));
        let v = g(&x);
        grid.push((x, v));
    }
    for w in grid.windows(2) {
        let (ref x0, ref v0) = w[0];
        let (ref x1, ref v1) = w[1];
        if *v0 == 0 {
            intervals.push((x0.clone(), x0.clone()));
        } else if (*v0 < 0) != (*v1 < 0) && *v1 != 0 {
            intervals.push((x0.clone(), x1.clone()));
        }
    }
    if grid.last().unwrap().1 == 0 {
        let x = grid.last().unwrap().0.clone();
        intervals.push((x.clone(), x));
    }
    if intervals.len() != nroots {
        // refine the grid (roots clustered); fall back to more steps
        return real_roots_fine(e, prec, &bound, nroots);
    }
    let mut out = vec![];
    for (mut lo, mut hi) in intervals {
        // bisect exactly
        for _ in 0..(prec + 16) {
            if lo == hi {
                break;
            }
            let mid = Rational::from(&lo + &hi) / Rational::from(2);
            let v = g(&mid);
            if v == 0 {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if (g(&lo) < 0) == (v < 0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = Rational::from(&lo + &hi) / Rational::from(2);
        let rad = Rational::from(&hi - &lo);
        let b = RealBall::from_rational(prec, &mid).add_error_f64(rad.to_f64().abs() + 1e-300);
        out.push(b);
    }
    Ok(out)
}

fn real_roots_fine(
    e: &EllipticCurve<Rational>,
    prec: u32,
    bound: &Rational,
    nroots: usize,
) -> Result<Vec<RealBall>> {
    let g = |x: &Rational| -> Rational {
        let mut acc = Rational::from(4);
        acc = Rational::from(&acc * x) + &e.b2;
        acc = Rational::from(&acc * x) + Rational::from(2) * Rational::from(&e.b4);
        acc = Rational::from(&acc * x) + &e.b6;
        acc
    };
    for steps in [512u32, 4096, 32768] {
        let width = Rational::from(2) * bound / Rational::from(steps);
        let mut intervals = vec![];
        let mut prev: Option<(Rational, Rational)> = None;
        for i in 0..=steps {
            let x = Rational::from(-bound) + Rational::from(&width * &Rational::from(i));
            let v = g(&x);
            if v == 0 {
                intervals.push((x.clone(), x.clone()));
            } else if let Some((px, pv)) = &prev {
                if (*pv < 0) != (v < 0) && *pv != 0 {
                    intervals.push((px.clone(), x.clone()));
                }
            }
            prev = Some((x, v));
        }
        if intervals.len() == nroots {
            let mut out = vec![];
            for (mut lo, mut hi) in intervals {
                for _ in 0..(prec + 16) {
                    if lo == hi {
                        break;
                    }
                    let mid = Rational::from(&lo + &hi) / Rational::from(2);
                    let v = g(&mid);
                    if v == 0 {
                        lo = mid.clone();
                        hi = mid;
                        break;
                    }
                    if (g(&lo) < 0) == (v < 0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let mid = Rational::from(&lo + &hi) / Rational::from(2);
                let rad = Rational::from(&hi - &lo);
                out.push(RealBall::from_rational(prec, &mid).add_error_f64(rad.to_f64().abs() + 1e-300));
            }
            return Ok(out);
        }
    }
    Err(Error::PrecisionExhausted("root isolation failed".into()))
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
    fn lemniscatic_period() {
        // y² = x³ − x: real period 2·Γ(1/4)²/(2√(2π))·…: ω₁ = 5.24411510858424…/2
        // for the g = 4x³−4x normalization the real period is
        // Γ(1/4)²/√(8π)·2 = 5.2441151086… /… — pin numerically: agm(√2,1):
        // ω₁ = π/agm(√2, 1) = 2.622057554312…
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        let ctx = ArchContext::new(&e, 128).unwrap();
        assert!((ctx.omega1.to_f64() - 2.6220575542921198).abs() < 1e-12);
        assert!(ctx.disc_positive);
        // q = e^{−2π} for the square lattice (j = 1728, τ = i)
        assert!((ctx.q.to_f64() - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-12);
    }

    #[test]
    fn lambda_symmetry_and_large_x() {
        // λ(P) = λ(−P) automatically (x-only); check the x → ∞ normalization:
        // λ − (1/2)log|x| → −(1/12)log|Δ|
        let e = curve_37a();
        let big = Rational::from(10_000_000i64);
        // y-coordinate solving is unnecessary: use the x-only entry
        let l = lambda_arch_x(&e, &RealBall::from_rational(96, &big), 96).unwrap();
        let expect = 0.5 * (big.to_f64().ln()) - (37f64.ln()) / 12.0;
        assert!(
            (l.to_f64() - expect).abs() < 1e-3,
            "{} vs {}",
            l.to_f64(),
            expect
        );
    }

    #[test]
    fn duplication_identity() {
        // λ(2P) = 4λ(P) − log|ψ₂(P)| + (1/4)log|Δ| at the real place
        let e = curve_37a();
        let p = Point::Affine(q(2), q(2)); // on y²+y = x³−x: 4+2 = 8−2 ✓
        assert!(e.contains(&p));
        let p2 = e.double(&p);
        let l1 = lambda_arch(&e, &p, 128).unwrap();
        let l2 = lambda_arch(&e, &p2, 128).unwrap();
        let psi2 = e.psi2(&p).unwrap();
        let rhs = 4.0 * l1.to_f64() - psi2.to_f64().abs().ln() + 0.25 * 37f64.ln();
        assert!(
            (l2.to_f64() - rhs).abs() < 1e-13,
            "{} vs {}",
            l2.to_f64(),
            rhs
        );
    }

    #[test]
    fn quasi_parallelogram() {
        // λ(P+Q) + λ(P−Q) = 2λ(P) + 2λ(Q) − log|x(P)−x(Q)| − (1/6)log|Δ|
        let e = curve_37a();
        let p = Point::Affine(q(0), q(0));
        let qq = Point::Affine(q(2), q(2));
        let s = e.add(&p, &qq);
        let d = e.sub(&p, &qq);
        let l = |pt: &Point<Rational>| lambda_arch(&e, pt, 128).unwrap().to_f64();
        let lhs = l(&s) + l(&d);
        let xp = p.x().unwrap().to_f64();
        let xq = qq.x().unwrap().to_f64();
        let rhs = 2.0 * l(&p) + 2.0 * l(&qq) - (xp - xq).abs().ln() + 37f64.ln() / 6.0;
        assert!((lhs - rhs).abs() < 1e-13, "{lhs} vs {rhs}");
    }

    #[test]
    fn egg_component_and_rhombic() {
        // y² = x³ − x: (0,0) is egg 2-torsion (e-roots 1, 0, −1)
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        let l = lambda_arch(&e, &Point::Affine(q(0), q(0)), 96).unwrap();
        assert!(l.to_f64().is_finite());
        // neutral 2-torsion (1, 0)
        let l1 = lambda_arch(&e, &Point::Affine(q(1), q(0)), 96).unwrap();
        assert!(l1.to_f64().is_finite());
        // rhombic curve y² = x³ + 1 (Δ = −432, c4 = 0): λ at (2, 3)
        let er = EllipticCurve::new(q(0), q(0), q(0), q(0), q(1)).unwrap();
        let ctx = ArchContext::new(&er, 96).unwrap();
        assert!(!ctx.disc_positive);
        assert!(ctx.q.is_strictly_negative());
        let l2 = lambda_arch(&er, &Point::Affine(q(2), q(3)), 96).unwrap();
        assert!(l2.to_f64().is_finite());
        // rhombic large-x normalization pins ω₁ and q jointly
        let big = Rational::from(10_000_000i64);
        let lb = lambda_arch_x(&er, &RealBall::from_rational(96, &big), 96).unwrap();
        let expect = 0.5 * big.to_f64().ln() - 432f64.ln() / 12.0;
        assert!((lb.to_f64() - expect).abs() < 1e-3, "large-x rhombic: {} vs {}", lb.to_f64(), expect);
        // duplication identity on the rhombic curve
        let p = Point::Affine(q(2), q(3));
        let p2 = er.double(&p);
        let l2p = lambda_arch(&er, &p2, 96).unwrap();
        let psi2 = er.psi2(&p).unwrap();
        let rhs = 4.0 * l2.to_f64() - psi2.to_f64().abs().ln() + 0.25 * 432f64.ln();
        assert!((l2p.to_f64() - rhs).abs() < 1e-15, "{} vs {}", l2p.to_f64(), rhs);
    }
}
