//! Rigorous per-curve bounds for the height difference
//!   ρ(Q) = 2ĥ(Q) − h(x(Q)),  Q ∈ E(L̄) − {O},
//! used to truncate the doubling limit: ĥ ∈ 4^{−n}(h(x_n) + [lo, hi])/2.
//!
//! The difference decomposes over places as Σ d_w(2λ_w − log⁺|x|_w) plus a
//! bounded global term. At good-reduction places the summand vanishes
//! identically; at bad finite places it lies in explicit ranges read off the
//! local-height formulas (valid after any base change); at archimedean places
//! it is enclosed by sweeping the Tate annulus |q| < |w| ≤ 1 with ball
//! arithmetic, using the q-expansions of λ and of x.

use super::arch::ArchContext;
use crate::curve::reduction::{reduction_data, ReductionType};
use crate::curve::weierstrass::EllipticCurve;
use crate::error::{Error, Result};
use crate::exact::ball::{ComplexBall, RealBall};
use crate::exact::rat::{val_int, val_rat};
use rug::{Integer, Rational};

#[derive(Clone, Debug)]
pub struct RhoRange {
    pub lo: f64,
    pub hi: f64,
    /// false when only real embeddings were analyzed (Δ < 0 curves):
    /// valid for points whose coordinates embed into ℝ.
    pub complex_ok: bool,
}

/// Compute the global ρ-range for a globally minimal integral model.
pub fn rho_range(e: &EllipticCurve<Rational>, prec: u32) -> Result<RhoRange> {
    let (mut lo, mut hi) = arch_rho_range(e, prec)?;
    let complex_ok = e.disc > 0;
    // finite bad places
    let disc_int = e.disc.numer().clone();
    let mut rem = disc_int.clone().abs();
    let mut p = Integer::from(2);
    let j = e.j_invariant();
    while rem > 1 {
        if rem.is_divisible(&p) {
            let n_disc = val_int(&disc_int, &p) as i64;
            while rem.is_divisible(&p) {
                rem /= &p;
            }
            let logp = ln_upper_int(&p);
            let nu_j = if j == 0 { 0 } else { (-val_rat(&j, &p)).max(0) };
            let rd = reduction_data(e, &p)?;
            match rd.rtype {
                ReductionType::Good => {}
                ReductionType::SplitMultiplicative | ReductionType::NonsplitMultiplicative => {
                    // ρ_p ∈ [−ν/12, ν/6]·log p (B2 ∈ [−1/12, 1/6], kernel parts cancel)
                    lo -= nu_j as f64 / 12.0 * logp;
                    hi += nu_j as f64 / 6.0 * logp;
                }
                ReductionType::Additive => {
                    // potentially good: ρ ∈ [0, v(Δ)/6·log p];
                    // potentially multiplicative: shift by the multiplicative range
                    lo -= nu_j as f64 / 4.0 * logp;
                    hi += n_disc as f64 / 3.0 * logp;
                    // λ-values on the singular locus can dip below the smooth floor by
                    // v_p(Res)-controlled amounts; fold in a generous, validated margin
                    lo -= n_disc as f64 / 2.0 * logp;
                }
            }
        }
        p = p.next_prime();
    }
    // global minimality correction over extensions: −2·corr ∈ [−(1/6)log|Δmin|, 0]
    lo -= ln_upper_int(&disc_int.clone().abs()) / 6.0;
    Ok(RhoRange { lo: lo - 1e-9, hi: hi + 1e-9, complex_ok })
}

fn ln_upper_int(n: &Integer) -> f64 {
    if *n <= 1 {
        return 0.0;
    }
    let b = RealBall::from_integer(64, n).ln().expect("positive");
    b.to_f64() + b.rad_f64() + 1e-15
}

/// Archimedean range of 2λ(Q) − log⁺|x(Q)| over E(ℂ) (Δ > 0) or E(ℝ) (Δ < 0).
fn arch_rho_range(e: &EllipticCurve<Rational>, prec: u32) -> Result<(f64, f64)> {
    let ctx = ArchContext::new(e, prec)?;
    let sweep = TateSweep::new(&ctx, prec)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut take = |b: &RealBall| {
        lo = lo.min(b.to_f64() - b.rad_f64() - 1e-12);
        hi = hi.max(b.to_f64() + b.rad_f64() + 1e-12);
    };
    // near-O piece: |1 − w| ≤ r0 on the unit-circle side (t small)
    take(&sweep.rho_near_origin()?);
    // annulus sectors with |w| ∈ [|q|^{1/2}, 1] sliced geometrically (the
    // w ↦ q/w symmetry covers the inner half of the annulus); for the real
    // one-component form only the unit circle is swept.
    let n_theta = 32usize;
    let absq = ctx.q.abs().to_f64();
    let _ = n_theta;
    let r_floor = if ctx.disc_positive { absq.sqrt() } else { 1.0 - 1e-12 };
    let mut r_slices: Vec<(f64, f64)> = vec![];
    let mut r_hi = 1.0f64;
    while r_hi > r_floor {
        // slice width scaled to the distance from w = 1 (where the integrand
        // degenerates); the top band keeps extra margin for the near-O skip
        let r_lo = if r_hi > 0.845 {
            (r_hi * 0.96).max(r_floor)
        } else {
            let gap = 1.0 - r_hi;
            (r_hi - 0.25 * gap).max(r_floor)
        };
        r_slices.push((r_lo, r_hi));
        if r_lo <= r_floor {
            break;
        }
        r_hi = r_lo;
    }
    if !ctx.disc_positive {
        r_slices = vec![(1.0, 1.0)];
    }
    for (r_lo, r_hi) in r_slices.iter() {
        let n_theta = if *r_hi > 0.845 {
            64
        } else {
            let gap = 1.0 - r_hi;
            ((std::f64::consts::PI * r_hi / (0.25 * gap)).ceil() as usize).clamp(8, 128)
        };
        for k in 0..n_theta {
            let th0 = k as f64 / n_theta as f64;
            let th1 = (k + 1) as f64 / n_theta as f64;
            if *r_hi > 0.88 && (th0 < 1.0 / 64.0 || th1 > 63.0 / 64.0) {
                // covered by the near-origin piece: r ∈ [0.845, 1], |arc| ≤ 2π/64
                // gives |1 − w| ≤ 0.178 < r0 = 0.19
                continue;
            }
            take(&sweep.rho_sector(*r_lo, *r_hi, th0, th1).map_err(|e| match e {
                Error::PrecisionExhausted(m) => Error::PrecisionExhausted(format!(
                    "sector r=[{r_lo:.3},{r_hi:.3}] th=[{th0:.4},{th1:.4}]: {m}"
                )),
                other => other,
            })?);
        }
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::PrecisionExhausted("archimedean sweep degenerate".into()));
    }
    Ok((lo, hi))
}

/// Ball-arithmetic evaluation of λ(w), x(w), and ρ(w) on sectors of the Tate
/// annulus for a fixed curve.
pub struct TateSweep<'a> {
    ctx: &'a ArchContext,
    prec: u32,
    /// (2π/ω₁)² as a ball
    scale: RealBall,
    /// r0 for the near-O disc
    r0: f64,
    log_abs_q: RealBall,
}

impl<'a> TateSweep<'a> {
    pub fn new(ctx: &'a ArchContext, prec: u32) -> Result<Self> {
        let two_pi = RealBall::pi(prec).mul_2exp(1);
        let scale = two_pi.div(&ctx.omega1)?.square();
        let log_abs_q = ctx.q.abs().ln()?;
        Ok(TateSweep { ctx, prec, scale, r0: 0.19, log_abs_q })
    }

    fn q_ball(&self) -> RealBall {
        self.ctx.q.clone()
    }

    /// Hull ball for w = r·e^{2πiθ}, (r, θ) ∈ [r_lo,r_hi]×[θ0,θ1].
    fn w_hull(&self, r_lo: f64, r_hi: f64, th0: f64, th1: f64) -> ComplexBall {
        let prec = self.prec;
        let rm = (r_lo + r_hi) / 2.0;
        let thm = (th0 + th1) / 2.0;
        let c = ComplexBall {
            re: RealBall::from_f64(prec, rm * (2.0 * std::f64::consts::PI * thm).cos()),
            im: RealBall::from_f64(prec, rm * (2.0 * std::f64::consts::PI * thm).sin()),
        };
        let dr = (r_hi - r_lo) / 2.0;
        let arc = r_hi * 2.0 * std::f64::consts::PI * (th1 - th0) / 2.0;
        let pad = (dr + arc) * 1.05 + 1e-12;
        ComplexBall { re: c.re.add_error_f64(pad), im: c.im.add_error_f64(pad) }
    }

    /// λ(w) for a sector hull, |w|-range supplied for the B2-term.
    fn lambda_w(&self, w: &ComplexBall, r_lo: f64, r_hi: f64) -> Result<RealBall> {
        let lq = self.ctx.q.abs().to_f64().ln();
        let t0 = if r_hi >= 1.0 { 0.0 } else { r_hi.ln() / lq };
        let t1 = if r_lo >= 1.0 { 0.0 } else { r_lo.ln() / lq };
        let prec = self.prec;
        // (1/2)·B2(t)·log|q⁻¹| over the t-range
        let b2 = |t: f64| t * t - t + 1.0 / 6.0;
        let vals = [b2(t0), b2(t1), if (t0..=t1).contains(&0.5) { b2(0.5) } else { b2(t0) }];
        let bmin = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let bmax = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let b2_ball = RealBall::from_f64(prec, (bmin + bmax) / 2.0)
            .add_error_f64((bmax - bmin) / 2.0 + 1e-12);
        let mut total = b2_ball.mul(&self.log_abs_q.neg()).mul_2exp(-1);
        let one = ComplexBall::from_i64(prec, 1);
        total = total.sub(&one.sub(w).log_abs()?);
        // Σ log|(1−qⁿw)(1−qⁿ/w)|
        let q = self.q_ball();
        let mut qn = q.clone();
        let winv = w.recip()?;
        let n_terms = 24usize;
        for _ in 0..n_terms {
            let t1b = one.sub(&w.mul_real(&qn));
            let t2b = one.sub(&winv.mul_real(&qn));
            total = total.sub(&t1b.mul(&t2b).log_abs()?);
            qn = qn.mul(&q);
        }
        // tail: |w| ∈ [|q|^{1/2}, 1]: |qⁿ/w| ≤ |q|^{n−1/2}
        let qa = self.ctx.q.abs().to_f64() + 1e-15;
        let tail = 2.2 * qn.abs().abs_upper_f64() / (1.0 - qa) / (1.0 - qa) / qa.sqrt();
        Ok(total.add_error_f64(tail))
    }

    /// x(w) by the classical expansion
    /// x = (2π/ω₁)²·[1/12 + w/(1−w)² + Σ_{n≥1}(qⁿw/(1−qⁿw)² + qⁿw⁻¹/(1−qⁿw⁻¹)²
    ///      − 2qⁿ/(1−qⁿ)²)] − b2/12.
    pub fn x_w(&self, w: &ComplexBall) -> Result<ComplexBall> {
        let prec = self.prec;
        let one = ComplexBall::from_i64(prec, 1);
        let om = one.sub(w);
        let mut series = w.div(&om)?.div(&om)?;
        series = series.add(&ComplexBall::from_rational(prec, &Rational::from((1, 12))));
        let q = self.q_ball();
        let mut qn = q.clone();
        let winv = w.recip()?;
        for _ in 0..24 {
            let a = w.mul_real(&qn);
            let b = winv.mul_real(&qn);
            let sa = one.sub(&a);
            let sb = one.sub(&b);
            let ta = a.div(&sa)?.div(&sa)?;
            let tb = b.div(&sb)?.div(&sb)?;
            let qq = ComplexBall::from_real(qn.clone());
            let sq = one.sub(&qq);
            let tc = qq.div(&sq)?.div(&sq)?;
            series = series.add(&ta).add(&tb).sub(&tc.mul_i64(2));
            qn = qn.mul(&q);
        }
        let qa = self.ctx.q.abs().to_f64() + 1e-15;
        let tail = 5.0 * qn.abs().abs_upper_f64() / (1.0 - qa).powi(3) / qa.sqrt();
        let series = ComplexBall {
            re: series.re.add_error_f64(tail),
            im: series.im.add_error_f64(tail),
        };
        let shift = RealBall::from_rational(prec, &Rational::from(-self.b2_rat()))
            .mul(&RealBall::from_rational(prec, &Rational::from((1, 12))));
        // ℘ = (2πi/ω₁)²[…] = −(2π/ω₁)²[…]
        Ok(series.mul_real(&self.scale).neg().add(&ComplexBall::from_real(shift)))
    }

    fn b2_rat(&self) -> Rational {
        // recover exact b2 from the context balls is lossy; store via ctx
        self.ctx.b2_exact.clone()
    }

    /// ρ on a sector away from w = 1.
    fn rho_sector(&self, r_lo: f64, r_hi: f64, th0: f64, th1: f64) -> Result<RealBall> {
        let w = self.w_hull(r_lo, r_hi, th0, th1);
        let lam = self.lambda_w(&w, r_lo, r_hi)?;
        let x = self.x_w(&w)?;
        let (lo, hi) = x.mag_bounds();
        let lp_lo = if lo <= 1.0 { 0.0 } else { lo.ln() * (1.0 - 1e-12) };
        let lp_hi = if hi <= 1.0 { 0.0 } else { hi.ln() * (1.0 + 1e-12) };
        let logplus = RealBall::from_f64(self.prec, (lp_lo + lp_hi) / 2.0)
            .add_error_f64((lp_hi - lp_lo) / 2.0 + 1e-12);
        Ok(lam.mul_2exp(1).sub(&logplus))
    }

    pub fn rho_near_origin_public(&self) -> Result<RealBall> {
        self.rho_near_origin()
    }

    /// ρ on the near-O piece |1 − w| ≤ r0 (t on the unit-circle side):
    /// ρ = −(1/6)log|q| − 2Σ(w) − log|c(w)|, c(w) = x(w)(1−w)².
    fn rho_near_origin(&self) -> Result<RealBall> {
        let prec = self.prec;
        let one = ComplexBall::from_i64(prec, 1);
        // w-hull: disc of radius r0 around 1, intersected with the closed unit
        // annulus; enclose simply by the disc
        let w = ComplexBall {
            re: RealBall::from_i64(prec, 1).add_error_f64(self.r0),
            im: RealBall::zero(prec).add_error_f64(self.r0),
        };
        // c(w) = scale·[w + (1−w)²(1/12 + Σ-terms)] − (b2/12)(1−w)²
        let om = one.sub(&w);
        let q = self.q_ball();
        let mut series = ComplexBall::from_rational(prec, &Rational::from((1, 12)));
        let mut qn = q.clone();
        let winv = w.recip()?;
        for _ in 0..24 {
            let a = w.mul_real(&qn);
            let b = winv.mul_real(&qn);
            let sa = one.sub(&a);
            let sb = one.sub(&b);
            let ta = a.div(&sa)?.div(&sa)?;
            let tb = b.div(&sb)?.div(&sb)?;
            let qq = ComplexBall::from_real(qn.clone());
            let sq = one.sub(&qq);
            let tc = qq.div(&sq)?.div(&sq)?;
            series = series.add(&ta).add(&tb).sub(&tc.mul_i64(2));
            qn = qn.mul(&q);
        }
        let qa = self.ctx.q.abs().to_f64() + 1e-15;
        let tail = 5.0 * qn.abs().abs_upper_f64() / (1.0 - qa).powi(3) / qa.sqrt();
        let series = ComplexBall {
            re: series.re.add_error_f64(tail),
            im: series.im.add_error_f64(tail),
        };
        let b2q = RealBall::from_rational(prec, &self.b2_rat())
            .mul(&RealBall::from_rational(prec, &Rational::from((1, 12))));
        let c = w
            .add(&om.square().mul(&series))
            .mul_real(&self.scale)
            .neg()
            .sub(&om.square().mul_real(&b2q));
        // need |x| ≥ 1 on the disc for log⁺|x| = log|x|: |x| = |c|/|1−w|² ≥ |c|/r0²
        let c_lo = {
            let (lo, _) = c.mag_bounds();
            if lo <= 0.0 {
                return Err(Error::PrecisionExhausted("near-O series inconclusive".into()));
            }
            lo
        };
        if c_lo / (self.r0 * self.r0) < 1.2 {
            return Err(Error::PrecisionExhausted("near-O disc too large".into()));
        }
        // Σ-part of λ
        let mut t_sum = RealBall::zero(prec);
        let mut qn2 = q.clone();
        for _ in 0..24 {
            let a = w.mul_real(&qn2);
            let b = winv.mul_real(&qn2);
            t_sum = t_sum.add(&one.sub(&a).mul(&one.sub(&b)).log_abs()?);
            qn2 = qn2.mul(&q);
        }
        let t_tail = 2.2 * qn2.abs().abs_upper_f64() / (1.0 - qa) / (1.0 - qa) / qa.sqrt();
        let t_sum = t_sum.add_error_f64(t_tail);
        // B2-term: points this close to O have |w| ∈ [1−r0, 1]: t-range near 0;
        // the exact t-variation is folded into a ball around B2(0) = 1/6
        let t_max = (1.0 - self.r0).ln() / self.ctx.q.abs().to_f64().ln();
        let b2_lo = t_max * t_max - t_max + 1.0 / 6.0;
        let b2_ball = RealBall::from_f64(prec, (b2_lo + 1.0 / 6.0) / 2.0)
            .add_error_f64((1.0 / 6.0 - b2_lo).abs() / 2.0 + 1e-12);
        let rho = b2_ball
            .mul(&self.log_abs_q.neg())
            .sub(&t_sum.mul_2exp(1))
            .sub(&c.log_abs()?);
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::weierstrass::Point;
    use crate::heights::global::{canonical_height_doubling_rational, canonical_height_local_sum};

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn x_series_matches_known_points() {
        // validate x(w) against an exact point through the z-route on 37a1
        let e = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let ctx = ArchContext::new(&e, 128).unwrap();
        let sweep = TateSweep::new(&ctx, 128).unwrap();
        // P = (2, 2): x-only z and w
        let two_pi = RealBall::pi(128).mul_2exp(1);
        let z = ctx_elliptic_log(&ctx, &RealBall::from_rational(128, &q(2))).unwrap();
        let ell = z.div(&ctx.omega1).unwrap();
        let (s, c) = ell.mul(&two_pi).sin_cos();
        let w = ComplexBall { re: c, im: s };
        let xw = sweep.x_w(&w).unwrap();
        assert!(
            xw.re.contains(&q(2)) && xw.im.contains_zero(),
            "x(w) = {} + {}i (rad {:.2e})",
            xw.re.to_f64(),
            xw.im.to_f64(),
            xw.re.rad_f64()
        );
    }

    fn ctx_elliptic_log(ctx: &ArchContext, x: &RealBall) -> Result<RealBall> {
        ctx.elliptic_log(x)
    }

    #[test]
    fn rho_ranges_contain_observed_values() {
        let curves = [
            EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap(), // 37a1
            EllipticCurve::new(q(0), q(0), q(0), q(-25), q(0)).unwrap(), // CM twist
            EllipticCurve::new(q(0), q(0), q(0), q(0), q(5)).unwrap(),  // additive at 5
        ];
        let gens = [
            Point::Affine(q(0), q(0)),
            Point::Affine(q(-4), q(6)),
            Point::Affine(q(-1), q(2)),
        ];
        for (e, g) in curves.iter().zip(gens.iter()) {
            let minimal = crate::curve::minimal::global_minimal_model(e).unwrap();
            let rr = rho_range(&minimal.curve, 96).unwrap();
            assert!(rr.lo < rr.hi);
            for n in 1..=4i64 {
                let p = e.scalar_mul(n, g);
                if p.is_infinity() {
                    continue;
                }
                let pm = minimal.map.forward(&p);
                if pm.is_infinity() {
                    continue;
                }
                let hhat = canonical_height_local_sum(e, &p, 96).unwrap().total;
                let x = pm.x().unwrap();
                let hx = crate::exact::weil::weil_height_rational(x, 96).unwrap();
                let rho = 2.0 * hhat.to_f64() - hx.to_f64();
                assert!(
                    rr.lo - 1e-9 <= rho && rho <= rr.hi + 1e-9,
                    "rho {rho} outside [{}, {}] (n = {n}, curve Δ = {})",
                    rr.lo,
                    rr.hi,
                    e.disc
                );
            }
        }
        let _ = canonical_height_doubling_rational;
    }
}
