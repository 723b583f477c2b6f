//! Ball arithmetic on MPFR floats: a midpoint at working precision plus a
//! low-precision upward-rounded error radius. Every operation returns a ball
//! containing the exact result whenever the inputs do.

use crate::error::{Error, Result};
use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

const RAD_PREC: u32 = 32;

fn rad_zero() -> Float {
    Float::with_val(RAD_PREC, 0)
}

/// Upward-rounded radius addition.
fn radd(a: &Float, b: &Float) -> Float {
    let mut r = Float::new(RAD_PREC);
    r.assign_round(a + b, Round::Up);
    r
}

fn rmul(a: &Float, b: &Float) -> Float {
    let mut r = Float::new(RAD_PREC);
    r.assign_round(a * b, Round::Up);
    r
}

/// One-ulp slop bound for a round-to-nearest result at precision `prec`.
fn slop(mid: &Float, prec: u32) -> Float {
    match mid.get_exp() {
        None => rad_zero(),
        Some(e) => Float::with_val(RAD_PREC, 1) << (e - prec as i32 + 1),
    }
}

/// Absolute value of mid, rounded up into radius precision.
fn abs_up(mid: &Float) -> Float {
    let mut r = Float::new(RAD_PREC);
    r.assign_round(mid.abs_ref(), Round::Up);
    r
}

#[derive(Clone, Debug)]
pub struct RealBall {
    pub mid: Float,
    pub rad: Float,
}

impl RealBall {
    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn zero(prec: u32) -> Self {
        RealBall { mid: Float::new(prec), rad: rad_zero() }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        let mid = Float::with_val(prec, n);
        let rad = slop(&mid, prec);
        RealBall { mid, rad }
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        let mid = Float::with_val(prec, n);
        let rad = slop(&mid, prec);
        RealBall { mid, rad }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        let mid = Float::with_val(prec, q);
        let rad = slop(&mid, prec);
        RealBall { mid, rad }
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        RealBall { mid: Float::with_val(prec, x), rad: rad_zero() }
    }

    /// Exact midpoint, zero radius (caller asserts exactness).
    pub fn exact(mid: Float) -> Self {
        RealBall { rad: rad_zero(), mid }
    }

    pub fn pi(prec: u32) -> Self {
        use rug::float::Constant;
        let mid = Float::with_val(prec, Constant::Pi);
        let rad = slop(&mid, prec);
        RealBall { mid, rad }
    }

    fn wrap(mid: Float, rad: Float, prec: u32) -> Self {
        let s = slop(&mid, prec);
        RealBall { rad: radd(&rad, &s), mid }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let mid = Float::with_val(prec, &self.mid + &o.mid);
        Self::wrap(mid, radd(&self.rad, &o.rad), prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let mid = Float::with_val(prec, &self.mid - &o.mid);
        Self::wrap(mid, radd(&self.rad, &o.rad), prec)
    }

    pub fn neg(&self) -> Self {
        RealBall { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let mid = Float::with_val(prec, &self.mid * &o.mid);
        // |a|r_b + |b|r_a + r_a r_b
        let r = radd(
            &radd(&rmul(&abs_up(&self.mid), &o.rad), &rmul(&abs_up(&o.mid), &self.rad)),
            &rmul(&self.rad, &o.rad),
        );
        Self::wrap(mid, r, prec)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul(&RealBall::from_i64(self.prec(), n))
    }

    pub fn mul_2exp(&self, e: i32) -> Self {
        RealBall {
            mid: Float::with_val(self.prec(), &self.mid << e),
            rad: Float::with_val(RAD_PREC, &self.rad << e),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let prec = self.prec().max(o.prec());
        let ob = abs_up(&o.mid);
        // need |mid_o| - rad_o > 0
        let denom_low = {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&ob - &o.rad, Round::Down);
            d
        };
        if !(denom_low > 0) {
            return Err(Error::PrecisionExhausted("division by ball containing zero".into()));
        }
        let mid = Float::with_val(prec, &self.mid / &o.mid);
        // r = (r_a + |a/b| r_b) / (|b| - r_b)
        let num = radd(&self.rad, &rmul(&abs_up(&mid), &o.rad));
        let mut r = Float::new(RAD_PREC);
        r.assign_round(&num / &denom_low, Round::Up);
        Ok(Self::wrap(mid, r, prec))
    }

    pub fn recip(&self) -> Result<Self> {
        RealBall::from_i64(self.prec(), 1).div(self)
    }

    pub fn abs(&self) -> Self {
        RealBall { mid: Float::with_val(self.prec(), self.mid.abs_ref()), rad: self.rad.clone() }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Natural log; requires the ball strictly positive.
    pub fn ln(&self) -> Result<Self> {
        let prec = self.prec();
        let low = {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&self.mid - &self.rad, Round::Down);
            d
        };
        if !(low > 0) {
            return Err(Error::PrecisionExhausted("log of ball not strictly positive".into()));
        }
        let mid = Float::with_val(prec, self.mid.ln_ref());
        let mut r = Float::new(RAD_PREC);
        r.assign_round(&self.rad / &low, Round::Up);
        Ok(Self::wrap(mid, r, prec))
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let mid = Float::with_val(prec, self.mid.exp_ref());
        // derivative bound exp(mid + rad) <= exp(mid)·exp(rad)
        let er = {
            let mut t = Float::new(RAD_PREC);
            t.assign_round(Float::with_val(RAD_PREC, self.rad.exp_ref()), Round::Up);
            t
        };
        let bound = rmul(&abs_up(&mid), &er);
        let r = rmul(&self.rad, &bound);
        Self::wrap(mid, r, prec)
    }

    /// Square root; requires the ball nonnegative-up-to-radius with positive lower bound,
    /// except an exact zero which maps to zero.
    pub fn sqrt(&self) -> Result<Self> {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(self.clone());
        }
        let prec = self.prec();
        let low = {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&self.mid - &self.rad, Round::Down);
            d
        };
        if !(low > 0) {
            return Err(Error::PrecisionExhausted("sqrt of ball not strictly positive".into()));
        }
        let mid = Float::with_val(prec, self.mid.sqrt_ref());
        let sq_low = Float::with_val(RAD_PREC, low.sqrt_ref());
        let mut r = Float::new(RAD_PREC);
        r.assign_round(&self.rad / &(Float::with_val(RAD_PREC, &sq_low * &Float::with_val(RAD_PREC, 2))), Round::Up);
        Ok(Self::wrap(mid, r, prec))
    }

    /// Simultaneous sin and cos (|derivative| <= 1 each).
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec();
        let (s, c) = self.mid.clone().sin_cos(Float::new(prec));
        (
            Self::wrap(s, self.rad.clone(), prec),
            Self::wrap(c, self.rad.clone(), prec),
        )
    }

    pub fn pow_u32(&self, e: u32) -> Self {
        let mut acc = RealBall::from_i64(self.prec(), 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Strictly positive lower bound check.
    pub fn is_strictly_positive(&self) -> bool {
        let mut d = Float::new(RAD_PREC);
        d.assign_round(&self.mid - &self.rad, Round::Down);
        d > 0
    }

    pub fn is_strictly_negative(&self) -> bool {
        let mut d = Float::new(RAD_PREC);
        d.assign_round(&self.mid + &self.rad, Round::Up);
        d < 0
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_strictly_positive() && !self.is_strictly_negative()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let prec = self.prec().max(64);
        let d = Float::with_val(prec, &self.mid - &Float::with_val(prec, x));
        let mut a = Float::new(RAD_PREC);
        a.assign_round(d.abs_ref(), Round::Down);
        a <= self.rad
    }

    /// Upper bound of |ball| as f64 (rounded up).
    pub fn abs_upper_f64(&self) -> f64 {
        let up = radd(&abs_up(&self.mid), &self.rad);
        up.to_f64_round(Round::Up)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    /// Enlarge the radius by `r` (rounded up).
    pub fn add_error(&self, r: &Float) -> Self {
        RealBall { mid: self.mid.clone(), rad: radd(&self.rad, r) }
    }

    pub fn add_error_f64(&self, r: f64) -> Self {
        self.add_error(&Float::with_val(RAD_PREC, r))
    }

    /// Union hull of two balls (interval containing both).
    pub fn union(&self, o: &Self) -> Self {
        // midpoint of hull endpoints
        let prec = self.prec().max(o.prec());
        let lo1 = Float::with_val(prec, &self.mid - &self.rad);
        let hi1 = Float::with_val(prec, &self.mid + &self.rad);
        let lo2 = Float::with_val(prec, &o.mid - &o.rad);
        let hi2 = Float::with_val(prec, &o.mid + &o.rad);
        let lo = lo1.min(&lo2);
        let hi = hi1.max(&hi2);
        let mid = Float::with_val(prec, Float::with_val(prec, &lo + &hi) / 2u32);
        let mut r = Float::new(RAD_PREC);
        r.assign_round(Float::with_val(prec, &hi - &lo) / 2u32, Round::Up);
        Self::wrap(mid, r, prec)
    }
}

#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall { re: RealBall::zero(prec), im: RealBall::zero(prec) }
    }

    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec();
        ComplexBall { re, im: RealBall::zero(prec) }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        ComplexBall { re: RealBall::from_rational(prec, q), im: RealBall::zero(prec) }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        ComplexBall { re: RealBall::from_i64(prec, n), im: RealBall::zero(prec) }
    }

    /// e^{2πi k/m}
    pub fn root_of_unity(prec: u32, k: u32, m: u32) -> Self {
        let theta = RealBall::pi(prec)
            .mul(&RealBall::from_i64(prec, 2 * k as i64))
            .div(&RealBall::from_i64(prec, m as i64))
            .expect("m > 0");
        let (s, c) = theta.sin_cos();
        ComplexBall { re: c, im: s }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, o: &RealBall) -> Self {
        ComplexBall { re: self.re.mul(o), im: self.im.mul(o) }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        ComplexBall { re: self.re.mul_i64(n), im: self.im.mul_i64(n) }
    }

    pub fn norm_sq(&self) -> RealBall {
        self.re.square().add(&self.im.square())
    }

    /// Rigorous magnitude interval [lo, hi] via center distance ± box radius.
    pub fn mag_bounds(&self) -> (f64, f64) {
        let m = self.re.to_f64().hypot(self.im.to_f64());
        let pad = self.re.rad_f64().hypot(self.im.rad_f64()) * (1.0 + 1e-12);
        let lo = ((m - pad) * (1.0 - 1e-12) - 1e-300).max(0.0);
        let hi = (m + pad) * (1.0 + 1e-12) + 1e-300;
        (lo, hi)
    }

    /// norm_sq intersected with the magnitude-interval square (tighter lower
    /// bound when re/im straddle zero).
    pub fn norm_sq_tight(&self) -> RealBall {
        let ball = self.norm_sq();
        let (lo, hi) = self.mag_bounds();
        let (lo2, hi2) = (lo * lo, hi * hi);
        let blo = ball.to_f64() - ball.rad_f64();
        let bhi = ball.to_f64() + ball.rad_f64();
        let nlo = blo.max(lo2);
        let nhi = bhi.min(hi2).max(nlo);
        if nlo > blo || nhi < bhi {
            let prec = ball.prec();
            return RealBall::from_f64(prec, (nlo + nhi) / 2.0)
                .add_error_f64((nhi - nlo) / 2.0 + 1e-300);
        }
        ball
    }

    pub fn abs(&self) -> Result<RealBall> {
        let n = self.norm_sq_tight();
        if n.mid.is_zero() && n.rad.is_zero() {
            return Ok(RealBall::zero(self.prec()));
        }
        n.sqrt()
    }

    /// log |z|; requires the ball to exclude zero.
    pub fn log_abs(&self) -> Result<RealBall> {
        Ok(self.norm_sq_tight().ln()?.mul_2exp(-1))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let n = o.norm_sq_tight();
        let num = self.mul(&o.conj());
        Ok(ComplexBall { re: num.re.div(&n)?, im: num.im.div(&n)? })
    }

    pub fn recip(&self) -> Result<Self> {
        ComplexBall::from_i64(self.prec(), 1).div(self)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Principal square root. Requires the ball to stay clear of the branch
    /// cut (negative real axis) unless it is exactly real-nonnegative.
    pub fn sqrt(&self) -> Result<Self> {
        let prec = self.prec();
        if self.im.mid.is_zero() && self.im.rad.is_zero() {
            if self.re.is_strictly_positive() || (self.re.mid.is_zero() && self.re.rad.is_zero()) {
                return Ok(ComplexBall { re: self.re.sqrt()?, im: RealBall::zero(prec) });
            }
            if self.re.is_strictly_negative() {
                return Ok(ComplexBall { re: RealBall::zero(prec), im: self.re.neg().sqrt()? });
            }
            return Err(Error::PrecisionExhausted("sqrt of real ball straddling zero".into()));
        }
        if !self.re.is_strictly_positive() && self.im.contains_zero() {
            return Err(Error::PrecisionExhausted("complex sqrt near branch cut".into()));
        }
        // w = sqrt((|z| + re)/2), im' = im / (2w), principal for re > 0;
        // otherwise compute via |z| and the half-angle structure on im sign.
        let r = self.abs()?;
        if self.re.is_strictly_positive() || !self.im.contains_zero() {
            let t = r.add(&self.re).mul_2exp(-1);
            if t.is_strictly_positive() {
                let w = t.sqrt()?;
                let im = self.im.div(&w.mul_i64(2))?;
                return Ok(ComplexBall { re: w, im });
            }
            // re very negative: use u = sqrt((|z| - re)/2) with sign from im
            let u = r.sub(&self.re).mul_2exp(-1).sqrt()?;
            let re = self.im.div(&u.mul_i64(2))?;
            // principal branch: sign(im(sqrt)) = sign(im(z)); re(sqrt) = im/(2u) carries it
            if self.im.is_strictly_positive() {
                return Ok(ComplexBall { re: re.clone(), im: u });
            } else if self.im.is_strictly_negative() {
                return Ok(ComplexBall { re: re.neg(), im: u.neg() });
            }
        }
        Err(Error::PrecisionExhausted("complex sqrt sign ambiguous".into()))
    }

    pub fn contains(&self, re: &Rational, im: &Rational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn abs_upper_f64(&self) -> f64 {
        let a = self.re.abs_upper_f64();
        let b = self.im.abs_upper_f64();
        (a * a + b * b).sqrt() * (1.0 + 1e-14)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_containment() {
        let a = RealBall::from_rational(96, &Rational::from((1, 3)));
        let b = RealBall::from_rational(96, &Rational::from((1, 6)));
        let s = a.add(&b);
        assert!(s.contains(&Rational::from((1, 2))));
        let p = a.mul(&b);
        assert!(p.contains(&Rational::from((1, 18))));
        let d = a.div(&b).unwrap();
        assert!(d.contains(&Rational::from(2)));
    }

    #[test]
    fn ln_exp_sqrt() {
        let x = RealBall::from_i64(96, 2);
        let l = x.ln().unwrap();
        let back = l.exp();
        assert!(back.contains(&Rational::from(2)));
        let s = x.sqrt().unwrap();
        assert!(s.square().contains(&Rational::from(2)));
        assert!(RealBall::from_i64(96, 0).ln().is_err());
    }

    #[test]
    fn roots_of_unity() {
        // i
        let z = ComplexBall::root_of_unity(96, 1, 4);
        assert!(z.re.contains_zero());
        assert!(z.im.contains(&Rational::from(1)));
        // sum over k of e^{2 pi i k/5} for k=1..4 is -1
        let mut s = ComplexBall::zero(96);
        for k in 1..5 {
            s = s.add(&ComplexBall::root_of_unity(96, k, 5));
        }
        assert!(s.re.contains(&Rational::from(-1)));
        assert!(s.im.contains_zero());
        assert!(s.re.rad_f64() < 1e-25);
    }

    #[test]
    fn complex_sqrt_principal() {
        // sqrt(2i) = 1 + i
        let z = ComplexBall { re: RealBall::zero(96), im: RealBall::from_i64(96, 2) };
        let w = z.sqrt().unwrap();
        assert!(w.re.contains(&Rational::from(1)));
        assert!(w.im.contains(&Rational::from(1)));
        // sqrt of negative real
        let z = ComplexBall::from_i64(96, -4);
        let w = z.sqrt().unwrap();
        assert!(w.re.contains_zero() && w.im.contains(&Rational::from(2)));
    }
}
