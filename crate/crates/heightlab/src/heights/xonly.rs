//! Exact x-only doubling for the canonical height limit
//! ĥ(P) = (1/2)·lim 4^{−n}·h(x(2ⁿP)).
//!
//! The tail is controlled by an explicit constant C with
//! |h(x(2Q)) − 4·h(x(Q))| ≤ C for every Q over every number field:
//! the upper side from the ℓ¹-norms of the duplication polynomials, the lower
//! side from integer Bézout cofactors (U·num + V·den = R₁·x⁷ etc.), giving
//! C₋ = log K + log R₁ + log R₂ by the product formula. After n doublings
//! the enclosure is ĥ ∈ 4^{−n}·h(x_n)/2 ± C·4^{−n}/6.

use crate::curve::minimal::ModelMap;
use crate::curve::weierstrass::EllipticCurve;
use crate::error::{Error, Result};
use crate::exact::ball::RealBall;
use crate::exact::cyclotomic::Cyclo;
use crate::exact::field::FieldElem;
use crate::exact::quad::Quad;
use crate::exact::weil::weil_height;
use rug::{Complete, Integer, Rational};

/// Duplication data on an integral model: numerator/denominator coefficients
/// (by ascending degree in x) and the tail constant.
pub struct DuplicationData {
    pub num: Vec<Integer>,
    pub den: Vec<Integer>,
    /// upper bound for sup |h∘φ − 4h|
    pub c_tail: f64,
    /// positive integer with gcd(num(a,b), den(a,b)) | r_bound for coprime (a,b)
    pub r_bound: Integer,
}

pub fn duplication_data(e: &EllipticCurve<Rational>) -> DuplicationData {
    let int = |x: &Rational| -> Integer {
        assert_eq!(*x.denom(), 1, "duplication data needs an integral model");
        x.numer().clone()
    };
    let (b2, b4, b6, b8) = (int(&e.b2), int(&e.b4), int(&e.b6), int(&e.b8));
    // num = x⁴ − b4x² − 2b6x − b8, den = 4x³ + b2x² + 2b4x + b6
    let num = vec![
        -b8.clone(),
        Integer::from(-2) * &b6,
        -b4.clone(),
        Integer::new(),
        Integer::from(1),
    ];
    let den = vec![b6.clone(), Integer::from(2) * &b4, b2.clone(), Integer::from(4), Integer::new()];
    let l1 = |v: &[Integer]| -> Integer { v.iter().map(|c| c.clone().abs()).sum() };
    let c_plus = {
        let m = l1(&num).max(l1(&den));
        ln_upper(&m)
    };
    // Bézout cofactors: deg-3 homogeneous U, V with U·num + V·den = R₁·x⁷,
    // and S, T with S·num + T·den = R₂·z⁷ (homogenized in z).
    let (u, v, r1) = bezout_cofactors(&num, &den, true);
    let (s, t, r2) = bezout_cofactors(&num, &den, false);
    let k = (l1(&u) + l1(&v)).max(l1(&s) + l1(&t));
    let c_minus = ln_upper(&k) + ln_upper(&r1) + ln_upper(&r2);
    DuplicationData {
        num,
        den,
        c_tail: c_plus.max(c_minus) * (1.0 + 1e-12),
        r_bound: r1 * r2,
    }
}

fn ln_upper(n: &Integer) -> f64 {
    if *n <= 1 {
        return 0.0;
    }
    let b = RealBall::from_integer(64, n).ln().expect("positive");
    b.to_f64() + b.rad_f64() + 1e-12
}

/// Solve U·num + V·den = R·x⁷ (x_side) or = R·z⁷, with U, V homogeneous of
/// degree 3 and integer coefficients, R a positive integer.
fn bezout_cofactors(num: &[Integer], den: &[Integer], x_side: bool) -> (Vec<Integer>, Vec<Integer>, Integer) {
    // unknowns u0..u3, v0..v3 (coefficients of x^j z^{3-j}); equations match
    // coefficients of x^k z^{7-k}, k = 0..7. num/den indexed by x-degree.
    let mut mat = vec![vec![Rational::new(); 9]; 8];
    for j in 0..4usize {
        for (d, c) in num.iter().enumerate() {
            // u_j x^j z^{3-j} · c x^d z^{4-d} -> x^{j+d}
            mat[j + d][j] = Rational::from(c);
        }
        for (d, c) in den.iter().enumerate() {
            mat[j + d][4 + j] = Rational::from(c);
        }
    }
    let target = if x_side { 7 } else { 0 };
    for (k, row) in mat.iter_mut().enumerate() {
        row[8] = if k == target { Rational::from(1) } else { Rational::new() };
    }
    // Gaussian elimination
    let n = 8;
    let mut m = mat;
    let mut col_of_row = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for col in 0..n {
        let mut piv = None;
        for (r, row) in m.iter().enumerate() {
            if !used[r] && row[col] != 0 {
                piv = Some(r);
                break;
            }
        }
        let piv = piv.expect("duplication polynomials are coprime");
        used[piv] = true;
        col_of_row[piv] = col;
        let inv = Rational::from(m[piv][col].clone().recip());
        for c in col..=n {
            m[piv][c] = Rational::from(&m[piv][c] * &inv);
        }
        for r in 0..n {
            if r != piv && m[r][col] != 0 {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = Rational::from(&m[piv][c] * &f);
                    m[r][c] = Rational::from(&m[r][c] - &sub);
                }
            }
        }
    }
    let mut sol = vec![Rational::new(); n];
    for (r, &c) in col_of_row.iter().enumerate() {
        if c != usize::MAX {
            sol[c] = m[r][8].clone();
        }
    }
    // clear denominators
    let mut dlcm = Integer::from(1);
    for x in &sol {
        dlcm.lcm_mut(x.denom());
    }
    let ints: Vec<Integer> = sol
        .iter()
        .map(|x| Integer::from(x.numer() * Integer::from(&dlcm / x.denom())))
        .collect();
    (ints[0..4].to_vec(), ints[4..8].to_vec(), dlcm)
}

// ---------------------------------------------------------------------------
// coordinate backends
// ---------------------------------------------------------------------------

pub enum XCoord {
    /// x = a/b, gcd(a,b) = 1, b > 0
    Rat(Integer, Integer),
    /// x = (a_re + a_im·i)/(b_re + b_im·i), ℤ[i]-coprime
    Gauss([Integer; 2], [Integer; 2]),
    Quad(Quad),
    Cyclo(Cyclo),
}

impl XCoord {
    pub fn from_rational(x: &Rational) -> Self {
        XCoord::Rat(x.numer().clone(), x.denom().clone())
    }

    pub fn from_cyclo(x: &Cyclo) -> Self {
        if let Some(r) = x.to_rational() {
            return XCoord::from_rational(&r);
        }
        if x.conductor() == 4 {
            let c = x.coeffs();
            let re = c[0].clone();
            let im = c[1].clone();
            let den = re.denom().clone().lcm(im.denom());
            let a = [
                Integer::from(re.numer() * Integer::from(&den / re.denom())),
                Integer::from(im.numer() * Integer::from(&den / im.denom())),
            ];
            return XCoord::Gauss(a, [den, Integer::new()]);
        }
        XCoord::Cyclo(x.clone())
    }

    pub fn bits(&self) -> u64 {
        match self {
            XCoord::Rat(a, b) => a.significant_bits().max(b.significant_bits()) as u64,
            XCoord::Gauss(a, b) => a
                .iter()
                .chain(b.iter())
                .map(|x| x.significant_bits() as u64)
                .max()
                .unwrap(),
            XCoord::Quad(q) => [&q.a, &q.b]
                .iter()
                .map(|r| r.numer().significant_bits().max(r.denom().significant_bits()) as u64)
                .max()
                .unwrap(),
            XCoord::Cyclo(c) => c
                .coeffs()
                .iter()
                .map(|r| r.numer().significant_bits().max(r.denom().significant_bits()) as u64)
                .max()
                .unwrap_or(1),
        }
    }

    /// x(2P) from x(P); `None` when 2P = O (duplication denominator vanishes).
    pub fn dup(&self, dd: &DuplicationData) -> Option<XCoord> {
        match self {
            XCoord::Rat(a, b) => {
                let nv = eval_homog(&dd.num, a, b);
                let dv = eval_homog(&dd.den, a, b);
                if dv == 0 {
                    return None;
                }
                // gcd divides r_bound: recover it from reductions mod r_bound
                let g = Integer::from(nv.gcd_ref(&dd.r_bound)).gcd(&dv);
                let mut a2 = nv / &g;
                let mut b2 = dv / g;
                if b2 < 0 {
                    a2 = -a2;
                    b2 = -b2;
                }
                debug_assert_eq!(Integer::from(a2.gcd_ref(&b2)), 1);
                Some(XCoord::Rat(a2, b2))
            }
            XCoord::Gauss(a, b) => {
                let nv = eval_homog_gauss(&dd.num, a, b);
                let dv = eval_homog_gauss(&dd.den, a, b);
                if dv[0] == 0 && dv[1] == 0 {
                    return None;
                }
                // Gaussian gcd of the pair divides r_bound (a rational integer)
                let g = gauss_gcd3(&nv, &dv, &dd.r_bound);
                let a2 = gauss_div_exact(&nv, &g);
                let b2 = gauss_div_exact(&dv, &g);
                Some(XCoord::Gauss(a2, b2))
            }
            XCoord::Quad(x) => {
                let n = eval_poly_field(&dd.num, x);
                let d = eval_poly_field(&dd.den, x);
                if FieldElem::is_zero(&d) {
                    return None;
                }
                Some(XCoord::Quad(n.div(&d).unwrap()))
            }
            XCoord::Cyclo(x) => {
                let n = eval_poly_field(&dd.num, x);
                let d = eval_poly_field(&dd.den, x);
                if FieldElem::is_zero(&d) {
                    return None;
                }
                Some(XCoord::Cyclo(n.div(&d).unwrap()))
            }
        }
    }

    /// Absolute logarithmic Weil height of x.
    pub fn naive_height(&self, prec: u32) -> Result<RealBall> {
        match self {
            XCoord::Rat(a, b) => {
                let m = if a.clone().abs() > *b { a.clone().abs() } else { b.clone() };
                if m <= 1 {
                    return Ok(RealBall::zero(prec));
                }
                RealBall::from_integer(prec, &m).ln()
            }
            XCoord::Gauss(a, b) => {
                // h = (1/2)·log max(Nm a, Nm b) for an ℤ[i]-coprime pair
                let na = gauss_norm(a);
                let nb = gauss_norm(b);
                let m = if na > nb { na } else { nb };
                if m <= 1 {
                    return Ok(RealBall::zero(prec));
                }
                Ok(RealBall::from_integer(prec, &m).ln()?.mul_2exp(-1))
            }
            XCoord::Quad(x) => {
                if x.is_rational() {
                    return crate::exact::weil::weil_height_rational(&x.a, prec);
                }
                // h = (1/2)·log M(primitive integer multiple of min poly)
                let mp = x.min_poly();
                let qp = crate::exact::poly::Poly::new(mp);
                let (_, prim) = crate::exact::poly::primitive_part(&qp);
                Ok(crate::exact::mahler::log_mahler(&prim, prec)?.mul_2exp(-1))
            }
            XCoord::Cyclo(x) => weil_height(x, prec),
        }
    }
}

fn eval_homog(coeffs: &[Integer], a: &Integer, b: &Integer) -> Integer {
    // Σ c_d a^d b^{deg−d}, deg = 4
    let deg = 4usize;
    let mut apow = vec![Integer::from(1)];
    let mut bpow = vec![Integer::from(1)];
    for i in 1..=deg {
        apow.push((&apow[i - 1] * a).complete());
        bpow.push((&bpow[i - 1] * b).complete());
    }
    let mut acc = Integer::new();
    for (d, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            acc += c * (&apow[d] * &bpow[deg - d]).complete();
        }
    }
    acc
}

fn gauss_mul(x: &[Integer; 2], y: &[Integer; 2]) -> [Integer; 2] {
    [
        (&x[0] * &y[0]).complete() - (&x[1] * &y[1]).complete(),
        (&x[0] * &y[1]).complete() + (&x[1] * &y[0]).complete(),
    ]
}

fn gauss_norm(x: &[Integer; 2]) -> Integer {
    x[0].clone().square() + x[1].clone().square()
}

fn eval_homog_gauss(coeffs: &[Integer], a: &[Integer; 2], b: &[Integer; 2]) -> [Integer; 2] {
    let deg = 4usize;
    let one = [Integer::from(1), Integer::new()];
    let mut apow = vec![one.clone()];
    let mut bpow = vec![one];
    for i in 1..=deg {
        apow.push(gauss_mul(&apow[i - 1], a));
        bpow.push(gauss_mul(&bpow[i - 1], b));
    }
    let mut acc = [Integer::new(), Integer::new()];
    for (d, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            let t = gauss_mul(&apow[d], &bpow[deg - d]);
            acc[0] += (c * &t[0]).complete();
            acc[1] += (c * &t[1]).complete();
        }
    }
    acc
}

/// Gaussian-integer gcd of (x, y, r) where the gcd of (x, y) divides the
/// rational integer r: reduce mod r first, then run the Euclidean algorithm
/// on small elements.
fn gauss_gcd3(x: &[Integer; 2], y: &[Integer; 2], r: &Integer) -> [Integer; 2] {
    let xr = [x[0].clone() % r, x[1].clone() % r];
    let yr = [y[0].clone() % r, y[1].clone() % r];
    let mut g = gauss_gcd(&xr, &[r.clone(), Integer::new()]);
    g = gauss_gcd(&yr, &g);
    // normalize to first quadrant-ish (unit multiple is immaterial)
    g
}

fn gauss_gcd(a: &[Integer; 2], b: &[Integer; 2]) -> [Integer; 2] {
    let mut x = a.clone();
    let mut y = b.clone();
    while !(y[0] == 0 && y[1] == 0) {
        // q = round(x / y), r = x − q·y
        let n = gauss_norm(&y);
        let prod = gauss_mul(&x, &[y[0].clone(), Integer::from(-&y[1])]);
        let q = [round_div(&prod[0], &n), round_div(&prod[1], &n)];
        let qy = gauss_mul(&q, &y);
        let r = [(&x[0] - &qy[0]).complete(), (&x[1] - &qy[1]).complete()];
        x = y;
        y = r;
    }
    x
}

fn round_div(a: &Integer, b: &Integer) -> Integer {
    // nearest integer to a/b
    let two_a = Integer::from(a * 2u32);
    let (mut q, r) = two_a.div_rem_euc(Integer::from(b * 2u32));
    if Integer::from(&r * 2u32) >= Integer::from(b * 2u32) {
        q += 1;
    }
    q
}

fn gauss_div_exact(x: &[Integer; 2], g: &[Integer; 2]) -> [Integer; 2] {
    let n = gauss_norm(g);
    let prod = gauss_mul(x, &[g[0].clone(), Integer::from(-&g[1])]);
    let q0 = prod[0].clone() / &n;
    let q1 = prod[1].clone() / &n;
    debug_assert_eq!(Integer::from(&q0 * &n), prod[0]);
    debug_assert_eq!(Integer::from(&q1 * &n), prod[1]);
    [q0, q1]
}

fn eval_poly_field<F: FieldElem>(coeffs: &[Integer], x: &F) -> F {
    let mut acc = x.zero_like();
    for c in coeffs.iter().rev() {
        let ci = c.to_i64().map(|v| x.from_i64_like(v)).unwrap_or_else(|| {
            // large coefficient: split into limbs (rare; b-invariants are small at desk scale)
            let mut v = x.zero_like();
            let mut rem = c.clone();
            let chunk = Integer::from(1u64 << 62);
            let mut scale = x.one_like();
            let big = x.from_i64_like(1i64 << 62);
            while rem != 0 {
                let (q, r) = rem.div_rem(chunk.clone());
                v = v.add(&scale.mul(&x.from_i64_like(r.to_i64().unwrap())));
                scale = scale.mul(&big);
                rem = q;
            }
            v
        });
        acc = acc.mul(x).add(&ci);
    }
    acc
}

// ---------------------------------------------------------------------------
// the doubling driver
// ---------------------------------------------------------------------------

pub struct DoublingParams {
    pub target_radius: f64,
    pub bit_budget: u64,
    pub prec: u32,
}

impl Default for DoublingParams {
    fn default() -> Self {
        DoublingParams { target_radius: 1e-9, bit_budget: 1 << 28, prec: 96 }
    }
}

/// ĥ from the x-coordinate on an integral model, via exact doublings.
pub fn doubling_height_x(
    dd: &DuplicationData,
    x0: XCoord,
    params: &DoublingParams,
) -> Result<RealBall> {
    let c = dd.c_tail.max(1.0);
    let n = ((c / (6.0 * params.target_radius)).ln() / (4f64).ln()).ceil().max(1.0) as u32;
    let mut x = x0;
    for _ in 0..n {
        match x.dup(dd) {
            None => return Ok(RealBall::zero(params.prec)), // hit O: torsion
            Some(next) => x = next,
        }
        if x.bits() > params.bit_budget {
            return Err(Error::CoordinateBlowup(x.bits()));
        }
    }
    let h = x.naive_height(params.prec)?;
    let scale = 0.5 / 4f64.powi(n as i32);
    let val = h.mul(&RealBall::from_f64(params.prec, scale));
    Ok(val.add_error_f64(c / 6.0 / 4f64.powi(n as i32) * (1.0 + 1e-12)))
}

/// Transform an x-coordinate through a model map (old model → new model):
/// x' = (x − r)/u².
pub fn xcoord_forward(map: &ModelMap, x: &XCoord) -> XCoord {
    let u2 = Rational::from(&map.u * &map.u);
    match x {
        XCoord::Rat(a, b) => {
            let xq = Rational::from((a.clone(), b.clone()));
            let xp = (xq - &map.r) / u2;
            XCoord::from_rational(&xp)
        }
        XCoord::Gauss(a, b) => {
            // (a/b − r)/u² over ℚ(i)
            let re_r = &map.r;
            let nb = [
                (&a[0] * u2.denom()).complete(),
                (&a[1] * u2.denom()).complete(),
            ];
            // a − r·b:
            let rb_num = [
                b[0].clone() * re_r.numer(),
                b[1].clone() * re_r.numer(),
            ];
            // common denominator: r = rn/rd: x' = (a·rd − rn·b) / (b·rd·u²)
            let rd = re_r.denom();
            let num = [
                Integer::from(&a[0] * rd) - &rb_num[0],
                Integer::from(&a[1] * rd) - &rb_num[1],
            ];
            let u2n = u2.numer();
            let den = [
                b[0].clone() * rd * u2n,
                b[1].clone() * rd * u2n,
            ];
            let num = [
                Integer::from(&num[0] * u2.denom()),
                Integer::from(&num[1] * u2.denom()),
            ];
            let _ = nb;
            // reduce by gcd of norms conservatively: full ℤ[i] gcd
            let g = gauss_gcd(&num, &den);
            if g[0] == 0 && g[1] == 0 {
                return XCoord::Gauss(num, den);
            }
            XCoord::Gauss(gauss_div_exact(&num, &g), gauss_div_exact(&den, &g))
        }
        XCoord::Quad(q) => {
            let a = Rational::from(&q.a - &map.r) / u2.clone();
            let b = Rational::from(&q.b / &u2);
            XCoord::Quad(Quad::new(a, b, q.d.clone()))
        }
        XCoord::Cyclo(cx) => {
            let r = Cyclo::from_rational(map.r.clone()).lift(cx.conductor());
            let u2i = Cyclo::from_rational(Rational::from(u2.recip_ref()));
            XCoord::Cyclo(cx.sub(&r).mul(&u2i))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::weierstrass::Point;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn tail_constants_reasonable() {
        let e = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let dd = duplication_data(&e);
        assert!(dd.c_tail > 0.0 && dd.c_tail < 60.0, "{}", dd.c_tail);
        // the relation actually holds on sampled small inputs:
        for (a, b) in [(3i64, 2i64), (1, 5), (-7, 3)] {
            let av = Integer::from(a);
            let bv = Integer::from(b);
            let nv = eval_homog(&dd.num, &av, &bv);
            let dv = eval_homog(&dd.den, &av, &bv);
            let g = Integer::from(nv.gcd_ref(&dv));
            assert!(dd.r_bound.is_divisible(&g), "gcd {g} exceeds bound {}", dd.r_bound);
        }
    }

    #[test]
    fn doubling_height_torsion_is_zero() {
        // (0,0) on y² = x³ − x is 2-torsion
        let e = EllipticCurve::new(q(0), q(0), q(0), q(-1), q(0)).unwrap();
        let dd = duplication_data(&e);
        let h = doubling_height_x(
            &dd,
            XCoord::from_rational(&Rational::new()),
            &DoublingParams { target_radius: 1e-6, ..Default::default() },
        )
        .unwrap();
        assert_eq!(h.to_f64(), 0.0);
    }

    #[test]
    fn doubling_height_37a_generator() {
        // ĥ((0,0)) on y²+y = x³−x is 0.02555570412… (half the regulator 0.0511114082…)
        let e = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let dd = duplication_data(&e);
        let h = doubling_height_x(
            &dd,
            XCoord::from_rational(&Rational::new()),
            &DoublingParams { target_radius: 1e-7, ..Default::default() },
        )
        .unwrap();
        assert!(
            (h.to_f64() - 0.025555704119774) < 1e-7 + h.rad_f64(),
            "{} ± {}",
            h.to_f64(),
            h.rad_f64()
        );
        assert!((h.to_f64() - 0.025555704119774).abs() <= h.rad_f64() + 1e-12);
    }

    #[test]
    fn quadraticity_via_doubling() {
        let e = EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let dd = duplication_data(&e);
        let p0 = Point::Affine(q(0), q(0));
        let p3 = e.scalar_mul(3, &p0);
        let params = DoublingParams { target_radius: 1e-7, ..Default::default() };
        let h1 = doubling_height_x(&dd, XCoord::from_rational(p0.x().unwrap()), &params).unwrap();
        let h3 = doubling_height_x(&dd, XCoord::from_rational(p3.x().unwrap()), &params).unwrap();
        assert!(
            (h3.to_f64() - 9.0 * h1.to_f64()).abs() <= h3.rad_f64() + 9.0 * h1.rad_f64(),
            "{} vs {}",
            h3.to_f64(),
            9.0 * h1.to_f64()
        );
    }
}
