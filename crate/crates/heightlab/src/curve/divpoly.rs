//! Division polynomials in x-only form.
//!
//! Writing ψ_n for the n-division polynomial, t_n below is ψ_n for odd n and
//! ψ_n/ψ₂ for even n, so that every t_n is a polynomial in x alone after
//! substituting ψ₂² = B(x) = 4x³ + b2x² + 2b4x + b6.

use super::weierstrass::EllipticCurve;
use crate::exact::field::FieldElem;
use crate::exact::poly::Poly;

pub struct DivisionPolys<F: FieldElem> {
    /// B(x) = ψ₂² as a polynomial in x
    pub b: Poly<F>,
    /// t_n for n = 0, 1, 2, ... (t_0 = 0, t_1 = 1, t_2 = 1)
    t: Vec<Poly<F>>,
}

impl<F: FieldElem> DivisionPolys<F> {
    pub fn new(e: &EllipticCurve<F>) -> Self {
        let one = e.a1.one_like();
        let b = Poly::new(vec![
            e.b6.clone(),
            e.b4.mul_i64(2),
            e.b2.clone(),
            one.from_i64_like(4),
        ]);
        // t3 = ψ3 = 3x⁴ + b2x³ + 3b4x² + 3b6x + b8
        let t3 = Poly::new(vec![
            e.b8.clone(),
            e.b6.mul_i64(3),
            e.b4.mul_i64(3),
            e.b2.clone(),
            one.from_i64_like(3),
        ]);
        // t4 = ψ4/ψ2 = 2x⁶ + b2x⁵ + 5b4x⁴ + 10b6x³ + 10b8x² + (b2b8−b4b6)x + (b4b8−b6²)
        let t4 = Poly::new(vec![
            e.b4.mul(&e.b8).sub(&e.b6.square()),
            e.b2.mul(&e.b8).sub(&e.b4.mul(&e.b6)),
            e.b8.mul_i64(10),
            e.b6.mul_i64(10),
            e.b4.mul_i64(5),
            e.b2.clone(),
            one.from_i64_like(2),
        ]);
        let t = vec![
            Poly::zero(),
            Poly::constant(one.clone()),
            Poly::constant(one),
            t3,
            t4,
        ];
        DivisionPolys { b, t }
    }

    /// t_n, extending the table as needed. With ψ_n = ψ₂^{[n even]}·t_n the
    /// standard recurrences collapse to
    ///   t_{2j+1} = B²·t_{j+2}t_j³ − t_{j−1}t_{j+1}³   (j even)
    ///   t_{2j+1} = t_{j+2}t_j³ − B²·t_{j−1}t_{j+1}³   (j odd)
    ///   t_{2j}   = t_j·(t_{j+2}t_{j−1}² − t_{j−2}t_{j+1}²)
    pub fn t(&mut self, n: usize) -> Poly<F> {
        while self.t.len() <= n {
            let k = self.t.len();
            let next = if k % 2 == 1 {
                let j = (k - 1) / 2;
                let tj = self.t(j);
                let first = self.t(j + 2).mul(&tj.mul(&tj).mul(&tj));
                let tj1 = self.t(j + 1);
                let second = self.t(j - 1).mul(&tj1.mul(&tj1).mul(&tj1));
                let b_sq = self.b.mul(&self.b);
                if j % 2 == 0 {
                    b_sq.mul(&first).sub(&second)
                } else {
                    first.sub(&b_sq.mul(&second))
                }
            } else {
                let j = k / 2;
                let tm1 = self.t(j - 1);
                let tp1 = self.t(j + 1);
                let inner = self
                    .t(j + 2)
                    .mul(&tm1.mul(&tm1))
                    .sub(&self.t(j - 2).mul(&tp1.mul(&tp1)));
                self.t(j).mul(&inner)
            };
            self.t.push(next);
        }
        self.t[n].clone()
    }

    /// x(nP) as a rational function (numerator, denominator) in x(P):
    /// x(nP) = x − ψ_{n−1}ψ_{n+1}/ψ_n².
    pub fn x_multiple_map(&mut self, n: usize) -> (Poly<F>, Poly<F>) {
        assert!(n >= 1);
        if n == 1 {
            let one = Poly::constant(self.b.coeffs[0].one_like());
            let x = Poly::new(vec![self.b.coeffs[0].zero_like(), self.b.coeffs[0].one_like()]);
            return (x, one);
        }
        let tm = self.t(n - 1);
        let tp = self.t(n + 1);
        let tn = self.t(n);
        let x = Poly::new(vec![self.b.coeffs[0].zero_like(), self.b.coeffs[0].one_like()]);
        if n % 2 == 1 {
            // ψ_{n−1}ψ_{n+1} = B·t_{n−1}t_{n+1}, ψ_n² = t_n²
            let den = tn.mul(&tn);
            let num = x.mul(&den).sub(&self.b.mul(&tm).mul(&tp));
            (num, den)
        } else {
            // ψ_{n−1}ψ_{n+1} = t_{n−1}t_{n+1}, ψ_n² = B·t_n²
            let den = self.b.mul(&tn).mul(&tn);
            let num = x.mul(&den).sub(&tm.mul(&tp));
            (num, den)
        }
    }
}
