//! Small helpers on arbitrary-precision integers and rationals.

use rug::{Integer, Rational};

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &Integer, p: &Integer) -> u32 {
    assert!(*n != 0, "valuation of zero");
    let mut v = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p.clone());
        if r != 0 {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(x: &Rational, p: &Integer) -> i64 {
    assert!(*x != 0, "valuation of zero");
    let vn = if *x.numer() == 0 { 0 } else { val_int(x.numer(), p) as i64 };
    let vd = val_int(x.denom(), p);
    vn - vd as i64
}

/// x / p^v exactly, for v = val_rat(x, p).
pub fn strip_p(x: &Rational, p: &Integer, v: i64) -> Rational {
    let pv = p.clone().pow(v.unsigned_abs() as u32);
    if v >= 0 {
        Rational::from(x / &pv)
    } else {
        Rational::from(x * &pv)
    }
}

/// Euler's totient of m ≥ 1.
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut phi = m;
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            phi -= phi / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Multiplicative order of a mod m, for gcd(a, m) = 1.
pub fn mult_order(a: u64, m: u32) -> u32 {
    assert!(m >= 1);
    let a = (a % m as u64) as u64;
    assert_eq!(gcd_u64(a, m as u64), 1, "order requires gcd(a, m) = 1");
    let mut x = a % m as u64;
    let mut k = 1u32;
    while x != 1 % m as u64 {
        x = x * a % m as u64;
        k += 1;
    }
    k
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Deterministic primality for u64-sized inputs via GMP.
pub fn is_prime_u64(n: u64) -> bool {
    Integer::from(n).is_probably_prime(40) != rug::integer::IsPrime::No
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let p = Integer::from(5);
        assert_eq!(val_int(&Integer::from(250), &p), 3);
        assert_eq!(val_rat(&Rational::from((4, 25)), &p), -2);
        assert_eq!(strip_p(&Rational::from((4, 25)), &p, -2), Rational::from(4));
    }

    #[test]
    fn phi_and_order() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(20), 8);
        assert_eq!(euler_phi(200), 80);
        assert_eq!(mult_order(11, 5), 1);
        assert_eq!(mult_order(3, 4), 2);
        assert_eq!(mult_order(2, 5), 4);
    }
}
