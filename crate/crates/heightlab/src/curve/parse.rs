//! Text formats: curves as "a1,a2,a3,a4,a6" (rationals), points as "x;y" or
//! "O", cyclotomic coordinates as "m:[c0,c1,...]".

use super::weierstrass::{EllipticCurve, Point};
use crate::error::{Error, Result};
use crate::exact::cyclotomic::Cyclo;
use crate::exact::rat::euler_phi;
use rug::Rational;
use std::str::FromStr;

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational '{s}': {e}")))
}

pub fn parse_curve(s: &str) -> Result<EllipticCurve<Rational>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(Error::Parse(format!(
            "curve must have 5 comma-separated a-invariants, got {}",
            parts.len()
        )));
    }
    let v: Result<Vec<Rational>> = parts.iter().map(|p| parse_rational(p)).collect();
    let v = v?;
    EllipticCurve::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone())
}

/// "m:[c0,c1,...]" (cyclotomic) or a bare rational.
pub fn parse_cyclo(s: &str) -> Result<Cyclo> {
    let s = s.trim();
    if let Some(idx) = s.find(':') {
        let m: u32 = s[..idx]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad conductor in '{s}'")))?;
        let body = s[idx + 1..].trim();
        if !(body.starts_with('[') && body.ends_with(']')) {
            return Err(Error::Parse(format!("expected [c0,c1,...] in '{s}'")));
        }
        let inner = &body[1..body.len() - 1];
        let coeffs: Result<Vec<Rational>> = if inner.trim().is_empty() {
            Ok(vec![])
        } else {
            inner.split(',').map(parse_rational).collect()
        };
        let mut coeffs = coeffs?;
        if coeffs.len() > euler_phi(m) as usize {
            return Err(Error::Parse(format!(
                "too many coefficients for conductor {m} (φ = {})",
                euler_phi(m)
            )));
        }
        coeffs.resize(euler_phi(m) as usize, Rational::new());
        Ok(Cyclo::reduce(m, &coeffs))
    } else {
        Ok(Cyclo::from_rational(parse_rational(s)?))
    }
}

pub fn parse_point(s: &str) -> Result<Point<Rational>> {
    let s = s.trim();
    if s == "O" || s == "o" || s == "0" && !s.contains(';') {
        return Ok(Point::Infinity);
    }
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("point must be 'x;y' or 'O', got '{s}'")));
    }
    Ok(Point::Affine(parse_rational(parts[0])?, parse_rational(parts[1])?))
}

pub fn parse_point_cyclo(s: &str) -> Result<Point<Cyclo>> {
    let s = s.trim();
    if s == "O" || s == "o" {
        return Ok(Point::Infinity);
    }
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("point must be 'x;y' or 'O', got '{s}'")));
    }
    Ok(Point::Affine(parse_cyclo(parts[0])?, parse_cyclo(parts[1])?))
}

pub fn format_point(p: &Point<Rational>) -> String {
    match p {
        Point::Infinity => "O".into(),
        Point::Affine(x, y) => format!("{x};{y}"),
    }
}
