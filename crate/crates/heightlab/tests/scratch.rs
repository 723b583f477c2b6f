#[test]
fn hdiff_debug() {
    use heightlab::heights::hdiff::*;
    use heightlab::heights::arch::ArchContext;
    use heightlab::curve::weierstrass::EllipticCurve;
    use rug::Rational;
    let q = |n: i64| Rational::from(n);
    for (label, e) in [
        ("37a1", EllipticCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap()),
        ("cm25", EllipticCurve::new(q(0), q(0), q(0), q(-25), q(0)).unwrap()),
        ("add5", EllipticCurve::new(q(0), q(0), q(0), q(0), q(5)).unwrap()),
    ] {
        let m = heightlab::curve::minimal::global_minimal_model(&e).unwrap();
        let ctx = ArchContext::new(&m.curve, 96).unwrap();
        println!("{label}: disc>0 {} q = {}", m.curve.disc > 0, ctx.q.to_f64());
        let sweep = TateSweep::new(&ctx, 96).unwrap();
        match sweep.rho_near_origin_public() {
            Ok(b) => println!("  near-O rho = {} ± {:.2e}", b.to_f64(), b.rad_f64()),
            Err(e) => println!("  near-O ERR {e:?}"),
        }
        match rho_range(&m.curve, 96) {
            Ok(r) => println!("  range [{:.3}, {:.3}] cx {}", r.lo, r.hi, r.complex_ok),
            Err(e) => println!("  range ERR {e:?}"),
        }
    }
}
