use colmez_core::archkernel::{
    adjunction_limit, adjunction_ray_fit, green_ms, legendre_q, legendre_q0_closed, UpperHalfPoint,
};
use colmez_core::numerics::real::bits_for;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

const DIGITS: u32 = 64;

fn fl(x: f64) -> Float {
    Float::with_val(bits_for(DIGITS), x)
}

/// t − 1 log-spaced over [10^{-3}, 999]
fn t_grid(n: usize) -> Vec<Float> {
    (0..n)
        .map(|i| {
            let e = -3.0 + (3.0f64 + 999f64.log10()) * i as f64 / (n - 1) as f64;
            fl(10f64.powf(e)) + 1u32
        })
        .collect()
}

#[test]
fn quadrature_matches_closed_form_q0() {
    let zero = fl(0.0);
    let tol = Float::with_val(bits_for(DIGITS), 10).pow(-50);
    for t in t_grid(30) {
        let q = legendre_q(&zero, &t, DIGITS).unwrap();
        let c = legendre_q0_closed(&t, DIGITS).unwrap();
        let diff = Float::with_val(bits_for(DIGITS), q.value() - c.value()).abs();
        assert!(diff < tol, "t = {}: diff {}", t.to_f64(), diff.to_f64());
    }
}

#[test]
fn q_half_is_stable_under_refinement() {
    use colmez_core::numerics::quad::{integrate_semiinfinite_detailed, Integrand};
    let bits = bits_for(40) + 32;
    let t = fl(2.0);
    let r = Float::with_val(bits, 3).sqrt();
    let f = Integrand::new(move |u: &Float| {
        let base = Float::with_val(bits, u.cosh_ref()) * &r + &t;
        (base.ln() * -1.5f64).exp()
    });
    let a = integrate_semiinfinite_detailed(&f, 40, 0).unwrap();
    let b = integrate_semiinfinite_detailed(&f, 40, 2).unwrap();
    let q = legendre_q(&fl(0.5), &fl(2.0), 40).unwrap();
    let tol = Float::with_val(bits, 10).pow(-36);
    assert!(Float::with_val(bits, a.value.value() - b.value.value()).abs() < tol);
    assert!(Float::with_val(bits, q.value() - b.value.value()).abs() < tol);
    // Q_s decreases in s for fixed t
    let q0 = legendre_q(&fl(0.0), &fl(2.0), 40).unwrap();
    assert!(q.value() < q0.value());
}

#[test]
fn limit_vanishes_linearly_along_rays() {
    // the full eight-ray sweep at 64 digits runs in the acceptance target
    let d = 48;
    let z0 = UpperHalfPoint::from_f64(0.3, 1.7, d).unwrap();
    let h = Float::with_val(bits_for(d), 10).pow(-13);
    let tol = Float::with_val(bits_for(d), 10).pow(-34);
    for k in [1, 2, 5, 7] {
        let angle = std::f64::consts::PI * k as f64 / 4.0;
        let fit = adjunction_ray_fit(&z0, angle, &h, d).unwrap();
        assert!(fit.paths_agree);
        assert!(fit.slope.is_finite() && fit.max_ratio < 1.0);
        assert!(fit.intercept.value().clone().abs() < tol, "angle {angle}: {}", fit.intercept);
        // leading term −(sin φ)/(2 Im z₀)
        assert!((fit.slope + angle.sin() / (2.0 * 1.7)).abs() < 1e-9);
    }
}

#[test]
fn vertical_approach_matches_direct_substitution() {
    let d = 40;
    let bits = bits_for(d);
    let y = Float::with_val(bits, 3) / 2u32;
    let eps = Float::with_val(bits, 1) / 8u32;
    let z0 = UpperHalfPoint::new(Float::new(bits), y.clone()).unwrap();
    let z1 = UpperHalfPoint::new(Float::new(bits), Float::with_val(bits, &y + &eps)).unwrap();
    let r = adjunction_limit(&z0, &z1, d).unwrap();
    let yy = Float::with_val(bits, &y * Float::with_val(bits, &y + &eps)) * 4u32;
    let expect = (Float::with_val(bits, eps.square_ref()) / yy).ln_1p() / 2u32
        - (Float::with_val(bits, &eps / &y)).ln_1p() / 2u32;
    assert!(r.agree);
    assert!(Float::with_val(bits, r.composite.value() - &expect).abs() < 1e-36);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn green_is_symmetric_and_invariant(
        x0 in -3.0f64..3.0, y0 in 0.2f64..3.0, x1 in -3.0f64..3.0, y1 in 0.2f64..3.0,
        c in -5.0f64..5.0, l in 0.1f64..10.0,
    ) {
        prop_assume!((x0 - x1).abs() + (y0 - y1).abs() > 1e-3);
        let d = 30;
        let s = Float::with_val(bits_for(d), 0.25);
        let z0 = UpperHalfPoint::from_f64(x0, y0, d).unwrap();
        let z1 = UpperHalfPoint::from_f64(x1, y1, d).unwrap();
        let g = green_ms(&s, &z0, &z1, d).unwrap();
        let g_sym = green_ms(&s, &z1, &z0, d).unwrap();
        let cf = Float::with_val(bits_for(d), c);
        let lf = Float::with_val(bits_for(d), l);
        let g_tr = green_ms(&s, &z0.translate(&cf), &z1.translate(&cf), d).unwrap();
        let g_sc = green_ms(&s, &z0.dilate(&lf), &z1.dilate(&lf), d).unwrap();
        let tol = 1e-24 * (1.0 + g.to_f64().abs());
        for other in [g_sym, g_tr, g_sc] {
            let diff = Float::with_val(bits_for(d), g.value() - other.value()).abs().to_f64();
            prop_assert!(diff < tol, "diff {}", diff);
        }
    }

    #[test]
    fn adjunction_paths_agree(x1 in -2.0f64..2.0, y1 in 0.1f64..4.0) {
        prop_assume!(x1.abs() + (y1 - 1.0).abs() > 1e-3);
        let d = 40;
        let z0 = UpperHalfPoint::from_f64(0.0, 1.0, d).unwrap();
        let z1 = UpperHalfPoint::from_f64(x1, y1, d).unwrap();
        prop_assert!(adjunction_limit(&z0, &z1, d).unwrap().agree);
    }
}
