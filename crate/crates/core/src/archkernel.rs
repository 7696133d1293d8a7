//! Archimedean kernel: the Legendre function of the second kind, the Green
//! function m_s on the upper half-plane, and the limit that appears in the
//! adjunction formula as z₁ → z₀.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_semiinfinite, Integrand};
use crate::numerics::real::{bits_for, tolerance};
use crate::numerics::BigReal;

#[derive(Clone, Debug)]
pub struct UpperHalfPoint {
    pub x: Float,
    pub y: Float,
}

impl UpperHalfPoint {
    pub fn new(x: Float, y: Float) -> Result<Self> {
        if !(y.is_finite() && x.is_finite()) || y <= 0 {
            return Err(Error::Domain(format!("Im z must be positive, got {}", y.to_f64())));
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn from_f64(x: f64, y: f64, digits: u32) -> Result<Self> {
        let bits = bits_for(digits);
        UpperHalfPoint::new(Float::with_val(bits, x), Float::with_val(bits, y))
    }

    /// |z − w|²
    pub fn dist_sq(&self, w: &UpperHalfPoint) -> Float {
        let bits = self.x.prec().max(w.x.prec());
        let dx = Float::with_val(bits, &self.x - &w.x);
        let dy = Float::with_val(bits, &self.y - &w.y);
        dx.square() + dy.square()
    }

    pub fn translate(&self, c: &Float) -> Self {
        UpperHalfPoint {
            x: Float::with_val(self.x.prec(), &self.x + c),
            y: self.y.clone(),
        }
    }

    pub fn dilate(&self, l: &Float) -> Self {
        UpperHalfPoint {
            x: Float::with_val(self.x.prec(), &self.x * l),
            y: Float::with_val(self.y.prec(), &self.y * l),
        }
    }
}

fn check_t(t: &Float) -> Result<()> {
    if !t.is_finite() || *t <= 1 {
        return Err(Error::Domain(format!(
            "Q_s(t) needs t > 1 (logarithmic singularity at t = 1), got {}",
            t.to_f64()
        )));
    }
    Ok(())
}

/// Q_s(t) = ∫₀^∞ (t + √(t²−1) cosh u)^{−1−s} du, by quadrature.
pub fn legendre_q(s: &Float, t: &Float, digits: u32) -> Result<BigReal> {
    check_t(t)?;
    let tau = Float::with_val(bits_for(digits) + 32, t - 1u32);
    legendre_q_excess(s, &tau, digits)
}

/// Q_s(1 + τ), τ > 0. Taking the excess τ as input keeps full relative
/// precision when t is very close to 1.
pub fn legendre_q_excess(s: &Float, tau: &Float, digits: u32) -> Result<BigReal> {
    if !tau.is_finite() || *tau <= 0 {
        return Err(Error::Domain(format!(
            "Q_s(t) needs t > 1 (logarithmic singularity at t = 1), got t − 1 = {}",
            tau.to_f64()
        )));
    }
    if !s.is_finite() || *s < 0 {
        return Err(Error::Domain("Q_s is evaluated for s ≥ 0".into()));
    }
    let bits = bits_for(digits) + 32;
    let t = Float::with_val(bits, tau + 1u32);
    // √(t² − 1) = √(τ(τ + 2))
    let r = (Float::with_val(bits, tau + 2u32) * tau).sqrt();
    let e = -Float::with_val(bits, s + 1u32);
    // With u = asinh w the integrand is (t + r√(1+w²))^{−1−s}/√(1+w²); its
    // transition sits at w ≈ t/r, a scale the exp-sinh nodes resolve at a
    // cost logarithmic in t/r, unlike the plateau of length log(t/r) in u.
    let f = Integrand::new(move |w: &Float| {
        let c = (Float::with_val(bits, w.square_ref()) + 1u32).sqrt();
        let base = Float::with_val(bits, &c * &r) + &t;
        (base.ln() * &e).exp() / c
    });
    integrate_semiinfinite(&f, digits)
}

/// Q₀(t) = ½ log((t+1)/(t−1)).
pub fn legendre_q0_closed(t: &Float, digits: u32) -> Result<BigReal> {
    check_t(t)?;
    let bits = bits_for(digits);
    let num = Float::with_val(bits, t + 1u32);
    let den = Float::with_val(bits, t - 1u32);
    Ok(BigReal::new((num / den).ln() / 2u32, digits))
}

/// |z₁ − z₀|²/(2 Im z₀ Im z₁), i.e. the Legendre argument minus one.
pub fn hyperbolic_excess(z0: &UpperHalfPoint, z1: &UpperHalfPoint, digits: u32) -> Float {
    let bits = bits_for(digits) + 32;
    let den = Float::with_val(bits, &z0.y * &z1.y) * 2u32;
    Float::with_val(bits, z0.dist_sq(z1)) / den
}

fn refuse_diagonal(z0: &UpperHalfPoint, z1: &UpperHalfPoint) -> Result<()> {
    if z0.dist_sq(z1).is_zero() {
        return Err(Error::Domain("m_s(z₀, z₁) is singular on the diagonal z₁ = z₀".into()));
    }
    Ok(())
}

/// m_s(z₀, z₁) = Q_s(1 + |z₁ − z₀|²/(2 Im z₀ Im z₁)).
pub fn green_ms(s: &Float, z0: &UpperHalfPoint, z1: &UpperHalfPoint, digits: u32) -> Result<BigReal> {
    refuse_diagonal(z0, z1)?;
    legendre_q_excess(s, &hyperbolic_excess(z0, z1, digits), digits)
}

#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    /// m₀(z₀,z₁) − log(2 Im z₁/|z₁ − z₀|), with m₀ by quadrature.
    pub composite: BigReal,
    /// ½ log(1 + |z₁−z₀|²/(4 Im z₀ Im z₁)) − ½ log(Im z₁/Im z₀).
    pub simplified: BigReal,
    pub agree: bool,
}

impl AdjunctionReport {
    pub fn value(&self) -> &BigReal {
        &self.simplified
    }
}

/// The difference between the Green function and the Petersson-normalized
/// logarithm of the distance, computed both ways.
pub fn adjunction_limit(z0: &UpperHalfPoint, z1: &UpperHalfPoint, digits: u32) -> Result<AdjunctionReport> {
    refuse_diagonal(z0, z1)?;
    let bits = bits_for(digits);
    let zero = Float::with_val(bits, 0);
    let m0 = green_ms(&zero, z0, z1, digits)?;
    let dist = Float::with_val(bits, z0.dist_sq(z1)).sqrt();
    let petersson = (Float::with_val(bits, &z1.y * 2u32) / dist).ln();
    let composite = Float::with_val(bits, m0.value() - &petersson);

    let yy4 = Float::with_val(bits, &z0.y * &z1.y) * 4u32;
    let a = (Float::with_val(bits, z0.dist_sq(z1)) / yy4).ln_1p() / 2u32;
    let b = (Float::with_val(bits, &z1.y / &z0.y)).ln() / 2u32;
    let simplified = a - b;

    let agree = Float::with_val(bits, &composite - &simplified).abs() < tolerance(digits, 4);
    Ok(AdjunctionReport {
        composite: BigReal::new(composite, digits),
        simplified: BigReal::new(simplified, digits),
        agree,
    })
}

/// n points t with t − 1 log-spaced over [10⁻³, 999].
pub fn t_grid(n: usize, digits: u32) -> Vec<Float> {
    let bits = bits_for(digits);
    (0..n)
        .map(|i| {
            let e = -3.0 + (3.0f64 + 999f64.log10()) * i as f64 / (n.max(2) - 1) as f64;
            Float::with_val(bits, 10f64.powf(e)) + 1u32
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RayFit {
    pub angle: f64,
    pub slope: f64,
    pub intercept: BigReal,
    /// max |value|/ε over the sample points
    pub max_ratio: f64,
    pub paths_agree: bool,
}

/// Approach z₀ along z₀ + ε·e^{iφ}, ε ∈ {h, 2h, 3h}, and extrapolate the
/// quadrature-path value to ε = 0 with the quadratic through the samples.
pub fn adjunction_ray_fit(z0: &UpperHalfPoint, angle: f64, h: &Float, digits: u32) -> Result<RayFit> {
    let bits = bits_for(digits);
    let phi = Float::with_val(bits, angle);
    let (sn, cs) = phi.sin_cos(Float::new(bits));
    let mut vals = Vec::new();
    let mut agree = true;
    let mut max_ratio = 0f64;
    for k in 1..=3u32 {
        let eps = Float::with_val(bits, h * k);
        let z1 = UpperHalfPoint::new(
            Float::with_val(bits, &z0.x + Float::with_val(bits, &cs * &eps)),
            Float::with_val(bits, &z0.y + Float::with_val(bits, &sn * &eps)),
        )?;
        let r = adjunction_limit(z0, &z1, digits)?;
        agree &= r.agree;
        max_ratio = max_ratio.max((Float::with_val(bits, r.composite.value() / &eps)).to_f64().abs());
        vals.push(r.composite.into_value());
    }
    let intercept = Float::with_val(bits, &vals[0] * 3u32) - Float::with_val(bits, &vals[1] * 3u32) + &vals[2];
    let slope = (Float::with_val(bits, &vals[0] * -5i32) + Float::with_val(bits, &vals[1] * 8u32)
        - Float::with_val(bits, &vals[2] * 3u32))
        / Float::with_val(bits, h * 2u32);
    Ok(RayFit {
        angle,
        slope: slope.to_f64(),
        intercept: BigReal::new(intercept, digits),
        max_ratio,
        paths_agree: agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: f64, digits: u32) -> Float {
        Float::with_val(bits_for(digits), x)
    }

    #[test]
    fn q0_at_three_is_half_log_two() {
        let d = 40;
        let two = f(2.0, d);
        let expect = two.ln() / 2u32;
        let q = legendre_q(&f(0.0, d), &f(3.0, d), d).unwrap();
        let c = legendre_q0_closed(&f(3.0, d), d).unwrap();
        assert!(Float::with_val(200, q.value() - &expect).abs() < 1e-36);
        assert!(Float::with_val(200, c.value() - &expect).abs() < 1e-38);
    }

    #[test]
    fn q0_decays() {
        let q = legendre_q(&f(0.0, 20), &f(1e6, 20), 20).unwrap();
        assert!(q.to_f64().abs() < 1e-5);
    }

    #[test]
    fn rejects_t_at_most_one() {
        assert!(legendre_q(&f(0.0, 20), &f(1.0, 20), 20).is_err());
        assert!(legendre_q0_closed(&f(0.5, 20), 20).is_err());
    }

    #[test]
    fn near_one_asymptotic() {
        let d = 30;
        let t = f(1.0, d) + f(1e-6, d);
        let c = legendre_q0_closed(&t, d).unwrap();
        let asym = -(Float::with_val(bits_for(d), &t - 1u32) / 2u32).ln() / 2u32;
        // Q₀(t) + ½log((t−1)/2) = ½log((t+1)/2) = O(t − 1)
        assert!(Float::with_val(200, c.value() - &asym).abs() < 1e-6);
    }

    #[test]
    fn green_example_and_diagonal() {
        let d = 30;
        let z0 = UpperHalfPoint::from_f64(0.0, 1.0, d).unwrap();
        let z1 = UpperHalfPoint::from_f64(0.0, 2.0, d).unwrap();
        let g = green_ms(&f(0.0, d), &z0, &z1, d).unwrap();
        let expect = f(9.0, d).ln() / 2u32;
        assert!(Float::with_val(200, g.value() - &expect).abs() < 1e-26);
        assert!(green_ms(&f(0.0, d), &z0, &z0, d).is_err());
    }

    #[test]
    fn adjunction_example() {
        let d = 30;
        let z0 = UpperHalfPoint::from_f64(0.0, 1.0, d).unwrap();
        let tenth = Float::with_val(bits_for(d), 1) / 10u32;
        let z1 = UpperHalfPoint::new(tenth, f(1.0, d)).unwrap();
        let r = adjunction_limit(&z0, &z1, d).unwrap();
        assert!(r.agree);
        let expect = (Float::with_val(bits_for(d), 401) / 400u32).ln() / 2u32;
        assert!(Float::with_val(200, r.simplified.value() - &expect).abs() < 1e-20);
        assert!((r.simplified.to_f64() - 0.001248440099).abs() < 1e-11);
    }
}
