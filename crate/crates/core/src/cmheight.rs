//! Faltings heights of CM elliptic curves from Dedekind eta values at Heegner
//! points, and the end-to-end comparison with the L-function side.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::lfun::{l_at_zero, l_prime_at_zero};
use crate::numerics::real::{bits_for, pi, BigComplex, BigReal};
use crate::quadfield::{class_group, FundamentalDiscriminant, HeegnerPoint};

/// Offset between the (2π)^(−1)-normalized metric and the classical one:
/// (1/2)·log π. Fixed once, never refit per discriminant.
pub fn c_norm(digits: u32) -> BigReal {
    BigReal::new(pi(digits).ln() / 2u32, digits)
}

fn check_upper(tau: &BigComplex) -> Result<()> {
    if tau.im <= 0 {
        return Err(Error::Domain(format!(
            "eta needs Im τ > 0, got {}",
            tau.im.to_f64()
        )));
    }
    Ok(())
}

/// Number of product factors needed so |q|^n < 10^(−digits−10).
fn eta_terms(tau: &BigComplex, digits: u32) -> u64 {
    let y = tau.im.to_f64();
    let need = (digits as f64 + 10.0) * std::f64::consts::LN_10;
    (need / (2.0 * std::f64::consts::PI * y)).ceil().max(1.0) as u64 + 1
}

/// η(τ) = e^{πiτ/12} ∏_{n≥1}(1 − q^n), q = e^{2πiτ}.
pub fn dedekind_eta(tau: &BigComplex, digits: u32) -> Result<BigComplex> {
    check_upper(tau)?;
    let inner = digits + 10;
    let bits = bits_for(inner);
    let two_pi = pi(inner) * 2u32;
    let i_two_pi_tau = BigComplex::new(
        -Float::with_val(bits, &two_pi * &tau.im),
        Float::with_val(bits, &two_pi * &tau.re),
        inner,
    );
    let q = i_two_pi_tau.exp();
    let mut qn = q.clone();
    let one = BigComplex::one(inner);
    let mut prod = BigComplex::one(inner);
    for _ in 0..eta_terms(tau, digits) {
        prod = prod.mul_ref(&one.sub_ref(&qn));
        qn = qn.mul_ref(&q);
    }
    let prefactor = i_two_pi_tau.scale(&(Float::with_val(bits, 1u32) / 24u32)).exp();
    let v = prefactor.mul_ref(&prod);
    Ok(BigComplex::new(v.re, v.im, digits))
}

/// log|η(τ)| = −π Im τ/12 + Σ log|1 − q^n|, computed without forming η.
pub fn log_abs_eta(tau: &BigComplex, digits: u32) -> Result<BigReal> {
    check_upper(tau)?;
    let inner = digits + 10;
    let bits = bits_for(inner);
    let two_pi = pi(inner) * 2u32;
    let q = BigComplex::new(
        -Float::with_val(bits, &two_pi * &tau.im),
        Float::with_val(bits, &two_pi * &tau.re),
        inner,
    )
    .exp();
    let one = BigComplex::one(inner);
    let mut qn = q.clone();
    let mut acc = -Float::with_val(bits, &two_pi * &tau.im) / 24u32;
    for _ in 0..eta_terms(tau, digits) {
        acc += one.sub_ref(&qn).norm_sqr().ln() / 2u32;
        qn = qn.mul_ref(&q);
    }
    Ok(BigReal::new(acc, digits))
}

/// log((2π)^12 |η(τ)|^24 (Im τ)^6), an SL₂(ℤ)-invariant function of τ.
pub fn invariant_log_delta(tau: &BigComplex, digits: u32) -> Result<BigReal> {
    let bits = bits_for(digits);
    let le = log_abs_eta(tau, digits)?.into_value();
    let v = Float::with_val(bits, pi(digits) * 2u32).ln() * 12u32
        + le * 24u32
        + Float::with_val(bits, tau.im.ln_ref()) * 6u32;
    Ok(BigReal::new(v, digits))
}

/// h = −(1/(12h)) Σ_j log((2π)^12 |η(τ_j)|^24 (Im τ_j)^6) + (1/2) log π.
pub fn height_from_points(points: &[BigComplex], digits: u32) -> Result<BigReal> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no Heegner points".into()));
    }
    let bits = bits_for(digits);
    let mut acc = Float::with_val(bits, 0);
    for tau in points {
        acc += invariant_log_delta(tau, digits)?.into_value();
    }
    let h = points.len() as u32;
    let v = -acc / (12 * h) + c_norm(digits).into_value();
    Ok(BigReal::new(v, digits))
}

pub fn heegner_complex(points: &[HeegnerPoint], digits: u32) -> Vec<BigComplex> {
    points.iter().map(|p| p.to_complex(digits)).collect()
}

/// Stable Faltings height of the CM elliptic curves with discriminant d,
/// averaged over the class group.
pub fn cm_faltings_height(d: FundamentalDiscriminant, digits: u32) -> Result<BigReal> {
    let cg = class_group(d)?;
    height_from_points(&heegner_complex(&cg.heegner_points, digits), digits)
}

/// −(1/2)·L′(0)/L(0) − (1/4)·log|d|.
pub fn colmez_rhs(d: FundamentalDiscriminant, digits: u32) -> BigReal {
    let bits = bits_for(digits);
    let l0 = Float::with_val(bits, &l_at_zero(d));
    let lp = l_prime_at_zero(d, digits).into_value();
    let v = -(lp / l0) / 2u32 - Float::with_val(bits, d.abs()).ln() / 4u32;
    BigReal::new(v, digits)
}

#[derive(Clone, Debug)]
pub struct HeightReport {
    pub d: FundamentalDiscriminant,
    pub h: u64,
    pub w: u64,
    pub lhs: BigReal,
    pub rhs: BigReal,
    pub diff: BigReal,
    pub digits: u32,
}

impl HeightReport {
    /// |diff| < 10^(−k)
    pub fn passes(&self, k: i32) -> bool {
        self.diff.abs_below_pow10(k)
    }
}

pub fn colmez_check(d: FundamentalDiscriminant, digits: u32) -> Result<HeightReport> {
    let cg = class_group(d)?;
    let lhs = height_from_points(&heegner_complex(&cg.heegner_points, digits), digits)?;
    let rhs = colmez_rhs(d, digits);
    let diff = &lhs - &rhs;
    Ok(HeightReport {
        d,
        h: cg.h,
        w: cg.w,
        lhs,
        rhs,
        diff,
        digits,
    })
}

/// The discriminants of the standard suite (class numbers 1, 2, 3; both
/// residue classes mod 4).
pub const SUITE: [i64; 12] = [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, -31, -163];

/// Apply an integer matrix [[a, b], [c, d]] of determinant 1 to τ.
pub fn mobius(tau: &BigComplex, m: [i64; 4]) -> BigComplex {
    let digits = tau.digits();
    let bits = bits_for(digits);
    let mk = |x: i64| BigComplex::from_real(Float::with_val(bits, x), digits);
    let num = mk(m[0]).mul_ref(tau).add_ref(&mk(m[1]));
    let den = mk(m[2]).mul_ref(tau).add_ref(&mk(m[3]));
    num.div_ref(&den)
}

/// 10^(−k) helper for callers that want a Float tolerance.
pub fn pow10_neg(k: i32, digits: u32) -> Float {
    Float::with_val(bits_for(digits), 10).pow(-k)
}
