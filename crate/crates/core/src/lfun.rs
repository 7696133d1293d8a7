//! Dirichlet L-values of the quadratic character attached to an imaginary
//! quadratic field, logarithmic derivatives at s = 0, and the constants c₀, c₁
//! relating the finite and completed L-functions.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::real::{bits_for, euler_gamma, pi, BigReal};
use crate::numerics::special::{hurwitz_zeta, log_gamma, richardson_derivative};
use crate::quadfield::{kronecker, FundamentalDiscriminant};

fn characters(d: FundamentalDiscriminant) -> Vec<(u64, i32)> {
    (1..d.abs())
        .map(|a| (a, kronecker(d, a).expect("a ≥ 1")))
        .filter(|&(_, c)| c != 0)
        .collect()
}

/// L(0, χ_d) = −(1/|d|) Σ a·χ(a), exactly.
pub fn l_at_zero(d: FundamentalDiscriminant) -> Rational {
    let s: i64 = characters(d).iter().map(|&(a, c)| a as i64 * c as i64).sum();
    Rational::from((-s, d.abs() as i64))
}

/// L′(0, χ_d) by Lerch's formula Σ χ(a)·lnΓ(a/|d|) − ln|d|·L(0, χ_d).
pub fn l_prime_at_zero(d: FundamentalDiscriminant, digits: u32) -> BigReal {
    let bits = bits_for(digits);
    let q = d.abs();
    let mut acc = Float::with_val(bits, 0);
    for (a, c) in characters(d) {
        let x = Float::with_val(bits, Rational::from((a, q)));
        let lg = log_gamma(&x, digits).expect("positive argument").into_value();
        if c > 0 {
            acc += lg;
        } else {
            acc -= lg;
        }
    }
    let l0 = Float::with_val(bits, &l_at_zero(d));
    acc -= Float::with_val(bits, q).ln() * l0;
    BigReal::new(acc, digits)
}

/// L(s, χ_d) = |d|^(−s) Σ χ(a) ζ(s, a/|d|) for real s ≠ 1.
pub fn l_series(d: FundamentalDiscriminant, s: &Float, digits: u32) -> Result<Float> {
    let bits = bits_for(digits).max(s.prec());
    let q = d.abs();
    let mut acc = Float::with_val(bits, 0);
    for (a, c) in characters(d) {
        let x = Float::with_val(bits, Rational::from((a, q)));
        let z = hurwitz_zeta(s, &x, digits)?;
        if c > 0 {
            acc += z;
        } else {
            acc -= z;
        }
    }
    let scale = Float::with_val(bits, -(Float::with_val(bits, q).ln() * s)).exp();
    Ok(acc * scale)
}

/// Oracle for L′(0): Richardson-extrapolated central difference of the
/// Hurwitz-zeta representation, independent of Lerch's formula.
pub fn l_prime_at_zero_oracle(d: FundamentalDiscriminant, digits: u32) -> Result<BigReal> {
    let inner = digits + 24;
    let bits = bits_for(inner);
    let h = Float::with_val(bits, 10).pow(-((digits / 8).max(4) as i32));
    let zero = Float::with_val(bits, 0);
    let v = richardson_derivative(|s| l_series(d, s, inner), &zero, &h)?;
    Ok(BigReal::new(v, digits))
}

/// L(1, χ_d) = −(1/|d|) Σ χ(a) ψ(a/|d|).
pub fn l_at_one(d: FundamentalDiscriminant, digits: u32) -> BigReal {
    let bits = bits_for(digits);
    let q = d.abs();
    let mut acc = Float::with_val(bits, 0);
    for (a, c) in characters(d) {
        let x = Float::with_val(bits, Rational::from((a, q)));
        let psi = x.digamma();
        if c > 0 {
            acc -= psi;
        } else {
            acc += psi;
        }
    }
    BigReal::new(acc / q, digits)
}

/// Λ(0) and Λ(1) for Λ(s) = (|d|/π)^((s+1)/2) Γ((s+1)/2) L(s, χ_d).
pub fn completed_at_zero_and_one(d: FundamentalDiscriminant, digits: u32) -> (BigReal, BigReal) {
    let bits = bits_for(digits);
    let ratio = Float::with_val(bits, d.abs()) / pi(digits);
    let half = Float::with_val(bits, 0.5);
    let gamma_half = Float::with_val(bits, half.gamma_ref());
    let l0 = Float::with_val(bits, &l_at_zero(d));
    let lam0 = Float::with_val(bits, ratio.sqrt_ref()) * gamma_half * l0;
    let lam1 = ratio * l_at_one(d, digits).into_value();
    (BigReal::new(lam0, digits), BigReal::new(lam1, digits))
}

#[derive(Clone, Debug)]
pub struct LSeriesData {
    pub d: FundamentalDiscriminant,
    pub l0_exact: Rational,
    pub l0: BigReal,
    pub l0_prime: BigReal,
    pub ratio: BigReal,
    pub digits: u32,
}

pub fn l_series_data(d: FundamentalDiscriminant, digits: u32) -> LSeriesData {
    let l0_exact = l_at_zero(d);
    let l0 = BigReal::from_rational(&l0_exact, digits);
    let l0_prime = l_prime_at_zero(d, digits);
    let ratio = &l0_prime / &l0;
    LSeriesData {
        d,
        l0_exact,
        l0,
        l0_prime,
        ratio,
        digits,
    }
}

/// L′_∞(0)/L_∞(0) for L_∞(s) = (π^(−(s+1)/2) Γ((s+1)/2))^m, i.e.
/// −(m/2)(γ + log 4π).
pub fn gamma_factor_logderiv(m: u32, digits: u32) -> Result<BigReal> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be ≥ 1".into()));
    }
    let bits = bits_for(digits);
    let four_pi = pi(digits) * 4u32;
    let v = -(euler_gamma(digits) + Float::with_val(bits, four_pi.ln_ref())) * m / 2u32;
    Ok(BigReal::new(v, digits))
}

/// Oracle: finite-difference derivative of m·(−((s+1)/2)·log π + lnΓ((s+1)/2)).
pub fn gamma_factor_logderiv_oracle(m: u32, digits: u32) -> Result<BigReal> {
    let inner = 2 * digits;
    let bits = bits_for(inner);
    let log_pi = pi(inner).ln();
    let f = |s: &Float| -> Result<Float> {
        let half = Float::with_val(bits, s + 1u32) / 2u32;
        let lg = log_gamma(&half, inner)?.into_value();
        Ok((lg - Float::with_val(bits, &half * &log_pi)) * m)
    };
    let h = Float::with_val(bits, 10).pow(-((digits / 5).max(3) as i32));
    let v = richardson_derivative(f, &Float::with_val(bits, 0), &h)?;
    Ok(BigReal::new(v, digits))
}

#[derive(Clone, Debug)]
pub struct ConstantReport {
    pub d: FundamentalDiscriminant,
    pub m: u32,
    pub finite_ratio: BigReal,
    pub gamma_logderiv: BigReal,
    pub completed_ratio: BigReal,
    pub c0: BigReal,
    pub c1: BigReal,
    /// c₁ − c₀ + 2·L′_∞/L_∞, zero up to rounding.
    pub identity_residual: BigReal,
}

/// c₀ = 2·Λ′/Λ(0) + log|d| (completed) and c₁ = 2·L′_f/L_f(0) + log|d| (finite).
pub fn constants_report(d: FundamentalDiscriminant, digits: u32) -> ConstantReport {
    let bits = bits_for(digits);
    let data = l_series_data(d, digits);
    let gamma = gamma_factor_logderiv(1, digits).expect("m = 1");
    let completed = &data.ratio + &gamma;
    let log_d = BigReal::new(Float::with_val(bits, d.abs()).ln(), digits);
    let two = BigReal::from_i64(2, digits);
    let c0 = &(&two * &completed) + &log_d;
    let c1 = &(&two * &data.ratio) + &log_d;
    let identity_residual = &(&c1 - &c0) + &(&two * &gamma);
    ConstantReport {
        d,
        m: 1,
        finite_ratio: data.ratio,
        gamma_logderiv: gamma,
        completed_ratio: completed,
        c0,
        c1,
        identity_residual,
    }
}

/// c₀ from its definition (d/ds) log(Λ(s)/Λ(s+1)) at s = 0, by finite
/// differences of the Hurwitz-zeta L-series (no functional equation used).
pub fn c0_by_definition(d: FundamentalDiscriminant, digits: u32) -> Result<BigReal> {
    let inner = digits + 30;
    let bits = bits_for(inner);
    let log_ratio = Float::with_val(bits, d.abs()).ln() - pi(inner).ln();
    let log_lambda = |s: &Float| -> Result<Float> {
        let half = Float::with_val(bits, s + 1u32) / 2u32;
        let l = l_series(d, s, inner)?;
        Ok(Float::with_val(bits, &half * &log_ratio) + half.ln_gamma() + l.ln())
    };
    let h = Float::with_val(bits, 10).pow(-((digits / 8).max(4) as i32));
    let at0 = richardson_derivative(log_lambda, &Float::with_val(bits, 0), &h)?;
    let at1 = richardson_derivative(log_lambda, &Float::with_val(bits, 1), &h)?;
    Ok(BigReal::new(at0 - at1, digits))
}
