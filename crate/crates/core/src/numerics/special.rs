//! Log-gamma, digamma, Bernoulli numbers and the Hurwitz zeta function.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::real::{bits_for, BigReal};
use crate::error::{Error, Result};

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: &Float, digits: u32) -> Result<BigReal> {
    if *x <= 0 {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    let v = Float::with_val(bits_for(digits), x).ln_gamma();
    Ok(BigReal::new(v, digits))
}

pub fn log_gamma_rational(x: &Rational, digits: u32) -> Result<BigReal> {
    log_gamma(&Float::with_val(bits_for(digits), x), digits)
}

/// ψ(x) for x > 0.
pub fn digamma(x: &Float, digits: u32) -> Result<BigReal> {
    if *x <= 0 {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    Ok(BigReal::new(Float::with_val(bits_for(digits), x).digamma(), digits))
}

/// B_0, B_2, B_4, …, B_{2m} (even-index Bernoulli numbers).
pub fn bernoulli_even(m: usize) -> Vec<Rational> {
    // Akiyama–Tanigawa gives B_n with B_1 = +1/2; only even indices are used.
    let n_max = 2 * m;
    let mut a: Vec<Rational> = Vec::with_capacity(n_max + 1);
    let mut b = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        a.push(Rational::from((1, k as u64 + 1)));
        for j in (1..=k).rev() {
            let diff = Rational::from(&a[j - 1] - &a[j]);
            a[j - 1] = diff * Integer::from(j);
        }
        b.push(a[0].clone());
    }
    b.into_iter().step_by(2).collect()
}

/// Hurwitz ζ(s, a) for real s ≠ 1 and a > 0 by Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: &Float, a: &Float, digits: u32) -> Result<Float> {
    let bits = bits_for(digits).max(s.prec());
    if *a <= 0 {
        return Err(Error::Domain("hurwitz_zeta needs a > 0".into()));
    }
    let one = Float::with_val(bits, 1);
    if Float::with_val(bits, s - &one).abs() < Float::with_val(bits, 10).pow(-(digits as i32)) {
        return Err(Error::Domain("hurwitz_zeta pole at s = 1".into()));
    }
    let n_direct = digits as u64 + 20;
    let m_terms = (digits as usize) / 2 + 20;
    let mut sum = Float::with_val(bits, 0);
    for k in 0..n_direct {
        let base = Float::with_val(bits, a + k);
        sum += Float::with_val(bits, -(base.ln() * s)).exp();
    }
    let x = Float::with_val(bits, a + n_direct);
    let lnx = Float::with_val(bits, x.ln_ref());
    // x^(1−s)/(s−1) + x^(−s)/2
    let s_minus_1 = Float::with_val(bits, s - 1u32);
    let x_1ms = Float::with_val(bits, -Float::with_val(bits, &lnx * &s_minus_1)).exp();
    sum += Float::with_val(bits, &x_1ms / &s_minus_1);
    let x_ms = Float::with_val(bits, -Float::with_val(bits, &lnx * s)).exp();
    sum += Float::with_val(bits, &x_ms / 2u32);
    // Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j−2) · x^(−s−2j+1)
    let bern = bernoulli_even(m_terms);
    let mut rising = Float::with_val(bits, s); // s(s+1)…(s+2j−2), starts at j = 1
    let mut fact = Integer::from(2); // (2j)!
    let mut xpow = Float::with_val(bits, &x_ms / &x); // x^(−s−1)
    let x2 = Float::with_val(bits, x.square_ref());
    for (j, b) in bern.iter().enumerate().skip(1) {
        if j > 1 {
            let k = 2 * j as u32;
            rising *= Float::with_val(bits, s + (k - 3));
            rising *= Float::with_val(bits, s + (k - 2));
            fact *= (k - 1) * k;
            xpow /= &x2;
        }
        let coef = Float::with_val(bits, b) / Float::with_val(bits, &fact);
        sum += coef * &rising * &xpow;
    }
    Ok(sum)
}

/// Derivative of f at x by a Richardson-extrapolated central difference
/// (error O(h^6)).
pub fn richardson_derivative<F>(f: F, x: &Float, h: &Float) -> Result<Float>
where
    F: Fn(&Float) -> Result<Float>,
{
    let bits = x.prec().max(h.prec());
    let central = |step: &Float| -> Result<Float> {
        let xp = Float::with_val(bits, x + step);
        let xm = Float::with_val(bits, x - step);
        Ok((f(&xp)? - f(&xm)?) / Float::with_val(bits, step * 2u32))
    };
    let d1 = central(h)?;
    let d2 = central(&Float::with_val(bits, h / 2u32))?;
    let d3 = central(&Float::with_val(bits, h / 4u32))?;
    // eliminate h² then h⁴
    let e1 = (Float::with_val(bits, &d2 * 4u32) - &d1) / 3u32;
    let e2 = (Float::with_val(bits, &d3 * 4u32) - &d2) / 3u32;
    Ok((Float::with_val(bits, &e2 * 16u32) - &e1) / 15u32)
}
