//! Double-exponential quadrature on (0, ∞).
//!
//! The substitution y = exp((π/2)·sinh t) maps (0, ∞) onto ℝ; the mapped
//! integrand decays double-exponentially at both ends whenever f decays at
//! least exponentially at ∞ and has at most a logarithmic (integrable power)
//! singularity at 0. The trapezoidal rule is refined by halving the step until
//! two successive levels agree.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::real::{bits_for, BigReal};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decay {
    /// |f(y)| ≤ C·e^{−cy} for some c > 0.
    Exponential,
    /// No decay guarantee; quadrature is refused.
    None,
}

pub struct Integrand<'a> {
    pub f: Box<dyn Fn(&Float) -> Float + Sync + 'a>,
    pub decay: Decay,
    /// Integrable singularity at y = 0 (e.g. log y).
    pub singular_at_zero: bool,
}

impl<'a> Integrand<'a> {
    pub fn new(f: impl Fn(&Float) -> Float + Sync + 'a) -> Self {
        Integrand {
            f: Box::new(f),
            decay: Decay::Exponential,
            singular_at_zero: false,
        }
    }

    pub fn with_log_singularity(mut self) -> Self {
        self.singular_at_zero = true;
        self
    }

    pub fn non_decaying(mut self) -> Self {
        self.decay = Decay::None;
        self
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: BigReal,
    /// |I_level − I_(level−1)| at termination.
    pub last_change: Float,
    pub levels: u32,
    pub evaluations: usize,
}

const MAX_LEVELS: u32 = 12;
const T_MAX: f64 = 7.0;

/// ∫₀^∞ f(y) dy to absolute error below 10^(−digits+4).
pub fn integrate_semiinfinite(f: &Integrand<'_>, digits: u32) -> Result<BigReal> {
    Ok(integrate_semiinfinite_detailed(f, digits, 0)?.value)
}

/// As `integrate_semiinfinite`, with `extra_levels` additional refinements
/// after convergence (used for self-consistency checks).
pub fn integrate_semiinfinite_detailed(
    f: &Integrand<'_>,
    digits: u32,
    extra_levels: u32,
) -> Result<QuadratureResult> {
    if f.decay == Decay::None {
        return Err(Error::Refused(
            "integrand declared non-decaying at infinity; semi-infinite quadrature needs exponential decay".into(),
        ));
    }
    let bits = bits_for(digits) + 32;
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let tol = Float::with_val(bits, 10).pow(-(digits as i32) + 4) / 100u32;
    let tiny = Float::with_val(bits, 10).pow(-(digits as i32) - 20);

    // weight·f at node t
    let node = |t: &Float| -> Float {
        let sh = Float::with_val(bits, t.sinh_ref());
        let ch = Float::with_val(bits, t.cosh_ref());
        let y = Float::with_val(bits, &half_pi * &sh).exp();
        if y.is_zero() || y.is_infinite() {
            return Float::with_val(bits, 0);
        }
        let fy = (f.f)(&y);
        if !fy.is_finite() {
            return Float::with_val(bits, 0);
        }
        fy * y * ch * &half_pi
    };

    // Sum over t = k·h for k ≡ offset (mod stride), both directions, until
    // contributions are negligible.
    let sum_nodes = |h: &Float, odd_only: bool, evals: &mut usize| -> Float {
        let mut acc = Float::with_val(bits, 0);
        let step: i64 = if odd_only { 2 } else { 1 };
        for (first, dir) in [(if odd_only { 1 } else { 0 }, 1i64), (-1, -1i64)] {
            let mut k = first;
            let mut small_run = 0;
            loop {
                let t = Float::with_val(bits, h * k);
                if t.clone().abs() > T_MAX {
                    break;
                }
                let v = node(&t);
                *evals += 1;
                if v.clone().abs() < tiny {
                    small_run += 1;
                    if small_run >= 3 {
                        break;
                    }
                } else {
                    small_run = 0;
                }
                acc += v;
                k += dir * step;
            }
        }
        acc
    };

    let mut evals = 0usize;
    let mut h = Float::with_val(bits, 0.5);
    let mut raw = sum_nodes(&h, false, &mut evals);
    let mut estimate = Float::with_val(bits, &raw * &h);
    let mut last_change = Float::with_val(bits, f64::INFINITY);
    let mut converged_at: Option<u32> = None;
    for level in 1..=MAX_LEVELS + extra_levels {
        h /= 2u32;
        raw += sum_nodes(&h, true, &mut evals);
        let next = Float::with_val(bits, &raw * &h);
        last_change = Float::with_val(bits, &next - &estimate).abs();
        estimate = next;
        if converged_at.is_none() && last_change < tol && level >= 3 {
            converged_at = Some(level);
        }
        if let Some(c) = converged_at {
            if level >= c + extra_levels {
                return Ok(QuadratureResult {
                    value: BigReal::new(estimate, digits),
                    last_change,
                    levels: level,
                    evaluations: evals,
                });
            }
        }
    }
    Err(Error::InsufficientPrecision {
        what: format!("quadrature did not converge (last change {last_change:.3e})"),
        required: (MAX_LEVELS + extra_levels + 1) as u64,
    })
}
