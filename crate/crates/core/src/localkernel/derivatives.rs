//! Closed forms for k_φ(1, y, u), c_φ(1, y, u) and the ramified correction
//! α_v. Each is a rational multiple of log N.

use rug::Rational;

use super::algebra::LocalAlgebra;
use super::volume::{integral_enumerated, Domain};
use super::{LocalFieldData, LocalPoint, Ramification, SchwartzCase, Y1};
use crate::error::{Error, Result};
use crate::numerics::LogLinearValue;

fn log_n(f: &LocalFieldData, c: Rational) -> LogLinearValue {
    LogLinearValue::log_times(f.n, c)
}

/// ϖ^{-1}(O_𝔹)₂ ∩ E for split E: y ∈ ϖ^{-1}O_E with q(y) a unit.
fn in_shifted_units(y1: &Y1) -> bool {
    match y1 {
        Y1::Split {
            va: Some(a),
            vd: Some(d),
        } => *a >= -1 && *d >= -1 && a + d == 0,
        _ => false,
    }
}

/// φ(y, u) for y ∈ E_v.
pub fn schwartz_value(f: &LocalFieldData, case: SchwartzCase, y1: &Y1, u_val: i32) -> Rational {
    if u_val != 0 {
        return Rational::new();
    }
    let ind = |b: bool| Rational::from(b as i32);
    match case {
        SchwartzCase::Standard => ind(y1.in_o()),
        SchwartzCase::Unit => ind(y1.is_unit()),
        SchwartzCase::S2 => {
            let w = Rational::from((1, 1 + f.n + f.n * f.n));
            ind(y1.is_unit()) - w * ind(in_shifted_units(y1))
        }
    }
}

/// (log N/|D|^{1/2}) · Σ_{n=0}^{v(d)} N^n ∫_{D_n} φ(y + x₂, u) dx₂ for
/// y ∈ D^{-1}O_E − O_E, by enumeration; zero elsewhere.
pub fn alpha_v(f: &LocalFieldData, pt: &LocalPoint) -> Result<LogLinearValue> {
    if f.ram != Ramification::Ramified {
        return Err(Error::Unsupported("α_v only exists for ramified E".into()));
    }
    if pt.y1 != Y1::OffLattice || pt.u_val != 0 {
        return Ok(LogLinearValue::zero());
    }
    let y1 = pt
        .y1_coords
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("α_v needs explicit coordinates for y₁".into()))?;
    let alg = LocalAlgebra::for_field(f)?;
    let mut total = Rational::new();
    for n in 0..=f.v_d as i32 {
        let v = integral_enumerated(f, &alg, SchwartzCase::Standard, y1, &Domain::Plain, n)?;
        total += f.npow(n) * v.coeff;
    }
    Ok(log_n(f, total))
}

/// k_φ(1, y, u) for y₂ ≠ 0.
pub fn k_derivative(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<LogLinearValue> {
    case.check(f)?;
    let vq = pt
        .vq_y2
        .ok_or_else(|| Error::InvalidInput("k is evaluated at y₂ ≠ 0".into()))?;
    if pt.u_val != 0 {
        return Ok(LogLinearValue::zero());
    }
    let one = Rational::from(1);
    let n = f.n_rat();
    let v_d = f.v_d as i32;
    let geom = |e: i32| (f.npow(e) - 1u32) / (Rational::from(&n - 1u32));
    match f.ram {
        Ramification::Inert => {
            let supported = match case {
                SchwartzCase::Unit => pt.y1.is_unit(),
                _ => pt.y1.in_o(),
            };
            if !supported || vq < -v_d {
                return Ok(LogLinearValue::zero());
            }
            let pre = &one / (Rational::from(1) + Rational::from(&one / &n));
            let body = if vq < 0 {
                f.abs_dq() * geom(vq + v_d + 1)
            } else {
                (f.abs_dq() - 1u32) / (Rational::from(1) - &n)
                    + Rational::from((vq - f.v_qj as i32 + 1, 2)) * (Rational::from(1) + Rational::from(&one / &n))
            };
            Ok(log_n(f, pre * body))
        }
        Ramification::Ramified => match &pt.y1 {
            Y1::Integral { .. } => {
                if vq < -v_d {
                    return Ok(LogLinearValue::zero());
                }
                let c = if vq < 0 {
                    f.abs_d() / 2u32 * geom(vq + v_d + 1)
                } else {
                    (f.abs_d() - 1u32) / (Rational::from(1) - &n) / 2u32
                        + Rational::from((vq + 1, 2))
                        + Rational::from((f.v_dd as i32 - 1, 2))
                };
                Ok(log_n(f, c))
            }
            Y1::OffLattice => {
                // D_n(a) = D_n wherever the integrand lives (n < v(d)) once v(a) ≥ 0
                if vq < 0 {
                    return Err(Error::Unsupported(
                        "off-lattice y₁ with v(q(y₂)) < 0".into(),
                    ));
                }
                Ok(alpha_v(f, pt)?.scale(&Rational::from((1, 2))))
            }
            _ => Ok(LogLinearValue::zero()),
        },
        Ramification::Split => Err(Error::Unsupported("k is not defined for split E".into())),
    }
}

/// c_φ(1, y, u) for y ∈ E_v.
pub fn c_derivative(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<LogLinearValue> {
    case.check(f)?;
    if pt.vq_y2.is_some() {
        return Err(Error::InvalidInput("c is evaluated at y ∈ E (y₂ = 0)".into()));
    }
    let phi = schwartz_value(f, case, &pt.y1, pt.u_val);
    let n = f.n_rat();
    let one = Rational::from(1);
    let v_d = f.v_d as i32;
    match f.ram {
        Ramification::Inert => {
            let v = -((f.v_d + f.v_qj) as i32);
            let corr = Rational::from(2) * (f.abs_dq() - 1u32)
                / ((Rational::from(1) + Rational::from(&one / &n)) * (Rational::from(1) - &n));
            Ok(log_n(f, phi * (corr + v)))
        }
        Ramification::Ramified => {
            let corr = (f.abs_d() - 1u32) / (Rational::from(1) - &n);
            Ok(log_n(f, phi * (corr - v_d)) + alpha_v(f, pt)?)
        }
        Ramification::Split => match case {
            SchwartzCase::S2 => {
                let ind = pt.u_val == 0 && in_shifted_units(&pt.y1);
                let c = Rational::from((-2 * ind as i64, 1 + f.n + f.n * f.n));
                Ok(log_n(f, c))
            }
            _ => Ok(log_n(f, phi * -v_d)),
        },
    }
}
