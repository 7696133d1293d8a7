//! The local identity
//!   2(k_φ − m_φ log N)|_E + d_φ = −log|d_v q(j_v)| · φ   (nonsplit E),
//!   d_φ = −log|d_v q(j_v)| · φ                           (split E),
//! checked as an exact equality of log-linear values.

use rug::Rational;

use super::algebra::{elt, LocalAlgebra};
use super::derivatives::{c_derivative, k_derivative, schwartz_value};
use super::multiplicity::{m_multiplicity, n_multiplicity};
use super::padic::pow_rat;
use super::{LocalFieldData, LocalPoint, Ramification, SchwartzCase};
use crate::error::{Error, Result};
use crate::numerics::LogLinearValue;

fn log_n(f: &LocalFieldData, c: Rational) -> LogLinearValue {
    LogLinearValue::log_times(f.n, c)
}

/// (k − m log N)|_E at y ∈ E: the value of the Schwartz extension, read off
/// at two large values of v(q(y₂)) that must agree.
pub fn restriction_to_e(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<LogLinearValue> {
    if pt.vq_y2.is_some() {
        return Err(Error::InvalidInput("restriction is taken at y ∈ E".into()));
    }
    let start = match f.ram {
        Ramification::Inert => 9 - f.v_qj as i32,
        Ramification::Ramified => 3 * f.v_dd as i32 + 4,
        Ramification::Split => {
            return Err(Error::Unsupported("k and m are not defined for split E".into()))
        }
    };
    let at = |v: i32| -> Result<LogLinearValue> {
        let q = pt.with_y2(Some(v));
        let k = k_derivative(f, case, &q)?;
        let m = m_multiplicity(f, case, &q)?;
        Ok(k - log_n(f, m))
    };
    let a = at(start)?;
    let b = at(start + 2)?;
    if a != b {
        return Err(Error::Domain(format!(
            "k − m log N is not constant near E: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// d_φ(1, y, u) = 2n log N − c + log|u q(y)| · φ(y, u).
pub fn d_combination(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<LogLinearValue> {
    let n = n_multiplicity(f, case, pt)?;
    let c = c_derivative(f, case, pt)?;
    let phi = schwartz_value(f, case, &pt.y1, pt.u_val);
    let log_term = if phi == 0 {
        LogLinearValue::zero()
    } else {
        let vq = pt
            .y1
            .vq()
            .ok_or_else(|| Error::InvalidInput("y must lie in E^×".into()))?;
        log_n(f, Rational::from(-(pt.u_val + vq)) * phi)
    };
    Ok(log_n(f, n * 2u32) - c + log_term)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop92Report {
    pub lhs: LogLinearValue,
    pub rhs: LogLinearValue,
    pub pass: bool,
}

pub fn prop92_check(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<Prop92Report> {
    case.check(f)?;
    pt.check(f)?;
    let d = d_combination(f, case, pt)?;
    let phi = schwartz_value(f, case, &pt.y1, pt.u_val);
    let rhs = log_n(f, phi * (f.v_d + f.v_qj));
    let lhs = match f.ram {
        Ramification::Split => d,
        _ => restriction_to_e(f, case, pt)?.scale(&Rational::from(2)) + d,
    };
    let pass = lhs.canonicalize() == rhs.canonicalize();
    Ok(Prop92Report { lhs, rhs, pass })
}

#[derive(Clone, Debug)]
pub struct GridCase {
    pub label: String,
    pub field: LocalFieldData,
    pub case: SchwartzCase,
    pub point: LocalPoint,
}

fn push_points(
    out: &mut Vec<GridCase>,
    f: &LocalFieldData,
    case: SchwartzCase,
    alg: &LocalAlgebra,
    ys: Vec<(String, super::Elt)>,
) {
    for (name, y) in ys {
        for u in -1..=1 {
            out.push(GridCase {
                label: format!(
                    "{} N={} v_d={} v_D={} v_qj={} {:?} y={} u_val={}",
                    f.ram, f.n, f.v_d, f.v_dd, f.v_qj, case, name, u
                ),
                field: f.clone(),
                case,
                point: LocalPoint::from_coords(alg, y.clone(), None, u),
            });
        }
    }
}

/// Residue sizes 2, 3, 5, 7; v(d) ∈ {0, 1, 2}; every splitting type with
/// both values of v(q(j)) for inert E and the S₂ modification for split E.
pub fn default_grid() -> Vec<GridCase> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for v_d in 0..=2u32 {
            let mut fields = vec![
                LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, 0).unwrap(),
                LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, 1).unwrap(),
                LocalFieldData::new(p, p, v_d, if p == 2 { 2 } else { 1 }, Ramification::Ramified, 0)
                    .unwrap(),
                LocalFieldData::new(p, p, v_d, 0, Ramification::Split, 0).unwrap(),
            ];
            if p == 2 {
                fields.push(LocalFieldData::new(p, p, v_d, 3, Ramification::Ramified, 0).unwrap());
            }
            for f in fields {
                let alg = LocalAlgebra::for_field(&f).unwrap();
                let mut ys = Vec::new();
                match f.ram {
                    Ramification::Inert => {
                        for k in -1..=2 {
                            for (un, u) in [("1", elt(1, 0)), ("ω", elt(0, 1))] {
                                ys.push((format!("p^{k}·{un}"), alg.scale(&u, &pow_rat(p, k))));
                            }
                        }
                    }
                    Ramification::Ramified => {
                        let pi = alg.uniformizer().unwrap().clone();
                        for k in 0..=3 {
                            ys.push((format!("π^{k}"), alg.pow(&pi, k).unwrap()));
                        }
                        let m = p.pow(f.v_dd) as i64;
                        let mut reps = Vec::new();
                        for a in 0..m {
                            for b in 0..m {
                                let y = alg.scale(&elt(a, b), &pow_rat(p, -(f.v_dd as i32)));
                                if !alg.is_integral(&y) {
                                    reps.push((format!("({a}+{b}ω)/p^{}", f.v_dd), y));
                                }
                            }
                        }
                        let cap = if p <= 3 { reps.len() } else { 6 };
                        ys.extend(reps.into_iter().take(cap));
                        let out_k = -(2 * f.v_dd as i32 + 1);
                        ys.push((format!("π^{out_k}"), alg.pow(&pi, out_k).unwrap()));
                    }
                    Ramification::Split => {
                        for va in -2..=2 {
                            for vd in -2..=2 {
                                let y = LocalAlgebra::from_split_components(
                                    &pow_rat(p, va),
                                    &pow_rat(p, vd),
                                );
                                ys.push((format!("(p^{va}, p^{vd})"), y));
                            }
                        }
                    }
                }
                let case = SchwartzCase::default_for(&f);
                push_points(&mut out, &f, case, &alg, ys.clone());
                if f.ram == Ramification::Split && v_d == 0 {
                    push_points(&mut out, &f, SchwartzCase::S2, &alg, ys);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localkernel::Y1;

    #[test]
    fn nonsplit_b_example() {
        let f = LocalFieldData::new(3, 3, 0, 0, Ramification::Inert, 1).unwrap();
        let pt = LocalPoint::new(Y1::Integral { vq: Some(0) }, None, 0);
        let r = restriction_to_e(&f, SchwartzCase::Unit, &pt).unwrap();
        assert_eq!(r, LogLinearValue::log_times(3, Rational::from((1, 4))));
        let d = d_combination(&f, SchwartzCase::Unit, &pt).unwrap();
        assert_eq!(d, LogLinearValue::log_times(3, Rational::from((1, 2))));
        let rep = prop92_check(&f, SchwartzCase::Unit, &pt).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rhs, LogLinearValue::log_int(3));
    }

    #[test]
    fn unramified_is_trivial() {
        let f = LocalFieldData::new(5, 5, 0, 0, Ramification::Inert, 0).unwrap();
        let pt = LocalPoint::new(Y1::Integral { vq: Some(0) }, None, 0);
        let rep = prop92_check(&f, SchwartzCase::Standard, &pt).unwrap();
        assert!(rep.pass && rep.rhs.is_zero() && rep.lhs.is_zero());
    }

    #[test]
    fn s2_d_vanishes() {
        let f = LocalFieldData::new(3, 3, 0, 0, Ramification::Split, 0).unwrap();
        for (a, d) in [(0, 0), (-1, 1), (2, 0)] {
            let pt = LocalPoint::new(Y1::Split { va: Some(a), vd: Some(d) }, None, 0);
            assert!(d_combination(&f, SchwartzCase::S2, &pt).unwrap().is_zero());
        }
    }
}
