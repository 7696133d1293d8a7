//! Volumes of D_n = {x₂ ∈ E𝐣 : u·q(x₂) ∈ p^n d^{-1}} and
//! D_n(a) = {x₂ : u·q(x₂) − a ∈ p^n d^{-1}}, analytically and by enumeration,
//! together with the enumerated integrals ∫ φ(y₁ + x₂, u) dx₂ that feed the
//! Whittaker and intertwining series.
//!
//! Volumes are measured with vol(O_E𝐣) = |D|^{1/2}·|d·q(𝐣)| (u a unit) and
//! stored as a rational multiple of |D|^{1/2}.

use std::fmt;

use rug::Rational;

use super::algebra::{Elt, LocalAlgebra};
use super::padic::{count_volume, decision_depth, pow_rat, to_i128, vp, Constraint, PadicApprox, Quad2, ValCond};
use super::{LocalFieldData, Ramification, SchwartzCase};
use crate::error::{Error, Result};

/// coeff · |D_v|^{1/2}
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    pub coeff: Rational,
    pub v_dd: u32,
}

impl Volume {
    pub fn new(coeff: Rational, v_dd: u32) -> Self {
        Volume { coeff, v_dd }
    }

    pub fn zero(v_dd: u32) -> Self {
        Volume::new(Rational::new(), v_dd)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    /// The volume itself when |D|^{1/2} is rational.
    pub fn exact(&self, n: u64) -> Option<Rational> {
        if self.v_dd.is_multiple_of(2) {
            Some(&self.coeff * pow_rat(n, -((self.v_dd / 2) as i32)))
        } else {
            None
        }
    }

    pub fn to_f64(&self, n: u64) -> f64 {
        self.coeff.to_f64() * (n as f64).powf(-(self.v_dd as f64) / 2.0)
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v_dd == 0 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}·|D|^(1/2)", self.coeff)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DnVolume {
    Empty,
    /// D_n(a) = D_n
    Full(Volume),
    /// v(ad) < n ≤ v(ad) + v(D) − 1 (ramified E)
    Window(Volume),
}

impl DnVolume {
    pub fn volume(&self, v_dd: u32) -> Volume {
        match self {
            DnVolume::Empty => Volume::zero(v_dd),
            DnVolume::Full(v) | DnVolume::Window(v) => v.clone(),
        }
    }
}

/// vol(D_n) in units of |D|^{1/2}.
pub fn volume_dn_lattice(f: &LocalFieldData, n: i32) -> Result<Volume> {
    let c0 = f.abs_dq();
    let v_d = f.v_d as i32;
    match f.ram {
        Ramification::Inert => {
            let e = (n - v_d - f.v_qj as i32 + 1).div_euclid(2);
            Ok(Volume::new(c0 * f.npow(-2 * e), 0))
        }
        Ramification::Ramified => Ok(Volume::new(c0 * f.npow(v_d - n), f.v_dd)),
        Ramification::Split => Err(Error::Unsupported(
            "D_n has infinite volume for split E".into(),
        )),
    }
}

/// vol(D_n(a)) from the valuation of a alone.
pub fn volume_dn(f: &LocalFieldData, n: i32, a_val: i32) -> Result<DnVolume> {
    let vad = a_val + f.v_d as i32;
    match f.ram {
        Ramification::Split => Err(Error::Unsupported(
            "D_n(a) geometry is only needed for nonsplit E".into(),
        )),
        _ if n <= vad => Ok(DnVolume::Full(volume_dn_lattice(f, n)?)),
        Ramification::Inert => Ok(DnVolume::Empty),
        Ramification::Ramified => {
            if n < vad + f.v_dd as i32 {
                // |D|^{1/2}|d||a| N^{v(ad) − n}
                let c = f.abs_d() * f.npow(-a_val) * f.npow(vad - n);
                Ok(DnVolume::Window(Volume::new(c, f.v_dd)))
            } else {
                Ok(DnVolume::Empty)
            }
        }
    }
}

/// (A + Bω) ↦ Nm as an integer quadratic polynomial, times `k`.
fn norm_poly(alg: &LocalAlgebra, k: i128, c00: i128) -> Quad2 {
    Quad2::new(c00, 0, 0, k, k * alg.trace as i128, k * alg.cnorm as i128)
}

fn split_rat(x: &Rational) -> Result<(i128, i128)> {
    Ok((to_i128(x.numer())?, to_i128(x.denom())?))
}

fn p128(p: u64, e: i32) -> Result<i128> {
    (p as i128).checked_pow(e as u32).ok_or_else(|| Error::InsufficientPrecision {
        what: "p-power exceeds 128-bit range".into(),
        required: 128,
    })
}

fn vden(s: i128, p: u64) -> i32 {
    vp(&Rational::from(s), p).unwrap_or(0)
}

/// Condition v(c·q𝐣·Nm(t) − a) ≥ k for t = (A + Bω)/p^L (a = 0 allowed).
fn q_condition(alg: &LocalAlgebra, a: &Rational, k: i32, l: i32) -> Result<Constraint> {
    let (r, s) = split_rat(a)?;
    let qj = -(alg.b_square as i128);
    let pl2 = p128(alg.p, 2 * l)?;
    let poly = norm_poly(alg, s * qj, -r * pl2);
    Ok(Constraint::new(poly, ValCond::AtLeast(k + 2 * l + vden(s, alg.p))))
}

/// y₁ + t𝐣 ∈ End(O_E), t = (A + Bω)/p^L.
fn split_order_conditions(alg: &LocalAlgebra, y1: &Elt, l: i32) -> Result<Vec<Constraint>> {
    let pl = p128(alg.p, l)?;
    let t = alg.trace as i128;
    let c = alg.cnorm as i128;
    let consts = [
        y1[0].clone(),
        y1[1].clone(),
        Rational::from(&y1[1] * -alg.cnorm),
        (&y1[0] + Rational::from(&y1[1] * alg.trace)),
    ];
    let lin: [(i128, i128); 4] = [(1, 0), (0, 1), (t, c), (-1, 0)];
    let mut out = Vec::new();
    for (k, (ca, cb)) in consts.iter().zip(lin) {
        let (r, s) = split_rat(k)?;
        out.push(Constraint::new(
            Quad2::linear(r * pl, s * ca, s * cb),
            ValCond::AtLeast(vden(s, alg.p) + l),
        ));
    }
    Ok(out)
}

/// v(Nm(y₁) − 𝐣²·Nm(t)) = 0, i.e. q(y₁ + t𝐣) ∈ O^×.
fn unit_norm_condition(alg: &LocalAlgebra, y1: &Elt, l: i32) -> Result<Constraint> {
    let (r, s) = split_rat(&alg.norm(y1))?;
    let pl2 = p128(alg.p, 2 * l)?;
    let poly = norm_poly(alg, -s * alg.b_square as i128, r * pl2);
    Ok(Constraint::new(poly, ValCond::Exactly(vden(s, alg.p) + 2 * l)))
}

fn measure(alg: &LocalAlgebra, cons: &[Constraint]) -> Result<Rational> {
    count_volume(alg.p, cons, decision_depth(cons) + 1)
}

/// Which condition on x₂ accompanies the Schwartz function.
#[derive(Clone, Debug)]
pub enum Domain {
    /// x₂ ∈ D_n(a)
    Shifted(Rational),
    /// x₂ ∈ D_n
    Plain,
}

/// ∫_{D_n(a) or D_n} φ(y₁ + x₂, u) d_u x₂ for a unit u, by enumeration.
pub fn integral_enumerated(
    f: &LocalFieldData,
    alg: &LocalAlgebra,
    case: SchwartzCase,
    y1: &Elt,
    domain: &Domain,
    n: i32,
) -> Result<Volume> {
    let l = f.v_dd as i32 + 1;
    let k = n - f.v_d as i32;
    let a = match domain {
        Domain::Shifted(a) => a.clone(),
        Domain::Plain => Rational::new(),
    };
    let qc = q_condition(alg, &a, k, l)?;
    let mu = match case {
        SchwartzCase::Standard => {
            let mut cons = split_order_conditions(alg, y1, l)?;
            cons.push(qc);
            measure(alg, &cons)?
        }
        SchwartzCase::Unit => measure(alg, &[qc, unit_norm_condition(alg, y1, l)?])?,
        SchwartzCase::S2 => {
            let mut c1 = split_order_conditions(alg, y1, l)?;
            c1.push(unit_norm_condition(alg, y1, l)?);
            c1.push(qc.clone());
            // ϖ(y₁ + t𝐣) ∈ O_𝔹: same test at level L − 1 for p·y₁
            let py1 = alg.scale(y1, &Rational::from(alg.p));
            let mut c2 = split_order_conditions(alg, &py1, l - 1)?;
            c2.push(unit_norm_condition(alg, y1, l)?);
            c2.push(qc);
            let w = Rational::from((1, 1 + f.n + f.n * f.n));
            measure(alg, &c1)? - w * measure(alg, &c2)?
        }
    };
    let coeff = f.abs_dq() * pow_rat(f.p, 2 * l) * mu;
    Ok(Volume::new(coeff, f.v_dd))
}

/// vol(D_n(a)) by p-adic enumeration; `depth` bounds the refinement.
pub fn volume_dn_oracle(f: &LocalFieldData, n: i32, a: &PadicApprox, depth: u32) -> Result<Volume> {
    if f.ram == Ramification::Split {
        return Err(Error::Unsupported("D_n(a) has infinite volume for split E".into()));
    }
    let required = n + f.v_d as i32 + f.v_dd as i32 + 2;
    if (depth as i32) < required {
        return Err(Error::InsufficientPrecision {
            what: format!("enumeration depth {depth} for n = {n}"),
            required: required as u64,
        });
    }
    let k = n - f.v_d as i32;
    if a.absolute_precision() < k {
        return Err(Error::InsufficientPrecision {
            what: "a is known to too few digits".into(),
            required: k.max(0) as u64,
        });
    }
    let alg = LocalAlgebra::for_field(f)?;
    let a_rat = a.to_rational();
    let a_val = a.valuation().unwrap_or(i32::MAX / 4);
    let m_min = k.min(a_val) - f.v_qj as i32;
    let l = (-m_min).max(0).div_euclid(2) + (-m_min).max(0) % 2;
    let qc = q_condition(&alg, &a_rat, k, l)?;
    let cons = [qc];
    let need = decision_depth(&cons) + 1;
    let mu = count_volume(f.p, &cons, need.min(depth + 2 * l as u32 + 2))?;
    Ok(Volume::new(f.abs_dq() * pow_rat(f.p, 2 * l) * mu, f.v_dd))
}
