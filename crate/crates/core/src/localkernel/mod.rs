//! Local Whittaker derivatives, local intersection multiplicities and the
//! local identity 2(k − m log N)|_E + d = −log|d_v q(j_v)|·φ, all exact in
//! [`LogLinearValue`](crate::numerics::LogLinearValue).
//!
//! Closed forms take valuation data only; the explicit models in
//! [`algebra`] and the counter in [`padic`] provide independent
//! enumeration routes for the same quantities.

pub mod algebra;
pub mod multiplicity;
pub mod oracle;
pub mod padic;
pub mod prop92;
pub mod series;
pub mod volume;
mod derivatives;

pub use algebra::{Elt, LocalAlgebra};
pub use derivatives::{alpha_v, c_derivative, k_derivative, schwartz_value};
pub use multiplicity::{
    m_cherednik, m_coset_sum, m_multiplicity, m_ordinary, m_pair, n_coset_sum_nonsplit,
    n_multiplicity, ordinary_sum_check, CherednikData,
};
pub use padic::PadicApprox;
pub use prop92::{d_combination, default_grid, prop92_check, restriction_to_e, GridCase, Prop92Report};
pub use series::{whittaker_rf, IntegralSource, SeriesKind};
pub use volume::{volume_dn, volume_dn_oracle, DnVolume, Volume};

use rug::Rational;

use crate::error::{Error, Result};
use padic::pow_rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ramification {
    Inert,
    Ramified,
    Split,
}

impl std::str::FromStr for Ramification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inert" => Ok(Ramification::Inert),
            "ramified" => Ok(Ramification::Ramified),
            "split" => Ok(Ramification::Split),
            _ => Err(Error::InvalidInput(format!("unknown ramification type {s:?}"))),
        }
    }
}

impl std::fmt::Display for Ramification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Ramification::Inert => "inert",
            Ramification::Ramified => "ramified",
            Ramification::Split => "split",
        })
    }
}

/// Local data at a finite place v: residue size N, conductor exponents
/// v(d_v), v(D_v), the splitting type of E_v and v(q(j_v)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldData {
    pub p: u64,
    pub n: u64,
    pub v_d: u32,
    pub v_dd: u32,
    pub ram: Ramification,
    pub v_qj: u32,
    /// 𝔹_v nonsplit; equivalent to v(q(j_v)) = 1.
    pub b_nonsplit: bool,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl LocalFieldData {
    pub fn new(p: u64, n: u64, v_d: u32, v_dd: u32, ram: Ramification, v_qj: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let mut m = n;
        while m > 1 && m.is_multiple_of(p) {
            m /= p;
        }
        if n < p || m != 1 {
            return Err(Error::InvalidInput(format!("N = {n} is not a power of {p}")));
        }
        if v_qj > 1 {
            return Err(Error::InvalidInput("v(q(j)) must be 0 or 1".into()));
        }
        match ram {
            Ramification::Inert if v_dd != 0 => {
                return Err(Error::InvalidInput("inert E has v(D) = 0".into()))
            }
            Ramification::Ramified => {
                if v_qj != 0 {
                    return Err(Error::InvalidInput("𝔹 splits at ramified places".into()));
                }
                let ok = if p == 2 { v_dd >= 2 } else { v_dd == 1 };
                if !ok {
                    return Err(Error::InvalidInput(format!(
                        "ramified E over residue characteristic {p} cannot have v(D) = {v_dd}"
                    )));
                }
            }
            Ramification::Split if v_dd != 0 || v_qj != 0 => {
                return Err(Error::InvalidInput("split E has v(D) = v(q(j)) = 0".into()))
            }
            _ => {}
        }
        Ok(LocalFieldData {
            p,
            n,
            v_d,
            v_dd,
            ram,
            v_qj,
            b_nonsplit: v_qj == 1,
        })
    }

    pub fn n_rat(&self) -> Rational {
        Rational::from(self.n)
    }

    /// N^e
    pub fn npow(&self, e: i32) -> Rational {
        pow_rat(self.n, e)
    }

    /// |d_v q(j_v)|
    pub fn abs_dq(&self) -> Rational {
        self.npow(-((self.v_d + self.v_qj) as i32))
    }

    pub fn abs_d(&self) -> Rational {
        self.npow(-(self.v_d as i32))
    }
}

/// The local Schwartz function at v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchwartzCase {
    /// 1_{O_𝔹 × O^×}
    Standard,
    /// 1_{O_𝔹^× × O^×}, for nonsplit 𝔹
    Unit,
    /// 1_{O_𝔹^× × O^×} − (1 + N + N²)^{-1}·1_{ϖ^{-1}(O_𝔹)₂ × O^×}, split E only
    S2,
}

impl SchwartzCase {
    pub fn default_for(f: &LocalFieldData) -> Self {
        if f.b_nonsplit {
            SchwartzCase::Unit
        } else {
            SchwartzCase::Standard
        }
    }

    pub fn check(self, f: &LocalFieldData) -> Result<()> {
        match self {
            SchwartzCase::Unit if !f.b_nonsplit => Err(Error::InvalidInput(
                "the unit-group Schwartz function is used for nonsplit 𝔹 only".into(),
            )),
            SchwartzCase::Standard if f.b_nonsplit => Err(Error::InvalidInput(
                "nonsplit 𝔹 uses the unit-group Schwartz function".into(),
            )),
            SchwartzCase::S2 if f.ram != Ramification::Split || f.v_d != 0 => Err(
                Error::InvalidInput("the S₂ modification needs split E and v(d) = 0".into()),
            ),
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for SchwartzCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(SchwartzCase::Standard),
            "unit" => Ok(SchwartzCase::Unit),
            "s2" => Ok(SchwartzCase::S2),
            _ => Err(Error::InvalidInput(format!("unknown Schwartz case {s:?}"))),
        }
    }
}

/// Where y₁ ∈ E_v sits relative to O_E and D^{-1}O_E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Y1 {
    /// y₁ ∈ O_E, with v(q(y₁)) (None for y₁ = 0)
    Integral { vq: Option<i32> },
    /// y₁ ∈ D^{-1}O_E − O_E (ramified E)
    OffLattice,
    /// y₁ ∉ D^{-1}O_E
    Outside { vq: Option<i32> },
    /// split E: valuations of the two components (None for a zero component)
    Split { va: Option<i32>, vd: Option<i32> },
}

impl Y1 {
    pub fn in_o(&self) -> bool {
        match self {
            Y1::Integral { .. } => true,
            Y1::Split { va, vd } => va.is_none_or(|v| v >= 0) && vd.is_none_or(|v| v >= 0),
            _ => false,
        }
    }

    /// y₁ ∈ O_E^×
    pub fn is_unit(&self) -> bool {
        match self {
            Y1::Integral { vq } => *vq == Some(0),
            Y1::Split { va, vd } => *va == Some(0) && *vd == Some(0),
            _ => false,
        }
    }

    /// v(q(y₁)) when known (None for zero or unknown)
    pub fn vq(&self) -> Option<i32> {
        match self {
            Y1::Integral { vq } | Y1::Outside { vq } => *vq,
            Y1::Split { va, vd } => Some((*va)? + (*vd)?),
            Y1::OffLattice => None,
        }
    }
}

/// (y = y₁ + y₂, u) with y₂ recorded through v(q(y₂)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPoint {
    pub y1: Y1,
    pub y1_coords: Option<Elt>,
    /// None encodes y₂ = 0
    pub vq_y2: Option<i32>,
    pub u_val: i32,
}

impl LocalPoint {
    pub fn new(y1: Y1, vq_y2: Option<i32>, u_val: i32) -> Self {
        LocalPoint {
            y1,
            y1_coords: None,
            vq_y2,
            u_val,
        }
    }

    pub fn from_coords(alg: &LocalAlgebra, y1: Elt, vq_y2: Option<i32>, u_val: i32) -> Self {
        LocalPoint {
            y1: alg.classify(&y1),
            y1_coords: Some(y1),
            vq_y2,
            u_val,
        }
    }

    pub fn with_y2(&self, vq_y2: Option<i32>) -> Self {
        LocalPoint {
            vq_y2,
            ..self.clone()
        }
    }

    /// a = u·q(y₂)
    pub fn a_val(&self) -> Option<i32> {
        self.vq_y2.map(|v| v + self.u_val)
    }

    /// Points with y₂ ≠ 0 must have v(q(y₂)) in the value set of the nearby
    /// algebra: for inert E it has the parity opposite to v(q(j_v)).
    pub fn check(&self, f: &LocalFieldData) -> Result<()> {
        if let (Ramification::Inert, Some(v)) = (f.ram, self.vq_y2) {
            if (v - f.v_qj as i32).rem_euclid(2) == 0 {
                return Err(Error::InvalidInput(format!(
                    "v(q(y₂)) = {v} has the parity of v(q(j)) = {}; y₂ lies in the nearby algebra",
                    f.v_qj
                )));
            }
        }
        if matches!(self.y1, Y1::Split { .. }) != (f.ram == Ramification::Split) {
            return Err(Error::InvalidInput("y₁ descriptor does not match E_v".into()));
        }
        if f.ram != Ramification::Ramified && self.y1 == Y1::OffLattice {
            return Err(Error::InvalidInput("off-lattice y₁ only exists for ramified E".into()));
        }
        Ok(())
    }
}
