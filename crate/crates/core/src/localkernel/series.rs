//! The Whittaker series W°_{a}(s, 1, u) and the intertwining series c̃(s)
//! as exact rational functions of X = N^{-s}.
//!
//! Both are built from the sequence I_n = ∫ φ(y₁ + x₂, u) d_u x₂ over D_n(a)
//! (resp. D_n); the integrals come either from the lattice description of
//! D_n or from p-adic enumeration in an explicit model.

use rug::Rational;

use super::algebra::LocalAlgebra;
use super::volume::{integral_enumerated, volume_dn, Domain, Volume};
use super::{LocalFieldData, LocalPoint, Ramification, SchwartzCase, Y1};
use crate::error::{Error, Result};
use crate::numerics::{Poly, RationalFunctionX};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// the normalized derivative series giving k (needs y₂ ≠ 0)
    Whittaker,
    /// the intertwining series giving c (needs y₂ = 0)
    Intertwining,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralSource {
    Analytic,
    Enumerated,
}

fn phi_one(case: SchwartzCase, y1: &Y1) -> bool {
    match case {
        SchwartzCase::Unit => y1.is_unit(),
        _ => y1.in_o(),
    }
}

/// vol{z ∈ O_E : v(Nm z) ≥ m} for split E, relative to vol(O_E).
fn split_ball(f: &LocalFieldData, m: i32) -> Rational {
    let m = m.max(0);
    let n = f.n_rat();
    f.npow(-m) * (Rational::from(1) + (Rational::from(1) - Rational::from(1) / n) * m)
}

fn analytic_term(
    f: &LocalFieldData,
    case: SchwartzCase,
    pt: &LocalPoint,
    kind: SeriesKind,
    n: i32,
) -> Result<Option<Volume>> {
    let v_d = f.v_d as i32;
    let c0 = f.abs_dq();
    let zero = Volume::zero(f.v_dd);
    if matches!(pt.y1, Y1::OffLattice) || case == SchwartzCase::S2 {
        return Ok(None);
    }
    if !phi_one(case, &pt.y1) {
        return Ok(Some(zero));
    }
    // vol(D_n ∩ O_E𝐣)
    let lattice = |n: i32| -> Rational {
        match f.ram {
            Ramification::Inert => {
                let e = (n - v_d - f.v_qj as i32 + 1).div_euclid(2).max(0);
                &c0 * f.npow(-2 * e)
            }
            Ramification::Ramified => &c0 * f.npow(-(n - v_d).max(0)),
            Ramification::Split => &c0 * split_ball(f, n - v_d),
        }
    };
    Ok(Some(match kind {
        SeriesKind::Intertwining => Volume::new(lattice(n), f.v_dd),
        SeriesKind::Whittaker => {
            let a_val = pt.a_val().expect("checked by caller");
            match volume_dn(f, n, a_val)? {
                super::DnVolume::Empty => zero,
                super::DnVolume::Full(_) => Volume::new(lattice(n), f.v_dd),
                // the window lies in O_E𝐣 exactly when v(a) ≥ 0
                super::DnVolume::Window(v) if a_val >= 0 => v,
                super::DnVolume::Window(_) => zero,
            }
        }
    }))
}

struct Terms<'a> {
    f: &'a LocalFieldData,
    case: SchwartzCase,
    pt: &'a LocalPoint,
    kind: SeriesKind,
    source: IntegralSource,
    alg: Option<(LocalAlgebra, Domain)>,
}

impl<'a> Terms<'a> {
    fn enumerated(&mut self, n: i32) -> Result<Volume> {
        let y1 = self.pt.y1_coords.clone().ok_or_else(|| {
            Error::InvalidInput("enumeration needs explicit coordinates for y₁".into())
        })?;
        if self.alg.is_none() {
            let alg = LocalAlgebra::for_field(self.f)?;
            let dom = match self.kind {
                SeriesKind::Intertwining => Domain::Plain,
                SeriesKind::Whittaker => {
                    let s = alg.y2_coefficient(self.pt.vq_y2.expect("checked"))?;
                    Domain::Shifted(alg.q_near_j() * alg.norm(&s))
                }
            };
            self.alg = Some((alg, dom));
        }
        let (alg, dom) = self.alg.as_ref().unwrap();
        integral_enumerated(self.f, alg, self.case, &y1, dom, n)
    }

    fn term(&mut self, n: i32) -> Result<Rational> {
        if self.pt.u_val != 0 {
            return Ok(Rational::new());
        }
        let v = match self.source {
            IntegralSource::Analytic => match analytic_term(self.f, self.case, self.pt, self.kind, n)? {
                Some(v) => v,
                None => self.enumerated(n)?,
            },
            IntegralSource::Enumerated => self.enumerated(n)?,
        };
        // c_n = N^n · I_n / |D|^{1/2}
        Ok(self.f.npow(n) * v.coeff)
    }
}

/// The series as a rational function of X = N^{-s}.
pub fn whittaker_rf(
    f: &LocalFieldData,
    case: SchwartzCase,
    pt: &LocalPoint,
    kind: SeriesKind,
    source: IntegralSource,
) -> Result<RationalFunctionX> {
    case.check(f)?;
    pt.check(f)?;
    let base = f.n;
    let n_rat = f.n_rat();
    let one = Rational::from(1);
    let mut terms = Terms {
        f,
        case,
        pt,
        kind,
        source,
        alg: None,
    };
    match kind {
        SeriesKind::Whittaker => {
            let a_val = pt.a_val().ok_or_else(|| {
                Error::InvalidInput("the Whittaker series needs y₂ ≠ 0".into())
            })?;
            let kappa = match f.ram {
                Ramification::Inert => &one / (Rational::from(1) + Rational::from(&one / &n_rat)),
                Ramification::Ramified => Rational::from((1, 2)),
                Ramification::Split => {
                    return Err(Error::Unsupported(
                        "y₂ ≠ 0 does not occur for split E".into(),
                    ))
                }
            };
            // D_n(a) is empty beyond v(ad) + v(D) − 1
            let last = a_val + f.v_d as i32 + (f.v_dd as i32 - 1).max(0);
            let mut coeffs = Vec::new();
            for n in 0..=last.max(-1) {
                coeffs.push(terms.term(n)?);
            }
            for n in last.max(-1) + 1..=last.max(-1) + 2 {
                if terms.term(n)? != 0 {
                    return Err(Error::Domain(format!(
                        "Whittaker series does not terminate at n = {last}"
                    )));
                }
            }
            let g = Poly::new(coeffs);
            Ok(RationalFunctionX::from_poly(g.mul(&Poly::one_minus_x()).scale(&kappa), base))
        }
        SeriesKind::Intertwining => {
            if pt.vq_y2.is_some() {
                return Err(Error::InvalidInput(
                    "the intertwining series is evaluated at y ∈ E (y₂ = 0)".into(),
                ));
            }
            let inv_n = Rational::from(&one / &n_rat);
            let (q, lnum, lden) = match f.ram {
                Ramification::Inert => (
                    Poly::new(vec![one.clone(), Rational::new(), Rational::from(-1)]),
                    Poly::one_plus(one.clone()),
                    Poly::one_plus(inv_n),
                ),
                Ramification::Ramified => (Poly::one_minus_x(), Poly::one(), Poly::one()),
                Ramification::Split => (
                    Poly::one_minus_x().pow(2),
                    Poly::one_minus_x(),
                    Poly::one_plus(-inv_n),
                ),
            };
            let deg_q = q.degree().unwrap() as i32;
            let n0 = if case == SchwartzCase::S2 {
                1
            } else {
                (f.v_d + f.v_qj) as i32 + 1
            };
            let d = n0 + deg_q;
            let top = d + 2;
            let mut c = Vec::new();
            for n in 0..=top {
                c.push(terms.term(n)?);
            }
            let qc = q.mul(&Poly::new(c));
            let qc = qc.coeffs();
            for m in d..=top {
                if qc.get(m as usize).is_some_and(|x| *x != 0) {
                    return Err(Error::Domain(format!(
                        "intertwining series breaks its recurrence at n = {m}"
                    )));
                }
            }
            let p = Poly::new(qc.iter().take(d as usize).cloned().collect());
            let num = lnum.mul(&Poly::one_minus_x()).mul(&p);
            RationalFunctionX::new(num, lden.mul(&q), base)
        }
    }
}
