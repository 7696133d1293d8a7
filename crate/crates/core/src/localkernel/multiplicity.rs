//! Local intersection multiplicities: the closed forms m_φ(y, u), n_φ(y, u),
//! the pair multiplicity table, the Cherednik–Drinfeld case, ordinary
//! multiplicities, and coset sums that rebuild the closed forms from the
//! pair table.

use rug::Rational;

use super::algebra::{Elt, LocalAlgebra};
use super::padic::{pow_rat, vp, vp_or_inf};
use super::{LocalFieldData, LocalPoint, Ramification, SchwartzCase, Y1};
use crate::error::{Error, Result};

fn half(x: i32) -> Rational {
    Rational::from((x, 2))
}

/// m_φ(y, u) for y ∉ E_v (y₂ ≠ 0).
pub fn m_multiplicity(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<Rational> {
    case.check(f)?;
    let vq = pt
        .vq_y2
        .ok_or_else(|| Error::InvalidInput("m is evaluated at y ∉ E (y₂ ≠ 0)".into()))?;
    if pt.u_val != 0 {
        return Ok(Rational::new());
    }
    Ok(match (f.ram, case) {
        (Ramification::Split, _) => {
            return Err(Error::Unsupported("split E only carries n_φ".into()))
        }
        (_, SchwartzCase::Unit) => {
            // y₂ ∈ P_v O_E j_v with q(j_v) a unit
            if pt.y1.is_unit() && vq >= 2 {
                half(vq)
            } else {
                Rational::new()
            }
        }
        (Ramification::Inert, _) if pt.y1.in_o() && vq >= 0 => half(vq + 1),
        (Ramification::Ramified, _) if pt.y1.in_o() && vq >= 0 => half(vq + f.v_dd as i32),
        _ => Rational::new(),
    })
}

/// m(b, β) for 𝔹_v split and E_v nonsplit, indexed by v(λ(b)) and the
/// conductor c of the lattice.
pub fn m_pair(f: &LocalFieldData, v_lambda: i32, c: i32) -> Result<Rational> {
    if c < 0 {
        return Err(Error::InvalidInput(format!("conductor c = {c} < 0")));
    }
    if f.b_nonsplit {
        return Err(Error::Unsupported("pair multiplicities need split 𝔹".into()));
    }
    match (f.ram, c) {
        (Ramification::Split, _) => Err(Error::Unsupported("pair table needs nonsplit E".into())),
        (Ramification::Inert, 0) => Ok(half(v_lambda + 1)),
        (Ramification::Ramified, 0) => Ok(half(f.v_dd as i32 + v_lambda)),
        (Ramification::Inert, _) => Ok(f.npow(1 - c) / (f.n_rat() + 1u32)),
        (Ramification::Ramified, _) => Ok(f.npow(-c) / 2u32),
    }
}

/// Lattices x·O² (x in Hermite normal form [[p^α, β], [0, p^δ]], α + δ = k)
/// together with their conductor under multiplication by O_E.
fn lattices_with_conductor(alg: &LocalAlgebra, k: i32) -> Vec<i32> {
    let p = alg.p as i64;
    // matrix of multiplication by ω in the basis (1, ω)
    let w = [[0i64, -alg.cnorm], [1, alg.trace]];
    let mut out = Vec::new();
    for a in 0..=k {
        let d = k - a;
        let pa = p.pow(a as u32);
        for beta in 0..pa {
            let x = [
                [Rational::from(pa), Rational::from(beta)],
                [Rational::new(), Rational::from(p.pow(d as u32))],
            ];
            let det = Rational::from(&x[0][0] * &x[1][1]);
            let xi = [
                [Rational::from(&x[1][1] / &det), Rational::from(-&x[0][1]) / &det],
                [Rational::new(), Rational::from(&x[0][0] / &det)],
            ];
            let mut minv = i32::MAX;
            for i in 0..2 {
                for j in 0..2 {
                    // (x^{-1} W x)_{ij}: ω·xO² ⊂ p^{-c}·xO²
                    let mut s = Rational::new();
                    for k1 in 0..2 {
                        for k2 in 0..2 {
                            s += Rational::from(&xi[i][k1] * w[k1][k2]) * &x[k2][j];
                        }
                    }
                    minv = minv.min(vp_or_inf(&s, alg.p));
                }
            }
            out.push((-minv).max(0));
        }
    }
    out
}

const MAX_COSET_DEPTH: i32 = 4;

/// m_φ(y, u) rebuilt as Σ_x m(y, x^{-1}) over lattices of index N^{v(q(y))},
/// for y = y₁ + s·j ∈ O_E + O_E j in the nearby algebra and 𝔹_v split.
pub fn m_coset_sum(f: &LocalFieldData, y1: &Elt, s: &Elt, u_val: i32) -> Result<Rational> {
    let alg = LocalAlgebra::for_field(f)?;
    if f.ram == Ramification::Split || f.b_nonsplit {
        return Err(Error::Unsupported("coset sums cover split 𝔹 and nonsplit E".into()));
    }
    if u_val != 0 {
        return Ok(Rational::new());
    }
    let q2 = alg.q_near_j() * alg.norm(s);
    let qy = alg.norm(y1) + &q2;
    let k = vp(&qy, f.p).ok_or_else(|| Error::InvalidInput("q(y) = 0".into()))?;
    let v2 = vp(&q2, f.p).ok_or_else(|| Error::InvalidInput("y ∈ E".into()))?;
    if k < 0 {
        return Ok(Rational::new());
    }
    if k > MAX_COSET_DEPTH {
        return Err(Error::Unsupported(format!(
            "coset enumeration limited to v(q(y)) ≤ {MAX_COSET_DEPTH}"
        )));
    }
    let mut total = Rational::new();
    for c in lattices_with_conductor(&alg, k) {
        total += m_pair(f, v2 - k, c)?;
    }
    Ok(total)
}

/// n_φ(y, u) for nonsplit E and split 𝔹 as the coset sum over lattices of
/// index N^{v(q(y))} with positive conductor.
pub fn n_coset_sum_nonsplit(f: &LocalFieldData, vq_y: i32) -> Result<Rational> {
    let alg = LocalAlgebra::for_field(f)?;
    if !(0..=MAX_COSET_DEPTH).contains(&vq_y) {
        return Err(Error::Unsupported(format!("v(q(y)) = {vq_y} outside 0..={MAX_COSET_DEPTH}")));
    }
    let mut total = Rational::new();
    for c in lattices_with_conductor(&alg, vq_y) {
        if c > 0 {
            total += m_pair(f, 0, c)?;
        }
    }
    Ok(total)
}

/// m_{v̄}(b) for the ordinary part at level r; defined for v(b) ≤ r − 1.
pub fn m_ordinary(b_val: i32, r: i32, n: u64) -> Result<Rational> {
    if b_val >= r {
        return Err(Error::Domain(format!(
            "ordinary multiplicity undefined for v(b) = {b_val} ≥ r = {r} (self-intersection)"
        )));
    }
    Ok(pow_rat(n, -(r - b_val - 1)) / Rational::from(n - 1))
}

/// Σ_{i=1}^{a} #{(p^{-i} − p^{-i+1})/p^r} · m_ordinary(−i, r, N); equals a.
pub fn ordinary_sum_check(a_val: i32, n: u64, r: i32) -> Result<Rational> {
    let mut total = Rational::new();
    for i in 1..=a_val {
        let count = pow_rat(n, i + r) - pow_rat(n, i + r - 1);
        total += count * m_ordinary(-i, r, n)?;
    }
    Ok(total)
}

/// n_φ(y, u) for y ∈ E_v^×.
pub fn n_multiplicity(f: &LocalFieldData, case: SchwartzCase, pt: &LocalPoint) -> Result<Rational> {
    case.check(f)?;
    if pt.vq_y2.is_some() {
        return Err(Error::InvalidInput("n is evaluated at y ∈ E (y₂ = 0)".into()));
    }
    if pt.u_val != 0 {
        return Ok(Rational::new());
    }
    match f.ram {
        Ramification::Split => split_coset_sum(f, case, &pt.y1),
        _ if case == SchwartzCase::Unit => Ok(Rational::new()),
        _ => match &pt.y1 {
            Y1::Integral { vq: Some(v) } => Ok(half(*v)),
            Y1::Integral { vq: None } => Err(Error::InvalidInput("y = 0 is not in E^×".into())),
            _ => Ok(Rational::new()),
        },
    }
}

/// Split E: y = diag(a, d); sum over y·n(b) and y·n⁻(b), b ∈ (F − O)/O,
/// weighted by the ordinary multiplicities at level 0.
fn split_coset_sum(f: &LocalFieldData, case: SchwartzCase, y1: &Y1) -> Result<Rational> {
    let (va, vd) = match y1 {
        Y1::Split {
            va: Some(a),
            vd: Some(d),
        } => (*a, *d),
        _ => return Err(Error::InvalidInput("y must lie in E^× = F^× × F^×".into())),
    };
    // does [[a, ab],[0, d]] (or its transpose-shape for n⁻) lie in the support?
    let member = |lattice_shift: i32, v_off: i32| -> bool {
        va >= lattice_shift && vd >= lattice_shift && v_off >= lattice_shift
    };
    let weight_at = |shift: i32, unit_det: bool| -> Result<Rational> {
        if unit_det && va + vd != 0 {
            return Ok(Rational::new());
        }
        let mut s = Rational::new();
        let top = va.max(vd) + 2 - shift;
        for i in 1..=top.max(0) {
            let classes = pow_rat(f.n, i - 1) * Rational::from(f.n - 1);
            let m = m_ordinary(-i, 0, f.n)?;
            let hits = member(shift, va - i) as i32 + member(shift, vd - i) as i32;
            s += classes * m * hits;
        }
        Ok(s / 2u32)
    };
    match case {
        SchwartzCase::Standard => weight_at(0, false),
        SchwartzCase::S2 => {
            let w = Rational::from((1, 1 + f.n + f.n * f.n));
            Ok(weight_at(0, true)? - w * weight_at(-1, true)?)
        }
        SchwartzCase::Unit => Err(Error::InvalidInput("unit case needs nonsplit 𝔹".into())),
    }
}

/// Data entering the Cherednik–Drinfeld multiplicity m(γ, β).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CherednikData {
    /// v(q(γ₂)); None when γ ∈ E^× (λ(γ) = 0)
    pub v_q_gamma2: Option<i32>,
    pub v_q_gamma: i32,
    /// γ ∈ E^×(1 + O_E ϖ j)
    pub in_support: bool,
    pub v_q_beta: i32,
}

impl CherednikData {
    /// γ = y₁ + s·j in the nearby algebra of a nonsplit-𝔹 place.
    pub fn from_element(alg: &LocalAlgebra, y1: &Elt, s: &Elt, v_q_beta: i32) -> Result<Self> {
        let q2 = alg.q_near_j() * alg.norm(s);
        let qg = alg.norm(y1) + &q2;
        let v_q_gamma = vp(&qg, alg.p).ok_or_else(|| Error::InvalidInput("q(γ) = 0".into()))?;
        let ve = |x: &Elt| -> Option<i32> {
            match (vp(&x[0], alg.p), vp(&x[1], alg.p)) {
                (None, None) => None,
                (a, b) => Some(a.unwrap_or(i32::MAX).min(b.unwrap_or(i32::MAX))),
            }
        };
        let in_support = match (ve(y1), ve(s)) {
            (Some(a), Some(b)) => b - a >= 1,
            (Some(_), None) => true,
            _ => false,
        };
        Ok(CherednikData {
            v_q_gamma2: vp(&q2, alg.p),
            v_q_gamma,
            in_support,
            v_q_beta,
        })
    }
}

/// m(γ, β) = (1/2)v(λ(γ)) on E^×(1 + O_E ϖ j) when q(γ)q(β) ∈ O^×.
pub fn m_cherednik(data: &CherednikData) -> Result<Rational> {
    let v2 = data.v_q_gamma2.ok_or_else(|| {
        Error::InvalidInput("γ ∈ E^× (λ(γ) = 0) is excluded; the caller must guard it".into())
    })?;
    if data.v_q_gamma + data.v_q_beta != 0 || !data.in_support {
        return Ok(Rational::new());
    }
    Ok(half(v2 - data.v_q_gamma))
}

/// m_φ(y, u) at a nonsplit-𝔹 place as the sum over 𝔹^×/U ≅ ℤ: only the
/// class with v(q(x)) = 0 meets the support of 1_{O_𝔹^×}.
pub fn m_nonsplit_coset_sum(alg: &LocalAlgebra, y1: &Elt, s: &Elt, u_val: i32) -> Result<Rational> {
    if u_val != 0 {
        return Ok(Rational::new());
    }
    let data = CherednikData::from_element(alg, y1, s, 0)?;
    let mut total = Rational::new();
    // x ranges over ϖ_𝔹^m, v(q(x)) = m; 1_0(v(q(x)/q(y))) forces m = v(q(y))
    let m = data.v_q_gamma;
    if m == 0 {
        total += m_cherednik(&CherednikData {
            v_q_beta: -m,
            ..data
        })?;
    }
    Ok(total)
}
