//! Explicit models of E_v = ℚ_p[ω], ω² = Tω − C, of the quaternion algebra
//! 𝔹_v = E_v + E_v𝐣 (𝐣t = t̄𝐣) and of the nearby algebra E_v + E_v j.
//!
//! Used only by the oracles, so the residue field is 𝔽_p (N = p).

use rug::Rational;

use super::padic::{is_p_integral, pow_rat, vp, vp_or_inf};
use super::{LocalFieldData, Ramification, Y1};
use crate::error::{Error, Result};

/// α + βω
pub type Elt = [Rational; 2];

pub fn elt(a: i64, b: i64) -> Elt {
    [Rational::from(a), Rational::from(b)]
}

#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    pub p: u64,
    pub trace: i64,
    pub cnorm: i64,
    pub ram: Ramification,
    pub v_dd: u32,
    /// 𝐣² in 𝔹_v: 1 when 𝔹_v splits, p otherwise.
    pub b_square: i64,
    /// j² in the nearby algebra; a norm from E_v exactly when 𝔹_v is nonsplit.
    pub epsilon: i64,
    uniformizer: Option<Elt>,
}

fn nonresidue(p: u64) -> i64 {
    (2..p)
        .find(|&a| {
            let mut r = 1u64;
            for _ in 0..(p - 1) / 2 {
                r = r * a % p;
            }
            r == p - 1
        })
        .expect("odd prime has a nonresidue") as i64
}

impl LocalAlgebra {
    pub fn for_field(f: &LocalFieldData) -> Result<Self> {
        if f.n != f.p {
            return Err(Error::Unsupported(format!(
                "explicit models need residue field F_p (N = {} ≠ p = {})",
                f.n, f.p
            )));
        }
        let p = f.p;
        let (trace, cnorm, uniformizer) = match (f.ram, p) {
            (Ramification::Inert, 2) => (1, 1, Some(elt(2, 0))),
            (Ramification::Inert, _) => (0, -nonresidue(p), Some(elt(p as i64, 0))),
            (Ramification::Ramified, 2) => match f.v_dd {
                2 => (0, 1, Some(elt(1, 1))),
                3 => (0, -2, Some(elt(0, 1))),
                v => {
                    return Err(Error::InvalidInput(format!(
                        "ramified quadratic extensions of Q_2 have v(D) ∈ {{2, 3}}, got {v}"
                    )))
                }
            },
            (Ramification::Ramified, _) => (0, -(p as i64), Some(elt(0, 1))),
            (Ramification::Split, _) => (1, 0, None),
        };
        let b_square = if f.b_nonsplit { p as i64 } else { 1 };
        let epsilon = match f.ram {
            Ramification::Inert if f.b_nonsplit => 1,
            Ramification::Inert => p as i64,
            Ramification::Ramified if p == 2 && f.v_dd == 2 => -1,
            Ramification::Ramified if p == 2 => 3,
            Ramification::Ramified => nonresidue(p),
            Ramification::Split => 1,
        };
        Ok(LocalAlgebra {
            p,
            trace,
            cnorm,
            ram: f.ram,
            v_dd: f.v_dd,
            b_square,
            epsilon,
            uniformizer,
        })
    }

    pub fn norm(&self, x: &Elt) -> Rational {
        let [a, b] = x;
        Rational::from(a * a) + Rational::from(a * b) * self.trace + Rational::from(b * b) * self.cnorm
    }

    pub fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        // (a + bω)(c + dω) = ac − bdC + (ad + bc + bdT)ω
        let bd = Rational::from(&x[1] * &y[1]);
        [
            Rational::from(&x[0] * &y[0]) - Rational::from(&bd * self.cnorm),
            Rational::from(&x[0] * &y[1]) + Rational::from(&x[1] * &y[0]) + bd * self.trace,
        ]
    }

    pub fn scale(&self, x: &Elt, c: &Rational) -> Elt {
        [Rational::from(&x[0] * c), Rational::from(&x[1] * c)]
    }

    pub fn pow(&self, x: &Elt, k: i32) -> Result<Elt> {
        let mut base = if k >= 0 { x.clone() } else { self.inv(x)? };
        let mut acc = elt(1, 0);
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn conj(&self, x: &Elt) -> Elt {
        [
            (&x[0] + Rational::from(&x[1] * self.trace)),
            Rational::from(-&x[1]),
        ]
    }

    pub fn inv(&self, x: &Elt) -> Result<Elt> {
        let n = self.norm(x);
        if n == 0 {
            return Err(Error::Domain("inverting a non-unit of E".into()));
        }
        let c = self.conj(x);
        Ok([c[0].clone() / &n, c[1].clone() / n])
    }

    /// Both coordinates in ℤ_p, i.e. x ∈ O_E.
    pub fn is_integral(&self, x: &Elt) -> bool {
        is_p_integral(&x[0], self.p) && is_p_integral(&x[1], self.p)
    }

    /// x ∈ p^k O_E
    pub fn in_scaled(&self, x: &Elt, k: i32) -> bool {
        self.is_integral(&self.scale(x, &pow_rat(self.p, -k)))
    }

    pub fn uniformizer(&self) -> Result<&Elt> {
        self.uniformizer
            .as_ref()
            .ok_or_else(|| Error::Unsupported("split E has no uniformizer".into()))
    }

    /// The split model E ≅ F × F, a + bω ↦ (a, a + b).
    pub fn split_components(&self, x: &Elt) -> Result<(Rational, Rational)> {
        if self.ram != Ramification::Split {
            return Err(Error::InvalidInput("components only exist for split E".into()));
        }
        Ok((x[0].clone(), Rational::from(&x[0] + &x[1])))
    }

    pub fn from_split_components(a: &Rational, d: &Rational) -> Elt {
        [a.clone(), Rational::from(d - a)]
    }

    pub fn classify(&self, x: &Elt) -> Y1 {
        let vq = vp(&self.norm(x), self.p);
        match self.ram {
            Ramification::Split => {
                let (a, d) = self.split_components(x).unwrap();
                Y1::Split {
                    va: vp(&a, self.p),
                    vd: vp(&d, self.p),
                }
            }
            _ if self.is_integral(x) => Y1::Integral { vq },
            Ramification::Ramified if self.in_scaled(x, -(self.v_dd as i32)) => Y1::OffLattice,
            _ => Y1::Outside { vq },
        }
    }

    /// q(𝐣) in 𝔹_v.
    pub fn q_bold_j(&self) -> Rational {
        Rational::from(-self.b_square)
    }

    /// q(j) in the nearby algebra.
    pub fn q_near_j(&self) -> Rational {
        Rational::from(-self.epsilon)
    }

    /// s ∈ E^× with v(q(s j)) = vq in the nearby algebra, when one exists.
    pub fn y2_coefficient(&self, vq: i32) -> Result<Elt> {
        let base = vp_or_inf(&self.q_near_j(), self.p);
        let pi = self.uniformizer()?.clone();
        let step = vp_or_inf(&self.norm(&pi), self.p);
        let diff = vq - base;
        if diff % step != 0 {
            return Err(Error::InvalidInput(format!(
                "v(q(y₂)) = {vq} does not occur in the nearby algebra (parity)"
            )));
        }
        self.pow(&pi, diff / step)
    }

    /// y₁ + t𝐣 ∈ End(O_E) = O_𝔹 for split 𝔹 (𝐣 acting as conjugation).
    pub fn in_split_order(&self, y1: &Elt, t: &Elt) -> bool {
        let s = [
            Rational::from(&y1[0] + &t[0]),
            Rational::from(&y1[1] + &t[1]),
        ];
        let omega = elt(0, 1);
        let r1 = self.mul(y1, &omega);
        let r2 = self.mul(t, &self.conj(&omega));
        let s2 = [
            Rational::from(&r1[0] + &r2[0]),
            Rational::from(&r1[1] + &r2[1]),
        ];
        self.is_integral(&s) && self.is_integral(&s2)
    }

    /// q(y₁ + t𝐣) in 𝔹_v.
    pub fn q_b(&self, y1: &Elt, t: &Elt) -> Rational {
        self.norm(y1) - self.norm(t) * self.b_square
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, ram: Ramification, v_dd: u32, v_qj: u32) -> LocalFieldData {
        LocalFieldData::new(p, p, 0, v_dd, ram, v_qj).unwrap()
    }

    #[test]
    fn inert_norm_is_anisotropic_mod_p() {
        for p in [2u64, 3, 5, 7] {
            let a = LocalAlgebra::for_field(&field(p, Ramification::Inert, 0, 0)).unwrap();
            for x in 0..p as i64 {
                for y in 0..p as i64 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let n = a.norm(&elt(x, y));
                    assert!(!n.numer().is_divisible_u(p as u32), "p={p} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn uniformizers_have_valuation_one() {
        for (p, v_dd) in [(3u64, 1u32), (5, 1), (2, 2), (2, 3)] {
            let a = LocalAlgebra::for_field(&field(p, Ramification::Ramified, v_dd, 0)).unwrap();
            assert_eq!(vp(&a.norm(a.uniformizer().unwrap()), p), Some(1));
        }
    }

    // ε is a norm from E exactly when some t ∈ O_E has Nm(t) ≡ ε modulo a
    // high power of p; brute force over residues mod p^4.
    fn is_norm_unit(a: &LocalAlgebra, eps: i64) -> bool {
        let m = a.p.pow(4) as i64;
        (0..m).any(|x| {
            (0..m).any(|y| {
                let n = a.norm(&elt(x, y));
                let d = n - eps;
                vp_or_inf(&d, a.p) >= 4
            })
        })
    }

    #[test]
    fn nearby_epsilon_is_a_non_norm_iff_b_splits() {
        for (p, v_dd) in [(3u64, 1u32), (5, 1), (2, 2), (2, 3)] {
            let a = LocalAlgebra::for_field(&field(p, Ramification::Ramified, v_dd, 0)).unwrap();
            assert!(!is_norm_unit(&a, a.epsilon), "p={p} v_D={v_dd}");
            assert!(is_norm_unit(&a, 1));
        }
    }

    #[test]
    fn order_membership_contains_lattice_and_excludes_scaled() {
        let a = LocalAlgebra::for_field(&field(3, Ramification::Ramified, 1, 0)).unwrap();
        assert!(a.in_split_order(&elt(1, 2), &elt(2, 1)));
        // z ↦ (z − z̄)/ω preserves O_E although 1/ω ∉ O_E
        let w_inv = a.inv(&elt(0, 1)).unwrap();
        let neg = a.scale(&w_inv, &Rational::from(-1));
        assert!(!a.in_split_order(&w_inv, &elt(0, 0)));
        assert!(a.in_split_order(&w_inv, &neg));
    }
}
