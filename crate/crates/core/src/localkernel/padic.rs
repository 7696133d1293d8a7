//! p-adic valuations of rationals, truncated p-adic numbers, and exact Haar
//! volumes of subsets of ℤ_p² cut out by valuation conditions on integer
//! quadratic polynomials.
//!
//! The volume counter refines residue classes (A₀ + p^j X, B₀ + p^j Y) and
//! decides a class as soon as the valuation of every constraint polynomial is
//! forced on the whole class. It uses no knowledge of the sets beyond the
//! polynomials themselves, which is what makes it usable as an oracle.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// v_p(n), or None for n = 0.
pub fn vp_int(n: &Integer, p: u64) -> Option<i32> {
    if *n == 0 {
        return None;
    }
    let mut m = n.clone().abs();
    let mut v = 0;
    while m.is_divisible_u(p as u32) {
        m /= p as u32;
        v += 1;
    }
    Some(v)
}

/// v_p(q), or None for q = 0.
pub fn vp(q: &Rational, p: u64) -> Option<i32> {
    let a = vp_int(q.numer(), p)?;
    let b = vp_int(q.denom(), p).unwrap_or(0);
    Some(a - b)
}

/// v_p(q) with +∞ encoded as i32::MAX.
pub fn vp_or_inf(q: &Rational, p: u64) -> i32 {
    vp(q, p).unwrap_or(i32::MAX)
}

pub fn pow_rat(p: u64, e: i32) -> Rational {
    let b = Integer::from(p).pow(e.unsigned_abs());
    if e >= 0 {
        Rational::from(b)
    } else {
        Rational::from((Integer::from(1), b))
    }
}

/// x ∈ ℤ_p.
pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    vp_or_inf(x, p) >= 0
}

/// A p-adic number known modulo p^(val + precision): p^val · Σ dᵢ pⁱ with
/// d₀ ≠ 0 (or the zero element known modulo p^precision).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicApprox {
    p: u64,
    val: i32,
    precision: u32,
    digits: Vec<u64>,
    zero: bool,
}

fn unit_residue(x: &Rational, p: u64, k: u32) -> Integer {
    // x is a p-adic unit; return x mod p^k in [0, p^k).
    let m = Integer::from(p).pow(k);
    let den = Integer::from(x.denom() % &m);
    let inv = den.invert(&m).expect("unit denominator");
    let num = Integer::from(x.numer() % &m);
    let r = num * inv;
    let mut r = r % &m;
    if r < 0 {
        r += &m;
    }
    r
}

impl PadicApprox {
    pub fn from_rational(x: &Rational, p: u64, precision: u32) -> Self {
        match vp(x, p) {
            None => PadicApprox {
                p,
                val: 0,
                precision,
                digits: vec![0; precision as usize],
                zero: true,
            },
            Some(v) => {
                let unit = x * pow_rat(p, -v);
                let mut r = unit_residue(&unit, p, precision);
                let mut digits = Vec::with_capacity(precision as usize);
                for _ in 0..precision {
                    let d = Integer::from(&r % p);
                    digits.push(d.to_u64().expect("digit"));
                    r /= p;
                }
                PadicApprox {
                    p,
                    val: v,
                    precision,
                    digits,
                    zero: false,
                }
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> Option<i32> {
        if self.zero {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// ϖ-adic digits of the unit part, least significant first.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Exponent k with the element known modulo p^k.
    pub fn absolute_precision(&self) -> i32 {
        if self.zero {
            self.precision as i32
        } else {
            self.val + self.precision as i32
        }
    }

    /// The truncated value p^val · Σ dᵢ pⁱ.
    pub fn to_rational(&self) -> Rational {
        if self.zero {
            return Rational::new();
        }
        let mut acc = Integer::new();
        for d in self.digits.iter().rev() {
            acc *= self.p;
            acc += *d;
        }
        Rational::from(acc) * pow_rat(self.p, self.val)
    }

    fn check_prime(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            return Err(Error::InvalidInput(format!(
                "mixing p-adic numbers for p = {} and p = {}",
                self.p, o.p
            )));
        }
        Ok(())
    }

    fn truncated(x: &Rational, p: u64, abs_prec: i32) -> Self {
        match vp(x, p) {
            Some(v) if v < abs_prec => Self::from_rational(x, p, (abs_prec - v) as u32),
            _ => PadicApprox {
                p,
                val: 0,
                precision: abs_prec.max(0) as u32,
                digits: vec![0; abs_prec.max(0) as usize],
                zero: true,
            },
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_prime(o)?;
        let prec = self.absolute_precision().min(o.absolute_precision());
        let s = self.to_rational() + o.to_rational();
        Ok(Self::truncated(&s, self.p, prec))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_prime(o)?;
        let va = self.valuation().unwrap_or(self.absolute_precision());
        let vb = o.valuation().unwrap_or(o.absolute_precision());
        let prec = (va + o.absolute_precision()).min(vb + self.absolute_precision());
        let s = self.to_rational() * o.to_rational();
        Ok(Self::truncated(&s, self.p, prec))
    }
}

/// Integer quadratic polynomial c₀₀ + c₁₀A + c₀₁B + c₂₀A² + c₁₁AB + c₀₂B².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quad2 {
    pub c: [i128; 6],
}

impl Quad2 {
    pub fn new(c00: i128, c10: i128, c01: i128, c20: i128, c11: i128, c02: i128) -> Self {
        Quad2 {
            c: [c00, c10, c01, c20, c11, c02],
        }
    }

    pub fn linear(c00: i128, c10: i128, c01: i128) -> Self {
        Self::new(c00, c10, c01, 0, 0, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValCond {
    AtLeast(i32),
    Exactly(i32),
}

impl ValCond {
    fn threshold(self) -> i32 {
        match self {
            ValCond::AtLeast(k) | ValCond::Exactly(k) => k,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub poly: Quad2,
    pub cond: ValCond,
}

impl Constraint {
    pub fn new(poly: Quad2, cond: ValCond) -> Self {
        Constraint { poly, cond }
    }
}

/// Convert an exact integer to i128, failing loudly on overflow.
pub fn to_i128(x: &Integer) -> Result<i128> {
    x.to_i128().ok_or_else(|| {
        Error::InsufficientPrecision {
            what: format!("coefficient {x} exceeds 128-bit counter range"),
            required: 128,
        }
    })
}

fn v128(x: i128, p: i128) -> i32 {
    if x == 0 {
        return i32::MAX;
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    In,
    Out,
    Open,
}

fn overflow() -> Error {
    Error::InsufficientPrecision {
        what: "p-adic volume counter overflowed 128-bit arithmetic".into(),
        required: 128,
    }
}

fn judge(c: &Constraint, a0: i128, b0: i128, pj: i128, p: i128) -> Result<Verdict> {
    let [c00, c10, c01, c20, c11, c02] = c.poly.c;
    let mul = |x: i128, y: i128| x.checked_mul(y).ok_or_else(overflow);
    let add = |x: i128, y: i128| x.checked_add(y).ok_or_else(overflow);
    // constant term g(0, 0)
    let mut g0 = c00;
    g0 = add(g0, mul(c10, a0)?)?;
    g0 = add(g0, mul(c01, b0)?)?;
    g0 = add(g0, mul(mul(c20, a0)?, a0)?)?;
    g0 = add(g0, mul(mul(c11, a0)?, b0)?)?;
    g0 = add(g0, mul(mul(c02, b0)?, b0)?)?;
    let gx = mul(pj, add(add(c10, mul(2 * c20, a0)?)?, mul(c11, b0)?)?)?;
    let gy = mul(pj, add(add(c01, mul(c11, a0)?)?, mul(2 * c02, b0)?)?)?;
    let pj2 = mul(pj, pj)?;
    let gxx = mul(pj2, c20)?;
    let gxy = mul(pj2, c11)?;
    let gyy = mul(pj2, c02)?;
    let m = [gx, gy, gxx, gxy, gyy]
        .iter()
        .map(|&x| v128(x, p))
        .min()
        .unwrap();
    let v0 = v128(g0, p);
    let k = c.cond.threshold();
    Ok(if v0 < m {
        let ok = match c.cond {
            ValCond::AtLeast(k) => v0 >= k,
            ValCond::Exactly(k) => v0 == k,
        };
        if ok {
            Verdict::In
        } else {
            Verdict::Out
        }
    } else {
        // v(g) ≥ m everywhere on the class, and v(g) varies.
        match c.cond {
            ValCond::AtLeast(_) if m >= k => Verdict::In,
            ValCond::Exactly(_) if m > k => Verdict::Out,
            _ => Verdict::Open,
        }
    })
}

/// Smallest depth at which every constraint is certainly decided.
pub fn decision_depth(constraints: &[Constraint]) -> u32 {
    constraints
        .iter()
        .map(|c| c.cond.threshold().max(0) as u32 + 1)
        .max()
        .unwrap_or(0)
}

/// Haar measure (vol ℤ_p² = 1) of {(A, B) ∈ ℤ_p² : every constraint holds}.
/// Fails if some residue class is still undecided at `max_depth`.
pub fn count_volume(p: u64, constraints: &[Constraint], max_depth: u32) -> Result<Rational> {
    let pp = p as i128;
    let mut per_depth: Vec<u128> = vec![0; max_depth as usize + 1];
    let mut stack: Vec<(i128, i128, u32)> = vec![(0, 0, 0)];
    while let Some((a0, b0, j)) = stack.pop() {
        let pj = pp.checked_pow(j).ok_or_else(overflow)?;
        let mut all_in = true;
        let mut out = false;
        for c in constraints {
            match judge(c, a0, b0, pj, pp)? {
                Verdict::In => {}
                Verdict::Out => {
                    out = true;
                    break;
                }
                Verdict::Open => all_in = false,
            }
        }
        if out {
            continue;
        }
        if all_in {
            per_depth[j as usize] += 1;
            continue;
        }
        if j >= max_depth {
            return Err(Error::InsufficientPrecision {
                what: format!("p-adic enumeration undecided at depth {max_depth}"),
                required: decision_depth(constraints).max(max_depth + 1) as u64,
            });
        }
        for s in 0..pp {
            for t in 0..pp {
                stack.push((a0 + s * pj, b0 + t * pj, j + 1));
            }
        }
    }
    let mut total = Rational::new();
    for (j, &cnt) in per_depth.iter().enumerate() {
        if cnt > 0 {
            total += Rational::from(Integer::from(cnt)) * pow_rat(p, -2 * j as i32);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&q(18, 5), 3), Some(2));
        assert_eq!(vp(&q(5, 18), 3), Some(-2));
        assert_eq!(vp(&q(0, 1), 3), None);
    }

    #[test]
    fn padic_round_trip_and_ring_ops() {
        let x = PadicApprox::from_rational(&q(7, 4), 3, 6);
        assert_eq!(x.valuation(), Some(0));
        // 7/4 ≡ x mod 3^6
        let t = x.to_rational();
        let diff = Rational::from(&t - q(7, 4));
        assert!(vp(&diff, 3).unwrap() >= 6);
        let y = PadicApprox::from_rational(&q(9, 1), 3, 4);
        let s = x.mul(&y).unwrap();
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.absolute_precision(), 6);
        let z = x.add(&PadicApprox::from_rational(&q(-7, 4), 3, 6)).unwrap();
        assert_eq!(z.valuation(), None);
    }

    #[test]
    fn volume_of_simple_sets() {
        // {A ≡ 0 mod p}: volume 1/p
        let c = [Constraint::new(Quad2::linear(0, 1, 0), ValCond::AtLeast(1))];
        assert_eq!(count_volume(3, &c, 4).unwrap(), q(1, 3));
        // {v(AB) ≥ 1} in ℤ_p²: 1 − (1 − 1/p)²
        let c = [Constraint::new(Quad2::new(0, 0, 0, 0, 1, 0), ValCond::AtLeast(1))];
        assert_eq!(count_volume(5, &c, 4).unwrap(), q(9, 25));
        // units of ℤ_p[i] for p = 3 (inert): A² + B² a unit → 1 − 1/9
        let c = [Constraint::new(Quad2::new(0, 0, 0, 1, 0, 1), ValCond::Exactly(0))];
        assert_eq!(count_volume(3, &c, 4).unwrap(), q(8, 9));
    }

    #[test]
    fn undecided_reports_required_depth() {
        let c = [Constraint::new(Quad2::new(0, 0, 0, 0, 1, 0), ValCond::AtLeast(5))];
        assert!(matches!(
            count_volume(2, &c, 2),
            Err(Error::InsufficientPrecision { .. })
        ));
    }
}
