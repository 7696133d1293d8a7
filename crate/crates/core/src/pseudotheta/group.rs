//! GL₂(ℝ)⁺, its Iwasawa invariants, and the action of n(b)m(a)k(θ) on the
//! standard Gaussian.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::real::{bits_for, tolerance};
use crate::numerics::BigComplex;

/// [[a, b], [c, d]] with positive determinant.
#[derive(Clone, Debug)]
pub struct GL2RealElement {
    pub m: [Float; 4],
    digits: u32,
}

impl GL2RealElement {
    pub fn new(a: Float, b: Float, c: Float, d: Float, digits: u32) -> Result<Self> {
        let g = GL2RealElement { m: [a, b, c, d], digits };
        if g.det() <= 0 {
            return Err(Error::Domain("GL₂(ℝ) element must have positive determinant".into()));
        }
        Ok(g)
    }

    fn bits(&self) -> u32 {
        bits_for(self.digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn identity(digits: u32) -> Self {
        let b = bits_for(digits);
        let z = || Float::with_val(b, 0);
        let o = || Float::with_val(b, 1);
        GL2RealElement { m: [o(), z(), z(), o()], digits }
    }

    pub fn det(&self) -> Float {
        let b = self.bits();
        Float::with_val(b, &self.m[0] * &self.m[3]) - Float::with_val(b, &self.m[1] * &self.m[2])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let b = self.bits().max(o.bits());
        let e = |i: usize, j: usize, k: usize, l: usize| {
            Float::with_val(b, &self.m[i] * &o.m[j]) + Float::with_val(b, &self.m[k] * &o.m[l])
        };
        GL2RealElement {
            m: [e(0, 0, 1, 2), e(0, 1, 1, 3), e(2, 0, 3, 2), e(2, 1, 3, 3)],
            digits: self.digits.min(o.digits),
        }
    }

    /// n(b) = [[1, b], [0, 1]]
    pub fn n(b: Float, digits: u32) -> Self {
        Nak::new(b, Float::with_val(bits_for(digits), 1), Float::new(bits_for(digits)), digits)
            .unwrap()
            .matrix()
    }

    /// m(a) = diag(a, a⁻¹)
    pub fn m(a: Float, digits: u32) -> Result<Self> {
        Ok(Nak::new(Float::new(bits_for(digits)), a, Float::new(bits_for(digits)), digits)?.matrix())
    }

    /// k(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]
    pub fn k(theta: Float, digits: u32) -> Self {
        Nak::new(Float::new(bits_for(digits)), Float::with_val(bits_for(digits), 1), theta, digits)
            .unwrap()
            .matrix()
    }

    /// g_N = [[1, 0], [N, 1]]
    pub fn g_n(n: i64, digits: u32) -> Self {
        let b = bits_for(digits);
        GL2RealElement {
            m: [Float::with_val(b, 1), Float::with_val(b, 0), Float::with_val(b, n), Float::with_val(b, 1)],
            digits,
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> Float {
        let b = self.bits();
        (0..4)
            .map(|i| Float::with_val(b, &self.m[i] - &o.m[i]).abs())
            .fold(Float::with_val(b, 0), |a, x| if x > a { x } else { a })
    }
}

/// g = n(b)·m(a)·k(θ) ∈ SL₂(ℝ), a > 0.
#[derive(Clone, Debug)]
pub struct Nak {
    pub b: Float,
    pub a: Float,
    pub theta: Float,
    digits: u32,
}

impl Nak {
    pub fn new(b: Float, a: Float, theta: Float, digits: u32) -> Result<Self> {
        if a <= 0 {
            return Err(Error::Domain("m(a) needs a > 0".into()));
        }
        Ok(Nak { b, a, theta, digits })
    }

    pub fn identity(digits: u32) -> Self {
        let bits = bits_for(digits);
        Nak { b: Float::new(bits), a: Float::with_val(bits, 1), theta: Float::new(bits), digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn matrix(&self) -> GL2RealElement {
        let bits = bits_for(self.digits);
        let (s, c) = Float::with_val(bits, &self.theta).sin_cos(Float::new(bits));
        let ainv = Float::with_val(bits, self.a.recip_ref());
        // n(b)m(a) = [[a, b/a], [0, 1/a]]
        let top = [self.a.clone(), Float::with_val(bits, &self.b * &ainv)];
        let e = |x: &Float, y: &Float| Float::with_val(bits, x * y);
        GL2RealElement {
            m: [
                e(&top[0], &c) - e(&top[1], &s),
                e(&top[0], &s) + e(&top[1], &c),
                -e(&ainv, &s),
                e(&ainv, &c),
            ],
            digits: self.digits,
        }
    }

    /// ρ(g)δ(g) = a·e^{iθ}
    pub fn rho_delta(&self) -> BigComplex {
        BigComplex::cis(&self.theta, self.digits).scale(&self.a)
    }
}

#[derive(Clone, Debug)]
pub struct IwasawaData {
    pub delta: Float,
    pub rho: BigComplex,
    pub theta: Float,
    /// g = [[a, b], [0, d]]·k(θ), a, d > 0
    pub upper: [Float; 3],
}

impl IwasawaData {
    pub fn rho_delta(&self) -> BigComplex {
        self.rho.scale(&self.delta)
    }

    pub fn reconstruct(&self, digits: u32) -> GL2RealElement {
        let bits = bits_for(digits);
        let [a, b, d] = &self.upper;
        let (s, c) = Float::with_val(bits, &self.theta).sin_cos(Float::new(bits));
        let e = |x: &Float, y: &Float| Float::with_val(bits, x * y);
        GL2RealElement {
            m: [e(a, &c) - e(b, &s), e(a, &s) + e(b, &c), -e(d, &s), e(d, &c)],
            digits,
        }
    }

    /// The SL₂ part n(b/d)·m(√(a/d)); refused unless det g = 1 to working
    /// precision (the scalar and similitude parts act outside the supported
    /// subgroup).
    pub fn to_nak(&self, digits: u32) -> Result<Nak> {
        let bits = bits_for(digits);
        let [a, b, d] = &self.upper;
        let det = Float::with_val(bits, a * d);
        if Float::with_val(bits, &det - 1u32).abs() > tolerance(digits, 6) {
            return Err(Error::Refused(format!(
                "the Weil action is implemented on N·A·K = SL₂(ℝ) only; det g = {}",
                det.to_f64()
            )));
        }
        Nak::new(Float::with_val(bits, b / d), self.delta.clone(), self.theta.clone(), digits)
    }
}

/// Iwasawa decomposition g = [[a, b], [0, d]]·k(θ) with a > 0.
pub fn iwasawa(g: &GL2RealElement) -> Result<IwasawaData> {
    let digits = g.digits();
    let bits = bits_for(digits) + 16;
    let det = g.det();
    if det <= 0 {
        return Err(Error::Domain("Iwasawa decomposition is taken for det g > 0".into()));
    }
    let [ga, gb, gc, gd] = &g.m;
    let d = (Float::with_val(bits, gc.square_ref()) + Float::with_val(bits, gd.square_ref())).sqrt();
    let sin = -Float::with_val(bits, gc / &d);
    let cos = Float::with_val(bits, gd / &d);
    let theta = Float::with_val(bits, sin.atan2_ref(&cos));
    let a = Float::with_val(bits, &det / &d);
    let b = Float::with_val(bits, gb * &cos) - Float::with_val(bits, ga * &sin);
    let delta = Float::with_val(bits, &a / &d).sqrt();
    Ok(IwasawaData {
        delta,
        rho: BigComplex::cis(&theta, digits),
        theta,
        upper: [a, b, d],
    })
}

/// r(n(b)m(a)k(θ))φ(x, u) for the standard Gaussian on a rank-`rank` space,
/// as a function of q(x):
///   e^{2πi b u q}·e^{i(rank/2)θ}·a^{rank/2}·e^{−2π u a² q}.
pub fn gaussian_weight(g: &Nak, q: &Rational, u: &Rational, rank: usize) -> BigComplex {
    let digits = g.digits;
    let bits = bits_for(digits) + 16;
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let uq = Float::with_val(bits, &Rational::from(u * q));
    let phase = Float::with_val(bits, &two_pi * &g.b) * &uq
        + Float::with_val(bits, &g.theta * (rank as u32)) / 2u32;
    let a2 = Float::with_val(bits, g.a.square_ref());
    let modulus = Float::with_val(bits, (&g.a).pow(rank as u32 / 2)) * (-(two_pi * a2 * uq)).exp();
    BigComplex::from_polar(&modulus, &phase, digits)
}

/// r(g)φ(x, u) for x ∈ V with Gram matrix `gram`; u must be positive.
pub fn weil_action(
    g: &Nak,
    x: &[i64],
    u: &Rational,
    gram: &super::lattice::Gram,
) -> Result<BigComplex> {
    if *u <= 0 {
        // the standard archimedean component carries 1_{ℝ₊}(u)
        return Ok(BigComplex::zero(g.digits));
    }
    if x.len() != gram.dim() {
        return Err(Error::InvalidInput("vector length does not match the Gram matrix".into()));
    }
    Ok(gaussian_weight(g, &Rational::from(gram.q(x)), u, gram.dim()))
}

/// Parse a real number: integer, decimal, p/q, or a rational multiple of pi
/// ("pi", "-pi/3", "2pi/3", "0.5*pi").
pub fn parse_real(s: &str, digits: u32) -> Result<Float> {
    let bits = bits_for(digits);
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse real number '{s}'"));
    if let Some(pos) = t.find("pi") {
        let (coef, rest) = (&t[..pos], &t[pos + 2..]);
        let coef = coef.trim_end_matches('*');
        let c = match coef {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            _ => parse_rational(coef).ok_or_else(bad)?,
        };
        let den = match rest.strip_prefix('/') {
            Some(d) => parse_rational(d).ok_or_else(bad)?,
            None if rest.is_empty() => Rational::from(1),
            None => return Err(bad()),
        };
        if den == 0 {
            return Err(bad());
        }
        return Ok(Float::with_val(bits, Constant::Pi) * Float::with_val(bits, c / den));
    }
    Ok(Float::with_val(bits, parse_rational(&t).ok_or_else(bad)?))
}

/// Exact parse of an integer, decimal ("−1.25", "3e-2") or fraction.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        return if d == 0 { None } else { Some(n / d) };
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let int: rug::Integer = digits.parse().ok()?;
    let scale = exp - fp.len() as i32;
    let mut q = Rational::from(int);
    let ten = Rational::from(10);
    if scale >= 0 {
        q *= ten.pow(scale as u32);
    } else {
        q /= ten.pow((-scale) as u32);
    }
    Some(if neg { -q } else { q })
}

/// Parse a word like "n(1/2)m(2)k(pi/3)" or "g(5)" (g_N) into a matrix.
pub fn parse_group_word(word: &str, digits: u32) -> Result<GL2RealElement> {
    let mut g = GL2RealElement::identity(digits);
    let w: String = word.chars().filter(|c| !c.is_whitespace() && *c != '*' && *c != '·').collect();
    let mut rest = w.as_str();
    if rest.is_empty() || rest == "1" {
        return Ok(g);
    }
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::InvalidInput(format!("expected '(' in group word '{word}'")))?;
        let close = rest
            .find(')')
            .ok_or_else(|| Error::InvalidInput(format!("unbalanced parentheses in '{word}'")))?;
        let name = &rest[..open];
        let arg = &rest[open + 1..close];
        let f = match name {
            "n" => GL2RealElement::n(parse_real(arg, digits)?, digits),
            "m" => GL2RealElement::m(parse_real(arg, digits)?, digits)?,
            "k" => GL2RealElement::k(parse_real(arg, digits)?, digits),
            "g" => GL2RealElement::g_n(
                arg.parse().map_err(|_| Error::InvalidInput(format!("g(N) needs an integer, got '{arg}'")))?,
                digits,
            ),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown generator '{name}' (use n(b), m(a), k(θ), g(N))"
                )))
            }
        };
        g = g.mul(&f);
        rest = &rest[close + 1..];
    }
    Ok(g)
}
