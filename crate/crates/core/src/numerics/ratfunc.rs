//! Rational functions in X = N^(-s) with exact rational coefficients, and
//! their logarithmic s-derivative at s = 0.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Rational};

use super::loglinear::LogLinearValue;
use super::real::{bits_for, BigReal};
use crate::error::{Error, Result};

/// Dense polynomial, coefficients from degree 0 upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| *x == 0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    /// X^k for k ≥ 0.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::new(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// 1 − X
    pub fn one_minus_x() -> Self {
        Poly::new(vec![Rational::from(1), Rational::from(-1)])
    }

    /// 1 + c·X
    pub fn one_plus(c: Rational) -> Self {
        Poly::new(vec![Rational::from(1), c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![Rational::new(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|x| Rational::from(x * c)).collect())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Rational::from(-1))
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::new(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(v)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.0.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::with_val(x.prec(), 0);
        for c in self.0.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    /// Strip factors (X − 1); returns (multiplicity, cofactor).
    pub fn split_root_one(&self) -> (u32, Poly) {
        let mut p = self.clone();
        let mut k = 0;
        if p.is_zero() {
            return (0, p);
        }
        while p.eval(&Rational::from(1)) == 0 {
            // synthetic division by (X − 1)
            let n = p.0.len();
            let mut q = vec![Rational::new(); n - 1];
            let mut carry = Rational::new();
            for i in (1..n).rev() {
                carry += &p.0[i];
                q[i - 1] = carry.clone();
            }
            p = Poly::new(q);
            k += 1;
        }
        (k, p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*X"),
                _ => format!("{c}*X^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// f(X) = num(X)/den(X), X = N^(-s).
#[derive(Clone, Debug)]
pub struct RationalFunctionX {
    num: Poly,
    den: Poly,
    base: u64,
}

impl RationalFunctionX {
    pub fn new(num: Poly, den: Poly, base: u64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if base < 2 {
            return Err(Error::InvalidInput(format!("base {base} < 2")));
        }
        Ok(RationalFunctionX { num, den, base })
    }

    pub fn from_poly(p: Poly, base: u64) -> Self {
        RationalFunctionX::new(p, Poly::one(), base).expect("valid")
    }

    pub fn constant(c: Rational, base: u64) -> Self {
        Self::from_poly(Poly::constant(c), base)
    }

    pub fn zero(base: u64) -> Self {
        Self::from_poly(Poly::zero(), base)
    }

    /// X^k for any integer k.
    pub fn x_pow(k: i64, base: u64) -> Self {
        let one = Rational::from(1);
        if k >= 0 {
            Self::from_poly(Poly::monomial(k as usize, one), base)
        } else {
            RationalFunctionX::new(Poly::one(), Poly::monomial((-k) as usize, one), base)
                .expect("valid")
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check_base(&self, o: &Self) {
        assert_eq!(self.base, o.base, "mixing rational functions of different bases");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_base(o);
        if self.den == o.den {
            return RationalFunctionX {
                num: self.num.add(&o.num),
                den: self.den.clone(),
                base: self.base,
            };
        }
        RationalFunctionX {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
            base: self.base,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rational::from(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_base(o);
        RationalFunctionX {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
            base: self.base,
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RationalFunctionX {
            num: self.num.mul(p),
            den: self.den.clone(),
            base: self.base,
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check_base(o);
        RationalFunctionX::new(self.num.mul(&o.den), self.den.mul(&o.num), self.base)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunctionX {
            num: self.num.scale(c),
            den: self.den.clone(),
            base: self.base,
        }
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, o: &Self) -> bool {
        self.base == o.base && self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// f(N^(-s)) at a real s.
    pub fn eval_at_s(&self, s: &Float) -> Result<Float> {
        let bits = s.prec();
        let ln_n = Float::with_val(bits, self.base).ln();
        let x = Float::with_val(bits, -(ln_n * s)).exp();
        let d = self.den.eval_float(&x);
        if d.is_zero() {
            return Err(Error::Domain(format!("denominator vanishes at s = {s}")));
        }
        Ok(self.num.eval_float(&x) / d)
    }

    /// f at X = 1 after cancelling common (1 − X) factors.
    pub fn value_at_one(&self) -> Result<Rational> {
        let (a, p) = self.num.split_root_one();
        let (b, q) = self.den.split_root_one();
        if p.is_zero() {
            return Ok(Rational::new());
        }
        if b > a {
            return Err(Error::Pole(format!("(1 - X)^{}", b - a)));
        }
        if a > b {
            return Ok(Rational::new());
        }
        Ok(p.eval(&Rational::from(1)) / q.eval(&Rational::from(1)))
    }

    /// f′(1) exactly, cancelling (1 − X) factors first.
    pub fn derivative_at_one(&self) -> Result<Rational> {
        let one = Rational::from(1);
        if self.num.is_zero() {
            return Ok(Rational::new());
        }
        let (a, p) = self.num.split_root_one();
        let (b, q) = self.den.split_root_one();
        if b > a {
            return Err(Error::Pole(format!("(1 - X)^{}", b - a)));
        }
        let q1 = q.eval(&one);
        match a - b {
            0 => {
                let p1 = p.eval(&one);
                let dp = p.derivative().eval(&one);
                let dq = q.derivative().eval(&one);
                Ok((dp * &q1 - p1 * dq) / (Rational::from(&q1 * &q1)))
            }
            // f = (X − 1)·p/q
            1 => Ok(p.eval(&one) / q1),
            _ => Ok(Rational::new()),
        }
    }
}

impl fmt::Display for RationalFunctionX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})  [X = {}^(-s)]", self.num, self.den, self.base)
    }
}

/// d/ds f(N^(-s)) at s = 0, i.e. −log N · f′(1), exactly.
pub fn rf_log_derivative(f: &RationalFunctionX) -> Result<LogLinearValue> {
    let d = f.derivative_at_one()?;
    Ok(LogLinearValue::log_times(f.base, -d))
}

/// Centered finite-difference derivative of f(N^(-s)) at s = 0 (test oracle).
pub fn rf_log_derivative_numeric(f: &RationalFunctionX, digits: u32) -> Result<BigReal> {
    // Work at doubled precision with a fourth-order stencil.
    let bits = bits_for(2 * digits);
    let h = Float::with_val(bits, 10).pow(-(digits as i32) / 3);
    let h2 = Float::with_val(bits, &h * 2);
    let fp1 = f.eval_at_s(&h)?;
    let fm1 = f.eval_at_s(&Float::with_val(bits, -&h))?;
    let fp2 = f.eval_at_s(&h2)?;
    let fm2 = f.eval_at_s(&Float::with_val(bits, -&h2))?;
    let num = (fm2 - fp2) + Float::with_val(bits, fp1 - fm1) * 8;
    let d = num / (h * 12);
    Ok(BigReal::new(d, digits))
}
