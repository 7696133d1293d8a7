//! Exact values of the form q₀ + Σ q_b·log b.
//!
//! Bases are stored fully factored into primes (any leftover cofactor that
//! trial division cannot split is reduced to its primitive root), so two
//! values are equal exactly when their representations are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::real::{bits_for, BigReal};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogLinearValue {
    constant: Rational,
    terms: BTreeMap<Integer, Rational>,
}

/// Factor n > 0 into (base, exponent) pairs with every base prime or a
/// non-perfect-power cofactor.
fn canonical_factors(n: &Integer) -> Vec<(Integer, u32)> {
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut p = 2u32;
    while p <= TRIAL_LIMIT && Integer::from(p) * p <= m {
        if m.is_divisible_u(p) {
            let mut e = 0;
            while m.is_divisible_u(p) {
                m /= p;
                e += 1;
            }
            out.push((Integer::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let (root, e) = primitive_root(&m);
        out.push((root, e));
    }
    out
}

/// Write m = r^e with e maximal.
fn primitive_root(m: &Integer) -> (Integer, u32) {
    let bits = m.significant_bits();
    for e in (2..=bits).rev() {
        let r = m.clone().root(e);
        if r.clone().pow(e) == *m {
            let (rr, ee) = primitive_root(&r);
            return (rr, ee * e);
        }
    }
    (m.clone(), 1)
}

impl LogLinearValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: Rational) -> Self {
        LogLinearValue {
            constant: q,
            terms: BTreeMap::new(),
        }
    }

    /// log b for an integer b ≥ 1.
    pub fn log_int(b: u64) -> Self {
        Self::log_rational(&Rational::from(b)).expect("positive")
    }

    /// c·log b.
    pub fn log_times(b: u64, c: Rational) -> Self {
        Self::log_int(b).scale(&c)
    }

    /// log of a positive rational.
    pub fn log_rational(x: &Rational) -> Result<Self> {
        if *x <= 0 {
            return Err(Error::Domain(format!("log of non-positive rational {x}")));
        }
        let mut v = LogLinearValue::zero();
        for (b, e) in canonical_factors(x.numer()) {
            v.add_term(b, Rational::from(e));
        }
        for (b, e) in canonical_factors(x.denom()) {
            v.add_term(b, -Rational::from(e));
        }
        Ok(v)
    }

    fn add_term(&mut self, base: Integer, c: Rational) {
        let entry = self.terms.entry(base.clone()).or_default();
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&base);
        }
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Coefficient of log b for a canonical (prime) base b.
    pub fn coefficient(&self, b: u64) -> Rational {
        self.terms
            .get(&Integer::from(b))
            .cloned()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Integer, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        LogLinearValue {
            constant: Rational::from(&self.constant * c),
            terms: self
                .terms
                .iter()
                .map(|(b, q)| (b.clone(), Rational::from(q * c)))
                .collect(),
        }
    }

    /// Re-canonicalize (idempotent; values built through the public API are
    /// already canonical).
    pub fn canonicalize(&self) -> Self {
        let mut out = LogLinearValue::rational(self.constant.clone());
        for (b, c) in &self.terms {
            for (p, e) in canonical_factors(b) {
                out.add_term(p, c * Rational::from(e));
            }
        }
        out
    }

    pub fn to_bigreal(&self, digits: u32) -> BigReal {
        let bits = bits_for(digits);
        let mut acc = Float::with_val(bits, &self.constant);
        for (b, c) in &self.terms {
            let lb = Float::with_val(bits, b).ln();
            acc += lb * Float::with_val(bits, c);
        }
        BigReal::new(acc, digits)
    }
}

impl Add for &LogLinearValue {
    type Output = LogLinearValue;
    fn add(self, rhs: &LogLinearValue) -> LogLinearValue {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl Add for LogLinearValue {
    type Output = LogLinearValue;
    fn add(self, rhs: LogLinearValue) -> LogLinearValue {
        &self + &rhs
    }
}

impl Neg for &LogLinearValue {
    type Output = LogLinearValue;
    fn neg(self) -> LogLinearValue {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for LogLinearValue {
    type Output = LogLinearValue;
    fn neg(self) -> LogLinearValue {
        -&self
    }
}

impl Sub for &LogLinearValue {
    type Output = LogLinearValue;
    fn sub(self, rhs: &LogLinearValue) -> LogLinearValue {
        self + &(-rhs)
    }
}

impl Sub for LogLinearValue {
    type Output = LogLinearValue;
    fn sub(self, rhs: LogLinearValue) -> LogLinearValue {
        &self - &rhs
    }
}

impl Mul<&Rational> for &LogLinearValue {
    type Output = LogLinearValue;
    fn mul(self, rhs: &Rational) -> LogLinearValue {
        self.scale(rhs)
    }
}

impl std::iter::Sum for LogLinearValue {
    fn sum<I: Iterator<Item = LogLinearValue>>(iter: I) -> Self {
        iter.fold(LogLinearValue::zero(), |a, b| a + b)
    }
}

impl fmt::Display for LogLinearValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.constant != 0 {
            parts.push(self.constant.to_string());
        }
        for (b, c) in &self.terms {
            let term = if *c == 1 {
                format!("log {b}")
            } else if *c == -1 {
                format!("-log {b}")
            } else {
                format!("{c}*log {b}")
            };
            parts.push(term);
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{s}")
    }
}
