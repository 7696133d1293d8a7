//! Precision-tagged real and complex numbers on top of MPFR.
//!
//! Every value remembers the decimal precision it was computed at; binary
//! operations report the smaller of the two operand precisions so a result
//! never claims more digits than its inputs carry.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Guard bits carried on top of the requested decimal precision.
const GUARD_BITS: u32 = 64;

/// Binary precision used internally for `digits` decimal digits.
pub fn bits_for(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// 10^(-k) at the working precision for `digits`.
pub fn ten_pow_neg(k: i32, digits: u32) -> Float {
    Float::with_val(bits_for(digits), 10).pow(-k)
}

/// Tolerance 10^(-digits + slack).
pub fn tolerance(digits: u32, slack: i32) -> Float {
    ten_pow_neg(digits as i32 - slack, digits)
}

pub fn pi(digits: u32) -> Float {
    Float::with_val(bits_for(digits), Constant::Pi)
}

pub fn euler_gamma(digits: u32) -> Float {
    Float::with_val(bits_for(digits), Constant::Euler)
}

pub fn rational_to_float(q: &Rational, digits: u32) -> Float {
    Float::with_val(bits_for(digits), q)
}

#[derive(Clone, Debug)]
pub struct BigReal {
    value: Float,
    digits: u32,
}

impl BigReal {
    pub fn new(value: Float, digits: u32) -> Self {
        let mut value = value;
        let bits = bits_for(digits);
        if value.prec() < bits {
            value.set_prec(bits);
        }
        BigReal { value, digits }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        BigReal::new(rational_to_float(q, digits), digits)
    }

    pub fn from_i64(x: i64, digits: u32) -> Self {
        BigReal::new(Float::with_val(bits_for(digits), x), digits)
    }

    pub fn zero(digits: u32) -> Self {
        BigReal::from_i64(0, digits)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_value(self) -> Float {
        self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(&self) -> BigReal {
        BigReal::new(self.value.clone().abs(), self.digits)
    }

    /// |self| < 10^(-k)
    pub fn abs_below_pow10(&self, k: i32) -> bool {
        let t = ten_pow_neg(k, self.digits);
        self.value.clone().abs() < t
    }

    /// Base-10 exponent of |self|, or None for zero.
    pub fn log10_abs(&self) -> Option<f64> {
        if self.value.is_zero() {
            return None;
        }
        let a = self.value.clone().abs();
        let l = a.log10();
        Some(l.to_f64())
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self) -> String {
        format_float(&self.value, self.digits as usize)
    }

    pub fn to_decimal_with(&self, sig: usize) -> String {
        format_float(&self.value, sig)
    }
}

pub fn format_float(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(sig.max(1)))
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                let digits = self.digits.min(rhs.digits);
                let bits = self.value.prec().max(rhs.value.prec());
                let mut v = Float::with_val(bits, &self.value);
                v = $tr::$m(v, &rhs.value);
                BigReal::new(v, digits)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                $tr::$m(&self, &rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::new(-self.value, self.digits)
    }
}

/// Complex number as a pair of MPFR floats (no MPC dependency).
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
    digits: u32,
}

impl BigComplex {
    pub fn new(re: Float, im: Float, digits: u32) -> Self {
        let bits = bits_for(digits);
        let mut re = re;
        let mut im = im;
        if re.prec() < bits {
            re.set_prec(bits);
        }
        if im.prec() < bits {
            im.set_prec(bits);
        }
        BigComplex { re, im, digits }
    }

    pub fn from_real(re: Float, digits: u32) -> Self {
        let im = Float::with_val(bits_for(digits), 0);
        BigComplex::new(re, im, digits)
    }

    pub fn zero(digits: u32) -> Self {
        BigComplex::from_real(Float::with_val(bits_for(digits), 0), digits)
    }

    pub fn one(digits: u32) -> Self {
        BigComplex::from_real(Float::with_val(bits_for(digits), 1), digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn bits(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// e^{iθ}
    pub fn cis(theta: &Float, digits: u32) -> Self {
        let bits = bits_for(digits);
        let (s, c) = Float::with_val(bits, theta).sin_cos(Float::new(bits));
        BigComplex::new(c, s, digits)
    }

    /// r·e^{iθ}
    pub fn from_polar(r: &Float, theta: &Float, digits: u32) -> Self {
        let z = BigComplex::cis(theta, digits);
        z.scale(r)
    }

    pub fn exp(&self) -> Self {
        let r = self.re.clone().exp();
        BigComplex::from_polar(&r, &self.im, self.digits)
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -self.im.clone(), self.digits)
    }

    pub fn norm_sqr(&self) -> Float {
        let bits = self.bits();
        Float::with_val(bits, self.re.square_ref()) + Float::with_val(bits, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.bits(), &self.im).atan2(&self.re)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        BigComplex::new(self.abs().ln(), self.arg(), self.digits)
    }

    pub fn scale(&self, r: &Float) -> Self {
        BigComplex::new(
            Float::with_val(self.bits(), &self.re * r),
            Float::with_val(self.bits(), &self.im * r),
            self.digits,
        )
    }

    pub fn mul_ref(&self, o: &BigComplex) -> Self {
        let bits = self.bits().max(o.bits());
        let re = Float::with_val(bits, &self.re * &o.re) - Float::with_val(bits, &self.im * &o.im);
        let im = Float::with_val(bits, &self.re * &o.im) + Float::with_val(bits, &self.im * &o.re);
        BigComplex::new(re, im, self.digits.min(o.digits))
    }

    pub fn add_ref(&self, o: &BigComplex) -> Self {
        let bits = self.bits().max(o.bits());
        BigComplex::new(
            Float::with_val(bits, &self.re + &o.re),
            Float::with_val(bits, &self.im + &o.im),
            self.digits.min(o.digits),
        )
    }

    pub fn sub_ref(&self, o: &BigComplex) -> Self {
        let bits = self.bits().max(o.bits());
        BigComplex::new(
            Float::with_val(bits, &self.re - &o.re),
            Float::with_val(bits, &self.im - &o.im),
            self.digits.min(o.digits),
        )
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let bits = self.bits();
        BigComplex::new(
            Float::with_val(bits, &self.re / &n),
            Float::with_val(bits, -Float::with_val(bits, &self.im / &n)),
            self.digits,
        )
    }

    pub fn div_ref(&self, o: &BigComplex) -> Self {
        self.mul_ref(&o.recip())
    }

    pub fn powi(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = BigComplex::one(self.digits);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// Principal branch z^w for real w.
    pub fn powf(&self, w: &Float) -> Self {
        let r = self.abs();
        let theta = self.arg();
        let bits = self.bits();
        let rw = Float::with_val(bits, r.ln() * w).exp();
        let tw = Float::with_val(bits, theta * w);
        BigComplex::from_polar(&rw, &tw, self.digits)
    }

    pub fn to_decimal(&self) -> (String, String) {
        (
            format_float(&self.re, self.digits as usize),
            format_float(&self.im, self.digits as usize),
        )
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_decimal();
        write!(f, "({r}) + ({i})i")
    }
}
