//! Imaginary quadratic fields: fundamental discriminants, the Kronecker
//! character, reduced binary quadratic forms, Heegner points, and the CM-type
//! discriminant combinatorics.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::real::{bits_for, BigComplex};

pub const CLASS_GROUP_BOUND: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalDiscriminant(i64);

fn is_squarefree(mut n: i64) -> bool {
    n = n.abs();
    let mut p = 2i64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::InvalidInput(format!(
                "{d} is not a negative discriminant"
            )));
        }
        let r = d.rem_euclid(4);
        let ok = match r {
            1 => is_squarefree(d),
            0 => {
                let m = d / 4;
                matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
            }
            _ => false,
        };
        if ok {
            Ok(FundamentalDiscriminant(d))
        } else {
            Err(Error::InvalidInput(format!(
                "{d} is not a fundamental discriminant ({d} ≡ {r} mod 4{})",
                if r == 0 || r == 1 { ", not squarefree in the required sense" } else { "" }
            )))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Jacobi symbol (a/n) for odd n > 0.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    a = a.rem_euclid(n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol (d/n) for n ≥ 1.
pub fn kronecker(d: FundamentalDiscriminant, n: u64) -> Result<i32> {
    if n == 0 {
        return Err(Error::InvalidInput("kronecker needs n ≥ 1".into()));
    }
    let d = d.0;
    let mut n = n as i64;
    let mut result = 1;
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return Ok(0);
        }
        // (d/2) = 1 if d ≡ ±1 mod 8, −1 if d ≡ ±3 mod 8
        if matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    Ok(result * jacobi(d, n))
}

/// Primitive positive-definite form ax² + bxy + cy².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let ReducedForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (!(b.abs() == a || a == c) || b >= 0)
    }

    /// τ = (−b + √d)/(2a).
    pub fn heegner_point(&self) -> HeegnerPoint {
        HeegnerPoint {
            re: Rational::from((-self.b, 2 * self.a)),
            abs_disc: (4 * self.a * self.c - self.b * self.b) as u64,
            two_a: 2 * self.a as u64,
        }
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Exact description of τ = re + i·√abs_disc / two_a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegnerPoint {
    pub re: Rational,
    pub abs_disc: u64,
    pub two_a: u64,
}

impl HeegnerPoint {
    pub fn to_complex(&self, digits: u32) -> BigComplex {
        let bits = bits_for(digits);
        let im = Float::with_val(bits, self.abs_disc).sqrt() / self.two_a;
        BigComplex::new(Float::with_val(bits, &self.re), im, digits)
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroupData {
    pub d: FundamentalDiscriminant,
    pub h: u64,
    pub w: u64,
    pub forms: Vec<ReducedForm>,
    pub heegner_points: Vec<HeegnerPoint>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn unit_count(d: FundamentalDiscriminant) -> u64 {
    match d.0 {
        -4 => 4,
        -3 => 6,
        _ => 2,
    }
}

pub fn class_group(d: FundamentalDiscriminant) -> Result<ClassGroupData> {
    let dv = d.0;
    if dv.abs() > CLASS_GROUP_BOUND {
        return Err(Error::Refused(format!(
            "|d| = {} exceeds the class-group enumeration bound {CLASS_GROUP_BOUND}",
            dv.abs()
        )));
    }
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -dv {
        for b in -a + 1..=a {
            if (b - dv).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - dv;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = ReducedForm { a, b, c };
            if f.is_reduced() && gcd(gcd(a, b), c) == 1 {
                forms.push(f);
            }
        }
        a += 1;
    }
    forms.sort();
    let heegner_points = forms.iter().map(|f| f.heegner_point()).collect();
    Ok(ClassGroupData {
        d,
        h: forms.len() as u64,
        w: unit_count(d),
        forms,
        heegner_points,
    })
}

/// Exact element of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::new() }
    }

    pub fn one() -> Self {
        Self::real(Rational::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianRational {
            re: Rational::from(&self.re - &o.re),
            im: Rational::from(&self.im - &o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianRational {
            re: Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im),
            im: Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let n = Rational::from(o.re.square_ref()) + Rational::from(o.im.square_ref());
        if n == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let conj = GaussianRational {
            re: o.re.clone(),
            im: -o.im.clone(),
        };
        let p = self.mul(&conj);
        Ok(GaussianRational {
            re: p.re / &n,
            im: p.im / &n,
        })
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Roots x₀…x_{2g−1} with x_i^c = x_{i+g}, and a CM type Φ (0-based indices).
#[derive(Clone, Debug)]
pub struct CMTypeData {
    pub roots: Vec<GaussianRational>,
    pub phi: Vec<usize>,
}

fn check_roots(roots: &[GaussianRational]) -> Result<usize> {
    if roots.is_empty() || !roots.len().is_multiple_of(2) {
        return Err(Error::InvalidInput("need 2g ≥ 2 roots".into()));
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i] == roots[j] {
                return Err(Error::InvalidInput(format!(
                    "repeated root at positions {i} and {j}"
                )));
            }
        }
    }
    Ok(roots.len() / 2)
}

impl CMTypeData {
    pub fn new(roots: Vec<GaussianRational>, mut phi: Vec<usize>) -> Result<Self> {
        let g = check_roots(&roots)?;
        phi.sort_unstable();
        phi.dedup();
        if phi.len() != g || phi.iter().any(|&i| i >= 2 * g) {
            return Err(Error::InvalidInput(format!("Φ must have {g} distinct indices < {}", 2 * g)));
        }
        for &i in &phi {
            if phi.contains(&((i + g) % (2 * g))) {
                return Err(Error::InvalidInput(format!(
                    "Φ contains the conjugate pair {{{i}, {}}}",
                    (i + g) % (2 * g)
                )));
            }
        }
        Ok(CMTypeData { roots, phi })
    }

    pub fn genus(&self) -> usize {
        self.roots.len() / 2
    }

    /// Φ^c = {i + g mod 2g : i ∈ Φ}.
    pub fn complement(&self) -> CMTypeData {
        let g = self.genus();
        let phi = self.phi.iter().map(|&i| (i + g) % (2 * g)).collect();
        CMTypeData::new(self.roots.clone(), phi).expect("conjugate of a CM type")
    }
}

/// Δ(Φ) = ∏_{i<j in Φ}(x_i − x_j)².
pub fn cm_type_discriminant(t: &CMTypeData) -> Result<GaussianRational> {
    check_roots(&t.roots)?;
    let mut acc = GaussianRational::one();
    for (k, &i) in t.phi.iter().enumerate() {
        for &j in &t.phi[k + 1..] {
            let d = t.roots[i].sub(&t.roots[j]);
            acc = acc.mul(&d.mul(&d));
        }
    }
    Ok(acc)
}

/// All 2^g CM types for 2g roots.
pub fn all_cm_types(roots: &[GaussianRational]) -> Result<Vec<CMTypeData>> {
    let g = check_roots(roots)?;
    (0..1u32 << g)
        .map(|mask| {
            let phi = (0..g)
                .map(|i| if mask >> i & 1 == 1 { i + g } else { i })
                .collect();
            CMTypeData::new(roots.to_vec(), phi)
        })
        .collect()
}

/// Unordered pair {i, j}, i < j, standing for the factor (x_i − x_j)
/// (squares make the orientation irrelevant).
pub type PairFactor = (usize, usize);

#[derive(Clone, Debug)]
pub struct ProductIdentityReport {
    pub genus: usize,
    /// Multiplicity of each linear factor on the left side.
    pub lhs_factors: BTreeMap<PairFactor, i64>,
    pub rhs_factors: BTreeMap<PairFactor, i64>,
    pub lhs: GaussianRational,
    pub rhs: GaussianRational,
    pub equal: bool,
}

fn add_factor(m: &mut BTreeMap<PairFactor, i64>, i: usize, j: usize, e: i64) {
    let key = (i.min(j), i.max(j));
    let v = m.entry(key).or_insert(0);
    *v += e;
    if *v == 0 {
        m.remove(&key);
    }
}

/// ∏_Φ Δ(Φ)Δ(Φ^c) versus (∏_{i<j}(x_i−x_j)² / ∏_{i≤g}(x_i−x_{i+g})²)^{2^{g−1}}.
pub fn cm_type_product_identity(roots: &[GaussianRational]) -> Result<ProductIdentityReport> {
    let g = check_roots(roots)?;
    if g > 6 {
        return Err(Error::Refused(format!("g = {g} exceeds the supported bound 6")));
    }
    let mut lhs_factors = BTreeMap::new();
    let mut lhs = GaussianRational::one();
    for phi in all_cm_types(roots)? {
        for t in [phi.clone(), phi.complement()] {
            for (k, &i) in t.phi.iter().enumerate() {
                for &j in &t.phi[k + 1..] {
                    add_factor(&mut lhs_factors, i, j, 2);
                }
            }
            lhs = lhs.mul(&cm_type_discriminant(&t)?);
        }
    }
    let exponent = 1i64 << (g - 1);
    let mut rhs_factors = BTreeMap::new();
    let mut num = GaussianRational::one();
    let mut den = GaussianRational::one();
    for i in 0..2 * g {
        for j in i + 1..2 * g {
            add_factor(&mut rhs_factors, i, j, 2 * exponent);
            let d = roots[i].sub(&roots[j]);
            num = num.mul(&d.mul(&d));
        }
    }
    for i in 0..g {
        add_factor(&mut rhs_factors, i, i + g, -2 * exponent);
        let d = roots[i].sub(&roots[i + g]);
        den = den.mul(&d.mul(&d));
    }
    let rhs = num.div(&den)?.pow(exponent as u64);
    let equal = lhs_factors == rhs_factors && lhs == rhs;
    Ok(ProductIdentityReport {
        genus: g,
        lhs_factors,
        rhs_factors,
        lhs,
        rhs,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    fn r(x: i64) -> GaussianRational {
        GaussianRational::real(Rational::from(x))
    }

    #[test]
    fn fundamental_validation() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -24, -163] {
            assert!(FundamentalDiscriminant::new(d).is_ok(), "{d}");
        }
        for d in [-1, -2, -5, -12, -16, -27, 5] {
            assert!(FundamentalDiscriminant::new(d).is_err(), "{d}");
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(fd(-4), 1).unwrap(), 1);
        assert_eq!(kronecker(fd(-4), 3).unwrap(), -1);
        assert_eq!(kronecker(fd(-3), 2).unwrap(), -1);
        assert_eq!(kronecker(fd(-8), 3).unwrap(), 1);
        assert_eq!(kronecker(fd(-7), 7).unwrap(), 0);
    }

    #[test]
    fn kronecker_by_counting_square_roots() {
        // For odd primes p ∤ d: χ(p) = #{x mod p : x² ≡ d} − 1.
        for d in [-3, -4, -7, -8, -11, -15, -23, -163] {
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
                if (d as i64).rem_euclid(p as i64) == 0 {
                    continue;
                }
                let roots = (0..p as i64)
                    .filter(|x| (x * x - d).rem_euclid(p as i64) == 0)
                    .count() as i32;
                assert_eq!(kronecker(fd(d), p).unwrap(), roots - 1, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn class_groups() {
        let c = class_group(fd(-4)).unwrap();
        assert_eq!((c.h, c.w), (1, 4));
        assert_eq!(c.forms, vec![ReducedForm { a: 1, b: 0, c: 1 }]);
        let c = class_group(fd(-3)).unwrap();
        assert_eq!((c.h, c.w), (1, 6));
        let c = class_group(fd(-23)).unwrap();
        assert_eq!(c.h, 3);
        let set: std::collections::BTreeSet<_> = c.forms.iter().map(|f| (f.a, f.b, f.c)).collect();
        assert_eq!(set, [(1, 1, 6), (2, 1, 3), (2, -1, 3)].into_iter().collect());
        let c = class_group(fd(-163)).unwrap();
        assert_eq!(c.h, 1);
    }

    #[test]
    fn cm_type_small_cases() {
        let roots = vec![r(1), r(2), r(-1), r(-2)];
        let t = CMTypeData::new(roots.clone(), vec![0, 1]).unwrap();
        assert_eq!(cm_type_discriminant(&t).unwrap(), r(1));
        let one = CMTypeData::new(vec![r(3), r(-3)], vec![0]).unwrap();
        assert_eq!(cm_type_discriminant(&one).unwrap(), r(1));
        assert!(CMTypeData::new(roots, vec![0, 2]).is_err());
    }

    #[test]
    fn product_identity_genus_two() {
        let rep = cm_type_product_identity(&[r(3), r(5), r(-3), r(-5)]).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.lhs_factors[&(0, 1)], 4);
        assert!(!rep.lhs_factors.contains_key(&(0, 2)));
    }

    #[test]
    fn repeated_roots_rejected() {
        assert!(cm_type_product_identity(&[r(1), r(1)]).is_err());
    }
}
