//! Truncated theta and pseudo-theta sums with certified tails.
//!
//! Over ℚ with standard finite data the u-sum collapses to u = 1: the
//! archimedean Gaussian vanishes for u < 0 and the finite components force u
//! to be a unit everywhere. Every term then depends on x only through q(x)
//! and the finite weight φ′(x), so the sums are accumulated exactly per
//! q-value and the Gaussian weight is evaluated once per shell.

use std::collections::BTreeMap;

use rug::{Float, Rational};

use super::group::{gaussian_weight, Nak};
use super::lattice::{Gram, QuadLatticeTriple};
use crate::error::{Error, Result};
use crate::numerics::real::{bits_for, tolerance};
use crate::numerics::BigComplex;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexQ { re, im: Rational::new() }
    }

    pub fn one() -> Self {
        ComplexQ::real(Rational::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn add_assign(&mut self, o: &ComplexQ) {
        self.re += &o.re;
        self.im += &o.im;
    }

    /// An upper bound for |z| (|re| + |im|).
    pub fn abs_bound(&self) -> f64 {
        self.re.to_f64().abs() + self.im.to_f64().abs()
    }

    pub fn to_big(&self, digits: u32) -> BigComplex {
        let b = bits_for(digits);
        BigComplex::new(Float::with_val(b, &self.re), Float::with_val(b, &self.im), digits)
    }
}

/// A truncated lattice sum and a rigorous bound on the omitted terms.
#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: BigComplex,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Σ_{q(x) > R²} |a|^{k/2} e^{−2π a² q(x)} over a rank-`lat.dim()` lattice, for
/// a Gaussian on a space of rank `rank`. With q ≥ λ|x|² and c = 2πa²,
///   Σ_{q > R²} e^{−cq} ≤ e^{−cR²/2} Σ_x e^{−cλ|x|²/2} ≤ e^{−cR²/2} coth(cλ/4)^dim.
pub fn tail_bound(lat: &Gram, lambda: &Rational, rank: usize, a: &Float, r2: &Rational) -> f64 {
    if lat.dim() == 0 {
        return 0.0;
    }
    let a = a.to_f64();
    let c = 2.0 * std::f64::consts::PI * a * a;
    let x = c * lambda.to_f64() / 4.0;
    let log_coth = (1.0 / x.tanh()).ln();
    let log_bound = (rank as f64 / 2.0) * a.ln() - c * r2.to_f64() / 2.0 + lat.dim() as f64 * log_coth;
    // a little headroom for floating-point evaluation of the bound itself
    (log_bound + 1e-9 * (1.0 + log_bound.abs())).exp()
}

/// Smallest integer R with the tail bound below 10^{−digits}.
pub fn required_radius(lat: &Gram, lambda: &Rational, rank: usize, a: &Float, scale: f64, digits: u32) -> u64 {
    let target = -(digits as f64) * std::f64::consts::LN_10 - scale.max(1e-300).ln();
    let mut r = 1u64;
    while tail_bound(lat, lambda, rank, a, &Rational::from(r * r)).ln() > target && r < 1 << 20 {
        r += 1;
    }
    r
}

fn sum_shells(g: &Nak, shells: &BTreeMap<i64, ComplexQ>, rank: usize) -> BigComplex {
    let digits = g.digits();
    let one = Rational::from(1);
    let mut acc = BigComplex::zero(digits);
    for (q, w) in shells {
        if w.is_zero() {
            continue;
        }
        let gw = gaussian_weight(g, &Rational::from(*q), &one, rank);
        acc = acc.add_ref(&gw.mul_ref(&w.to_big(digits)));
    }
    acc
}

fn check_tail(tail: f64, lat: &Gram, lambda: &Rational, rank: usize, g: &Nak, scale: f64) -> Result<()> {
    let digits = g.digits();
    if tail.is_finite() && tail < 10f64.powi(-(digits as i32)).max(f64::MIN_POSITIVE) {
        return Ok(());
    }
    let need = required_radius(lat, lambda, rank, &g.a, scale, digits);
    Err(Error::Refused(format!(
        "truncation tail bound {tail:.3e} exceeds 10^-{digits}; radius R ≥ {need} is required"
    )))
}

/// θ(g) = Σ_{x ∈ L} r(g)φ(x, 1) truncated at q(x) ≤ R².
pub fn theta_series(g: &Nak, gram: &Gram, radius: &Rational) -> Result<ThetaValue> {
    let r2 = Rational::from(radius * radius);
    let lambda = gram.certified_min_eigenvalue()?;
    let tail = tail_bound(gram, &lambda, gram.dim(), &g.a, &r2);
    check_tail(tail, gram, &lambda, gram.dim(), g, 1.0)?;
    let mut shells: BTreeMap<i64, ComplexQ> = BTreeMap::new();
    let pts = gram.enumerate(&r2)?;
    for (_, q) in &pts {
        shells.entry(*q).or_default().add_assign(&ComplexQ::one());
    }
    Ok(ThetaValue {
        value: sum_shells(g, &shells, gram.dim()),
        tail_bound: tail,
        terms: pts.len(),
    })
}

/// The data of a pseudo-theta series over ℚ with standard finite Schwartz
/// functions: a triple V₀ ⊆ V₁ ⊆ V, the finite weight φ′(1, x, 1) on V₁ − V₀
/// (a table inside the truncation radius, `phi_default` elsewhere), and its
/// Schwartz extension to V₀ (the constant `phi_ext_v0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoThetaSpec {
    pub triple: QuadLatticeTriple,
    pub radius: Rational,
    pub phi_default: ComplexQ,
    pub phi_ext_v0: ComplexQ,
    /// keyed by V₁-coordinates
    pub phi: BTreeMap<Vec<i64>, ComplexQ>,
}

impl PseudoThetaSpec {
    pub fn new(
        triple: QuadLatticeTriple,
        radius: Rational,
        phi_default: ComplexQ,
        phi_ext_v0: ComplexQ,
        phi: BTreeMap<Vec<i64>, ComplexQ>,
    ) -> Result<Self> {
        let s = PseudoThetaSpec { triple, radius, phi_default, phi_ext_v0, phi };
        s.validate()?;
        Ok(s)
    }

    /// φ′ ≡ c on V₁ − V₀, extended by the same constant.
    pub fn constant(triple: QuadLatticeTriple, radius: Rational, c: ComplexQ) -> Result<Self> {
        PseudoThetaSpec::new(triple, radius, c.clone(), c, BTreeMap::new())
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius <= 0 {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        let g1 = self.triple.gram_v1();
        let r2 = Rational::from(&self.radius * &self.radius);
        for x in self.phi.keys() {
            if x.len() != g1.dim() {
                return Err(Error::InvalidInput(format!("φ′ point {x:?} is not a V₁-coordinate vector")));
            }
            if self.triple.in_v0(x) {
                return Err(Error::InvalidInput(format!("φ′ point {x:?} lies in V₀")));
            }
            if g1.q(x) > r2 {
                return Err(Error::InvalidInput(format!("φ′ point {x:?} lies outside the radius")));
            }
        }
        Ok(())
    }

    pub fn phi_at(&self, x_v1: &[i64]) -> ComplexQ {
        if self.triple.in_v0(x_v1) {
            return self.phi_ext_v0.clone();
        }
        self.phi.get(x_v1).cloned().unwrap_or_else(|| self.phi_default.clone())
    }

    /// sup |φ′| over V₁ (finite: a table plus two constants).
    pub fn phi_bound(&self) -> f64 {
        self.phi
            .values()
            .map(ComplexQ::abs_bound)
            .chain([self.phi_default.abs_bound(), self.phi_ext_v0.abs_bound()])
            .fold(0.0, f64::max)
    }

    fn radius_sq(&self) -> Rational {
        Rational::from(&self.radius * &self.radius)
    }
}

/// Smallest integer radius at which all three series of `triple` (with
/// sup|φ′| ≤ `scale`) are certified to 10^{−digits} at g.
pub fn required_radius_for(triple: &QuadLatticeTriple, g: &Nak, scale: f64) -> Result<u64> {
    let (d0, d1, d) = triple.ranks();
    let mut r = 1;
    for (lat, rank) in [(triple.gram_v1(), d), (triple.gram_v1(), d1), (triple.gram_v0(), d0)] {
        if lat.dim() == 0 {
            continue;
        }
        let lam = lat.certified_min_eigenvalue()?;
        r = r.max(required_radius(&lat, &lam, rank, &g.a, scale, g.digits()));
    }
    Ok(r)
}

enum Part {
    Pseudo,
    Outer,
    Inner,
}

fn series(spec: &PseudoThetaSpec, g: &Nak, part: Part) -> Result<ThetaValue> {
    let (_d0, d1, d) = spec.triple.ranks();
    let g1 = spec.triple.gram_v1();
    let r2 = spec.radius_sq();
    let (lat, rank) = match part {
        Part::Pseudo => (g1.clone(), d),
        Part::Outer => (g1.clone(), d1),
        Part::Inner => {
            if spec.triple.embed_v0.is_empty() {
                return Ok(ThetaValue { value: BigComplex::zero(g.digits()), tail_bound: 0.0, terms: 0 });
            }
            (spec.triple.gram_v0(), spec.triple.embed_v0.len())
        }
    };
    let lambda = lat.certified_min_eigenvalue()?;
    let scale = spec.phi_bound();
    let tail = scale * tail_bound(&lat, &lambda, rank, &g.a, &r2);
    check_tail(tail, &lat, &lambda, rank, g, scale)?;
    let pts = lat.enumerate(&r2)?;
    let mut shells: BTreeMap<i64, ComplexQ> = BTreeMap::new();
    let mut terms = 0;
    for (x, q) in &pts {
        let w = match part {
            Part::Pseudo => {
                if spec.triple.in_v0(x) {
                    continue;
                }
                spec.phi_at(x)
            }
            Part::Outer => spec.phi_at(x),
            Part::Inner => spec.phi_ext_v0.clone(),
        };
        terms += 1;
        shells.entry(*q).or_default().add_assign(&w);
    }
    Ok(ThetaValue { value: sum_shells(g, &shells, rank), tail_bound: tail, terms })
}

/// A(g) = Σ_{x ∈ V₁ − V₀} φ′(1, x, 1)·r_V(g)φ(x, 1): Weil data of V, summed
/// over V₁ − V₀ only.
pub fn pseudo_theta_eval(spec: &PseudoThetaSpec, g: &Nak) -> Result<ThetaValue> {
    series(spec, g, Part::Pseudo)
}

/// θ_{A,1}(g) = Σ_{x ∈ V₁} φ′(1, x, 1)·r_{V₁}(g)φ(x, 1).
pub fn outer_theta(spec: &PseudoThetaSpec, g: &Nak) -> Result<ThetaValue> {
    series(spec, g, Part::Outer)
}

/// θ_{A,0}(g) = Σ_{x ∈ V₀} φ′(1, x, 1)·r_{V₀}(g)φ(x, 1); zero for empty V₀.
pub fn inner_theta(spec: &PseudoThetaSpec, g: &Nak) -> Result<ThetaValue> {
    series(spec, g, Part::Inner)
}

#[derive(Clone, Debug)]
pub struct ApproximationReport {
    pub lhs: BigComplex,
    pub rhs: BigComplex,
    pub abs_diff: Float,
    pub relative_error: f64,
    /// combined truncation bound of the three series, weighted as they enter
    pub truncation_bound: f64,
    pub pass: bool,
}

/// A(g) against (ρδ)^{(d−d₁)/2}·θ_{A,1}(g) − (ρδ)^{(d−d₀)/2}·θ_{A,0}(g).
pub fn approximation_check(spec: &PseudoThetaSpec, g: &Nak) -> Result<ApproximationReport> {
    let digits = g.digits();
    let (d0, d1, d) = spec.triple.ranks();
    let a = pseudo_theta_eval(spec, g)?;
    let t1 = outer_theta(spec, g)?;
    let t0 = inner_theta(spec, g)?;
    let rd = g.rho_delta();
    let e1 = ((d - d1) / 2) as i64;
    let e0 = ((d - d0) / 2) as i64;
    let w1 = rd.powi(e1);
    let w0 = rd.powi(e0);
    let rhs = w1.mul_ref(&t1.value).sub_ref(&w0.mul_ref(&t0.value));
    let lhs = a.value;
    let abs_diff = lhs.sub_ref(&rhs).abs();
    let af = g.a.to_f64();
    let truncation_bound =
        a.tail_bound + af.powi(e1 as i32) * t1.tail_bound + af.powi(e0 as i32) * t0.tail_bound;
    let scale = {
        let m = lhs.abs().to_f64().max(rhs.abs().to_f64());
        let parts = w1.mul_ref(&t1.value).abs().to_f64().max(w0.mul_ref(&t0.value).abs().to_f64());
        m.max(parts).max(f64::MIN_POSITIVE)
    };
    let relative_error = abs_diff.to_f64() / scale;
    let slack = tolerance(digits, 6).to_f64() * scale;
    let pass = abs_diff.to_f64() <= truncation_bound + slack;
    Ok(ApproximationReport { lhs, rhs, abs_diff, relative_error, truncation_bound, pass })
}
