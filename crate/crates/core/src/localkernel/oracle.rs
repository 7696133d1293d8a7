//! Sweeps comparing the closed forms with independent routes: p-adic
//! enumeration of the volumes, the power series in X = N^{−s} (with the
//! integrals done analytically or by enumeration), and the coset sums behind
//! the multiplicities. Every comparison is exact.

use super::algebra::{elt, LocalAlgebra};
use super::derivatives::{c_derivative, k_derivative};
use super::multiplicity::{m_coset_sum, m_multiplicity};
use super::padic::{pow_rat, vp, PadicApprox};
use super::series::{whittaker_rf, IntegralSource, SeriesKind};
use super::volume::{volume_dn, volume_dn_oracle};
use super::{Elt, LocalFieldData, LocalPoint, Ramification, SchwartzCase};
use crate::error::{Error, Result};
use crate::numerics::rf_log_derivative;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub label: String,
    /// closed form
    pub lhs: String,
    /// independent route
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct OracleSummary {
    pub rows: Vec<OracleRow>,
    /// (label, reason) for combinations outside the supported range
    pub skipped: Vec<(String, String)>,
}

impl OracleSummary {
    pub fn pass(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    fn push<T: PartialEq + std::fmt::Display>(&mut self, label: String, closed: &T, other: &T) {
        self.rows.push(OracleRow {
            label,
            lhs: closed.to_string(),
            rhs: other.to_string(),
            pass: closed == other,
        });
    }

    pub fn extend(&mut self, o: OracleSummary) {
        self.rows.extend(o.rows);
        self.skipped.extend(o.skipped);
    }
}

/// Nonsplit E over the given residue sizes: inert with both parities of
/// v(q(j)), and every ramified type (ℚ₂(i), ℚ₂(√2) at p = 2).
pub fn nonsplit_fields(primes: &[u64], v_ds: &[u32]) -> Vec<LocalFieldData> {
    let mut out = Vec::new();
    for &p in primes {
        for &v_d in v_ds {
            let mut push = |v_dd, ram, v_qj| {
                if let Ok(f) = LocalFieldData::new(p, p, v_d, v_dd, ram, v_qj) {
                    out.push(f);
                }
            };
            push(0, Ramification::Inert, 0);
            push(0, Ramification::Inert, 1);
            let vds: &[u32] = if p == 2 { &[2, 3] } else { &[1] };
            for &v_dd in vds {
                push(v_dd, Ramification::Ramified, 0);
            }
        }
    }
    out
}

fn label(f: &LocalFieldData) -> String {
    format!("{} N={} v_d={} v_D={} v_qj={}", f.ram, f.n, f.v_d, f.v_dd, f.v_qj)
}

fn y1_samples(f: &LocalFieldData, alg: &LocalAlgebra) -> Vec<(String, Elt)> {
    let p = f.p;
    let mut ys = vec![
        ("1".to_string(), elt(1, 0)),
        ("ω".to_string(), elt(0, 1)),
        ("p".to_string(), elt(p as i64, 0)),
        ("1+ω".to_string(), elt(1, 1)),
    ];
    if f.ram == Ramification::Ramified {
        let pi = alg.uniformizer().unwrap().clone();
        let k = 2 * f.v_dd as i32 + 1;
        ys.push(("π".into(), pi.clone()));
        ys.push(("π^-1".into(), alg.inv(&pi).unwrap()));
        ys.push((format!("(1+ω)/p^{}", f.v_dd), alg.scale(&elt(1, 1), &pow_rat(p, -(f.v_dd as i32)))));
        ys.push((format!("π^-{k}"), alg.pow(&pi, -k).unwrap()));
    } else {
        ys.push(("1/p".into(), alg.scale(&elt(1, 0), &pow_rat(p, -1))));
    }
    ys
}

/// v(q(y₂)) values of the admissible parity in [−2, 6].
pub fn vq_range(f: &LocalFieldData) -> Vec<i32> {
    (-2..=6)
        .filter(|v| f.ram != Ramification::Inert || (v - f.v_qj as i32).rem_euclid(2) == 1)
        .collect()
}

/// vol(D_n) against brute-force enumeration, n ≤ max_n.
pub fn volume_sweep(fields: &[LocalFieldData], max_n: i32) -> Result<OracleSummary> {
    let mut s = OracleSummary::default();
    for f in fields.iter().filter(|f| f.ram != Ramification::Split) {
        let alg = LocalAlgebra::for_field(f)?;
        for vq in vq_range(f) {
            let y = alg.y2_coefficient(vq)?;
            let a = alg.q_near_j() * alg.norm(&y);
            let approx = PadicApprox::from_rational(&a, f.p, 16);
            for n in 0..=max_n {
                let analytic = volume_dn(f, n, vq)?.volume(f.v_dd);
                let depth = (n + f.v_d as i32 + f.v_dd as i32 + 2) as u32;
                let oracle = volume_dn_oracle(f, n, &approx, depth)?;
                s.push(format!("vol D_{n} {} v(q(y2))={vq}", label(f)), &analytic, &oracle);
            }
        }
    }
    Ok(s)
}

// enumeration is only affordable for small residue fields
fn sources(p: u64) -> Vec<IntegralSource> {
    if p <= 5 {
        vec![IntegralSource::Analytic, IntegralSource::Enumerated]
    } else {
        vec![IntegralSource::Analytic]
    }
}

fn source_name(s: IntegralSource) -> &'static str {
    match s {
        IntegralSource::Analytic => "analytic",
        IntegralSource::Enumerated => "enumerated",
    }
}

/// Log-derivatives at s = 0 of the Whittaker and intertwining series against
/// the closed forms for k and c. `case` overrides the default Schwartz
/// function; fields it does not apply to are skipped.
pub fn series_sweep(fields: &[LocalFieldData], case: Option<SchwartzCase>) -> Result<OracleSummary> {
    let mut s = OracleSummary::default();
    for f in fields {
        let case = case.unwrap_or_else(|| SchwartzCase::default_for(f));
        if let Err(e) = case.check(f) {
            s.skipped.push((format!("{} {case:?}", label(f)), e.to_string()));
            continue;
        }
        let alg = LocalAlgebra::for_field(f)?;
        if f.ram == Ramification::Split {
            for va in -1..=1 {
                for vd in -1..=1 {
                    let y = LocalAlgebra::from_split_components(&pow_rat(f.p, va), &pow_rat(f.p, vd));
                    let pt = LocalPoint::from_coords(&alg, y, None, 0);
                    let closed = c_derivative(f, case, &pt)?;
                    let mut srcs = vec![IntegralSource::Analytic];
                    if f.p <= 3 || case == SchwartzCase::Standard && f.v_d == 0 {
                        srcs.push(IntegralSource::Enumerated);
                    }
                    for src in srcs {
                        let rf = whittaker_rf(f, case, &pt, SeriesKind::Intertwining, src)?;
                        let series = rf_log_derivative(&rf)?;
                        let l = format!("c {} {case:?} y=(p^{va}, p^{vd}) {}", label(f), source_name(src));
                        s.push(l, &closed, &series);
                    }
                }
            }
            continue;
        }
        for (name, y) in y1_samples(f, &alg) {
            for vq in vq_range(f) {
                let pt = LocalPoint::from_coords(&alg, y.clone(), Some(vq), 0);
                let closed = match k_derivative(f, case, &pt) {
                    Ok(k) => k,
                    Err(Error::Unsupported(why)) => {
                        s.skipped.push((format!("k {} y={name} v(q(y2))={vq}", label(f)), why));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                for src in sources(f.p) {
                    let rf = whittaker_rf(f, case, &pt, SeriesKind::Whittaker, src)?;
                    let series = rf_log_derivative(&rf)?;
                    let l = format!("k {} {case:?} y={name} v(q(y2))={vq} {}", label(f), source_name(src));
                    s.push(l, &closed, &series);
                }
            }
            let pt = LocalPoint::from_coords(&alg, y.clone(), None, 0);
            let closed = c_derivative(f, case, &pt)?;
            for src in sources(f.p) {
                let rf = whittaker_rf(f, case, &pt, SeriesKind::Intertwining, src)?;
                let series = rf_log_derivative(&rf)?;
                s.push(format!("c {} {case:?} y={name} {}", label(f), source_name(src)), &closed, &series);
            }
        }
    }
    Ok(s)
}

/// m_φ rebuilt as Σ m(v(λ) − k, c) over lattice classes, for points whose
/// q(y) has valuation at most `depth`.
pub fn coset_sweep(fields: &[LocalFieldData], depth: i32) -> Result<OracleSummary> {
    let mut s = OracleSummary::default();
    for f in fields.iter().filter(|f| !f.b_nonsplit && f.ram != Ramification::Split) {
        let alg = LocalAlgebra::for_field(f)?;
        for (name, y) in y1_samples(f, &alg).into_iter().take(4) {
            for vq in vq_range(f).into_iter().filter(|&v| v >= 0) {
                let t = alg.y2_coefficient(vq)?;
                let qy = alg.norm(&y) + alg.q_near_j() * alg.norm(&t);
                if vp(&qy, f.p).is_none_or(|k| k > depth) {
                    continue;
                }
                let pt = LocalPoint::from_coords(&alg, y.clone(), Some(vq), 0);
                let closed = m_multiplicity(f, SchwartzCase::Standard, &pt)?;
                let sum = m_coset_sum(f, &y, &t, 0)?;
                s.push(format!("m {} y={name} v(q(y2))={vq}", label(f)), &closed, &sum);
            }
        }
    }
    Ok(s)
}
