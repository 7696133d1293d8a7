use rug::ops::Pow;
use rug::Float;
use serde_json::json;

use colmez_core::archkernel::{adjunction_ray_fit, legendre_q, legendre_q0_closed, t_grid, UpperHalfPoint};
use colmez_core::cmheight::{colmez_check, SUITE};
use colmez_core::localkernel::oracle::{coset_sweep, nonsplit_fields, series_sweep, volume_sweep, OracleSummary};
use colmez_core::localkernel::{default_grid, prop92_check, LocalFieldData, Ramification, SchwartzCase};
use colmez_core::numerics::real::{bits_for, format_float};
use colmez_core::numerics::BigComplex;
use colmez_core::pseudotheta::{approximation_check, gn_separation_demo, nak_from_word, parse_rational, parse_spec};
use colmez_core::quadfield::FundamentalDiscriminant;
use colmez_core::Error;

use crate::report::Report;
use crate::{ArchArgs, ArchCheck, CaseArg, ColmezArgs, Failure, LocalArgs, Prop92Args, PthetaArgs, RamArg, Settings};

type Outcome = Result<Report, Failure>;

fn runtime(e: Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn pow10(k: i32, prec: u32) -> Float {
    Float::with_val(bits_for(prec), 10).pow(-k)
}

fn sci(x: &Float) -> String {
    format_float(x, 6)
}

pub fn colmez(a: &ColmezArgs, s: &Settings) -> Outcome {
    let discs: Vec<i64> = if a.suite {
        SUITE.to_vec()
    } else if !a.disc.is_empty() {
        a.disc.clone()
    } else if let Some(d) = &s.file.discs {
        d.clone()
    } else {
        return Err(Failure::Usage("give --disc d or --suite".into()));
    };
    let mut fds = Vec::new();
    for d in discs {
        fds.push(FundamentalDiscriminant::new(d).map_err(|e| Failure::Usage(format!("not fundamental? {e}")))?);
    }
    let mut rep = Report::new("colmez", s.prec);
    for d in fds {
        let r = colmez_check(d, s.prec).map_err(runtime)?;
        rep.push(json!({
            "d": d.value(),
            "h": r.h,
            "w": r.w,
            "lhs": r.lhs.to_decimal(),
            "rhs": r.rhs.to_decimal(),
            "diff": r.diff.to_decimal_with(6),
            "pass": r.passes(a.tol),
        }));
    }
    rep.note("tolerance", format!("1e-{}", a.tol));
    Ok(rep)
}

fn case_of(c: CaseArg) -> SchwartzCase {
    match c {
        CaseArg::Standard => SchwartzCase::Standard,
        CaseArg::Unit => SchwartzCase::Unit,
        CaseArg::S2 => SchwartzCase::S2,
    }
}

fn ram_of(r: RamArg) -> Ramification {
    match r {
        RamArg::Inert => Ramification::Inert,
        RamArg::Ramified => Ramification::Ramified,
        RamArg::Split => Ramification::Split,
    }
}

fn or_default<T: Clone>(given: &[T], file: &Option<Vec<T>>, default: &[T]) -> Vec<T> {
    if !given.is_empty() {
        given.to_vec()
    } else {
        file.clone().unwrap_or_else(|| default.to_vec())
    }
}

fn rams(given: &[RamArg]) -> Vec<Ramification> {
    if given.is_empty() {
        vec![Ramification::Inert, Ramification::Ramified, Ramification::Split]
    } else {
        given.iter().map(|&r| ram_of(r)).collect()
    }
}

/// Every field over the requested parameters; unsupported combinations are
/// reported on stderr and skipped.
fn fields_for(primes: &[u64], v_ds: &[u32], rams: &[Ramification]) -> Vec<LocalFieldData> {
    let mut out = Vec::new();
    for &p in primes {
        for &v_d in v_ds {
            for &ram in rams {
                let variants: Vec<(u32, u32)> = match ram {
                    Ramification::Inert => vec![(0, 0), (0, 1)],
                    Ramification::Ramified if p == 2 => vec![(2, 0), (3, 0)],
                    Ramification::Ramified => vec![(1, 0)],
                    Ramification::Split => vec![(0, 0)],
                };
                for (v_dd, v_qj) in variants {
                    match LocalFieldData::new(p, p, v_d, v_dd, ram, v_qj) {
                        Ok(f) => out.push(f),
                        Err(e) => eprintln!("warning: skipping {ram} p={p} v_d={v_d} v_D={v_dd} v_qj={v_qj}: {e}"),
                    }
                }
            }
        }
    }
    out
}

fn push_oracle(rep: &mut Report, kind: &str, o: OracleSummary) {
    for (l, why) in &o.skipped {
        eprintln!("warning: skipping {l}: {why}");
    }
    for r in o.rows {
        rep.push(json!({ "kind": kind, "label": r.label, "lhs": r.lhs, "rhs": r.rhs, "pass": r.pass }));
    }
}

pub fn local(a: &LocalArgs, s: &Settings) -> Outcome {
    let primes = or_default(&a.p, &s.file.primes, &[2, 3, 5, 7]);
    let v_ds = or_default(&a.v_d, &s.file.v_d, &[0, 1, 2]);
    let fields = fields_for(&primes, &v_ds, &rams(&a.ram));
    if fields.is_empty() {
        return Err(Failure::Usage("no supported field in the requested grid".into()));
    }
    let sweep = series_sweep(&fields, a.case.map(case_of)).map_err(runtime)?;
    let mut rep = Report::new("local", s.prec);
    rep.note("skipped", sweep.skipped.len());
    push_oracle(&mut rep, "series", sweep);
    if rep.rows.is_empty() {
        return Err(Failure::Usage("every requested case is outside the supported range".into()));
    }
    Ok(rep)
}

pub fn prop92(a: &Prop92Args, s: &Settings) -> Outcome {
    let primes = or_default(&a.p, &s.file.primes, &[2, 3, 5, 7]);
    let v_ds = or_default(&a.v_d, &s.file.v_d, &[0, 1, 2]);
    let rams = rams(&a.ram);
    let case = a.case.map(case_of);
    let mut rep = Report::new("prop92", s.prec);
    for g in default_grid() {
        let f = &g.field;
        if !primes.contains(&f.p) || !v_ds.contains(&f.v_d) || !rams.contains(&f.ram) {
            continue;
        }
        if case.is_some_and(|c| c != g.case) {
            continue;
        }
        if let Some(y) = &a.y {
            if !g.label.contains(&format!(" y={y} u_val=")) {
                continue;
            }
        }
        if a.u_val.is_some_and(|u| u != g.point.u_val) {
            continue;
        }
        let r = prop92_check(f, g.case, &g.point).map_err(runtime)?;
        rep.push(json!({
            "kind": "identity",
            "label": g.label,
            "lhs": r.lhs.canonicalize().to_string(),
            "rhs": r.rhs.canonicalize().to_string(),
            "pass": r.pass,
        }));
    }
    if rep.rows.is_empty() {
        return Err(Failure::Usage("no grid case matches the filters".into()));
    }
    if a.oracle {
        // enumeration is only run over small residue fields
        let small: Vec<u64> = primes.iter().copied().filter(|&p| p <= 5).collect();
        let nonsplit = nonsplit_fields(&small, &v_ds);
        let all = fields_for(&small, &v_ds, &rams);
        push_oracle(&mut rep, "volume", volume_sweep(&nonsplit, 6).map_err(runtime)?);
        push_oracle(&mut rep, "series", series_sweep(&all, None).map_err(runtime)?);
        push_oracle(&mut rep, "coset", coset_sweep(&nonsplit, 3).map_err(runtime)?);
    }
    Ok(rep)
}

pub fn arch(a: &ArchArgs, s: &Settings) -> Outcome {
    let d = s.prec;
    let bits = bits_for(d);
    match a.check {
        ArchCheck::Q0 => {
            let tol = pow10(d as i32 - 14, d);
            let zero = Float::new(bits);
            let mut rep = Report::new("arch q0", d);
            for t in t_grid(a.points, d) {
                let q = legendre_q(&zero, &t, d).map_err(runtime)?;
                let c = legendre_q0_closed(&t, d).map_err(runtime)?;
                let diff = Float::with_val(bits, q.value() - c.value()).abs();
                rep.push(json!({
                    "t": format_float(&t, 20),
                    "quadrature": q.to_decimal(),
                    "closed": c.to_decimal(),
                    "abs_diff": sci(&diff),
                    "pass": diff < tol,
                }));
            }
            rep.note("tolerance", sci(&tol));
            Ok(rep)
        }
        ArchCheck::Limit => {
            let y0 = 1.7;
            let z0 = UpperHalfPoint::from_f64(0.3, y0, d).map_err(runtime)?;
            let h_exp = a.h_exp.unwrap_or((17 * d as i32 + 32) / 64);
            let h = pow10(h_exp, d);
            let tol = pow10(d as i32 - 19, d);
            let mut rep = Report::new("arch limit", d);
            for k in 0..a.rays {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / a.rays as f64;
                let fit = adjunction_ray_fit(&z0, angle, &h, d).map_err(runtime)?;
                let expected = -angle.sin() / (2.0 * y0);
                let icpt = fit.intercept.value().clone().abs();
                let pass = fit.paths_agree
                    && fit.slope.is_finite()
                    && (fit.slope - expected).abs() < 1e-6
                    && icpt < tol;
                rep.push(json!({
                    "angle": format!("{k}/{}·2π", a.rays),
                    "slope": format!("{:.12e}", fit.slope),
                    "expected_slope": format!("{expected:.12e}"),
                    "intercept": sci(&icpt),
                    "paths_agree": fit.paths_agree,
                    "pass": pass,
                }));
            }
            rep.note("z0", "0.3 + 1.7i");
            rep.note("h", format!("1e-{h_exp}"));
            rep.note("intercept_tolerance", sci(&tol));
            Ok(rep)
        }
    }
}

pub fn ptheta(a: &PthetaArgs, s: &Settings) -> Outcome {
    let d = s.prec;
    if let Some(n) = a.gn_demo {
        return gn_demo(n, d);
    }
    let path = a.spec.as_ref().expect("clap requires --spec");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut spec = parse_spec(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Failure::Usage(format!("{}:{line}: {msg}", path.display())),
        other => Failure::Usage(other.to_string()),
    })?;
    if let Some(r) = &s.file.radius {
        spec.radius = parse_rational(r).ok_or_else(|| Failure::Usage(format!("config: bad radius '{r}'")))?;
        spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let words = if a.g.is_empty() { vec!["1".to_string()] } else { a.g.clone() };
    let (d0, d1, dim) = spec.triple.ranks();
    let mut rep = Report::new("ptheta", d);
    for w in &words {
        let g = nak_from_word(w, d).map_err(|e| Failure::Usage(format!("--g {w:?}: {e}")))?;
        let r = approximation_check(&spec, &g).map_err(runtime)?;
        let (lre, lim) = r.lhs.to_decimal();
        let (rre, rim) = r.rhs.to_decimal();
        rep.push(json!({
            "g": w,
            "lhs_re": lre,
            "lhs_im": lim,
            "rhs_re": rre,
            "rhs_im": rim,
            "relative_error": format!("{:.6e}", r.relative_error),
            "truncation_bound": format!("{:.6e}", r.truncation_bound),
            "pass": r.pass && r.relative_error < 1e-8,
        }));
    }
    rep.note("ranks", format!("({d0}, {d1}, {dim})"));
    rep.note("radius", spec.radius.to_string());
    rep.note("tolerance", "relative error < 1e-8");
    Ok(rep)
}

fn gn_demo(n: i64, d: u32) -> Outcome {
    if !(0..=10_000).contains(&n) {
        return Err(Failure::Usage("--gn-demo takes 0 ≤ n ≤ 10000".into()));
    }
    let bits = bits_for(d);
    let ns: Vec<i64> = (0..=n).collect();
    let fk = vec![BigComplex::zero(d); ns.len()];
    let r = gn_separation_demo(&ns, &fk, d).map_err(runtime)?;
    let tol = pow10(d as i32 - 14, d);
    let mut rep = Report::new("ptheta gn-demo", d);
    for (&nn, z) in ns.iter().zip(&r.nodes) {
        // 1/(1 + iN) = (1 − iN)/(1 + N²)
        let den = Float::with_val(bits, 1 + nn * nn);
        let expect = BigComplex::new(Float::with_val(bits, 1) / &den, Float::with_val(bits, -nn) / &den, d);
        let err = z.sub_ref(&expect).abs();
        let (re, im) = z.to_decimal();
        rep.push(json!({ "N": nn, "node_re": re, "node_im": im, "abs_error": sci(&err), "pass": err < tol }));
    }
    rep.note("condition_number", format!("{:.6e}", r.condition_number));
    rep.note("zero_only", r.zero_only);
    rep.note("consistent", r.consistent);
    rep.pass &= r.zero_only && r.consistent;
    Ok(rep)
}
