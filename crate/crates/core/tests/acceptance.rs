//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use colmez_core::archkernel::{adjunction_ray_fit, legendre_q, legendre_q0_closed, t_grid, UpperHalfPoint};
use colmez_core::cmheight::{colmez_check, SUITE};
use colmez_core::lfun::{
    constants_report, gamma_factor_logderiv, gamma_factor_logderiv_oracle, l_at_zero, l_prime_at_zero,
    l_prime_at_zero_oracle,
};
use colmez_core::localkernel::algebra::{elt, LocalAlgebra};
use colmez_core::localkernel::oracle::{coset_sweep, nonsplit_fields, series_sweep, volume_sweep};
use colmez_core::localkernel::padic::vp;
use colmez_core::localkernel::{
    default_grid, n_multiplicity, ordinary_sum_check, prop92_check, volume_dn, volume_dn_oracle, LocalFieldData,
    LocalPoint, PadicApprox, Ramification, SchwartzCase, Y1,
};
use colmez_core::numerics::real::{bits_for, euler_gamma};
use colmez_core::numerics::{integrate_semiinfinite, BigComplex, Integrand};
use colmez_core::pseudotheta::{
    approximation_check, inner_theta, iwasawa, outer_theta, pseudo_theta_eval, required_radius_for, ComplexQ, Gram,
    GL2RealElement, Nak, PseudoThetaSpec, QuadLatticeTriple,
};
use colmez_core::quadfield::{class_group, cm_type_product_identity, FundamentalDiscriminant, GaussianRational};

type Check = Result<String, String>;

fn tol(k: i32, digits: u32) -> Float {
    Float::with_val(bits_for(digits), 10).pow(-k)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, t: Instant) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:.2?}, limit {limit:?}", t.elapsed()))
}

fn suite() -> Vec<FundamentalDiscriminant> {
    SUITE.iter().map(|&d| FundamentalDiscriminant::new(d).unwrap()).collect()
}

fn colmez_suite() -> Check {
    let t = Instant::now();
    let mut worst = 0f64;
    for d in suite() {
        let r = colmez_check(d, 64).map_err(|e| e.to_string())?;
        ensure(r.passes(40), || format!("d = {d}: diff {}", r.diff.to_decimal_with(6)))?;
        worst = worst.max(r.diff.to_f64().abs());
    }
    within(Duration::from_secs(5), t)?;
    Ok(format!("12 discriminants, max |diff| {worst:.2e} < 1e-40"))
}

fn local_identity() -> Check {
    let t = Instant::now();
    let grid = default_grid();
    let mut s2 = 0;
    for g in &grid {
        let r = prop92_check(&g.field, g.case, &g.point).map_err(|e| format!("{}: {e}", g.label))?;
        ensure(r.pass, || format!("{}: {} ≠ {}", g.label, r.lhs, r.rhs))?;
        s2 += (g.case == SchwartzCase::S2) as usize;
    }
    ensure(grid.len() >= 1000 && s2 > 0, || format!("grid too small: {}", grid.len()))?;
    within(Duration::from_secs(10), t)?;
    Ok(format!("{} cases ({s2} with S₂), structural equality", grid.len()))
}

fn oracles() -> Check {
    let primes = [2, 3, 5];
    let nonsplit = nonsplit_fields(&primes, &[0, 1, 2]);
    let mut fields = nonsplit.clone();
    for p in primes {
        for v_d in 0..=2 {
            fields.push(LocalFieldData::new(p, p, v_d, 0, Ramification::Split, 0).unwrap());
        }
    }
    let err = |e: colmez_core::Error| e.to_string();
    let vol = volume_sweep(&nonsplit, 6).map_err(err)?;
    let ser = series_sweep(&fields, None).map_err(err)?;
    let mut s2_fields = fields.clone();
    s2_fields.retain(|f| f.ram == Ramification::Split && f.v_d == 0);
    let ser2 = series_sweep(&s2_fields, Some(SchwartzCase::S2)).map_err(err)?;
    let cos = coset_sweep(&nonsplit, 3).map_err(err)?;
    for (name, s) in [("volume", &vol), ("series", &ser), ("series S₂", &ser2), ("coset", &cos)] {
        if let Some(r) = s.failures().next() {
            return Err(format!("{name}: {}: {} ≠ {}", r.label, r.lhs, r.rhs));
        }
        ensure(s.pass(), || format!("{name}: nothing checked"))?;
    }
    // the wild window at p = 2, v(D) = 2
    let f = LocalFieldData::new(2, 2, 0, 2, Ramification::Ramified, 0).unwrap();
    let alg = LocalAlgebra::for_field(&f).map_err(err)?;
    let y = alg.y2_coefficient(0).map_err(err)?;
    let a = PadicApprox::from_rational(&(alg.q_near_j() * alg.norm(&y)), 2, 8);
    let closed = volume_dn(&f, 1, 0).map_err(err)?.volume(2).exact(2);
    let counted = volume_dn_oracle(&f, 1, &a, 8).map_err(err)?.exact(2);
    let quarter = Some(Rational::from((1, 4)));
    ensure(closed == quarter && counted == quarter, || format!("window: {closed:?} / {counted:?}"))?;
    Ok(format!(
        "{} volumes, {} series, {} coset sums exact; window 1/4 by both routes",
        vol.rows.len(),
        ser.rows.len() + ser2.rows.len(),
        cos.rows.len()
    ))
}

fn telescoping() -> Check {
    let mut n_checks = 0;
    for n in [2u64, 3, 5] {
        for r in 0..=3 {
            for a in 0..=10 {
                let v = ordinary_sum_check(a, n, r).map_err(|e| e.to_string())?;
                ensure(v == a, || format!("a={a} N={n} r={r}: {v}"))?;
            }
        }
        // split: y = (p^va, p^vd), v(q(y)) = va + vd
        let f = LocalFieldData::new(n, n, 1, 0, Ramification::Split, 0).unwrap();
        for va in 0..=4 {
            for vd in 0..=4 {
                let pt = LocalPoint::new(Y1::Split { va: Some(va), vd: Some(vd) }, None, 0);
                let m = n_multiplicity(&f, SchwartzCase::Standard, &pt).map_err(|e| e.to_string())?;
                ensure(m == (va + vd, 2), || format!("split N={n} ({va},{vd}): {m}"))?;
                n_checks += 1;
            }
        }
        // nonsplit: v(q(y)) read off the norm of an explicit element
        for fld in nonsplit_fields(&[n], &[0, 1]) {
            if fld.b_nonsplit {
                continue;
            }
            let alg = LocalAlgebra::for_field(&fld).map_err(|e| e.to_string())?;
            let base = match fld.ram {
                Ramification::Ramified => alg.uniformizer().unwrap().clone(),
                _ => elt(n as i64, 0),
            };
            for k in 0..=4 {
                for u in [elt(1, 0), elt(1, 1)] {
                    let y = alg.mul(&u, &alg.pow(&base, k).unwrap());
                    let v = vp(&alg.norm(&y), n).unwrap();
                    let pt = LocalPoint::from_coords(&alg, y, None, 0);
                    let m = n_multiplicity(&fld, SchwartzCase::Standard, &pt).map_err(|e| e.to_string())?;
                    ensure(m == (v, 2), || format!("{fld:?} k={k}: {m} vs v={v}"))?;
                    n_checks += 1;
                }
            }
        }
    }
    Ok(format!("132 telescoping sums = a; {n_checks} multiplicities n = v(q(y))/2"))
}

fn archimedean() -> Check {
    let d = 64;
    let bits = bits_for(d);
    let zero = Float::new(bits);
    let mut worst = Float::new(bits);
    for t in t_grid(30, d) {
        let q = legendre_q(&zero, &t, d).map_err(|e| e.to_string())?;
        let c = legendre_q0_closed(&t, d).map_err(|e| e.to_string())?;
        let diff = Float::with_val(bits, q.value() - c.value()).abs();
        if diff > worst {
            worst = diff;
        }
    }
    ensure(worst < tol(50, d), || format!("Q₀ grid: max diff {}", worst.to_f64()))?;
    let y0 = 1.7;
    let z0 = UpperHalfPoint::from_f64(0.3, y0, d).map_err(|e| e.to_string())?;
    let h = tol(17, d);
    let mut worst_icpt = Float::new(bits);
    for k in 0..8 {
        let angle = std::f64::consts::PI * k as f64 / 4.0;
        let fit = adjunction_ray_fit(&z0, angle, &h, d).map_err(|e| e.to_string())?;
        let icpt = fit.intercept.value().clone().abs();
        ensure(fit.paths_agree && fit.slope.is_finite() && icpt < tol(45, d), || {
            format!("ray {k}: intercept {} slope {}", icpt.to_f64(), fit.slope)
        })?;
        ensure((fit.slope + angle.sin() / (2.0 * y0)).abs() < 1e-9, || format!("ray {k}: slope {}", fit.slope))?;
        if icpt > worst_icpt {
            worst_icpt = icpt;
        }
    }
    Ok(format!(
        "Q₀ max diff {:.2e} on 30 points; 8 rays, max intercept {:.2e}, slopes −sin φ/(2 Im z₀)",
        worst.to_f64(),
        worst_icpt.to_f64()
    ))
}

fn constants() -> Check {
    let d = 64;
    let bits = bits_for(d);
    for m in 1..=3 {
        let a = gamma_factor_logderiv(m, d).map_err(|e| e.to_string())?;
        let b = gamma_factor_logderiv_oracle(m, d).map_err(|e| e.to_string())?;
        let diff = (&a - &b).abs();
        ensure(diff.abs_below_pow10(50), || format!("m={m}: {}", diff.to_decimal_with(6)))?;
    }
    let four_pi = Float::with_val(bits, Constant::Pi) * 4u32;
    let fp = four_pi.clone();
    let f = Integrand::new(move |y: &Float| {
        let e = Float::with_val(y.prec(), -Float::with_val(y.prec(), &fp * y)).exp();
        e * Float::with_val(y.prec(), y.ln_ref())
    })
    .with_log_singularity();
    let v = integrate_semiinfinite(&f, d).map_err(|e| e.to_string())?;
    let expect = -(euler_gamma(d) + Float::with_val(bits, four_pi.ln_ref())) / four_pi;
    let idiff = Float::with_val(bits, v.value() - &expect).abs();
    ensure(idiff < tol(50, d), || format!("∫e^(−4πy) log y: diff {}", idiff.to_f64()))?;
    for dd in suite() {
        let r = constants_report(dd, d);
        ensure(r.identity_residual.abs_below_pow10(50), || {
            format!("d={dd}: c₁ − c₀ + 2L′∞/L∞ = {}", r.identity_residual.to_decimal_with(6))
        })?;
    }
    Ok(format!("Γ-factor m = 1..3, log-integral diff {:.2e}, c₁ − c₀ identity on 12 fields", idiff.to_f64()))
}

fn triple(d0: usize, d1: usize) -> QuadLatticeTriple {
    let g = Gram::new(4, vec![2, 1, 0, 0, 1, 2, 0, 0, 0, 0, 3, 1, 0, 0, 1, 2]).unwrap();
    QuadLatticeTriple::new(g, (0..d1).collect(), (0..d0).collect()).unwrap()
}

fn spec(d0: usize, d1: usize, radius: u64) -> PseudoThetaSpec {
    let mut phi = std::collections::BTreeMap::new();
    if d1 > d0 {
        let mut x = vec![0i64; d1];
        x[d1 - 1] = 1;
        phi.insert(x, ComplexQ::new(Rational::from((1, 2)), Rational::from((1, 3))));
    }
    let ext = ComplexQ::new(Rational::from(2), Rational::from(-1));
    PseudoThetaSpec::new(triple(d0, d1), Rational::from(radius), ComplexQ::one(), ext, phi).unwrap()
}

fn pseudo_theta() -> Check {
    let d = 30;
    let bits = bits_for(d);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0f64;
    for (d0, d1) in [(0, 2), (2, 2), (0, 4)] {
        for _ in 0..20 {
            let (b, a, th): (f64, f64, f64) =
                (rng.gen_range(-1.0..1.0), rng.gen_range(0.7..2.0), rng.gen_range(-3.1..3.1));
            let g = Nak::new(Float::with_val(bits, b), Float::with_val(bits, a), Float::with_val(bits, th), d)
                .map_err(|e| e.to_string())?;
            let r = required_radius_for(&triple(d0, d1), &g, 3.0).map_err(|e| e.to_string())?;
            let rep = approximation_check(&spec(d0, d1, r), &g).map_err(|e| e.to_string())?;
            ensure(rep.pass && rep.relative_error < 1e-8, || {
                format!("({d0},{d1},4) n({b})m({a})k({th}): rel {:.2e}", rep.relative_error)
            })?;
            worst = worst.max(rep.relative_error);
        }
    }
    let d = 64;
    let bits = bits_for(d);
    let mut node_err = Float::new(bits);
    for n in 0..=10_000i64 {
        let z = iwasawa(&GL2RealElement::g_n(n, d)).map_err(|e| e.to_string())?.rho_delta();
        let expect = BigComplex::new(Float::with_val(bits, 1), Float::with_val(bits, n), d).recip();
        let e = z.sub_ref(&expect).abs();
        if e > node_err {
            node_err = e;
        }
    }
    ensure(node_err < tol(50, d), || format!("ρδ(g_N): max error {}", node_err.to_f64()))?;
    for (d0, d1) in [(0, 2), (0, 4)] {
        let s = spec(d0, d1, 7);
        let one = Nak::identity(d);
        let a = pseudo_theta_eval(&s, &one).map_err(|e| e.to_string())?;
        let o = outer_theta(&s, &one).map_err(|e| e.to_string())?;
        let i = inner_theta(&s, &one).map_err(|e| e.to_string())?;
        ensure(a.value.re == o.value.re && a.value.im == o.value.im && i.value.abs().is_zero(), || {
            format!("A(1) ≠ θ_A,1(1) for ({d0},{d1},4)")
        })?;
    }
    Ok(format!(
        "60 sampled g, max relative error {worst:.2e}; ρδ(g_N) max error {:.2e} for N ≤ 10⁴; A(1) = θ₁(1) exactly",
        node_err.to_f64()
    ))
}

fn gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    let mut q = || Rational::from((rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)));
    GaussianRational::new(q(), q())
}

fn cm_types() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut by_genus = [0usize; 4];
    for i in 0..100 {
        let g = 1 + i % 4;
        let roots = loop {
            let r: Vec<GaussianRational> = (0..2 * g).map(|_| gaussian(&mut rng)).collect();
            if (0..r.len()).all(|a| (a + 1..r.len()).all(|b| r[a] != r[b])) {
                break r;
            }
        };
        let rep = cm_type_product_identity(&roots).map_err(|e| e.to_string())?;
        ensure(rep.equal && rep.genus == g, || format!("g={g}: {roots:?}"))?;
        by_genus[g - 1] += 1;
    }
    Ok(format!("100 root sets (per genus 1..4: {by_genus:?}), exact equality"))
}

fn l_values() -> Check {
    let mut worst = 0f64;
    for d in suite() {
        let cg = class_group(d).map_err(|e| e.to_string())?;
        let l0 = l_at_zero(d);
        ensure(l0 == (2 * cg.h as i64, cg.w as i64), || format!("d={d}: L(0) = {l0}"))?;
        let a = l_prime_at_zero(d, 64);
        let b = l_prime_at_zero_oracle(d, 64).map_err(|e| e.to_string())?;
        let diff = (&a - &b).abs();
        ensure(diff.abs_below_pow10(30), || format!("d={d}: L′(0) diff {}", diff.to_decimal_with(6)))?;
        worst = worst.max(diff.to_f64());
    }
    Ok(format!("L(0) = 2h/w on 12 fields; Lerch vs Hurwitz max diff {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("averaged Colmez identity at g = 1", colmez_suite),
        ("exact local identity on the default grid", local_identity),
        ("closed forms vs enumeration oracles", oracles),
        ("ordinary telescoping and n = v(q(y))/2", telescoping),
        ("archimedean kernel", archimedean),
        ("constants", constants),
        ("pseudo-theta approximation", pseudo_theta),
        ("CM-type product identity", cm_types),
        ("L-value cross-oracles", l_values),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
