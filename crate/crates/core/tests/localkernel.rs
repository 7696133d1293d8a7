use colmez_core::localkernel::algebra::{elt, LocalAlgebra};
use colmez_core::localkernel::multiplicity::m_nonsplit_coset_sum;
use colmez_core::localkernel::padic::pow_rat;
use colmez_core::localkernel::*;
use colmez_core::numerics::{rf_log_derivative, LogLinearValue, Rational};
use proptest::prelude::*;

fn fields(primes: &[u64]) -> Vec<LocalFieldData> {
    let mut out = Vec::new();
    for &p in primes {
        for v_d in 0..=2 {
            out.push(LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, 0).unwrap());
            out.push(LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, 1).unwrap());
            let vds: &[u32] = if p == 2 { &[2, 3] } else { &[1] };
            for &v_dd in vds {
                out.push(LocalFieldData::new(p, p, v_d, v_dd, Ramification::Ramified, 0).unwrap());
            }
        }
    }
    out
}

/// y₁ samples with explicit coordinates: units, multiples of p, and for
/// ramified E off-lattice and outside points.
fn y1_samples(f: &LocalFieldData, alg: &LocalAlgebra) -> Vec<Elt> {
    let p = f.p;
    let mut ys = vec![elt(1, 0), elt(0, 1), elt(p as i64, 0), elt(1, 1)];
    if f.ram == Ramification::Ramified {
        let pi = alg.uniformizer().unwrap().clone();
        ys.push(pi.clone());
        ys.push(alg.inv(&pi).unwrap());
        ys.push(alg.scale(&elt(1, 1), &pow_rat(p, -(f.v_dd as i32))));
        ys.push(alg.pow(&pi, -(2 * f.v_dd as i32 + 1)).unwrap());
    } else {
        ys.push(alg.scale(&elt(1, 0), &pow_rat(p, -1)));
    }
    ys
}

fn vq_range(f: &LocalFieldData) -> Vec<i32> {
    (-2..=6)
        .filter(|v| f.ram != Ramification::Inert || (v - f.v_qj as i32).rem_euclid(2) == 1)
        .collect()
}

#[test]
fn whittaker_series_matches_k_closed_form() {
    let mut checked = 0;
    for f in fields(&[2, 3, 5, 7]) {
        let alg = LocalAlgebra::for_field(&f).unwrap();
        let case = SchwartzCase::default_for(&f);
        for y in y1_samples(&f, &alg) {
            for vq in vq_range(&f) {
                let pt = LocalPoint::from_coords(&alg, y.clone(), Some(vq), 0);
                let closed = match k_derivative(&f, case, &pt) {
                    Ok(k) => k,
                    Err(colmez_core::Error::Unsupported(_)) => continue,
                    Err(e) => panic!("{e}"),
                };
                for src in [IntegralSource::Analytic, IntegralSource::Enumerated] {
                    if src == IntegralSource::Enumerated && f.p > 5 {
                        continue;
                    }
                    let rf = whittaker_rf(&f, case, &pt, SeriesKind::Whittaker, src).unwrap();
                    let series = rf_log_derivative(&rf).unwrap();
                    assert_eq!(series, closed, "{f:?} y={y:?} vq={vq} {src:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn intertwining_series_matches_c_closed_form() {
    for f in fields(&[2, 3, 5, 7]) {
        let alg = LocalAlgebra::for_field(&f).unwrap();
        let case = SchwartzCase::default_for(&f);
        for y in y1_samples(&f, &alg) {
            let pt = LocalPoint::from_coords(&alg, y.clone(), None, 0);
            let closed = c_derivative(&f, case, &pt).unwrap();
            for src in [IntegralSource::Analytic, IntegralSource::Enumerated] {
                if src == IntegralSource::Enumerated && f.p > 5 {
                    continue;
                }
                let rf = whittaker_rf(&f, case, &pt, SeriesKind::Intertwining, src).unwrap();
                assert_eq!(rf_log_derivative(&rf).unwrap(), closed, "{f:?} y={y:?} {src:?}");
            }
        }
    }
}

#[test]
fn split_intertwining_series_matches_c_closed_form() {
    for p in [2u64, 3, 5] {
        for v_d in 0..=2u32 {
            let f = LocalFieldData::new(p, p, v_d, 0, Ramification::Split, 0).unwrap();
            let alg = LocalAlgebra::for_field(&f).unwrap();
            let mut cases = vec![SchwartzCase::Standard];
            if v_d == 0 {
                cases.push(SchwartzCase::S2);
            }
            for case in cases {
                for va in -1..=1 {
                    for vd in -1..=1 {
                        let y = LocalAlgebra::from_split_components(&pow_rat(p, va), &pow_rat(p, vd));
                        let pt = LocalPoint::from_coords(&alg, y, None, 0);
                        let closed = c_derivative(&f, case, &pt).unwrap();
                        let mut srcs = vec![IntegralSource::Analytic];
                        if p <= 3 || case == SchwartzCase::Standard && v_d == 0 {
                            srcs.push(IntegralSource::Enumerated);
                        }
                        for src in srcs {
                            let rf = whittaker_rf(&f, case, &pt, SeriesKind::Intertwining, src).unwrap();
                            assert_eq!(
                                rf_log_derivative(&rf).unwrap(),
                                closed,
                                "p={p} v_d={v_d} {case:?} ({va},{vd}) {src:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn s2_intertwining_derivative_on_the_unit_norm_shell() {
    // independent of the closed form: (1−X)²/(1−X/N)·Σ X^n(1 + (1−1/N)(n+2))
    // against the same with n in place of n + 2 gives the ψ₂ − ψ₁ offset 2 log N
    for p in [2u64, 3] {
        let f = LocalFieldData::new(p, p, 0, 0, Ramification::Split, 0).unwrap();
        let alg = LocalAlgebra::for_field(&f).unwrap();
        let pt = LocalPoint::from_coords(&alg, elt(1, 0), None, 0);
        let rf = whittaker_rf(&f, SchwartzCase::S2, &pt, SeriesKind::Intertwining, IntegralSource::Enumerated)
            .unwrap();
        let w = Rational::from((-2, 1 + p + p * p));
        assert_eq!(rf_log_derivative(&rf).unwrap(), LogLinearValue::log_times(p, w));
    }
}

#[test]
fn volume_matches_enumeration() {
    for f in fields(&[2, 3, 5]) {
        let alg = LocalAlgebra::for_field(&f).unwrap();
        for vq in vq_range(&f) {
            let s = alg.y2_coefficient(vq).unwrap();
            let a = alg.q_near_j() * alg.norm(&s);
            let approx = PadicApprox::from_rational(&a, f.p, 16);
            for n in 0..=6 {
                let analytic = volume_dn(&f, n, vq).unwrap().volume(f.v_dd);
                let depth = (n + f.v_d as i32 + f.v_dd as i32 + 2) as u32;
                let oracle = volume_dn_oracle(&f, n, &approx, depth).unwrap();
                assert_eq!(analytic, oracle, "{f:?} vq={vq} n={n}");
                let again = volume_dn_oracle(&f, n, &approx, depth + 1).unwrap();
                assert_eq!(oracle, again);
            }
        }
    }
}

#[test]
fn m_coset_sums_reproduce_closed_form() {
    for f in fields(&[2, 3, 5]) {
        if f.b_nonsplit {
            continue;
        }
        let alg = LocalAlgebra::for_field(&f).unwrap();
        for y in [elt(1, 0), elt(0, 1), elt(1, 1), elt(f.p as i64, 0)] {
            for vq in vq_range(&f).into_iter().filter(|&v| v >= 0) {
                let s = alg.y2_coefficient(vq).unwrap();
                let qy = alg.norm(&y) + alg.q_near_j() * alg.norm(&s);
                let k = colmez_core::localkernel::padic::vp(&qy, f.p).unwrap();
                if k > 3 {
                    continue;
                }
                let pt = LocalPoint::from_coords(&alg, y.clone(), Some(vq), 0);
                let closed = m_multiplicity(&f, SchwartzCase::Standard, &pt).unwrap();
                assert_eq!(m_coset_sum(&f, &y, &s, 0).unwrap(), closed, "{f:?} y={y:?} vq={vq}");
            }
        }
    }
}

#[test]
fn n_coset_sums_reproduce_closed_form() {
    for f in fields(&[2, 3, 5]) {
        if f.b_nonsplit {
            continue;
        }
        let alg = LocalAlgebra::for_field(&f).unwrap();
        let pi = alg.uniformizer().unwrap().clone();
        for k in 0..=3 {
            let y = alg.pow(&pi, k).unwrap();
            let pt = LocalPoint::from_coords(&alg, y.clone(), None, 0);
            let vq = pt.y1.vq().unwrap();
            if vq > 4 {
                continue;
            }
            let closed = n_multiplicity(&f, SchwartzCase::Standard, &pt).unwrap();
            assert_eq!(n_coset_sum_nonsplit(&f, vq).unwrap(), closed, "{f:?} k={k}");
        }
    }
}

#[test]
fn nonsplit_b_multiplicity_matches_cherednik_sum() {
    for p in [2u64, 3, 5, 7] {
        let f = LocalFieldData::new(p, p, 0, 0, Ramification::Inert, 1).unwrap();
        let alg = LocalAlgebra::for_field(&f).unwrap();
        for y in [elt(1, 0), elt(0, 1), elt(p as i64, 0), elt(1, p as i64)] {
            for vq in (0..=8).step_by(2) {
                let s = alg.y2_coefficient(vq).unwrap();
                if alg.norm(&y) + alg.q_near_j() * alg.norm(&s) == 0 {
                    continue;
                }
                let pt = LocalPoint::from_coords(&alg, y.clone(), Some(vq), 0);
                let closed = m_multiplicity(&f, SchwartzCase::Unit, &pt).unwrap();
                let sum = m_nonsplit_coset_sum(&alg, &y, &s, 0).unwrap();
                assert_eq!(sum, closed, "p={p} y={y:?} vq={vq}");
            }
        }
    }
}

#[test]
fn split_n_matches_half_valuation_for_the_standard_function() {
    for p in [2u64, 3, 7] {
        let f = LocalFieldData::new(p, p, 1, 0, Ramification::Split, 0).unwrap();
        for va in -2..=3 {
            for vd in -2..=3 {
                let pt = LocalPoint::new(Y1::Split { va: Some(va), vd: Some(vd) }, None, 0);
                let expect = if va >= 0 && vd >= 0 {
                    Rational::from((va + vd, 2))
                } else {
                    Rational::new()
                };
                assert_eq!(n_multiplicity(&f, SchwartzCase::Standard, &pt).unwrap(), expect);
            }
        }
    }
}

#[test]
fn ordinary_sums_telescope() {
    for n in [2u64, 3, 4, 5, 7, 9] {
        for r in 0..=3 {
            for a in 0..=6 {
                assert_eq!(ordinary_sum_check(a, n, r).unwrap(), Rational::from(a));
            }
        }
    }
}

#[test]
fn local_identity_holds_on_the_whole_grid() {
    let grid = default_grid();
    assert!(grid.len() >= 1000, "{}", grid.len());
    let mut failures = Vec::new();
    for g in &grid {
        let rep = prop92_check(&g.field, g.case, &g.point).unwrap();
        if !rep.pass {
            failures.push(format!("{}: lhs {} rhs {}", g.label, rep.lhs, rep.rhs));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_minus_m_is_locally_constant_in_y2(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        v_d in 0u32..=2,
        kind in 0usize..3,
        vq0 in 0i32..4,
    ) {
        let f = match kind {
            0 => LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, 0).unwrap(),
            1 => LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, 1).unwrap(),
            _ => LocalFieldData::new(p, p, v_d, if p == 2 { 2 } else { 1 }, Ramification::Ramified, 0).unwrap(),
        };
        let case = SchwartzCase::default_for(&f);
        let alg = LocalAlgebra::for_field(&f).unwrap();
        let step = if f.ram == Ramification::Inert { 2 } else { 1 };
        let base = if f.ram == Ramification::Inert { 3 - f.v_qj as i32 } else { 0 };
        for y in [elt(1, 0), elt(p as i64, 0)] {
            let at = |v: i32| {
                let pt = LocalPoint::from_coords(&alg, y.clone(), Some(v), 0);
                let k = k_derivative(&f, case, &pt).unwrap();
                let m = m_multiplicity(&f, case, &pt).unwrap();
                k - LogLinearValue::log_times(p, m)
            };
            let v = base + step * vq0;
            prop_assert_eq!(at(v), at(v + step));
        }
    }

    #[test]
    fn series_and_closed_form_agree_for_random_inert_points(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        v_d in 0u32..=3,
        v_qj in 0u32..=1,
        half_vq in -2i32..=4,
        unit in any::<bool>(),
    ) {
        let f = LocalFieldData::new(p, p, v_d, 0, Ramification::Inert, v_qj).unwrap();
        let case = SchwartzCase::default_for(&f);
        let vq = 2 * half_vq + 1 - v_qj as i32;
        let y1 = if unit { Y1::Integral { vq: Some(0) } } else { Y1::Integral { vq: Some(2) } };
        let pt = LocalPoint::new(y1, Some(vq), 0);
        let rf = whittaker_rf(&f, case, &pt, SeriesKind::Whittaker, IntegralSource::Analytic).unwrap();
        prop_assert_eq!(rf_log_derivative(&rf).unwrap(), k_derivative(&f, case, &pt).unwrap());
    }

    #[test]
    fn local_identity_for_random_split_points(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        v_d in 0u32..=4,
        va in -4i32..=4,
        vd in -4i32..=4,
        u_val in -1i32..=1,
        s2 in any::<bool>(),
    ) {
        let f = LocalFieldData::new(p, p, if s2 { 0 } else { v_d }, 0, Ramification::Split, 0).unwrap();
        let case = if s2 { SchwartzCase::S2 } else { SchwartzCase::Standard };
        let pt = LocalPoint::new(Y1::Split { va: Some(va), vd: Some(vd) }, None, u_val);
        prop_assert!(prop92_check(&f, case, &pt).unwrap().pass);
    }
}
