//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero only if a criterion that is expected to hold fails.
//!
//! Criteria 3 and 7 carry known red parts; see `EXPECTED_RED`.

use std::time::{Duration, Instant};

use kzh_analytic::{
    coker_solution_check, dual_kz_check, integrate_solution, kz_residual, Contour, MasterFunction, ZGrid,
};
use kzh_core::connections::{
    build_cocycle, check_coulomb_flatness, check_flatness, e1_comparison, eta_from_cocycle, eta_tilde_lift,
    generic_quasi_iso, kz_form, source_model, target_model, verify_chain_map, verify_cocycle, Cocycle, Sl2Casimir,
};
use kzh_core::liealg::{casimir_sl2, lyndon_words, ColorMap, MultiDegree, RootData};
use kzh_core::logforms::{
    build_w_a, build_w_b, fiber_monomials, omega_coulomb, skew_fiber_complex, span_dim, Ambient, LogForm, LogGenerator,
};
use kzh_core::oracle::{fiber_poincare, free_lie_dim_brute_force};
use kzh_core::scalars::{int, rat, ExactMatrix, KappaScalar, Rational, SeededSampler};

const POINTS: usize = 5;
const COCYCLE_CASES: [(usize, usize); 5] = [(1, 1), (2, 1), (2, 2), (3, 2), (2, 3)];
const COCYCLE_BUDGET: Duration = Duration::from_secs(60);
const NUMERIC_BUDGET: Duration = Duration::from_secs(30);
const QUAD_TOL: f64 = 1e-10;
const GRID_STEP: f64 = 1e-3;
const KZ_TOL: f64 = 1e-6;
const SINGULAR_TOL: f64 = 1e-6;
const KAPPA0: f64 = 3.0;
const MAX_LIE_DEGREE: usize = 5;
const MAX_LIE_RANK: usize = 3;
const MAX_FIBER: usize = 3;

/// Criteria whose failure is documented and does not fail the run.
const EXPECTED_RED: [&str; 2] = ["3", "7"];

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn random_sl2(s: &mut SeededSampler, n: usize) -> RootData {
    RootData::sl2(&(0..n).map(|_| s.nonzero_rational()).collect::<Vec<_>>()).unwrap()
}

fn cocycles(seed: u64) -> Vec<(usize, usize, Cocycle)> {
    let mut s = SeededSampler::new(seed);
    COCYCLE_CASES.iter().map(|&(n, big_n)| (n, big_n, build_cocycle(&random_sl2(&mut s, n), big_n).unwrap())).collect()
}

fn criterion_1_2() -> (Line, Line) {
    let start = Instant::now();
    let mut s = SeededSampler::new(101);
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for (n, big_n, c) in cocycles(100) {
        let r = verify_cocycle(&c, &mut s, POINTS).unwrap();
        for name in ["nabla_i0", "nabla_i1_minus_dch_i0"] {
            if !r.get(name).unwrap().passed {
                c1.push(format!("(n,N)=({n},{big_n}) {name}"));
            }
        }
        for name in ["lemma_p1", "lemma_p2"] {
            if !r.get(name).unwrap().passed {
                c2.push(format!("(n,N)=({n},{big_n}) {name}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let in_budget = elapsed < COCYCLE_BUDGET;
    (
        Line {
            id: "1",
            passed: c1.is_empty() && in_budget,
            detail: format!(
                "cocycle identities exact at {POINTS} points on {} cases in {:.2}s (budget {}s){}",
                COCYCLE_CASES.len(),
                elapsed.as_secs_f64(),
                COCYCLE_BUDGET.as_secs(),
                if c1.is_empty() { String::new() } else { format!("; failing: {}", c1.join(", ")) }
            ),
        },
        Line {
            id: "2",
            passed: c2.is_empty(),
            detail: if c2.is_empty() { "P1 and P2 vanish separately on every case".into() } else { c2.join(", ") },
        },
    )
}

fn zt(i: usize, a: usize) -> LogForm {
    LogForm::generator(LogGenerator::ZT(i, a))
}

fn criterion_3() -> Line {
    let k = KappaScalar::kappa();
    // as printed
    let printed_wa = zt(0, 0).wedge(&zt(0, 1));
    let printed_wb = zt(0, 1).add(&zt(1, 0)).scale(&-k.clone());
    let wa = build_w_a(&[2, 0]);
    let wb = build_w_b(&[1, 0]);
    let wa_ok = wa == printed_wa;
    let wb_ok = wb == printed_wb;
    let mut casimir_ok = true;
    for m in [[int(1), int(1)], [int(3), int(5)], [rat(-1, 2), rat(7, 3)], [rat(2, 9), int(-4)]] {
        let (m1, m2) = (m[0].clone(), m[1].clone());
        let two = int(2);
        let printed = ExactMatrix::from_rationals(&[
            vec![(&m1 - &two) * &m2 / &two, m2.clone()],
            vec![m1.clone(), &m1 * (&m2 - &two) / &two],
        ]);
        let rd = RootData::sl2(&m).unwrap();
        casimir_ok &= casimir_sl2(&rd, 0, 1, &MultiDegree(vec![1])).unwrap() == printed;
    }
    let mut detail = format!("w_a(2,0) {}; Casimir {}", verdict(wa_ok), verdict(casimir_ok));
    if wb_ok {
        detail += "; w_b(1,0) matches";
    } else {
        detail += &format!("; w_b(1,0) differs from the printed form: computed {wb}, printed {printed_wb}");
    }
    Line { id: "3", passed: wa_ok && wb_ok && casimir_ok, detail }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "matches"
    } else {
        "DIFFERS"
    }
}

fn criterion_4() -> Line {
    let mut s = SeededSampler::new(104);
    let mut bad = Vec::new();
    for n in 1..=3 {
        for big_n in 1..=2 {
            let rd = random_sl2(&mut s, n);
            let k = MultiDegree(vec![big_n]);
            let f = kz_form(&rd, &k, &Sl2Casimir::new(&rd).unwrap()).unwrap();
            if !check_flatness(&f, &mut s, POINTS).unwrap().passed {
                bad.push(format!("KZ ({n},{big_n})"));
            }
            let omega = omega_coulomb(&rd, &ColorMap::standard(&k));
            if !check_coulomb_flatness(&f, &omega, big_n, &mut s, POINTS).unwrap().passed {
                bad.push(format!("KZ-Coulomb ({n},{big_n})"));
            }
        }
    }
    Line {
        id: "4",
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "both curvatures vanish for n <= 3, N <= 2".into() } else { bad.join(", ") },
    }
}

fn criterion_5() -> Line {
    let mut s = SeededSampler::new(105);
    let mut bad = Vec::new();
    let inv = KappaScalar::kappa().inv().unwrap();
    for (n, big_n, c) in cocycles(100) {
        let et = eta_tilde_lift(&eta_from_cocycle(&c));
        let r = verify_chain_map(&et, &c.spaces, &c.omega, &mut s, POINTS).unwrap();
        if !r.passed() {
            bad.push(format!("({n},{big_n}) {:?}", r.checks.iter().filter(|x| !x.passed).map(|x| &x.name).collect::<Vec<_>>()));
        }
        let mut dropped = et.clone();
        dropped.assignment[1] = dropped.assignment[1].iter().map(|w| w.scale(&-inv.clone())).collect();
        let mut flipped = et.clone();
        flipped.assignment[1] = flipped.assignment[1].iter().map(|w| w.scale(&KappaScalar::from_int(-1))).collect();
        for (what, m) in [("dropped -k", dropped), ("flipped sign", flipped)] {
            if verify_chain_map(&m, &c.spaces, &c.omega, &mut s, POINTS).unwrap().passed() {
                bad.push(format!("({n},{big_n}) mutation `{what}` accepted"));
            }
        }
    }
    Line {
        id: "5",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "filtered chain map on all cocycle cases; both mutations rejected".into()
        } else {
            bad.join(", ")
        },
    }
}

fn criterion_6() -> Line {
    let mut s = SeededSampler::new(106);
    let mut bad = Vec::new();
    let mut dims = Vec::new();
    for big_n in [1, 2] {
        let rd = random_sl2(&mut s, 2);
        let pi = ColorMap(vec![0; big_n]);
        let c = build_cocycle(&rd, big_n).unwrap();
        let mut tgt = target_model(&rd, &pi, &mut s.child(1)).unwrap();
        let mut src = source_model(&c.spaces, big_n, &mut s.child(2)).unwrap();
        let et = eta_tilde_lift(&eta_from_cocycle(&c));
        let cmp = e1_comparison(&mut src, &mut tgt, &et).unwrap();
        let z = s.sample_point(2, 0).unwrap().z;
        let w = skew_fiber_complex(&rd, &pi, &z, &mut s.child(3)).unwrap().cohomology_dims();
        let row0 = &cmp.target.graded_dims[0];
        let ok = row0.len() >= w.len() && row0[..w.len()] == w[..] && row0[w.len()..].iter().all(|&d| d == 0);
        if !ok || !cmp.iso || !src.axioms.passed() || !cmp.chain_map.passed() {
            bad.push(format!("(2,{big_n}) E1 row 0 {row0:?} vs W {w:?}, iso {}", cmp.iso));
        }
        dims.push(format!("N={big_n}: W = {w:?}"));
    }
    Line {
        id: "6",
        passed: bad.is_empty(),
        detail: if bad.is_empty() { format!("E1 matches fiber cohomology ({})", dims.join("; ")) } else { bad.join(", ") },
    }
}

/// Candidate κ₀: small rationals of both signs, plus the values that make
/// some master-function exponent an integer for the sampled weights.
fn kappa_candidates(rd: &RootData) -> Vec<Rational> {
    let mut out = Vec::new();
    for p in 1..=6i64 {
        for q in 1..=3i64 {
            out.push(rat(p, q));
            out.push(rat(-p, q));
        }
    }
    for s in 0..rd.n() {
        let e = rd.mu_alpha(s, 0).clone();
        if e != int(0) {
            for j in 1..=3i64 {
                out.push(&e / int(j));
                out.push(-&e / int(j));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn criterion_7() -> Line {
    let mut s = SeededSampler::new(107);
    let mut generic_bad = Vec::new();
    let mut resonant_found = None;
    let mut tried = 0;
    for n in 1..=3 {
        for big_n in 1..=2 {
            let rd = random_sl2(&mut s, n);
            let c = build_cocycle(&rd, big_n).unwrap();
            let eta = eta_from_cocycle(&c);
            let z = s.sample_point(n, 0).unwrap().z;
            let q = generic_quasi_iso(&c, &eta, &z, None, &mut s.child(1)).unwrap();
            if !q.chain_map || !q.quasi_iso {
                generic_bad.push(format!("({n},{big_n})"));
            }
            if resonant_found.is_none() {
                for k0 in kappa_candidates(&rd) {
                    tried += 1;
                    let r = generic_quasi_iso(&c, &eta, &z, Some(&k0), &mut s.child(2)).unwrap();
                    if r.resonant == Some(true) {
                        resonant_found = Some(format!("k0 = {k0} at (n,N) = ({n},{big_n})"));
                        break;
                    }
                }
            }
        }
    }
    let a = generic_bad.is_empty();
    let b = resonant_found.is_some();
    let detail = format!(
        "(a) generic-k quasi-iso {}; (b) resonant k0 {}",
        if a { "holds for n <= 3, N <= 2".to_string() } else { format!("fails at {}", generic_bad.join(", ")) },
        match &resonant_found {
            Some(f) => format!("found: {f}"),
            None => format!("not found among {tried} candidates: every rank is unchanged under specialization"),
        }
    );
    Line { id: "7", passed: a && b, detail }
}

fn criterion_8() -> Line {
    let mut s = SeededSampler::new(108);
    let mut bad = Vec::new();
    for _ in 0..4 {
        let rd = random_sl2(&mut s, 2);
        let r = dual_kz_check(&rd, &mut s.child(1), POINTS).unwrap();
        if !r.checks.passed() {
            bad.push(format!("{:?}", r.checks));
        }
    }
    Line {
        id: "8",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "both dual KZ identities vanish exactly (Koszul-signed d_t, connection-form sign)".into()
        } else {
            bad.join("; ")
        },
    }
}

fn criterion_9() -> Line {
    let start = Instant::now();
    let rd = RootData::sl2(&[int(1), int(1)]).unwrap();
    let mf = MasterFunction::new(&rd, &ColorMap(vec![0]), KAPPA0).unwrap();
    let grid = ZGrid::stencils(vec![vec![0.0, 1.0], vec![-0.7, 0.4], vec![0.25, 2.5]], GRID_STEP);
    let sol = integrate_solution(&mf, &Contour::segment(0, 1), &grid, QUAD_TOL).unwrap();
    let res = kz_residual(&sol, &rd, KAPPA0).unwrap();
    let ck = coker_solution_check(&rd, KAPPA0, 3.5, &grid).unwrap();
    let quad = sol.errors.iter().cloned().fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let passed = res.max_residual < KZ_TOL
        && res.singular_relative < SINGULAR_TOL
        && quad <= QUAD_TOL
        && ck.projected < KZ_TOL
        && elapsed < NUMERIC_BUDGET;
    Line {
        id: "9",
        passed,
        detail: format!(
            "KZ residual {:.2e} (< {KZ_TOL:e}), |e.sol| rel {:.2e}, quadrature {:.1e}, coker {:.1e} (dim {}, vacuous {}), {:.2}s",
            res.max_residual,
            res.singular_relative,
            quad,
            ck.projected,
            ck.coker_dim,
            ck.vacuous,
            elapsed.as_secs_f64()
        ),
    }
}

fn multidegrees(r: usize, max: usize) -> Vec<MultiDegree> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out.into_iter().flat_map(|v: Vec<usize>| (0..=max).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().filter(|v| (1..=max).contains(&v.iter().sum())).map(MultiDegree).collect()
}

fn criterion_10() -> Line {
    let mut bad = Vec::new();
    let mut lie = 0;
    for r in 1..=MAX_LIE_RANK {
        for k in multidegrees(r, MAX_LIE_DEGREE) {
            lie += 1;
            let (a, b) = (lyndon_words(&k).len(), free_lie_dim_brute_force(&k));
            if a != b {
                bad.push(format!("k = {:?}: {a} vs {b}", k.0));
            }
        }
    }
    let mut fib = 0;
    for n in 1..=MAX_FIBER {
        for big_n in 1..=MAX_FIBER {
            let z: Vec<Rational> = (0..n as i64).map(|i| int(3 * i - 1)).collect();
            let amb = Ambient::fiber(z, big_n);
            let expected = fiber_poincare(n, big_n);
            let got: Vec<usize> = (0..expected.len())
                .map(|d| {
                    let forms = fiber_monomials(n, big_n, d);
                    let mut s = SeededSampler::new(110).child((n * 100 + big_n * 10 + d) as u64);
                    span_dim(&forms, &amb, &mut s, amb.trials_for(forms.len(), d)).unwrap()
                })
                .collect();
            fib += 1;
            if got != expected {
                bad.push(format!("(n,N) = ({n},{big_n}): {got:?} vs {expected:?}"));
            }
        }
    }
    Line {
        id: "10",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{lie} free-Lie multidegrees and {fib} fiber form spaces agree")
        } else {
            bad.join(", ")
        },
    }
}

fn main() {
    let (c1, c2) = criterion_1_2();
    let lines = [
        c1,
        c2,
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let mut unexpected = Vec::new();
    for l in &lines {
        println!("criterion {:>2}: {} {}", l.id, if l.passed { "PASS" } else { "FAIL" }, l.detail);
        if !l.passed && !EXPECTED_RED.contains(&l.id) {
            unexpected.push(l.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
