use kzh_core::liealg::{ColorMap, MultiDegree, RootData};
use kzh_core::logforms::*;
use kzh_core::scalars::{int, KappaScalar, SeededSampler};

fn zt(i: usize, a: usize) -> LogForm {
    LogForm::generator(LogGenerator::ZT(i, a))
}

fn tt(a: usize, b: usize) -> LogForm {
    LogForm::generator(LogGenerator::tt(a, b))
}

#[test]
fn two_mixed_generators_are_independent() {
    let amb = Ambient::full(2, 1);
    let forms = [zt(0, 0), zt(1, 0)];
    let mut s = SeededSampler::new(1);
    assert_eq!(span_dim(&forms, &amb, &mut s, amb.default_trials()).unwrap(), 2);
}

#[test]
fn repeated_form_has_one_relation() {
    let amb = Ambient::full(1, 1);
    let forms = [zt(0, 0), zt(0, 0)];
    let mut s = SeededSampler::new(2);
    let rels = relations(&forms, &amb, &mut s, amb.default_trials()).unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0][0], -rels[0][1].clone());
}

#[test]
fn arnold_relation_is_recovered() {
    let forms = [tt(0, 1).wedge(&tt(1, 2)), tt(1, 2).wedge(&tt(0, 2)), tt(0, 2).wedge(&tt(0, 1))];
    let amb = Ambient::full(0, 3);
    let mut s = SeededSampler::new(3);
    let t = amb.default_trials();
    assert_eq!(span_dim(&forms, &amb, &mut s, t).unwrap(), 2);
    let rels = relations(&forms, &amb, &mut s, t).unwrap();
    assert_eq!(rels.len(), 1);
    assert!(rels[0].iter().all(|c| *c == rels[0][0]));
}

#[test]
fn alt_identity_for_one_t() {
    let w = zt(0, 0).add(&zt(1, 0).scale(&KappaScalar::kappa()));
    assert_eq!(alt(&w, 1), w);
}

#[test]
fn alt_twice_is_factorial_times_alt() {
    let mut s = SeededSampler::new(4);
    let gens = [LogGenerator::ZT(0, 0), LogGenerator::ZT(1, 1), LogGenerator::tt(0, 2), LogGenerator::ZT(0, 2)];
    for _ in 0..10 {
        let mut w = LogForm::zero();
        for (i, &g) in gens.iter().enumerate() {
            let c = KappaScalar::from_rational(s.rational());
            let h = gens[(i + 1) % gens.len()];
            w = w.add(&LogForm::monomial(vec![g, h], c));
        }
        assert_eq!(alt(&alt(&w, 3), 3), alt(&w, 3).scale(&KappaScalar::from_int(6)));
        assert!(is_skew(&alt(&w, 3), &ColorMap(vec![0, 0, 0])));
    }
}

#[test]
fn w_a_for_two_at_first_point() {
    assert_eq!(build_w_a(&[2, 0]), zt(0, 0).wedge(&zt(0, 1)));
}

#[test]
fn w_b_single_block() {
    // Alt over t_1 <-> t_2 of -k dln(t2-z1)
    let expected = zt(0, 1).sub(&zt(0, 0)).scale(&-KappaScalar::kappa());
    assert_eq!(build_w_b(&[1, 0]), expected);
}

#[test]
fn omega_for_two_points_one_t() {
    let rd = RootData::sl2(&[int(3), int(5)]).unwrap();
    let w = omega_coulomb(&rd, &ColorMap(vec![0]));
    let expected = LogForm::generator(LogGenerator::zz(0, 1))
        .scale(&KappaScalar::from_rational(int(15) / int(2)))
        .sub(&zt(0, 0).scale(&KappaScalar::from_int(3)))
        .sub(&zt(1, 0).scale(&KappaScalar::from_int(5)));
    assert_eq!(w, expected);
    let (wz, wt) = omega_split(&w);
    assert_eq!(wz.add(&wt), w);
}

#[test]
fn evaluation_is_multiplicative() {
    let mut s = SeededSampler::new(5);
    let a = build_w_a(&[1, 1]);
    let b = build_w_b(&[1, 0, 0]).add(&zt(2, 0));
    for _ in 0..5 {
        let p = s.sample_point(3, 2).unwrap();
        assert_eq!(evaluate(&a.wedge(&b), &p), evaluate(&a, &p).wedge(&evaluate(&b, &p)));
    }
}

#[test]
fn built_forms_are_skew() {
    let pi = ColorMap(vec![0, 0, 0]);
    for a in multi_indices(2, 3) {
        assert!(is_skew(&build_w_a(&a), &pi));
    }
    for b in multi_indices(2, 2) {
        assert!(is_skew(&build_w_b(&b), &pi));
    }
}

#[test]
fn aomoto_two_points_resonance() {
    let rd = RootData::sl2(&[int(1), int(2)]).unwrap();
    let c = aomoto_complex(&rd, 1, &[int(0), int(3)], &mut SeededSampler::new(6)).unwrap();
    assert_eq!(c.cohomology_dims(), vec![0, 1]);
    // the differential is k-independent up to the 1/k factor; no finite k makes it vanish
    assert_eq!(c.cohomology_dims_at(&int(5)), Some(vec![0, 1]));
}

/// Coefficients of Π_{j<N} (1 + (n+j) t).
fn poincare(n: usize, big_n: usize) -> Vec<usize> {
    let mut c = vec![1usize];
    for j in 0..big_n {
        let r = n + j;
        let mut next = vec![0; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] += r * x;
        }
        c = next;
    }
    c
}

#[test]
fn fiber_monomial_spans_match_poincare() {
    for n in 1..=3 {
        for big_n in 1..=3 {
            let z: Vec<_> = (0..n as i64).map(|i| int(3 * i - 1)).collect();
            let amb = Ambient::fiber(z, big_n);
            let expected = poincare(n, big_n);
            for (d, &e) in expected.iter().enumerate() {
                let forms = fiber_monomials(n, big_n, d);
                let mut s = SeededSampler::new(100 + d as u64);
                let trials = amb.trials_for(forms.len(), d);
                assert_eq!(span_dim(&forms, &amb, &mut s, trials).unwrap(), e, "n={n} N={big_n} d={d}");
            }
        }
    }
}

#[test]
fn skew_model_matches_w_model_for_small_cases() {
    let rd = RootData::sl2(&[int(1), int(2)]).unwrap();
    let z = [int(0), int(3)];
    for big_n in 1..=2 {
        let pi = ColorMap::standard(&MultiDegree(vec![big_n]));
        let skew = skew_fiber_complex(&rd, &pi, &z, &mut SeededSampler::new(8)).unwrap();
        let w = aomoto_complex(&rd, big_n, &z, &mut SeededSampler::new(8)).unwrap();
        let top = skew.dims();
        assert_eq!(top[big_n], w.dims()[1], "N={big_n}");
    }
}

#[test]
fn skew_span_saturates_from_one_point() {
    // one point gives only 4 independent rows for these 24 skew 3-forms
    let pi = ColorMap(vec![0, 0]);
    let amb = Ambient::full(3, 2);
    let fam = dedup_forms(log_monomials(3, 2, 3).iter().map(|m| alt_colored(m, &pi)).collect());
    assert_eq!(span_dim(&fam, &amb, &mut SeededSampler::new(4), 1).unwrap(), 24);
}
