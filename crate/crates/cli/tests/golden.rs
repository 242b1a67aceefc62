//! Goldens are regenerated with `KZH_BLESS=1 cargo test -p kzh-cli --test golden`.

use std::path::PathBuf;

use kzh_analytic::dual_kz_check;
use kzh_core::chevalley::{build_chain_complex, homology_dims};
use kzh_core::connections::build_cocycle;
use kzh_core::liealg::{casimir_sl2, ColorMap, MultiDegree, RootData};
use kzh_core::logforms::{build_w_a, build_w_b, skew_fiber_complex};
use kzh_core::scalars::{int, rat, Rational, SeededSampler};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("KZH_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

fn sl2(m: &[Rational]) -> RootData {
    RootData::sl2(m).unwrap()
}

#[test]
fn n2_forms() {
    let mut s = String::new();
    for a in [[2, 0], [1, 1], [0, 2]] {
        s += &format!("w_a({},{}) = {}\n", a[0], a[1], build_w_a(&a));
    }
    for b in [[1, 0], [0, 1]] {
        s += &format!("w_b({},{}) = {}\n", b[0], b[1], build_w_b(&b));
    }
    golden("n2_forms.txt", &s);
}

#[test]
fn casimir_on_weight_one() {
    let mut s = String::new();
    for m in [[int(1), int(1)], [int(3), int(5)], [rat(-1, 2), rat(7, 3)]] {
        let rd = sl2(&m);
        let om = casimir_sl2(&rd, 0, 1, &MultiDegree(vec![1])).unwrap();
        s += &format!("m = ({}, {}): {}\n", m[0], m[1], om);
        let dk = dual_kz_check(&rd, &mut SeededSampler::new(3), 1).unwrap();
        assert_eq!(dk.omega, om);
    }
    golden("casimir_m1.txt", &s);
}

#[test]
fn dimension_tables_two_points_one_t() {
    let rd = sl2(&[int(1), int(2)]);
    let cc = build_chain_complex(&rd, &MultiDegree(vec![1])).unwrap();
    let c = build_cocycle(&rd, 1).unwrap();
    let fiber = skew_fiber_complex(&rd, &ColorMap(vec![0]), &[int(0), int(3)], &mut SeededSampler::new(5)).unwrap();
    let mut s = String::new();
    s += &format!("chain dims: {:?}\n", cc.complex.dims);
    s += &format!("chain homology: {:?}\n", homology_dims(&cc.complex));
    s += &format!("euler characteristic: {}\n", cc.complex.euler_characteristic());
    s += &format!("I0 terms: {}\n", c.i0.comps.len());
    s += &format!("I1 terms: {}\n", c.i1.comps.len());
    s += &format!("fiber dims: {:?}\n", fiber.dims());
    s += &format!("fiber cohomology: {:?}\n", fiber.cohomology_dims());
    golden("dims_2_1.txt", &s);
}
