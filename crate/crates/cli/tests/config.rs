use kzh_cli::{Job, Overrides, RawConfig};
use proptest::prelude::*;
use serde_json::json;

fn job(v: serde_json::Value) -> Result<Job, kzh_cli::CliError> {
    let raw: RawConfig = serde_json::from_value(v).unwrap();
    Job::from_raw(&raw, &Overrides::default())
}

#[test]
fn defaults() {
    let j = job(json!({})).unwrap();
    assert_eq!(j.rd.n(), 2);
    assert_eq!(j.big_n(), 1);
    assert_eq!(j.seed, 7);
    assert_eq!(j.contour, (0, 1));
    assert_eq!(j.kappa, kzh_cli::KappaSetting::Formal);
}

#[test]
fn overrides_win() {
    let raw: RawConfig = serde_json::from_value(json!({"seed": 3, "kappa": "2"})).unwrap();
    let j = Job::from_raw(&raw, &Overrides { seed: Some(9), trials: None, kappa: Some("-5/3".into()) }).unwrap();
    assert_eq!(j.seed, 9);
    assert_eq!(j.echo()["kappa"], "-5/3");
}

#[test]
fn field_paths_in_errors() {
    let cases = [
        (json!({"kappa": "0"}), "kappa"),
        (json!({"algebra": {"sl2": ["1", "1/0x"]}}), "algebra.sl2[1]"),
        (json!({"problem": {"N": 2, "k": [3]}}), "problem.N"),
        (json!({"options": {"contour": [0, 2]}}), "options.contour"),
        (json!({"options": {"z": ["1", "1"]}}), "options.z"),
        (json!({"tolerances": {"residual": -1.0}}), "tolerances.residual"),
    ];
    for (v, path) in cases {
        match job(v.clone()) {
            Err(kzh_cli::CliError::Config { path: p, .. }) => assert_eq!(p, path, "{v}"),
            other => panic!("{v}: {other:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn echo_round_trips(
        m in proptest::collection::vec((-9i64..9, 1i64..6), 1..4),
        big_n in 1usize..3,
        kappa in prop_oneof![Just(None), (1i64..9, 1i64..5).prop_map(Some)],
        trials in 1usize..9,
    ) {
        let sl2: Vec<String> = m.iter().map(|(p, q)| format!("{p}/{q}")).collect();
        let mut cfg = json!({"algebra": {"sl2": sl2}, "problem": {"N": big_n}, "trials": trials});
        if let Some((p, q)) = kappa {
            cfg["kappa"] = json!(format!("{p}/{q}"));
        }
        let a = job(cfg).unwrap().echo();
        let b = job(a.clone()).unwrap().echo();
        prop_assert_eq!(a, b);
    }
}
