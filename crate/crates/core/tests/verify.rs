use std::time::Instant;

use spherica::builtin::BuiltinPair;
use spherica::gelfand::compute_spherical_functions;
use spherica::verify::{random_multiplier, replay, run_suite, CheckId, Mode, MultiplierKind, SuiteOptions};
use spherica::{GroupOptions, SphericalTable};

fn table(spec: &str) -> SphericalTable {
    let pair = spec
        .parse::<BuiltinPair>()
        .unwrap()
        .group_file()
        .build(&GroupOptions::default())
        .unwrap();
    compute_spherical_functions(&pair, 0, 1e-6).unwrap()
}

fn opts(trials: usize) -> SuiteOptions {
    SuiteOptions {
        name: "test".into(),
        trials,
        ..Default::default()
    }
}

#[test]
fn random_multiplier_kinds() {
    let a = random_multiplier(9, 5, MultiplierKind::ComplexGaussian);
    assert_eq!(a, random_multiplier(9, 5, MultiplierKind::ComplexGaussian));
    assert_ne!(a, random_multiplier(9, 6, MultiplierKind::ComplexGaussian));
    let n = random_multiplier(9, 5, MultiplierKind::Nonnegative);
    assert!(n.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0));
    for s in 1..10 {
        let sp = random_multiplier(s, 3, MultiplierKind::Sparse);
        let zeros = sp.values().iter().filter(|v| v.norm() == 0.0).count();
        assert_eq!(zeros, s / 2);
    }
    let r = random_multiplier(16, 1, MultiplierKind::Rademacher);
    assert!(r.values().iter().all(|v| v.im == 0.0 && v.re.abs() == 1.0));
    for k in ["complex-gaussian", "nonnegative", "sparse", "rademacher"] {
        k.parse::<MultiplierKind>().unwrap();
    }
    assert!("uniform".parse::<MultiplierKind>().is_err());
}

#[test]
fn cyclic_suite_passes_with_zero_diagnostics() {
    let report = run_suite(&table("cyc:6"), &opts(200));
    assert!(report.all_pass(), "{report:#?}");
    assert_eq!(report.checks.len(), 15);
    let v15 = report.check(CheckId::V15);
    assert_eq!(v15.mode, Mode::Diagnostic);
    assert!(v15.worst <= 1e-12, "{v15:?}");
}

#[test]
fn s3_suite_passes_and_reports_convention_gap() {
    let report = run_suite(&table("sym:3"), &opts(200));
    assert!(report.all_pass(), "{report:#?}");
    let v15 = report.check(CheckId::V15);
    assert!(v15.extra["uncorrected_diagonal"] > 0.1);
    assert!(v15.extra["norm_sq_defect"] > 0.4);
    assert!(report.check(CheckId::V12).extra["s1_ratio"] <= 1.0 + 1e-12);
    assert!(report.pair.bounded_equals_positive);
}

#[test]
fn zero_trials_keeps_deterministic_samples() {
    let report = run_suite(&table("dih:5"), &opts(0));
    assert!(report.all_pass());
    assert!(report.check(CheckId::V7).witness.is_some());
    assert!(report.check(CheckId::V14).witness.is_none());
    assert!(report.check(CheckId::V7).margin.unwrap() >= -1e-9);
}

#[test]
fn witnesses_replay_exactly() {
    let t = table("dih:6");
    let o = SuiteOptions {
        seed: 17,
        ..opts(40)
    };
    let report = run_suite(&t, &o);
    for c in &report.checks {
        if let Some(w) = &c.witness {
            let text = serde_json::to_string(w).unwrap();
            let back = serde_json::from_str(&text).unwrap();
            assert_eq!(replay(c.id, &t, &back, o.seed).unwrap(), c.worst, "{}", c.id);
        }
    }
}

#[test]
fn report_is_deterministic() {
    let t = table("sym:4");
    let a = serde_json::to_string(&run_suite(&t, &opts(30))).unwrap();
    let b = serde_json::to_string(&run_suite(&t, &opts(30))).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&run_suite(&t, &SuiteOptions { seed: 1, ..opts(30) })).unwrap();
    assert_ne!(a, c);
}

#[test]
fn larger_pairs_pass() {
    for spec in ["dih:12", "sym:5", "cyc:64", "full:4"] {
        let start = Instant::now();
        let report = run_suite(&table(spec), &opts(200));
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
        assert!(failed.is_empty(), "{spec}: {failed:#?}");
        eprintln!("{spec}: {:?}", start.elapsed());
    }
}
