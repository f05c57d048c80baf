mod common;

use masbound::model::validate;
use masbound::montecarlo::{random_stable_system, run_study, study_csv, system_seed, StudyConfig};

fn small(count: usize, seed: u64) -> StudyConfig {
    StudyConfig { count, master_seed: seed, order_max: 5, ..StudyConfig::default() }
}

#[test]
fn study_ignores_thread_count() {
    let cfg = small(24, 3);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_study(&cfg)).unwrap()
    };
    let (rows1, sum1) = run(1);
    let (rows4, sum4) = run(4);
    assert_eq!(study_csv(&rows1), study_csv(&rows4));
    assert_eq!(sum1, sum4);
    assert!(rows1.iter().enumerate().all(|(i, r)| r.system_id == i));
}

#[test]
fn study_rows_are_sound() {
    let (rows, summary) = run_study(&small(30, 9)).unwrap();
    assert_eq!(summary.count, 30);
    for r in &rows {
        assert_eq!(r.status, "ok", "row {}", r.system_id);
        let (t, tf) = (r.t_star.unwrap(), r.t_star_forced.unwrap());
        assert!(t <= r.m1.unwrap() && t <= r.m2.unwrap());
        assert!(tf <= r.m1_forced.unwrap() && tf <= r.m2_forced.unwrap());
    }
    assert_eq!(summary.frac_m1_sound, Some(1.0));
    assert_eq!(summary.frac_m2_forced_sound, Some(1.0));
}

#[test]
fn order_is_uniform() {
    // χ² with 7 degrees of freedom, 1% upper quantile 18.475
    let cfg = StudyConfig::default();
    let draws = 10_000;
    let mut counts = [0usize; 8];
    for id in 0..draws {
        let (sys, _) = random_stable_system(system_seed(17, id), &cfg).unwrap();
        counts[sys.order() - 1] += 1;
    }
    let expected = draws as f64 / 8.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 18.475, "χ² = {chi2}, counts {counts:?}");
}

#[test]
fn generated_systems_pass_rejection_rules() {
    let cfg = StudyConfig::default();
    for id in 0..200 {
        let (sys, bx) = random_stable_system(system_seed(5, id), &cfg).unwrap();
        let v = validate(&sys, &bx, &cfg.thresholds).unwrap();
        assert!(v.spectral_radius < cfg.thresholds.max_spectral_radius);
        assert!(v.min_obsv_singular_value >= cfg.thresholds.min_obsv_singular_value);
        assert!((common::na_spectral_radius(sys.a()) - v.spectral_radius).abs() < 1e-6);
        assert_eq!((sys.outputs(), sys.inputs()), (1, 1));
        assert_eq!((bx.lower(), bx.upper()), (&[1.0][..], &[1.0][..]));
    }
}

#[test]
fn bad_configs_are_rejected() {
    assert!(run_study(&StudyConfig { count: 0, ..StudyConfig::default() }).is_err());
    assert!(run_study(&StudyConfig { epsilon: 0.0, count: 1, ..StudyConfig::default() }).is_err());
    assert!(run_study(&StudyConfig { order_min: 4, order_max: 2, count: 1, ..StudyConfig::default() }).is_err());
}
