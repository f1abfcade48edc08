mod common;

use std::fs;

use common::{h2_path, H2_REFERENCE};
use vqe_verlet::harness::{
    compare, read_csv, run_experiment, ExperimentConfig, CHEMICAL_ACCURACY, CSV_HEADER,
};
use vqe_verlet::optimizers::{Method, OptimizerConfig, RunStatus};

fn h2_config(method: &str, iters: usize, out: Option<std::path::PathBuf>) -> ExperimentConfig {
    ExperimentConfig {
        hamiltonian_path: h2_path(),
        n_qubits: 4,
        depth: 4,
        optimizer: OptimizerConfig::new(Method::from_name(method).unwrap(), iters),
        seed: 18,
        reference_energy: H2_REFERENCE,
        output_path: out,
        threshold: CHEMICAL_ACCURACY,
        timing: false,
    }
}

#[test]
fn verlet_run_log_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verlet.csv");
    let report = run_experiment(&h2_config("verlet", 40, Some(path.clone()))).unwrap();
    assert_eq!(report.summary.total_evals, 6441);
    assert_eq!(report.summary.status, RunStatus::Completed);
    assert_eq!(report.final_params.len(), 40);

    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(text.lines().count(), 42);
    let rows = read_csv(&path).unwrap();
    assert_eq!(rows, report.records);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r.iteration, k);
        assert_eq!(r.cumulative_evals, 1 + 161 * k as u64);
        assert_eq!(r.abs_error, (r.energy - H2_REFERENCE).abs());
        assert_eq!(r.elapsed, 0.0);
    }
}

#[test]
fn identical_configs_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for method in ["verlet", "lbfgs", "heavy_ball", "nelder_mead", "leapfrog"] {
        let a = dir.path().join(format!("{method}-a.csv"));
        let b = dir.path().join(format!("{method}-b.csv"));
        run_experiment(&h2_config(method, 15, Some(a.clone()))).unwrap();
        run_experiment(&h2_config(method, 15, Some(b.clone()))).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{method}");
    }
}

#[test]
fn compare_starts_every_method_from_the_same_point() {
    let dir = tempfile::tempdir().unwrap();
    let configs: Vec<_> = ["verlet", "lbfgs", "heavy_ball", "nelder_mead"]
        .iter()
        .map(|m| h2_config(m, 5, Some(dir.path().join(format!("{m}.csv")))))
        .collect();
    let reports: Vec<_> = compare(&configs)
        .unwrap()
        .into_iter()
        .map(Result::unwrap)
        .collect();
    let e0 = reports[0].records[0].energy;
    for (report, config) in reports.iter().zip(&configs) {
        assert_eq!(report.summary.method, config.optimizer.method.name());
        assert_eq!(report.records[0].energy.to_bits(), e0.to_bits());
        assert_eq!(report.records[0].cumulative_evals, 1);
        assert!(config.output_path.as_ref().unwrap().exists());
    }
    assert_eq!(reports[0].summary.total_evals, 1 + 5 * 161);
    assert_eq!(reports[2].summary.total_evals, 1 + 5 * 81);
    assert_eq!(reports[3].records.len(), 6);
}

#[test]
fn single_method_compare_equals_a_plain_run() {
    let config = h2_config("verlet", 10, None);
    let plain = run_experiment(&config).unwrap();
    let compared = compare(std::slice::from_ref(&config)).unwrap().remove(0).unwrap();
    assert_eq!(plain.records, compared.records);
    assert_eq!(plain.final_params, compared.final_params);
}

#[test]
fn compare_rejects_mismatched_problems() {
    let a = h2_config("verlet", 5, None);
    let mut b = h2_config("lbfgs", 5, None);
    b.seed = 19;
    assert!(compare(&[a.clone(), b]).is_err());
    let mut c = h2_config("lbfgs", 6, None);
    c.seed = 18;
    assert!(compare(&[a, c]).is_err());
    assert!(compare(&[]).unwrap().is_empty());
}

#[test]
fn bad_configs_fail_before_running() {
    let mut zero_iters = h2_config("verlet", 1, None);
    zero_iters.optimizer.max_iters = 0;
    assert!(run_experiment(&zero_iters).is_err());
    let mut bad_damping = h2_config("verlet", 1, None);
    bad_damping.optimizer.method.set("damping", "1.5").unwrap();
    assert!(run_experiment(&bad_damping).is_err());
    let mut missing = h2_config("verlet", 1, None);
    missing.hamiltonian_path = "does/not/exist.ham".into();
    assert!(run_experiment(&missing).is_err());
}

#[test]
fn timing_column_is_filled_when_enabled() {
    let mut config = h2_config("heavy_ball", 3, None);
    config.timing = true;
    let report = run_experiment(&config).unwrap();
    assert!(report.records.windows(2).all(|w| w[0].elapsed <= w[1].elapsed));
    assert!(report.records.last().unwrap().elapsed > 0.0);
}
