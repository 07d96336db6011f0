use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use richclub_sim::experiment::{parse_key_values, run_experiment, ExperimentConfig};
use richclub_sim::richclub::{DensityTarget, ScenarioSpec, ThickeningMode};
use richclub_sim::resilience::{format_sig6, Strategy};

fn small(dir: &Path, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        master_seed: Some(seed),
        output_dir: dir.to_path_buf(),
        instances: 2,
        replicas: 2,
        rich_fraction: 0.05,
        ..ExperimentConfig::default()
    };
    cfg.gen.n = 80;
    cfg.gen.target_mean_degree = 4.0;
    cfg
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn single_cell_grid_writes_one_raw_and_one_equal_average() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small(tmp.path(), 3);
    cfg.instances = 1;
    cfg.replicas = 1;
    cfg.scenarios = vec![ScenarioSpec::new("base", DensityTarget::Default)];
    cfg.modes = vec![ThickeningMode::Core];
    cfg.strategies = vec![Strategy::Error];
    let manifest = run_experiment(&cfg).unwrap();
    let raw = read_dir_sorted(&tmp.path().join("raw"));
    let avg = read_dir_sorted(&tmp.path().join("avg"));
    assert_eq!(raw.len(), 1);
    assert_eq!(avg.len(), 1);
    assert_eq!(raw[0].1, avg[0].1);
    assert_eq!(manifest.traces.len(), 1);
}

#[test]
fn full_grid_file_counts() {
    // 3 instances × 3 replicas × 6 scenarios × 2 modes × 2 strategies
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small(tmp.path(), 5);
    cfg.gen.n = 60;
    cfg.instances = 3;
    cfg.replicas = 3;
    cfg.stride = Some(10);
    let manifest = run_experiment(&cfg).unwrap();
    assert_eq!(fs::read_dir(tmp.path().join("raw")).unwrap().count(), 216);
    assert_eq!(fs::read_dir(tmp.path().join("avg")).unwrap().count(), 24);
    assert_eq!(manifest.traces.len(), 216);
    assert_eq!(manifest.mutations.len(), 3 * 6 * 2);
}

#[test]
fn reruns_are_byte_identical_across_pool_sizes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut cfg = small(a.path(), 11);
    cfg.workers = 1;
    run_experiment(&cfg).unwrap();
    cfg.output_dir = b.path().to_path_buf();
    cfg.workers = 4;
    run_experiment(&cfg).unwrap();
    for sub in ["raw", "avg"] {
        assert_eq!(read_dir_sorted(&a.path().join(sub)), read_dir_sorted(&b.path().join(sub)));
    }
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn default_scenario_traces_match_between_modes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(tmp.path(), 21);
    run_experiment(&cfg).unwrap();
    for strategy in ["error", "attack"] {
        for i in 0..2 {
            for r in 0..2 {
                let core = fs::read_to_string(tmp.path().join(format!("raw/s2_core_{strategy}_i{i}_r{r}.csv"))).unwrap();
                let peri = fs::read_to_string(tmp.path().join(format!("raw/s2_periphery_{strategy}_i{i}_r{r}.csv"))).unwrap();
                let strip = |t: &str| -> Vec<Vec<String>> {
                    data_rows(t).into_iter().map(|mut r| { r.remove(1); r }).collect()
                };
                assert_eq!(strip(&core), strip(&peri));
            }
        }
    }
}

#[test]
fn averaged_rows_are_means_of_raw_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(tmp.path(), 31);
    run_experiment(&cfg).unwrap();
    for avg_entry in fs::read_dir(tmp.path().join("avg")).unwrap() {
        let avg_path = avg_entry.unwrap().path();
        let stem = avg_path.file_stem().unwrap().to_string_lossy().into_owned();
        let avg = data_rows(&fs::read_to_string(&avg_path).unwrap());
        let raws: Vec<Vec<Vec<String>>> = (0..2)
            .flat_map(|i| (0..2).map(move |r| (i, r)))
            .map(|(i, r)| {
                data_rows(&fs::read_to_string(tmp.path().join(format!("raw/{stem}_i{i}_r{r}.csv"))).unwrap())
            })
            .collect();
        for (row_idx, row) in avg.iter().enumerate() {
            for col in 5..row.len() {
                let present: Vec<f64> = raws
                    .iter()
                    .filter_map(|t| t[row_idx][col].parse::<f64>().ok())
                    .collect();
                let expected = if present.is_empty() {
                    String::new()
                } else {
                    format_sig6(present.iter().sum::<f64>() / present.len() as f64)
                };
                // raw values are already rounded to 6 digits; the mean of the
                // rounded values can differ from the exact mean in the last digit
                if expected != row[col] {
                    let (e, g): (f64, f64) = (expected.parse().unwrap(), row[col].parse().unwrap());
                    assert!((e - g).abs() <= 1e-5 * e.abs().max(1e-300), "{stem} row {row_idx} col {col}: {e} vs {g}");
                }
            }
        }
    }
}

#[test]
fn manifest_lists_every_trace_row() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(tmp.path(), 41);
    run_experiment(&cfg).unwrap();
    let text = fs::read_to_string(tmp.path().join("manifest.txt")).unwrap();
    let listed: BTreeSet<(String, String, String)> = parse_key_values(&text, "manifest")
        .unwrap()
        .into_iter()
        .filter(|(k, _)| k == "trace")
        .map(|(_, v)| {
            let f: Vec<&str> = v.split(',').collect();
            (f[0].to_string(), f[3].to_string(), f[4].to_string())
        })
        .collect();
    for entry in fs::read_dir(tmp.path().join("raw")).unwrap() {
        for row in data_rows(&fs::read_to_string(entry.unwrap().path()).unwrap()) {
            assert!(listed.contains(&(row[0].clone(), row[3].clone(), row[4].clone())));
        }
    }
    assert!(text.contains("rich_fraction = 0.05"));
}

#[test]
fn invalid_configs_fail_before_writing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    let mut cfg = small(&out, 1);
    cfg.master_seed = None;
    assert!(run_experiment(&cfg).is_err());
    cfg.master_seed = Some(1);
    cfg.replicas = 0;
    assert!(run_experiment(&cfg).is_err());
    assert!(!out.exists());
}
