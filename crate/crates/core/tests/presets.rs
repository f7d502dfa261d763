use std::path::Path;

use stability_anneal::experiment::{run_replications, ExperimentConfig, RunOptions};

fn presets() -> Vec<std::path::PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets");
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    files.sort();
    files
}

#[test]
fn every_preset_resolves() {
    let files = presets();
    assert_eq!(files.len(), 12);
    for f in files {
        let cfg = ExperimentConfig::load(&f).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        assert!(!cfg.scenarios().unwrap().is_empty(), "{}", f.display());
    }
}

#[test]
fn every_preset_runs_at_small_scale() {
    for f in presets() {
        let cfg = ExperimentConfig::load(&f).unwrap().amended(|c| {
            c.replications = 1;
            c.engine.k_star = 500;
            c.dominating.n_reps = 100;
        });
        let cfg = cfg.unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let report = run_replications(&cfg, &RunOptions::default()).unwrap();
        assert!(report.summary.iter().all(|s| s.failures == 0), "{}", f.display());
    }
}
