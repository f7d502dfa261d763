use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_stability-anneal");

const SMALL: &str = r#"
model = "simple-queue"
replications = 4
seed = 42

[set]
lower = [0.0]
upper = [0.4]

[engine]
eta = 1.0
c = 0.5
d = 1.0
k_star = 3000

[dominating]
delta = 0.05
kappa = 1.0
n_reps = 200

[sweep]
parameter = "upper"
values = [0.4, 0.9]
"#;

fn cli(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_into(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    cli(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let out = dir.path().join("results");
    let o = run_into(&config, &out, &["--emit-trajectories"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["manifest.toml", "summary.csv", "timing.csv", "replications.csv", "quantiles_0.csv", "quantiles_1.csv"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    for i in 0..8 {
        assert!(out.join(format!("verdicts/verdict_{i}.csv")).is_file());
        let traj = fs::read_to_string(out.join(format!("trajectory_{i}.csv"))).unwrap();
        let mut lines = traj.lines();
        assert!(lines.next().unwrap().starts_with("k,T_k,f_Y"));
        assert!(lines.next().unwrap().starts_with("0,0,"));
    }
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout, fs::read_to_string(out.join("summary.csv")).unwrap());
}

#[test]
fn manifest_reproduces_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    assert!(run_into(&config, &first, &[]).status.success());
    let manifest = first.join("manifest.toml");
    let o = run_into(manifest.to_str().unwrap(), &second, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(first.join("summary.csv")).unwrap(),
        fs::read(second.join("summary.csv")).unwrap()
    );
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let one = dir.path().join("one");
    let two = dir.path().join("two");
    assert!(run_into(&config, &one, &["--workers", "1"]).status.success());
    assert!(run_into(&config, &two, &["--workers", "2"]).status.success());
    for f in ["summary.csv", "replications.csv", "verdicts/verdict_5.csv"] {
        assert_eq!(fs::read(one.join(f)).unwrap(), fs::read(two.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn verdict_files_agree_with_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let out = dir.path().join("r");
    assert!(run_into(&config, &out, &[]).status.success());
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let rows: Vec<Vec<String>> = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for (s, row) in rows.iter().enumerate() {
        let unstable = (0..4)
            .filter(|i| {
                let v = fs::read_to_string(out.join(format!("verdicts/verdict_{}.csv", s * 4 + i))).unwrap();
                v.lines().nth(1).unwrap().starts_with("unstable,")
            })
            .count();
        assert_eq!(row[2], unstable.to_string(), "sweep point {s}");
    }
}

#[test]
fn overrides_change_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let out = dir.path().join("r");
    let o = run_into(&config, &out, &["--seed", "7", "--replications", "2", "--k-star", "500"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("seed = 7"));
    assert!(manifest.contains("replications = 2"));
    assert!(manifest.contains("k_star = 500"));
}

#[test]
fn config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (SMALL.replace("eta = 1.0", "eta = -1.0"), "engine.eta"),
        (SMALL.replace("n_reps = 200", "n_reps = 10"), "n_reps"),
        (SMALL.replace("kappa = 1.0", "kappa = 1.0\nbogus = 3"), "bogus"),
        (SMALL.replace("simple-queue", "no-such-model"), "model"),
        (SMALL.replace("upper = [0.4]", "upper = [0.4, 0.5]"), "set"),
    ];
    for (i, (text, key)) in cases.iter().enumerate() {
        let config = write_config(dir.path(), &format!("bad{i}.toml"), text);
        let o = run_into(&config, &dir.path().join(format!("out{i}")), &[]);
        assert_eq!(o.status.code(), Some(2), "case {i}: {}", stderr(&o));
        assert!(stderr(&o).contains(key), "case {i}: {}", stderr(&o));
    }
    let o = run_into("/nonexistent/exp.toml", &dir.path().join("x"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run_into(&config, &blocker, &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn models_lists_the_gallery() {
    let o = cli(&["models"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let ids: Vec<&str> = text.lines().skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(
        ids,
        ["simple-queue", "parallel", "tandem-mm1", "tandem-renewal", "rybko-stolyar", "switch", "ran"]
    );
}

#[test]
fn quantiles_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "exp.toml", SMALL);
    let o = cli(&["quantiles", &config, "--k-max", "50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 52);
    assert_eq!(lines[0], "k,q_alpha");
    let q: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(q.windows(2).all(|w| w[1] >= w[0]));

    let file = dir.path().join("q.csv");
    let o = cli(&["quantiles", &config, "--k-max", "50", "--out", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(file).unwrap(), text);
}
