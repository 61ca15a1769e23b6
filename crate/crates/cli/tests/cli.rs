use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bvr_core::engine::export::COLUMNS;
use bvr_core::engine::EpisodeLog;

fn bvrsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvrsim")).args(args).output().unwrap()
}

fn run_into(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["run", "--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    bvrsim(&all)
}

fn summary_rows(dir: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join("summary.tsv"))
        .unwrap()
        .lines()
        .map(|l| l.split('\t').map(str::to_owned).collect())
        .collect()
}

#[test]
fn run_writes_one_log_and_one_summary_row() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run_into(dir.path(), &["--scenario", "evade1", "--policy", "dive-turn", "--seed", "7", "--episodes", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("episode_0000.jsonl").exists());
    let rows = summary_rows(dir.path());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "episode");
    assert_eq!(rows[1][1], "7");
    assert_eq!(rows[1][2], "evade1");
    let md: f64 = rows[1][8].parse().unwrap();
    let reward: f64 = rows[1][6].parse().unwrap();
    assert!((md - reward).abs() < 1e-6);
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--scenario", "evade9", "--policy", "straight"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("evade9"));
    assert!(!dir.path().join("summary.tsv").exists());
}

#[test]
fn missing_config_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--policy", "straight", "--config", "/nonexistent/bvrsim.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--scenario", "evade2", "--policy", "random", "--seed", "3", "--episodes", "4", "--log-stride", "25"];
    let mut wide = args.to_vec();
    wide.extend(["--workers", "4"]);
    assert!(run_into(a.path(), &args).status.success());
    assert!(run_into(b.path(), &wide).status.success());
    for name in ["summary.tsv", "episode_0000.jsonl", "episode_0003.jsonl"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let seeds: Vec<String> = summary_rows(a.path())[1..].iter().map(|r| r[1].clone()).collect();
    assert_eq!(seeds, ["3", "4", "5", "6"]);
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    let text = String::from_utf8(bvrsim(&["defaults", "--scenario", "evade1"]).stdout).unwrap();
    fs::write(&cfg, text.replace("dt = 0.02", "dt = 0.025")).unwrap();
    let out =
        run_into(dir.path(), &["--config", cfg.to_str().unwrap(), "--scenario", "evade2", "--policy", "straight"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let header = EpisodeLog::load(&dir.path().join("episode_0000.jsonl")).unwrap().header().unwrap();
    assert_eq!(header.config.scenario.dt, 0.025);
    assert_eq!(header.config.scenario.kind.name(), "evade2");
}

#[test]
fn replay_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["--scenario", "dogfight", "--policy", "bt", "--seed", "2", "--log-stride", "50"])
        .status
        .success());
    let log = dir.path().join("episode_0000.jsonl");
    let out = bvrsim(&["replay", log.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("identical"));

    let text = fs::read_to_string(&log).unwrap();
    let tampered = dir.path().join("tampered.jsonl");
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let k = lines.len() / 2;
    lines[k] = lines[k].replacen("\"time\":", "\"time\": ", 1);
    fs::write(&tampered, lines.join("\n") + "\n").unwrap();
    let out = bvrsim(&["replay", tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("diverged"));

    let out = bvrsim(&["replay", dir.path().join("missing.jsonl").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_writes_one_file_per_unit_with_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["--scenario", "evade1", "--policy", "straight", "--seed", "1"]).status.success());
    let ex = dir.path().join("export");
    let out =
        bvrsim(&["export", dir.path().join("episode_0000.jsonl").to_str().unwrap(), "--out", ex.to_str().unwrap()]);
    assert!(out.status.success());
    let mut names: Vec<String> =
        fs::read_dir(&ex).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["aircraft_0.tsv", "missile_10.tsv"]);

    let missile = fs::read_to_string(ex.join("missile_10.tsv")).unwrap();
    let mut lines = missile.lines();
    assert_eq!(lines.next().unwrap().split('\t').collect::<Vec<_>>(), COLUMNS);
    let mach: Vec<f64> = lines
        .map(|l| {
            let cells: Vec<&str> = l.split('\t').collect();
            assert_eq!(cells.len(), COLUMNS.len());
            cells[3].parse().unwrap()
        })
        .collect();
    let peak = mach.iter().copied().fold(0.0, f64::max);
    assert!((3.7..=4.3).contains(&peak), "peak Mach {peak}");
    assert!(mach.last().unwrap() < &peak);
}

#[test]
fn export_of_a_log_without_ticks_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["--scenario", "evade1", "--policy", "straight"]).status.success());
    let text = fs::read_to_string(dir.path().join("episode_0000.jsonl")).unwrap();
    let header = text.lines().next().unwrap();
    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, format!("{header}\n")).unwrap();
    let out = bvrsim(&["export", empty.to_str().unwrap(), "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no ticks"));
}

#[test]
fn external_policy_speaks_json_lines() {
    use std::io::{BufRead, BufReader, Write};
    use std::process::Stdio;

    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_bvrsim"))
        .args(["run", "--scenario", "evade1", "--policy", "external", "--seed", "4", "--out"])
        .arg(dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let mut lines = BufReader::new(child.stdout.take().unwrap()).lines();
    let mut queries = 0;
    while let Some(Ok(line)) = lines.next() {
        let q: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(q["step"].as_u64().unwrap(), queries);
        assert_eq!(q["observation"]["normalized"].as_array().unwrap().len(), 9);
        writeln!(stdin, r#"{{"heading_deg": 90.0, "altitude": 3000.0}}"#).unwrap();
        queries += 1;
    }
    let status = child.wait().unwrap();
    assert!(status.success());
    assert!(queries > 10);
    let rows = summary_rows(dir.path());
    assert_eq!(rows[1][4], queries.to_string());
    assert_eq!(rows[1][3], "external");
}

#[test]
fn spec_is_json_with_matching_observation_shape() {
    for kind in ["evade1", "evade2", "dogfight"] {
        let out = bvrsim(&["spec", "--scenario", kind]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["scenario"], kind);
        assert_eq!(v["observation"].as_array().unwrap().len() as u64, v["observation_shape"][0].as_u64().unwrap());
    }
}

#[test]
fn shipped_default_config_loads() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/default.toml");
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--config", path.to_str().unwrap(), "--policy", "straight"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
