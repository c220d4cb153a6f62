//! Command-line contract tests: exit codes, output files, golden headers.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paretobb"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn solve_writes_the_five_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r1");
    let output = bin()
        .args([
            "solve", "--problem", "t51", "--algo", "pbb-moead", "--seed", "7", "--max-iters",
            "6", "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    for file in [
        "archive.csv",
        "boxes.json",
        "lower_bounds.json",
        "history.jsonl",
        "manifest.json",
    ] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    // golden headers and schemas
    let archive = read(&out.join("archive.csv"));
    assert!(archive.starts_with("f1,f2,x1,x2,box_id\n"));
    let first_history = read(&out.join("history.jsonl"));
    let row: serde_json::Value =
        serde_json::from_str(first_history.lines().next().unwrap()).unwrap();
    assert_eq!(row["k"], 1);
    assert!(row.get("bnv").is_some() && row.get("archive_size").is_some());
    assert!(row.get("gap").is_some());
    let boxes: serde_json::Value = serde_json::from_str(&read(&out.join("boxes.json"))).unwrap();
    let first = &boxes.as_array().unwrap()[0];
    for key in ["id", "lo", "hi", "flag"] {
        assert!(first.get(key).is_some(), "boxes.json missing {key}");
    }
    let lows: serde_json::Value =
        serde_json::from_str(&read(&out.join("lower_bounds.json"))).unwrap();
    let first = &lows.as_array().unwrap()[0];
    for key in ["box_id", "points", "improved"] {
        assert!(first.get(key).is_some(), "lower_bounds.json missing {key}");
    }
}

#[test]
fn unknown_problem_exits_2_and_names_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["solve", "--problem", "bogus", "--algo", "basic-bb", "--out"])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    for name in ["t51", "t52", "zdt2", "t54", "t55", "t56"] {
        assert!(stderr.contains(name), "stderr does not name {name}: {stderr}");
    }
}

#[test]
fn invalid_epsilon_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args([
            "solve", "--problem", "t51", "--algo", "basic-bb", "--eps", "0.5", "--out",
        ])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn basic_bb_bnv_is_monotone_on_zdt2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let output = bin()
        .args([
            "solve",
            "--problem",
            "zdt2",
            "--n",
            "10",
            "--algo",
            "basic-bb",
            "--max-iters",
            "12",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let mut last = 0;
    for line in read(&out.join("history.jsonl")).lines() {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        let bnv = row["bnv"].as_u64().unwrap();
        assert!(bnv >= last, "BNV decreased: {bnv} after {last}");
        last = bnv;
    }
    assert!(last > 1000, "expected exponential growth, got {last}");
}

#[test]
fn compare_needs_two_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["compare", "--problem", "t51", "--algos", "pbb-moead", "--out"])
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn compare_writes_curves_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let output = bin()
        .args([
            "compare",
            "--problem",
            "t52",
            "--algos",
            "pbb-moead,basic-bb",
            "--max-iters",
            "9",
            "--eps",
            "1e-9",
            "--seed",
            "3",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let bnv = read(&out.join("bnv_curves.csv"));
    assert!(bnv.starts_with("k,algo,bnv\n"));
    let final_bnv = |algo: &str| {
        bnv.lines()
            .rev()
            .find(|l| l.contains(algo))
            .and_then(|l| l.rsplit(',').next())
            .and_then(|v| v.parse::<u64>().ok())
            .unwrap()
    };
    assert!(
        final_bnv("pbb-moead") <= final_bnv("basic-bb"),
        "hybrid ended with more subregions than the baseline: {bnv}"
    );
    let gap = read(&out.join("gap_curves.csv"));
    assert!(gap.starts_with("k,algo,gap\n"));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("feasible"), "summary missing: {stdout}");
}

#[test]
fn compare_three_way_on_constrained_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let output = bin()
        .args([
            "compare",
            "--problem",
            "t56",
            "--algos",
            "pbb-moead,basic-bb,moead-full",
            "--max-iters",
            "8",
            "--population",
            "40",
            "--generations",
            "30",
            "--seed",
            "1",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    for algo in ["pbb-moead", "basic-bb", "moead-full"] {
        assert!(stdout.contains(algo), "summary missing {algo}: {stdout}");
        assert!(out.join(algo).join("archive.csv").exists());
    }
}

#[test]
fn full_moea_baseline_runs_on_constrained_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m");
    let output = bin()
        .args([
            "solve",
            "--problem",
            "t56",
            "--algo",
            "moead-full",
            "--population",
            "60",
            "--generations",
            "40",
            "--seed",
            "1",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let archive = read(&out.join("archive.csv"));
    assert!(archive.lines().count() > 10);
}

#[test]
fn list_problems_is_machine_readable() {
    let output = run(&["list-problems"]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for name in ["t51", "t52", "zdt2", "t54", "t55", "t56"] {
        assert!(text.contains(name));
    }

    let output = run(&["list-problems", "--json"]);
    assert!(output.status.success());
    let rows: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("valid JSON");
    assert_eq!(rows.as_array().unwrap().len(), 6);
    assert_eq!(rows[0]["name"], "t51");
    assert_eq!(rows[5]["constraints"], 2);
}

#[test]
fn problem_file_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("custom.problem");
    std::fs::write(
        &file,
        "[problem] name=custom, n=2, m=2\n\
         [objective 1] expr=(+ x1 x2)\n\
         [objective 2] expr=(- 2 x1)\n\
         [domain] lo=0 0, hi=1 1\n",
    )
    .unwrap();
    let out = dir.path().join("r");
    let output = bin()
        .args(["solve", "--problem-file"])
        .arg(&file)
        .args(["--algo", "basic-bb", "--max-iters", "4", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["problem"]["name"], "custom");
    assert!(manifest["problem"]["hash"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));

    // a bad file reports the position
    std::fs::write(&file, "[problem] name=bad, n=1, m=2\n[objective 1] expr=(+ x1 x9)\n").unwrap();
    let output = bin()
        .args(["solve", "--problem-file"])
        .arg(&file)
        .args(["--algo", "basic-bb", "--out"])
        .arg(dir.path().join("r2"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn config_file_supplies_minimoea_settings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("solver.cfg");
    std::fs::write(
        &cfg,
        "[minimoea] variant=moead-de, population=6, generations=5, rho=2, seed=11\n",
    )
    .unwrap();
    let out = dir.path().join("r");
    let output = bin()
        .args(["solve", "--problem", "t51", "--config"])
        .arg(&cfg)
        .args(["--max-iters", "4", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["algo"], "pbb-moead");
    assert_eq!(manifest["population"], 6);
    assert_eq!(manifest["generations"], 5);
    assert_eq!(manifest["rho"], 2.0);
    assert_eq!(manifest["seed"], 11);

    // explicit flags beat the file
    let out2 = dir.path().join("r2");
    let output = bin()
        .args(["solve", "--problem", "t51", "--config"])
        .arg(&cfg)
        .args(["--seed", "3", "--population", "8", "--max-iters", "4", "--out"])
        .arg(&out2)
        .output()
        .unwrap();
    assert!(output.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out2.join("manifest.json"))).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["population"], 8);
}
