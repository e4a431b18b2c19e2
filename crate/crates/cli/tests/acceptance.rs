//! Criterion 10: every report re-runs bit-identically from its echoed
//! configuration, through `replay` and through a saved scenario file.

use std::process::Command;
use std::time::Instant;

use serde_json::Value;

const SCENARIOS: &[&[&str]] = &[
    &["axioms", "--samples", "100"],
    &[
        "axioms",
        "--samples",
        "40",
        "--oracle",
        "profinite:lazy:seed=9",
    ],
    &[
        "hausdorff",
        "--oracle",
        "profinite:lazy:seed=42",
        "--f",
        "n^2+1",
        "--g",
        "2n",
    ],
    &["indiscernibles", "--pairs", "20"],
    &[
        "indiscernibles",
        "--pairs",
        "20",
        "--oracle",
        "profinite:lazy:seed=3",
    ],
    &["tensor", "--probe-modulus", "20"],
    &["possibility", "--random", "10", "--seed", "8"],
    &["transfer", "--oracle", "profinite:lazy:seed=5"],
    &["orbit", "--oracle", "profinite:lazy:seed=1"],
    &["finite-search", "--k", "3", "--require", "comp,equ"],
    &[
        "stone",
        "--generators",
        "evens; mult 3; from 4",
        "--oracle",
        "principal:9",
    ],
];

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_starlab"))
        .args(args)
        .env_remove("STARLAB_HORIZON")
        .output()
        .expect("binary runs")
}

fn without_timing(path: &std::path::Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timingMs");
    v
}

fn main() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for (i, scenario) in SCENARIOS.iter().enumerate() {
        let first = dir.path().join(format!("{i}.json"));
        let conf = dir.path().join(format!("{i}.conf"));
        let second = dir.path().join(format!("{i}-again.json"));
        let mut args = scenario.to_vec();
        args.extend([
            "-q",
            "--json",
            first.to_str().unwrap(),
            "--save-config",
            conf.to_str().unwrap(),
        ]);
        let code = run(&args).status.code();
        if code != Some(0) {
            failures.push(format!("{scenario:?} exited {code:?}"));
            continue;
        }
        let replay = run(&["replay", first.to_str().unwrap(), "-q"]);
        if replay.status.code() != Some(0) {
            failures.push(format!("{scenario:?} replay differs"));
        }
        let rerun = run(&[
            scenario[0],
            "-q",
            "--config",
            conf.to_str().unwrap(),
            "--json",
            second.to_str().unwrap(),
        ]);
        if rerun.status.code() != Some(0) || without_timing(&first) != without_timing(&second) {
            failures.push(format!(
                "{scenario:?} differs when rerun from its scenario file"
            ));
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 10 (determinism & replay): {} | {} reports replayed and rerun from saved scenario files, {} mismatches | {:.2}s (limit 120s)",
        if failures.is_empty() && elapsed.as_secs() < 120 { "PASS" } else { "FAIL" },
        SCENARIOS.len(),
        failures.len(),
        elapsed.as_secs_f64()
    );
    if !failures.is_empty() || elapsed.as_secs() >= 120 {
        eprintln!("{failures:#?}");
        std::process::exit(1);
    }
}
