use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn starlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starlab"))
        .args(args)
        .env_remove("STARLAB_HORIZON")
        .output()
        .expect("binary runs")
}

fn json_run(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let path = dir.join(format!("{name}.json"));
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--json", p, "-q"]);
    let out = starlab(&all);
    let v = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code().unwrap(), v)
}

#[test]
fn flagship_pair_is_certified_indiscernible() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(
        dir.path(),
        "ind",
        &[
            "indiscernibles",
            "--oracle",
            "profinite:int:0",
            "--pairs",
            "5",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["schemaVersion"], 1);
    let flagship = &v["results"]["flagship"];
    assert_eq!(flagship["xi"], "[n]");
    assert_eq!(flagship["eta"], "[n^2]");
    assert_eq!(flagship["separable"]["kind"], "indiscernibleCertified");
    assert_eq!(flagship["hausdorff"]["verdict"], "Violated");
}

#[test]
fn tensor_excludes_the_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(dir.path(), "t", &["tensor", "--oracle", "profinite:int:0"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["diagonalInTensor"], false);
    assert_eq!(v["results"]["projectionsAgree"], true);
    assert_eq!(v["results"]["tensorViolatesH"], true);
}

#[test]
fn finite_search_finds_no_functional_extension() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(
        dir.path(),
        "fs",
        &[
            "finite-search",
            "--k",
            "2",
            "--e",
            "1",
            "--require",
            "comp,equ,dir",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["results"]["table"][0]["axioms"], "{comp,equ,dir}");
    assert_eq!(v["results"]["table"][0]["models"], 0);
    assert!(v["commitmentLog"].as_array().unwrap().is_empty());
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let out = starlab(&["finite-search", "--require", "", "--budget", "5", "-q"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(starlab(&["axioms", "--nope"]).status.code(), Some(1));
    assert_eq!(starlab(&["axioms", "-p", "nope=1"]).status.code(), Some(1));
    assert_eq!(starlab(&["hausdorff", "--f", "n -"]).status.code(), Some(1));
    assert_eq!(
        starlab(&["stone", "--oracle", "profinite:int"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(starlab(&[]).status.code(), Some(1));
    assert_eq!(starlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.conf");
    std::fs::write(
        &cfg,
        "# two sets and a seed\nsets = evens; {1 mod 4 | except +1}\nseed = 4\nrandom = 2\n",
    )
    .unwrap();
    let (code, v) = json_run(
        dir.path(),
        "poss",
        &[
            "possibility",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "5",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["config"]["seed"], "5");
    assert_eq!(v["config"]["sets"], "evens; {1 mod 4 | except +1}");
    assert_eq!(v["results"]["families"][0]["verdict"]["kind"], "noFip");
}

#[test]
fn horizon_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_starlab"))
        .args(["hausdorff", "-q", "--save-config", "/dev/stdout"])
        .env("STARLAB_HORIZON", "321")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("horizon = 321"), "{text}");
}

#[test]
fn text_report_mirrors_json() {
    let out = starlab(&["finite-search", "--require", "comp,equ"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("starlab finite-search: PASS (exit 0)"));
    assert!(text.contains("{comp,equ,dir}"));
    assert!(text.contains("timing:"));
}

#[test]
fn tampered_report_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let (_, mut v) = json_run(dir.path(), "st", &["stone"]);
    v["results"]["oracleAtom"] = 3.into();
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = starlab(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("/results/oracleAtom"));
}
