use std::process::{Command, Output};

use partx_core::stirling;
use serde_json::Value;

fn partx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partx"))
        .args(args)
        .env_remove("PARTX_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn sizes_row_at_twenty() {
    let o = partx(&[
        "sizes", "--n", "20", "--k", "3", "--l", "3", "--t", "1", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# {"));
    assert_eq!(lines[1], "n,k,l,t,r1,r2,r,h_k,h_l");
    let row: Vec<&str> = lines[2].split(',').collect();
    assert_eq!((row[4], row[5]), ("524288", "524285"));
}

#[test]
fn header_echoes_config_and_version() {
    let o = partx(&["stirling", "--n", "9", "--k", "2"]);
    let lines = json_lines(&o);
    assert_eq!(lines[0]["partx"], env!("CARGO_PKG_VERSION"));
    assert_eq!(lines[0]["config"]["command"], "stirling");
    assert_eq!(lines[0]["config"]["budget"], 10_000_000);
    assert_eq!(lines[1]["value"], stirling(9, 2).to_string());
}

#[test]
fn audit_single_lemma_passes() {
    let o = partx(&["audit", "--lemma", "log-concavity"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert!(lines[1..]
        .iter()
        .all(|v| v.get("verdict").is_none_or(|x| x != "fail")));
    let summary = lines.last().unwrap();
    assert_eq!(summary["totals"]["fail"], 0);
}

#[test]
fn enumeration_over_budget_is_refused_with_exact_count() {
    let o = partx(&["enumerate", "--n", "30", "--k", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let lines = json_lines(&o);
    assert_eq!(lines[1]["count"], stirling(30, 5).to_string());

    let o = Command::new(env!("CARGO_BIN_EXE_partx"))
        .args(["enumerate", "--n", "5", "--k", "2"])
        .env("PARTX_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_input_exits_three() {
    assert_eq!(
        partx(&["stirling", "--n", "x", "--k", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(
        partx(&["enumerate", "--n", "5", "--k", "2", "--budget", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        partx(&["verify", "--theorem", "9.9", "--params", "n=5 k=3 l=3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        partx(&["construct", "--kind", "A", "--n", "6", "--t", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn construct_then_cover_number() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.txt");
    let o = partx(&[
        "construct",
        "--kind",
        "D",
        "--n",
        "6",
        "--l",
        "3",
        "--t",
        "1",
        "--format",
        "text",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = partx(&[
        "tau",
        "--family",
        file.to_str().unwrap(),
        "--t",
        "1",
        "--witnesses",
    ]);
    let lines = json_lines(&o);
    assert_eq!(lines[1]["tau"], 2);
    assert!(lines[1]["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w == "{1|2}"));
}

#[test]
fn exhaustive_pair_search() {
    let o = partx(&[
        "search",
        "--n",
        "6",
        "--k",
        "3",
        "--l",
        "2",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[1];
    assert_eq!(r["best_product"], stirling(5, 2).to_string());
    assert_eq!(r["exhaustive"], true);
}

#[test]
fn thread_count_does_not_change_output() {
    for args in [
        &[
            "search", "--n", "7", "--k", "3", "--l", "3", "--draws", "300", "--seed", "3",
        ][..],
        &[
            "search",
            "--n",
            "6",
            "--ks",
            "3,3,3",
            "--draws",
            "40",
            "--nontrivial",
        ][..],
        &["verify", "--theorem", "P2.8", "--params", "n=6 k=3 l=2 t=1"][..],
    ] {
        let one = partx(&[args, &["--threads", "1"]].concat());
        let eight = partx(&[args, &["--threads", "8"]].concat());
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, eight.stdout, "{args:?}");
    }
}

#[test]
fn checkpoint_resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let base = [
        "search", "--n", "7", "--k", "3", "--l", "3", "--draws", "200", "--seed", "9",
    ];
    let full = json_lines(&partx(&base));
    let ck_arg = ["--checkpoint", ck.to_str().unwrap()];
    let first = partx(&[&base[..], &ck_arg, &["--stop-after", "50"]].concat());
    assert_eq!(first.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&ck).unwrap()).unwrap();
    assert!(saved["best_product"].is_string());
    let resumed = json_lines(&partx(&[&base[..], &ck_arg].concat()));
    assert_eq!(resumed[1]["best_product"], full[1]["best_product"]);
    assert_eq!(resumed[1]["witness"], full[1]["witness"]);
}

#[test]
fn verify_csv_has_one_row_per_tier() {
    let o = partx(&[
        "verify",
        "--theorem",
        "P3.5",
        "--params",
        "n=20 k=3 l=3 t=1",
        "--format",
        "csv",
        "--draws",
        "200",
    ]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "theorem,tier,status,exhaustive,n,details");
    assert_eq!(lines.len(), 5);
    assert_ne!(o.status.code(), Some(1), "{out}");
}
