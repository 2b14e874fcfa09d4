use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bridgeness");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("BRIDGENESS_WORKERS")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

/// Two triangles joined through node `x`.
fn write_broker(dir: &Path) -> (String, String) {
    let edges = path(dir, "g.edges");
    fs::write(&edges, "a b\nb c\na c\nc x\nx d\nd e\ne f\nd f\n").unwrap();
    let part = path(dir, "p.csv");
    fs::write(
        &part,
        "node_id,community\na,0\nb,0\nc,0\nx,0\nd,1\ne,1\nf,1\n",
    )
    .unwrap();
    (edges, part)
}

fn read_csv(file: &str) -> Vec<Vec<String>> {
    fs::read_to_string(file)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn centrality_writes_scores_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, _) = write_broker(dir.path());
    let out = path(dir.path(), "scores.csv");
    let json = path(dir.path(), "scores.json");
    let res = run(&[
        "centrality",
        "--input",
        &edges,
        "--variant",
        "exact",
        "--output",
        &out,
        "--json",
        &json,
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("nodes: 7"));
    assert!(stdout.contains("max bc: x (9)"), "{stdout}");

    let rows = read_csv(&out);
    assert_eq!(rows[0], ["node_id", "degree", "bc", "bridgeness", "local"]);
    let x = rows.iter().find(|r| r[0] == "x").unwrap();
    assert_eq!(&x[1..], ["2", "9", "4", "5"]);
    let records: serde_json::Value = serde_json::from_slice(&fs::read(&json).unwrap()).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 7);
    let prov: serde_json::Value =
        serde_json::from_slice(&fs::read(format!("{out}.provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["inputs"][0]["name"], "g.edges");
    assert_eq!(prov["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn variants_and_worker_counts_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, _) = write_broker(dir.path());
    let mut outputs = Vec::new();
    for (variant, workers) in [("exact", "1"), ("exact", "4"), ("bruteforce", "1")] {
        let out = path(dir.path(), &format!("{variant}{workers}.csv"));
        let res = run(&[
            "--workers",
            workers,
            "centrality",
            "-i",
            &edges,
            "--variant",
            variant,
            "-o",
            &out,
        ]);
        assert!(res.status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);

    let out = path(dir.path(), "si.csv");
    assert!(run(&[
        "centrality",
        "-i",
        &edges,
        "--variant",
        "si-compat",
        "-o",
        &out
    ])
    .status
    .success());
    // four pairs with both ends outside the neighborhood, plus half of the four mixed pairs
    let x = read_csv(&out).into_iter().find(|r| r[0] == "x").unwrap();
    assert_eq!(x[3], "6");
}

#[test]
fn usage_errors_exit_with_two() {
    let res = run(&["centrality", "--no-such-flag"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("Usage"));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "generate",
            "--n",
            "10",
            "--communities",
            "2",
            "--mu",
            "0.1",
            "--out-dir",
            "x"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["communities", "-i", "g", "-o", "p"]).status.code(),
        Some(2)
    );
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.edges");
    fs::write(&bad, "a b c d\n").unwrap();
    let out = path(dir.path(), "o.csv");
    let res = run(&["centrality", "-i", &bad, "-o", &out]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 1"));
    assert!(!Path::new(&out).exists());
    let missing = path(dir.path(), "missing.edges");
    assert_eq!(
        run(&["centrality", "-i", &missing, "-o", &out])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn indicator_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, part) = write_broker(dir.path());
    let out = path(dir.path(), "g.csv");
    assert!(run(&["indicator", "-i", &edges, "-p", &part, "-o", &out])
        .status
        .success());
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["node_id", "community", "G"]);
    let scores: Vec<(&str, &str)> = rows[1..]
        .iter()
        .map(|r| (r[0].as_str(), r[2].as_str()))
        .collect();
    assert!(scores.contains(&("x", "1")));
    assert!(scores.contains(&("d", "1")));
    assert!(scores.contains(&("a", "0")));

    let report = path(dir.path(), "report.csv");
    assert!(
        run(&["report", "-i", &edges, "-p", &part, "-o", &report, "--sort", "bc"])
            .status
            .success()
    );
    let rows = read_csv(&report);
    assert_eq!(
        rows[0],
        ["node_id", "G", "community", "bc", "bridgeness", "degree"]
    );
    assert_eq!(rows[1][0], "x");
    assert_eq!(rows.len(), 8);
    let res = run(&[
        "report", "-i", &edges, "-p", &part, "-o", &report, "--sort", "nope",
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "generate".to_owned(),
            "--n".into(),
            "1000".into(),
            "--communities".into(),
            "30".into(),
            "--mu".into(),
            "0.2".into(),
            "--seed".into(),
            "7".into(),
            "--out-dir".into(),
            out.to_owned(),
        ]
    };
    let first = path(dir.path(), "one");
    let second = path(dir.path(), "two");
    for out in [&first, &second] {
        let a = args(out);
        let res = run(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(
            res.status.success(),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    for name in ["network.edges", "communities.csv", "provenance.json"] {
        let a = fs::read(Path::new(&first).join(name)).unwrap();
        let b = fs::read(Path::new(&second).join(name)).unwrap();
        assert_eq!(a, b, "{name} differs");
    }
    let prov: serde_json::Value =
        serde_json::from_slice(&fs::read(Path::new(&first).join("provenance.json")).unwrap())
            .unwrap();
    let mu = prov["results"]["achieved_mu"].as_f64().unwrap();
    assert!((0.19..=0.21).contains(&mu), "{mu}");
    assert_eq!(prov["seed"], 7);
    assert_eq!(prov["config"]["n"], 1000);
    assert!(!String::from_utf8_lossy(
        &fs::read(Path::new(&first).join("provenance.json")).unwrap()
    )
    .contains(dir.path().to_str().unwrap()));
}

#[test]
fn generate_rejects_degenerate_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g");
    let res = run(&[
        "generate",
        "--n",
        "4",
        "--communities",
        "2",
        "--mu",
        "0.99",
        "--seed",
        "1",
        "--out-dir",
        &out,
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).starts_with("error:"));
    assert!(!Path::new(&out).join("network.edges").exists());
}

#[test]
fn evaluate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let net = path(dir.path(), "net");
    let res = run(&[
        "generate",
        "--n",
        "300",
        "--communities",
        "6",
        "--mu",
        "0.2",
        "--seed",
        "3",
        "--mean-degree",
        "10",
        "--max-degree",
        "30",
        "--out-dir",
        &net,
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let edges = path(Path::new(&net), "network.edges");
    let part = path(Path::new(&net), "communities.csv");
    let out = path(dir.path(), "eval");
    let res = run(&[
        "evaluate",
        "-i",
        &edges,
        "-p",
        &part,
        "--window",
        "20",
        "--out-dir",
        &out,
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("curve_advantage:"));

    for stem in [
        "curve_bridgeness",
        "curve_bc",
        "curve_self",
        "curve_bridgeness_smoothed",
        "curve_bc_smoothed",
    ] {
        let rows = read_csv(&path(Path::new(&out), &format!("{stem}.csv")));
        assert_eq!(rows[0], ["rank", "ratio"]);
        assert_eq!(rows.len(), 301);
        let meta: serde_json::Value = serde_json::from_slice(
            &fs::read(Path::new(&out).join(format!("{stem}.json"))).unwrap(),
        )
        .unwrap();
        assert!(meta["smoothing_window"].is_u64());
    }
    let own = read_csv(&path(Path::new(&out), "curve_self.csv"));
    assert!(own[1..].iter().all(|r| r[1].parse::<f64>().unwrap() == 1.0));
    let locterm = read_csv(&path(Path::new(&out), "locterm.csv"));
    assert_eq!(locterm[0], ["degree", "locterm"]);
    let prov: serde_json::Value =
        serde_json::from_slice(&fs::read(Path::new(&out).join("provenance.json")).unwrap())
            .unwrap();
    assert!(prov["results"]["curve_advantage"].is_f64());
}

#[test]
fn evaluate_needs_exactly_one_partition_source() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, part) = write_broker(dir.path());
    let out = path(dir.path(), "eval");
    let both = run(&[
        "evaluate",
        "-i",
        &edges,
        "-p",
        &part,
        "--detect",
        "louvain",
        "--seed",
        "1",
        "--out-dir",
        &out,
    ]);
    assert_eq!(both.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&both.stderr).contains("both"));
    let neither = run(&["evaluate", "-i", &edges, "--out-dir", &out]);
    assert_eq!(neither.status.code(), Some(1));
    let unseeded = run(&[
        "evaluate",
        "-i",
        &edges,
        "--detect",
        "louvain",
        "--out-dir",
        &out,
    ]);
    assert_eq!(unseeded.status.code(), Some(1));
    let detected = run(&[
        "evaluate",
        "-i",
        &edges,
        "--detect",
        "louvain",
        "--seed",
        "1",
        "--out-dir",
        &out,
    ]);
    assert!(
        detected.status.success(),
        "{}",
        String::from_utf8_lossy(&detected.stderr)
    );
    assert!(Path::new(&out).join("communities.csv").exists());
}

#[test]
fn communities_recovers_two_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "g.edges");
    fs::write(&edges, "0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5\n").unwrap();
    let out = path(dir.path(), "p.csv");
    let res = run(&["communities", "-i", &edges, "--seed", "5", "-o", &out]);
    assert!(res.status.success());
    assert!(String::from_utf8(res.stdout)
        .unwrap()
        .contains("communities: 2"));
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["node_id", "community"]);
    let label = |id: &str| rows.iter().find(|r| r[0] == id).unwrap()[1].clone();
    assert_eq!(label("0"), label("2"));
    assert_ne!(label("0"), label("3"));
    assert_eq!(label("3"), label("5"));
}

#[test]
fn workers_env_var_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, _) = write_broker(dir.path());
    let out = path(dir.path(), "o.csv");
    let res = Command::new(BIN)
        .args(["centrality", "-i", &edges, "-o", &out])
        .env("BRIDGENESS_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2));
    let res = Command::new(BIN)
        .args(["centrality", "-i", &edges, "-o", &out])
        .env("BRIDGENESS_WORKERS", "2")
        .output()
        .unwrap();
    assert!(res.status.success());
}
