use std::fs;
use std::process::{Command, Output};

use secant::golden::EMBEDDED;
use secant::scan::CellStatus;
use secant::table::parse_csv;

fn secant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant")).args(args).env_remove("SECANT_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn identical_flags_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let o = secant(&[
            "scan",
            "--n-min",
            "5",
            "--n-max",
            "8",
            "--seed",
            "4",
            "--format",
            "csv",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(a, b);
    let recs = parse_csv(std::str::from_utf8(&a).unwrap()).unwrap();
    assert!(recs.iter().any(|r| (r.k, r.n, r.s, r.computed_dim) == (2, 8, 4, 73)));
    assert!(recs.windows(2).all(|w| (w[0].n, w[0].k, w[0].s) < (w[1].n, w[1].k, w[1].s)));
}

#[test]
fn json_output_lists_records() {
    let o = secant(&["scan", "--n-min", "4", "--n-max", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["computed_dim"], 9);
    assert_eq!(arr[0]["status"], "certified_nondefective");
}

#[test]
fn smallest_range_is_one_cell() {
    let o = secant(&["scan", "--n-min", "3", "--n-max", "3", "--format", "csv"]);
    assert!(o.status.success());
    let recs = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!((recs[0].s, recs[0].computed_dim, recs[0].saturation), (2, 5, 2));
}

#[test]
fn continuation_can_be_disabled() {
    let csv = |flag: &str| {
        let o = secant(&[
            "scan",
            "--n-min",
            "7",
            "--n-max",
            "7",
            "--k-only",
            "1",
            "--continue-past-S",
            flag,
            "--format",
            "csv",
        ]);
        assert!(o.status.success());
        parse_csv(&stdout(&o)).unwrap().iter().map(|r| r.computed_dim).collect::<Vec<_>>()
    };
    assert_eq!(csv("auto"), vec![21, 26, 27]);
    assert_eq!(csv("off"), vec![21, 26]);
}

#[test]
fn cell_reports_trials() {
    let o = secant(&["cell", "-k", "4", "-n", "10", "-s", "15"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("computed_dim   461\n"), "{out}");
    assert!(out.contains("status         certified_nondefective\n"), "{out}");
    assert!(out.contains("trial 0: rank 462"), "{out}");

    let o = secant(&["cell", "-k", "2", "-n", "8", "-s", "4", "--json"]);
    let r: secant::scan::ScanRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r.computed_dim, r.defect, r.status), (73, 2, CellStatus::OracleConfirmedDefective));
}

#[test]
fn tampered_golden_is_rejected_with_named_cells() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.txt");
    let tampered = EMBEDDED.replace("3 7 69 5 : 33 49* 63* 69", "3 7 69 5 : 33 49* 62* 69");
    assert_ne!(tampered, EMBEDDED);
    fs::write(&path, &tampered).unwrap();
    let o = secant(&["verify", "--n-max", "7", "--golden", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH (k=3, n=7, s=4): expected 62, got 63"), "{}", stdout(&o));

    // with the recorded checksum beside it, the edit is caught before any computation
    fs::write(dir.path().join("golden.txt.sha256"), include_str!("../data/golden_tables.sha256")).unwrap();
    let o = secant(&["verify", "--n-max", "7", "--golden", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));

    fs::write(&path, EMBEDDED).unwrap();
    let o = secant(&["verify", "--n-max", "7", "--golden", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["scan", "--n-min", "5", "--n-max", "6", "--format", "csv"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_secant")).args(&args).env("SECANT_CACHE_DIR", dir.path()).output().unwrap()
    };
    let first = run(&[]);
    assert!(first.status.success());
    let cache = dir.path().join("cells.kv");
    let lines = fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, parse_csv(&stdout(&first)).unwrap().len());
    let second = run(&[]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), lines);
    run(&["--force"]);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 2 * lines);
}

#[test]
fn exit_codes() {
    assert_eq!(secant(&["scan", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(secant(&["scan", "--n-min", "9", "--n-max", "4"]).status.code(), Some(2));
    assert_eq!(
        secant(&["cell", "-k", "1", "-n", "4", "-s", "2", "--tol", "0", "--backend", "float"]).status.code(),
        Some(2)
    );
    assert_eq!(secant(&["verify", "--golden", "/nonexistent/golden.txt"]).status.code(), Some(1));
    // an unwritable output file is an I/O failure after the computation
    let o = secant(&["scan", "--n-min", "4", "--n-max", "4", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn veronese_sweep_and_dump() {
    let o = secant(&["veronese", "--k-max", "3", "--n-max", "2", "--format", "csv"]);
    assert!(o.status.success());
    let recs = parse_csv(&stdout(&o)).unwrap();
    let defective: Vec<(usize, usize, usize)> = recs.iter().filter(|r| r.defect > 0).map(|r| (r.k, r.n, r.s)).collect();
    assert_eq!(defective, vec![(2, 2, 2)]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let o = secant(&["dump", "-k", "2", "-n", "6", "-s", "3", "--backend", "float", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().next().unwrap().ends_with("backend=float rows=63 cols=35"));
    assert_eq!(text.lines().count(), 64);
}
