use std::path::Path;
use std::process::{Command, Output};

fn hypercat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn seq_golden_lines() {
    for (args, want) in [
        (&["seq", "--m", "2", "--n-max", "4"][..], "1 1 6 57 678\n"),
        (&["seq", "--m", "6", "--n-max", "3"], "1 1 924 6358044\n"),
        (
            &["seq", "--m", "2", "--n-max", "4", "--via", "gf"],
            "1 1 6 57 678\n",
        ),
        (&["seq", "--m", "3", "--n-max", "0"], "1\n"),
    ] {
        let o = hypercat(args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert_eq!(stdout(&o), want, "{args:?}");
    }
}

#[test]
fn seq_bfile_is_well_formed() {
    let o = hypercat(&["seq", "--m", "1", "--n-max", "8", "--format", "bfile"]);
    let text = stdout(&o);
    assert!(text.starts_with("0 1\n1 1\n2 2\n"));
    assert!(text.ends_with("8 1430\n"));
    assert!(!text.contains('\r'));
    for (i, line) in text.lines().enumerate() {
        let (idx, val) = line.split_once(' ').unwrap();
        assert_eq!(idx, i.to_string());
        assert!(
            !val.is_empty() && val.bytes().all(|b| b.is_ascii_digit()),
            "{line:?}"
        );
    }
}

#[test]
fn seq_csv_and_header() {
    let o = hypercat(&["seq", "--m", "2", "--n-max", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,value\n0,1\n1,1\n2,6\n");
    let o = hypercat(&[
        "seq",
        "--m",
        "2",
        "--n-max",
        "2",
        "--format",
        "csv",
        "--no-header",
    ]);
    assert_eq!(stdout(&o), "0,1\n1,1\n2,6\n");
}

#[test]
fn seq_json_schema() {
    let o = hypercat(&[
        "seq", "--m", "7", "--n-max", "6", "--format", "json", "--via", "gf",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m"], 7);
    assert_eq!(v["route"], "gf");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    // big values travel as strings
    assert_eq!(v["values"][6], "238681094467043912358445056");
    assert_eq!(v["values"].as_array().unwrap().len(), 7);
}

#[test]
fn routes_print_the_same_table() {
    for m in ["1", "2", "3"] {
        let tree = hypercat(&["seq", "--m", m, "--n-max", "9"]);
        let gf = hypercat(&["seq", "--m", m, "--n-max", "9", "--via", "gf"]);
        let jobs = hypercat(&["seq", "--m", m, "--n-max", "9", "--jobs", "3"]);
        assert_eq!(stdout(&tree), stdout(&gf));
        assert_eq!(stdout(&tree), stdout(&jobs));
    }
}

#[test]
fn tree_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("trees");
    let args = [
        "seq",
        "--m",
        "2",
        "--n-max",
        "8",
        "--cache",
        path_arg(&cache),
    ];
    let first = hypercat(&args);
    assert_eq!(code(&first), 0);
    assert!(cache.join("trees-9.txt").exists());
    let second = hypercat(&args);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(
        stdout(&first),
        "1 1 6 57 678 9270 139968 2285073 39871926\n"
    );
}

#[test]
fn corrupt_cache_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("trees-5.txt"), "not a cache\n").unwrap();
    let o = hypercat(&[
        "seq",
        "--m",
        "2",
        "--n-max",
        "4",
        "--cache",
        path_arg(dir.path()),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bfile_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(
        &good,
        "# hypercatalan m=2\n0 1\n1 1\n2 6\n3 57\n4 678\n5 9270\n20 123\n",
    )
    .unwrap();
    let o = hypercat(&[
        "seq",
        "--m",
        "2",
        "--n-max",
        "5",
        "--compare-bfile",
        path_arg(&good),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("agrees on 6 terms"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1\n1 1\n2 6\n3 58\n").unwrap();
    let o = hypercat(&[
        "seq",
        "--m",
        "2",
        "--n-max",
        "5",
        "--compare-bfile",
        path_arg(&bad),
    ]);
    assert_eq!(code(&o), 1);
    assert!(
        stderr(&o).contains("first difference at n = 3"),
        "{}",
        stderr(&o)
    );

    let missing = dir.path().join("missing.txt");
    let o = hypercat(&[
        "seq",
        "--m",
        "2",
        "--n-max",
        "5",
        "--compare-bfile",
        path_arg(&missing),
    ]);
    assert_eq!(code(&o), 2);

    let garbled = dir.path().join("garbled.txt");
    std::fs::write(&garbled, "0 1\n1 one\n").unwrap();
    let o = hypercat(&[
        "seq",
        "--m",
        "2",
        "--n-max",
        "5",
        "--compare-bfile",
        path_arg(&garbled),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_confirms_678_by_three_routes() {
    let o = hypercat(&["verify", "--m", "2", "--n-max", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("C_4^(2) = 678 by tree sum, generating function and labeled plane trees"));
    assert!(!text.contains("FAIL"));
    assert!(text.ends_with("7 of 7 checks passed\n"));
}

#[test]
fn verify_notices_a_wrong_block_count() {
    let o = hypercat(&[
        "verify",
        "--m",
        "2",
        "--n-max",
        "3",
        "--inject-fault",
        "w-off-by-one",
    ]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("FAIL f^2 - xF + x = 0"));
    let record = text
        .lines()
        .find_map(|l| l.strip_prefix("FAILURE "))
        .expect("machine-readable failure record");
    let v: serde_json::Value = serde_json::from_str(record).unwrap();
    assert_eq!(v["passed"], false);

    let o = hypercat(&[
        "verify",
        "--m",
        "2",
        "--n-max",
        "3",
        "--inject-fault",
        "w-off-by-one",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"f^2 - xF + x = 0"), "{failed:?}");
}

#[test]
fn asymp_reports_and_tolerances() {
    let o = hypercat(&["asymp", "--m", "2", "--terms", "100", "--no-header"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let a = text.lines().find(|l| l.starts_with("A ")).unwrap();
    assert!(a.contains("2.0000000000068961"), "{a}");

    let o = hypercat(&[
        "asymp",
        "--m",
        "2",
        "--terms",
        "100",
        "--assert-tol",
        "1e-6",
    ]);
    assert_eq!(code(&o), 0);
    let o = hypercat(&[
        "asymp",
        "--m",
        "2",
        "--terms",
        "100",
        "--assert-tol",
        "1e-15",
    ]);
    assert_eq!(code(&o), 1);
    let o = hypercat(&["asymp", "--m", "2", "--terms", "100", "--precision", "40"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn asymp_k_at_200_terms() {
    let o = hypercat(&["asymp", "--m", "2", "--terms", "200", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let k = &v["constants"][2];
    assert_eq!(k["name"], "K");
    assert!(k["empirical"]
        .as_str()
        .unwrap()
        .starts_with("5.05704458036912766"));
    assert!(k["difference"].as_f64().unwrap() < 1e-4);
}

#[test]
fn asymp_m1_matches_catalan_constants() {
    let o = hypercat(&[
        "asymp",
        "--m",
        "1",
        "--terms",
        "50",
        "--assert-tol",
        "1e-12",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["constants"][0]["conjectured"].as_str().unwrap(),
        "4.00000000000000000000"
    );
    assert_eq!(
        v["constants"][1]["conjectured"].as_str().unwrap(),
        "-1.50000000000000000000"
    );
    // 1/sqrt(pi)
    assert!(v["constants"][2]["conjectured"]
        .as_str()
        .unwrap()
        .starts_with("0.5641895835477562"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["asymp", "--m", "3", "--terms", "40"][..],
        &["verify", "--m", "1", "--n-max", "4", "--format", "json"],
        &["trees", "--n-max", "7", "--list"],
    ] {
        assert_eq!(hypercat(args).stdout, hypercat(args).stdout, "{args:?}");
    }
}

#[test]
fn gluing_golden() {
    for (args, want) in [
        (
            &["gluing", "--m", "2", "--r", "8"][..],
            "6*N^3 + 21*N^2 + 8*N\n",
        ),
        (
            &["gluing", "--m", "2", "--r", "12"],
            "57*N^4 + 715*N^3 + 2991*N^2 + 2012*N\n",
        ),
        (
            &["gluing", "--m", "1", "--r", "8"],
            "14*N^5 + 70*N^3 + 21*N\n",
        ),
        (
            &["gluing", "--m", "1", "--r", "4", "--jobs", "2"],
            "2*N^3 + N\n",
        ),
    ] {
        let o = hypercat(args);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), want);
    }
    assert_eq!(code(&hypercat(&["gluing", "--m", "2", "--r", "6"])), 2);
    assert_eq!(
        code(&hypercat(&[
            "gluing", "--m", "2", "--r", "12", "--budget", "100"
        ])),
        2
    );
}

#[test]
fn trees_counts_and_listing() {
    let o = hypercat(&["trees", "--n-max", "10", "--format", "json"]);
    let counts: Vec<u64> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("t6.txt");
    let o = hypercat(&[
        "trees",
        "--n-max",
        "6",
        "--list",
        "--no-header",
        "--cache",
        path_arg(&cache),
    ]);
    assert_eq!(stdout(&o).lines().count(), 6);
    assert!(cache.exists());
}

#[test]
fn usage_errors() {
    assert_eq!(code(&hypercat(&["seq", "--m", "0"])), 2);
    assert_eq!(code(&hypercat(&["asymp", "--format", "bfile"])), 2);
    assert_eq!(code(&hypercat(&["gluing", "--format", "csv"])), 2);
    assert_eq!(code(&hypercat(&["frobnicate"])), 2);
}
