//! End-to-end tests of the `qpb` binary: exit codes, JSON determinism, and
//! the regression fixture corpus.

use std::process::{Command, Output};

fn qpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn nf_matches_spec_example() {
    let out = qpb(&["nf", "--n", "2", "a[2,2]*a[1,1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "a[1,1]*a[2,2] - (q^-1 - q)*a[1,2]*a[2,1]");
}

#[test]
fn usage_errors_exit_2() {
    let out = qpb(&["nf", "--n", "2", "a[3,1]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qpb(&["nf", "--n", "2", ""]);
    assert_eq!(out.status.code(), Some(2));
    let out = qpb(&["verify", "nonsense", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qpb(&["nf", "--n", "2", "--algebra", "pq", "p[2,1]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = qpb(&["nf", "--n", "3", "--algebra", "slq", "--budget", "2",
        "a[3,3]*a[3,2]*a[3,1]*a[2,3]*a[2,2]*a[2,1]"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["verify", "determinant", "--n", "2", "--format", "json", "--seed", "7"];
    let a = qpb(&args);
    let b = qpb(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("\"schema\": 1"));
    assert!(text.contains("\"overall\": \"pass\""));
    // canonical ordering: ids appear sorted
    let ids: Vec<usize> = ["det/central/n2", "det/grouplike/n2", "det/laplace/n2", "det/row-col/n2"]
        .iter()
        .map(|id| text.find(id).unwrap())
        .collect();
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn failing_suite_exits_1_with_witness() {
    let out = qpb(&["verify", "negative", "--n", "2", "--format", "json"]);
    // the negative suite itself passes (it asserts that corruption is caught)
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("\"overall\": \"pass\""));
}

#[test]
fn q_specialization() {
    let out = qpb(&["nf", "--n", "2", "--q", "1", "a[2,2]*a[1,1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "a[1,1]*a[2,2]");
    let out = qpb(&["nf", "--n", "2", "--q", "0", "a[1,1]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theta_file_round_trip() {
    let dir = std::env::temp_dir().join("qpb-theta-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("theta.txt");
    std::fs::write(&path, "# phases\n1 2 g^2\n").unwrap();
    let out = qpb(&["twist-product", "--mode", "both", "--n", "2", "--algebra", "projq",
        "--theta-file", path.to_str().unwrap(), "x[1]", "x[2]"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "g[1,2]^2*x[1]*x[2]");
    // rational exponents are rejected
    std::fs::write(&path, "1 2 g^1/2\n").unwrap();
    let out = qpb(&["twist-product", "--n", "2", "--algebra", "projq",
        "--theta-file", path.to_str().unwrap(), "x[1]", "x[2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("integers only"));
}

#[test]
fn localize_check_order() {
    let out = qpb(&["localize", "--n", "2", "--invert", "1,2", "--check-order", "--degree", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn fixture_corpus() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut total = 0usize;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let header = text
            .lines()
            .find(|l| l.starts_with("# algebra:"))
            .unwrap_or_else(|| panic!("{path:?} missing `# algebra:` header"));
        let mut algebra = "mq".to_string();
        let mut n = "2".to_string();
        let mut invert: Option<String> = None;
        for field in header.trim_start_matches("# algebra:").split_whitespace() {
            if let Some(v) = field.strip_prefix("n=") {
                n = v.to_string();
            } else if let Some(v) = field.strip_prefix("invert=") {
                invert = Some(v.to_string());
            } else {
                algebra = field.to_string();
            }
        }
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (expr, expected) = line.split_once("=>").unwrap_or_else(|| {
                panic!("{path:?}: malformed fixture line `{line}`")
            });
            let mut args: Vec<String> = vec![
                "nf".into(),
                "--algebra".into(),
                algebra.clone(),
                "--n".into(),
                n.clone(),
            ];
            if let Some(inv) = &invert {
                args.push("--invert".into());
                args.push(inv.clone());
            }
            args.push(expr.trim().into());
            let argrefs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
            let out = qpb(&argrefs);
            assert!(
                out.status.success(),
                "{path:?}: `{expr}` failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            assert_eq!(
                stdout(&out).trim(),
                expected.trim(),
                "{path:?}: normal form of `{}` changed",
                expr.trim()
            );
            total += 1;
        }
    }
    assert!(total >= 20, "fixture corpus unexpectedly small ({total} cases)");
}
