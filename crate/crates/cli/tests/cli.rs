use std::io::Write;
use std::process::{Command, Output, Stdio};

fn liesmall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liesmall")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_liesmall"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_reports_match() {
    let o = liesmall(&["list", "--p", "2", "--dim", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().any(|l| l == "T4.2.2-delta1"));
    assert_eq!(text.lines().last().unwrap(), "expected 5 listed 5 constructible 5 MATCH");
}

#[test]
fn build_identify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let path = path.to_str().unwrap();
    let o = liesmall(&["build", "--label", "T6.1.3a(x+1)", "--p", "2", "--m", "2", "-o", path]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with(r#"{"field":{"p":2,"m":2,"modulus":[1,1,1]},"dim":6,"name":"T6.1.3a(x+1)""#));

    let o = liesmall(&["identify", path]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "T6.1.3a(x+1)\n");

    // Printing to stdout gives the same bytes as the file.
    let o = liesmall(&["build", "--label", "T6.1.3a(x+1)", "--p", "2", "--m", "2"]);
    assert_eq!(stdout(&o), text);

    let o = with_stdin(&["identify", "-"], text.as_bytes());
    assert_eq!(stdout(&o), "T6.1.3a(x+1)\n");
}

#[test]
fn invariants_are_sorted_json() {
    let sl2 = stdout(&liesmall(&["build", "--label", "T3.1.sl2", "--p", "5"]));
    let o = with_stdin(&["invariants"], sl2.as_bytes());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with(r#"{"ad_charpoly_digest":"#), "{text}");
    assert!(text.contains(r#""dim":3,"dim_center":0,"dim_centroid":1,"dim_derivations":3,"dim_radical":0"#), "{text}");
}

#[test]
fn derivations_of_w() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("w.json");
    let out = dir.path().join("der.json");
    let w = liesmall(&["build", "--label", "T3.1.W", "--p", "2", "-o", src.to_str().unwrap()]);
    assert!(w.status.success());
    let o = liesmall(&["derivations", src.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dimension 5\n");
    let der = std::fs::read_to_string(&out).unwrap();
    assert!(der.contains(r#""dim":5,"name":"Der(T3.1.W)""#));

    let o = liesmall(&["derivations", src.to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&o.stderr), "dimension 5\n");
    assert_eq!(stdout(&o), der);
}

#[test]
fn isotest_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let file = |label: &str| {
        let p = dir.path().join(format!("{label}.json"));
        let o = liesmall(&["build", "--label", label, "--p", "3", "-o", p.to_str().unwrap()]);
        assert!(o.status.success());
        p.to_str().unwrap().to_string()
    };
    let (a, b, c) = (file("T6.3.4"), file("T6.3.5"), file("T6.3.6"));
    let o = liesmall(&["isotest", &a, &b]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("isomorphic"));
    assert_eq!(lines.next(), Some("witness (column i is the image of basis vector i):"));
    assert_eq!(lines.count(), 6);

    assert_eq!(stdout(&liesmall(&["isotest", &a, &c])), "not_isomorphic\n");
}

#[test]
fn exit_codes() {
    // Usage errors.
    assert_eq!(liesmall(&["list", "--p", "4", "--dim", "5"]).status.code(), Some(2));
    assert_eq!(liesmall(&["build", "--label", "T9.9.x", "--p", "3"]).status.code(), Some(2));
    assert_eq!(liesmall(&["list", "--p", "3", "--dim", "7"]).status.code(), Some(2));
    assert_eq!(liesmall(&["frobnicate"]).status.code(), Some(2));

    // Domain errors.
    let o = with_stdin(&["identify"], b"{\"field\":");
    assert_eq!(o.status.code(), Some(1));
    let jacobi =
        br#"{"field":{"p":3,"m":1,"modulus":[0,1]},"dim":3,"brackets":[[0,1,[[0],[0],[1]]],[1,2,[[0],[1],[0]]]]}"#;
    let o = with_stdin(&["identify"], jacobi);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0, 1, 2)"));
    let abelian = br#"{"field":{"p":3,"m":1,"modulus":[0,1]},"dim":3,"brackets":[]}"#;
    assert_eq!(with_stdin(&["identify"], abelian).status.code(), Some(1));
    assert_eq!(liesmall(&["identify", "/nonexistent/file.json"]).status.code(), Some(1));
}

#[test]
fn unidentified_algebra_prints_fingerprint() {
    // W(1;2) acting on a 2-dimensional abelian radical through x^(3)∂ by diag(0, 1).
    let w = r#"[0,1,[[1],[0],[0],[0],[0],[0]]],[0,2,[[0],[1],[0],[0],[0],[0]]],[0,3,[[0],[0],[1],[0],[0],[0]]],[1,2,[[0],[0],[1],[0],[0],[0]]],[3,5,[[0],[0],[0],[0],[0],[1]]]"#;
    let text = format!(r#"{{"field":{{"p":2,"m":1,"modulus":[1,1]}},"dim":6,"brackets":[{w}]}}"#);
    let o = with_stdin(&["identify"], text.as_bytes());
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("no catalog class matches; fingerprint:\n{\n"), "{out}");
    assert!(out.contains("\"dim_radical\": 2"));
}

#[test]
fn verify_reports_per_dimension() {
    let o = liesmall(&["verify", "--p", "7"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with("PASS")));

    let o = liesmall(&["verify", "--p", "2", "--dim", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().ends_with("FAIL"));
    assert!(text.contains("T6.1.3b-delta0"));
}
