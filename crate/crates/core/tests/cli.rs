use std::path::Path;

use greenring::cli::{run, EXIT_CORRUPT, EXIT_FAIL, EXIT_MISSING, EXIT_PARSE};

fn gr(cache: &Path, args: &[&str]) -> (i32, String) {
    let mut argv = vec!["gr".to_string(), "--cache-dir".into(), cache.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn build_mul_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let (code, out) = gr(d, &["mul", "x", "x^2"]);
    assert_eq!((code, out.trim()), (0, "1"));

    let (code, _) = gr(d, &["mul", "[Omega^2 V(1,0)]", "x"]);
    assert_eq!(code, EXIT_MISSING);
    let (code, _) = gr(d, &["verify", "--suite", "stable"]);
    assert_eq!(code, EXIT_MISSING);

    let (code, out) = gr(d, &["build", "--max-m", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("wrote "));
    let (code, out) = gr(d, &["build", "--max-m", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("up to date: "));

    let (code, prod) = gr(d, &["mul", "Omega^1 V(1,0)", "Omega^1 V(1,0)"]);
    assert_eq!(code, 0);
    let (code, same) = gr(d, &["nf", "[Omega^1 V(1,0)] [Omega^1 V(1,0)]"]);
    assert_eq!((code, &same), (0, &prod));

    let (code, out) = gr(d, &["verify", "--suite", "stable", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.contains("\"status\":\"pass\"")), "{out}");

    let tables = d.join("tables-3.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&tables).unwrap()).unwrap();
    v["max_m"] = 1.into();
    std::fs::write(&tables, v.to_string()).unwrap();
    let (code, _) = gr(d, &["mul", "x", "y"]);
    assert_eq!(code, EXIT_CORRUPT);
}

#[test]
fn tensor_output_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let (code, out) = gr(d, &["tensor", "V(3,1)", "V(3,0)", "--format", "pretty"]);
    assert_eq!(code, 0);
    assert_eq!(out, "V(3,2) ⊕ P(1,0)\ndims: 9 = 3 + 6\n");

    let (code, out) = gr(d, &["tensor", "V(2,0)", "M_1(1,0;eta=1)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims_ok"], true);
    assert_eq!(v["summands"][1]["label"], "M_1(2,0;eta=-q)");

    assert_eq!(gr(d, &["mul", "x", "z*"]).0, EXIT_PARSE);
    assert_eq!(gr(d, &["tensor", "V(4,0)", "V(1,0)"]).0, EXIT_PARSE);
    assert_eq!(gr(d, &["--n", "5", "mul", "x", "y"]).0, EXIT_PARSE);
    assert_eq!(gr(d, &["--n", "2", "mul", "x", "y"]).0, EXIT_PARSE);
    assert_eq!(gr(d, &["frobnicate"]).0, EXIT_PARSE);
    assert_ne!(EXIT_FAIL, 0);

    let (code, out) = gr(d, &["--n", "4", "mul", "z+", "z-"]);
    assert_eq!(code, 0);
    assert!(out.contains("y"));
}
