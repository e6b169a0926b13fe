use proptest::prelude::*;
use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str], cache: Option<&Path>) -> (i32, String, String) {
    let mut argv = vec!["cmpl".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmpl::run(&argv, cache.map(Path::to_path_buf), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str], cache: Option<&Path>) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let (code, out, err) = run(&a, cache);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad JSON ({e}): {out}\nstderr: {err}"));
    (code, v)
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v.as_object_mut().unwrap().remove("cache");
    v
}

#[test]
fn relations_imaginary_gaussian() {
    let (code, v) = run_json(&["relations", "--min-poly", "x^2+1", "--phi", "0"], None);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["mt_dim"], 2);
    assert_eq!(v["result"]["lattice"]["basis"], serde_json::json!([]));
    assert_eq!(v["status"], "ok");
}

#[test]
fn siegel_g2_labels() {
    let (code, v) = run_json(&["siegel", "--g", "2"], None);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["labels"]["formal"], serde_json::json!(["t1^2 L^-1", "t1 t2 L^-1", "t2^2 L^-1"]));
    let (code, text, _) = run(&["siegel", "--g", "2"], None);
    assert_eq!(code, 0);
    assert!(text.contains("θ1θ2/π"), "{text}");
}

#[test]
fn siegel_with_cm_data() {
    let (code, v) = run_json(&["siegel", "--min-poly", "x^4+5x^2+2", "--phi", "0,1"], None);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["g"], 2);
    assert_eq!(v["result"]["rootspace"]["condition_i"], true);
    assert_eq!(run(&["siegel", "--min-poly", "x^4+5x^2+2", "--phi", "0,2"], None).0, 3);
    let (code, _, err) = run(&["siegel", "--g", "3", "--min-poly", "x^2+1", "--phi", "0"], None);
    assert_eq!(code, 3);
    assert!(err.contains("does not match"));
}

#[test]
fn verify_siegel_2i() {
    let (code, v) = run_json(&["verify", "siegel-g1", "--tau0", "2i", "--prec", "1024"], None);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "certified");
    let cert = &v["certificates"][0];
    assert_eq!(cert["kind"], "siegel-g1");
    assert_eq!(cert["verified_at_bits"], 2048);
    assert_eq!(cert["polynomial"], serde_json::json!(["42362284041", "0", "1"]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "hasc", "--discs=-4,-3"], None).0, 2);
    assert_eq!(run(&["verify", "beta-diag", "--disc", "-4"], None).0, 0);
    assert_eq!(run(&["verify", "siegel-g1", "--tau0", "i"], None).0, 3);
    assert_eq!(run(&["verify", "siegel-g1", "--tau0", "-i"], None).0, 3);
    assert_eq!(run(&["--height-bound", "0", "verify", "hasc", "--discs=-4,-3"], None).0, 3);
    assert_eq!(run(&["--prec-bits", "32", "hilbert", "--g", "2"], None).0, 3);
    assert_eq!(run(&["relations", "--min-poly", "x^3+1", "--phi", "0"], None).0, 3);
    assert_eq!(run(&["weyl", "--min-poly", "x^2-2"], None).0, 3);
    assert_eq!(run(&["biq", "count", "--file", "/nonexistent/x.json"], None).0, 3);
    assert_eq!(run(&["--help"], None).0, 0);
    assert_eq!(run(&[], None).0, 3);
    let (code, v) = run_json(&["verify", "siegel-g1", "--tau0", "x"], None);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "input-error");
}

#[test]
fn biq_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    // t1 t2 L^-1 twice plus t1^2 L^-1: one block of size two.
    std::fs::write(&s, r#"{"labels": [{"L": -1, "theta": [1, 1]}, {"L": -1, "theta": [2]}, {"L": -1, "theta": [1, 1]}]}"#).unwrap();
    let (code, v) = run_json(&["biq", "count", "--file", s.to_str().unwrap()], None);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["count"], "infinite");
    let (code, v) = run_json(&["biq", "decompose", "--file", s.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["partition"].as_array().unwrap().len(), 2);
    std::fs::write(&s, r#"{"labels": [{"l": -1, "theta": [1]}]}"#).unwrap();
    assert_eq!(run(&["biq", "count", "--file", s.to_str().unwrap()], None).0, 3);
    std::fs::write(&s, "[1,").unwrap();
    assert_eq!(run(&["biq", "count", "--file", s.to_str().unwrap()], None).0, 3);
}

#[test]
fn cache_hit_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["weyl", "--min-poly", "x^4+5x^2+2"];
    let (c1, a) = run_json(&args, Some(dir.path()));
    let (c2, b) = run_json(&args, Some(dir.path()));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["cache"]["hits"], 0);
    assert_eq!(b["cache"]["hits"], 1);
    assert_eq!(strip_timing(a.clone()), strip_timing(b));
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::remove_file(e.unwrap().path()).unwrap();
    }
    let (_, c) = run_json(&args, Some(dir.path()));
    assert_eq!(c["cache"]["hits"], 0);
    assert_eq!(
        serde_json::to_string(&strip_timing(a)).unwrap(),
        serde_json::to_string(&strip_timing(c)).unwrap()
    );
}

#[test]
fn corrupt_cache_entry_recomputes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hilbert", "--g", "3"];
    let (_, a) = run_json(&args, Some(dir.path()));
    let key = a["cache"]["key"].as_str().unwrap();
    std::fs::write(dir.path().join(format!("{key}.json")), "garbage").unwrap();
    let (code, b) = run_json(&args, Some(dir.path()));
    assert_eq!(code, 0);
    assert_eq!(b["cache"]["hits"], 0);
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn concurrent_processes_share_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let spawn = || {
        Command::new(env!("CARGO_BIN_EXE_cmpl"))
            .args(["--json", "verify", "siegel-g1", "--tau0", "(1+sqrt(-7))/2"])
            .env("CMPL_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let (a, b) = std::thread::scope(|s| {
        let a = s.spawn(spawn);
        let b = s.spawn(spawn);
        (a.join().unwrap(), b.join().unwrap())
    });
    let va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!((a.status.code(), b.status.code()), (Some(0), Some(0)));
    let hits = va["cache"]["hits"].as_u64().unwrap() + vb["cache"]["hits"].as_u64().unwrap();
    assert_eq!(hits, 1, "exactly one run computes");
    assert_eq!(va["result"], vb["result"]);
}

#[test]
fn json_report_round_trips() {
    let (_, text, _) = run(&["--json", "hilbert", "--g", "2"], None);
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert!(cmpl::report::Outcome::from_json(&serde_json::json!({
        "status": v["status"], "result": v["result"], "certificates": v["certificates"], "summary": []
    }))
    .is_some());
}

const WORDS: &[&str] = &[
    "relations", "biq", "count", "decompose", "test", "siegel", "hilbert", "weyl", "verify", "siegel-g1",
    "beta-diag", "hasc", "--g", "--min-poly", "--phi", "--types", "--file", "--tau0", "--disc", "--discs",
    "--values", "--variant", "--perturb", "--prec-bits", "--height-bound", "--degree-bound", "--json",
    "x^2+1", "x^4+5x^2+2", "0", "0,1", "-4", "2i", "1e-10", "10^8", "0/0", "((", "theta(-4)", "99999999999999999999",
    "-", "", "é", "--", "2^99999",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn malformed_argv_never_panics(words in prop::collection::vec(prop::sample::select(WORDS), 0..6), junk in "[ -~]{0,12}") {
        let mut args: Vec<&str> = words.clone();
        args.push(&junk);
        let (code, _, err) = run(&args, None);
        prop_assert!([0, 1, 2, 3].contains(&code));
        if code == 3 {
            prop_assert!(!err.is_empty());
        }
    }
}
