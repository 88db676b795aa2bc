use std::process::Command;

use rfubini::cli::{run, run_with_predictor, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use rfubini::modular::Modulus;
use rfubini::periodicity::{predict_period, PeriodPrediction, VerificationReport};

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn call(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rfubini").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn off_by_one(r: usize, s: Modulus) -> rfubini::Result<PeriodPrediction> {
    let mut p = predict_period(r, s)?;
    p.omega += 1;
    Ok(p)
}

#[test]
fn compute_exact_and_residue() {
    let o = call(&["compute", "--r", "2", "--n", "2"]);
    assert_eq!((o.code, o.out.as_str()), (EXIT_OK, "62\n"));
    let o = call(&["compute", "--r", "2", "--n", "3", "--mod", "10"]);
    assert_eq!(o.out, "6\n");
}

#[test]
fn stirling_defaults_to_classical() {
    assert_eq!(call(&["stirling", "--n", "4", "--m", "2"]).out, "7\n");
    assert_eq!(
        call(&["stirling", "--n", "4", "--m", "3", "--r", "2"]).out,
        "5\n"
    );
}

#[test]
fn seq_formats() {
    let o = call(&["seq", "--r", "2", "--mod", "10", "--count", "4"]);
    assert_eq!(o.out, "2 0 2 6\n");
    let o = call(&[
        "seq", "--r", "2", "--mod", "10", "--count", "3", "--format", "csv",
    ]);
    assert_eq!(o.out, "n,residue\n0,2\n1,0\n2,2\n");
    let o = call(&[
        "seq", "--r", "1", "--mod", "2", "--count", "4", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["residues"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn predict_json() {
    let o = call(&["predict", "--r", "2", "--mod", "27", "--json"]);
    let p: PeriodPrediction = serde_json::from_str(&o.out).unwrap();
    assert_eq!((p.a, p.omega), (2, 18));
    assert_eq!(p.factors[0].case.as_str(), "odd_prime_power");
}

#[test]
fn detect_reports_observation() {
    let o = call(&["detect", "--r", "2", "--mod", "10", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["period"], 4);
    assert_eq!(v["preperiod"], 0);
    let o = call(&[
        "detect",
        "--r",
        "2",
        "--mod",
        "10",
        "--window",
        "64",
        "--unbounded",
    ]);
    assert!(o.out.starts_with("preperiod=0 period=4"), "{}", o.out);
    let o = call(&["detect", "--r", "2", "--mod", "10", "--window", "5"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn certify_single() {
    let o = call(&["certify", "--id", "C3"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.starts_with("C3 passed (512 entries)\n"), "{}", o.out);
}

#[test]
fn certify_appendix_respects_max_m() {
    let o = call(&["certify", "--id", "appendix", "--max-m", "9"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("appendix[m=7..=9] passed"), "{}", o.out);
}

#[test]
fn env_caps_max_m() {
    let o = Command::new(env!("CARGO_BIN_EXE_rfubini"))
        .args(["certify", "--id", "appendix"])
        .env("RFUBINI_MAX_M", "8")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("appendix[m=7..=8]"));
}

#[test]
fn oracle_counts() {
    assert_eq!(
        call(&["oracle", "weak-orders", "--n", "2", "--r", "2"]).out,
        "62\n"
    );
    assert_eq!(
        call(&["oracle", "partitions", "--n", "4", "--m", "3", "--r", "2"]).out,
        "5\n"
    );
    assert_eq!(
        call(&["oracle", "weak-orders", "--n", "9", "--r", "2"]).code,
        EXIT_USAGE
    );
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["compute", "--r", "2"],
        &["compute", "--r", "x", "--n", "2"],
        &["compute", "--r", "0", "--n", "2"],
        &["seq", "--r", "1", "--mod", "0", "--count", "3"],
        &["verify", "--r", "5..2"],
        &["verify", "--jobs", "0", "--r", "2", "--mod", "3"],
        &["certify", "--id", "C9"],
    ] {
        let o = call(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}");
        assert!(o.err.contains("error"), "{args:?}: {}", o.err);
        assert!(o.out.is_empty());
    }
    assert!(call(&["frobnicate"]).err.contains("Usage"));
}

#[test]
fn verify_report_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    let many = dir.path().join("many.json");
    let base = ["verify", "--r", "2..4", "--mod", "2..60"];
    let o = call(
        &[
            &base[..],
            &["--jobs", "1", "--report", one.to_str().unwrap()],
        ]
        .concat(),
    );
    assert_eq!(o.code, EXIT_OK, "{}", o.out);
    assert!(
        o.out.contains("177 cells, 177 passed, 0 failed"),
        "{}",
        o.out
    );
    let o = call(
        &[
            &base[..],
            &["--jobs", "4", "--report", many.to_str().unwrap()],
        ]
        .concat(),
    );
    assert_eq!(o.code, EXIT_OK);

    let a = std::fs::read(&one).unwrap();
    assert_eq!(a, std::fs::read(&many).unwrap());
    assert!(a.ends_with(b"\n"));

    let reports: Vec<VerificationReport> = serde_json::from_slice(&a).unwrap();
    assert_eq!(reports.len(), 177);
    assert_eq!((reports[0].r, reports[0].s), (2, 2));
    let again = serde_json::to_vec_pretty(&reports).unwrap();
    assert_eq!(&a[..a.len() - 1], &again[..]);

    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let keys: Vec<&str> = v[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    for k in ["r", "s", "prediction", "observation", "flags"] {
        assert!(keys.contains(&k), "{keys:?}");
    }
}

#[test]
fn corrupted_predictor_fails_verify() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["rfubini", "verify", "--r", "2..4", "--mod", "2..60"];
    let code = run_with_predictor(args, &mut out, &mut err, off_by_one);
    assert_eq!(code, EXIT_FAILURE);
    assert!(String::from_utf8(out).unwrap().contains("FAIL r="));
}
