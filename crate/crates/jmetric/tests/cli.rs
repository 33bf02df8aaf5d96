use std::path::PathBuf;
use std::process::Command;

use jmetric::cli::{run, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, EXIT_VERDICT};
use jmetric::config::{manifold_from_str, ConfigError};
use jmetric::report::{AlgebraReport, IdentitiesReport, VerifyReport};
use jmetric_core::classify::{classify, ClassificationReport, TableReport, DEFAULT_TOL};
use jmetric_core::manifold::{validate_structure, ValidationReport};
use jmetric_core::SamplePlan;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jmetric"))
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .display()
        .to_string()
}

fn stdout_of(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn polar_config_is_kahler() {
    let m = jmetric::config::load_manifold(config("polar-kahler.json").as_ref()).unwrap();
    let plan = SamplePlan::new(0, 20, 5);
    assert!(validate_structure(&m, &plan).unwrap().valid);
    let r = classify(&m, &plan, DEFAULT_TOL).unwrap();
    assert!(r.verdicts.kahler.holds() && r.verdicts.integrable.holds());
}

#[test]
fn config_errors_point_at_the_problem() {
    let bad_json = "{\n  \"kind\": {\"alpha\": -1, \"epsilon\": 1},\n  \"dim\": 2,,\n}";
    let e = manifold_from_str(bad_json, "inline").unwrap_err();
    assert!(matches!(e, ConfigError::Json { ref source, .. } if source.line() == 3), "{e}");

    let bad_expr = r#"{"kind": {"alpha": -1, "epsilon": 1}, "dim": 2,
        "domain": {"lo": [-1, -1], "hi": [1, 1]},
        "metric": ["1", "0", "0", "1 + y"],
        "structure": [["0", "-1"], ["1", "0"]]}"#;
    let e = manifold_from_str(bad_expr, "inline").unwrap_err();
    assert_eq!(e.to_string(), "metric[1][1]: line 1, column 5: unexpected character `y`");

    let bad_kind = r#"{"kind": {"alpha": 2, "epsilon": 1}, "dim": 2,
        "domain": {"lo": [-1, -1], "hi": [1, 1]},
        "metric": ["1", "0", "0", "1"], "structure": ["0", "-1", "1", "0"]}"#;
    assert!(manifold_from_str(bad_kind, "inline").is_err());

    let bad_shape = r#"{"kind": {"alpha": -1, "epsilon": 1}, "dim": 2,
        "domain": {"lo": [-1, -1], "hi": [1, 1]},
        "metric": ["1", "0", "0"], "structure": ["0", "-1", "1", "0"]}"#;
    assert!(matches!(manifold_from_str(bad_shape, "inline"), Err(ConfigError::Shape(_))));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(std::iter::once("jmetric").chain(args.iter().copied()));
    assert_eq!(code(&["catalog", "--format", "json", "--output", "/dev/null"]), EXIT_OK);
    assert_eq!(code(&["classify", "--manifold", "nope"]), EXIT_USAGE);
    assert_eq!(code(&["classify", "--manifold", "flat-kahler", "--tol=-1"]), EXIT_USAGE);
    assert_eq!(code(&["classify", "--manifold", "flat-kahler", "--tol", "0"]), EXIT_USAGE);
    assert_eq!(code(&["validate", "--manifold", "flat-kahler", "--vectors", "0"]), EXIT_USAGE);
    assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(code(&["validate", "--manifold", "/nonexistent/m.json"]), EXIT_USAGE);
    assert_eq!(
        code(&["classify", "--manifold", "random-norden-42", "--points", "5", "--expect", "kahler", "--output", "/dev/null"]),
        EXIT_VERDICT
    );
    assert_eq!(
        code(&["classify", "--manifold", "s6-nearly-kahler", "--points", "5", "--expect", "nearly", "--output", "/dev/null"]),
        EXIT_OK
    );
    assert_ne!(EXIT_INTERNAL, EXIT_VERDICT);
}

#[test]
fn usage_errors_name_the_flag() {
    let out = bin().args(["classify", "--manifold", "flat-kahler", "--points", "zero"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--points"));
}

#[test]
fn invalid_structure_is_a_failed_verdict() {
    let dir = std::env::temp_dir().join(format!("jmetric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"kind": {"alpha": 1, "epsilon": 1}, "dim": 2,
            "domain": {"lo": [-1, -1], "hi": [1, 1]},
            "metric": ["1", "0", "0", "1"], "structure": ["1", "0", "0", "1"]}"#,
    )
    .unwrap();
    let (code, _) = stdout_of(&["validate", "--manifold", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VERDICT);
    let (code, _) = stdout_of(&["classify", "--manifold", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VERDICT);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_reports_round_trip() {
    let common = ["--format", "json", "--points", "5", "--vectors", "3"];
    let with = |args: &[&str]| {
        let mut v: Vec<&str> = args.to_vec();
        v.extend(common);
        let (code, s) = stdout_of(&v);
        assert_eq!(code, EXIT_OK, "{args:?}");
        s
    };
    fn check<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(s: &str) {
        let parsed: T = serde_json::from_str(s).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(again, s);
        assert_eq!(serde_json::from_str::<T>(&again).unwrap(), parsed);
    }
    check::<ClassificationReport>(&with(&["classify", "--manifold", "s6-nearly-kahler"]));
    check::<ClassificationReport>(&with(&["classify", "--manifold", &config("polar-kahler.json")]));
    check::<ValidationReport>(&with(&["validate", "--manifold", "random-product-riemannian-7"]));
    check::<VerifyReport>(&with(&["verify", "--manifold", "random-hermitian-13"]));
    check::<TableReport>(&with(&["verify"]));
    check::<AlgebraReport>(&with(&["algebra-table"]));
    check::<IdentitiesReport>(&with(&["identities", "--manifold", "pullback-integrable-norden"]));
}

#[test]
fn flat_kahler_report_is_all_zero() {
    let (code, s) = stdout_of(&["classify", "--manifold", "flat-kahler", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let r: ClassificationReport = serde_json::from_str(&s).unwrap();
    let v = serde_json::to_value(&r.residuals).unwrap();
    assert!(v.as_object().unwrap().values().all(|x| x.as_f64() == Some(0.0)));
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let path = std::env::temp_dir().join(format!("jmetric-out-{}.json", std::process::id()));
    let args = ["classify", "--manifold", "random-norden-42", "--points", "5", "--format", "json"];
    let (_, direct) = stdout_of(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--output", &p]);
    let (code, printed) = stdout_of(&with_out);
    assert_eq!(code, EXIT_OK);
    assert!(printed.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
    std::fs::remove_file(&path).unwrap();
}
