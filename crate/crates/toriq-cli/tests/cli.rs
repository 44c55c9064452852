//! End-to-end tests of the binary: exit code discipline (0 accepted,
//! 1 rejected, 2 unusable input, 3 internal error), stream separation
//! (data on stdout, verdicts on stderr), the --json diagnostic format,
//! and robustness against malformed input.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use toriq::builtin::{builtin_fan, roster};
use toriq::category::{constant_object, rep_to_value};
use toriq::json::to_pretty_string;

fn toriq_run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toriq"));
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(bytes) = stdin {
        child.stdin.take().unwrap().write_all(bytes).unwrap();
    }
    child.wait_with_output().expect("binary exits")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("terminated by exit, not signal")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is text")
}

fn workdir() -> std::path::PathBuf {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_file(name: &str, contents: &str) -> String {
    let path = workdir().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

const BAD_FAN: &str =
    r#"{"dim": 2, "rays": [[1, 0], [1, 2]], "max_cones": [[0, 1]]}"#;

#[test]
fn every_builtin_example_pipes_back_into_fan_check() {
    for name in roster() {
        let exported = toriq_run(&["example", name], None);
        assert_eq!(exit_code(&exported), 0, "{name}");
        let checked = toriq_run(&["fan", "check", "-"], Some(&exported.stdout));
        assert_eq!(exit_code(&checked), 0, "{name}: {}", stderr_text(&checked));
        assert!(stderr_text(&checked).starts_with("fan ok:"), "{name}");
    }
}

#[test]
fn fan_check_rejects_a_non_smooth_cone_with_its_witness() {
    let path = write_file("bad_fan.json", BAD_FAN);

    let output = toriq_run(&["fan", "check", &path], None);
    assert_eq!(exit_code(&output), 1);
    assert_eq!(
        stderr_text(&output),
        "invalid fan: cone [0,1] is not smooth: ray lattice has invariant factors [1, 2]\n"
    );

    let output = toriq_run(&["--json", "fan", "check", &path], None);
    assert_eq!(exit_code(&output), 1);
    let report: Value = serde_json::from_str(&stderr_text(&output)).expect("json diagnostics");
    assert_eq!(report["passed"], Value::Bool(false));
    assert_eq!(report["failures"][0]["kind"], "non_smooth_cone");
    assert_eq!(report["failures"][0]["diagonal"], serde_json::json!([1, 2]));
}

#[test]
fn trusting_the_fan_skips_only_the_intersection_check() {
    let fan = to_pretty_string(&builtin_fan("p2").unwrap().to_value());
    let path = write_file("p2.json", &fan);
    let output = toriq_run(&["--trust-fan", "fan", "check", &path], None);
    assert_eq!(exit_code(&output), 0);
    assert!(stderr_text(&output).contains("(pairwise intersection check skipped)"));

    // smoothness is still enforced under --trust-fan
    let bad = write_file("bad_fan_trusted.json", BAD_FAN);
    let output = toriq_run(&["--trust-fan", "fan", "check", &bad], None);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn unusable_inputs_all_exit_two() {
    let missing = toriq_run(&["fan", "check", "/nonexistent/fan.json"], None);
    assert_eq!(exit_code(&missing), 2);
    assert!(stderr_text(&missing).starts_with("error:"));

    let truncated = write_file("truncated.json", r#"{"dim": 2, "rays": [[1, 0"#);
    let output = toriq_run(&["fan", "check", &truncated], None);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr_text(&output).contains("invalid JSON"));

    let floats = write_file("floats.json", r#"{"dim": 1, "rays": [[1.5]], "max_cones": [[0]]}"#);
    assert_eq!(exit_code(&toriq_run(&["fan", "check", &floats], None)), 2);

    let unknown = toriq_run(&["example", "nope"], None);
    assert_eq!(exit_code(&unknown), 2);
    assert!(stderr_text(&unknown).contains("unknown example \"nope\""));
    assert!(stderr_text(&unknown).contains("p1, p2, fan1"));

    // clap's own usage errors share the same code
    let usage = toriq_run(&["fan"], None);
    assert_eq!(exit_code(&usage), 2);
}

#[test]
fn rep_check_exit_codes_track_the_verdict() {
    let fan = builtin_fan("cn:1").unwrap();
    let fan_path = write_file("c1.json", &to_pretty_string(&fan.to_value()));
    let good = write_file(
        "c1_good.json",
        &to_pretty_string(&rep_to_value(&constant_object(&fan, 1))),
    );
    let output = toriq_run(&["rep", "check", &fan_path, &good], None);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stderr_text(&output), "ok: conditions (i)-(iv) all hold\n");

    // v.u = -Id makes the monodromy vanish: rejected, exit 1
    let bad = write_file(
        "c1_bad.json",
        r#"{"spaces": {"[]": 1, "[0]": 1}, "u": {"[]->[0]": [[1]]}, "v": {"[0]->[]": [[-1]]}}"#,
    );
    let output = toriq_run(&["rep", "check", &fan_path, &bad], None);
    assert_eq!(exit_code(&output), 1);
    assert_eq!(stderr_text(&output), "(ii) at ([], 0): monodromy [[0]] is singular\n");

    let output = toriq_run(&["--json", "rep", "check", &fan_path, &bad], None);
    assert_eq!(exit_code(&output), 1);
    let report: Value = serde_json::from_str(&stderr_text(&output)).unwrap();
    assert_eq!(report["failures"][0]["condition"], "ii");

    // a representation missing a vertex space does not fit the quiver: exit 2
    let misshapen = write_file(
        "c1_misshapen.json",
        r#"{"spaces": {"[]": 1}, "u": {}, "v": {}}"#,
    );
    let output = toriq_run(&["rep", "check", &fan_path, &misshapen], None);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr_text(&output).contains("(shape)"));
}

#[test]
fn hom_prints_the_dimension_on_stdout() {
    let fan = builtin_fan("p1").unwrap();
    let fan_path = write_file("p1.json", &to_pretty_string(&fan.to_value()));
    let rep = write_file(
        "p1_const.json",
        &to_pretty_string(&rep_to_value(&constant_object(&fan, 1))),
    );
    let output = toriq_run(&["rep", "hom", &fan_path, &rep, &rep], None);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(output.stdout, b"3\n");

    let output = toriq_run(&["rep", "hom", &fan_path, &rep, &rep, "--basis"], None);
    assert_eq!(exit_code(&output), 0);
    let text = String::from_utf8(output.stdout).unwrap();
    let (dim_line, basis) = text.split_once('\n').unwrap();
    assert_eq!(dim_line, "3");
    let basis: Value = serde_json::from_str(basis).unwrap();
    assert_eq!(basis.as_array().unwrap().len(), 3);
}

#[test]
fn exports_go_to_stdout_with_quiet_stderr() {
    let fan_path = write_file(
        "p2_exports.json",
        &to_pretty_string(&builtin_fan("p2").unwrap().to_value()),
    );

    let dot = toriq_run(&["quiver", &fan_path], None);
    assert_eq!(exit_code(&dot), 0);
    assert!(dot.stderr.is_empty());
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));

    let json = toriq_run(&["quiver", &fan_path, "--format", "json"], None);
    let quiver: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(quiver["vertices"].as_array().unwrap().len(), 7);

    let words = toriq_run(&["relations", &fan_path], None);
    assert_eq!(exit_code(&words), 0);
    assert!(words.stderr.is_empty());
    let text = String::from_utf8(words.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|line| line.contains(" = ")));

    let info = toriq_run(&["fan", "info", &fan_path], None);
    assert_eq!(exit_code(&info), 0);
    let parsed: Value = serde_json::from_slice(&info.stdout).unwrap();
    assert_eq!(parsed["dim"], 2);
}

#[test]
fn malformed_documents_never_crash_the_binary() {
    // every strict prefix of a minified document is invalid JSON
    let full = serde_json::to_string(&builtin_fan("p2").unwrap().to_value()).unwrap();
    for len in 0..full.len() {
        let path = write_file("prefix.json", &full[..len]);
        let output = toriq_run(&["fan", "check", &path], None);
        assert_eq!(exit_code(&output), 2, "prefix of length {len}: {}", stderr_text(&output));
    }

    // structurally wrong but syntactically valid documents are also code 2
    for (i, doc) in ["null", "[]", "42", "\"fan\"", "{}", r#"{"dim": "two"}"#]
        .iter()
        .enumerate()
    {
        let path = write_file(&format!("wrong_{i}.json"), doc);
        let output = toriq_run(&["fan", "check", &path], None);
        assert_eq!(exit_code(&output), 2, "document {doc:?}");
    }

    // random byte corruption may leave the file readable or not, but the
    // binary must always exit cleanly with a verdict code
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bytes = full.as_bytes();
    for trial in 0..60 {
        let mut mutated = bytes.to_vec();
        for _ in 0..rng.gen_range(1..=3) {
            let at = rng.gen_range(0..mutated.len());
            mutated[at] = rng.gen_range(0..=255);
        }
        let path = workdir().join("mutated.json");
        std::fs::write(&path, &mutated).unwrap();
        let output = toriq_run(&["fan", "check", path.to_str().unwrap()], None);
        let code = exit_code(&output);
        assert!((0..=2).contains(&code), "trial {trial}: exit {code}, stderr: {}", stderr_text(&output));
    }
}
