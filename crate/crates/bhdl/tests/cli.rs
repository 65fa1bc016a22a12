//! End-to-end runs of the `bhdlc` binary: exit codes, diagnostics format,
//! output files, and the printed check summary.

use std::process::{Command, Output};

fn bhdlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhdlc"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn compile_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("blinky.net");
    let json = dir.path().join("blinky.json");
    let dot = dir.path().join("blinky.dot");
    let report = dir.path().join("blinky-report.json");
    let out = bhdlc(&[
        "compile",
        &fixture("blinky.bhdl"),
        "--top",
        "Blinky",
        "--netlist",
        net.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("pass, 0 fail, 0 unresolved"), "{stdout:?}");
    for path in [&net, &json, &dot, &report] {
        assert!(path.exists(), "{path:?} missing");
    }
    let net_text = std::fs::read_to_string(&net).unwrap();
    assert!(net_text.starts_with("(export (version D)\n"));
    assert!(net_text.contains("(comp (ref U1) (value \"MagicMcu\") (footprint \"QFN-16\"))"));
}

#[test]
fn check_failures_set_exit_code_one() {
    let out = bhdlc(&["check", &fixture("overvolt.bhdl"), "--top", "Overvolt"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("1 fail"), "{stdout:?}");
}

#[test]
fn parse_error_is_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("broken.bhdl");
    std::fs::write(&src, "block Broken {\n  connect( }\n").unwrap();
    let out = bhdlc(&["check", src.to_str().unwrap(), "--top", "Broken"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains(&format!("error[E_PARSE] at {}:2:12", src.display())),
        "{stderr:?}"
    );
}

#[test]
fn elaboration_errors_are_exit_two() {
    let out = bhdlc(&[
        "check",
        &fixture("follower_loop.bhdl"),
        "--top",
        "FollowerLoop",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error[E_GEN_STUCK]"), "{stderr:?}");
}

#[test]
fn missing_source_is_exit_three() {
    let out = bhdlc(&["check", "/nonexistent/x.bhdl", "--top", "X"]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error[E_IO]"), "{stderr:?}");
}

#[test]
fn bad_refinement_config_is_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("refine.json");
    std::fs::write(&cfg, "{\"path\": {\"x\": \"NoSuchBlock\"}}").unwrap();
    let out = bhdlc(&[
        "check",
        &fixture("blinky.bhdl"),
        "--top",
        "Blinky",
        "--refinements",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error[E_UNKNOWN_BLOCK]"), "{stderr:?}");
}

#[test]
fn usage_error_is_exit_three() {
    let out = bhdlc(&["compile"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn refinement_config_changes_the_netlist() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("refine.json");
    std::fs::write(&cfg, "{\"class\": {\"BuckConverter\": \"Tps54360Buck\"}}").unwrap();
    let json = dir.path().join("board.json");
    let out = bhdlc(&[
        "compile",
        &fixture("powerboard.bhdl"),
        "--top",
        "PowerBoard",
        "--refinements",
        cfg.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.contains("TPS54360"), "{text}");
    assert!(!text.contains("TPS561201"));
}

#[test]
fn no_outputs_on_compile_error() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("out.net");
    let out = bhdlc(&[
        "compile",
        &fixture("chainboard.bhdl"),
        "--top",
        "ChainBoard",
        "--netlist",
        net.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!net.exists());
    assert!(
        dir.path().read_dir().unwrap().next().is_none(),
        "no temp litter"
    );
}

#[test]
fn raised_iteration_budget_compiles_the_chain() {
    let out = bhdlc(&[
        "check",
        &fixture("chainboard.bhdl"),
        "--top",
        "ChainBoard",
        "--max-iterations",
        "200",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn libdoc_lists_definitions() {
    let out = bhdlc(&["libdoc"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(stdout.contains("BuckConverter abstract PowerConverter ports: pwr_in, pwr_out, gnd\n"));
    assert!(stdout.contains("IndicatorLed generator Block ports: io, gnd\n"));
    assert!(stdout.contains("Resistor leaf Block ports: p1, p2\n"));
    let again = bhdlc(&["libdoc"]);
    assert_eq!(out.stdout, again.stdout);
}
