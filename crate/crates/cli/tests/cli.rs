use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ps-purify"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ps-purify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn fig1a_first_row_is_the_reference_state() {
    let o = run(&["reproduce", "fig1a"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# ps-purify"));
    assert_eq!(lines.next().unwrap(), "phi,s_db,ratio,f_alpha");
    let row = lines.find(|l| l.starts_with("0,10,")).expect("phi = 0 row at 10 dB");
    let ratio: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((ratio - 1.1967).abs() < 5e-4, "{ratio}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for fig in ["fig1b", "fig2"] {
        let a = run(&["reproduce", fig]);
        let b = run(&["reproduce", fig]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{fig}");
    }
}

#[test]
fn header_records_config_hash_and_rule() {
    let cfg = temp_file("rule.toml", "two_mode_db_rule = \"power\"\n");
    let header = stdout(&run(&["--config", cfg.to_str().unwrap(), "reproduce", "fig1a"])).lines().next().unwrap().to_owned();
    assert!(header.contains("config_sha256="));
    assert!(header.contains("two_mode_db_rule=power"));
    let default = stdout(&run(&["reproduce", "fig1a"])).lines().next().unwrap().to_owned();
    assert_ne!(header, default);
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    let bad = temp_file("bad.toml", "colour = 3\n");
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "verify"]).status.code(), Some(2));
    let bad_cmd = temp_file("badcmd.toml", "command = \"reproduce fig9\"\n");
    assert_eq!(run(&["--config", bad_cmd.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn command_can_come_from_config_and_output_from_flag() {
    let cfg = temp_file("cmd.toml", "command = \"fuzz --count 50\"\n");
    let out = cfg.with_file_name("fuzz.txt");
    let o = run(&["--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("cases=50"));
    assert!(text.trim_end().ends_with("no violations"));
}

#[test]
fn small_fuzz_run_passes() {
    let o = run(&["fuzz", "--count", "500", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_passes_on_a_reduced_corpus() {
    let cfg = temp_file("verify.toml", "verify_count = 50\ngrid_points_one_mode = 201\ngrid_points_two_mode = 61\n");
    let o = run(&["--config", cfg.to_str().unwrap(), "verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("ok")).count() == 8);
}

#[test]
fn fig3_reports_the_chain_under_the_amplitude_rule() {
    let o = run(&["reproduce", "fig3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"]["schema"], 1);
    assert_eq!(v["result"]["topology"], "(1,2),(2,3),(1,3)");
    assert_eq!(v["result"]["matches_reference_pattern"], true);
    assert!(v["result"]["oracle_deltas"]["max_analytic_vs_fock"].as_f64().unwrap() < 1e-3);
}
