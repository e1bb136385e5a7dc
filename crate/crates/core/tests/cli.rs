use std::path::PathBuf;

use clap::Parser;
use lambdad::cli::{run, Cli, Command, RunConfig, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

fn exec(config: &RunConfig) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(config, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_script(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lambdad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn config(command: Command, paths: Vec<PathBuf>) -> RunConfig {
    RunConfig { paths, ..RunConfig::new(command) }
}

#[test]
fn check_full_corpus() {
    let (code, out, _) = exec(&config(Command::Check, vec![]));
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("conv-prod"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn type_errors_show_normal_forms() {
    let path = temp_script("bad.ld", "flag S : *s, R : br(S), x, y : S, u : R x y {\n  def oops : R y x := u ;\n}\n");
    let (code, out, _) = exec(&config(Command::Check, vec![path.clone()]));
    assert_eq!(code, EXIT_FAIL);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1, "{out}");
    assert!(out.contains("R y x") && out.contains("R x y"), "{out}");

    let mut traced = config(Command::Check, vec![path]);
    traced.trace = true;
    assert_eq!(exec(&traced).0, EXIT_FAIL);
}

#[test]
fn parse_errors_exit_with_input_status() {
    let path = temp_script("open.ld", "flag A : * {\n");
    let (code, _, err) = exec(&config(Command::Check, vec![path]));
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("1:"), "{err}");
}

#[test]
fn oracle_registry_table() {
    let (code, out, _) = exec(&config(Command::Oracle, vec![]));
    assert_eq!(code, EXIT_PASS);
    let line = out.lines().find(|l| l.contains("5.1.3")).unwrap();
    assert!(line.contains("n=3:512"), "{line}");

    let (code, _, _) = exec(&config(Command::Oracle, vec![PathBuf::from("commute")]));
    assert_eq!(code, EXIT_FAIL);
    let (code, _, err) = exec(&config(Command::Oracle, vec![PathBuf::from("9.9")]));
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("9.9"));
}

#[test]
fn oracle_json_records() {
    let mut c = config(Command::Oracle, vec![PathBuf::from("6.4")]);
    c.json = true;
    let (code, out, _) = exec(&c);
    assert_eq!(code, EXIT_PASS);
    let json_line = out.lines().find(|l| l.starts_with('[')).unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert_eq!(v[0]["id"], "6.4");
    assert_eq!(v[0]["passed"], true);
}

#[test]
fn export_writes_latex() {
    let (code, out, _) = exec(&config(Command::Export, vec![]));
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("\\begin{flagderiv}"));
    assert!(out.contains("% rel_thms.ld"));

    let path = temp_script("draft.ld", "flag A : *p, u : A {\n  def wrong : A => A := u ;\n}\n");
    let mut c = config(Command::Export, vec![path.clone()]);
    c.standalone = true;
    let (code, out, _) = exec(&c);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("\\documentclass"));
    let mut c = config(Command::Export, vec![path]);
    c.checked_only = true;
    let (code, _, err) = exec(&c);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("wrong"));
}

#[test]
fn flags_parse_into_the_run_config() {
    let cli = Cli::try_parse_from(["lambdad", "oracle", "5.2", "--maxN", "2", "--seed", "9", "--json"]).unwrap();
    let c = cli.into_config();
    assert_eq!((c.command, c.max_n, c.seed, c.json), (Command::Oracle, 2, 9, true));
    assert_eq!(c.paths, [PathBuf::from("5.2")]);
    let cli = Cli::try_parse_from(["lambdad", "export", "--checkedOnly", "--standalone"]).unwrap();
    let c = cli.into_config();
    assert!(c.checked_only && c.standalone);
    assert!(Cli::try_parse_from(["lambdad", "check", "--maxN", "x"]).is_err());
}
