use std::path::PathBuf;
use std::process::{Command, Output};

use pellroot::corpus::GOLDEN_JSON;
use pellroot::{EvalReport, SeriesSpec};

fn pellroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellroot")).args(args).env_remove("PELLROOT_MAX_DIGITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pellroot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_examples() {
    let o = pellroot(&["solve", "13"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "x=649 y=180\n");

    let o = pellroot(&["solve", "2", "--power", "7"]);
    assert_eq!(stdout(&o), "x=114243 y=80782\n");

    let o = pellroot(&["solve", "9"]);
    assert_eq!(code(&o), 2);
    assert!(!stderr(&o).is_empty());
}

#[test]
fn series_examples() {
    let o = pellroot(&["series", "2", "--power", "4", "--theorem", "a", "--json"]);
    assert_eq!(code(&o), 0);
    let spec = SeriesSpec::from_json(stdout(&o).trim()).unwrap();
    assert_eq!(spec.prefactor().to_string(), "816/577");
    assert_eq!(spec.argument().to_string(), "1/332929");

    let o = pellroot(&["series", "3", "--power", "1", "--theorem", "d"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("not applicable"));

    let o = pellroot(&["series", "5", "--power", "3", "--theorem", "all", "--json"]);
    assert_eq!(code(&o), 0);
    let specs: Vec<SeriesSpec> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(specs.len(), 6);
}

#[test]
fn series_latex_and_text_render_every_applicable_spec() {
    let text = stdout(&pellroot(&["series", "13", "--power", "1"]));
    let latex = stdout(&pellroot(&["series", "13", "--power", "1", "--latex"]));
    assert_eq!(text.lines().count(), latex.lines().count());
    assert!(latex.contains("\\frac"));
}

#[test]
fn eval_examples() {
    for args in [["eval", "2", "--power", "4", "--theorem", "a", "--digits", "50"], [
        "eval", "13", "--power", "2", "--theorem", "f", "--digits", "100",
    ]] {
        let o = pellroot(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(stdout(&o).contains("oracle_agrees: true"));
    }
    let o = pellroot(&["eval", "2", "--power", "4", "--theorem", "a", "--digits", "0"]);
    assert!(stdout(&o).starts_with("sqrt(2) = 1\n"));
}

#[test]
fn json_outputs_round_trip() {
    let o = pellroot(&["eval", "7", "--power", "2", "--theorem", "c", "--digits", "40", "--json"]);
    let text = stdout(&o);
    let report = EvalReport::from_json(text.trim()).unwrap();
    assert!(report.oracle_agrees);
    assert_eq!(report.to_json(), text.trim());

    let o = pellroot(&["series", "11", "--json"]);
    let text = stdout(&o);
    let specs: Vec<SeriesSpec> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&specs).unwrap(), text.trim());

    let o = pellroot(&["solve", "61", "--json"]);
    assert_eq!(stdout(&o).trim(), r#"{"p":"61","x":"1766319049","y":"226153980"}"#);
}

#[test]
fn reproduce_full_and_filtered() {
    let a = pellroot(&["reproduce"]);
    assert_eq!(code(&a), 0);
    assert!(stdout(&a).ends_with("72/72 expansions reproduced\n"));
    let b = pellroot(&["reproduce"]);
    assert_eq!(a.stdout, b.stdout);

    let o = pellroot(&["reproduce", "--only-p", "13"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("12/12 expansions reproduced\n"));
}

#[test]
fn perturbed_corpus_exits_5_naming_the_entry() {
    let mut corpus: serde_json::Value = serde_json::from_str(GOLDEN_JSON).unwrap();
    let entry = &mut corpus[16];
    let num: u64 = entry["argument"]["num"].as_str().unwrap().parse().unwrap();
    entry["argument"]["num"] = (num + 1).to_string().into();
    let path = scratch("perturbed.json");
    std::fs::write(&path, serde_json::to_string_pretty(&corpus).unwrap()).unwrap();

    let o = pellroot(&["reproduce", "--corpus", path.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).ends_with("71/72 expansions reproduced\n"));
    assert!(stdout(&o).contains("[FAIL] #17"));
    let err = stderr(&o);
    assert!(err.contains("#17"));
    assert_eq!(err.matches('#').count(), 1, "{err}");
}

#[test]
fn malformed_corpus_is_invalid_input() {
    let path = scratch("broken.json");
    std::fs::write(&path, "[{\"p\": 2}]").unwrap();
    assert_eq!(code(&pellroot(&["reproduce", "--corpus", path.to_str().unwrap()])), 2);
}

#[test]
fn verify_reports_holds_and_alarm() {
    let o = pellroot(&["verify", "binomial", "--a", "1/2", "--x", "-1/3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("holds"));
    // off the principal branch the identity is false
    assert_eq!(code(&pellroot(&["verify", "quadratic", "--x", "3"])), 4);
    assert_eq!(code(&pellroot(&["verify", "cubic", "--x", "1/0"])), 2);
}

#[test]
fn bench_table() {
    let o = pellroot(&["bench", "2", "--digits", "100", "--csv"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Vec<String>> =
        stdout(&o).lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect();
    assert_eq!(rows.len(), 24);
    let a: Vec<u64> = rows.iter().filter(|r| r[0] == "A").map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(a[3], 19);
    assert!(a.windows(2).all(|w| w[1] < w[0]));

    assert_eq!(code(&pellroot(&["bench", "4", "--digits", "10"])), 2);
}

#[test]
fn digit_ceiling_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_pellroot"))
        .args(["eval", "2", "-t", "a", "-d", "200"])
        .env("PELLROOT_MAX_DIGITS", "100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ceiling"));

    let o = Command::new(env!("CARGO_BIN_EXE_pellroot"))
        .args(["eval", "2", "-t", "a", "-d", "20"])
        .env("PELLROOT_MAX_DIGITS", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn prime_only_filter() {
    assert_eq!(code(&pellroot(&["--prime-only", "solve", "15"])), 2);
    assert_eq!(code(&pellroot(&["--prime-only", "solve", "13"])), 0);
}
