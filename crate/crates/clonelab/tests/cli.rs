use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonelab")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workdir(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in files {
        std::fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

fn files() -> tempfile::TempDir {
    workdir(&[
        ("xor.rel", "rel k=1 sorts=[1,1] {01,10}\n"),
        ("c1.rel", "disj k=1 sorts=[1,1] : x1=0 | x2=1\n"),
        ("mixed.rel", "disj k=2 sorts=[1,2] : x1=0 | x2=1\n"),
        ("x0.rel", "rel k=1 sorts=[1] {0}\n"),
        ("one3.rel", "rel k=1 sorts=[1,1,1] {001,010,100}\n"),
        ("bad.rel", "rel k=1 sorts=[1] {0,1,2}\n"),
        ("two.rel", "rel k=1 sorts=[1] {0}\nrel k=1 sorts=[1] {1}\n"),
    ])
}

fn assert_single_error_line(o: &Output) {
    let e = stderr(o);
    assert!(e.starts_with("error: "), "{e}");
    assert_eq!(e.lines().count(), 1, "{e}");
}

#[test]
fn key_prints_the_canonical_form() {
    let d = files();
    let o = run(&["key", "xor.rel"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "disj k=1 sorts=[1,1] : x1+x2=1\n");
    let o = run(&["key", "one3.rel"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert_single_error_line(&o);
}

#[test]
fn classify_names_the_descriptor() {
    let d = files();
    let o = run(&["classify", "mixed.rel"], d.path());
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "c7(1,0,0,1)\n"));
    let o = run(&["classify", "one3.rel"], d.path());
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "none\n"));
}

#[test]
fn member_prints_a_verdict() {
    let d = files();
    let o = run(&["member", "--target", "x0.rel", "--lang", "c1.rel", "--cap", "6", "--pol-cap", "4"], d.path());
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "IN\n"));
    let o = run(&["member", "--target", "x0.rel", "--lang", "xor.rel"], d.path());
    assert_eq!(stdout(&o), "OUT\n");
}

#[test]
fn closure_modes_differ_on_quantification() {
    let d = files();
    let qpp = stdout(&run(&["closure", "--mode", "qpp", "--cap", "2", "c1.rel"], d.path()));
    let pp = stdout(&run(&["closure", "--mode", "pp", "--cap", "2", "c1.rel"], d.path()));
    assert!(qpp.contains("rel k=1 sorts=[1] {0}\n"));
    assert!(!pp.contains("rel k=1 sorts=[1] {0}\n"));
    assert!(pp.contains("rel k=1 sorts=[1,1] {00,10,11}\n"));
}

#[test]
fn galois_subcommands() {
    let d = files();
    let o = run(&["galois", "pol", "--cap", "1", "xor.rel"], d.path());
    assert_eq!(stdout(&o), "op k=1 arity=1 : 01\nop k=1 arity=1 : 10\n");
    let o = run(&["galois", "inv", "--cap", "2", "--arity", "1", "c1.rel"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rel k=1 sorts=[1] {0}\n"));
    let o = run(&["galois", "pol", "--cap", "5", "c1.rel"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert_single_error_line(&o);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let d = files();
    for args in [
        vec!["key", "bad.rel"],
        vec!["key", "missing.rel"],
        vec!["key", "two.rel"],
        vec!["bogus"],
        vec!["closure", "--mode", "nope", "c1.rel"],
        vec!["verify", "--suite", "lemmas", "--k", "0"],
        vec!["member", "--target", "x0.rel", "--lang", "mixed.rel"],
    ] {
        let o = run(&args, d.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_single_error_line(&o);
    }
    let o = run(&["key", "bad.rel"], d.path());
    assert!(stderr(&o).contains("bad.rel:1:24:"), "{}", stderr(&o));
}

#[test]
fn help_and_version_succeed() {
    let d = files();
    assert_eq!(run(&["--help"], d.path()).status.code(), Some(0));
    assert_eq!(run(&["--version"], d.path()).status.code(), Some(0));
}

#[test]
fn lattice_at_one_matches_golden_dot() {
    let d = files();
    let o = run(&["lattice", "fig1", "--trunc", "1"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/fig1_trunc1.dot"));
}

#[test]
fn lattice_files_and_thread_independence() {
    let d = files();
    let o = run(&["--threads", "1", "lattice", "post", "--trunc", "1", "--dot", "a.dot", "--json", "a.json"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["--threads", "3", "lattice", "post", "--trunc", "1", "--dot", "b.dot", "--json", "b.json"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let read = |f: &str| std::fs::read_to_string(d.path().join(f)).unwrap();
    assert_eq!(read("a.dot"), read("b.dot"));
    assert_eq!(read("a.json"), read("b.json"));
    let json: serde_json::Value = serde_json::from_str(&read("a.json")).unwrap();
    assert_eq!(json["k"], 1);
    assert_eq!(json["trunc"], 1);
    let nodes = json["nodes"].as_array().unwrap();
    assert_eq!(nodes[0]["id"], 0);
    assert!(nodes.iter().all(|n| n["label"].is_string() && n["cr16"].is_array() && n["downset"].is_array()));
    assert!(json["edges"].as_array().unwrap().iter().all(|e| e.as_array().unwrap().len() == 2));
    assert!(read("a.dot").starts_with("digraph lattice {\n  rankdir=BT;\n"));
}

#[test]
fn unwritable_output_is_an_input_error() {
    let d = files();
    let o = run(&["lattice", "fig1", "--trunc", "1", "--dot", "no/such/dir/x.dot"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert_single_error_line(&o);
}

#[test]
fn verify_suite_passes() {
    let d = files();
    let o = run(&["verify", "--suite", "galois", "--k", "2"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS ")).count(), 4);
}
