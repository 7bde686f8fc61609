use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use twistalg::fixtures::{fixture, FIXTURE_NAMES};
use twistalg::foundations::{FieldSpec, Window};
use twistalg_cli::format::{parse, print, Document};

fn corpus(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/v1").join(file)
}

fn twistalg(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twistalg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn blocks(text: &str, heads: &[&str]) -> String {
    let mut out: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    let mut inside = false;
    for line in text.lines() {
        if heads.contains(&line) {
            inside = true;
            out.push('\n');
        }
        if inside {
            out.push_str(line);
            out.push('\n');
        }
        if line == "end" {
            inside = false;
        }
    }
    out
}

#[test]
fn corpus_matches_fixture_output() {
    for name in FIXTURE_NAMES {
        let o = twistalg(&["fixture", name], None);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        let golden = fs::read_to_string(corpus(&format!("{name}.fix"))).unwrap();
        assert_eq!(stdout(&o), golden, "{name}");
    }
}

#[test]
fn corpus_files_are_canonical() {
    for name in FIXTURE_NAMES {
        let text = fs::read_to_string(corpus(&format!("{name}.fix"))).unwrap();
        let doc = parse(&text, None).unwrap();
        assert_eq!(print(&doc), text, "{name}");
        assert_eq!(print(&parse(&print(&doc), None).unwrap()), text, "{name}");
    }
}

#[test]
fn corpus_files_validate() {
    for name in FIXTURE_NAMES {
        let o = twistalg(&["validate", path(&corpus(&format!("{name}.fix")))], None);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains(": holds"));
    }
}

#[test]
fn split_files_twist_then_validate() {
    let t = twistalg(&["twist", path(&corpus("qplane.alg")), path(&corpus("qplane.twist"))], None);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    assert!(stdout(&t).contains("algebra A.tau\n"));
    let v = twistalg(&["validate", "-"], Some(&stdout(&t)));
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn delta_then_gamma_recovers_the_principal_map() {
    let file = corpus("q-plane.fix");
    let d = twistalg(&["delta", "--name", "T", path(&file)], None);
    assert_eq!(d.status.code(), Some(0), "{}", stderr(&d));
    assert!(stdout(&d).contains("twist T\n"));
    let g = twistalg(&["gamma", "-"], Some(&stdout(&d)));
    assert_eq!(g.status.code(), Some(0), "{}", stderr(&g));
    let golden = fs::read_to_string(&file).unwrap();
    assert_eq!(stdout(&g), blocks(&golden, &["algebra A", "galgebra Abar", "principal T"]));
}

#[test]
fn obstruction_exits_one_with_witness() {
    let o = twistalg(&["obstruct", path(&corpus("not-principal.fix"))], None);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("obstruct H: fails\n"), "{text}");
    assert!(text.contains("entry: g=1 ((0,2),(1,3)) dims 1 vs 0\n"), "{text}");
    let o = twistalg(&["obstruct", "--name", "H", path(&corpus("eg2.fix"))], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn machine_format_is_key_value() {
    let o = twistalg(&["--format", "machine", "obstruct", path(&corpus("not-principal.fix"))], None);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("command obstruct\nobject H\nstatus fails\n"), "{text}");
    assert!(text.lines().any(|l| l == "entry g=1 ((0,2),(1,3)) dims 1 vs 0"));
    for line in text.lines() {
        let (key, _) = line.split_once(' ').unwrap();
        assert!(["command", "object", "status", "checked", "skipped", "witness", "entry", "message"].contains(&key), "{line}");
    }
}

#[test]
fn isomorphisms_are_certified() {
    let o = twistalg(&["check-iso", "--name", "phi", path(&corpus("eg2.fix"))], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let f = twistalg(&["from-iso", "--name", "alpha", path(&corpus("zhang-matrix-pair.fix"))], None);
    assert_eq!(f.status.code(), Some(0), "{}", stderr(&f));
    let c = twistalg(&["check-iso", "-"], Some(&stdout(&f)));
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
}

#[test]
fn endo_writes_a_g_algebra() {
    let o = twistalg(&["endo", path(&corpus("eg2.fix")), "--name", "P"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("galgebra P.end\n"));
    let v = twistalg(&["validate", "-"], Some(&stdout(&o)));
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fix");
    fs::write(&bad, "twistalg 1\nfield q\nalgebra A\n  window 0..x\nend\n").unwrap();
    let o = twistalg(&["validate", path(&bad)], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4, column 10"), "{}", stderr(&o));

    let o = twistalg(&["validate", path(&dir.path().join("missing.fix"))], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));

    let o = twistalg(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = twistalg(&["--help"], None);
    assert_eq!(o.status.code(), Some(0));
    let o = twistalg(&["fixture", "no-such-fixture"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.fix");
    let o = twistalg(&["--out", path(&out), "fixture", "q-plane"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out).unwrap(), fs::read_to_string(corpus("q-plane.fix")).unwrap());
}

#[test]
fn text_and_machine_agree_on_status() {
    let file = corpus("q-plane.fix");
    let text = twistalg(&["validate", path(&file)], None);
    let machine = twistalg(&["--format", "machine", "validate", path(&file)], None);
    assert_eq!(text.status.code(), machine.status.code());
    assert!(stdout(&machine).lines().any(|l| l == "status holds"));
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::Prime(5)), Just(FieldSpec::Prime(7))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn print_parse_print_is_stable(which in 0..FIXTURE_NAMES.len(), f in field(), lo in -2i64..=0, span in 1i64..=3) {
        let name = FIXTURE_NAMES[which];
        let window = if name == "q-plane" { Window::degrees(0, span).unwrap() } else { Window::interval(lo, lo + span).unwrap() };
        let bundle = fixture(name, f.clone(), window).unwrap();
        let text = print(&Document::from_bundle(&bundle));
        let doc = parse(&text, None).unwrap();
        prop_assert_eq!(&print(&doc), &text);
        let again = parse(&text, Some(f)).unwrap();
        prop_assert_eq!(print(&again), text);
    }
}
