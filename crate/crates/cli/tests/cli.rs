use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: Value,
    stderr: String,
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tuplesim"));
    cmd.args(args)
        .env_remove("TUPLESIM_SEED")
        .env_remove("TUPLESIM_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: serde_json::from_slice(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn tuple(dir: &TempDir, name: &str, n: usize, matrices: Value) -> PathBuf {
    let p = matrices.as_array().unwrap().len();
    let body = json!({ "n": n, "p": p, "field": "q", "matrices": matrices });
    write(dir, name, &body.to_string())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn error_kind(r: &Run) -> String {
    let v: Value = serde_json::from_str(r.stderr.trim()).expect("error JSON on stderr");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn scalar_invariant_is_stable() {
    let dir = TempDir::new().unwrap();
    let two = tuple(&dir, "two.json", 1, json!([[[2]]]));
    let first = run(&["invariant", s(&two)], &[]);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout["canonical"], "1 1 q 1\n1 1 1\n1 -1/2\n");
    assert_eq!(first.stdout["complete"], true);
    let threaded = run(&["invariant", s(&two), "--threads", "3"], &[]);
    assert_eq!(threaded.stdout["digest"], first.stdout["digest"]);
}

#[test]
fn similar_to_itself() {
    let dir = TempDir::new().unwrap();
    let a = tuple(
        &dir,
        "a.json",
        2,
        json!([[[1, 2], [3, 4]], [[0, 1], [0, 0]]]),
    );
    let r = run(&["similar", s(&a), s(&a)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["verdict"], "SIMILAR");
    assert_eq!(r.stdout["method"], "bundle");
}

#[test]
fn conjugate_pair_is_similar_and_distinct_pair_is_not() {
    let dir = TempDir::new().unwrap();
    let a = tuple(&dir, "a.json", 2, json!([[[1, 1], [0, 2]]]));
    // eigenvalues 1 and 2, so diagonalizable
    let b = tuple(&dir, "b.json", 2, json!([[[1, 0], [0, 2]]]));
    let c = tuple(&dir, "c.json", 2, json!([[[1, 1], [0, 1]]]));
    assert_eq!(
        run(&["similar", s(&a), s(&b), "--certificate"], &[]).code,
        0
    );
    let r = run(&["similar", s(&a), s(&c)], &[]);
    assert_eq!(r.code, 2);
    assert_eq!(r.stdout["verdict"], "DISTINCT");
    assert!(r.stdout["level"].as_u64().is_some());
}

#[test]
fn screen_separates_nilpotent_from_zero() {
    let dir = TempDir::new().unwrap();
    let j = tuple(&dir, "j.json", 2, json!([[[0, 1], [0, 0]]]));
    let z = tuple(&dir, "z.json", 2, json!([[[0, 0], [0, 0]]]));
    let r = run(&["similar", s(&j), s(&z), "--screen"], &[]);
    assert_eq!(r.code, 2);
    assert_eq!(r.stdout["method"], "screen");
    assert_eq!(r.stdout["screen"]["trial"], 0);
    assert_eq!(
        r.stdout["screen"]["witness"]["matrices"],
        json!([[["0", "0"], ["0", "0"]]])
    );
}

#[test]
fn seed_flag_overrides_environment() {
    let dir = TempDir::new().unwrap();
    let two = tuple(&dir, "two.json", 1, json!([[[2]]]));
    let env = [("TUPLESIM_SEED", "41")];
    assert_eq!(run(&["invariant", s(&two)], &env).stdout["seed"], 41);
    assert_eq!(
        run(&["invariant", s(&two), "--seed", "7"], &env).stdout["seed"],
        7
    );
}

#[test]
fn malformed_input_exits_with_input_error() {
    let dir = TempDir::new().unwrap();
    let junk = write(&dir, "junk.json", "{ not json");
    let r = run(&["invariant", s(&junk)], &[]);
    assert_eq!(r.code, 3);
    assert_eq!(error_kind(&r), "Parse");

    let ragged = tuple(&dir, "ragged.json", 2, json!([[[1, 2], [3]]]));
    assert_eq!(run(&["invariant", s(&ragged)], &[]).code, 3);

    let a = tuple(&dir, "a.json", 1, json!([[[1]]]));
    let b = tuple(&dir, "b.json", 2, json!([[[1, 0], [0, 1]]]));
    assert_eq!(run(&["similar", s(&a), s(&b)], &[]).code, 3);

    let r = run(&["invariant", "/nonexistent/t.json"], &[]);
    assert_eq!((r.code, error_kind(&r).as_str()), (3, "Io"));
    assert_eq!(run(&["invariant", s(&a), "--field", "fp:9"], &[]).code, 3);
    assert_eq!(run(&["frobnicate"], &[]).code, 3);
}

#[test]
fn large_instances_need_a_truncation() {
    let dir = TempDir::new().unwrap();
    let a = tuple(
        &dir,
        "a.json",
        3,
        json!([[[1, 2, 0], [0, 1, 0], [4, 0, 3]]]),
    );
    let b = tuple(
        &dir,
        "b.json",
        3,
        json!([[[0, 0, 0], [0, 0, 0], [0, 0, 0]]]),
    );
    assert_eq!(run(&["invariant", s(&a)], &[]).code, 4);
    let partial = run(&["invariant", s(&a), "--r-max", "1"], &[]);
    assert_eq!(partial.code, 0);
    assert_eq!(partial.stdout["complete"], false);

    let undecided = run(&["similar", s(&a), s(&a), "--r-max", "1"], &[]);
    assert_eq!(undecided.code, 4);
    assert_eq!(undecided.stdout["verdict"], "UNDECIDED");
    let certified = run(&["similar", s(&a), s(&a), "--certificate"], &[]);
    assert_eq!(certified.code, 0);
    assert_eq!(certified.stdout["method"], "certificate");
    assert_eq!(run(&["similar", s(&a), s(&b), "--r-max", "1"], &[]).code, 2);
}

#[test]
fn homdim_of_identity() {
    let dir = TempDir::new().unwrap();
    let i = tuple(&dir, "i.json", 2, json!([[[1, 0], [0, 1]]]));
    let r = run(&["homdim", s(&i), s(&i)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["hom_dim"], 4);
}

#[test]
fn rnf_and_rref_on_text_matrices() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "3 3\n2 0 0\n0 2 0\n0 0 3\n");
    let r = run(&["rnf", s(&m)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["partition"], json!([2, 1]));
    assert!(r.stdout["certificate"].is_object());

    let m = write(&dir, "r.txt", "2 3\n1 2 3\n2 4 7\n");
    let r = run(&["rref", s(&m)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["rank"], 2);
    assert_eq!(r.stdout["rref"], json!([["1", "2", "0"], ["0", "0", "1"]]));
}

#[test]
fn reductions_produce_pairs() {
    let dir = TempDir::new().unwrap();
    let x = json!([[1]]);
    let six = tuple(&dir, "six.json", 1, json!([x, x, x, x, x, x]));
    let r = run(&["reduce", "sixpair", s(&six)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["p"], 2);
    assert_eq!(run(&["reduce", "general", s(&six)], &[]).stdout, r.stdout);

    let pair = tuple(&dir, "pair.json", 1, json!([[[1]], [[2]]]));
    let gp = run(&["reduce", "gp", s(&pair)], &[]);
    assert_eq!(gp.code, 0);
    assert_eq!(gp.stdout["n"], 4);
    assert_eq!(run(&["reduce", "gp", s(&six)], &[]).code, 3);

    let rect = write(
        &dir,
        "rect.json",
        &json!({ "m": 1, "n": 2, "p": 1, "field": "q", "matrices": [[[1, 2]]] }).to_string(),
    );
    let r = run(&["reduce", "rect", s(&rect)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["n"], 3);
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let two = tuple(&dir, "two.json", 1, json!([[[2]]]));
    let out = dir.path().join("out.json");
    assert_eq!(run(&["invariant", s(&two), "-o", s(&out)], &[]).code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["r_max"], 1);
}

#[test]
fn quick_selftest_passes() {
    let r = run(&["selftest", "--quick"], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["passed"], true);
    assert_eq!(r.stdout["suites"].as_array().unwrap().len(), 5);
}
