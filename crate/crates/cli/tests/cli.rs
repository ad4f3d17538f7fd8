use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mvlam_core::circuit::{build_const_unary, build_cyc};
use mvlam_core::syntax::print_term;
use serde_json::Value;
use tempfile::TempDir;

fn mvlam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvlam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write_table(dir: &TempDir, name: &str, json: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

fn build(dir: &TempDir, table: &str, style: &str, opt: &str) -> (String, String, Output) {
    let (t, c) = (path(dir, "t.lam"), path(dir, "c.json"));
    let o = mvlam(&[
        "build",
        "--table",
        table,
        "--style",
        style,
        "--opt",
        opt,
        "--term-out",
        &t,
        "--cert-out",
        &c,
    ]);
    (t, c, o)
}

#[test]
fn oplus_pipeline() {
    let dir = TempDir::new().unwrap();
    let table = data("belnap/oplus.json");
    let (t, c, o) = build(&dir, &table, "binary", "none");
    assert_eq!(o.status.code(), Some(0));
    let stats = &lines(&o)[0];
    assert_eq!(stats["type"], "T4 -> T4 -> T4");
    assert_eq!(stats["const_count"], 16);

    let o = mvlam(&["check", "--term", &t, "--cert", &c, "--type", "T4->T4->T4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["result"], "PASS");

    let a = mvlam(&["verify", "--term", &t, "--table", &table, "--jobs", "1"]);
    let b = mvlam(&["verify", "--term", &t, "--table", &table, "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(lines(&a).last().unwrap()["agreement"], 16);
}

#[test]
fn corrupted_table_fails_verification() {
    let dir = TempDir::new().unwrap();
    let good = data("belnap/oplus.json");
    let (t, _, _) = build(&dir, &good, "binary", "none");
    let bad = write_table(&dir, "bad.json", &data_text("belnap/otimes.json"));
    let o = mvlam(&["verify", "--term", &t, "--table", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let out = lines(&o);
    let listed = out.iter().filter(|l| l.get("mismatch").is_some()).count();
    assert_eq!(listed, 10);
    assert_eq!(out.last().unwrap()["agreement"], 4);
}

fn data_text(rel: &str) -> String {
    std::fs::read_to_string(data(rel)).unwrap()
}

#[test]
fn addmod_opt_emits_cyclic_rows() {
    let dir = TempDir::new().unwrap();
    let table = data("tables/addmod5.json");
    let (t, _, o) = build(&dir, &table, "binary", "addmod");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["const_count"], 5);
    let v = mvlam(&["verify", "--term", &t, "--table", &table]);
    assert_eq!(v.status.code(), Some(0));

    let latin = data("tables/latin5.json");
    let (_, _, o) = build(&dir, &latin, "binary", "addmod");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_style_round_trips() {
    let dir = TempDir::new().unwrap();
    let t2 = write_table(
        &dir,
        "xor.json",
        r#"{"inputs":[2,2],"output":2,"entries":[0,1,1,0]}"#,
    );
    for style in ["circuit-dnf", "inductive", "binary", "hybrid", "hetero"] {
        let (t, c, o) = build(&dir, &t2, style, "none");
        assert_eq!(o.status.code(), Some(0), "{style}");
        let ck = mvlam(&["check", "--term", &t, "--cert", &c, "--type", "T2->T2->T2"]);
        assert_eq!(ck.status.code(), Some(0), "{style}");
        let v = mvlam(&["verify", "--term", &t, "--table", &t2]);
        assert_eq!(v.status.code(), Some(0), "{style}");
    }
    let id = write_table(
        &dir,
        "id.json",
        r#"{"inputs":[3],"output":3,"entries":[0,1,2]}"#,
    );
    for opt in ["none", "runs"] {
        let (t, c, o) = build(&dir, &id, "unary", opt);
        assert_eq!(o.status.code(), Some(0));
        let ck = mvlam(&["check", "--term", &t, "--cert", &c, "--type", "T3->T3"]);
        assert_eq!(ck.status.code(), Some(0));
    }
    let mixed = write_table(
        &dir,
        "mixed.json",
        r#"{"inputs":[2,3],"output":4,"entries":[0,1,2,3,3,1]}"#,
    );
    let (t, c, o) = build(&dir, &mixed, "circuit-dnf", "none");
    assert_eq!(o.status.code(), Some(0));
    let ty = lines(&o)[0]["type"].as_str().unwrap().to_string();
    assert_eq!(
        mvlam(&["check", "--term", &t, "--cert", &c, "--type", &ty])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mvlam(&["verify", "--term", &t, "--table", &mixed])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn monomorphism_verdicts() {
    let dir = TempDir::new().unwrap();
    let k = build_const_unary(1, 3).unwrap();
    let (t, c) = (path(&dir, "k.lam"), path(&dir, "k.json"));
    std::fs::write(&t, print_term(&k.term)).unwrap();
    std::fs::write(&c, k.certificate.to_json()).unwrap();
    let o = mvlam(&[
        "check", "--term", &t, "--cert", &c, "--type", "T3->T3", "--mono",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["monomorphic"], true);

    let y = build_cyc(2, 4).unwrap();
    std::fs::write(&t, print_term(&y.term)).unwrap();
    std::fs::write(&c, y.certificate.to_json()).unwrap();
    let o = mvlam(&[
        "check", "--term", &t, "--cert", &c, "--type", "T4->T4", "--mono",
    ]);
    assert_eq!(lines(&o)[0]["monomorphic"], true);

    let table = write_table(
        &dir,
        "n.json",
        r#"{"inputs":[2],"output":2,"entries":[1,0]}"#,
    );
    let (t, c, _) = build(&dir, &table, "unary", "none");
    let o = mvlam(&[
        "check", "--term", &t, "--cert", &c, "--type", "T2->T2", "--mono",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["monomorphic"], false);
}

#[test]
fn check_failures_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let t = path(&dir, "dup.lam");
    let c = path(&dir, "empty.json");
    std::fs::write(&t, "fn x=> x x").unwrap();
    std::fs::write(&c, "[]").unwrap();
    let o = mvlam(&["check", "--term", &t, "--cert", &c, "--type", "T2->T2"]);
    assert_eq!(o.status.code(), Some(1));
    let l = &lines(&o)[0];
    assert_eq!(l["result"], "FAIL");
    assert_eq!(l["kind"], "LinearityError");

    std::fs::write(&t, "fn x=> (").unwrap();
    let o = mvlam(&["check", "--term", &t, "--cert", &c, "--type", "T2->T2"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write_table(
        &dir,
        "bad.json",
        r#"{"inputs":[2],"output":2,"entries":[0]}"#,
    );
    let (_, _, o) = build(&dir, &bad, "unary", "none");
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(mvlam(&["bench", "nope"]).status.code(), Some(2));
    assert_eq!(mvlam(&["build", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        mvlam(&["inhabitants", "--radix", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mvlam(&["inhabitants", "--radix", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn inhabitants_listing() {
    for (r, total, canonical) in [(1, 1, 1), (2, 2, 2), (3, 6, 3), (4, 24, 4)] {
        let o = mvlam(&["inhabitants", "--radix", &r.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let l = lines(&o);
        assert_eq!(l.len(), total);
        assert_eq!(
            l.iter().filter(|x| x["canonical"] == true).count(),
            canonical
        );
    }
}

#[test]
fn bench_reports() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "bench.json");
    let o = mvlam(&["bench", "const-vs-i", "--radix", "3", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep["identity_beta1"], 1);
    assert_eq!(rep["rows"][0]["claim"], 7);
    assert_eq!(rep["fit_slope"], 2.0);
    assert_eq!(rep, lines(&o)[0]);

    let o = mvlam(&["bench", "matrix-opt"]);
    let l = &lines(&o)[0];
    assert_eq!(
        (
            l["original_consts"].as_u64(),
            l["optimized_consts"].as_u64()
        ),
        (Some(25), Some(13))
    );
    assert_eq!(l["steps_never_increase"], true);

    let o = mvlam(&["bench", "addmod", "--radix", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["add_mod_consts"], 4);
}

#[test]
fn output_is_byte_stable() {
    let a = mvlam(&["bench", "matrix-opt", "--jobs", "1"]);
    let b = mvlam(&["bench", "matrix-opt", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn belnap_merge_survey() {
    let o = mvlam(&["belnap", "merges"]);
    assert_eq!(o.status.code(), Some(0));
    let outcomes: Vec<String> = lines(&o)
        .iter()
        .map(|l| l["analysis"]["outcome"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        outcomes,
        [
            "unsupported",
            "merged",
            "merged",
            "unsupported",
            "not_mergeable"
        ]
    );
}

#[test]
fn belnap_majority_merged() {
    let dir = TempDir::new().unwrap();
    let (t, c) = (path(&dir, "m.lam"), path(&dir, "m.json"));
    let o = mvlam(&[
        "belnap",
        "majority",
        "--merge",
        "--dontcare",
        "--row-opt",
        "--term-out",
        &t,
        "--cert-out",
        &c,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rep = &lines(&o)[0];
    assert_eq!(rep["agreement"], 256);
    assert_eq!(rep["subfunction_count"], 10);
    let v = mvlam(&[
        "verify",
        "--term",
        &t,
        "--table",
        &data("belnap/majority.json"),
    ]);
    assert_eq!(v.status.code(), Some(0));
    let ck = mvlam(&[
        "check",
        "--term",
        &t,
        "--cert",
        &c,
        "--type",
        "T4->T4->T4->T4->T4",
    ]);
    assert_eq!(ck.status.code(), Some(0));
}
