use serde_json::Value;
use sun_einstein::{build_scheme2_basis, structure_constants, Scheme};

use crate::cache::{file_name, read_constants, write_constants};
use crate::output::to_canonical_json;
use crate::{execute, Execution};

fn run(args: &str) -> Execution {
    execute(std::iter::once("sun-einstein").chain(args.split_whitespace()))
}

fn json(args: &str) -> (Value, u8) {
    let out = run(&format!("{args} --format json"));
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (v, out.code)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn basis_reports_class_sizes_and_gram() {
    let (doc, code) = json("basis --scheme 1 --n 3");
    assert_eq!(code, 0);
    let r = &doc["results"][0];
    assert_eq!(r["class_sizes"], serde_json::json!([3, 3, 2]));
    let gram: Vec<f64> = r["gram_diagonal"].as_array().unwrap().iter().map(f).collect();
    assert_eq!(gram.len(), 8);
    assert!(gram.iter().all(|g| (g - 2.0).abs() < 1e-12), "{gram:?}");
    assert_eq!(r["passed"], Value::Bool(true));

    let (doc, code) = json("basis --scheme 2 --n 4 --p 2");
    assert_eq!(code, 0);
    assert_eq!(doc["results"][0]["class_sizes"], serde_json::json!([3, 3, 8, 1]));
    let table = run("basis --scheme 2 --n 4 --p 2").stdout;
    assert!(table.contains("3/3/8/1"));
    assert!(table.contains("16 x1"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        "basis --scheme 2 --n 4 --p 5",
        "solve --scheme 1 --n 3 --p 2",
        "solve --scheme 2 --n 4",
        "check --scheme 1 --n 4",
        "check --scheme 1 --n 4 --x 1,1",
        "check --scheme 1 --n 4 --x 1,-1,1",
        "solve --scheme 3 --n 4",
        "catalog --n 4 --scheme 1",
        "catalog --n 1",
        "solve --scheme 2 --n 4 --p 4",
        "solve --scheme 1 --n 4 --x 1,1,1",
        "solve --scheme 1 --n 4 --starts 0",
        "check --scheme 1 --n 4 --x 1,1,1 --tol -1",
        "solve --scheme 1",
        "frobnicate --n 3",
    ] {
        let out = run(args);
        assert_eq!(out.code, 2, "{args}: {}", out.stderr);
        assert!(out.stdout.is_empty(), "{args}");
    }
}

#[test]
fn check_verdicts() {
    let (doc, code) = json("check --scheme 1 --n 4 --x 7,1,7");
    assert_eq!(code, 0);
    let r = &doc["results"][0];
    assert_eq!(r["verdict"], "EINSTEIN");
    assert!(f(&r["residual"]) < 1e-8);
    assert!((f(&r["lambda"]) - 0.1326531).abs() < 1e-7);

    let (doc, code) = json("check --scheme 1 --n 4 --x 1,1,1");
    assert_eq!(code, 0);
    assert!((f(&doc["results"][0]["lambda"]) - 0.5).abs() < 1e-12);
    assert!((f(&doc["results"][0]["I1"]) - 15.0).abs() < 1e-9);

    let out = run("check --scheme 1 --n 4 --x 2,1,1");
    assert_eq!(out.code, 1);
    let text = out.stdout;
    assert!(text.contains("NOT-EINSTEIN"));
    assert!(text.contains("residual"));
}

#[test]
fn solve_examples() {
    let (doc, code) = json("solve --scheme 1 --n 5");
    assert_eq!(code, 0);
    let i1: Vec<f64> = doc["results"].as_array().unwrap().iter().map(|r| f(&r["I1"])).collect();
    assert_eq!(i1.len(), 2);
    assert!((i1[0] - 24.0).abs() < 1e-8);
    assert!((i1[1] - 5092.0 / 155.0).abs() < 1e-8);

    let (doc, _) = json("solve --scheme 2 --n 5 --p 3 --starts 400 --seed 7");
    assert_eq!(doc["results"].as_array().unwrap().len(), 3);
    let (doc, _) = json("solve --scheme 2 --n 5 --p 4");
    assert_eq!(doc["results"].as_array().unwrap().len(), 1);
}

#[test]
fn record_schema() {
    let (doc, _) = json("solve --scheme 1 --n 3 --starts 50");
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "diagnostics", "params", "results", "schema_version"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["params"]["scheme"], 1);
    let rec = doc["results"][0].as_object().unwrap();
    let keys: Vec<&str> = rec.keys().map(String::as_str).collect();
    assert_eq!(keys, ["I1", "lambda", "n", "p", "provenance", "residual", "scheme", "x"]);
    assert_eq!(rec["p"], Value::Null);
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    for args in [
        "solve --scheme 2 --n 5 --p 3 --starts 100",
        "check --scheme 2 --n 5 --p 2 --x 0.3,1.7,1,0.05",
        "catalog --n 4 --starts 100",
        "basis --scheme 1 --n 4",
    ] {
        let text = run(&format!("{args} --format json")).stdout;
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_canonical_json(&parsed).unwrap(), text, "{args}");
    }
}

#[test]
fn same_seed_same_output() {
    let a = run("solve --scheme 2 --n 6 --p 2 --starts 120 --seed 3 --format json").stdout;
    let b = run("solve --scheme 2 --n 6 --p 2 --starts 120 --seed 3 --format json").stdout;
    assert_eq!(a, b);
}

#[test]
fn catalog_examples() {
    for (n, count, agree) in [(3, 2, true), (5, 4, true), (4, 3, false)] {
        let (doc, code) = json(&format!("catalog --n {n}"));
        assert_eq!(code, 0);
        let d = &doc["diagnostics"];
        assert_eq!(d["count_inequivalent"], count, "n={n}");
        assert_eq!(d["agreement"], agree, "n={n}");
    }
    let (doc, _) = json("catalog --n 4");
    assert_eq!(doc["diagnostics"]["paper_count"], 5);
}

#[test]
fn csv_output() {
    let text = run("solve --scheme 1 --n 4 --format csv").stdout;
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "scheme,n,p,x,lambda,I1,provenance,residual");
    let second = lines.nth(1).unwrap();
    assert!(second.starts_with("1,4,,7;1;7,"), "{second}");
}

#[test]
fn cache_files_are_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = format!(
        "check --scheme 2 --n 5 --p 3 --x 1,1,1,0.0666666666666667 --cache-dir {}",
        dir.path().display()
    );
    let first = run(&args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    let path = dir.path().join("f_s2_n5_p3.sc");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("2 5 3 24\n"));

    // A second run reads the file; the result is unchanged.
    let second = run(&args);
    assert_eq!(first, second);
}

#[test]
fn cache_dir_has_an_environment_override() {
    use clap::CommandFactory;
    let cmd = crate::Cli::command();
    let solve = cmd.find_subcommand("solve").unwrap();
    let arg = solve.get_arguments().find(|a| a.get_id() == "cache_dir").unwrap();
    assert_eq!(arg.get_env(), Some(std::ffi::OsStr::new(crate::CACHE_ENV)));
}

#[test]
fn cache_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let basis = build_scheme2_basis(6, 2).unwrap();
    let sc = structure_constants(&basis).unwrap();
    let path = dir.path().join(file_name(Scheme::Two, 6, Some(2)));
    write_constants(&path, Scheme::Two, 6, Some(2), &sc).unwrap();
    let back = read_constants(&path, Scheme::Two, 6, Some(2)).unwrap();
    assert_eq!(back.gram_diagonal(), sc.gram_diagonal());
    let a: Vec<_> = back.nonzeros().collect();
    let b: Vec<_> = sc.nonzeros().collect();
    assert_eq!(a, b);
    assert!(read_constants(&path, Scheme::Two, 6, Some(3)).is_err());
    assert_eq!(file_name(Scheme::One, 4, None), "f_s1_n4_p0.sc");
}

#[test]
fn corrupt_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f_s1_n3_p0.sc"), "1 3 0 8\n2 2 2\n").unwrap();
    let out = run(&format!("solve --scheme 1 --n 3 --starts 10 --cache-dir {}", dir.path().display()));
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("Gram"), "{}", out.stderr);
}

#[test]
fn help_is_not_an_error() {
    let out = run("--help");
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("catalog"));
}
