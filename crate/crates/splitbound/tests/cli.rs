use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::{Registry, Validator};
use serde_json::Value;
use splitbound::{run, Output};

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn invoke(args: &[&str]) -> Output {
    run(std::iter::once("splitbound").chain(args.iter().copied()))
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn validator(name: &str) -> Validator {
    let dir = crate_dir().join("schemas");
    let registry = Registry::new()
        .add("https://splitbound.invalid/defs.schema.json", load(&dir.join("defs.schema.json")))
        .unwrap()
        .prepare()
        .unwrap();
    let schema = load(&dir.join(format!("{name}.schema.json")));
    jsonschema::options().with_registry(&registry).build(&schema).unwrap()
}

fn assert_valid(schema: &str, out: &str) {
    let v: Value = serde_json::from_str(out).unwrap_or_else(|e| panic!("{e}: {out}"));
    let errors: Vec<String> = validator(schema).iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{out}");
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("pgl_depth_4", &["pgl", "depth", "--group", "4"]),
    ("f2_census_quad", &["f2", "census", "--lemma", "quad"]),
    ("obstruct_thm13", &["obstruct", "--mode", "thm13", "--p", "2", "--r", "3", "--e", "0"]),
    ("obstruct_compare", &["obstruct", "--mode", "compare", "--w1", "std:2,2,2", "--w2", "std:8"]),
    ("tables_tits_e8", &["tables", "tits", "--type", "E8"]),
    ("verify_ec8", &["verify", "ec8"]),
    ("form_info_std24", &["form", "info", "--form", "std:2,4"]),
    ("group_reduce_6", &["group", "reduce", "--group", "6", "--tuple", "(2);(3)"]),
];

#[test]
fn golden_outputs_are_byte_identical() {
    for (name, args) in GOLDEN {
        let path = crate_dir().join("tests/golden").join(format!("{name}.json"));
        let out = invoke(args);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        assert_eq!(out.stdout, fs::read_to_string(&path).unwrap(), "{name}");
        assert_eq!(invoke(args), out, "{name} is not deterministic");
    }
}

#[test]
fn spec_examples() {
    assert_eq!(invoke(&["pgl", "depth", "--group", "4"]).stdout, "{\"depth\":2}\n");
    assert_eq!(invoke(&["f2", "census", "--lemma", "quad"]).stdout, "{\"counts\":[56,64,72]}\n");
    let out = invoke(&["obstruct", "--mode", "thm13", "--p", "2", "--r", "3", "--e", "0"]);
    assert_eq!(out.stdout, "{\"bound\":16}\n");
}

const SCHEMA_CASES: &[(&str, &[&str])] = &[
    ("group", &["group", "info", "--group", "2,3"]),
    ("group", &["group", "subgroups", "--group", "2,4"]),
    ("group", &["group", "subgroups", "--group", "2,4", "--types"]),
    ("group", &["group", "subgroups", "--group", "1"]),
    ("group", &["group", "quotient", "--group", "2,4", "--gens", "(1,2)"]),
    ("group", &["group", "character", "--group", "4", "--chi", "(1)", "--a", "(2)"]),
    ("group", &["group", "reduce", "--group", "2,2", "--tuple", "(1,0);(0,1);(1,1)"]),
    ("form", &["form", "info", "--form", "2,2|0,1/2;1/2,0"]),
    ("form", &["form", "info", "--form", "2,2|0,0;0,0"]),
    ("form", &["form", "check", "--form", "std:4", "--gens", "(2,2)"]),
    ("form", &["form", "check", "--form", "2|0", "--gens", "(1)"]),
    ("form", &["form", "lagrangians", "--form", "std:2,2"]),
    ("form", &["form", "max-isotropic", "--form", "std:3"]),
    ("form", &["form", "symplectic", "--form", "std:2,2", "--s", "1"]),
    ("pgl", &["pgl", "depth", "--group", "3,3"]),
    ("pgl", &["pgl", "image", "--group", "2,2"]),
    ("pgl", &["pgl", "phi", "--group", "4", "--a", "(1)", "--chi", "(3)"]),
    ("pgl", &["pgl", "braid", "--group", "2,4", "--a", "(1,1)", "--chi", "(0,3)"]),
    ("f2", &["f2", "census", "--lemma", "quad", "--detail"]),
    ("f2", &["f2", "census", "--lemma", "e8"]),
    ("f2", &["f2", "census", "--lemma", "ec8", "--detail"]),
    ("f2", &["f2", "analyze", "--dim", "3", "--rows", "3,2,4"]),
    ("obstruct", &["obstruct", "--mode", "f", "--r", "6"]),
    ("obstruct", &["obstruct", "--mode", "fe", "--p", "3", "--r", "6", "--e", "1"]),
    ("obstruct", &["obstruct", "--mode", "min-partition", "--r", "7"]),
    ("obstruct", &["obstruct", "--mode", "compare", "--w1", "std:2,2", "--w2", "std:4"]),
    ("tables", &["tables"]),
    ("tables", &["tables", "torsion", "--type", "F4"]),
    ("tables", &["tables", "tits", "--type", "D6", "--non-sc"]),
    ("tables", &["tables", "depth", "--type", "E7", "--non-sc", "--p", "2", "--d", "2"]),
    ("tables", &["tables", "quadform", "--n", "5"]),
    ("tables", &["tables", "fixed"]),
    ("verify", &["verify", "partitions", "--timings"]),
];

#[test]
fn outputs_match_schemas() {
    for (schema, args) in SCHEMA_CASES {
        let out = invoke(args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        assert_valid(schema, &out.stdout);
    }
    for (name, args) in GOLDEN {
        let schema = name.split('_').next().unwrap();
        assert_valid(schema, &invoke(args).stdout);
    }
}

#[test]
fn validation_errors_exit_2_with_error_object() {
    let cases: &[&[&str]] = &[
        &["group", "info", "--group", "1,2"],
        &["form", "info", "--form", "2,2|0,1/3;1/3,0"],
        &["form", "lagrangians", "--form", "2,2|0,0;0,0"],
        &["pgl", "depth", "--group", "6"],
        &["obstruct", "--mode", "thm13", "--p", "4", "--r", "3"],
        &["obstruct", "--mode", "thm13", "--p", "2", "--r", "2", "--e", "2"],
        &["obstruct", "--mode", "min-partition", "--r", "41"],
        &["obstruct", "--mode", "compare", "--w1", "std:2"],
        &["tables", "tits", "--type", "G2", "--non-sc"],
        &["tables", "torsion", "--type", "B2"],
        &["tables", "tits", "--type", "D3"],
        &["verify", "nonsense"],
        &["f2", "analyze", "--dim", "40", "--rows", ""],
    ];
    for args in cases {
        let out = invoke(args);
        assert_eq!(out.code, 2, "{args:?}: {out:?}");
        assert!(out.stdout.is_empty());
        assert_valid("error", &out.stderr);
    }
    let out = invoke(&["tables", "tits", "--type", "G2", "--non-sc"]);
    assert!(out.stderr.contains("\"code\":\"unsupported-type\""));
}

#[test]
fn usage_errors_exit_2() {
    let out = invoke(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
    assert_eq!(invoke(&["obstruct", "--mode", "nope"]).code, 2);
    let help = invoke(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("verify"));
}

#[test]
fn text_format() {
    let out = invoke(&["--format", "text", "pgl", "depth", "--group", "2,2"]);
    assert_eq!(out.stdout, "depth: 2\n");
    let out = invoke(&["verify", "tables", "--format", "text"]);
    assert!(out.stdout.contains("passed: true"));
}

#[test]
fn form_files() {
    let dir = std::env::temp_dir().join(format!("splitbound-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let json = dir.join("w.json");
    fs::write(&json, r#"{"group": [2, 2], "gram": [["0", "1/2"], ["1/2", "0"]]}"#).unwrap();
    let literal = dir.join("w.txt");
    fs::write(&literal, "std:2\n").unwrap();
    let a = invoke(&["form", "info", "--form", &format!("@{}", json.display())]);
    let b = invoke(&["form", "info", "--form", &format!("@{}", literal.display())]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, b);
    let missing = invoke(&["form", "info", "--form", "@/nonexistent/form"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("\"code\":\"io\""));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn enumeration_limit_from_environment() {
    let bin = env!("CARGO_BIN_EXE_splitbound");
    let small = Command::new(bin)
        .args(["group", "subgroups", "--group", "2,2,2", "--types"])
        .env("SPLITBOUND_ENUM_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(small.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&small.stderr).contains("enumeration-bound"));
    let fine = Command::new(bin)
        .args(["group", "subgroups", "--group", "2,2,2", "--types"])
        .env("SPLITBOUND_ENUM_LIMIT", "8")
        .output()
        .unwrap();
    assert_eq!(fine.status.code(), Some(0));
    let bad = Command::new(bin)
        .args(["pgl", "depth", "--group", "2"])
        .env("SPLITBOUND_ENUM_LIMIT", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_splitbound");
    let out = Command::new(bin).args(["pgl", "depth", "--group", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"depth\":2}\n");
}

#[test]
fn computed_values() {
    let v: Value = serde_json::from_str(&invoke(&["group", "info", "--group", "2,3"]).stdout).unwrap();
    assert_eq!(v["invariants"], serde_json::json!([6]));
    let v: Value =
        serde_json::from_str(&invoke(&["group", "character", "--group", "4", "--chi", "(1)", "--a", "(2)"]).stdout)
            .unwrap();
    assert_eq!(v["value"], "1/2");
    let v: Value = serde_json::from_str(&invoke(&["pgl", "image", "--group", "2,2"]).stdout).unwrap();
    assert_eq!(v["order"], 16);
    assert_eq!(v["toral"], false);
    let v: Value = serde_json::from_str(&invoke(&["obstruct", "--mode", "f", "--r", "6"]).stdout).unwrap();
    assert_eq!(v["exponent"], 10);
    let v: Value = serde_json::from_str(&invoke(&["tables", "quadform", "--n", "4", "--det-one"]).stdout).unwrap();
    assert_eq!((v["upper_l"].as_u64(), v["lower_exp"].as_u64()), (Some(1), Some(1)));
    let v: Value = serde_json::from_str(&invoke(&["tables", "fixed"]).stdout).unwrap();
    assert_eq!(v["fixed_divisors"]["E8_splitting"], 60);
    assert_eq!(v["fixed_divisors"]["E7_splitting"], 12);
}
