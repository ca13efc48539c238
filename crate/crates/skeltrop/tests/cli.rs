//! End-to-end command tests: exit codes, report shapes, determinism.

use std::fs;
use std::path::{Path, PathBuf};

use skeltrop::commands::execute;
use skeltrop::formats;
use skeltrop_core::instances;

fn run(args: &[&str]) -> (String, u8) {
    let mut full = vec!["skeltrop"];
    full.extend_from_slice(args);
    let outcome = execute(full);
    (outcome.stdout, outcome.exit)
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn emit_example(dir: &Path) -> (PathBuf, PathBuf) {
    let complex = dir.join("e2.json");
    let plf = dir.join("e2f.json");
    let (_, exit) = run(&[
        "example",
        "--name",
        "e2",
        "--emit",
        "complex",
        "--out",
        complex.to_str().unwrap(),
    ]);
    assert_eq!(exit, 0);
    let (_, exit) = run(&[
        "example",
        "--name",
        "e2",
        "--emit",
        "plf",
        "--out",
        plf.to_str().unwrap(),
    ]);
    assert_eq!(exit, 0);
    (complex, plf)
}

#[test]
fn validate_example_passes_and_broken_alpha_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, _) = emit_example(dir.path());
    let (out, exit) = run(&["validate", complex.to_str().unwrap()]);
    assert_eq!(exit, 0, "{out}");
    assert!(out.contains("PASS"));

    // bump one alpha entry: the degree-sum law must flag the edge
    let text = fs::read_to_string(&complex).unwrap();
    let broken = text.replace(
        "\"e15\": {\n      \"P1\": 1,\n      \"P5\": 1\n    }",
        "\"e15\": {\n      \"P1\": 2,\n      \"P5\": 1\n    }",
    );
    assert_ne!(text, broken, "the fixture edit must apply");
    let path = write(dir.path(), "broken.json", &broken);
    let (out, exit) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit, 1, "{out}");
    assert!(out.contains("e15"));
    assert!(out.contains("deg_b"));
}

#[test]
fn truncated_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"dimension\": 2, \"verti");
    let (out, exit) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit, 2, "{out}");
    assert!(out.contains("ERROR"));
}

#[test]
fn balance_example_passes_and_perturbed_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, plf) = emit_example(dir.path());
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        plf.to_str().unwrap(),
        "--mode",
        "bounded",
    ]);
    assert_eq!(exit, 0, "{out}");
    assert!(out.contains("12 cells evaluated"));
    // the discrepancy note rides along with the data
    assert!(out.contains("known discrepancy"));

    // pair mode passes as well, with the data-gapped cells skipped
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        plf.to_str().unwrap(),
        "--mode",
        "pair",
    ]);
    assert_eq!(exit, 0, "{out}");
    assert!(out.contains("skipped"));

    // bump one vertex value by the length: integrality still holds, the
    // balancing does not
    let text = fs::read_to_string(&plf).unwrap();
    let perturbed = text.replace("\"P4\": \"0\"", "\"P4\": \"1/2\"");
    assert_ne!(text, perturbed);
    let path = write(dir.path(), "perturbed.json", &perturbed);
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        path.to_str().unwrap(),
        "--mode",
        "bounded",
    ]);
    assert_eq!(exit, 1, "{out}");
    assert!(out.contains("violation"));
}

fn write_instance(
    dir: &Path,
    name: &str,
    complex: &skeltrop_core::WeakTropicalComplex,
    map: &skeltrop_core::tropmap::CellwiseTropMap,
) -> (PathBuf, PathBuf) {
    let cfile = formats::complex_to_file(complex);
    let cpath = write(
        dir,
        &format!("{name}.complex.json"),
        &serde_json::to_string_pretty(&cfile).unwrap(),
    );
    let mfile = formats::tropmap_to_file(complex, map).unwrap();
    let mpath = write(
        dir,
        &format!("{name}.map.json"),
        &serde_json::to_string_pretty(&mfile).unwrap(),
    );
    (cpath, mpath)
}

#[test]
fn st_fold_and_genericity_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, map) = instances::fold();
    let (cpath, mpath) = write_instance(dir.path(), "fold", &complex, &map);

    let (out, exit) = run(&[
        "st",
        cpath.to_str().unwrap(),
        mpath.to_str().unwrap(),
        "--omega",
        "1/2",
        "--degree",
        "2",
    ]);
    assert_eq!(exit, 0, "{out}");
    assert!(out.contains("\"multiplicity\",\"message\":\"1\""));

    // a vertex image is not generic
    let (out, exit) = run(&[
        "st",
        cpath.to_str().unwrap(),
        mpath.to_str().unwrap(),
        "--omega",
        "1",
    ]);
    assert_eq!(exit, 3, "{out}");

    // non-integral multiplicity is a semantic failure
    let (out, exit) = run(&[
        "st",
        cpath.to_str().unwrap(),
        mpath.to_str().unwrap(),
        "--omega",
        "1/2",
        "--degree",
        "3",
    ]);
    assert_eq!(exit, 1, "{out}");
}

#[test]
fn faithful_and_section_verdicts() {
    let dir = tempfile::tempdir().unwrap();

    let (complex, map) = instances::triangle_embedding();
    let (cpath, mpath) = write_instance(dir.path(), "triangle", &complex, &map);
    let (out, exit) = run(&["faithful", cpath.to_str().unwrap(), mpath.to_str().unwrap()]);
    assert_eq!(exit, 0, "{out}");
    let (out, exit) = run(&[
        "section",
        cpath.to_str().unwrap(),
        mpath.to_str().unwrap(),
        "--omega",
        "1/2,0",
    ]);
    assert_eq!(exit, 0, "{out}");

    let (complex, map) = instances::subdivided_segment(&[2]);
    let (cpath, mpath) = write_instance(dir.path(), "double", &complex, &map);
    let (out, exit) = run(&["faithful", cpath.to_str().unwrap(), mpath.to_str().unwrap()]);
    assert_eq!(exit, 1, "{out}");
    assert!(out.contains("not unimodular"));
    let (out, exit) = run(&[
        "section",
        cpath.to_str().unwrap(),
        mpath.to_str().unwrap(),
        "--omega",
        "1",
    ]);
    assert_eq!(exit, 1, "{out}");
    assert!(out.contains("index"));

    let (complex, map) = instances::fold();
    let (cpath, mpath) = write_instance(dir.path(), "fold", &complex, &map);
    let (out, exit) = run(&["faithful", cpath.to_str().unwrap(), mpath.to_str().unwrap()]);
    assert_eq!(exit, 1, "{out}");
    assert!(out.contains("overlaps"));
}

#[test]
fn quoted_minus_one_boundary_multiplicity_breaks_balancing() {
    // substituting the commonly quoted boundary multiplicity -1 for the
    // derived -2 on the axis components leaves a residue of 1 on each of
    // the four affected edges
    let dir = tempfile::tempdir().unwrap();
    let (complex, plf) = emit_example(dir.path());
    let text = fs::read_to_string(&plf).unwrap();
    let quoted = text.replace("\"H3\": -2", "\"H3\": -1");
    assert_ne!(text, quoted);
    let path = write(dir.path(), "quoted.json", &quoted);
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        path.to_str().unwrap(),
        "--mode",
        "bounded",
    ]);
    assert_eq!(exit, 1, "{out}");
    for edge in ["e12", "e23"] {
        assert!(
            out.contains(&format!(
                "[violation] {edge}: balancing identity violated (residue=1)"
            )),
            "{out}"
        );
    }
    // the other edges stay balanced
    assert!(!out.contains("[violation] e15"), "{out}");
    assert!(!out.contains("[violation] e14"), "{out}");
}

#[test]
fn per_cell_slope_overrides_must_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, plf) = emit_example(dir.path());
    let text = fs::read_to_string(&plf).unwrap();
    // a consistent per-cell restatement is accepted
    let consistent = text.replace(
        "\"ray_slopes\": {",
        "\"cell_ray_slopes\": {\"e15*H1\": {\"H1\": 1}}, \"ray_slopes\": {",
    );
    let path = write(dir.path(), "consistent.json", &consistent);
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        path.to_str().unwrap(),
        "--mode",
        "bounded",
    ]);
    assert_eq!(exit, 0, "{out}");
    // a conflicting override is an input error
    let conflicting = text.replace(
        "\"ray_slopes\": {",
        "\"cell_ray_slopes\": {\"e15*H1\": {\"H1\": 5}}, \"ray_slopes\": {",
    );
    let path = write(dir.path(), "conflicting.json", &conflicting);
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        path.to_str().unwrap(),
        "--mode",
        "bounded",
    ]);
    assert_eq!(exit, 2, "{out}");
    assert!(out.contains("disagrees"), "{out}");
}

#[test]
fn wrong_omega_arity_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, map) = instances::fold();
    let (cpath, mpath) = write_instance(dir.path(), "fold", &complex, &map);
    let (out, exit) = run(&[
        "st",
        cpath.to_str().unwrap(),
        mpath.to_str().unwrap(),
        "--omega",
        "1/2,1/2",
    ]);
    assert_eq!(exit, 2, "{out}");
    assert!(out.contains("coordinates"), "{out}");
}

#[test]
fn missing_vertex_value_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, plf) = emit_example(dir.path());
    let text = fs::read_to_string(&plf).unwrap();
    let missing = text.replace("\"P4\": \"0\",", "");
    assert_ne!(text, missing);
    let path = write(dir.path(), "missing.json", &missing);
    let (out, exit) = run(&[
        "balance",
        complex.to_str().unwrap(),
        path.to_str().unwrap(),
        "--mode",
        "bounded",
    ]);
    assert_eq!(exit, 2, "{out}");
    assert!(out.contains("P4"), "{out}");
}

#[test]
fn unknown_example_is_an_input_error() {
    let (out, exit) = run(&["example", "--name", "e3", "--emit", "complex"]);
    assert_eq!(exit, 2, "{out}");
}

#[test]
fn alpha_table_refine_three_matches_two() {
    // the alpha numbers do not depend on the refinement used to compute them
    let (a2, e2) = run(&[
        "example",
        "--name",
        "e2",
        "--emit",
        "alpha-table",
        "--refine",
        "2",
    ]);
    let (a3, e3) = run(&[
        "example",
        "--name",
        "e2",
        "--emit",
        "alpha-table",
        "--refine",
        "3",
    ]);
    assert_eq!(e2, 0);
    assert_eq!(e3, 0);
    assert_eq!(a2, a3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, plf) = emit_example(dir.path());
    let args = [
        "balance",
        complex.to_str().unwrap(),
        plf.to_str().unwrap(),
        "--mode",
        "bounded",
    ];
    let (first, _) = run(&args);
    let (second, _) = run(&args);
    assert_eq!(first, second);

    let svg_args = ["example", "--name", "e2", "--emit", "svg"];
    let (svg1, exit) = run(&svg_args);
    assert_eq!(exit, 0);
    let (svg2, _) = run(&svg_args);
    assert_eq!(svg1, svg2);
    assert!(svg1.starts_with("<svg"));
    assert!(svg1.contains("F=1/2"));
}

#[test]
fn validate_rejects_mismatched_arity() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{
        "dimension": 1,
        "vertices": ["a", "b"],
        "cells": [
            {"id": "a", "r": 0, "s": 0, "length": "0", "vertex_ids": ["a"]},
            {"id": "b", "r": 0, "s": 0, "length": "0", "vertex_ids": ["b"]},
            {"id": "e", "r": 1, "s": 0, "length": "1", "vertex_ids": ["a", "b"]}
        ],
        "inclusions": [
            {"child": "a", "parent": "e", "coordinate_map": [0]},
            {"child": "b", "parent": "e", "coordinate_map": [1]}
        ]
    }"#;
    let path = write(dir.path(), "segment.json", json);
    let (out, exit) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit, 0, "{out}");

    // a cell naming an unknown vertex is an input error
    let bad = json.replace(
        "\"vertex_ids\": [\"a\", \"b\"]",
        "\"vertex_ids\": [\"a\", \"zz\"]",
    );
    let path = write(dir.path(), "bad.json", &bad);
    let (out, exit) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit, 2, "{out}");
}
