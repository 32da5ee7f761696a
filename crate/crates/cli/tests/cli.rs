use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use plumbing::invariants::{k_term, sw, torsion, SpinC};
use plumbing::ratfunc::RationalFunction;
use plumbing::rational::{parse_q, q, Q};
use plumbing::{Lattice, PlumbingGraph};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn plumbing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumbing"))
        .args(args)
        .env_remove("PLUMBING_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = plumbing(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn rat(v: &Value) -> Q {
    parse_q(v.as_str().expect("rationals are strings")).unwrap()
}

fn lattice(name: &str) -> std::sync::Arc<Lattice> {
    let text = std::fs::read_to_string(data(name)).unwrap();
    Lattice::new(PlumbingGraph::parse(&text).unwrap()).unwrap()
}

#[test]
fn minus_one_vertex_is_the_sphere() {
    let r = json(&["invariants", data("minus_one.txt").to_str().unwrap()]);
    assert_eq!(r["order"], "1");
    assert_eq!(rat(&r["casson_walker"]), q(0));
    let rows = r["structures"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rat(&rows[0]["sw"]), q(0));
}

#[test]
fn e8_has_one_structure() {
    let r = json(&["invariants", data("e8.txt").to_str().unwrap()]);
    assert_eq!(r["order"], "1");
    let rows = r["structures"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    // p_g of the E8 singularity vanishes and K = 0, so sw = -|V|/8
    assert_eq!(rat(&rows[0]["sw"]), q(-1));
    assert_eq!(rat(&rows[0]["normalized"]), q(0));
}

#[test]
fn invariants_json_matches_library_values() {
    for name in ["string22.txt", "tree5.txt", "lens3.txt", "sigma237.json"] {
        let r = json(&["invariants", data(name).to_str().unwrap()]);
        let lat = lattice(name);
        let rows = r["structures"].as_array().unwrap();
        assert_eq!(rows.len() as u64, lat.group().order(), "{name}");
        for row in rows {
            let s = SpinC::from_index(&lat, row["index"].as_u64().unwrap()).unwrap();
            assert_eq!(rat(&row["sw"]), sw(&s).unwrap(), "{name}");
            assert_eq!(rat(&row["torsion"]), torsion(&s).unwrap(), "{name}");
            assert_eq!(rat(&row["k_term"]), k_term(&s.extension()), "{name}");
            let rep = lat.parse_vector(row["representative"].as_str().unwrap()).unwrap();
            assert_eq!(rep.class().unwrap(), *s.h());
        }
    }
}

#[test]
fn string_has_three_rows_in_table_form() {
    let out = plumbing(&["invariants", data("string22.txt").to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("|H| = 3"));
    let rows = text.lines().skip_while(|l| !l.starts_with('#')).skip(1).count();
    assert_eq!(rows, 3);
}

#[test]
fn verify_single_vertex_report() {
    let r = json(&["verify", data("e8.txt").to_str().unwrap(), "--vertex", "node"]);
    let reports = r.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["vertex"], "node");
    assert_eq!(reports[0]["verified"], true);
    assert_eq!(rat(&reports[0]["lhs"]), rat(&reports[0]["rhs"]));
}

#[test]
fn verify_every_vertex_of_a_file() {
    let lat = lattice("tree5.txt");
    let r = json(&["verify", data("tree5.txt").to_str().unwrap()]);
    let reports = r.as_array().unwrap();
    assert_eq!(reports.len() as u64, lat.len() as u64 * lat.group().order());
    assert!(reports.iter().all(|x| x["verified"] == true));
}

#[test]
fn verify_random_corpus() {
    let args = ["verify", "--random", "--seed", "7", "--n", "8", "--count", "25", "--format", "json"];
    let out = plumbing(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let graphs: std::collections::BTreeSet<&str> = reports.iter().map(|r| r["graph"].as_str().unwrap()).collect();
    assert_eq!(graphs.len(), 25);
    for r in &reports {
        for key in ["residual_surgery", "residual_k", "residual_lambda", "residual_torsion", "residual_sw"] {
            assert_eq!(rat(&r[key]), q(0), "{key}");
        }
    }
    // same bytes on a second run
    assert_eq!(plumbing(&args).stdout, out.stdout);
}

#[test]
fn hilbert_single_vertex_matches_closed_form() {
    // d t^q/(1-t^d)^2 - (d-q-1) t^q/(1-t^d) at d = 3, q = 1
    let r = json(&["hilbert", data("lens3.txt").to_str().unwrap(), "--spinc", "E*: {v: 1}", "--terms", "30"]);
    let closed = RationalFunction::from_ints(&[0, 3], &[1, 0, 0, -2, 0, 0, 1])
        .unwrap()
        .sub(&RationalFunction::from_ints(&[0, 1], &[1, 0, 0, -1]).unwrap());
    let want = closed.series_prefix(30).unwrap();
    let got: Vec<Q> = r["series"].as_array().unwrap().iter().map(rat).collect();
    assert_eq!(got, want);
    assert_eq!(rat(&r["pol_at_one"]), q(0));
    assert!(r["polynomial_part"].as_array().unwrap().is_empty());
}

#[test]
fn hilbert_brieskorn_canonical() {
    let r = json(&["hilbert", data("sigma237.json").to_str().unwrap(), "--vertex", "center"]);
    assert_eq!(rat(&r["pol_at_one"]), q(1));
    assert_eq!(rat(&r["periodic_constant"]), rat(&r["pol_at_one"]));
}

#[test]
fn spinc_by_index_or_representative() {
    let lat = lattice("tree5.txt");
    let e = lat.group().class_of_e_star(lat.graph().index_of("d").unwrap());
    let index = lat.group().index_of(&e).to_string();
    let path = data("tree5.txt");
    let a = json(&["hilbert", path.to_str().unwrap(), "--vertex", "b", "--spinc", &index]);
    let b = json(&["hilbert", path.to_str().unwrap(), "--vertex", "b", "--spinc", "E*: {d: 1}"]);
    assert_eq!(a, b);
}

#[test]
fn seifert_summary_of_brieskorn_star() {
    let r = json(&["seifert", data("sigma237.json").to_str().unwrap()]);
    assert_eq!(r["pg"], 1);
    assert_eq!(r["h_order"], "1");
    assert_eq!(rat(&r["euler"]), plumbing::rational::qf(-1, 42));
}

#[test]
fn brieskorn_and_trefoil_agree() {
    let b = json(&["brieskorn", "2", "3", "7"]);
    let k = json(&["knot-surgery", "--p", "2", "--q", "3", "--d", "1"]);
    assert_eq!(rat(&b["sw_can"]), q(-1));
    assert_eq!(rat(&k["rows"][0]["sw"]), rat(&b["sw_can"]));
    assert_eq!(b["pg"], b["lattice_points"]);
}

#[test]
fn unknot_surgery_matches_lens_space_invariants() {
    let k = json(&["knot-surgery", "--alexander", "1", "--d", "5"]);
    let mut from_knot: Vec<Q> = k["rows"].as_array().unwrap().iter().map(|r| rat(&r["sw"])).collect();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "v: -5").unwrap();
    let inv = json(&["invariants", file.path().to_str().unwrap()]);
    let mut from_graph: Vec<Q> = inv["structures"].as_array().unwrap().iter().map(|r| rat(&r["sw"])).collect();
    from_knot.sort();
    from_graph.sort();
    assert_eq!(from_knot, from_graph);
}

#[test]
fn graph_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_plumbing"))
        .args(["invariants", "-", "--format", "json"])
        .env_remove("PLUMBING_CONFIG")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"a: -2\nb: -2\na -- b\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["order"], "3");
}

#[test]
fn input_errors_exit_with_two() {
    for (file, needle) in [
        ("malformed.txt", "line 2"),
        ("indefinite.txt", "negative definite"),
        ("cycle.txt", "not a tree"),
        ("does_not_exist.txt", "reading"),
    ] {
        let out = plumbing(&["invariants", data(file).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{file}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{file}: {err}");
    }
    let out = plumbing(&["verify", data("e8.txt").to_str().unwrap(), "--vertex", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = plumbing(&["hilbert", data("lens3.txt").to_str().unwrap(), "--spinc", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = plumbing(&["knot-surgery", "--p", "2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_is_advisory() {
    let path = data("lens3.txt");
    let out = plumbing(&["invariants", path.to_str().unwrap(), "--max-h", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-h 3"));
    let out = plumbing(&["invariants", path.to_str().unwrap(), "--max-h", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_from_environment() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "format = \"json\"\nmax_h = 2").unwrap();
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_plumbing"))
            .args(["invariants", data("lens3.txt").to_str().unwrap()])
            .args(extra)
            .env("PLUMBING_CONFIG", cfg.path())
            .output()
            .unwrap()
    };
    // the file's cap applies, a flag overrides it
    assert_eq!(run(&[]).status.code(), Some(2));
    let out = run(&["--max-h", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["order"], "3");

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "colour = \"blue\"").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_plumbing"))
        .args(["invariants", data("lens3.txt").to_str().unwrap(), "--config", bad.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
