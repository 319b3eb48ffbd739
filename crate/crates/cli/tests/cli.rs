use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use weilforge::{parse_program, run_script};
use weilforge_core::serialize::{algebra_from_json, content_hash};
use weilforge_core::truncated_algebra;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weilforge"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weilforge-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn empty_program_is_silent() {
    assert_eq!(run_script("", false), (String::new(), 0));
    assert_eq!(run_script("# only a comment\n", false), (String::new(), 0));
}

#[test]
fn diagnostics_are_deterministic() {
    let bad = [
        "A = truncated(m=1, l=3);\ncheck weil B mpow(A, 2);\n",
        "A = truncated(m=1 l=3);",
        "A = truncated(m=1, l=3);\ncheck weil mpow(A, 2) A;\n",
        "A = truncated(m=1, l=3);\ncheck jet A mpow(A, 1);\n",
        "A = truncated(m=1, l=3);\nI = ideal(A; y^2);\n",
    ];
    for src in bad {
        let first = run_script(src, false);
        for _ in 0..3 {
            assert_eq!(run_script(src, false), first);
        }
        assert_eq!(first.1, 2, "{src}: {}", first.0);
    }
    let (msg, _) = run_script("A = truncated(m=1, l=3);\ncheck weil B mpow(A, 2);\n", false);
    assert!(msg.starts_with("NameError at 2:12"), "{msg}");
}

#[test]
fn failing_check_exits_one_with_witness() {
    let (out, code) = run_script("A = truncated(m=1, l=4);\ncheck weil A mpow(A, 2);\n", false);
    assert_eq!(code, 1);
    assert!(out.contains("(xi^2) * (xi^2) = xi^4"), "{out}");
    let (_, code) = run_script("A = truncated(m=1, l=3);\ncheck weil A mpow(A, 2);\n", false);
    assert_eq!(code, 0);
}

#[test]
fn export_writes_a_loadable_algebra() {
    let dir = scratch("export");
    let path = dir.join("b.json");
    let src = format!(
        "A = truncated(m=2, l=3);\nB = quotient(A, mpow(A, 3));\nexport B {:?};\n",
        path.display().to_string()
    );
    let (out, code) = run_script(&src, true);
    assert_eq!(code, 0, "{out}");
    let b = algebra_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(b.dim(), 6);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let exported = doc["results"].as_array().unwrap().last().unwrap();
    assert_eq!(exported["algebra_hash"], content_hash(&b));
    assert_eq!(b.structure_constants(), truncated_algebra(2, 2).unwrap().structure_constants());

    // The exported file works as an --algebra argument.
    let out = bin()
        .args(["check", "--kind", "weil", "--algebra"])
        .arg(&path)
        .args(["--ideal", "mpow(A, 2)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_subcommand() {
    let out = bin()
        .args(["check", "--kind", "aut", "--algebra", "truncated(m=1, l=4)", "--ideal", "mpow(A, 2)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["check", "--kind", "jet", "--algebra", "truncated(m=1, l=4)", "--ideal", "mpow(A, 4)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["check", "--kind", "weil", "--algebra", "truncated(m=1, l=4)", "--ideal", "mpow(B, 4)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_subcommand_writes_csv() {
    let dir = scratch("scan");
    let csv = dir.join("scan.csv");
    let out = bin().args(["scan", "--m-max", "1", "--l-max", "3", "--csv"]).arg(&csv).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,l,k,weil,regular,aut,jet,predicted_weil,predicted_jet,agree")
    );
    assert_eq!(lines.count(), 6);
    // l = 4 contains the cell where 3k+1 >= 2l is not necessary.
    let out = bin().args(["scan", "--m-max", "1", "--l-max", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILURE"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dims_subcommand() {
    let out = bin()
        .args(["--json", "dims", "--algebra", "truncated(m=1, l=1)", "--ambient", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &doc["results"][0];
    assert_eq!(row["near_point_tangent"], 4);
    assert_eq!(row["algebra_derivations"], 1);
    assert_eq!(row["jet_tangent"], 3);
    let out = bin()
        .args(["--json", "dims", "--algebra", "truncated(m=2, l=2)", "--ambient", "1"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["results"][0]["jet_tangent"].is_null());
}

#[test]
fn run_reports_missing_file() {
    let out = bin().args(["run", "/nonexistent/script.wf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn ident() -> impl Strategy<Value = String> {
    "[A-HK-Z][a-z0-9_]{0,3}"
}

fn poly_text() -> impl Strategy<Value = String> {
    let term = (
        prop_oneof![Just(String::new()), (1i64..9).prop_map(|c| format!("{c}*")), (1i64..9, 2i64..5).prop_map(|(n, d)| format!("{n}/{d}*"))],
        prop::collection::vec((prop_oneof![Just("xi1"), Just("xi2")], 1u32..4), 1..3),
    )
        .prop_map(|(c, fs)| {
            let f: Vec<String> = fs
                .into_iter()
                .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            format!("{c}{}", f.join("*"))
        });
    prop::collection::vec((term, any::<bool>()), 1..4).prop_map(|ts| {
        let mut s = String::new();
        for (i, (t, neg)) in ts.into_iter().enumerate() {
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&t);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printing_then_parsing_is_identity(
        a in ident(),
        m in 1usize..4,
        l in 0usize..6,
        k in 0usize..6,
        polys in prop::collection::vec(poly_text(), 1..3),
        kind in prop_oneof![Just("weil"), Just("regular"), Just("aut"), Just("jet")],
    ) {
        let src = format!(
            "{a} = truncated(m={m}, l={l});\nI = ideal({a}; {});\nJ = ann({a}, mpow({a}, {k}));\ncheck {kind} quotient({a}, I) mpow(quotient({a}, I), 1);\nscan truncated m<={m} l<={l};\n",
            polys.join(", ")
        );
        let p = parse_program(&src).unwrap();
        let printed = p.to_string();
        prop_assert_eq!(parse_program(&printed).unwrap(), p);
    }
}
