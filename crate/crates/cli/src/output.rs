//! Text tables and JSON documents for execution results.

use serde::Serialize;
use serde_json::json;
use weilforge_core::criteria::{scan_csv, ScanRow};

use crate::exec::{ExecError, Outcome};

fn yes_no(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

/// Left-aligned table with a dashed rule under the header.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    out.push('\n');
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.clone()));
        out.push('\n');
    }
    out
}

pub fn scan_table(rows: &[ScanRow]) -> String {
    let header = ["m", "l", "k", "weil", "regular", "aut", "jet", "pred_weil", "pred_jet", "agree"];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                r.l.to_string(),
                r.k.to_string(),
                yes_no(r.weil).into(),
                yes_no(r.regular).into(),
                yes_no(r.aut).into(),
                yes_no(r.jet).into(),
                yes_no(r.predicted_weil).into(),
                yes_no(r.predicted_jet).into(),
                if r.agree { "ok".into() } else { "FAILURE".into() },
            ]
        })
        .collect();
    table(&header, &body)
}

/// Human-readable rendering; definitions are silent.
pub fn render_text(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    let checks: Vec<Vec<String>> = outcomes
        .iter()
        .filter_map(|o| match o {
            Outcome::Check { statement, report } => Some(vec![
                statement.clone(),
                yes_no(report.holds).into(),
                report
                    .criteria
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| c.name.clone())
                    .collect::<Vec<_>>()
                    .join(","),
                report.first_witness().map(|w| w.to_string()).unwrap_or_default(),
            ]),
            _ => None,
        })
        .collect();
    if !checks.is_empty() {
        out.push_str(&table(&["statement", "verdict", "failed", "witness"], &checks));
    }
    for o in outcomes {
        match o {
            Outcome::Scan {
                statement,
                rows,
                disagreements,
            } => {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("{statement}\n"));
                out.push_str(&scan_table(rows));
                out.push_str(&format!("{} rows, {} disagreements\n", rows.len(), disagreements));
            }
            Outcome::Export { name, path, .. } => {
                out.push_str(&format!("exported {name} to {path}\n"));
            }
            _ => {}
        }
    }
    out
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    line: usize,
    column: usize,
    statement: &'a str,
    message: &'a str,
}

/// `{"results": [...], "error": null | {...}, "exit_code": n}`
pub fn render_json(outcomes: &[Outcome], error: Option<&ExecError>, exit_code: i32) -> String {
    let err = error.map(|e| ErrorDoc {
        line: e.pos.line,
        column: e.pos.column,
        statement: &e.statement,
        message: &e.message,
    });
    let doc = json!({
        "results": outcomes,
        "error": err,
        "exit_code": exit_code,
    });
    serde_json::to_string_pretty(&doc).expect("results serialize")
}

/// CSV of every scan row in the outcomes.
pub fn scans_csv(outcomes: &[Outcome]) -> Option<String> {
    let rows: Vec<ScanRow> = outcomes
        .iter()
        .filter_map(|o| match o {
            Outcome::Scan { rows, .. } => Some(rows.clone()),
            _ => None,
        })
        .flatten()
        .collect();
    (!rows.is_empty()).then(|| scan_csv(&rows))
}
