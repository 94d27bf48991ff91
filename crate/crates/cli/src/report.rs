use std::fmt::Write as _;

use nis_core::gap::{GapReport, GapRow};
use nis_core::kb::PrefixMap;
use serde::Serialize;

#[derive(Serialize)]
struct JsonRow {
    article: String,
    task: String,
    object: String,
}

// Field order is the output key order.
#[derive(Serialize)]
struct JsonReport {
    individual: String,
    target: String,
    compliant: Vec<String>,
    gaps: Vec<JsonRow>,
    satisfied: Vec<JsonRow>,
}

fn json_rows(rows: &[GapRow]) -> Vec<JsonRow> {
    let full = PrefixMap::empty();
    rows.iter()
        .map(|r| JsonRow {
            article: r.article.to_string(),
            task: r.task.to_string(),
            object: match r.object.as_class() {
                Some(c) => c.to_string(),
                None => r.object.render(&full),
            },
        })
        .collect()
}

pub fn json(report: &GapReport) -> String {
    let doc = JsonReport {
        individual: report.individual.to_string(),
        target: report.target.to_string(),
        compliant: report.compliant.iter().map(ToString::to_string).collect(),
        gaps: json_rows(&report.rows),
        satisfied: json_rows(&report.satisfied),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

/// The article | task | obj table with aligned columns.
pub fn table(report: &GapReport, prefixes: &PrefixMap) -> String {
    let mut cells = vec![["article".to_string(), "task".to_string(), "obj".to_string()]];
    for r in &report.rows {
        cells.push([
            prefixes.compact(&r.article),
            prefixes.compact(&r.task),
            r.object.render(prefixes),
        ]);
    }
    let widths: Vec<usize> = (0..3)
        .map(|i| cells.iter().map(|c| c[i].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (n, row) in cells.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:<w0$} | {:<w1$} | {}",
            row[0],
            row[1],
            row[2],
            w0 = widths[0],
            w1 = widths[1]
        );
        if n == 0 {
            let _ = writeln!(
                out,
                "{}-+-{}-+-{}",
                "-".repeat(widths[0]),
                "-".repeat(widths[1]),
                "-".repeat(widths[2])
            );
        }
    }
    out
}

pub fn text(report: &GapReport, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "individual: {}", prefixes.compact(&report.individual));
    let _ = writeln!(out, "target: {}", prefixes.compact(&report.target));
    if report.compliant.is_empty() {
        let _ = writeln!(out, "inferred compliance: none");
    } else {
        let _ = writeln!(out, "inferred compliance:");
        for c in &report.compliant {
            let _ = writeln!(out, "  {}", prefixes.compact(c));
        }
    }
    let _ = writeln!(
        out,
        "measures: {} satisfied, {} missing",
        report.satisfied.len(),
        report.rows.len()
    );
    if report.rows.is_empty() {
        let _ = writeln!(
            out,
            "status: compliant with {}",
            prefixes.compact(&report.target)
        );
    } else {
        let _ = writeln!(
            out,
            "status: not compliant with {}",
            prefixes.compact(&report.target)
        );
        out.push('\n');
        out.push_str(&table(report, prefixes));
    }
    out
}
