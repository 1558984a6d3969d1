//! Rendering check reports in the three output formats. Machine formats
//! keep keys and rows in a stable order so identical runs are
//! byte-identical.

use hfklab_core::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Format::Human),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (human, json, csv)")),
        }
    }
}

pub fn render_report(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json()).expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("a,q,side,lhs,rhs,ok\n");
            for r in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.a,
                    r.q.map_or(String::new(), |q| q.to_string()),
                    r.side.as_deref().unwrap_or(""),
                    r.lhs,
                    r.rhs,
                    r.ok
                ));
            }
            out
        }
        Format::Human => {
            let mut out = format!(
                "{}: {}\n",
                report.kind,
                if report.passed { "PASS" } else { "FAIL" }
            );
            for r in &report.rows {
                let q = r.q.map_or(String::new(), |q| format!(" q={q}"));
                let side = r.side.as_deref().map_or(String::new(), |s| format!(" [{s}]"));
                let rel = if r.side.as_deref().is_some_and(|s| s.starts_with("eq_")) {
                    "=="
                } else {
                    ">="
                };
                out.push_str(&format!(
                    "  a={}{q}{side}: {} {rel} {} {}\n",
                    r.a,
                    r.lhs,
                    r.rhs,
                    if r.ok { "ok" } else { "VIOLATED" }
                ));
            }
            if let Some(f) = &report.first_failure {
                out.push_str(&format!(
                    "first failure at a={}{}\n",
                    f.a,
                    f.q.map_or(String::new(), |q| format!(", q={q}"))
                ));
            }
            out
        }
    }
}
