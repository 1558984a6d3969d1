//! Bundled data files, overridable through the `HFKLAB_DATA` directory.

use std::path::PathBuf;

use crate::{CliError, CliResult};

const EMBEDDED: &[(&str, &str)] = &[
    ("knots.json", include_str!("../data/knots.json")),
    ("hfk_4_1.json", include_str!("../data/hfk_4_1.json")),
    ("hfk_10_122.json", include_str!("../data/hfk_10_122.json")),
    ("hfk_trefoil.json", include_str!("../data/hfk_trefoil.json")),
    ("hfk_unknot.json", include_str!("../data/hfk_unknot.json")),
    ("s2_reflection.json", include_str!("../data/s2_reflection.json")),
];

pub fn bundled_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|&(n, _)| n).collect()
}

/// Contents of a bundled file; `HFKLAB_DATA` redirects lookups to a
/// directory on disk.
pub fn data_text(name: &str) -> CliResult<String> {
    if let Ok(dir) = std::env::var("HFKLAB_DATA") {
        let path = PathBuf::from(dir).join(name);
        return std::fs::read_to_string(&path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())));
    }
    EMBEDDED
        .iter()
        .find(|&&(n, _)| n == name)
        .map(|&(_, text)| text.to_string())
        .ok_or_else(|| {
            CliError::input(format!(
                "no bundled data file {name:?}; available: {}",
                bundled_names().join(", ")
            ))
        })
}

pub struct KnotEntry {
    pub name: String,
    pub alexander: hfklab_core::LaurentPoly,
    pub signature: i64,
    pub note: Option<String>,
}

pub fn knot_entry(name: &str) -> CliResult<KnotEntry> {
    let text = data_text("knots.json")?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("knots.json: {e}")))?;
    let knots = value
        .get("knots")
        .and_then(|k| k.as_array())
        .ok_or_else(|| CliError::input("knots.json: missing knots array".into()))?;
    for entry in knots {
        if entry.get("name").and_then(|n| n.as_str()) == Some(name) {
            let poly_text = entry
                .get("alexander")
                .and_then(|p| p.as_str())
                .ok_or_else(|| CliError::input(format!("knot {name}: missing alexander")))?;
            let alexander = hfklab_core::laurent::parse_poly(poly_text)
                .map_err(|e| CliError::input(format!("knot {name}: {e}")))?;
            let signature = entry.get("signature").and_then(|s| s.as_i64()).unwrap_or(0);
            let note = entry
                .get("note")
                .and_then(|n| n.as_str())
                .map(str::to_string);
            return Ok(KnotEntry { name: name.to_string(), alexander, signature, note });
        }
    }
    Err(CliError::input(format!("knot {name:?} not in the bundled table")))
}
