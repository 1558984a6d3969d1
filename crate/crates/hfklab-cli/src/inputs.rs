//! Input resolution: rank tables and polynomials come from files, from
//! the bundled data (`bundle:NAME`, `knot:NAME`), or inline
//! (`poly:t - 1 + t^-1`).

use hfklab_core::hfk::HfkTable;
use hfklab_core::laurent::{parse_poly, LaurentPoly};

use crate::data;
use crate::{CliError, CliResult};

fn read_source(spec: &str) -> CliResult<String> {
    if let Some(name) = spec.strip_prefix("bundle:") {
        return data::data_text(name);
    }
    std::fs::read_to_string(spec).map_err(|e| CliError::input(format!("cannot read {spec}: {e}")))
}

/// Loads a rank table from JSON (`{"generators": ...}`) or CSV
/// (`maslov,alexander,rank`), sniffing the format from the content.
pub fn load_table(spec: &str) -> CliResult<HfkTable> {
    let text = read_source(spec)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{spec}: {e}")))?;
        HfkTable::from_json(&value).map_err(|e| CliError::input(format!("{spec}: {e}")))
    } else {
        HfkTable::from_csv(&text).map_err(|e| CliError::input(format!("{spec}: {e}")))
    }
}

/// A polynomial together with the signature when the source knows one
/// (`knot:NAME` sources do).
pub struct PolyInput {
    pub poly: LaurentPoly,
    pub signature: Option<i64>,
    pub note: Option<String>,
}

/// Loads a Laurent polynomial from `poly:<text>`, `knot:<name>`, or a
/// file holding either the text grammar or the JSON pair-list form.
pub fn load_poly(spec: &str) -> CliResult<PolyInput> {
    if let Some(text) = spec.strip_prefix("poly:") {
        let poly = parse_poly(text).map_err(|e| CliError::input(e.to_string()))?;
        return Ok(PolyInput { poly, signature: None, note: None });
    }
    if let Some(name) = spec.strip_prefix("knot:") {
        let entry = data::knot_entry(name)?;
        return Ok(PolyInput {
            poly: entry.alexander,
            signature: Some(entry.signature),
            note: entry.note,
        });
    }
    let text = read_source(spec)?;
    let trimmed = text.trim();
    let poly = if trimmed.starts_with('[') {
        let value: serde_json::Value = serde_json::from_str(trimmed)
            .map_err(|e| CliError::input(format!("{spec}: {e}")))?;
        LaurentPoly::from_json(&value).map_err(|e| CliError::input(format!("{spec}: {e}")))?
    } else {
        parse_poly(trimmed).map_err(|e| CliError::input(format!("{spec}: {e}")))?
    };
    Ok(PolyInput { poly, signature: None, note: None })
}
