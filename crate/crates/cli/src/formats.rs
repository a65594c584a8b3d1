//! Reading and writing squares in the three supported layouts.

use clap::ValueEnum;
use lpp_core::lpp::LatinSquare;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub fn render_square(s: &LatinSquare, format: Format) -> String {
    match format {
        Format::Text => s.to_text(),
        Format::Csv => s.to_csv(),
        Format::Json => to_json_line(s),
    }
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string(value).expect("serializable");
    out.push('\n');
    out
}

/// What a square file contained: one grid, or two grids with an optional
/// orthogonality claim.
#[derive(Debug)]
pub struct Grids {
    pub grids: Vec<Vec<Vec<u32>>>,
    pub claimed_orthogonal: Option<bool>,
}

fn grid_from_json(v: &Value) -> Result<Vec<Vec<u32>>, String> {
    let cells = v.get("cells").unwrap_or(v);
    serde_json::from_value(cells.clone()).map_err(|e| format!("bad cells: {e}"))
}

/// Accepts a square or a pair in JSON, or blocks of text/CSV rows separated
/// by blank lines. Lines starting with `#` are comments. The grids are not
/// checked for being Latin.
pub fn parse_grids(text: &str) -> Result<Grids, String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| format!("invalid JSON: {e}"))?;
        if let (Some(a), Some(b)) = (v.get("first"), v.get("second")) {
            return Ok(Grids {
                grids: vec![grid_from_json(a)?, grid_from_json(b)?],
                claimed_orthogonal: v.get("orthogonal").and_then(Value::as_bool),
            });
        }
        return Ok(Grids {
            grids: vec![grid_from_json(&v)?],
            claimed_orthogonal: None,
        });
    }

    let mut grids: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut current: Vec<Vec<u32>> = Vec::new();
    let mut claimed_orthogonal = None;
    for line in text.lines().map(str::trim) {
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("orthogonal:") {
                claimed_orthogonal = rest.split_whitespace().next().and_then(|w| w.parse().ok());
            }
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                grids.push(std::mem::take(&mut current));
            }
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| format!("bad entry {t:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        current.push(row);
    }
    if !current.is_empty() {
        grids.push(current);
    }
    if grids.is_empty() || grids.len() > 2 {
        return Err(format!("expected one or two squares, found {}", grids.len()));
    }
    Ok(Grids {
        grids,
        claimed_orthogonal,
    })
}
