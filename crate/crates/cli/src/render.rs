//! Deterministic CSV and JSON rendering. All numeric cells carry 15
//! significant digits in CSV; JSON uses shortest-round-trip f64 encoding with
//! alphabetically ordered keys so that parse → re-serialize is byte-stable.

use serde_json::Value;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

/// 15 significant digits, scientific notation; negative zero prints as zero.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

fn csv_escape(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn render_csv(header: &[&str], rows: &[Vec<Cell>], trailer: &[(String, f64)]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Int(v) => v.to_string(),
                Cell::Num(v) => fmt_num(*v),
                Cell::Text(v) => csv_escape(v),
                Cell::Bool(v) => v.to_string(),
                Cell::Empty => String::new(),
            })
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    for (name, value) in trailer {
        out.push_str(&format!("# {name},{}\n", fmt_num(*value)));
    }
    out
}

/// serde_json's default map is sorted, which is exactly what byte-stable
/// round-trips need; keep a single pretty-printing entry point.
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}
