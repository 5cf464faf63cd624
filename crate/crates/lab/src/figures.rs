//! Bound-curve tables for the critical exponent in dimensions 1 and 2.

use riesz_core::norms::{bound_table, default_bound_abscissae, BoundTable};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::formats::{exponent, fmt_num};

pub const CSV_HEADER: &str = "q,upper,lower,upper_source,lower_source";

pub fn figure_table(d: u32) -> Result<BoundTable> {
    if !(d == 1 || d == 2) {
        return Err(LabError::invalid(format!(
            "figure tables exist for d = 1, 2, not {d}"
        )));
    }
    Ok(bound_table(d, &default_bound_abscissae())?)
}

pub fn figure_csv(table: &BoundTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_num(r.q),
            fmt_num(r.upper),
            fmt_num(r.lower),
            r.upper_source,
            r.lower_source
        ));
    }
    out
}

#[derive(Serialize)]
struct RowJson {
    #[serde(with = "exponent")]
    q: f64,
    upper: f64,
    lower: f64,
    upper_source: &'static str,
    lower_source: &'static str,
}

pub fn figure_json(table: &BoundTable) -> String {
    let rows: Vec<RowJson> = table
        .rows
        .iter()
        .map(|r| RowJson {
            q: r.q,
            upper: r.upper,
            lower: r.lower,
            upper_source: r.upper_source,
            lower_source: r.lower_source,
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "d": table.d, "rows": rows }))
        .expect("plain data serializes")
}
