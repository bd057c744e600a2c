//! Sweep output formats: CSV and JSON.
//!
//! Both formats carry the same content — a metadata block recording exactly
//! how the numbers were produced (resolved parameters, engines, seed, trials,
//! build id, timestamp), then one row per grid point. Emission is
//! deterministic: the same result always serializes to the same bytes, and
//! for both formats `emit(parse(emit(x))) == emit(x)` byte for byte.
//!
//! Floats in CSV cells are printed as `{:.16e}` (17 significant digits), which
//! round-trips every finite `f64` exactly. JSON numbers use serde_json's
//! shortest round-tripping form. Missing values are empty CSV cells and JSON
//! `null`s.

use crate::sweep::{Metric, SweepRow};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Output encodings supported by `sweep --out`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Infer the format from a file extension (`.csv` / `.json`).
    pub fn from_extension(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// Provenance block emitted ahead of the rows.
///
/// `config` is the resolved parameter set in SI units (per m², watts, Hz) —
/// the exact values the engines computed with, not the human-unit input file.
/// `seed` and `trials` are `None` when no Monte Carlo engine ran.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub build_id: String,
    pub generated_utc: String,
    pub metric: String,
    pub param: String,
    pub engines: String,
    pub t_db: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub config: Value,
}

/// `{:.16e}`: 17 significant digits, enough to reproduce any finite `f64`
/// exactly on parse.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// UTC timestamp for metadata, `YYYY-MM-DDTHH:MM:SSZ`. `SOURCE_DATE_EPOCH`
/// (seconds since the epoch) overrides the clock so outputs can be
/// reproduced bit for bit.
pub fn timestamp_utc() -> String {
    let dt = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    dt.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn parse_opt_float(s: &str, what: &str) -> Result<Option<f64>, String> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|e| format!("bad {what} value {s:?}: {e}"))
}

/// Column names after the leading parameter column, in emission order.
fn value_columns(metric: Metric) -> [String; 9] {
    let p = metric.column_prefix();
    [
        format!("{p}_analytic"),
        format!("{p}_mc"),
        format!("{p}_mc_ci"),
        format!("{p}_mc_exact"),
        format!("{p}_mc_exact_ci"),
        "k_s0_min".to_string(),
        "k_s0_max".to_string(),
        "engine_path".to_string(),
        "mc_resampled".to_string(),
    ]
}

/// Render the result as CSV: one `#`-prefixed metadata line (a single JSON
/// object), the header, then the rows. An empty sweep yields metadata plus
/// the header only.
pub fn to_csv(meta: &Metadata, metric: Metric, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(&serde_json::to_string(meta).expect("metadata serializes"));
    out.push('\n');
    out.push_str(&meta.param);
    for col in value_columns(metric) {
        out.push(',');
        out.push_str(&col);
    }
    out.push('\n');
    for row in rows {
        let fields = [
            format_float(row.value),
            opt_float(row.analytic),
            opt_float(row.mc),
            opt_float(row.mc_ci),
            opt_float(row.mc_exact),
            opt_float(row.mc_exact_ci),
            opt_float(row.k_s0_min),
            opt_float(row.k_s0_max),
            row.engine_path.clone().unwrap_or_default(),
            row.mc_resampled.map(|n| n.to_string()).unwrap_or_default(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Parse a CSV document produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<(Metadata, Metric, Vec<SweepRow>), String> {
    let mut lines = text.lines();
    let meta_line = lines.next().ok_or("empty document")?;
    let meta_json = meta_line
        .strip_prefix("# ")
        .ok_or("first line is not a '# ' metadata comment")?;
    let meta: Metadata =
        serde_json::from_str(meta_json).map_err(|e| format!("bad metadata line: {e}"))?;
    let metric = Metric::from_name(&meta.metric)
        .ok_or_else(|| format!("unknown metric {:?} in metadata", meta.metric))?;
    let header = lines.next().ok_or("missing header line")?;
    let expected = {
        let mut cols = vec![meta.param.clone()];
        cols.extend(value_columns(metric));
        cols.join(",")
    };
    if header != expected {
        return Err(format!("header {header:?} does not match expected {expected:?}"));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(format!("row {i}: expected 10 fields, got {}", fields.len()));
        }
        rows.push(SweepRow {
            value: fields[0]
                .parse::<f64>()
                .map_err(|e| format!("row {i}: bad value {:?}: {e}", fields[0]))?,
            analytic: parse_opt_float(fields[1], "analytic")?,
            mc: parse_opt_float(fields[2], "mc")?,
            mc_ci: parse_opt_float(fields[3], "mc_ci")?,
            mc_exact: parse_opt_float(fields[4], "mc_exact")?,
            mc_exact_ci: parse_opt_float(fields[5], "mc_exact_ci")?,
            k_s0_min: parse_opt_float(fields[6], "k_s0_min")?,
            k_s0_max: parse_opt_float(fields[7], "k_s0_max")?,
            engine_path: if fields[8].is_empty() {
                None
            } else {
                Some(fields[8].to_string())
            },
            mc_resampled: if fields[9].is_empty() {
                None
            } else {
                Some(
                    fields[9]
                        .parse::<u64>()
                        .map_err(|e| format!("row {i}: bad mc_resampled {:?}: {e}", fields[9]))?,
                )
            },
        });
    }
    Ok((meta, metric, rows))
}

fn opt_value(v: Option<f64>) -> Value {
    match v {
        Some(x) => json!(x),
        None => Value::Null,
    }
}

fn row_value(meta: &Metadata, metric: Metric, row: &SweepRow) -> Value {
    let cols = value_columns(metric);
    let mut obj = serde_json::Map::new();
    obj.insert(meta.param.clone(), json!(row.value));
    obj.insert(cols[0].clone(), opt_value(row.analytic));
    obj.insert(cols[1].clone(), opt_value(row.mc));
    obj.insert(cols[2].clone(), opt_value(row.mc_ci));
    obj.insert(cols[3].clone(), opt_value(row.mc_exact));
    obj.insert(cols[4].clone(), opt_value(row.mc_exact_ci));
    obj.insert(cols[5].clone(), opt_value(row.k_s0_min));
    obj.insert(cols[6].clone(), opt_value(row.k_s0_max));
    obj.insert(
        cols[7].clone(),
        row.engine_path.clone().map(Value::String).unwrap_or(Value::Null),
    );
    obj.insert(
        cols[8].clone(),
        row.mc_resampled.map(|n| json!(n)).unwrap_or(Value::Null),
    );
    Value::Object(obj)
}

/// Render the result as a single JSON object `{ "metadata": ..., "rows": [...] }`.
pub fn to_json(meta: &Metadata, metric: Metric, rows: &[SweepRow]) -> String {
    let rows: Vec<Value> = rows.iter().map(|r| row_value(meta, metric, r)).collect();
    let doc = json!({ "metadata": meta, "rows": rows });
    let mut s = serde_json::to_string(&doc).expect("document serializes");
    s.push('\n');
    s
}

fn field_opt_f64(obj: &serde_json::Map<String, Value>, key: &str) -> Result<Option<f64>, String> {
    match obj.get(key) {
        None => Err(format!("row is missing column {key:?}")),
        Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| format!("column {key:?} holds a non-number: {v}")),
    }
}

/// Parse a JSON document produced by [`to_json`].
pub fn parse_json(text: &str) -> Result<(Metadata, Metric, Vec<SweepRow>), String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("bad JSON: {e}"))?;
    let meta: Metadata = serde_json::from_value(
        doc.get("metadata").cloned().ok_or("missing \"metadata\" key")?,
    )
    .map_err(|e| format!("bad metadata object: {e}"))?;
    let metric = Metric::from_name(&meta.metric)
        .ok_or_else(|| format!("unknown metric {:?} in metadata", meta.metric))?;
    let cols = value_columns(metric);
    let rows_v = doc
        .get("rows")
        .and_then(Value::as_array)
        .ok_or("missing \"rows\" array")?;
    let mut rows = Vec::new();
    for (i, rv) in rows_v.iter().enumerate() {
        let obj = rv
            .as_object()
            .ok_or_else(|| format!("row {i} is not an object"))?;
        rows.push(SweepRow {
            value: field_opt_f64(obj, &meta.param)?
                .ok_or_else(|| format!("row {i}: null parameter value"))?,
            analytic: field_opt_f64(obj, &cols[0])?,
            mc: field_opt_f64(obj, &cols[1])?,
            mc_ci: field_opt_f64(obj, &cols[2])?,
            mc_exact: field_opt_f64(obj, &cols[3])?,
            mc_exact_ci: field_opt_f64(obj, &cols[4])?,
            k_s0_min: field_opt_f64(obj, &cols[5])?,
            k_s0_max: field_opt_f64(obj, &cols[6])?,
            engine_path: match obj.get(&cols[7]) {
                Some(Value::String(s)) => Some(s.clone()),
                Some(Value::Null) | None => None,
                Some(v) => return Err(format!("row {i}: engine_path is not a string: {v}")),
            },
            mc_resampled: match obj.get(&cols[8]) {
                Some(Value::Null) | None => None,
                Some(v) => Some(
                    v.as_u64()
                        .ok_or_else(|| format!("row {i}: mc_resampled is not a u64: {v}"))?,
                ),
            },
        });
    }
    Ok((meta, metric, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_meta() -> Metadata {
        Metadata {
            tool: "hccn 0.1.0".into(),
            build_id: "abc1234".into(),
            generated_utc: "2026-01-02T03:04:05Z".into(),
            metric: "coverage".into(),
            param: "T_dB".into(),
            engines: "both".into(),
            t_db: None,
            trials: Some(100),
            seed: Some(7),
            config: json!({"lambda_b": 4e-5, "p_b": 100.0}),
        }
    }

    fn sample_rows() -> Vec<SweepRow> {
        vec![
            SweepRow {
                value: -10.0,
                analytic: Some(0.999_999_999_516_273_7),
                mc: Some(1.0),
                mc_ci: Some(0.0),
                mc_exact: Some(1.0),
                mc_exact_ci: Some(0.0),
                k_s0_min: Some(2.347),
                k_s0_max: Some(151.2),
                engine_path: Some("bell+large-k".into()),
                mc_resampled: Some(0),
            },
            SweepRow {
                value: 5.0,
                analytic: Some(0.417_789_922_303_223_15),
                mc: None,
                mc_ci: None,
                mc_exact: None,
                mc_exact_ci: None,
                k_s0_min: None,
                k_s0_max: None,
                engine_path: None,
                mc_resampled: None,
            },
        ]
    }

    #[test]
    fn float_formatting_round_trips_exactly() {
        for &v in &[
            0.0,
            -10.0,
            0.417_789_922_303_223_15,
            1.132_059_328_031_745_8e-3,
            f64::MIN_POSITIVE,
            -f64::MAX,
            1.0 + f64::EPSILON,
        ] {
            let s = format_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn csv_round_trips_byte_identically() {
        let meta = sample_meta();
        let rows = sample_rows();
        let first = to_csv(&meta, Metric::Coverage, &rows);
        let (m2, metric2, r2) = parse_csv(&first).unwrap();
        let second = to_csv(&m2, metric2, &r2);
        assert_eq!(first, second);
    }

    #[test]
    fn json_round_trips_byte_identically() {
        let meta = sample_meta();
        let rows = sample_rows();
        let first = to_json(&meta, Metric::Coverage, &rows);
        let (m2, metric2, r2) = parse_json(&first).unwrap();
        let second = to_json(&m2, metric2, &r2);
        assert_eq!(first, second);
    }

    #[test]
    fn empty_sweep_is_metadata_plus_header_only() {
        let meta = sample_meta();
        let csv = to_csv(&meta, Metric::Coverage, &[]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("# {"));
        assert_eq!(
            lines[1],
            "T_dB,p_c_analytic,p_c_mc,p_c_mc_ci,p_c_mc_exact,p_c_mc_exact_ci,\
             k_s0_min,k_s0_max,engine_path,mc_resampled"
        );
        let (_, _, rows) = parse_csv(&csv).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn rate_columns_use_the_rate_prefix() {
        let mut meta = sample_meta();
        meta.metric = "rate".into();
        meta.param = "lambda_U_per_km2".into();
        let csv = to_csv(&meta, Metric::Rate, &[]);
        assert!(csv.contains("lambda_U_per_km2,r_analytic,r_mc,r_mc_ci,r_mc_exact,r_mc_exact_ci"));
    }

    #[test]
    fn missing_values_become_empty_cells_and_nulls() {
        let meta = sample_meta();
        let rows = sample_rows();
        let csv = to_csv(&meta, Metric::Coverage, &rows);
        let last = csv.lines().last().unwrap();
        assert!(last.ends_with(",,,,,,,,"), "trailing empties: {last:?}");
        let json = to_json(&meta, Metric::Coverage, &rows);
        assert!(json.contains("\"p_c_mc\":null"));
    }

    #[test]
    fn format_inference_reads_the_extension() {
        use std::path::Path;
        assert_eq!(Format::from_extension(Path::new("a/b.csv")), Some(Format::Csv));
        assert_eq!(Format::from_extension(Path::new("a/b.json")), Some(Format::Json));
        assert_eq!(Format::from_extension(Path::new("a/b.txt")), None);
        assert_eq!(Format::from_extension(Path::new("noext")), None);
    }

    #[test]
    fn corrupted_documents_are_rejected() {
        let meta = sample_meta();
        let rows = sample_rows();
        let csv = to_csv(&meta, Metric::Coverage, &rows);
        assert!(parse_csv(&csv.replace("# ", "")).is_err());
        assert!(parse_csv(&csv.replace("p_c_analytic", "oops")).is_err());
        let truncated: String = csv.lines().take(2).chain(["1.0,2.0"]).collect::<Vec<_>>().join("\n");
        assert!(parse_csv(&truncated).is_err());
        let json = to_json(&meta, Metric::Coverage, &rows);
        assert!(parse_json(&json.replace("\"rows\"", "\"rws\"")).is_err());
    }
}
