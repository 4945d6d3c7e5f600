//! Portfolio ingestion (CSV/JSON) and table emission (TSV/CSV/JSON).
//!
//! Two input forms, told apart by the CSV header or the JSON keys:
//!
//! * wide: `author,citations` with semicolon-separated counts, `"4;2;1"`;
//! * summary: `author,P,i,eta` with an optional trailing `h`.
//!
//! Emitted tables carry a second row giving each column's dimension.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::analytics::{
    AnalyticsTable, CorrelationMatrix, Origin, PortfolioSummary, SummaryTriple,
};
use crate::error::{Error, Location, Result};
use crate::indicators::{CitationVector, MAX_COUNT};
use crate::scalar::Scalar;

pub const WIDE_HEADER: [&str; 2] = ["author", "citations"];
pub const SUMMARY_HEADER: [&str; 5] = ["author", "P", "i", "eta", "h"];

/// First cell of the dimension row in emitted tables.
pub const DIMENSION_ROW_LABEL: &str = "Dimensions";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Tsv,
    Csv,
    Json,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "json" => Ok(InputFormat::Json),
            other => Err(Error::domain(format!("unknown input format `{other}`"))),
        }
    }
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(TableFormat::Tsv),
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::domain(format!("unknown table format `{other}`"))),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Tsv => "tsv",
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputRecord {
    /// Citation counts in input order.
    Wide { author: String, citations: Vec<u64> },
    Summary {
        author: String,
        papers: u64,
        impact: f64,
        eta: f64,
        h: Option<u64>,
    },
}

impl InputRecord {
    pub fn author(&self) -> &str {
        match self {
            InputRecord::Wide { author, .. } | InputRecord::Summary { author, .. } => author,
        }
    }

    fn is_wide(&self) -> bool {
        matches!(self, InputRecord::Wide { .. })
    }

    pub fn to_portfolio(&self) -> Result<PortfolioSummary<f64>> {
        Ok(match self {
            InputRecord::Wide { author, citations } => {
                PortfolioSummary::raw(author.clone(), CitationVector::new(citations.clone())?)
            }
            InputRecord::Summary {
                author,
                papers,
                impact,
                eta,
                h,
            } => PortfolioSummary::summary(
                author.clone(),
                SummaryTriple::new(*papers, *impact, *eta, *h)?,
            ),
        })
    }
}

pub fn parse_input(bytes: &[u8], format: InputFormat) -> Result<Vec<InputRecord>> {
    match format {
        InputFormat::Csv => parse_csv(bytes),
        InputFormat::Json => parse_json(bytes),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Form {
    Wide,
    Summary { with_h: bool },
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::format(Location::Line(line), e.to_string())
}

fn parse_csv(bytes: &[u8]) -> Result<Vec<InputRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let form = if header == WIDE_HEADER {
        Form::Wide
    } else if header == SUMMARY_HEADER[..4] {
        Form::Summary { with_h: false }
    } else if header == SUMMARY_HEADER {
        Form::Summary { with_h: true }
    } else if header.iter().any(|h| h == "citations") && header.iter().any(|h| h == "P") {
        return Err(Error::MixedForm {
            location: Location::Line(1),
            message: "header mixes wide (`citations`) and summary (`P`) columns".into(),
        });
    } else {
        return Err(Error::format(
            Location::Line(1),
            format!(
                "unrecognised header `{}`; expected `{}` or `{}`",
                header.join(","),
                WIDE_HEADER.join(","),
                SUMMARY_HEADER.join(",")
            ),
        ));
    };

    let mut records = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(csv_error)?;
        let loc = Location::Line(rec.position().map_or(0, |p| p.line() as usize));
        let field = |i: usize| rec.get(i).unwrap_or("");
        let author = field(0).to_string();
        if author.is_empty() {
            return Err(Error::format(loc, "empty author label"));
        }
        records.push(match form {
            Form::Wide => InputRecord::Wide {
                author,
                citations: parse_counts(field(1), loc)?,
            },
            Form::Summary { with_h } => {
                let h = match field(4) {
                    "" => None,
                    s if with_h => Some(parse_count(s, loc)?),
                    _ => None,
                };
                summary_record(author, field(1), field(2), field(3), h, loc)?
            }
        });
    }
    Ok(records)
}

fn parse_count(token: &str, loc: Location) -> Result<u64> {
    let token = token.trim();
    match token.parse::<u64>() {
        Ok(c) if c <= MAX_COUNT => Ok(c),
        Ok(c) => Err(Error::format(loc, format!("count {c} exceeds {MAX_COUNT}"))),
        Err(_) if token.starts_with('-') && token[1..].parse::<u64>().is_ok() => {
            Err(Error::NegativeCount {
                location: loc,
                value: token.to_string(),
            })
        }
        Err(_) => Err(Error::format(
            loc,
            format!("`{token}` is not a non-negative integer count"),
        )),
    }
}

/// Parses a semicolon-separated count list such as `4;2;1`.
pub fn parse_citation_list(cell: &str) -> Result<Vec<u64>> {
    parse_counts(cell, Location::Line(1))
}

fn parse_counts(cell: &str, loc: Location) -> Result<Vec<u64>> {
    if cell.trim().is_empty() {
        return Err(Error::format(loc, "no citation counts"));
    }
    cell.split(';').map(|t| parse_count(t, loc)).collect()
}

fn summary_record(
    author: String,
    papers: &str,
    impact: &str,
    eta: &str,
    h: Option<u64>,
    loc: Location,
) -> Result<InputRecord> {
    let papers = papers
        .parse::<u64>()
        .map_err(|_| Error::format(loc, format!("P `{papers}` is not a positive integer")))?;
    let real = |name: &str, s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::format(loc, format!("{name} `{s}` is not a number")))
    };
    let impact = real("i", impact)?;
    let eta = real("eta", eta)?;
    SummaryTriple::new(papers, impact, eta, h).map_err(|e| Error::format(loc, e.to_string()))?;
    Ok(InputRecord::Summary {
        author,
        papers,
        impact,
        eta,
        h,
    })
}

fn parse_json(bytes: &[u8]) -> Result<Vec<InputRecord>> {
    let doc: Value = serde_json::from_slice(bytes)
        .map_err(|e| Error::format(Location::Line(e.line()), e.to_string()))?;
    let items = doc
        .as_array()
        .ok_or_else(|| Error::format(Location::Line(1), "expected a JSON array of records"))?;
    let mut records: Vec<InputRecord> = Vec::with_capacity(items.len());
    for (idx, item) in items.iter().enumerate() {
        let loc = Location::Record(idx + 1);
        let obj = item
            .as_object()
            .ok_or_else(|| Error::format(loc, "record is not an object"))?;
        let author = match obj.get("author") {
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            _ => return Err(Error::format(loc, "missing string `author`")),
        };
        let record = match (obj.get("citations"), obj.contains_key("P")) {
            (Some(_), true) => {
                return Err(Error::MixedForm {
                    location: loc,
                    message: "record has both `citations` and `P`".into(),
                })
            }
            (Some(c), false) => InputRecord::Wide {
                author,
                citations: json_counts(c, loc)?,
            },
            (None, true) => {
                let h = match obj.get("h") {
                    None | Some(Value::Null) => None,
                    Some(v) => Some(json_count(v, loc)?),
                };
                summary_record(
                    author,
                    &json_scalar(obj.get("P")),
                    &json_scalar(obj.get("i")),
                    &json_scalar(obj.get("eta")),
                    h,
                    loc,
                )?
            }
            (None, false) => {
                return Err(Error::format(loc, "record has neither `citations` nor `P`"))
            }
        };
        if let Some(first) = records.first() {
            if first.is_wide() != record.is_wide() {
                return Err(Error::MixedForm {
                    location: loc,
                    message: "wide and summary records in one file".into(),
                });
            }
        }
        records.push(record);
    }
    Ok(records)
}

fn json_scalar(v: Option<&Value>) -> String {
    match v {
        Some(Value::Number(n)) => n.to_string(),
        Some(Value::String(s)) => s.clone(),
        _ => String::new(),
    }
}

fn json_count(v: &Value, loc: Location) -> Result<u64> {
    match v {
        Value::Number(n) => parse_count(&n.to_string(), loc),
        Value::String(s) => parse_count(s, loc),
        other => Err(Error::format(loc, format!("`{other}` is not a count"))),
    }
}

fn json_counts(v: &Value, loc: Location) -> Result<Vec<u64>> {
    match v {
        Value::Array(items) if !items.is_empty() => {
            items.iter().map(|x| json_count(x, loc)).collect()
        }
        Value::String(s) => parse_counts(s, loc),
        _ => Err(Error::format(
            loc,
            "`citations` must be a non-empty array of counts",
        )),
    }
}

/// Writes records back in the form they were read. All records must share
/// one form.
pub fn emit_records(records: &[InputRecord], format: InputFormat) -> Result<String> {
    if let Some(pos) = records
        .iter()
        .position(|r| r.is_wide() != records[0].is_wide())
    {
        return Err(Error::MixedForm {
            location: Location::Record(pos + 1),
            message: "cannot emit wide and summary records together".into(),
        });
    }
    match format {
        InputFormat::Json => {
            let items: Vec<Value> = records
                .iter()
                .map(|r| match r {
                    InputRecord::Wide { author, citations } => {
                        json!({ "author": author, "citations": citations })
                    }
                    InputRecord::Summary {
                        author,
                        papers,
                        impact,
                        eta,
                        h,
                    } => {
                        let mut m = Map::new();
                        m.insert("author".into(), json!(author));
                        m.insert("P".into(), json!(papers));
                        m.insert("i".into(), json!(impact));
                        m.insert("eta".into(), json!(eta));
                        if let Some(h) = h {
                            m.insert("h".into(), json!(h));
                        }
                        Value::Object(m)
                    }
                })
                .collect();
            Ok(serde_json::to_string_pretty(&items).expect("serialisable") + "\n")
        }
        InputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let wide = records.first().is_none_or(InputRecord::is_wide);
            let header: &[&str] = if wide { &WIDE_HEADER } else { &SUMMARY_HEADER };
            w.write_record(header).map_err(csv_error)?;
            for r in records {
                let row: Vec<String> = match r {
                    InputRecord::Wide { author, citations } => vec![
                        author.clone(),
                        citations
                            .iter()
                            .map(u64::to_string)
                            .collect::<Vec<_>>()
                            .join(";"),
                    ],
                    InputRecord::Summary {
                        author,
                        papers,
                        impact,
                        eta,
                        h,
                    } => vec![
                        author.clone(),
                        papers.to_string(),
                        impact.to_string(),
                        eta.to_string(),
                        h.map(|h| h.to_string()).unwrap_or_default(),
                    ],
                };
                w.write_record(&row).map_err(csv_error)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::domain(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
        }
    }
}

/// `precision: None` prints the shortest representation that round-trips.
pub fn format_number<T: Scalar>(v: T, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{v:.p$}"),
        None => format!("{v}"),
    }
}

fn json_number<T: Scalar>(v: T, precision: Option<usize>) -> Value {
    let x: f64 = format_number(v, precision).parse().unwrap_or(f64::NAN);
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn delimited(rows: &[Vec<String>], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        _ => rows.iter().map(|r| r.join("\t") + "\n").collect(),
    }
}

pub fn emit_table<T: Scalar>(
    table: &AnalyticsTable<T>,
    format: TableFormat,
    precision: Option<usize>,
) -> String {
    let columns: Vec<&str> = table.columns().collect();
    if format == TableFormat::Json {
        let rows: Vec<Value> = table
            .rows()
            .iter()
            .map(|row| {
                let mut m = Map::new();
                m.insert("author".into(), json!(row.label));
                for (name, cell) in columns.iter().zip(&row.cells) {
                    let mut c = Map::new();
                    c.insert(
                        "value".into(),
                        json_number(cell.value.magnitude(), precision),
                    );
                    c.insert("dimension".into(), json!(cell.value.dim().to_string()));
                    if cell.origin == Origin::Reconstructed {
                        c.insert("reconstructed".into(), json!(true));
                    }
                    m.insert(name.to_string(), Value::Object(c));
                }
                Value::Object(m)
            })
            .collect();
        return serde_json::to_string_pretty(&rows).expect("serialisable") + "\n";
    }

    let mut rows = vec![std::iter::once("author")
        .chain(columns.iter().copied())
        .map(str::to_string)
        .collect::<Vec<_>>()];
    if columns.is_empty() {
        return delimited(&rows, format);
    }
    rows.push(
        std::iter::once(DIMENSION_ROW_LABEL.to_string())
            .chain(table.column_dims().map(|d| d.to_string()))
            .collect(),
    );
    for row in table.rows() {
        rows.push(
            std::iter::once(row.label.clone())
                .chain(
                    row.cells
                        .iter()
                        .map(|c| format_number(c.value.magnitude(), precision)),
                )
                .collect(),
        );
    }
    delimited(&rows, format)
}

pub fn emit_matrix<T: Scalar>(
    m: &CorrelationMatrix<T>,
    format: TableFormat,
    precision: Option<usize>,
) -> String {
    if format == TableFormat::Json {
        let values: Vec<Vec<Value>> = m
            .values
            .iter()
            .map(|r| r.iter().map(|&v| json_number(v, precision)).collect())
            .collect();
        let doc = json!({ "columns": m.columns, "values": values });
        return serde_json::to_string_pretty(&doc).expect("serialisable") + "\n";
    }
    let mut rows = vec![std::iter::once("CORRELATION".to_string())
        .chain(m.columns.iter().cloned())
        .collect::<Vec<_>>()];
    for (name, r) in m.columns.iter().zip(&m.values) {
        rows.push(
            std::iter::once(name.clone())
                .chain(r.iter().map(|&v| format_number(v, precision)))
                .collect(),
        );
    }
    delimited(&rows, format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::AnalyticsTable;
    use crate::indicators::CitationVector;
    use crate::table1;
    use proptest::prelude::*;

    fn csv(text: &str) -> Result<Vec<InputRecord>> {
        parse_input(text.as_bytes(), InputFormat::Csv)
    }

    #[test]
    fn smallest_wide_file() {
        let r = csv("author,citations\nA,\"4;2;1\"\n").unwrap();
        assert_eq!(
            r,
            vec![InputRecord::Wide {
                author: "A".into(),
                citations: vec![4, 2, 1]
            }]
        );
    }

    #[test]
    fn summary_row() {
        let r = csv("author,P,i,eta,h\nLI YF,142,33.25,0.20,34\n").unwrap();
        assert_eq!(
            r,
            vec![InputRecord::Summary {
                author: "LI YF".into(),
                papers: 142,
                impact: 33.25,
                eta: 0.20,
                h: Some(34)
            }]
        );
        let r = csv("author,P,i,eta\nX,3,1.5,0.5\n").unwrap();
        assert!(matches!(r[0], InputRecord::Summary { h: None, .. }));
        let r = csv("author,P,i,eta,h\nX,3,1.5,0.5,\n").unwrap();
        assert!(matches!(r[0], InputRecord::Summary { h: None, .. }));
    }

    #[test]
    fn negative_count_reports_line() {
        assert_eq!(
            csv("author,citations\nA,\"4;-2;1\"\n").unwrap_err(),
            Error::NegativeCount {
                location: Location::Line(2),
                value: "-2".into()
            }
        );
    }

    #[test]
    fn format_errors() {
        assert!(matches!(
            csv("name,counts\nA,1\n"),
            Err(Error::Format {
                location: Location::Line(1),
                ..
            })
        ));
        assert!(matches!(
            csv("author,citations,P\nA,1,2\n"),
            Err(Error::MixedForm { .. })
        ));
        assert!(matches!(
            csv("author,citations\nA,\"1;x\"\nB,2\n"),
            Err(Error::Format {
                location: Location::Line(2),
                ..
            })
        ));
        assert!(matches!(
            csv("author,citations\nA,1\nB,\n"),
            Err(Error::Format {
                location: Location::Line(3),
                ..
            })
        ));
        assert!(matches!(
            csv("author,citations\nA,1,7\n"),
            Err(Error::Format {
                location: Location::Line(2),
                ..
            })
        ));
        assert!(matches!(
            csv("author,P,i,eta\nA,3,1.0,1.5\n"),
            Err(Error::Format {
                location: Location::Line(2),
                ..
            })
        ));
        assert!(matches!(
            csv("author,P,i,eta\nA,0,1.0,0.5\n"),
            Err(Error::Format {
                location: Location::Line(2),
                ..
            })
        ));
    }

    #[test]
    fn json_forms() {
        let r = parse_input(
            br#"[{"author":"A","citations":[4,2,1]},{"author":"B","citations":"3;3"}]"#,
            InputFormat::Json,
        )
        .unwrap();
        assert_eq!(r.len(), 2);
        let r = parse_input(
            br#"[{"author":"LI YF","P":142,"i":33.25,"eta":0.2,"h":34}]"#,
            InputFormat::Json,
        )
        .unwrap();
        assert!(matches!(
            r[0],
            InputRecord::Summary {
                papers: 142,
                h: Some(34),
                ..
            }
        ));
        assert!(matches!(
            parse_input(
                br#"[{"author":"A","citations":[1]},{"author":"B","P":1,"i":1,"eta":1}]"#,
                InputFormat::Json
            ),
            Err(Error::MixedForm {
                location: Location::Record(2),
                ..
            })
        ));
        assert!(matches!(
            parse_input(br#"[{"author":"A","citations":[1,-3]}]"#, InputFormat::Json),
            Err(Error::NegativeCount {
                location: Location::Record(1),
                ..
            })
        ));
        assert!(matches!(
            parse_input(b"[\n{\"author\": }", InputFormat::Json),
            Err(Error::Format {
                location: Location::Line(2),
                ..
            })
        ));
        assert!(parse_input(br#"{"author":"A"}"#, InputFormat::Json).is_err());
    }

    fn small_table() -> AnalyticsTable<f64> {
        let p = PortfolioSummary::raw("A", CitationVector::new(vec![4, 2, 1]).unwrap());
        AnalyticsTable::from_portfolios(&[p], Some(&["P", "i", "eta", "h", "z", "i_E", "C"]))
            .unwrap()
    }

    #[test]
    fn tsv_has_dimension_row() {
        let out = emit_table(&small_table(), TableFormat::Tsv, Some(2));
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "author\tP\ti\teta\th\tz\ti_E\tC");
        assert_eq!(
            lines[1],
            "Dimensions\t[P]\t[P]\tdimensionless\t[P]\t[P]\t[P^3/2]\t[P^2]"
        );
        assert_eq!(lines[2], "A\t3.00\t2.33\t0.78\t2.00\t2.33\t4.58\t7.00");
    }

    #[test]
    fn empty_column_selection_is_header_only() {
        let t = small_table().select(&[]).unwrap();
        assert_eq!(emit_table(&t, TableFormat::Tsv, Some(2)), "author\n");
        assert_eq!(emit_table(&t, TableFormat::Csv, Some(2)), "author\n");
    }

    #[test]
    fn json_cells_carry_value_and_dimension() {
        let out = emit_table(&table1::reconstructed_table(), TableFormat::Json, Some(2));
        let v: Value = serde_json::from_str(&out).unwrap();
        let first = &v[0];
        assert_eq!(first["author"], "LI YF");
        assert_eq!(first["P"]["value"], 142.0);
        assert_eq!(first["i_E"]["dimension"], "[P^3/2]");
        assert_eq!(first["i_E"]["reconstructed"], true);
        assert!(first["h"].get("reconstructed").is_none());
    }

    #[test]
    fn full_precision_reparses_exactly() {
        let t = small_table();
        let out = emit_table(&t, TableFormat::Csv, None);
        let row: Vec<f64> = out
            .lines()
            .nth(2)
            .unwrap()
            .split(',')
            .skip(1)
            .map(|s| s.parse().unwrap())
            .collect();
        let src: Vec<f64> = t.rows()[0]
            .cells
            .iter()
            .map(|c| c.value.magnitude())
            .collect();
        for (a, b) in row.iter().zip(&src) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn matrix_output() {
        let m = crate::analytics::pearson_matrix(&table1::printed_table(), &["P", "h"]).unwrap();
        let out = emit_matrix(&m, TableFormat::Tsv, Some(2));
        assert_eq!(out, "CORRELATION\tP\th\nP\t1.00\t0.74\nh\t0.74\t1.00\n");
    }

    fn wide_records() -> impl Strategy<Value = Vec<InputRecord>> {
        prop::collection::vec(
            (
                "[A-Za-z][A-Za-z ,\"]{0,12}[A-Za-z]",
                prop::collection::vec(0u64..100_000, 1..20),
            ),
            1..8,
        )
        .prop_map(|rows| {
            rows.into_iter()
                .map(|(author, citations)| InputRecord::Wide { author, citations })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn wide_form_round_trips(records in wide_records()) {
            for fmt in [InputFormat::Csv, InputFormat::Json] {
                let text = emit_records(&records, fmt).unwrap();
                let back = parse_input(text.as_bytes(), fmt).unwrap();
                prop_assert_eq!(&back, &records);
            }
        }
    }
}
