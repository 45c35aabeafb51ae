//! File formats. Every file starts with a header line
//!
//! ```text
//! # etorus-v1 kind=samples family=C rank=2 M=4 j=1
//! ```
//!
//! followed by a CSV table (column-name row, then one row per record) or,
//! for JSON, an object `{"header": {...}, "columns": [...], "rows": [[...]]}`
//! carrying the same fields.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use etorus::{Complex64, Family, GridTag, Part, SimpleType};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

pub const VERSION: &str = "etorus-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Samples,
    Coefficients,
    Points,
    Weights,
    Mesh,
    Evaluations,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Samples => "samples",
            Kind::Coefficients => "coefficients",
            Kind::Points => "points",
            Kind::Weights => "weights",
            Kind::Mesh => "mesh",
            Kind::Evaluations => "evaluations",
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "samples" => Kind::Samples,
            "coefficients" => Kind::Coefficients,
            "points" => Kind::Points,
            "weights" => Kind::Weights,
            "mesh" => Kind::Mesh,
            "evaluations" => Kind::Evaluations,
            other => return Err(format!("unknown kind '{other}'")),
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Explicit choice first, then the file extension, then CSV.
    pub fn resolve(explicit: Option<Format>, path: Option<&Path>) -> Format {
        explicit.unwrap_or_else(|| {
            match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
                _ => Format::Csv,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub kind: Kind,
    pub tag: GridTag,
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: Kind, tag: GridTag) -> Self {
        Self {
            kind,
            tag,
            extra: Vec::new(),
        }
    }

    fn fields(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("kind".to_string(), self.kind.to_string()),
            ("family".to_string(), self.tag.ty.family().to_string()),
            ("rank".to_string(), self.tag.ty.rank().to_string()),
            ("M".to_string(), self.tag.level.to_string()),
            ("j".to_string(), self.tag.j.to_string()),
        ];
        v.extend(self.extra.iter().cloned());
        v
    }

    pub fn line(&self) -> String {
        let mut s = format!("# {VERSION}");
        for (k, v) in self.fields() {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }

    pub fn parse_line(line: &str) -> Result<Self, String> {
        let rest = line
            .trim_end()
            .strip_prefix('#')
            .ok_or_else(|| "missing '# etorus-v1' header line".to_string())?;
        let mut parts = rest.split_whitespace();
        match parts.next() {
            Some(VERSION) => {}
            Some(other) => return Err(format!("unsupported format version '{other}'")),
            None => return Err("empty header line".into()),
        }
        let mut pairs = Vec::new();
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| format!("bad header field '{p}'"))?;
            pairs.push((k.to_string(), v.to_string()));
        }
        Self::from_pairs(pairs)
    }

    fn from_pairs(pairs: Vec<(String, String)>) -> Result<Self, String> {
        let mut kind = None;
        let mut family = None;
        let mut rank = None;
        let mut level = None;
        let mut j = None;
        let mut extra = Vec::new();
        for (k, v) in pairs {
            let bad = |what: &str| format!("bad {what} '{v}' in header");
            match k.as_str() {
                "kind" => kind = Some(v.parse::<Kind>()?),
                "family" => family = Some(v.parse::<Family>()?),
                "rank" => rank = Some(v.parse::<usize>().map_err(|_| bad("rank"))?),
                "M" => level = Some(v.parse::<i64>().map_err(|_| bad("M"))?),
                "j" => j = Some(v.parse::<usize>().map_err(|_| bad("j"))?),
                _ => extra.push((k, v)),
            }
        }
        let missing = |f: &str| format!("header lacks '{f}'");
        let family = family.ok_or_else(|| missing("family"))?;
        let rank = rank.ok_or_else(|| missing("rank"))?;
        let ty = SimpleType::new(family, rank).map_err(|e| e.to_string())?;
        Ok(Self {
            kind: kind.ok_or_else(|| missing("kind"))?,
            tag: GridTag {
                ty,
                level: level.ok_or_else(|| missing("M"))?,
                j: j.ok_or_else(|| missing("j"))?,
            },
            extra,
        })
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("version".into(), json!(VERSION));
        for (k, v) in self.fields() {
            let value = match k.as_str() {
                "rank" | "M" | "j" => v
                    .parse::<i64>()
                    .map(Value::from)
                    .unwrap_or(Value::String(v)),
                _ => Value::String(v),
            };
            m.insert(k, value);
        }
        Value::Object(m)
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        let obj = v.as_object().ok_or("header is not an object")?;
        match obj.get("version").and_then(Value::as_str) {
            Some(VERSION) => {}
            Some(other) => return Err(format!("unsupported format version '{other}'")),
            None => return Err("header lacks 'version'".into()),
        }
        let pairs = obj
            .iter()
            .filter(|(k, _)| k.as_str() != "version")
            .map(|(k, v)| {
                let s = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), s)
            })
            .collect();
        Self::from_pairs(pairs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // 17 significant digits round-trip every f64
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn write_table(table: &Table, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", table.header.line())?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv))?;
            }
            w.flush()
        }
        Format::Json => {
            // one row per line keeps large files diff-able
            writeln!(out, "{{")?;
            writeln!(out, "  \"header\": {},", table.header.to_json())?;
            writeln!(out, "  \"columns\": {},", json!(table.columns))?;
            writeln!(out, "  \"rows\": [")?;
            for (i, row) in table.rows.iter().enumerate() {
                let cells = Value::Array(row.iter().map(Cell::json).collect());
                let sep = if i + 1 == table.rows.len() { "" } else { "," };
                writeln!(out, "    {cells}{sep}")?;
            }
            writeln!(out, "  ]")?;
            writeln!(out, "}}")
        }
    }
}

/// A parsed file before any typing of the cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn malformed(path: &Path, row: usize, msg: impl Into<String>) -> CliError {
    CliError::Malformed {
        path: path.to_path_buf(),
        row,
        msg: msg.into(),
    }
}

pub fn read_table(text: &str, format: Format, path: &Path) -> CliResult<RawTable> {
    match format {
        Format::Csv => read_csv(text, path),
        Format::Json => read_json(text, path),
    }
}

fn read_csv(text: &str, path: &Path) -> CliResult<RawTable> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    let header =
        Header::parse_line(first).map_err(|e| malformed(path, 0, format!("header: {e}")))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(body.as_bytes());
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| malformed(path, 0, format!("column names: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if columns.is_empty() || columns.iter().all(String::is_empty) {
        return Err(malformed(path, 0, "missing column-name row"));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| malformed(path, i + 1, e.to_string()))?;
        rows.push(rec.iter().map(|s| s.trim().to_string()).collect());
    }
    // a cut inside the last number still parses, so an unterminated final
    // row is treated as truncation
    if !rows.is_empty() && !text.ends_with('\n') {
        return Err(malformed(
            path,
            rows.len(),
            "last row lacks its line terminator; file looks truncated",
        ));
    }
    Ok(RawTable {
        header,
        columns,
        rows,
    })
}

fn read_json(text: &str, path: &Path) -> CliResult<RawTable> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| malformed(path, 0, format!("invalid JSON: {e}")))?;
    let header = Header::from_json(&doc["header"])
        .map_err(|e| malformed(path, 0, format!("header: {e}")))?;
    let columns = doc["columns"]
        .as_array()
        .and_then(|a| {
            a.iter()
                .map(|c| c.as_str().map(str::to_string))
                .collect::<Option<Vec<_>>>()
        })
        .ok_or_else(|| malformed(path, 0, "'columns' must be an array of strings"))?;
    let rows = doc["rows"]
        .as_array()
        .ok_or_else(|| malformed(path, 0, "'rows' must be an array"))?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let cells = r
                .as_array()
                .ok_or_else(|| malformed(path, i + 1, "row is not an array"))?;
            cells
                .iter()
                .map(|c| match c {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(malformed(path, i + 1, format!("unsupported cell {c}"))),
                })
                .collect()
        })
        .collect::<CliResult<Vec<Vec<String>>>>()?;
    Ok(RawTable {
        header,
        columns,
        rows,
    })
}

/// Samples on `F^e_M` or coefficients on `Lambda^e_M`: barycentric label,
/// side, integer weight (`eps` or `h_dual`) and a complex value.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub bary: Vec<i64>,
    pub side: Part,
    pub weight: u64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFile {
    pub header: Header,
    pub rows: Vec<LabeledRow>,
}

pub fn labeled_columns(kind: Kind, rank: usize) -> Vec<String> {
    let (prefix, weight, re, im) = match kind {
        Kind::Coefficients | Kind::Weights => ("t", "h_dual", "c_re", "c_im"),
        _ => ("s", "eps", "value_re", "value_im"),
    };
    let mut cols: Vec<String> = (0..=rank).map(|i| format!("{prefix}{i}")).collect();
    cols.push("side".into());
    cols.push(weight.into());
    if matches!(kind, Kind::Samples | Kind::Coefficients) {
        cols.push(re.into());
        cols.push(im.into());
    }
    cols
}

impl LabeledFile {
    pub fn to_table(&self) -> Table {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row: Vec<Cell> = r.bary.iter().map(|&s| Cell::Int(s)).collect();
                row.push(Cell::Text(r.side.label().into()));
                row.push(Cell::Int(r.weight as i64));
                row.push(Cell::Float(r.value.re));
                row.push(Cell::Float(r.value.im));
                row
            })
            .collect();
        Table {
            header: self.header.clone(),
            columns: labeled_columns(self.header.kind, self.header.tag.ty.rank()),
            rows,
        }
    }

    pub fn from_raw(raw: RawTable, expected: Kind, path: &Path) -> CliResult<Self> {
        if raw.header.kind != expected {
            return Err(malformed(
                path,
                0,
                format!("expected a {expected} file, found kind={}", raw.header.kind),
            ));
        }
        let n = raw.header.tag.ty.rank();
        let columns = labeled_columns(expected, n);
        if raw.columns != columns {
            return Err(malformed(
                path,
                0,
                format!("column names {:?}, expected {:?}", raw.columns, columns),
            ));
        }
        let rows = raw
            .rows
            .iter()
            .enumerate()
            .map(|(i, cells)| {
                parse_labeled_row(cells, n).map_err(|msg| malformed(path, i + 1, msg))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Self {
            header: raw.header,
            rows,
        })
    }
}

fn parse_labeled_row(cells: &[String], rank: usize) -> Result<LabeledRow, String> {
    let width = rank + 5;
    if cells.len() != width {
        return Err(format!("expected {width} fields, found {}", cells.len()));
    }
    let bary = cells[..=rank]
        .iter()
        .map(|c| c.parse::<i64>().map_err(|_| format!("bad integer '{c}'")))
        .collect::<Result<Vec<_>, _>>()?;
    let side = Part::from_label(&cells[rank + 1])
        .ok_or_else(|| format!("bad side '{}'", cells[rank + 1]))?;
    let weight = cells[rank + 2]
        .parse::<u64>()
        .map_err(|_| format!("bad integer '{}'", cells[rank + 2]))?;
    let float = |c: &String| -> Result<f64, String> {
        let v = c.parse::<f64>().map_err(|_| format!("bad number '{c}'"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value '{c}'"))
        }
    };
    Ok(LabeledRow {
        bary,
        side,
        weight,
        value: Complex64::new(float(&cells[rank + 3])?, float(&cells[rank + 4])?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(kind: Kind) -> Header {
        Header::new(
            kind,
            GridTag {
                ty: SimpleType::new(Family::C, 2).unwrap(),
                level: 4,
                j: 1,
            },
        )
    }

    #[test]
    fn header_round_trip() {
        let mut h = header(Kind::Mesh);
        h.extra.push(("resolution".into(), "16".into()));
        assert_eq!(
            h.line(),
            "# etorus-v1 kind=mesh family=C rank=2 M=4 j=1 resolution=16"
        );
        assert_eq!(Header::parse_line(&h.line()).unwrap(), h);
        assert_eq!(Header::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn header_errors() {
        assert!(Header::parse_line("family=C").is_err());
        assert!(Header::parse_line("# etorus-v0 kind=samples").is_err());
        assert!(Header::parse_line("# etorus-v1 kind=samples family=D rank=3 M=1 j=1").is_err());
        assert!(Header::parse_line("# etorus-v1 kind=samples family=C rank=2 j=1").is_err());
    }

    #[test]
    fn labeled_round_trip_both_formats() {
        let file = LabeledFile {
            header: header(Kind::Samples),
            rows: vec![
                LabeledRow {
                    bary: vec![4, 0, 0],
                    side: Part::Base,
                    weight: 1,
                    value: Complex64::new(0.1, -1.0 / 3.0),
                },
                LabeledRow {
                    bary: vec![1, 1, 1],
                    side: Part::Reflected,
                    weight: 4,
                    value: Complex64::new(f64::MIN_POSITIVE, 1e300),
                },
            ],
        };
        for format in [Format::Csv, Format::Json] {
            let mut buf = Vec::new();
            write_table(&file.to_table(), format, &mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            let raw = read_table(&text, format, Path::new("mem")).unwrap();
            assert_eq!(
                LabeledFile::from_raw(raw, Kind::Samples, Path::new("mem")).unwrap(),
                file
            );
        }
    }

    #[test]
    fn generic_table_round_trip() {
        let table = Table {
            header: header(Kind::Mesh),
            columns: vec!["u".into(), "side".into(), "value_re".into()],
            rows: vec![
                vec![
                    Cell::Float(0.1),
                    Cell::Text("F".into()),
                    Cell::Float(-2.5e-17),
                ],
                vec![Cell::Int(-3), Cell::Text("rjF".into()), Cell::Float(1.0)],
            ],
        };
        for format in [Format::Csv, Format::Json] {
            let mut buf = Vec::new();
            write_table(&table, format, &mut buf).unwrap();
            let raw =
                read_table(std::str::from_utf8(&buf).unwrap(), format, Path::new("mem")).unwrap();
            assert_eq!(raw.header, table.header);
            assert_eq!(raw.columns, table.columns);
            for (r, t) in raw.rows.iter().zip(&table.rows) {
                for (cell, orig) in r.iter().zip(t) {
                    match orig {
                        Cell::Int(v) => assert_eq!(cell.parse::<i64>().unwrap(), *v),
                        Cell::Float(v) => assert_eq!(cell.parse::<f64>().unwrap(), *v),
                        Cell::Text(v) => assert_eq!(cell, v),
                    }
                }
            }
        }
    }

    #[test]
    fn malformed_row_reports_number() {
        let text = "# etorus-v1 kind=samples family=C rank=2 M=4 j=1\ns0,s1,s2,side,eps,value_re,value_im\n4,0,0,F,1,1,0\n3,1,0,F,4,x,0\n";
        let raw = read_table(text, Format::Csv, Path::new("f.csv")).unwrap();
        match LabeledFile::from_raw(raw, Kind::Samples, Path::new("f.csv")) {
            Err(CliError::Malformed { row, .. }) => assert_eq!(row, 2),
            other => panic!("{other:?}"),
        }
    }
}
