//! Space sources: CSV matrices, JSON descriptors and `kind:n` shorthand.
//!
//! CSV layout: the first row holds the labels, each following row one
//! matrix row.
//!
//! JSON layout:
//!
//! ```json
//! {"kind": "matrix", "data": {"labels": ["a", "b"], "matrix": [[0, 1], [1, 0]]}}
//! {"kind": "exp", "n": 4}
//! {"kind": "two_metric", "data": {"labels": [...], "sigma": [[[...]]]}}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    from_two_metric, gen_exp, gen_hybrid, gen_square_grid, DistanceMatrix, FiniteSpace,
    TwoMetricTable,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixData {
    Labelled {
        labels: Option<Vec<String>>,
        matrix: Vec<Vec<f64>>,
    },
    Bare(Vec<Vec<f64>>),
}

impl SpaceDescriptor {
    pub fn build(&self) -> Result<FiniteSpace> {
        let need_n = || {
            self.n
                .ok_or_else(|| Error::Malformed(format!("descriptor `{}` needs `n`", self.kind)))
        };
        let data = || {
            self.data
                .clone()
                .ok_or_else(|| Error::Malformed(format!("descriptor `{}` needs `data`", self.kind)))
        };
        match self.kind.as_str() {
            "hybrid" => gen_hybrid(need_n()?),
            "exp" => gen_exp(need_n()?),
            "square_grid" => gen_square_grid(need_n()?),
            "matrix" => {
                let parsed: MatrixData = serde_json::from_value(data()?)
                    .map_err(|e| Error::Malformed(format!("matrix data: {e}")))?;
                let (labels, rows) = match parsed {
                    MatrixData::Labelled { labels, matrix } => (labels, matrix),
                    MatrixData::Bare(rows) => (None, rows),
                };
                let matrix = DistanceMatrix::from_rows(rows)?;
                match labels {
                    Some(labels) => FiniteSpace::new(labels, matrix),
                    None => Ok(FiniteSpace::from_matrix(matrix)),
                }
            }
            "two_metric" => {
                let table: TwoMetricTable = serde_json::from_value(data()?)
                    .map_err(|e| Error::Malformed(format!("two_metric data: {e}")))?;
                from_two_metric(&table)
            }
            other => Err(Error::Malformed(format!("unknown space kind `{other}`"))),
        }
    }
}

pub fn parse_descriptor(json: &str) -> Result<FiniteSpace> {
    let desc: SpaceDescriptor = serde_json::from_str(json)
        .map_err(|e| Error::Malformed(format!("space descriptor: {e}")))?;
    desc.build()
}

pub fn parse_csv(text: &str) -> Result<FiniteSpace> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Malformed(format!("csv header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Malformed(format!("csv row {}: {e}", i + 1)))?;
        let row = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| {
                    Error::Malformed(format!("csv row {}: `{cell}` is not a number", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    FiniteSpace::new(labels, DistanceMatrix::from_rows(rows)?)
}

/// Parses the `kind:n` shorthand, e.g. `hybrid:5`.
fn parse_shorthand(source: &str) -> Option<Result<FiniteSpace>> {
    let (kind, n) = source.split_once(':')?;
    let build = match kind {
        "hybrid" => gen_hybrid,
        "exp" => gen_exp,
        "square_grid" => gen_square_grid,
        _ => return None,
    };
    Some(
        n.trim()
            .parse::<usize>()
            .map_err(|_| Error::Malformed(format!("`{source}`: `{n}` is not a point count")))
            .and_then(build),
    )
}

/// Loads a space from `kind:n` shorthand, an inline JSON descriptor, or a
/// `.json` / CSV file.
pub fn load_space(source: &str) -> Result<FiniteSpace> {
    let source = source.trim();
    if let Some(space) = parse_shorthand(source) {
        return space;
    }
    if source.starts_with('{') {
        return parse_descriptor(source);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: source.to_string(),
        message: e.to_string(),
    })?;
    let is_json = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    if is_json {
        parse_descriptor(&text)
    } else {
        parse_csv(&text)
    }
}

/// Writes labels and a matrix in the CSV input format.
pub fn to_csv(labels: &[String], matrix: &DistanceMatrix) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(labels).expect("in-memory write");
    for i in 0..matrix.len() {
        writer
            .write_record(matrix.row(i).iter().map(|v| v.to_string()))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
}
