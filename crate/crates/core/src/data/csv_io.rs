use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SampleColumn;
use crate::error::{Error, Result};

/// The UCI iris measurements (150 rows, 50 per species).
pub const IRIS_CSV: &str = include_str!("../../data/iris.csv");

/// Column layout of a measurement file: `attributes.len()` numeric fields
/// followed by a class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub attributes: Vec<String>,
    /// Accepted class labels in output order. Empty accepts any label, ordered
    /// by first appearance.
    pub classes: Vec<String>,
}

impl CsvSchema {
    pub fn iris() -> Self {
        Self {
            attributes: ["sepal_length", "sepal_width", "petal_length", "petal_width"]
                .map(String::from)
                .to_vec(),
            classes: ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
                .map(String::from)
                .to_vec(),
        }
    }
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self::iris()
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Vec<SampleColumn>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_csv(file, schema)
}

pub fn bundled_iris() -> Vec<SampleColumn> {
    parse_csv(IRIS_CSV.as_bytes(), &CsvSchema::iris()).expect("bundled iris data is well formed")
}

/// Parses rows into one column per (attribute, class), attribute-major.
///
/// A first row whose leading field is not numeric is taken as a header.
pub fn parse_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<Vec<SampleColumn>> {
    let width = schema.attributes.len() + 1;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut classes = schema.classes.clone();
    // values[class][attribute]
    let mut values: Vec<Vec<Vec<f64>>> =
        vec![vec![Vec::new(); schema.attributes.len()]; classes.len()];
    let mut rows = 0usize;

    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(line, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(line, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rows == 0 && i == 0 && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if rec.len() != width {
            return Err(Error::Parse {
                line,
                msg: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        let label = &rec[width - 1];
        let class = match classes.iter().position(|c| c == label) {
            Some(k) => k,
            None if schema.classes.is_empty() => {
                classes.push(label.to_string());
                values.push(vec![Vec::new(); schema.attributes.len()]);
                classes.len() - 1
            }
            None => {
                return Err(Error::Schema(format!(
                    "line {line}: unknown class {label:?} (expected one of {:?})",
                    schema.classes
                )))
            }
        };
        for (j, field) in rec.iter().take(width - 1).enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                msg: format!(
                    "field {} ({}) is not a number: {field:?}",
                    j + 1,
                    schema.attributes[j]
                ),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("field {} is not finite", j + 1),
                });
            }
            values[class][j].push(v);
        }
        rows += 1;
    }

    if rows == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "no data rows".into(),
        });
    }

    let mut out = Vec::new();
    for (j, attr) in schema.attributes.iter().enumerate() {
        for (k, class) in classes.iter().enumerate() {
            let v = std::mem::take(&mut values[k][j]);
            if !v.is_empty() {
                out.push(SampleColumn::new(v, attr.clone(), class.clone())?);
            }
        }
    }
    Ok(out)
}
