//! JSON interchange formats.
//!
//! complex.json
//! ```json
//! {"schema_version": 1, "order": 2, "simplices": {"0": [[0], [1], [2]], "1": [[0, 1]], "2": [[0, 1, 2]]}}
//! ```
//! `schema_version` is optional; only maximal simplices need to be listed.
//!
//! features.k.json: `{"order": k, "d": d, "values": [[...], ...]}`, one row per
//! k-simplex in canonical order. Only row-major layout is accepted.
//!
//! trajectories.json: `{"flows": [[...], ...], "labels": [...], "split": {"train": [...], "test": [...]}}`.

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::cochain::Cochain;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn json_error(context: &str, e: serde_json::Error) -> Error {
    Error::parse(context, format!("line {} column {}: {e}", e.line(), e.column()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data always serializes");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    order: usize,
    simplices: BTreeMap<String, Vec<Vec<usize>>>,
}

/// Parses complex JSON; `context` names the source in error messages.
pub fn parse_complex(text: &str, context: &str) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| json_error(context, e))?;
    if let Some(found) = file.schema_version {
        if found != SCHEMA_VERSION {
            return Err(Error::SchemaVersionMismatch {
                expected: SCHEMA_VERSION,
                found,
            });
        }
    }
    let mut lists = vec![Vec::new(); file.order + 1];
    for (key, list) in file.simplices {
        let k: usize = key
            .parse()
            .map_err(|_| Error::parse(context, format!("field simplices.{key}: order keys must be integers")))?;
        if k > file.order {
            return Err(Error::parse(
                context,
                format!("field simplices.{key}: order exceeds declared order {}", file.order),
            ));
        }
        lists[k] = list;
    }
    SimplicialComplex::build(&lists).map_err(|e| match e {
        Error::EmptyComplex => e,
        other => Error::parse(context, other),
    })
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<SimplicialComplex> {
    let path = path.as_ref();
    parse_complex(&read(path)?, &path.display().to_string())
}

pub fn complex_to_json(complex: &SimplicialComplex) -> String {
    let file = ComplexFile {
        schema_version: Some(SCHEMA_VERSION),
        order: complex.order(),
        simplices: complex
            .to_lists()
            .into_iter()
            .enumerate()
            .map(|(k, l)| (k.to_string(), l))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data always serializes")
}

pub fn save_complex(complex: &SimplicialComplex, path: impl AsRef<Path>) -> Result<()> {
    let mut text = complex_to_json(complex);
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureFile {
    order: usize,
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<String>,
    values: Vec<Vec<f64>>,
}

pub fn parse_features(text: &str, context: &str) -> Result<Cochain> {
    let file: FeatureFile = serde_json::from_str(text).map_err(|e| json_error(context, e))?;
    if let Some(layout) = &file.layout {
        if layout != "row-major" {
            return Err(Error::parse(
                context,
                format!("field layout: only \"row-major\" is accepted, found \"{layout}\""),
            ));
        }
    }
    if file.d == 0 {
        return Err(Error::parse(context, "field d: must be at least 1"));
    }
    let rows = file.values.len();
    let mut flat = Vec::with_capacity(rows * file.d);
    for (i, row) in file.values.iter().enumerate() {
        if row.len() != file.d {
            return Err(Error::parse(
                context,
                format!("field values[{i}]: has {} entries, expected d = {}", row.len(), file.d),
            ));
        }
        flat.extend_from_slice(row);
    }
    let values = Array2::from_shape_vec((rows, file.d), flat).expect("row lengths checked");
    Ok(Cochain::new(file.order, values))
}

pub fn load_features(path: impl AsRef<Path>) -> Result<Cochain> {
    let path = path.as_ref();
    parse_features(&read(path)?, &path.display().to_string())
}

pub fn features_to_json(x: &Cochain) -> String {
    let file = FeatureFile {
        order: x.order,
        d: x.cols(),
        layout: None,
        values: x.values.outer_iter().map(|r| r.to_vec()).collect(),
    };
    serde_json::to_string(&file).expect("plain data always serializes")
}

pub fn save_features(x: &Cochain, path: impl AsRef<Path>) -> Result<()> {
    let mut text = features_to_json(x);
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Edge flows with class labels and a train/test split.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryDataset {
    /// One row per trajectory, one column per edge.
    pub flows: Array2<f64>,
    pub labels: Vec<usize>,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Split {
    train: Vec<usize>,
    test: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryFile {
    flows: Vec<Vec<f64>>,
    labels: Vec<usize>,
    split: Split,
}

impl TrajectoryDataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edges(&self) -> usize {
        self.flows.ncols()
    }

    pub fn classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Flow of sample `i` as an `N_1 x 1` matrix.
    pub fn sample(&self, i: usize) -> Array2<f64> {
        self.flows.row(i).to_owned().insert_axis(ndarray::Axis(1))
    }

    pub fn validate(&self, context: &str) -> Result<()> {
        if self.flows.nrows() != self.labels.len() {
            return Err(Error::parse(
                context,
                format!("{} flows but {} labels", self.flows.nrows(), self.labels.len()),
            ));
        }
        for (name, idx) in [("split.train", &self.train), ("split.test", &self.test)] {
            if let Some(bad) = idx.iter().find(|&&i| i >= self.len()) {
                return Err(Error::parse(
                    context,
                    format!("field {name}: index {bad} out of range for {} samples", self.len()),
                ));
            }
        }
        Ok(())
    }
}

pub fn parse_trajectories(text: &str, context: &str) -> Result<TrajectoryDataset> {
    let file: TrajectoryFile = serde_json::from_str(text).map_err(|e| json_error(context, e))?;
    let edges = file.flows.first().map_or(0, Vec::len);
    let mut flat = Vec::with_capacity(file.flows.len() * edges);
    for (i, f) in file.flows.iter().enumerate() {
        if f.len() != edges {
            return Err(Error::parse(
                context,
                format!("field flows[{i}]: has {} entries, expected {edges}", f.len()),
            ));
        }
        flat.extend_from_slice(f);
    }
    let data = TrajectoryDataset {
        flows: Array2::from_shape_vec((file.flows.len(), edges), flat).expect("row lengths checked"),
        labels: file.labels,
        train: file.split.train,
        test: file.split.test,
    };
    data.validate(context)?;
    Ok(data)
}

pub fn load_trajectories(path: impl AsRef<Path>) -> Result<TrajectoryDataset> {
    let path = path.as_ref();
    parse_trajectories(&read(path)?, &path.display().to_string())
}

pub fn save_trajectories(data: &TrajectoryDataset, path: impl AsRef<Path>) -> Result<()> {
    let file = TrajectoryFile {
        flows: data.flows.outer_iter().map(|r| r.to_vec()).collect(),
        labels: data.labels.clone(),
        split: Split {
            train: data.train.clone(),
            test: data.test.clone(),
        },
    };
    write_json(&file, path.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn filled() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![], vec![], vec![vec![0, 1, 2]]]).unwrap()
    }

    #[test]
    fn complex_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("complex.json");
        save_complex(&filled(), &path).unwrap();
        let loaded = load_complex(&path).unwrap();
        assert_eq!(loaded.to_lists(), filled().to_lists());
    }

    #[test]
    fn maximal_simplices_are_closed() {
        let c = parse_complex(r#"{"order": 2, "simplices": {"2": [[0, 1, 2]]}}"#, "inline").unwrap();
        assert_eq!(c.counts(), vec![3, 3, 1]);
        assert_eq!(c.inserted_faces(), 6);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for text in [
            "{not json",
            r#"{"order": 1, "simplices": {"x": [[0]]}}"#,
            r#"{"order": 0, "simplices": {"1": [[0, 1]]}}"#,
            r#"{"order": 1, "simplices": {"1": [[0, 0]]}}"#,
            r#"{"order": 1}"#,
        ] {
            assert!(matches!(parse_complex(text, "t"), Err(Error::Parse { .. })), "{text}");
        }
        assert!(matches!(
            parse_complex(r#"{"schema_version": 7, "order": 0, "simplices": {"0": [[0]]}}"#, "t"),
            Err(Error::SchemaVersionMismatch { expected: 1, found: 7 })
        ));
        assert!(matches!(load_complex("/nonexistent/complex.json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn features_round_trip_and_layout_check() {
        let x = Cochain::new(1, array![[1.0, 2.5], [-3.0, 0.0]]);
        let back = parse_features(&features_to_json(&x), "t").unwrap();
        assert_eq!(back, x);
        let err = parse_features(r#"{"order": 1, "d": 2, "values": [[1, 2, 3], [4, 5, 6]]}"#, "t");
        assert!(matches!(err, Err(Error::Parse { .. })));
        let err = parse_features(r#"{"order": 1, "d": 1, "layout": "column-major", "values": [[1]]}"#, "t");
        assert!(matches!(err, Err(Error::Parse { .. })));
    }

    #[test]
    fn trajectories_round_trip() {
        let data = TrajectoryDataset {
            flows: array![[0.5, -0.5], [1.0, 0.0], [0.0, 1.0]],
            labels: vec![0, 1, 1],
            train: vec![0, 1],
            test: vec![2],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        save_trajectories(&data, &path).unwrap();
        assert_eq!(load_trajectories(&path).unwrap(), data);
        let bad = r#"{"flows": [[1.0]], "labels": [0], "split": {"train": [3], "test": []}}"#;
        assert!(matches!(parse_trajectories(bad, "t"), Err(Error::Parse { .. })));
    }
}
