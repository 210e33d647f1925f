use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric predicate similarity matrix with entries in `[0, 1]` and a unit
/// diagonal. Rows follow the order of `predicates`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixRecord", try_from = "MatrixRecord")]
pub struct SimilarityMatrix {
    predicates: Vec<String>,
    index: BTreeMap<String, usize>,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub(crate) fn from_parts(predicates: Vec<String>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), predicates.len() * predicates.len());
        let index = predicates
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        SimilarityMatrix {
            predicates,
            index,
            values,
        }
    }

    /// Builds a matrix from explicit row-major values, checking shape,
    /// symmetry, range and the unit diagonal.
    pub fn from_dense(predicates: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let n = predicates.len();
        if values.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "{} values for {n} predicates",
                values.len()
            )));
        }
        let mut seen = BTreeMap::new();
        for (i, p) in predicates.iter().enumerate() {
            if seen.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate predicate `{p}`")));
            }
        }
        for i in 0..n {
            if values[i * n + i] != 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "diagonal entry {i} is not 1"
                )));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) = {v} outside [0,1]"
                    )));
                }
                if v != values[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) is not symmetric"
                    )));
                }
            }
        }
        Ok(Self::from_parts(predicates, values))
    }

    pub fn n(&self) -> usize {
        self.predicates.len()
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    pub fn index_of(&self, predicate: &str) -> Option<usize> {
        self.index.get(predicate).copied()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn get_by_name(&self, a: &str, b: &str) -> Result<f64> {
        let i = self
            .index_of(a)
            .ok_or_else(|| Error::UnknownPredicate(a.to_string()))?;
        let j = self
            .index_of(b)
            .ok_or_else(|| Error::UnknownPredicate(b.to_string()))?;
        Ok(self.get(i, j))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.values[i * n..(i + 1) * n]
    }

    /// Tab-separated export: a header row of predicate IRIs followed by one
    /// row of six-decimal values per predicate.
    pub fn to_tsv(&self) -> String {
        let mut out = self.predicates.join("\t");
        out.push('\n');
        for i in 0..self.n() {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:.6}")).collect();
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }

    /// Reads the tab-separated export. Values keep the printed precision.
    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "missing header row".into(),
        })??;
        let predicates: Vec<String> = header
            .split('\t')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        let mut values = Vec::with_capacity(predicates.len() * predicates.len());
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            for (c, field) in line.split('\t').enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    line: i + 2,
                    column: c + 1,
                    message: format!("`{field}` is not a number"),
                })?;
                values.push(v);
            }
        }
        Self::from_dense(predicates, values)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    predicates: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl From<SimilarityMatrix> for MatrixRecord {
    fn from(m: SimilarityMatrix) -> Self {
        let rows = (0..m.n()).map(|i| m.row(i).to_vec()).collect();
        MatrixRecord {
            predicates: m.predicates,
            rows,
        }
    }
}

impl TryFrom<MatrixRecord> for SimilarityMatrix {
    type Error = Error;

    fn try_from(rec: MatrixRecord) -> Result<Self> {
        SimilarityMatrix::from_dense(rec.predicates, rec.rows.into_iter().flatten().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    #[test]
    fn dense_validation() {
        assert!(SimilarityMatrix::from_dense(names(2), vec![1.0, 0.3, 0.3, 1.0]).is_ok());
        assert!(SimilarityMatrix::from_dense(names(2), vec![1.0, 0.3, 0.4, 1.0]).is_err());
        assert!(SimilarityMatrix::from_dense(names(2), vec![0.9, 0.3, 0.3, 1.0]).is_err());
        assert!(SimilarityMatrix::from_dense(names(2), vec![1.0, 1.3, 1.3, 1.0]).is_err());
        assert!(SimilarityMatrix::from_dense(names(2), vec![1.0]).is_err());
    }

    #[test]
    fn tsv_export_format() {
        let m = SimilarityMatrix::from_dense(names(2), vec![1.0, 0.25, 0.25, 1.0]).unwrap();
        assert_eq!(
            m.to_tsv(),
            "p0\tp1\n1.000000\t0.250000\n0.250000\t1.000000\n"
        );
        assert_eq!(
            SimilarityMatrix::read_tsv(m.to_tsv().as_bytes()).unwrap(),
            m
        );
    }

    #[test]
    fn json_round_trip_is_exact() {
        let v = 1.0 / 3.0;
        let m = SimilarityMatrix::from_dense(names(2), vec![1.0, v, v, 1.0]).unwrap();
        let back: SimilarityMatrix =
            serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.get_by_name("p1", "p0").unwrap(), v);
    }
}
