use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::SimilarityMatrix;

/// Dissimilarity used for silhouettes: `1 − similarity`.
pub fn dissimilarity(sm: &SimilarityMatrix, i: usize, j: usize) -> f64 {
    1.0 - sm.get(i, j)
}

/// Three-case silhouette width from the intra (`a`) and nearest-sibling (`b`)
/// mean dissimilarities.
pub fn silhouette_width(a: f64, b: f64) -> f64 {
    if a < b {
        1.0 - a / b
    } else if a > b {
        b / a - 1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateSilhouette {
    pub predicate: usize,
    pub cluster: usize,
    pub a: f64,
    pub b: f64,
    pub sw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteReport {
    pub per_predicate: Vec<PredicateSilhouette>,
    /// Mean width per sibling cluster, in input order.
    pub per_cluster: Vec<f64>,
    pub cluster_sizes: Vec<usize>,
}

impl SilhouetteReport {
    /// `(mean width, size)` per cluster, the input to [`neighborhood_sw`].
    pub fn cluster_summaries(&self) -> Vec<(f64, usize)> {
        self.per_cluster
            .iter()
            .copied()
            .zip(self.cluster_sizes.iter().copied())
            .collect()
    }
}

/// Silhouette widths for sibling clusters that share one parent.
///
/// Members of singleton clusters get width 0.
pub fn silhouette(sm: &SimilarityMatrix, groups: &[Vec<usize>]) -> Result<SilhouetteReport> {
    if groups.len() < 2 {
        return Err(Error::InvalidArgument(
            "silhouette needs at least two sibling clusters".into(),
        ));
    }
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument("empty cluster".into()));
    }
    let mean_to = |i: usize, group: &[usize]| -> f64 {
        let (sum, n) = group
            .iter()
            .filter(|&&j| j != i)
            .fold((0.0, 0usize), |(s, n), &j| {
                (s + dissimilarity(sm, i, j), n + 1)
            });
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    };
    let mut per_predicate = Vec::new();
    let mut per_cluster = Vec::with_capacity(groups.len());
    for (c, group) in groups.iter().enumerate() {
        let mut total = 0.0;
        for &i in group {
            let a = mean_to(i, group);
            let b = groups
                .iter()
                .enumerate()
                .filter(|(o, _)| *o != c)
                .map(|(_, other)| mean_to(i, other))
                .fold(f64::INFINITY, f64::min);
            let sw = if group.len() == 1 {
                0.0
            } else {
                silhouette_width(a, b)
            };
            total += sw;
            per_predicate.push(PredicateSilhouette {
                predicate: i,
                cluster: c,
                a,
                b,
                sw,
            });
        }
        per_cluster.push(total / group.len() as f64);
    }
    Ok(SilhouetteReport {
        per_predicate,
        per_cluster,
        cluster_sizes: groups.iter().map(Vec::len).collect(),
    })
}

/// Size-weighted mean of sibling silhouette widths.
pub fn neighborhood_sw(children: &[(f64, usize)]) -> Result<f64> {
    let total: usize = children.iter().map(|&(_, n)| n).sum();
    if children.is_empty() || total == 0 {
        return Err(Error::InvalidArgument(
            "neighbourhood silhouette needs at least one predicate".into(),
        ));
    }
    let weighted: f64 = children.iter().map(|&(sw, n)| sw * n as f64).sum();
    Ok(weighted / total as f64)
}
