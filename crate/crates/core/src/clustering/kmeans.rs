use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::SimilarityMatrix;

pub const RESTARTS: u64 = 10;
const MAX_ITERATIONS: usize = 300;

/// Partition of a node's member predicates into `k` non-empty clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    /// Predicate indices into the similarity matrix, in feature order.
    pub members: Vec<usize>,
    /// Cluster id per member, numbered by first appearance.
    pub assignment: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    /// Within-cluster sum of squared distances to the centroids.
    pub wcss: f64,
}

impl ClusterAssignment {
    /// Member predicate indices grouped by cluster id.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (m, &c) in self.members.iter().zip(&self.assignment) {
            groups[c].push(*m);
        }
        groups
    }
}

/// Feature vectors: rows of `sm` restricted to the member columns.
pub fn member_features(sm: &SimilarityMatrix, members: &[usize]) -> Vec<Vec<f64>> {
    members
        .iter()
        .map(|&i| members.iter().map(|&j| sm.get(i, j)).collect())
        .collect()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Seeded Lloyd's k-means over similarity rows.
///
/// Runs [`RESTARTS`] initialisations (each picks `k` distinct members as
/// starting centroids from its own stream of the seeded generator) and keeps
/// the lowest within-cluster sum of squares, earliest restart on ties.
pub fn kmeans_assign(
    sm: &SimilarityMatrix,
    members: &[usize],
    k: usize,
    seed: u64,
) -> Result<ClusterAssignment> {
    let n = members.len();
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in 2..={n} for {n} members"
        )));
    }
    let points = member_features(sm, members);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart);
        let init: Vec<Vec<f64>> = sample(&mut rng, n, k)
            .into_iter()
            .map(|i| points[i].clone())
            .collect();
        let (wcss, labels) = lloyd(&points, init);
        if best.as_ref().is_none_or(|(b, _)| wcss < *b) {
            best = Some((wcss, labels));
        }
    }
    let (wcss, labels) = best.expect("at least one restart");
    Ok(ClusterAssignment {
        members: members.to_vec(),
        assignment: relabel(&labels),
        k,
        seed,
        wcss,
    })
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> (f64, Vec<usize>) {
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    for _ in 0..MAX_ITERATIONS {
        repair_empty(points, &mut centroids, &mut labels);
        // update step
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&labels) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            let count = counts[c] as f64;
            for (dst, s) in centroids[c].iter_mut().zip(&sums[c]) {
                *dst = s / count;
            }
        }
        // assignment step
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == labels {
            break;
        }
        labels = next;
    }
    repair_empty(points, &mut centroids, &mut labels);
    let wcss = points
        .iter()
        .zip(&labels)
        .map(|(p, &c)| sq_dist(p, &centroids[c]))
        .sum();
    (wcss, labels)
}

/// Reseeds each empty cluster with the point farthest from its own centroid,
/// taken from a cluster that can spare it.
fn repair_empty(points: &[Vec<f64>], centroids: &mut [Vec<f64>], labels: &mut [usize]) {
    let k = centroids.len();
    loop {
        let mut counts = vec![0usize; k];
        for &c in labels.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&n| n == 0) else {
            return;
        };
        let mut far = None;
        let mut far_d = -1.0;
        for (i, p) in points.iter().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(p, &centroids[labels[i]]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let i = far.expect("k <= n leaves a cluster with two or more points");
        labels[i] = empty;
        centroids[empty] = points[i].clone();
    }
}

/// Renumbers cluster ids by first appearance.
fn relabel(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}
