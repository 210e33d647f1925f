use std::collections::{BTreeMap, VecDeque};

use crate::ingest::SchemaGraph;

/// Hop distances in the predicate adjacency graph; `None` is unreachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    predicates: Vec<String>,
    dist: Vec<Option<u32>>,
}

impl DistanceMatrix {
    /// Breadth-first distances over an explicit undirected edge list.
    pub fn from_adjacency(predicates: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let n = predicates.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let mut dist = vec![None; n * n];
        let mut queue = VecDeque::new();
        for src in 0..n {
            dist[src * n + src] = Some(0);
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                let du = dist[src * n + u].expect("queued nodes have a distance");
                for &v in &adj[u] {
                    if dist[src * n + v].is_none() {
                        dist[src * n + v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        DistanceMatrix { predicates, dist }
    }

    pub fn n(&self) -> usize {
        self.predicates.len()
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.dist[i * self.n() + j]
    }
}

/// Shortest hop counts between predicates, where two predicates are adjacent
/// when their concept sets intersect (direction ignored).
pub fn distance_matrix(g: &SchemaGraph) -> DistanceMatrix {
    let predicates: Vec<String> = g.predicates().iter().cloned().collect();
    let index: BTreeMap<&str, usize> = predicates
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_str(), i))
        .collect();
    // concept -> predicates touching it
    let mut incident: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (d, p, r) in g.schema_triples().keys() {
        let pi = index[p.as_str()];
        incident.entry(d.as_str()).or_default().push(pi);
        incident.entry(r.as_str()).or_default().push(pi);
    }
    let mut edges = Vec::new();
    for preds in incident.values_mut() {
        preds.sort_unstable();
        preds.dedup();
        for (a, &x) in preds.iter().enumerate() {
            for &y in &preds[a + 1..] {
                edges.push((x, y));
            }
        }
    }
    DistanceMatrix::from_adjacency(predicates, &edges)
}
