//! Predicate neighbouring-pattern (PNP) similarity.
//!
//! Two predicates are adjacent when they touch a common concept, in either
//! role. Adjacent predicates score by the share pattern
//! `|C(Pi) ∩ C(Pj)|² / (|C(Pi)| |C(Pj)|)`; predicates further apart score by
//! the connection pattern, the best product of share scores along a shortest
//! chain of adjacent predicates.

mod distance;
mod matrix;

pub use distance::{distance_matrix, DistanceMatrix};
pub use matrix::SimilarityMatrix;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::SchemaGraph;

/// The concepts a predicate touches as domain or range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptSet {
    pub predicate: String,
    pub members: BTreeSet<String>,
}

pub fn concept_set(g: &SchemaGraph, predicate: &str) -> Result<ConceptSet> {
    if !g.predicates().contains(predicate) {
        return Err(Error::UnknownPredicate(predicate.to_string()));
    }
    let members = g
        .triples_of(predicate)
        .flat_map(|(d, r, _)| [d.to_string(), r.to_string()])
        .collect();
    Ok(ConceptSet {
        predicate: predicate.to_string(),
        members,
    })
}

/// Share-pattern score of two predicates.
///
/// 1 for the same predicate; 0 when either set is empty or they have nothing
/// in common; otherwise the squared overlap normalised by both set sizes.
pub fn shared_similarity(ci: &ConceptSet, cj: &ConceptSet) -> f64 {
    if ci.predicate == cj.predicate {
        return 1.0;
    }
    if ci.members.is_empty() || cj.members.is_empty() {
        return 0.0;
    }
    let common = ci.members.intersection(&cj.members).count();
    if common == 0 {
        return 0.0;
    }
    let common = common as f64;
    common * common / (ci.members.len() as f64 * cj.members.len() as f64)
}

/// Dense `n × n` table of pairwise scores.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScores {
    n: usize,
    values: Vec<f64>,
}

impl PairScores {
    pub fn zeros(n: usize) -> Self {
        PairScores {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
    }
}

/// Share-pattern scores for every predicate pair of `g`, in predicate order.
pub fn shared_scores(g: &SchemaGraph) -> PairScores {
    let sets: Vec<ConceptSet> = g
        .predicates()
        .iter()
        .map(|p| concept_set(g, p).expect("predicate taken from the graph"))
        .collect();
    let n = sets.len();
    let mut out = PairScores::zeros(n);
    for i in 0..n {
        out.set(i, i, 1.0);
        for j in (i + 1)..n {
            let s = shared_similarity(&sets[i], &sets[j]);
            out.set(i, j, s);
            out.set(j, i, s);
        }
    }
    out
}

/// Connection-pattern scores together with the intermediate predicate that
/// realised each maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionScores {
    pub scores: PairScores,
    /// For pairs at distance ≥ 2: the predicate immediately before the
    /// target on the witnessing chain, read from the lower-index end.
    via: Vec<Option<usize>>,
}

impl ConnectionScores {
    /// Predicate chain realising the connection score between `i` and `j`,
    /// listed from the lower index. `None` unless the pair is at distance ≥ 2.
    pub fn witness_path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        let n = self.scores.n();
        let (src, dst) = (i.min(j), i.max(j));
        self.via[src * n + dst]?;
        let mut path = vec![dst];
        let mut cur = dst;
        while let Some(prev) = self.via[src * n + cur] {
            path.push(prev);
            cur = prev;
        }
        path.push(src);
        path.reverse();
        Some(path)
    }
}

/// Connection-pattern scores by dynamic programming over increasing distance.
///
/// From each source `i`, the best chain product to a predicate at distance
/// `L` extends the best product at distance `L − 1` by one share edge. Taking
/// the maximum over these last-edge splits equals the maximum over every
/// shortest-path decomposition `l(i,k) + l(k,j) = l(i,j)`, since every such
/// decomposition is the concatenation of shortest chains. Products are
/// accumulated from the lower-index end so the table is exactly symmetric.
/// Pairs at distance 0, 1 or ∞ are left at 0.
pub fn connection_similarity(l: &DistanceMatrix, ps_s: &PairScores) -> ConnectionScores {
    let n = l.n();
    assert_eq!(n, ps_s.n(), "distance and share tables disagree on size");
    let mut scores = PairScores::zeros(n);
    let mut via = vec![None; n * n];

    let mut best = vec![0.0f64; n];
    let mut prev = vec![None; n];
    for src in 0..n {
        let mut by_dist: Vec<Vec<usize>> = Vec::new();
        for t in 0..n {
            if let Some(d) = l.get(src, t) {
                let d = d as usize;
                if by_dist.len() <= d {
                    by_dist.resize(d + 1, Vec::new());
                }
                by_dist[d].push(t);
            }
        }
        best.iter_mut().for_each(|b| *b = 0.0);
        prev.iter_mut().for_each(|p| *p = None);
        if let Some(first) = by_dist.get(1) {
            for &t in first {
                best[t] = ps_s.get(src, t);
            }
        }
        for d in 2..by_dist.len() {
            for &t in &by_dist[d] {
                let mut value = 0.0;
                let mut arg = None;
                for &k in &by_dist[d - 1] {
                    if l.get(k, t) != Some(1) {
                        continue;
                    }
                    let cand = best[k] * ps_s.get(k, t);
                    if cand > value {
                        value = cand;
                        arg = Some(k);
                    }
                }
                best[t] = value;
                prev[t] = arg;
            }
        }
        // witness chains are walked back through this source's own table, so
        // keep predecessors for every target, not only the upper triangle
        for t in 0..n {
            if matches!(l.get(src, t), Some(d) if d >= 2) {
                via[src * n + t] = prev[t];
                if t > src {
                    scores.set(src, t, best[t]);
                    scores.set(t, src, best[t]);
                }
            }
        }
    }
    ConnectionScores { scores, via }
}

/// Everything computed on the way to the similarity matrix.
#[derive(Debug, Clone)]
pub struct PnpAnalysis {
    pub distances: DistanceMatrix,
    pub shared: PairScores,
    pub connection: ConnectionScores,
    pub matrix: SimilarityMatrix,
}

pub fn analyze_pnp(g: &SchemaGraph) -> PnpAnalysis {
    let distances = distance_matrix(g);
    let shared = shared_scores(g);
    let connection = connection_similarity(&distances, &shared);
    let n = distances.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = match distances.get(i, j) {
                Some(0) => 1.0,
                Some(1) => shared.get(i, j),
                Some(_) => connection.scores.get(i, j),
                None => 0.0,
            };
        }
    }
    let matrix = SimilarityMatrix::from_parts(distances.predicates().to_vec(), values);
    PnpAnalysis {
        distances,
        shared,
        connection,
        matrix,
    }
}

/// Predicate similarity matrix: share scores for adjacent pairs, connection
/// scores for pairs at distance ≥ 2, unit diagonal, zero when unreachable.
pub fn similarity_matrix(g: &SchemaGraph) -> SimilarityMatrix {
    analyze_pnp(g).matrix
}

/// How two predicates relate in the schema graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum PairPattern {
    Same,
    Share {
        shared_subject: bool,
        shared_object: bool,
        /// A range concept of one predicate is a domain concept of the other.
        chained: bool,
    },
    Connection {
        distance: u32,
    },
    Unreachable,
}

pub fn classify_pair(g: &SchemaGraph, l: &DistanceMatrix, i: usize, j: usize) -> PairPattern {
    match l.get(i, j) {
        Some(0) => PairPattern::Same,
        None => PairPattern::Unreachable,
        Some(1) => {
            let preds = l.predicates();
            let roles = |p: &str| {
                let mut dom = BTreeSet::new();
                let mut rng = BTreeSet::new();
                for (d, r, _) in g.triples_of(p) {
                    dom.insert(d.to_string());
                    rng.insert(r.to_string());
                }
                (dom, rng)
            };
            let (di, ri) = roles(&preds[i]);
            let (dj, rj) = roles(&preds[j]);
            PairPattern::Share {
                shared_subject: !di.is_disjoint(&dj),
                shared_object: !ri.is_disjoint(&rj),
                chained: !ri.is_disjoint(&dj) || !rj.is_disjoint(&di),
            }
        }
        Some(d) => PairPattern::Connection { distance: d },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: &str, members: &[&str]) -> ConceptSet {
        ConceptSet {
            predicate: p.into(),
            members: members.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn concept_sets() {
        let g = SchemaGraph::from_triples([
            ("Drug", "target", "Target", 1),
            ("Drug", "p", "Target", 1),
            ("Drug", "p", "Enzyme", 1),
        ]);
        assert_eq!(concept_set(&g, "target").unwrap().members.len(), 2);
        let members: Vec<_> = concept_set(&g, "p").unwrap().members.into_iter().collect();
        assert_eq!(members, ["Drug", "Enzyme", "Target"]);
        assert!(matches!(
            concept_set(&g, "nope"),
            Err(Error::UnknownPredicate(_))
        ));

        let mut g = g;
        g.declare_predicate("bare");
        assert!(concept_set(&g, "bare").unwrap().members.is_empty());
    }

    #[test]
    fn share_scores() {
        assert_eq!(shared_similarity(&set("a", &["A"]), &set("a", &["A"])), 1.0);
        assert_eq!(
            shared_similarity(&set("a", &["A", "B"]), &set("b", &["B", "C"])),
            0.25
        );
        assert_eq!(shared_similarity(&set("a", &["A"]), &set("b", &["C"])), 0.0);
        assert_eq!(shared_similarity(&set("a", &[]), &set("b", &["C"])), 0.0);
    }

    // P1 –B– P2 –C– P3: P1 and P3 are two hops apart through P2
    fn chain() -> SchemaGraph {
        SchemaGraph::from_triples([
            ("A", "p1", "B", 1),
            ("B", "p2", "C", 1),
            ("C", "p3", "D", 1),
        ])
    }

    #[test]
    fn chain_connection_score() {
        let a = analyze_pnp(&chain());
        // every share score on the chain is 1²/(2·2)
        assert_eq!(a.matrix.get(0, 1), 0.25);
        assert_eq!(a.matrix.get(0, 2), 0.0625);
        assert_eq!(a.connection.witness_path(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(a.connection.witness_path(2, 0), Some(vec![0, 1, 2]));
        assert_eq!(a.connection.witness_path(0, 1), None);
    }

    #[test]
    fn connection_takes_best_intermediate() {
        // hand-built tables: P0 reaches P3 through P1 (0.5 · 0.4) or P2 (0.3 · 0.2)
        let l = DistanceMatrix::from_adjacency(
            (0..4).map(|i| format!("p{i}")).collect(),
            &[(0, 1), (1, 3), (0, 2), (2, 3)],
        );
        let mut ps = PairScores::zeros(4);
        for (i, j, v) in [(0, 1, 0.5), (1, 3, 0.4), (0, 2, 0.3), (2, 3, 0.2)] {
            ps.set(i, j, v);
            ps.set(j, i, v);
        }
        let c = connection_similarity(&l, &ps);
        assert!((c.scores.get(0, 3) - 0.2).abs() < 1e-15);
        assert_eq!(c.scores.get(0, 3), c.scores.get(3, 0));
        assert_eq!(c.witness_path(0, 3), Some(vec![0, 1, 3]));
    }

    #[test]
    fn unreachable_pairs_score_zero() {
        let g = SchemaGraph::from_triples([("A", "p", "B", 1), ("X", "q", "Y", 1)]);
        let sm = similarity_matrix(&g);
        assert_eq!(sm.get(0, 1), 0.0);
        assert_eq!(sm.get(0, 0), 1.0);
    }

    #[test]
    fn pair_patterns() {
        let g = SchemaGraph::from_triples([
            ("Drug", "target", "Target", 1),
            ("Drug", "enzyme", "Enzyme", 1),
            ("Target", "gene", "Gene", 1),
            ("Gene", "locus", "Locus", 1),
        ]);
        let l = distance_matrix(&g);
        let idx = |p: &str| l.predicates().iter().position(|x| x == p).unwrap();
        assert_eq!(
            classify_pair(&g, &l, idx("target"), idx("enzyme")),
            PairPattern::Share {
                shared_subject: true,
                shared_object: false,
                chained: false
            }
        );
        assert_eq!(
            classify_pair(&g, &l, idx("target"), idx("gene")),
            PairPattern::Share {
                shared_subject: false,
                shared_object: false,
                chained: true
            }
        );
        assert_eq!(
            classify_pair(&g, &l, idx("enzyme"), idx("locus")),
            PairPattern::Connection { distance: 3 }
        );
    }
}
