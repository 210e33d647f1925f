use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans_assign, ClusterAssignment};
use super::silhouette::{neighborhood_sw, silhouette, SilhouetteReport};
use crate::error::{Error, Result};
use crate::similarity::SimilarityMatrix;

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const MIN_SPLIT_MEMBERS: usize = 4;
const MAX_K: usize = 10;

/// Topic identifier `T{level}_{index}`; the root is `T0_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TopicId {
    pub level: u32,
    pub index: u32,
}

impl TopicId {
    pub const ROOT: TopicId = TopicId { level: 0, index: 1 };

    pub fn new(level: u32, index: u32) -> Self {
        TopicId { level, index }
    }
}

impl fmt::Display for TopicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}_{}", self.level, self.index)
    }
}

impl FromStr for TopicId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("`{s}` is not a topic id like T3_4"));
        let rest = s.strip_prefix('T').ok_or_else(bad)?;
        let (level, index) = rest.split_once('_').ok_or_else(bad)?;
        Ok(TopicId {
            level: level.parse().map_err(|_| bad())?,
            index: index.parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for TopicId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TopicId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TopicNode {
    pub id: TopicId,
    pub predicates: Vec<String>,
    /// Mean silhouette width of this topic among its siblings; `None` at the root.
    #[serde(rename = "meanSW")]
    pub mean_sw: Option<f64>,
    /// Number of children, for split nodes.
    pub chosen_k: Option<usize>,
    /// Best neighbourhood silhouette width found when sweeping k here.
    pub nsw: Option<f64>,
    /// Share of the parent's predicates held by this topic.
    pub contribution: f64,
    pub children: Vec<TopicNode>,
}

impl TopicNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a TopicNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicHierarchy {
    pub alpha: f64,
    pub seed: u64,
    pub root: TopicNode,
    /// Topic ids per level from 1 down. Leaves that stop early are carried
    /// into every deeper level, so each level lists a full partition.
    pub levels: Vec<Vec<TopicId>>,
}

impl TopicHierarchy {
    /// All nodes in depth-first, left-to-right order.
    pub fn nodes(&self) -> Vec<&TopicNode> {
        let mut out = Vec::new();
        self.root.walk(&mut out);
        out
    }

    pub fn leaves(&self) -> Vec<&TopicNode> {
        self.nodes().into_iter().filter(|n| n.is_leaf()).collect()
    }

    pub fn find(&self, id: TopicId) -> Option<&TopicNode> {
        self.nodes().into_iter().find(|n| n.id == id)
    }

    /// Number of topics per level; `[1]` when the root was never split.
    pub fn level_shape(&self) -> Vec<usize> {
        if self.levels.is_empty() {
            vec![1]
        } else {
            self.levels.iter().map(Vec::len).collect()
        }
    }

    /// Level shape as `2:7:8`.
    pub fn shape_string(&self) -> String {
        self.level_shape()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(":")
    }

    pub fn depth(&self) -> u32 {
        self.nodes().iter().map(|n| n.id.level).max().unwrap_or(0)
    }
}

/// Result of the k sweep at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSplit {
    pub k: usize,
    pub nsw: f64,
    pub assignment: ClusterAssignment,
    pub report: SilhouetteReport,
    /// `(k, nsw)` for every k tried.
    pub sweep: Vec<(usize, f64)>,
}

/// Default upper bound of the k sweep for a node with `members` predicates.
pub fn default_k_max(members: usize) -> usize {
    MAX_K.min(members.saturating_sub(1))
}

/// Sweeps `k = 2..=k_max` and keeps the split with the highest neighbourhood
/// silhouette width; the smallest k wins ties.
pub fn optimal_k(
    sm: &SimilarityMatrix,
    members: &[usize],
    k_max: Option<usize>,
    seed: u64,
) -> Result<OptimalSplit> {
    if members.len() < MIN_SPLIT_MEMBERS {
        return Err(Error::NotSplittable {
            members: members.len(),
        });
    }
    let k_max = k_max.unwrap_or_else(|| default_k_max(members.len()));
    if k_max < 2 || k_max > members.len() {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} outside 2..={}",
            members.len()
        )));
    }
    let mut best: Option<OptimalSplit> = None;
    let mut sweep = Vec::with_capacity(k_max - 1);
    for k in 2..=k_max {
        let assignment = kmeans_assign(sm, members, k, seed)?;
        let report = silhouette(sm, &assignment.groups())?;
        let nsw = neighborhood_sw(&report.cluster_summaries())?;
        sweep.push((k, nsw));
        if best.as_ref().is_none_or(|b| nsw > b.nsw) {
            best = Some(OptimalSplit {
                k,
                nsw,
                assignment,
                report,
                sweep: Vec::new(),
            });
        }
    }
    let mut best = best.expect("k range is non-empty");
    best.sweep = sweep;
    Ok(best)
}

struct Pending {
    id: TopicId,
    members: Vec<usize>,
    mean_sw: Option<f64>,
    contribution: f64,
    chosen_k: Option<usize>,
    nsw: Option<f64>,
    children: Vec<usize>,
}

/// Divisive clustering of all predicates in `sm`.
///
/// Nodes are processed level by level, left to right. A node splits when it
/// has at least [`MIN_SPLIT_MEMBERS`] predicates and its best split reaches a
/// neighbourhood silhouette width of at least `alpha`.
pub fn build_hierarchy(sm: &SimilarityMatrix, alpha: f64, seed: u64) -> TopicHierarchy {
    let mut arena = vec![Pending {
        id: TopicId::ROOT,
        members: (0..sm.n()).collect(),
        mean_sw: None,
        contribution: 1.0,
        chosen_k: None,
        nsw: None,
        children: Vec::new(),
    }];
    let mut next_index: Vec<u32> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        let split = match optimal_k(sm, &arena[at].members, None, seed) {
            Ok(split) => split,
            Err(_) => continue,
        };
        arena[at].nsw = Some(split.nsw);
        if split.nsw < alpha {
            continue;
        }
        arena[at].chosen_k = Some(split.k);
        let level = arena[at].id.level + 1;
        if next_index.len() < level as usize {
            next_index.resize(level as usize, 0);
        }
        let parent_size = arena[at].members.len() as f64;
        for (c, group) in split.assignment.groups().into_iter().enumerate() {
            next_index[level as usize - 1] += 1;
            let child = Pending {
                id: TopicId::new(level, next_index[level as usize - 1]),
                contribution: group.len() as f64 / parent_size,
                members: group,
                mean_sw: Some(split.report.per_cluster[c]),
                chosen_k: None,
                nsw: None,
                children: Vec::new(),
            };
            arena.push(child);
            let child_at = arena.len() - 1;
            arena[at].children.push(child_at);
            queue.push_back(child_at);
        }
    }

    fn assemble(arena: &[Pending], at: usize, sm: &SimilarityMatrix) -> TopicNode {
        let p = &arena[at];
        TopicNode {
            id: p.id,
            predicates: p
                .members
                .iter()
                .map(|&i| sm.predicates()[i].clone())
                .collect(),
            mean_sw: p.mean_sw,
            chosen_k: p.chosen_k,
            nsw: p.nsw,
            contribution: p.contribution,
            children: p.children.iter().map(|&c| assemble(arena, c, sm)).collect(),
        }
    }
    let root = assemble(&arena, 0, sm);
    let levels = level_lists(&root);
    TopicHierarchy {
        alpha,
        seed,
        root,
        levels,
    }
}

fn level_lists(root: &TopicNode) -> Vec<Vec<TopicId>> {
    let mut all = Vec::new();
    root.walk(&mut all);
    let depth = all.iter().map(|n| n.id.level).max().unwrap_or(0);
    (1..=depth)
        .map(|d| {
            all.iter()
                .filter(|n| n.id.level == d || (n.id.level < d && n.is_leaf() && n.id.level > 0))
                .map(|n| n.id)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::test_support::{block_matrix, nested_block_matrix};

    #[test]
    fn topic_id_text_form() {
        let id: TopicId = "T3_4".parse().unwrap();
        assert_eq!(id, TopicId::new(3, 4));
        assert_eq!(id.to_string(), "T3_4");
        assert!("3_4".parse::<TopicId>().is_err());
        assert!("T3".parse::<TopicId>().is_err());
        assert!(TopicId::new(3, 2) < TopicId::new(3, 10));
    }

    #[test]
    fn sweep_picks_two_blocks() {
        let sm = block_matrix(&[4, 5], 0.9, 0.05);
        let members: Vec<usize> = (0..9).collect();
        let split = optimal_k(&sm, &members, None, 42).unwrap();
        assert_eq!(split.k, 2);
        assert_eq!(split.sweep.len(), 7);
    }

    #[test]
    fn sweep_picks_five_blocks() {
        let sm = block_matrix(&[4, 6, 3, 4, 3], 0.9, 0.1);
        let members: Vec<usize> = (0..20).collect();
        let split = optimal_k(&sm, &members, None, 42).unwrap();
        assert_eq!(split.k, 5);
        let mut sizes: Vec<usize> = split.assignment.groups().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 4, 4, 6]);
    }

    #[test]
    fn three_members_not_splittable() {
        let sm = block_matrix(&[3], 0.9, 0.0);
        assert!(matches!(
            optimal_k(&sm, &[0, 1, 2], None, 1),
            Err(Error::NotSplittable { members: 3 })
        ));
    }

    #[test]
    fn weak_structure_stays_a_single_leaf() {
        let sm = block_matrix(&[6], 0.5, 0.0);
        let h = build_hierarchy(&sm, DEFAULT_ALPHA, 42);
        assert!(h.root.is_leaf());
        assert_eq!(h.leaves().len(), 1);
        assert_eq!(h.shape_string(), "1");
        assert!(h.root.nsw.unwrap() < DEFAULT_ALPHA);
    }

    #[test]
    fn nested_blocks_give_two_levels() {
        let sm = nested_block_matrix(false);
        let h = build_hierarchy(&sm, DEFAULT_ALPHA, 42);
        assert_eq!(h.shape_string(), "2:7");
        assert_eq!(h.root.chosen_k, Some(2));
        let sizes: Vec<usize> = h.root.children.iter().map(|c| c.predicates.len()).collect();
        assert_eq!(sizes, vec![20, 43]);
        assert!((h.root.children[0].contribution - 20.0 / 63.0).abs() < 1e-15);
        for leaf in h.leaves() {
            assert!(leaf.predicates.len() < MIN_SPLIT_MEMBERS || leaf.nsw.unwrap() < DEFAULT_ALPHA);
        }
        let json = serde_json::to_string(&h).unwrap();
        let back: TopicHierarchy = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
        assert!(json.contains("\"meanSW\""));
    }

    #[test]
    fn nested_blocks_give_three_levels() {
        let sm = nested_block_matrix(true);
        let h = build_hierarchy(&sm, DEFAULT_ALPHA, 42);
        assert_eq!(h.shape_string(), "2:7:8");
        let again = build_hierarchy(&sm, DEFAULT_ALPHA, 42);
        assert_eq!(
            serde_json::to_string(&h).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
        let l3: Vec<String> = h.levels[2].iter().map(|id| id.to_string()).collect();
        assert_eq!(l3.len(), 8);
        assert!(l3.contains(&"T3_1".to_string()));
    }
}
