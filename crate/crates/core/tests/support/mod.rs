//! Independent reference implementations and random instance generators.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use ontotopic::clustering::{TopicHierarchy, TopicNode};
use ontotopic::ingest::SchemaGraph;
use ontotopic::query::{ParsedPattern, ParsedTerm, QueryGraph, QueryVariable, TriplePattern};
use ontotopic::similarity::SimilarityMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub const EX: &str = "http://example.org/onto#";

/// Random schema with up to `max_p` predicates over up to `max_c` concepts.
/// Some predicates get no triples at all.
pub fn random_schema(rng: &mut impl Rng, max_p: usize, max_c: usize) -> SchemaGraph {
    let np = rng.gen_range(1..=max_p);
    let nc = rng.gen_range(1..=max_c);
    let mut g = SchemaGraph::new();
    for p in 0..np {
        let pred = format!("{EX}p{p}");
        let triples = rng.gen_range(0..=3);
        if triples == 0 {
            g.declare_predicate(pred.clone());
        }
        for _ in 0..triples {
            let d = format!("{EX}C{}", rng.gen_range(0..nc));
            let r = format!("{EX}C{}", rng.gen_range(0..nc));
            g.add_triple(d, pred.clone(), r, rng.gen_range(1..5));
        }
    }
    g
}

/// Concepts touched by a predicate, read straight from the schema triples.
fn touched(g: &SchemaGraph, p: &str) -> BTreeSet<String> {
    g.schema_triples()
        .keys()
        .filter(|(_, q, _)| q == p)
        .flat_map(|(d, _, r)| [d.clone(), r.clone()])
        .collect()
}

/// Similarity by brute force: adjacent pairs use the squared-overlap score;
/// other reachable pairs take the best product over every shortest chain,
/// enumerated path by path.
pub fn oracle_similarity(g: &SchemaGraph) -> (Vec<String>, Vec<Vec<f64>>) {
    let preds: Vec<String> = g.predicates().iter().cloned().collect();
    let n = preds.len();
    let sets: Vec<BTreeSet<String>> = preds.iter().map(|p| touched(g, p)).collect();
    let share = |i: usize, j: usize| -> f64 {
        let common = sets[i].intersection(&sets[j]).count() as f64;
        common * common / (sets[i].len() as f64 * sets[j].len() as f64)
    };
    let adjacent = |i: usize, j: usize| i != j && !sets[i].is_disjoint(&sets[j]);
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        out[i][i] = 1.0;
        // hop counts by breadth-first search
        let mut dist = vec![usize::MAX; n];
        dist[i] = 0;
        let mut queue = VecDeque::from([i]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if dist[v] == usize::MAX && adjacent(u, v) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for j in 0..n {
            if j == i || dist[j] == usize::MAX {
                continue;
            }
            if dist[j] == 1 {
                out[i][j] = share(i, j);
                continue;
            }
            let mut best = 0.0f64;
            let mut path = vec![i];
            fn walk(
                path: &mut Vec<usize>,
                target: usize,
                hops: usize,
                adjacent: &dyn Fn(usize, usize) -> bool,
                share: &dyn Fn(usize, usize) -> f64,
                n: usize,
                best: &mut f64,
            ) {
                let last = *path.last().unwrap();
                if path.len() - 1 == hops {
                    if last == target {
                        let product = path.windows(2).map(|w| share(w[0], w[1])).product();
                        *best = best.max(product);
                    }
                    return;
                }
                for v in 0..n {
                    if adjacent(last, v) && !path.contains(&v) {
                        path.push(v);
                        walk(path, target, hops, adjacent, share, n, best);
                        path.pop();
                    }
                }
            }
            walk(&mut path, j, dist[j], &adjacent, &share, n, &mut best);
            out[i][j] = best;
        }
    }
    (preds, out)
}

/// Symmetric similarity matrix with unit diagonal and values on a 1/1000
/// grid, so ties occur now and then.
pub fn random_similarity(rng: &mut impl Rng, n: usize) -> SimilarityMatrix {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
        for j in i + 1..n {
            let s = f64::from(rng.gen_range(0..=1000u32)) / 1000.0;
            v[i * n + j] = s;
            v[j * n + i] = s;
        }
    }
    let names = (0..n).map(|i| format!("{EX}p{i:02}")).collect();
    SimilarityMatrix::from_dense(names, v).unwrap()
}

/// Random partition of `0..n` into `k` non-empty groups.
pub fn random_partition(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut groups: Vec<Vec<usize>> = idx[..k].iter().map(|&i| vec![i]).collect();
    for &i in &idx[k..] {
        groups[rng.gen_range(0..k)].push(i);
    }
    groups
}

/// Silhouette widths by the textbook `(b - a) / max(a, b)` form; members of
/// singleton groups score 0. Returned per group, in member order.
pub fn oracle_silhouette(sm: &SimilarityMatrix, groups: &[Vec<usize>]) -> Vec<Vec<f64>> {
    let avg = |i: usize, g: &[usize]| {
        let others: Vec<f64> = g
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| 1.0 - sm.get(i, j))
            .collect();
        if others.is_empty() {
            0.0
        } else {
            others.iter().sum::<f64>() / others.len() as f64
        }
    };
    groups
        .iter()
        .enumerate()
        .map(|(c, g)| {
            g.iter()
                .map(|&i| {
                    if g.len() == 1 {
                        return 0.0;
                    }
                    let a = avg(i, g);
                    let b = groups
                        .iter()
                        .enumerate()
                        .filter(|&(o, _)| o != c)
                        .map(|(_, h)| avg(i, h))
                        .fold(f64::INFINITY, f64::min);
                    let m = a.max(b);
                    if m == 0.0 {
                        0.0
                    } else {
                        (b - a) / m
                    }
                })
                .collect()
        })
        .collect()
}

/// Valid query graph: a random tree of required patterns, a few optional
/// ones, random types, labels and projections.
pub fn random_query_graph(rng: &mut impl Rng) -> QueryGraph {
    let nv = rng.gen_range(2..=7);
    let mut variables: Vec<QueryVariable> = (0..nv)
        .map(|i| QueryVariable {
            name: format!("v{i}"),
            concept: rng
                .gen_bool(0.7)
                .then(|| format!("{EX}C{}", rng.gen_range(0..5))),
            label_var: rng.gen_bool(0.6).then(|| format!("v{i}label")),
        })
        .collect();
    variables.shuffle(rng);
    let names: Vec<String> = variables.iter().map(|v| v.name.clone()).collect();
    let pred = |rng: &mut dyn rand::RngCore| format!("{EX}p{}", rng.gen_range(0..6));
    let mut patterns = Vec::new();
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        let (s, o) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        patterns.push(TriplePattern {
            subject: names[s].clone(),
            predicate: pred(rng),
            object: names[o].clone(),
            optional: false,
        });
    }
    for _ in 0..rng.gen_range(0..3) {
        let s = rng.gen_range(0..nv);
        let o = rng.gen_range(0..nv);
        patterns.push(TriplePattern {
            subject: names[s].clone(),
            predicate: pred(rng),
            object: names[o].clone(),
            optional: true,
        });
    }
    patterns.shuffle(rng);
    let mut pool: Vec<String> = names.clone();
    pool.extend(variables.iter().filter_map(|v| v.label_var.clone()));
    pool.shuffle(rng);
    let keep = rng.gen_range(1..=pool.len());
    pool.truncate(keep);
    QueryGraph {
        variables,
        patterns,
        projections: pool,
        ..QueryGraph::default()
    }
}

/// True when a variable renaming maps one pattern multiset onto the other.
pub fn isomorphic(a: &[ParsedPattern], b: &[ParsedPattern]) -> bool {
    type Map = Vec<(String, String)>;
    fn bind(x: &ParsedTerm, y: &ParsedTerm, map: &mut Map) -> bool {
        match (x, y) {
            (ParsedTerm::Var(u), ParsedTerm::Var(v)) => {
                match map.iter().find(|(k, w)| k == u || w == v) {
                    Some((k, w)) => k == u && w == v,
                    None => {
                        map.push((u.clone(), v.clone()));
                        true
                    }
                }
            }
            _ => x == y,
        }
    }
    fn search(
        i: usize,
        a: &[ParsedPattern],
        b: &[ParsedPattern],
        used: &mut [bool],
        map: &mut Map,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || a[i].optional != b[j].optional {
                continue;
            }
            let mark = map.len();
            if bind(&a[i].subject, &b[j].subject, map)
                && bind(&a[i].predicate, &b[j].predicate, map)
                && bind(&a[i].object, &b[j].object, map)
            {
                used[j] = true;
                if search(i + 1, a, b, used, map) {
                    return true;
                }
                used[j] = false;
            }
            map.truncate(mark);
        }
        false
    }
    a.len() == b.len() && search(0, a, b, &mut vec![false; b.len()], &mut Vec::new())
}

/// Block similarity matrix: 0 across the two groups, `within_group` inside
/// a group and `within_block` inside a block. Groups are the blocks before
/// and after `split`.
pub fn block_matrix(
    sizes: &[usize],
    split: usize,
    within_group: f64,
    within_block: f64,
) -> SimilarityMatrix {
    let n: usize = sizes.iter().sum();
    let mut block = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(b, s));
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            v[i * n + j] = if i == j {
                1.0
            } else if block[i] == block[j] {
                within_block
            } else if (block[i] < split) == (block[j] < split) {
                within_group
            } else {
                0.0
            };
        }
    }
    let names = (0..n).map(|i| format!("{EX}p{i:02}")).collect();
    SimilarityMatrix::from_dense(names, v).unwrap()
}

/// Children partition their parent, and each child's contribution is its
/// share of the parent's predicates, summing to 1.
pub fn hierarchy_invariants(h: &TopicHierarchy) -> Result<(), String> {
    fn check(node: &TopicNode) -> Result<(), String> {
        if node.children.is_empty() {
            return Ok(());
        }
        let mut union: Vec<&String> = node.children.iter().flat_map(|c| &c.predicates).collect();
        union.sort();
        let mut parent: Vec<&String> = node.predicates.iter().collect();
        parent.sort();
        if union != parent {
            return Err(format!("{}: children do not partition the parent", node.id));
        }
        let mut sum = 0.0;
        for c in &node.children {
            let share = c.predicates.len() as f64 / node.predicates.len() as f64;
            if (c.contribution - share).abs() > 1e-12 {
                return Err(format!(
                    "{}: contribution {} vs {share}",
                    c.id, c.contribution
                ));
            }
            sum += c.contribution;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(format!("{}: contributions sum to {sum}", node.id));
        }
        node.children.iter().try_for_each(check)
    }
    check(&h.root)
}
