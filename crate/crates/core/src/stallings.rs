//! Stallings graphs of finitely generated subgroups of a free group.
//!
//! A [`SubgroupGraph`] is folded, core-trimmed (the base vertex is always
//! kept) and canonically numbered by a breadth-first walk from the base, so
//! two graphs compare equal exactly when they describe the same subgroup.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freeword::{Alphabet, FreeWord, Letter, Tag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StallingsError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupGraph {
    alphabet: Alphabet,
    /// `adj[v][x] = w` for an edge `v --x--> w`; inverse letters are stored
    /// explicitly, so every edge appears twice.
    adj: Vec<BTreeMap<Letter, usize>>,
}

/// Union-find folding engine. Targets in `adj` are resolved lazily.
struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<Letter, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            parent: vec![0],
            adj: vec![BTreeMap::new()],
            pending: Vec::new(),
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn insert_end(&mut self, v: usize, x: Letter, w: usize) {
        match self.adj[v].get(&x) {
            Some(&t) => self.pending.push((t, w)),
            None => {
                self.adj[v].insert(x, w);
            }
        }
    }

    fn add_edge(&mut self, v: usize, x: Letter, w: usize) {
        let (v, w) = (self.find(v), self.find(w));
        self.insert_end(v, x, w);
        self.insert_end(w, -x, v);
        self.drain();
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            // the smaller index survives, so vertex 0 stays the base
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.adj[gone]);
            for (x, t) in moved {
                self.insert_end(keep, x, t);
            }
        }
    }

    fn add_path(&mut self, w: &FreeWord) {
        let letters = w.letters();
        if letters.is_empty() {
            return;
        }
        let mut cur = 0;
        for (k, &x) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() { 0 } else { self.add_vertex() };
            self.add_edge(cur, x, next);
            cur = next;
        }
    }

    fn finish(mut self, alphabet: Alphabet) -> SubgroupGraph {
        let n = self.parent.len();
        let mut adj: BTreeMap<usize, BTreeMap<Letter, usize>> = BTreeMap::new();
        for v in 0..n {
            if self.find(v) != v {
                continue;
            }
            let row: Vec<(Letter, usize)> = self.adj[v].iter().map(|(&x, &t)| (x, t)).collect();
            let row = row.into_iter().map(|(x, t)| (x, self.find(t))).collect();
            adj.insert(v, row);
        }
        SubgroupGraph::from_sparse(alphabet, adj)
    }

    fn undirected_edges(&self) -> usize {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v)
            .map(|v| self.adj[v].len())
            .sum::<usize>()
            / 2
    }
}

impl SubgroupGraph {
    /// The Stallings graph of the subgroup generated by `gens`.
    pub fn fold(alphabet: Alphabet, gens: &[FreeWord]) -> SubgroupGraph {
        Self::fold_with_count(alphabet, gens).0
    }

    /// Like [`SubgroupGraph::fold`], also returning the number of
    /// identifications performed while folding the bouquet of `gens`.
    pub fn fold_with_count(alphabet: Alphabet, gens: &[FreeWord]) -> (SubgroupGraph, usize) {
        let mut f = Folder::new();
        for g in gens {
            assert_eq!(g.alphabet(), alphabet, "generator over the wrong alphabet");
            f.add_path(g);
        }
        let total: usize = gens.iter().map(FreeWord::len).sum();
        let folds = total - f.undirected_edges();
        (f.finish(alphabet), folds)
    }

    /// Builds a graph from explicit edges `(v, x, w)` with `x > 0` and base 0,
    /// folding as needed.
    pub fn from_edges(alphabet: Alphabet, vertices: usize, edges: &[(usize, Letter, usize)]) -> SubgroupGraph {
        let mut f = Folder::new();
        for _ in 1..vertices.max(1) {
            f.add_vertex();
        }
        for &(v, x, w) in edges {
            f.add_edge(v, x, w);
        }
        f.finish(alphabet)
    }

    pub fn trivial(alphabet: Alphabet) -> SubgroupGraph {
        SubgroupGraph {
            alphabet,
            adj: vec![BTreeMap::new()],
        }
    }

    pub fn whole_group(alphabet: Alphabet) -> SubgroupGraph {
        SubgroupGraph::fold(alphabet, &alphabet.generators())
    }

    /// Trims, restricts to the base component and renumbers canonically.
    fn from_sparse(alphabet: Alphabet, mut adj: BTreeMap<usize, BTreeMap<Letter, usize>>) -> SubgroupGraph {
        // drop everything not reachable from the base
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = VecDeque::from([0usize]);
        seen.insert(0);
        while let Some(v) = queue.pop_front() {
            for &t in adj[&v].values() {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        adj.retain(|v, _| seen.contains(v));

        // core trimming: repeatedly remove non-base leaves
        let mut stack: Vec<usize> = adj.iter().filter(|(&v, r)| v != 0 && r.len() <= 1).map(|(&v, _)| v).collect();
        while let Some(v) = stack.pop() {
            let Some(row) = adj.get(&v) else { continue };
            if row.len() > 1 {
                continue;
            }
            let row = adj.remove(&v).unwrap();
            for (x, t) in row {
                if let Some(r) = adj.get_mut(&t) {
                    r.remove(&-x);
                    if t != 0 && r.len() <= 1 {
                        stack.push(t);
                    }
                }
            }
        }

        // canonical BFS numbering
        let mut order: BTreeMap<usize, usize> = BTreeMap::new();
        order.insert(0, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut by_letter: Vec<Letter> = alphabet.letters().collect();
        by_letter.sort_by_key(|&x| (x.unsigned_abs(), x < 0));
        while let Some(v) = queue.pop_front() {
            for &x in &by_letter {
                if let Some(&t) = adj[&v].get(&x) {
                    if !order.contains_key(&t) {
                        order.insert(t, order.len());
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut out = vec![BTreeMap::new(); order.len()];
        for (v, row) in adj {
            let i = order[&v];
            out[i] = row.into_iter().map(|(x, t)| (x, order[&t])).collect();
        }
        SubgroupGraph { alphabet, adj: out }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    /// Edges `(v, x, w)` with `x > 0`.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut out = Vec::new();
        for (v, row) in self.adj.iter().enumerate() {
            for (&x, &w) in row {
                if x > 0 {
                    out.push((v, x, w));
                }
            }
        }
        out
    }

    pub fn step(&self, v: usize, x: Letter) -> Option<usize> {
        self.adj[v].get(&x).copied()
    }

    /// The vertex reached by reading `w` from the base, if the path exists.
    pub fn read(&self, w: &FreeWord) -> Option<usize> {
        w.letters().iter().try_fold(0, |v, &x| self.step(v, x))
    }

    /// Length of the longest prefix of `w` readable from the base.
    pub fn readable_prefix(&self, w: &FreeWord) -> usize {
        let mut v = 0;
        for (k, &x) in w.letters().iter().enumerate() {
            match self.step(v, x) {
                Some(t) => v = t,
                None => return k,
            }
        }
        w.len()
    }

    pub fn contains(&self, w: &FreeWord) -> bool {
        w.alphabet() == self.alphabet && self.read(w) == Some(0)
    }

    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn is_whole_group(&self) -> bool {
        self.vertex_count() == 1 && self.adj[0].len() == 2 * self.alphabet.rank
    }

    /// Shortest words from the base to each vertex along a BFS tree.
    fn tree_paths(&self) -> Vec<FreeWord> {
        let mut paths: Vec<Option<Vec<Letter>>> = vec![None; self.adj.len()];
        paths[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (&x, &t) in &self.adj[v] {
                if paths[t].is_none() {
                    let mut p = paths[v].clone().unwrap();
                    p.push(x);
                    paths[t] = Some(p);
                    queue.push_back(t);
                }
            }
        }
        paths
            .into_iter()
            .map(|p| FreeWord::from_reduced_unchecked(self.alphabet, p.expect("graph is connected")))
            .collect()
    }

    /// A free basis read off a spanning tree, sorted shortlex.
    pub fn basis(&self) -> Vec<FreeWord> {
        let paths = self.tree_paths();
        let mut tree = std::collections::BTreeSet::new();
        for (t, p) in paths.iter().enumerate() {
            if let Some(&x) = p.letters().last() {
                let v = self.step(t, -x).unwrap();
                tree.insert(if x > 0 { (v, x, t) } else { (t, -x, v) });
            }
        }
        let mut out = Vec::new();
        for (v, x, w) in self.edges() {
            if tree.contains(&(v, x, w)) {
                continue;
            }
            let g = paths[v]
                .mul(&FreeWord::from_reduced_unchecked(self.alphabet, vec![x]))
                .mul(&paths[w].inverse());
            out.push(g);
        }
        out.sort();
        out
    }

    /// Product-graph intersection of two subgroups.
    pub fn intersect(&self, other: &SubgroupGraph) -> SubgroupGraph {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        ids.insert((0, 0), 0);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        let mut adj: BTreeMap<usize, BTreeMap<Letter, usize>> = BTreeMap::new();
        while let Some((p, q)) = queue.pop_front() {
            let id = ids[&(p, q)];
            let mut row = BTreeMap::new();
            for (&x, &p2) in &self.adj[p] {
                if let Some(&q2) = other.adj[q].get(&x) {
                    let next = ids.len();
                    let t = *ids.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        next
                    });
                    row.insert(x, t);
                }
            }
            adj.insert(id, row);
        }
        SubgroupGraph::from_sparse(self.alphabet, adj)
    }

    /// `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &SubgroupGraph) -> bool {
        self.basis().iter().all(|g| other.contains(g))
    }

    /// Canonical representation of the same subgroup over another alphabet tag.
    pub fn retag(&self, tag: Tag) -> SubgroupGraph {
        SubgroupGraph {
            alphabet: Alphabet::new(self.alphabet.rank, tag),
            adj: self.adj.clone(),
        }
    }
}

/// Deterministic complete automaton over `Z_modulus` tracking a weighted
/// exponent sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedAutomaton {
    pub modulus: u64,
    pub weights: Vec<i64>,
}

impl WeightedAutomaton {
    pub fn transition(&self, state: u64, x: Letter) -> u64 {
        let m = self.modulus as i128;
        let r = self.weights[x.unsigned_abs() as usize - 1] as i128 * x.signum() as i128;
        (state as i128 + r).rem_euclid(m) as u64
    }

    pub fn accepts(&self, w: &FreeWord) -> bool {
        w.letters().iter().fold(0, |q, &x| self.transition(q, x)) == 0
    }
}

pub fn build_weighted(weights: &[i64], modulus: u64) -> Result<WeightedAutomaton, StallingsError> {
    if modulus == 0 {
        return Err(StallingsError::ZeroModulus);
    }
    Ok(WeightedAutomaton {
        modulus,
        weights: weights.to_vec(),
    })
}

/// The subgroup accepted by a weighted automaton. Its state graph is already
/// folded, so only the part reachable from 0 is kept.
pub fn subgroup_of_weighted(a: &WeightedAutomaton, alphabet: Alphabet) -> Result<SubgroupGraph, StallingsError> {
    if a.weights.len() != alphabet.rank {
        return Err(StallingsError::WeightLength {
            expected: alphabet.rank,
            got: a.weights.len(),
        });
    }
    let mut adj: BTreeMap<usize, BTreeMap<Letter, usize>> = BTreeMap::new();
    let mut queue = VecDeque::from([0u64]);
    while let Some(q) = queue.pop_front() {
        if adj.contains_key(&(q as usize)) {
            continue;
        }
        let row: BTreeMap<Letter, usize> = alphabet
            .letters()
            .map(|x| (x, a.transition(q, x) as usize))
            .collect();
        for &t in row.values() {
            if !adj.contains_key(&t) {
                queue.push_back(t as u64);
            }
        }
        adj.insert(q as usize, row);
    }
    Ok(SubgroupGraph::from_sparse(alphabet, adj))
}

/// A Stallings graph whose edges carry labels in the free group on the
/// original generators, so that subgroup elements can be rewritten in
/// terms of them.
#[derive(Debug, Clone)]
pub struct TrackedGraph {
    alphabet: Alphabet,
    generators: usize,
    edges: Vec<TrackedEdge>,
}

#[derive(Debug, Clone)]
struct TrackedEdge {
    from: usize,
    to: usize,
    letter: Letter,
    label: FreeWord,
}

impl TrackedGraph {
    /// Folds the bouquet of `gens`, labelling the last edge of generator `k`
    /// with `t_{k+1}`.
    pub fn fold(alphabet: Alphabet, gens: &[FreeWord]) -> TrackedGraph {
        let labels = Alphabet::a(gens.len().max(1));
        let one = FreeWord::identity(labels);
        let mut edges = Vec::new();
        let mut next_vertex = 1;
        for (k, g) in gens.iter().enumerate() {
            let letters = g.letters();
            let mut cur = 0;
            for (i, &x) in letters.iter().enumerate() {
                let last = i + 1 == letters.len();
                let to = if last {
                    0
                } else {
                    next_vertex += 1;
                    next_vertex - 1
                };
                let label = if last {
                    FreeWord::from_reduced_unchecked(labels, vec![k as Letter + 1])
                } else {
                    one.clone()
                };
                edges.push(TrackedEdge {
                    from: cur,
                    to,
                    letter: x,
                    label,
                });
                cur = to;
            }
        }
        let mut g = TrackedGraph {
            alphabet,
            generators: gens.len(),
            edges,
        };
        while g.fold_once() {}
        g
    }

    /// Edge ends at `v` as `(edge index, letter read, far end, label read)`.
    fn ends_at(&self, v: usize) -> Vec<(usize, Letter, usize, FreeWord)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push((i, e.letter, e.to, e.label.clone()));
            }
            if e.to == v {
                out.push((i, -e.letter, e.from, e.label.inverse()));
            }
        }
        out
    }

    fn fold_once(&mut self) -> bool {
        let vertices: std::collections::BTreeSet<usize> =
            self.edges.iter().flat_map(|e| [e.from, e.to]).collect();
        for v in vertices {
            let ends = self.ends_at(v);
            for i in 0..ends.len() {
                for j in (i + 1)..ends.len() {
                    if ends[i].1 == ends[j].1 && ends[i].0 != ends[j].0 {
                        self.fold_pair(ends[i].clone(), ends[j].clone());
                        return true;
                    }
                }
            }
        }
        false
    }

    fn fold_pair(
        &mut self,
        e1: (usize, Letter, usize, FreeWord),
        e2: (usize, Letter, usize, FreeWord),
    ) {
        let (mut e1, mut e2) = (e1, e2);
        if e2.2 == 0 && e1.2 != 0 {
            std::mem::swap(&mut e1, &mut e2);
        }
        let (_, _, w1, l1) = e1;
        let (i2, _, w2, l2) = e2;
        self.edges.remove(i2);
        if w1 == w2 {
            return;
        }
        let c = l1.inverse().mul(&l2);
        let c_inv = c.inverse();
        for e in &mut self.edges {
            if e.from == w2 {
                e.label = c.mul(&e.label);
                e.from = w1;
            }
            if e.to == w2 {
                e.label = e.label.mul(&c_inv);
                e.to = w1;
            }
        }
    }

    /// Writes `w` as a word in the original generators (`t_k` standing for
    /// generator `k`), or `None` if `w` is not in the subgroup.
    pub fn express(&self, w: &FreeWord) -> Option<FreeWord> {
        let labels = Alphabet::a(self.generators.max(1));
        let mut acc = FreeWord::identity(labels);
        let mut v = 0;
        for &x in w.letters() {
            let (_, _, t, l) = self.ends_at(v).into_iter().find(|e| e.1 == x)?;
            acc = acc.mul(&l);
            v = t;
        }
        (v == 0).then_some(acc)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
}
