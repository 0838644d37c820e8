//! Finite graded posets with bonds: validation, chain enumeration, linear
//! extensions and Hasse-diagram export.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite poset given by its covering relations, with a rank function and a
/// positive integer bond attached to every cover.
///
/// Elements are identified by string labels; every deterministic order in the
/// crate derives from (rank, label).
#[derive(Debug, Clone)]
pub struct GradedPoset {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    ranks: Vec<u32>,
    covers: Vec<(usize, usize)>,
    bonds: BTreeMap<(usize, usize), u64>,
    leq: Vec<Vec<bool>>,
}

/// A strictly descending chain of poset elements (top first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub labels: Vec<String>,
}

impl Chain {
    pub fn new(labels: Vec<String>) -> Self {
        Chain { labels }
    }
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }
    pub fn display(&self) -> String {
        self.labels.join(" > ")
    }
    /// Parses "X > 01 > 0" (or with ">" unspaced).
    pub fn parse(s: &str) -> Self {
        Chain {
            labels: s
                .split('>')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect(),
        }
    }
}

/// A total order refining the partial order, stored descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalOrder {
    pub labels: Vec<String>,
    position: BTreeMap<String, usize>,
}

impl TotalOrder {
    pub fn new(labels: Vec<String>) -> Self {
        let position = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        TotalOrder { labels, position }
    }
    /// Position from the top; smaller means larger in the order.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.position.get(label).copied()
    }
    /// True if this order refines the partial order of `poset`.
    pub fn refines(&self, poset: &GradedPoset) -> bool {
        if self.labels.len() != poset.len() {
            return false;
        }
        for a in poset.elements() {
            for b in poset.elements() {
                if a != b && poset.leq(b, a) {
                    match (self.position(a), self.position(b)) {
                        (Some(pa), Some(pb)) => {
                            if pa > pb {
                                return false;
                            }
                        }
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
    ranks: BTreeMap<String, u32>,
    bonds: Vec<(String, String, u64)>,
}

impl GradedPoset {
    /// Builds a poset from raw data. Only structural well-formedness is
    /// enforced here; the graded-poset axioms are reported by [`validate`].
    pub fn new(
        elements: Vec<String>,
        covers: Vec<(String, String)>,
        ranks: BTreeMap<String, u32>,
        bonds: BTreeMap<(String, String), u64>,
    ) -> Result<Self> {
        let mut labels = elements;
        labels.sort();
        let index: BTreeMap<String, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        if index.len() != labels.len() {
            return Err(Error::data("duplicate element labels"));
        }
        let look = |l: &str| -> Result<usize> {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::data(format!("unknown element '{l}'")))
        };
        let mut cov = Vec::new();
        for (top, bottom) in &covers {
            cov.push((look(top)?, look(bottom)?));
        }
        cov.sort();
        cov.dedup();
        let mut rk = vec![0u32; labels.len()];
        for (l, &i) in &index {
            rk[i] = *ranks
                .get(l)
                .ok_or_else(|| Error::data(format!("missing rank for '{l}'")))?;
        }
        let mut bd = BTreeMap::new();
        for ((top, bottom), b) in &bonds {
            bd.insert((look(top)?, look(bottom)?), *b);
        }
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, r) in leq.iter_mut().enumerate() {
            r[i] = true;
        }
        for &(p, q) in &cov {
            leq[q][p] = true; // q <= p
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(GradedPoset {
            labels,
            index,
            ranks: rk,
            covers: cov,
            bonds: bd,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    pub fn elements(&self) -> &[String] {
        &self.labels
    }
    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }
    pub fn rank_of(&self, label: &str) -> Option<u32> {
        self.index.get(label).map(|&i| self.ranks[i])
    }
    /// a <= b in the partial order.
    pub fn leq(&self, a: &str, b: &str) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.leq[i][j],
            _ => false,
        }
    }
    pub fn comparable(&self, a: &str, b: &str) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }
    /// Cover triples (top, bottom, bond), bond defaulting to 1.
    pub fn cover_triples(&self) -> Vec<(String, String, u64)> {
        self.covers
            .iter()
            .map(|&(p, q)| {
                (
                    self.labels[p].clone(),
                    self.labels[q].clone(),
                    self.bonds.get(&(p, q)).copied().unwrap_or(1),
                )
            })
            .collect()
    }
    pub fn bond(&self, top: &str, bottom: &str) -> Option<u64> {
        let i = *self.index.get(top)?;
        let j = *self.index.get(bottom)?;
        if self.covers.binary_search(&(i, j)).is_ok() {
            Some(self.bonds.get(&(i, j)).copied().unwrap_or(1))
        } else {
            None
        }
    }
    pub fn is_cover(&self, top: &str, bottom: &str) -> bool {
        self.bond(top, bottom).is_some()
    }
    pub fn maximal_elements(&self) -> Vec<String> {
        self.labels
            .iter()
            .filter(|l| {
                let i = self.index[*l];
                !self.covers.iter().any(|&(_p, q)| q == i)
            })
            .cloned()
            .collect()
    }
    pub fn minimal_elements(&self) -> Vec<String> {
        self.labels
            .iter()
            .filter(|l| {
                let i = self.index[*l];
                !self.covers.iter().any(|&(p, _q)| p == i)
            })
            .cloned()
            .collect()
    }
    /// Elements covered by `label` (lower neighbours), in label order.
    pub fn covered_by(&self, label: &str) -> Vec<String> {
        let Some(&i) = self.index.get(label) else {
            return vec![];
        };
        self.covers
            .iter()
            .filter(|&&(p, _)| p == i)
            .map(|&(_, q)| self.labels[q].clone())
            .collect()
    }

    /// True if the given labels are pairwise comparable (after dedup).
    pub fn is_chain(&self, labels: &[String]) -> bool {
        for a in labels {
            if !self.contains(a) {
                return false;
            }
            for b in labels {
                if !self.comparable(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Sorts a set of pairwise comparable labels into a descending chain.
    pub fn sort_chain(&self, labels: &[String]) -> Result<Chain> {
        if !self.is_chain(labels) {
            return Err(Error::domain(format!(
                "labels {{{}}} are not a chain",
                labels.join(", ")
            )));
        }
        let mut v: Vec<String> = labels.to_vec();
        v.sort();
        v.dedup();
        v.sort_by(|a, b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.leq(b, a) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Ok(Chain::new(v))
    }

    /// Checks the graded-poset invariants and returns one diagnostic per
    /// violation; an empty list means the data is a graded poset with bonds.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    out.push(format!(
                        "cycle: '{}' and '{}' are mutually comparable",
                        self.labels[i], self.labels[j]
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out; // everything below assumes acyclicity
        }
        for &(p, q) in &self.covers {
            if self
                .labels
                .iter()
                .enumerate()
                .any(|(r, _)| r != p && r != q && self.leq[r][p] && self.leq[q][r])
            {
                out.push(format!(
                    "redundant cover: ('{}', '{}') is implied by shorter covers",
                    self.labels[p], self.labels[q]
                ));
            }
        }
        for &(p, q) in &self.covers {
            if self.ranks[p] != self.ranks[q] + 1 {
                out.push(format!(
                    "rank gap: cover ('{}', '{}') has ranks {} and {}",
                    self.labels[p], self.labels[q], self.ranks[p], self.ranks[q]
                ));
            }
        }
        let chains = self.maximal_chains();
        let lengths: BTreeSet<usize> = chains.iter().map(|c| c.len()).collect();
        if lengths.len() > 1 {
            out.push(format!(
                "not graded of fixed length: maximal chain sizes {:?}",
                lengths
            ));
        }
        for ((p, q), b) in &self.bonds {
            if *b < 1 {
                out.push(format!(
                    "bond < 1 on cover ('{}', '{}')",
                    self.labels[*p], self.labels[*q]
                ));
            }
            if self.covers.binary_search(&(*p, *q)).is_err() {
                out.push(format!(
                    "bond on non-cover pair ('{}', '{}')",
                    self.labels[*p], self.labels[*q]
                ));
            }
        }
        out
    }

    /// All maximal chains, each exactly once, sorted lexicographically by
    /// their label sequences (top-down).
    pub fn maximal_chains(&self) -> Vec<Chain> {
        let mut result = Vec::new();
        let mut stack: Vec<String> = Vec::new();
        for top in self.maximal_elements() {
            self.descend(&top, &mut stack, &mut result);
        }
        result.sort();
        result
    }

    fn descend(&self, at: &str, stack: &mut Vec<String>, out: &mut Vec<Chain>) {
        if stack.len() > self.len() {
            return; // cover data has a cycle; validate() reports it
        }
        stack.push(at.to_string());
        let below = self.covered_by(at);
        if below.is_empty() {
            out.push(Chain::new(stack.clone()));
        } else {
            for next in below {
                self.descend(&next, stack, out);
            }
        }
        stack.pop();
    }

    /// The canonical linear extension: rank descending, ties by label.
    pub fn linearize(&self) -> TotalOrder {
        let mut v: Vec<String> = self.labels.clone();
        v.sort_by_key(|l| (std::cmp::Reverse(self.rank_of(l).unwrap()), l.clone()));
        TotalOrder::new(v)
    }

    /// A seeded random linear extension (uniform choice among currently
    /// maximal elements at every step). Stable across runs for a fixed seed.
    pub fn random_linear_extension(&self, seed: u64) -> TotalOrder {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut remaining: BTreeSet<String> = self.labels.iter().cloned().collect();
        let mut out = Vec::new();
        while !remaining.is_empty() {
            let ready: Vec<String> = remaining
                .iter()
                .filter(|l| {
                    !remaining
                        .iter()
                        .any(|o| *o != **l && self.leq(l, o))
                })
                .cloned()
                .collect();
            let pick = ready.choose(&mut rng).unwrap().clone();
            remaining.remove(&pick);
            out.push(pick);
        }
        TotalOrder::new(out)
    }

    /// Deterministic DOT export of the Hasse diagram; edges are labelled by
    /// their bond when it differs from 1.
    pub fn export_hasse(&self) -> String {
        let mut s = String::from("digraph hasse {\n");
        let mut nodes: Vec<&String> = self.labels.iter().collect();
        nodes.sort_by_key(|l| (std::cmp::Reverse(self.rank_of(l).unwrap()), (*l).clone()));
        for l in nodes {
            s.push_str(&format!("  \"{}\";\n", l));
        }
        let mut edges = self.cover_triples();
        edges.sort();
        for (top, bottom, bond) in edges {
            if bond == 1 {
                s.push_str(&format!("  \"{}\" -> \"{}\";\n", top, bottom));
            } else {
                s.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    top, bottom, bond
                ));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let j = PosetJson {
            elements: self.labels.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(p, q)| (self.labels[p].clone(), self.labels[q].clone()))
                .collect(),
            ranks: self
                .labels
                .iter()
                .map(|l| (l.clone(), self.rank_of(l).unwrap()))
                .collect(),
            bonds: self
                .cover_triples()
                .into_iter()
                .filter(|(_, _, b)| *b != 1)
                .collect(),
        };
        serde_json::to_string_pretty(&j).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: PosetJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("poset json: {e}")))?;
        let bonds = j
            .bonds
            .into_iter()
            .map(|(t, b, v)| ((t, b), v))
            .collect();
        GradedPoset::new(j.elements, j.covers, j.ranks, bonds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_poset(k: usize) -> GradedPoset {
        let labels: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
        let covers: Vec<(String, String)> = (1..k)
            .map(|i| (format!("p{i}"), format!("p{}", i - 1)))
            .collect();
        let ranks = (0..k).map(|i| (format!("p{i}"), i as u32)).collect();
        GradedPoset::new(labels, covers, ranks, BTreeMap::new()).unwrap()
    }

    #[test]
    fn single_element_validates() {
        let p = GradedPoset::new(
            vec!["x".into()],
            vec![],
            [("x".to_string(), 0u32)].into_iter().collect(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(p.validate().is_empty());
        assert_eq!(p.maximal_chains().len(), 1);
    }

    #[test]
    fn rank_gap_diagnosed() {
        let p = GradedPoset::new(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "b".into())],
            [("a".to_string(), 2u32), ("b".to_string(), 0u32)]
                .into_iter()
                .collect(),
            BTreeMap::new(),
        )
        .unwrap();
        let diags = p.validate();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].contains("rank gap"));
    }

    #[test]
    fn chain_is_its_own_maximal_chain() {
        let p = chain_poset(4);
        let chains = p.maximal_chains();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].labels, vec!["p3", "p2", "p1", "p0"]);
        let order = p.linearize();
        assert_eq!(order.labels, vec!["p3", "p2", "p1", "p0"]);
        assert!(order.refines(&p));
    }

    #[test]
    fn antichain_tie_break_by_label() {
        let p = GradedPoset::new(
            vec!["b".into(), "a".into()],
            vec![],
            [("a".to_string(), 0u32), ("b".to_string(), 0u32)]
                .into_iter()
                .collect(),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(p.linearize().labels, vec!["a", "b"]);
    }

    #[test]
    fn random_extension_refines() {
        let p = chain_poset(5);
        for seed in 0..5 {
            assert!(p.random_linear_extension(seed).refines(&p));
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = chain_poset(3);
        let q = GradedPoset::from_json(&p.to_json()).unwrap();
        assert_eq!(p.elements(), q.elements());
        assert_eq!(p.cover_triples(), q.cover_triples());
    }
}
