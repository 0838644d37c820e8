//! Type-A Weyl group combinatorics: one-line cosets of parabolic quotients,
//! Bruhat order, projections and minimal/maximal lifts, and the poset
//! underlying the flag-variety stratification.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::poset::GradedPoset;

/// A permutation of [n] in one-line notation (1-based entries).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x < 1 || x > n || seen[x] {
                return Err(Error::shape(format!("not a permutation: {word:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation(word))
    }

    pub fn inversions(&self) -> usize {
        let w = &self.0;
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        inv
    }
}

/// A coset in W / W_Q for W = S_n and Q the parabolic subgroup determined by
/// cut points `cuts` (strictly increasing, inside 1..n). The word is stored
/// canonically: ascending within each block, so it is the minimal-length
/// representative of the coset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coset {
    n: usize,
    cuts: Vec<usize>,
    word: Vec<usize>,
}

/// Cut points of the Borel subgroup: every position is a cut.
pub fn full_cuts(n: usize) -> Vec<usize> {
    (1..n).collect()
}

impl Coset {
    pub fn new(n: usize, cuts: Vec<usize>, word: Vec<usize>) -> Result<Self> {
        if word.len() != n {
            return Err(Error::shape(format!(
                "word length {} does not match n = {n}",
                word.len()
            )));
        }
        Permutation::new(word.clone())?;
        if cuts.windows(2).any(|w| w[0] >= w[1]) || cuts.iter().any(|&k| k == 0 || k >= n) {
            return Err(Error::shape(format!("invalid cut points {cuts:?} for n = {n}")));
        }
        let mut c = Coset { n, cuts, word };
        c.canonicalize();
        Ok(c)
    }

    /// The coset of W/W_{P_k} given by a k-subset of [n].
    pub fn from_subset(n: usize, subset: &[usize]) -> Result<Self> {
        let k = subset.len();
        if k == 0 || k >= n {
            return Err(Error::shape(format!("subset size {k} invalid for n = {n}")));
        }
        let mut word: Vec<usize> = subset.to_vec();
        let mut rest: Vec<usize> = (1..=n).filter(|x| !subset.contains(x)).collect();
        word.append(&mut rest);
        Coset::new(n, vec![k], word)
    }

    pub fn identity(n: usize, cuts: Vec<usize>) -> Result<Self> {
        Coset::new(n, cuts, (1..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    fn block_bounds(&self) -> Vec<(usize, usize)> {
        let mut bounds = Vec::new();
        let mut start = 0;
        for &k in &self.cuts {
            bounds.push((start, k));
            start = k;
        }
        bounds.push((start, self.n));
        bounds
    }

    fn canonicalize(&mut self) {
        for (a, b) in self.block_bounds() {
            self.word[a..b].sort();
        }
    }

    /// Number of inversions of the canonical (minimal) representative; this is
    /// the length of the coset in W/W_Q.
    pub fn length(&self) -> usize {
        Permutation(self.word.clone()).inversions()
    }

    /// Sorted prefix of the first k entries.
    fn sorted_prefix(&self, k: usize) -> Vec<usize> {
        let mut p: Vec<usize> = self.word[..k].to_vec();
        p.sort();
        p
    }

    fn check_same_shape(&self, other: &Coset) -> Result<()> {
        if self.n != other.n || self.cuts != other.cuts {
            return Err(Error::shape(format!(
                "cosets live in different quotients: n={}, cuts={:?} vs n={}, cuts={:?}",
                self.n, self.cuts, other.n, other.cuts
            )));
        }
        Ok(())
    }

    /// Bruhat order on W/W_Q: self <= other iff at every cut point the sorted
    /// prefixes compare componentwise.
    pub fn bruhat_leq(&self, other: &Coset) -> Result<bool> {
        self.check_same_shape(other)?;
        for &k in &self.cuts {
            let a = self.sorted_prefix(k);
            let b = other.sorted_prefix(k);
            if a.iter().zip(&b).any(|(x, y)| x > y) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Projects to the coarser parabolic given by a subset of the cut points.
    pub fn project(&self, coarser: &[usize]) -> Result<Coset> {
        if !coarser.iter().all(|k| self.cuts.contains(k)) {
            return Err(Error::shape(format!(
                "cuts {coarser:?} are not coarser than {:?}",
                self.cuts
            )));
        }
        Coset::new(self.n, coarser.to_vec(), self.word.clone())
    }

    /// The unique maximal preimage under projection from the finer parabolic:
    /// each coarse block is sorted descending before being cut into fine
    /// blocks.
    pub fn max_lift(&self, finer: &[usize]) -> Result<Coset> {
        if !self.cuts.iter().all(|k| finer.contains(k)) {
            return Err(Error::shape(format!(
                "cuts {finer:?} are not finer than {:?}",
                self.cuts
            )));
        }
        let mut word = self.word.clone();
        for (a, b) in self.block_bounds() {
            word[a..b].sort_by(|x, y| y.cmp(x));
        }
        Coset::new(self.n, finer.to_vec(), word)
    }

    /// The unique minimal preimage: coarse blocks sorted ascending.
    pub fn min_lift(&self, finer: &[usize]) -> Result<Coset> {
        if !self.cuts.iter().all(|k| finer.contains(k)) {
            return Err(Error::shape(format!(
                "cuts {finer:?} are not finer than {:?}",
                self.cuts
            )));
        }
        Coset::new(self.n, finer.to_vec(), self.word.clone())
    }

    /// True iff the coset is the maximal lift of its own projection to the
    /// maximal parabolic P_k (k must be one of the cut points).
    pub fn is_p_maximal(&self, k: usize) -> Result<bool> {
        let proj = self.project(&[k])?;
        Ok(proj.max_lift(&self.cuts)? == *self)
    }

    /// JSON encoding {n, cuts, blocks} with blocks listed left to right.
    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<Vec<usize>> = self
            .block_bounds()
            .into_iter()
            .map(|(a, b)| self.word[a..b].to_vec())
            .collect();
        serde_json::json!({ "n": self.n, "cuts": self.cuts, "blocks": blocks })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct CosetJson {
            n: usize,
            cuts: Vec<usize>,
            blocks: Vec<Vec<usize>>,
        }
        let j: CosetJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::parse(format!("coset json: {e}")))?;
        let word: Vec<usize> = j.blocks.into_iter().flatten().collect();
        Coset::new(j.n, j.cuts, word)
    }

    /// All cosets of W/W_Q for the given cuts, in sorted order.
    pub fn all(n: usize, cuts: &[usize]) -> Vec<Coset> {
        let mut out = Vec::new();
        let mut word: Vec<usize> = (1..=n).collect();
        permute_all(&mut word, 0, &mut |w| {
            let c = Coset::new(n, cuts.to_vec(), w.to_vec()).unwrap();
            out.push(c);
        });
        out.sort();
        out.dedup();
        out
    }
}

fn permute_all(word: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
    if at == word.len() {
        f(word);
        return;
    }
    for i in at..word.len() {
        word.swap(at, i);
        permute_all(word, at + 1, f);
        word.swap(at, i);
    }
}

/// The poset underlying the type-A stratification of G/Q: elements are pairs
/// (theta, i) with theta a one-column coset of W/W_{P_{k_i}}; the order is the
/// two-column semistandardness criterion.
#[derive(Debug, Clone)]
pub struct UnderlineW {
    pub n: usize,
    pub k_list: Vec<usize>,
    pub poset: GradedPoset,
    elems: BTreeMap<String, (Coset, usize)>,
}

/// Label "(134,3)" for the coset {1,3,4} in factor 3.
pub fn element_label(subset: &[usize], factor: usize) -> String {
    let digits: String = subset.iter().map(|x| x.to_string()).collect();
    format!("({digits},{factor})")
}

/// Parses "(134,3)" back into (subset, factor).
pub fn parse_element_label(label: &str) -> Result<(Vec<usize>, usize)> {
    let inner = label
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::parse(format!("bad element label '{label}'")))?;
    let (digits, factor) = inner
        .split_once(',')
        .ok_or_else(|| Error::parse(format!("bad element label '{label}'")))?;
    let subset: Vec<usize> = digits
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as usize)
                .ok_or_else(|| Error::parse(format!("bad entry in '{label}'")))
        })
        .collect::<Result<_>>()?;
    let factor: usize = factor
        .parse()
        .map_err(|_| Error::parse(format!("bad factor in '{label}'")))?;
    Ok((subset, factor))
}

impl UnderlineW {
    pub fn element(&self, label: &str) -> Option<&(Coset, usize)> {
        self.elems.get(label)
    }

    pub fn elements(&self) -> impl Iterator<Item = (&String, &(Coset, usize))> {
        self.elems.iter()
    }

    /// Cut points of Q_i = P_{k_i} cap ... cap P_{k_m}.
    pub fn tail_cuts(&self, i: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.k_list[i - 1..].to_vec();
        c.sort();
        c
    }

    pub fn q_cuts(&self) -> Vec<usize> {
        let mut c = self.k_list.clone();
        c.sort();
        c
    }

    /// The minimal lift to W/W_Q of the maximal lift of theta to W/W_{Q_i};
    /// the Schubert class naming the stratum of (theta, i).
    pub fn stratum_coset(&self, label: &str) -> Result<Coset> {
        let (theta, i) = self
            .elems
            .get(label)
            .ok_or_else(|| Error::domain(format!("unknown element '{label}'")))?;
        let lifted = theta.max_lift(&self.tail_cuts(*i))?;
        lifted.min_lift(&full_cuts(self.n))?.project(&self.q_cuts())
    }
}

/// Two-column semistandardness for the forward (ascending k) convention:
/// columns theta (length k_i) and phi (length k_j >= k_i) satisfy
/// (theta, i) >= (phi, j) iff i <= j and phi_s <= theta_s row by row.
fn geq_forward(theta: &(Vec<usize>, usize), phi: &(Vec<usize>, usize)) -> bool {
    let (tv, i) = theta;
    let (pv, j) = phi;
    if i > j {
        return false;
    }
    tv.iter().zip(pv.iter()).all(|(a, b)| b <= a)
}

/// The reversed (descending k) convention aligns columns at the bottom.
pub(crate) fn geq_anti(theta: &(Vec<usize>, usize), phi: &(Vec<usize>, usize)) -> bool {
    let (tv, i) = theta;
    let (pv, j) = phi;
    if i > j {
        return false;
    }
    // here k_i >= k_j, theta is the longer column
    let off = tv.len() - pv.len();
    pv.iter().enumerate().all(|(s, b)| b <= &tv[s + off])
}

/// Builds the graded poset on pairs (theta, i) for the parabolic determined by
/// ascending k_list; all bonds are 1.
pub fn build_underline_w(n: usize, k_list: &[usize]) -> Result<UnderlineW> {
    build_underline_w_with(n, k_list, geq_forward, true)
}

/// Shared construction; `ascending` selects the k_list validation direction.
pub(crate) fn build_underline_w_with(
    n: usize,
    k_list: &[usize],
    geq: fn(&(Vec<usize>, usize), &(Vec<usize>, usize)) -> bool,
    ascending: bool,
) -> Result<UnderlineW> {
    if k_list.is_empty()
        || k_list.iter().any(|&k| k == 0 || k >= n)
        || (ascending && k_list.windows(2).any(|w| w[0] >= w[1]))
        || (!ascending && k_list.windows(2).any(|w| w[0] <= w[1]))
    {
        return Err(Error::shape(format!("invalid k_list {k_list:?} for n = {n}")));
    }
    let m = k_list.len();
    let mut items: Vec<(String, Vec<usize>, usize)> = Vec::new();
    for (idx, &k) in k_list.iter().enumerate() {
        let i = idx + 1;
        subsets(n, k, &mut |s| {
            items.push((element_label(s, i), s.to_vec(), i));
        });
    }
    let mut elems = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    for (label, subset, i) in &items {
        let coset = Coset::from_subset(n, subset)?;
        let tail: Vec<usize> = {
            let mut c: Vec<usize> = k_list[i - 1..].to_vec();
            c.sort();
            c
        };
        let lifted = coset.max_lift(&tail)?;
        let rank = lifted.length() as u32 + (m - i) as u32;
        ranks.insert(label.clone(), rank);
        elems.insert(label.clone(), (coset, *i));
    }
    let key = |label: &String| -> (Vec<usize>, usize) {
        let (c, i) = &elems[label];
        (c.word()[..c.cuts()[0]].to_vec(), *i)
    };
    let labels: Vec<String> = items.iter().map(|(l, _, _)| l.clone()).collect();
    let mut covers: Vec<(String, String)> = Vec::new();
    for a in &labels {
        for b in &labels {
            if a != b && geq(&key(a), &key(b)) {
                let strictly_between = labels.iter().any(|c| {
                    c != a && c != b && geq(&key(a), &key(c)) && geq(&key(c), &key(b))
                });
                if !strictly_between {
                    covers.push((a.clone(), b.clone()));
                }
            }
        }
    }
    let poset = GradedPoset::new(labels, covers, ranks, BTreeMap::new())?;
    let diags = poset.validate();
    if !diags.is_empty() {
        return Err(Error::data(format!(
            "underline-W poset failed validation: {}",
            diags.join("; ")
        )));
    }
    Ok(UnderlineW {
        n,
        k_list: k_list.to_vec(),
        poset,
        elems,
    })
}

fn subsets(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, f);
}
