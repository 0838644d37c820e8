//! The combinatorial record of a multiprojective Seshadri stratification and
//! the checkable consequences of its axioms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::GradedPoset;
use crate::qvec::QVector;
use crate::weyl::{build_underline_w, UnderlineW};

/// Combinatorial stratification data: a graded poset with bonds, the index
/// set I_p of every stratum and the multidegree of its extremal function.
///
/// The geometric axioms enter only through their arithmetic consequences;
/// beyond the checks in [`validate_strat`] the data is trusted input.
#[derive(Debug, Clone)]
pub struct StratData {
    pub poset: GradedPoset,
    pub m: usize,
    pub index_sets: BTreeMap<String, BTreeSet<usize>>,
    pub degrees: BTreeMap<String, Vec<u64>>,
    /// Display names of the extremal functions, when known.
    pub extremal: BTreeMap<String, String>,
    /// Explicitly attached monoid generators per maximal chain (label
    /// sequence, top first). Used by the fan module when a chain is neither
    /// of Hodge nor LS type.
    pub explicit_gamma: BTreeMap<Vec<String>, Vec<QVector>>,
}

impl StratData {
    pub fn degree_of(&self, label: &str) -> Result<&Vec<u64>> {
        self.degrees
            .get(label)
            .ok_or_else(|| Error::domain(format!("no degree for element '{label}'")))
    }

    pub fn index_set_of(&self, label: &str) -> Result<&BTreeSet<usize>> {
        self.index_sets
            .get(label)
            .ok_or_else(|| Error::domain(format!("no index set for element '{label}'")))
    }

    /// Serializes to the interchange schema
    /// {m, elements:[{label, rank, index_set, degree}], covers:[{top,bottom,bond}]}.
    pub fn to_json(&self) -> String {
        let j = StratJson {
            m: self.m,
            elements: self
                .poset
                .elements()
                .iter()
                .map(|l| ElementJson {
                    label: l.clone(),
                    rank: self.poset.rank_of(l).unwrap(),
                    index_set: self.index_sets[l].iter().copied().collect(),
                    degree: self.degrees[l].clone(),
                    extremal: self.extremal.get(l).cloned(),
                })
                .collect(),
            covers: self
                .poset
                .cover_triples()
                .into_iter()
                .map(|(top, bottom, bond)| CoverJson { top, bottom, bond })
                .collect(),
        };
        serde_json::to_string_pretty(&j).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: StratJson = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("stratification json: {e}")))?;
        let elements: Vec<String> = j.elements.iter().map(|e| e.label.clone()).collect();
        let ranks: BTreeMap<String, u32> = j
            .elements
            .iter()
            .map(|e| (e.label.clone(), e.rank))
            .collect();
        let covers: Vec<(String, String)> = j
            .covers
            .iter()
            .map(|c| (c.top.clone(), c.bottom.clone()))
            .collect();
        let bonds: BTreeMap<(String, String), u64> = j
            .covers
            .iter()
            .map(|c| ((c.top.clone(), c.bottom.clone()), c.bond))
            .collect();
        let poset = GradedPoset::new(elements, covers, ranks, bonds)?;
        let mut index_sets = BTreeMap::new();
        let mut degrees = BTreeMap::new();
        let mut extremal = BTreeMap::new();
        for e in j.elements {
            if e.degree.len() != j.m {
                return Err(Error::shape(format!(
                    "degree of '{}' has length {}, expected m = {}",
                    e.label,
                    e.degree.len(),
                    j.m
                )));
            }
            index_sets.insert(e.label.clone(), e.index_set.iter().copied().collect());
            degrees.insert(e.label.clone(), e.degree);
            if let Some(f) = e.extremal {
                extremal.insert(e.label, f);
            }
        }
        Ok(StratData {
            poset,
            m: j.m,
            index_sets,
            degrees,
            extremal,
            explicit_gamma: BTreeMap::new(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    label: String,
    rank: u32,
    index_set: Vec<usize>,
    degree: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extremal: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    top: String,
    bottom: String,
    bond: u64,
}

#[derive(Serialize, Deserialize)]
struct StratJson {
    m: usize,
    elements: Vec<ElementJson>,
    covers: Vec<CoverJson>,
}

/// The index poset: the distinct sets I_p ordered by inclusion.
#[derive(Debug, Clone)]
pub struct IndexPoset {
    pub sets: Vec<BTreeSet<usize>>,
}

impl IndexPoset {
    pub fn of(s: &StratData) -> Self {
        let mut sets: Vec<BTreeSet<usize>> = s.index_sets.values().cloned().collect();
        sets.sort_by_key(|x| (x.len(), x.iter().copied().collect::<Vec<_>>()));
        sets.dedup();
        IndexPoset { sets }
    }

    pub fn contains(&self, set: &BTreeSet<usize>) -> bool {
        self.sets.iter().any(|s| s == set)
    }

    /// Sets covered by `i` in the inclusion order.
    pub fn covered_by(&self, i: &BTreeSet<usize>) -> Vec<&BTreeSet<usize>> {
        let below: Vec<&BTreeSet<usize>> = self
            .sets
            .iter()
            .filter(|j| j.is_subset(i) && *j != i)
            .collect();
        below
            .iter()
            .copied()
            .filter(|j| !below.iter().any(|k| j.is_subset(k) && j != k))
            .collect()
    }

    pub fn is_totally_ordered(&self) -> bool {
        self.sets
            .windows(2)
            .all(|w| w[0].is_subset(&w[1]))
    }

    /// Length of the longest chain (number of inclusions).
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.sets.len()];
        for i in 0..self.sets.len() {
            for j in 0..i {
                if self.sets[j].is_subset(&self.sets[i]) && self.sets[j] != self.sets[i] {
                    h[i] = h[i].max(h[j] + 1);
                }
            }
        }
        h.into_iter().max().unwrap_or(0)
    }
}

/// The subset of I generated by the covering relations of the index poset:
/// I itself when I is minimal, otherwise the union of the differences I \ J
/// over all covers J of I.
pub fn underline_index(s: &StratData, i: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    let ip = IndexPoset::of(s);
    if !ip.contains(i) {
        return Err(Error::domain(format!(
            "index set {i:?} does not occur in the stratification"
        )));
    }
    let covers = ip.covered_by(i);
    if covers.is_empty() {
        return Ok(i.clone());
    }
    let mut u = BTreeSet::new();
    for j in covers {
        for x in i.difference(j) {
            u.insert(*x);
        }
    }
    Ok(u)
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// All bonds are 1.
    pub is_hodge: bool,
    /// The degree conditions of LS-type hold: every degree component is at
    /// most 1, equal index sets force equal degrees, and every degree is the
    /// indicator vector of the underline of its index set. The condition on
    /// the fan of monoids itself is not decided here.
    pub is_ls_candidate: bool,
}

pub fn classify(s: &StratData) -> Classification {
    let is_hodge = s.poset.cover_triples().iter().all(|(_, _, b)| *b == 1);
    let mut ls = true;
    for (label, deg) in &s.degrees {
        if deg.iter().any(|&d| d > 1) {
            ls = false;
            break;
        }
        let Ok(u) = underline_index(s, &s.index_sets[label]) else {
            ls = false;
            break;
        };
        let want: Vec<u64> = (1..=s.m)
            .map(|i| if u.contains(&i) { 1 } else { 0 })
            .collect();
        if deg != &want {
            ls = false;
            break;
        }
    }
    if ls {
        // equal index sets force equal degrees; implied by the check above,
        // but kept for index sets whose elements disagree
        let mut by_set: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
        for (label, deg) in &s.degrees {
            let key: Vec<usize> = s.index_sets[label].iter().copied().collect();
            if let Some(prev) = by_set.insert(key, deg.clone()) {
                if &prev != deg {
                    ls = false;
                    break;
                }
            }
        }
    }
    Classification {
        is_hodge,
        is_ls_candidate: ls,
    }
}

/// Checks every checkable numeric consequence of the stratification axioms
/// and returns one diagnostic per violation.
pub fn validate_strat(s: &StratData) -> Vec<String> {
    let mut out = s.poset.validate();
    for l in s.poset.elements() {
        if !s.index_sets.contains_key(l) {
            out.push(format!("missing index set for '{l}'"));
        }
        match s.degrees.get(l) {
            None => out.push(format!("missing degree for '{l}'")),
            Some(d) => {
                if d.len() != s.m {
                    out.push(format!("degree of '{l}' has wrong length"));
                } else {
                    if d.iter().all(|&x| x == 0) {
                        out.push(format!("extremal function of '{l}' is constant (degree 0)"));
                    }
                    if let Some(is) = s.index_sets.get(l) {
                        for (i, &x) in d.iter().enumerate() {
                            if x > 0 && !is.contains(&(i + 1)) {
                                out.push(format!(
                                    "degree of '{l}' is supported outside its index set"
                                ));
                                break;
                            }
                        }
                    }
                }
            }
        }
        if let Some(is) = s.index_sets.get(l) {
            if is.is_empty() || is.iter().any(|&i| i == 0 || i > s.m) {
                out.push(format!("index set of '{l}' is not a subset of [m]"));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    let full: BTreeSet<usize> = (1..=s.m).collect();
    let maxima = s.poset.maximal_elements();
    if maxima.len() != 1 {
        out.push(format!(
            "expected a unique maximal element, found {}",
            maxima.len()
        ));
    } else if s.index_sets[&maxima[0]] != full {
        out.push(format!(
            "maximal element '{}' must have index set [m]",
            maxima[0]
        ));
    }
    for l in s.poset.minimal_elements() {
        if s.index_sets[&l].len() != 1 {
            out.push(format!("minimal element '{l}' must have a singleton index set"));
        }
    }
    for (top, bottom, bond) in s.poset.cover_triples() {
        let it = &s.index_sets[&top];
        let ib = &s.index_sets[&bottom];
        if !ib.is_subset(it) {
            out.push(format!(
                "index sets not monotone along cover ('{top}', '{bottom}')"
            ));
            continue;
        }
        let dropped: Vec<usize> = it.difference(ib).copied().collect();
        if dropped.len() > 1 {
            out.push(format!(
                "cover ('{top}', '{bottom}') drops {} indices, at most one allowed",
                dropped.len()
            ));
        } else if dropped.len() == 1 {
            let i = dropped[0];
            let d = s.degrees[&top][i - 1];
            if d != bond {
                out.push(format!(
                    "bond/degree mismatch on cover ('{top}', '{bottom}'): bond {bond} but degree component {i} is {d}"
                ));
            }
        }
    }
    let ip = IndexPoset::of(s);
    if ip.height() != s.m - 1 {
        out.push(format!(
            "index poset has height {}, expected m - 1 = {}",
            ip.height(),
            s.m - 1
        ));
    }
    out
}

/// A type-A stratification together with its Weyl-combinatorial context.
#[derive(Debug, Clone)]
pub struct TypeA {
    pub uw: UnderlineW,
    pub strat: StratData,
}

/// The stratification of the partial flag variety for ascending k_list:
/// index sets {i, ..., m}, degrees the unit vectors, all bonds 1.
pub fn build_type_a(n: usize, k_list: &[usize]) -> Result<TypeA> {
    let uw = build_underline_w(n, k_list)?;
    let strat = strat_from_uw(&uw)?;
    Ok(TypeA { uw, strat })
}

pub(crate) fn strat_from_uw(uw: &UnderlineW) -> Result<StratData> {
    let m = uw.k_list.len();
    let mut index_sets = BTreeMap::new();
    let mut degrees = BTreeMap::new();
    let mut extremal = BTreeMap::new();
    for (label, (_, i)) in uw.elements() {
        index_sets.insert(label.clone(), (*i..=m).collect::<BTreeSet<usize>>());
        let mut d = vec![0u64; m];
        d[*i - 1] = 1;
        degrees.insert(label.clone(), d);
        extremal.insert(label.clone(), format!("p{label}"));
    }
    let s = StratData {
        poset: uw.poset.clone(),
        m,
        index_sets,
        degrees,
        extremal,
        explicit_gamma: BTreeMap::new(),
    };
    let diags = validate_strat(&s);
    if !diags.is_empty() {
        return Err(Error::data(format!(
            "type-A stratification failed validation: {}",
            diags.join("; ")
        )));
    }
    Ok(s)
}
