//! Sparse rational vectors indexed by poset elements.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{GradedPoset, TotalOrder};
use crate::rational::{fmt_rat, parse_rat, Rat};

/// A finitely supported vector with rational coefficients, indexed by element
/// labels. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QVector {
    entries: BTreeMap<String, Rat>,
}

impl QVector {
    pub fn zero() -> Self {
        QVector::default()
    }

    pub fn unit(label: &str) -> Self {
        let mut v = QVector::default();
        v.set(label, Rat::from_integer(BigInt::from(1)));
        v
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (String, Rat)>) -> Self {
        let mut v = QVector::default();
        for (l, c) in entries {
            v.set(&l, c);
        }
        v
    }

    pub fn set(&mut self, label: &str, value: Rat) {
        if value.is_zero() {
            self.entries.remove(label);
        } else {
            self.entries.insert(label.to_string(), value);
        }
    }

    pub fn get(&self, label: &str) -> Rat {
        self.entries.get(label).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> QVector {
        if c.is_zero() {
            return QVector::zero();
        }
        QVector {
            entries: self
                .entries
                .iter()
                .map(|(l, v)| (l.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> Rat {
        self.entries.values().cloned().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| v >= &Rat::zero())
    }

    /// All coefficients are non-negative integers.
    pub fn is_natural(&self) -> bool {
        self.entries
            .values()
            .all(|v| v >= &Rat::zero() && v.is_integer())
    }

    /// Componentwise v <= w.
    pub fn dominated_by(&self, w: &QVector) -> bool {
        self.entries.iter().all(|(l, c)| c <= &w.get(l))
    }

    /// The support element that is largest in the poset order; requires the
    /// support to be a chain.
    pub fn max_support(&self, poset: &GradedPoset) -> Result<Option<String>> {
        let supp = self.support();
        if supp.is_empty() {
            return Ok(None);
        }
        let chain = poset.sort_chain(&supp)?;
        Ok(Some(chain.labels[0].clone()))
    }

    pub fn min_support(&self, poset: &GradedPoset) -> Result<Option<String>> {
        let supp = self.support();
        if supp.is_empty() {
            return Ok(None);
        }
        let chain = poset.sort_chain(&supp)?;
        Ok(Some(chain.labels.last().unwrap().clone()))
    }

    /// Lexicographic comparison induced by a total order: the sign of
    /// self - other is decided at the order-largest element where they differ.
    pub fn lex_cmp(&self, other: &QVector, order: &TotalOrder) -> std::cmp::Ordering {
        for label in &order.labels {
            let a = self.get(label);
            let b = other.get(label);
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Renders the vector with terms ordered by descending (rank, label).
    pub fn display(&self, poset: &GradedPoset) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&String> = self.entries.keys().collect();
        keys.sort_by_key(|l| {
            (
                std::cmp::Reverse(poset.rank_of(l).unwrap_or(0)),
                (*l).clone(),
            )
        });
        let mut parts = Vec::new();
        for l in keys {
            let c = &self.entries[l];
            if c == &Rat::from_integer(BigInt::from(1)) {
                parts.push(format!("e_{l}"));
            } else {
                parts.push(format!("{} e_{l}", fmt_rat(c)));
            }
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<QVecEntry> = self
            .entries
            .iter()
            .map(|(l, c)| QVecEntry {
                element: l.clone(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        serde_json::json!({ "entries": entries })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parsed: QVecJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::parse(format!("qvector json: {e}")))?;
        let mut out = QVector::zero();
        for e in parsed.entries {
            let r = parse_rat(&format!("{}/{}", e.num, e.den))?;
            out.set(&e.element, out.get(&e.element) + r);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct QVecEntry {
    element: String,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct QVecJson {
    entries: Vec<QVecEntry>,
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        let mut out = self.clone();
        for (l, c) in rhs.entries.iter() {
            out.set(l, out.get(l) + c.clone());
        }
        out
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        let mut out = self.clone();
        for (l, c) in rhs.entries.iter() {
            out.set(l, out.get(l) - c.clone());
        }
        out
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector {
            entries: self
                .entries
                .iter()
                .map(|(l, c)| (l.clone(), -c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    #[test]
    fn arithmetic_and_support() {
        let mut v = QVector::unit("X");
        v.set("01", rat_frac(1, 2));
        let w = QVector::unit("01");
        let s = &v + &w;
        assert_eq!(s.get("01"), rat_frac(3, 2));
        let d = &s - &v;
        assert_eq!(d, w);
        assert!((&v - &v).is_zero());
        assert_eq!(v.support(), vec!["01".to_string(), "X".to_string()]);
    }

    #[test]
    fn lex_order_uses_largest_differing_element() {
        let order = TotalOrder::new(vec!["X".into(), "a".into(), "b".into()]);
        let mut v = QVector::zero();
        v.set("X", rat_frac(1, 2));
        v.set("a", rat(5));
        let w = QVector::unit("X");
        assert_eq!(v.lex_cmp(&w, &order), std::cmp::Ordering::Less);
    }

    #[test]
    fn json_roundtrip() {
        let mut v = QVector::zero();
        v.set("X", rat_frac(-3, 7));
        v.set("0", rat(2));
        let j = v.to_json();
        assert_eq!(QVector::from_json(&j).unwrap(), v);
    }
}
