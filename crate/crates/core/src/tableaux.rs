//! Young tableaux with prescribed column lengths, semistandardness, and the
//! bijection with sums of unit vectors over chains in the underlying poset.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qvec::QVector;
use crate::rational::Rat;
use crate::weyl::{element_label, UnderlineW};

/// A Young tableau stored column by column, left to right. Columns are
/// strictly increasing top to bottom and lengths weakly decrease left to
/// right.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub columns: Vec<Vec<usize>>,
}

/// A shape relative to a k_list: `counts[i]` columns of length `k_list[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub counts: Vec<usize>,
}

impl Shape {
    pub fn new(counts: Vec<usize>) -> Self {
        Shape { counts }
    }
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }
}

impl Tableau {
    pub fn new(columns: Vec<Vec<usize>>) -> Result<Self> {
        let t = Tableau { columns };
        t.check_structure()?;
        Ok(t)
    }

    pub fn empty() -> Self {
        Tableau { columns: vec![] }
    }

    fn check_structure(&self) -> Result<()> {
        for col in &self.columns {
            if col.is_empty() || col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::shape(format!(
                    "column {col:?} is not strictly increasing"
                )));
            }
        }
        if self
            .columns
            .windows(2)
            .any(|w| w[0].len() < w[1].len())
        {
            return Err(Error::shape(
                "column lengths must weakly decrease left to right".to_string(),
            ));
        }
        Ok(())
    }

    /// Row-weak / column-strict condition. Column strictness is structural, so
    /// this reduces to the two-column test on every adjacent pair.
    pub fn is_semistandard(&self) -> bool {
        self.columns.windows(2).all(|w| {
            let (left, right) = (&w[0], &w[1]);
            right.iter().enumerate().all(|(r, x)| left[r] <= *x)
        })
    }

    /// Rows of the tableau (top-aligned), for rendering.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let height = self.columns.first().map(|c| c.len()).unwrap_or(0);
        (0..height)
            .map(|r| {
                self.columns
                    .iter()
                    .filter(|c| c.len() > r)
                    .map(|c| c[r])
                    .collect()
            })
            .collect()
    }

    pub fn render(&self) -> String {
        if self.columns.is_empty() {
            return "(empty)".to_string();
        }
        self.rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Number of columns of each length in `k_list`, as a shape.
    pub fn shape_for(&self, k_list: &[usize]) -> Result<Shape> {
        let mut counts = vec![0usize; k_list.len()];
        for col in &self.columns {
            let Some(pos) = k_list.iter().position(|&k| k == col.len()) else {
                return Err(Error::shape(format!(
                    "column length {} not among {k_list:?}",
                    col.len()
                )));
            };
            counts[pos] += 1;
        }
        Ok(Shape::new(counts))
    }
}

/// Semistandardness under the reversed (bottom-right aligned) convention:
/// column lengths weakly increase left to right and rows, aligned at the
/// bottom, weakly increase.
pub fn is_anti_semistandard(columns: &[Vec<usize>]) -> bool {
    for col in columns {
        if col.is_empty() || col.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
    }
    if columns.windows(2).any(|w| w[0].len() > w[1].len()) {
        return false;
    }
    columns.windows(2).all(|w| {
        let (left, right) = (&w[0], &w[1]);
        let off = right.len() - left.len();
        left.iter().enumerate().all(|(r, x)| *x <= right[r + off])
    })
}

/// Enumerates all semistandard tableaux with entries in [1, n] of the given
/// shape, in a deterministic (lexicographic) order.
pub fn enumerate_ssyt(n: usize, k_list: &[usize], shape: &Shape) -> Result<Vec<Tableau>> {
    if shape.counts.len() != k_list.len() {
        return Err(Error::shape(format!(
            "shape has {} entries, k_list has {}",
            shape.counts.len(),
            k_list.len()
        )));
    }
    // column lengths, weakly decreasing left to right
    let mut lengths = Vec::new();
    for i in (0..k_list.len()).rev() {
        for _ in 0..shape.counts[i] {
            lengths.push(k_list[i]);
        }
    }
    if lengths.iter().any(|&l| l > n) {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut cols: Vec<Vec<usize>> = Vec::new();
    fill_columns(n, &lengths, &mut cols, &mut out);
    Ok(out)
}

fn fill_columns(n: usize, lengths: &[usize], cols: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
    if cols.len() == lengths.len() {
        out.push(Tableau {
            columns: cols.clone(),
        });
        return;
    }
    let len = lengths[cols.len()];
    let prev = cols.last().cloned();
    let mut col = Vec::new();
    fill_one(n, len, 1, &prev, &mut col, &mut |c| {
        cols.push(c.to_vec());
        fill_columns(n, lengths, cols, out);
        cols.pop();
    });
}

fn fill_one(
    n: usize,
    len: usize,
    min_entry: usize,
    prev: &Option<Vec<usize>>,
    col: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if col.len() == len {
        f(col);
        return;
    }
    let r = col.len();
    let lo = min_entry.max(prev.as_ref().map(|p| p[r]).unwrap_or(1));
    for x in lo..=n {
        col.push(x);
        fill_one(n, len, x + 1, prev, col, f);
        col.pop();
    }
}

/// The element of the fan of monoids corresponding to a semistandard tableau:
/// the sum of unit vectors over its columns.
pub fn tableau_to_gamma(t: &Tableau, uw: &UnderlineW) -> Result<QVector> {
    t.check_structure()?;
    if !t.is_semistandard() {
        return Err(Error::domain("tableau is not semistandard".to_string()));
    }
    let mut v = QVector::zero();
    for col in &t.columns {
        let Some(i) = uw.k_list.iter().position(|&k| k == col.len()) else {
            return Err(Error::shape(format!(
                "column length {} not in k_list {:?}",
                col.len(),
                uw.k_list
            )));
        };
        let label = element_label(col, i + 1);
        if uw.element(&label).is_none() {
            return Err(Error::domain(format!("column {label} is out of range")));
        }
        v.set(&label, v.get(&label) + Rat::from_integer(1.into()));
    }
    Ok(v)
}

/// Inverse of [`tableau_to_gamma`]: the columns are the support elements with
/// multiplicity, ordered so the tableau is semistandard.
pub fn gamma_to_tableau(v: &QVector, uw: &UnderlineW) -> Result<Tableau> {
    if !v.is_natural() {
        return Err(Error::domain(
            "vector must have non-negative integer coefficients".to_string(),
        ));
    }
    let chain = uw.poset.sort_chain(&v.support())?;
    // ascending in the poset = left to right in the tableau
    let mut columns = Vec::new();
    for label in chain.labels.iter().rev() {
        let (coset, _i) = uw
            .element(label)
            .ok_or_else(|| Error::domain(format!("unknown element '{label}'")))?;
        let mult = v.get(label);
        let count = mult.numer().clone();
        let mut k = num_bigint::BigInt::zero();
        while k < count {
            columns.push(coset.word()[..coset.cuts()[0]].to_vec());
            k += 1;
        }
    }
    let t = Tableau::new(columns)?;
    if !t.is_semistandard() {
        return Err(Error::domain(
            "support is not a chain of the tableau order".to_string(),
        ));
    }
    Ok(t)
}

/// Column counts by length, as a shape; agrees with the degree map on the
/// corresponding fan element.
pub fn degree_of_tableau(t: &Tableau, k_list: &[usize]) -> Result<Shape> {
    t.shape_for(k_list)
}
