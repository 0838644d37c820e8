//! Exact Pluecker-coordinate evaluation, straightening into the semistandard
//! monomial basis, quasi-valuations of Pluecker expressions, and the
//! vanishing/standardness predicates of the type-A stratification.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poset::TotalOrder;
use crate::qvec::QVector;
use crate::rational::{fmt_rat, parse_rat, Rat};
use crate::strat::StratData;
use crate::tableaux::{enumerate_ssyt, Shape, Tableau};
use crate::weyl::{element_label, full_cuts, Coset, UnderlineW};

/// One Pluecker coordinate: a column theta in factor i (so |theta| = k_i).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlCol {
    pub entries: Vec<usize>,
    pub factor: usize,
}

/// A product of Pluecker coordinates, stored sorted by (factor descending,
/// entries ascending); this matches the left-to-right column order of the
/// associated tableau.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlueckerMonomial {
    cols: Vec<PlCol>,
}

impl PlueckerMonomial {
    pub fn new(mut cols: Vec<PlCol>) -> Self {
        cols.sort_by(|a, b| b.factor.cmp(&a.factor).then(a.entries.cmp(&b.entries)));
        PlueckerMonomial { cols }
    }

    pub fn one() -> Self {
        PlueckerMonomial { cols: vec![] }
    }

    pub fn cols(&self) -> &[PlCol] {
        &self.cols
    }

    pub fn to_tableau(&self) -> Result<Tableau> {
        Tableau::new(self.cols.iter().map(|c| c.entries.clone()).collect())
    }

    pub fn from_tableau(t: &Tableau, k_list: &[usize]) -> Result<Self> {
        let mut cols = Vec::new();
        for col in &t.columns {
            let Some(i) = k_list.iter().position(|&k| k == col.len()) else {
                return Err(Error::shape(format!(
                    "column length {} not in k_list {k_list:?}",
                    col.len()
                )));
            };
            cols.push(PlCol {
                entries: col.clone(),
                factor: i + 1,
            });
        }
        Ok(PlueckerMonomial::new(cols))
    }

    pub fn is_standard(&self) -> bool {
        self.to_tableau().map(|t| t.is_semistandard()).unwrap_or(false)
    }

    /// Multidegree: the number of columns per factor.
    pub fn degree(&self, m: usize) -> Vec<u64> {
        let mut d = vec![0u64; m];
        for c in &self.cols {
            d[c.factor - 1] += 1;
        }
        d
    }

    pub fn render(&self) -> String {
        if self.cols.is_empty() {
            return "1".to_string();
        }
        self.cols
            .iter()
            .map(|c| {
                format!(
                    "p[{}]",
                    c.entries
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// An exact linear combination of Pluecker monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlueckerExpr {
    pub terms: BTreeMap<PlueckerMonomial, Rat>,
}

impl PlueckerExpr {
    pub fn zero() -> Self {
        PlueckerExpr::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: PlueckerMonomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_insert_with(Rat::zero);
        *e += coeff;
        let dead: Vec<PlueckerMonomial> = self
            .terms
            .iter()
            .filter(|(_, c)| c.is_zero())
            .map(|(m, _)| m.clone())
            .collect();
        for m in dead {
            self.terms.remove(&m);
        }
    }

    /// The common multidegree; None when mixed.
    pub fn multidegree(&self, m: usize) -> Option<Vec<u64>> {
        let mut deg = None;
        for mono in self.terms.keys() {
            let d = mono.degree(m);
            match &deg {
                None => deg = Some(d),
                Some(prev) => {
                    if prev != &d {
                        return None;
                    }
                }
            }
        }
        deg
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (mono, c) in &self.terms {
            let cs = fmt_rat(c);
            if cs == "1" {
                parts.push(mono.render());
            } else if cs == "-1" {
                parts.push(format!("- {}", mono.render()));
            } else {
                parts.push(format!("{} * {}", cs, mono.render()));
            }
        }
        parts.join(" + ").replace("+ -", "-")
    }
}

/// Parses `p[1] * p[2,3] - p[2] * p[1,3]`; the factor of each column is
/// inferred from its length via the k_list.
pub fn parse_expr(text: &str, n: usize, k_list: &[usize]) -> Result<PlueckerExpr> {
    let mut out = PlueckerExpr::zero();
    let mut terms: Vec<(i32, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = 1;
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' if depth == 0 => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.clone()));
                }
                cur.clear();
                sign = 1;
            }
            '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.clone()));
                }
                cur.clear();
                sign = -1;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur));
    }
    for (sign, term) in terms {
        let mut coeff = Rat::from_integer(BigInt::from(sign));
        let mut cols = Vec::new();
        for factor in term.split(['*', ' ']).map(str::trim).filter(|f| !f.is_empty()) {
            if let Some(rest) = factor.strip_prefix("p[") {
                let inner = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(format!("bad factor '{factor}'")))?;
                let entries: Vec<usize> = inner
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::parse(format!("bad entry in '{factor}'")))
                    })
                    .collect::<Result<_>>()?;
                if entries.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::parse(format!(
                        "column entries must be strictly increasing in '{factor}'"
                    )));
                }
                if entries.iter().any(|&x| x == 0 || x > n) {
                    return Err(Error::parse(format!("entry out of range in '{factor}'")));
                }
                let Some(i) = k_list.iter().position(|&k| k == entries.len()) else {
                    return Err(Error::parse(format!(
                        "no factor has columns of length {} (k_list {k_list:?})",
                        entries.len()
                    )));
                };
                cols.push(PlCol {
                    entries,
                    factor: i + 1,
                });
            } else {
                coeff *= parse_rat(factor)?;
            }
        }
        out.add_term(PlueckerMonomial::new(cols), coeff);
    }
    Ok(out)
}

/// Evaluates one Pluecker coordinate at a matrix: the minor on rows theta and
/// the first |theta| columns.
pub fn evaluate_col(col: &PlCol, mat: &[Vec<Rat>]) -> Rat {
    let k = col.entries.len();
    let sub: Vec<Vec<Rat>> = col
        .entries
        .iter()
        .map(|&r| mat[r - 1][..k].to_vec())
        .collect();
    linalg::det(&sub)
}

pub fn evaluate_monomial(mono: &PlueckerMonomial, mat: &[Vec<Rat>]) -> Rat {
    let mut v = Rat::one();
    for c in mono.cols() {
        v *= evaluate_col(c, mat);
    }
    v
}

pub fn evaluate_expr(expr: &PlueckerExpr, mat: &[Vec<Rat>]) -> Rat {
    let mut v = Rat::zero();
    for (mono, c) in &expr.terms {
        v += c.clone() * evaluate_monomial(mono, mat);
    }
    v
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Rat::from_integer(BigInt::from(rng.random_range(-10i64..=10))))
                .collect()
        })
        .collect()
}

/// Straightening metadata: the seed and the number of sample batches used.
#[derive(Debug, Clone)]
pub struct StraightenMeta {
    pub seed: u64,
    pub resamples: u32,
}

/// Expands a multihomogeneous expression in the semistandard monomial basis
/// of its degree by exact interpolation: the basis and the input are
/// evaluated at random small-integer matrices and the (square) linear system
/// is solved exactly; the result is certified by re-evaluation at fresh
/// points.
pub fn straighten(
    expr: &PlueckerExpr,
    n: usize,
    k_list: &[usize],
    seed: u64,
) -> Result<(PlueckerExpr, StraightenMeta)> {
    if expr.is_zero() {
        return Ok((
            PlueckerExpr::zero(),
            StraightenMeta { seed, resamples: 0 },
        ));
    }
    let m = k_list.len();
    let Some(deg) = expr.multidegree(m) else {
        return Err(Error::domain(
            "expression is not multihomogeneous".to_string(),
        ));
    };
    let shape = Shape::new(deg.iter().map(|&d| d as usize).collect());
    let basis_tabs = enumerate_ssyt(n, k_list, &shape)?;
    let basis: Vec<PlueckerMonomial> = basis_tabs
        .iter()
        .map(|t| PlueckerMonomial::from_tableau(t, k_list))
        .collect::<Result<_>>()?;
    let dim = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resamples = 0;
    let coeffs = loop {
        let mats: Vec<Vec<Vec<Rat>>> = (0..dim).map(|_| random_matrix(n, &mut rng)).collect();
        let a: Vec<Vec<Rat>> = mats
            .iter()
            .map(|mat| basis.iter().map(|b| evaluate_monomial(b, mat)).collect())
            .collect();
        let rhs: Vec<Rat> = mats.iter().map(|mat| evaluate_expr(expr, mat)).collect();
        if let Some(c) = linalg::solve_unique(&a, &rhs) {
            break c;
        }
        resamples += 1;
        if resamples > 32 {
            return Err(Error::data(
                "persistent rank deficiency while straightening".to_string(),
            ));
        }
    };
    let mut out = PlueckerExpr::zero();
    for (b, c) in basis.iter().zip(coeffs) {
        out.add_term(b.clone(), c);
    }
    // certify on fresh samples
    for _ in 0..10 {
        let mat = random_matrix(n, &mut rng);
        if evaluate_expr(expr, &mat) != evaluate_expr(&out, &mat) {
            return Err(Error::data(
                "straightening failed re-evaluation".to_string(),
            ));
        }
    }
    Ok((out, StraightenMeta { seed, resamples }))
}

/// Quasi-valuation of a Pluecker expression: straighten, map every standard
/// term to its fan element, and take the lexicographic minimum.
pub fn quasi_valuation_pluecker(
    expr: &PlueckerExpr,
    uw: &UnderlineW,
    order: &TotalOrder,
    seed: u64,
) -> Result<QVector> {
    if expr.is_zero() {
        return Err(Error::domain("zero expression".to_string()));
    }
    let (std_expr, _) = straighten(expr, uw.n, &uw.k_list, seed)?;
    if std_expr.is_zero() {
        return Err(Error::domain(
            "expression vanishes identically on the variety".to_string(),
        ));
    }
    let mut best: Option<QVector> = None;
    for mono in std_expr.terms.keys() {
        let t = mono.to_tableau()?;
        let v = crate::tableaux::tableau_to_gamma(&t, uw)?;
        best = Some(match best {
            None => v,
            Some(b) => {
                if v.lex_cmp(&b, order) == std::cmp::Ordering::Less {
                    v
                } else {
                    b
                }
            }
        });
    }
    Ok(best.unwrap())
}

/// Whether the Pluecker coordinate of `col` vanishes identically on the
/// multicone of the stratum `(theta, i)`: always for columns of an earlier
/// factor, and otherwise exactly when the column fails to lie under the
/// projected maximal lift.
pub fn vanishes_on_stratum(uw: &UnderlineW, col: &str, stratum: &str) -> Result<bool> {
    let (phi, j) = uw
        .element(col)
        .ok_or_else(|| Error::domain(format!("unknown column '{col}'")))?
        .clone();
    let (theta, i) = uw
        .element(stratum)
        .ok_or_else(|| Error::domain(format!("unknown stratum '{stratum}'")))?
        .clone();
    if j < i {
        return Ok(true);
    }
    let kappa = theta
        .max_lift(&uw.tail_cuts(i))?
        .project(&[uw.k_list[j - 1]])?;
    Ok(!phi.bruhat_leq(&kappa)?)
}

/// Whether a Pluecker coordinate vanishes on the Schubert multicone of w
/// inside the full multicone: the column must fail to lie under pi_{P_k}(w).
pub fn vanishes_on_schubert(
    uw: &UnderlineW,
    col: &str,
    w: &Coset,
) -> Result<bool> {
    let (phi, j) = uw
        .element(col)
        .ok_or_else(|| Error::domain(format!("unknown column '{col}'")))?
        .clone();
    let proj = w
        .min_lift(&full_cuts(uw.n))?
        .project(&[uw.k_list[j - 1]])?;
    Ok(!phi.bruhat_leq(&proj)?)
}

/// Counts the fan elements of the given degree whose support stays at or
/// below the stratum: the standard monomials that restrict to the stratum's
/// basis. Works for any stratification with unit-vector degrees.
pub fn standard_on_stratum_count(s: &StratData, stratum: &str, d: &[u64]) -> Result<u64> {
    if !s.poset.contains(stratum) {
        return Err(Error::domain(format!("unknown stratum '{stratum}'")));
    }
    let allowed: Vec<String> = s
        .poset
        .elements()
        .iter()
        .filter(|l| s.poset.leq(l, stratum))
        .cloned()
        .collect();
    count_chain_multisets(s, &allowed, d)
}

/// Counts standard monomials of degree d none of whose columns vanish on the
/// Schubert multicone of w.
pub fn nonvanishing_standard_count(
    uw: &UnderlineW,
    s: &StratData,
    w: &Coset,
    d: &[u64],
) -> Result<u64> {
    let mut allowed = Vec::new();
    for (label, _) in uw.elements() {
        if !vanishes_on_schubert(uw, label, w)? {
            allowed.push(label.clone());
        }
    }
    count_chain_multisets(s, &allowed, d)
}

/// Counts multisets of allowed elements with pairwise comparable support and
/// prescribed total degree; each element must have a unit-vector degree.
fn count_chain_multisets(s: &StratData, allowed: &[String], d: &[u64]) -> Result<u64> {
    for l in allowed {
        let deg = s.degree_of(l)?;
        if deg.iter().sum::<u64>() != 1 {
            return Err(Error::domain(
                "standard-monomial counts need unit-vector degrees".to_string(),
            ));
        }
    }
    // order the allowed elements; a multiset is admissible iff pairwise
    // comparable, picked in a fixed order to avoid double counting
    fn rec(
        s: &StratData,
        allowed: &[String],
        from: usize,
        picked: &mut Vec<String>,
        rest: &mut Vec<u64>,
    ) -> u64 {
        if rest.iter().all(|&x| x == 0) {
            return 1;
        }
        let mut total = 0;
        for i in from..allowed.len() {
            let l = &allowed[i];
            let deg = s.degrees[l].clone();
            let Some(k) = deg.iter().position(|&x| x == 1) else {
                continue;
            };
            if rest[k] == 0 {
                continue;
            }
            if !picked.iter().all(|p| s.poset.comparable(p, l)) {
                continue;
            }
            rest[k] -= 1;
            picked.push(l.clone());
            total += rec(s, allowed, i, picked, rest);
            picked.pop();
            rest[k] += 1;
        }
        total
    }
    let mut rest = d.to_vec();
    let mut picked = Vec::new();
    Ok(rec(s, allowed, 0, &mut picked, &mut rest))
}

/// The label of a column coset, for cross-module use.
pub fn column_label(entries: &[usize], factor: usize) -> String {
    element_label(entries, factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat::build_type_a;

    #[test]
    fn evaluate_identity_matrix() {
        let id: Vec<Vec<Rat>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| Rat::from_integer(BigInt::from((i == j) as i64)))
                    .collect()
            })
            .collect();
        let leading = PlCol {
            entries: vec![1, 2],
            factor: 2,
        };
        assert_eq!(evaluate_col(&leading, &id), Rat::one());
        let other = PlCol {
            entries: vec![1, 3],
            factor: 2,
        };
        assert_eq!(evaluate_col(&other, &id), Rat::zero());
    }

    #[test]
    fn three_term_relation_vanishes() {
        // p1 p23 - p2 p13 + p3 p12 = 0 identically on the flag multicone
        let expr = parse_expr("p[1]*p[2,3] - p[2]*p[1,3] + p[3]*p[1,2]", 3, &[1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mat = random_matrix(3, &mut rng);
            assert_eq!(evaluate_expr(&expr, &mat), Rat::zero());
        }
    }

    #[test]
    fn straighten_classical_example() {
        let expr = parse_expr("p[1]*p[2,3]", 3, &[1, 2]).unwrap();
        let (std_expr, _) = straighten(&expr, 3, &[1, 2], 2024).unwrap();
        let want = parse_expr("p[2]*p[1,3] - p[3]*p[1,2]", 3, &[1, 2]).unwrap();
        assert_eq!(std_expr, want);
        // a standard monomial straightens to itself
        let std_in = parse_expr("p[2]*p[1,3]", 3, &[1, 2]).unwrap();
        let (out, _) = straighten(&std_in, 3, &[1, 2], 2024).unwrap();
        assert_eq!(out, std_in);
    }

    #[test]
    fn quasi_valuation_of_nonstandard_monomial() {
        let t = build_type_a(3, &[1, 2]).unwrap();
        let order = t.strat.poset.linearize();
        let expr = parse_expr("p[1]*p[2,3]", 3, &[1, 2]).unwrap();
        let v = quasi_valuation_pluecker(&expr, &t.uw, &order, 2024).unwrap();
        let mut want = QVector::unit("(2,1)");
        want.set("(13,2)", Rat::one());
        assert_eq!(v, want);
        // extremal functions have unit quasi-valuation
        let e = parse_expr("p[1,3]", 3, &[1, 2]).unwrap();
        assert_eq!(
            quasi_valuation_pluecker(&e, &t.uw, &order, 2024).unwrap(),
            QVector::unit("(13,2)")
        );
    }

    #[test]
    fn vanishing_criterion() {
        let t = build_type_a(3, &[1, 2]).unwrap();
        // a column below the stratum never vanishes on it
        assert!(!vanishes_on_stratum(&t.uw, "(12,2)", "(13,2)").unwrap());
        // earlier factor always vanishes
        assert!(vanishes_on_stratum(&t.uw, "(1,1)", "(13,2)").unwrap());
    }

    #[test]
    fn top_stratum_count_equals_dimension() {
        let t = build_type_a(3, &[1, 2]).unwrap();
        // all standard monomials qualify on the top stratum
        let top = "(3,1)";
        assert_eq!(
            standard_on_stratum_count(&t.strat, top, &[1, 1]).unwrap(),
            8
        );
        // a minimal stratum carries one monomial at its own degree
        assert_eq!(
            standard_on_stratum_count(&t.strat, "(12,2)", &[0, 1]).unwrap(),
            1
        );
    }
}
