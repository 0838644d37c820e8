//! Exact quasi-valuations through monomial chain charts.
//!
//! A chart parametrizes the multicone along a maximal chain by Laurent
//! monomials in (t_r, ..., t_1, u); the vanishing order at the divisor of the
//! i-th cover is the t_i-order of the pullback. The chain valuation is the
//! bond-weighted sequence of these orders, computed by the recursion
//! g -> g^b / f^nu restricted to the next stratum, carried out entirely in
//! exponent space on numerator/denominator pairs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fan::degree_map;
use crate::poset::{Chain, TotalOrder};
use crate::qvec::QVector;
use crate::rational::{fmt_rat, parse_rat, Rat};
use crate::strat::StratData;

/// The ambient polynomial ring data: variable names and their multidegrees.
#[derive(Debug, Clone)]
pub struct VarTable {
    pub names: Vec<String>,
    pub degrees: Vec<Vec<u64>>,
    index: BTreeMap<String, usize>,
}

impl VarTable {
    pub fn new(vars: Vec<(String, Vec<u64>)>) -> Self {
        let names: Vec<String> = vars.iter().map(|(n, _)| n.clone()).collect();
        let degrees = vars.into_iter().map(|(_, d)| d).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        VarTable {
            names,
            degrees,
            index,
        }
    }
    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// A sparse (Laurent) polynomial: exponent vectors over a fixed variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGradedPoly {
    pub terms: BTreeMap<Vec<i64>, Rat>,
}

impl MultiGradedPoly {
    pub fn zero() -> Self {
        MultiGradedPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], Rat::from_integer(BigInt::from(1)));
        MultiGradedPoly { terms }
    }

    pub fn monomial(exps: Vec<i64>, coeff: Rat) -> Self {
        let mut p = MultiGradedPoly::zero();
        p.add_term(exps, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<i64>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            let keys: Vec<Vec<i64>> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in keys {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &MultiGradedPoly) -> MultiGradedPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MultiGradedPoly) -> MultiGradedPoly {
        let mut out = MultiGradedPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u64) -> MultiGradedPoly {
        let nvars = self.terms.keys().next().map(|e| e.len()).unwrap_or(0);
        let mut out = MultiGradedPoly::one(nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiGradedPoly {
        if c.is_zero() {
            return MultiGradedPoly::zero();
        }
        MultiGradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    /// Minimal exponent of the given variable over all terms.
    pub fn order(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// The terms achieving the minimal exponent of `var`, with that exponent
    /// removed. Never empty for non-zero input.
    pub fn min_part_drop(&self, var: usize) -> MultiGradedPoly {
        let Some(min) = self.order(var) else {
            return MultiGradedPoly::zero();
        };
        MultiGradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] == min)
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Keeps the terms with exponent zero in `var`; errors on negative
    /// exponents (the restriction would not be regular).
    pub fn restrict(&self, var: usize) -> Result<MultiGradedPoly> {
        if self.terms.keys().any(|e| e[var] < 0) {
            return Err(Error::domain(
                "cannot restrict: negative exponent in chart variable".to_string(),
            ));
        }
        Ok(MultiGradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Multidegree with respect to a variable table; None when the polynomial
    /// is not multihomogeneous.
    pub fn multidegree(&self, vars: &VarTable) -> Option<Vec<i64>> {
        let m = vars.degrees.first().map(|d| d.len()).unwrap_or(0);
        let mut deg: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            let mut d = vec![0i64; m];
            for (v, &exp) in e.iter().enumerate() {
                for (k, &dk) in vars.degrees[v].iter().enumerate() {
                    d[k] += exp * dk as i64;
                }
            }
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

    /// Splits into multihomogeneous components, sorted by degree.
    pub fn components(&self, vars: &VarTable) -> Vec<MultiGradedPoly> {
        let m = vars.degrees.first().map(|d| d.len()).unwrap_or(0);
        let mut by_degree: BTreeMap<Vec<i64>, MultiGradedPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut d = vec![0i64; m];
            for (v, &exp) in e.iter().enumerate() {
                for (k, &dk) in vars.degrees[v].iter().enumerate() {
                    d[k] += exp * dk as i64;
                }
            }
            by_degree
                .entry(d)
                .or_insert_with(MultiGradedPoly::zero)
                .add_term(e.clone(), c.clone());
        }
        by_degree.into_values().collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut factors = Vec::new();
            for (v, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    factors.push(names[v].clone());
                } else if exp != 0 {
                    factors.push(format!("{}^{}", names[v], exp));
                }
            }
            let mono = if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            };
            if c == &Rat::from_integer(BigInt::from(1)) && !factors.is_empty() {
                parts.push(mono);
            } else if mono == "1" {
                parts.push(fmt_rat(c));
            } else {
                parts.push(format!("{}*{}", fmt_rat(c), mono));
            }
        }
        parts.join(" + ")
    }
}

/// Parses `coeff * x0^a x1^b + ...`; factors may be separated by `*` or
/// whitespace, coefficients are rationals, `-` starts a negated term.
pub fn parse_poly(text: &str, vars: &VarTable) -> Result<MultiGradedPoly> {
    let mut out = MultiGradedPoly::zero();
    let text = text.trim();
    if text.is_empty() {
        return Ok(out);
    }
    // split into signed terms
    let mut terms: Vec<(i32, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = 1;
    for ch in text.chars() {
        match ch {
            '+' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.clone()));
                }
                cur.clear();
                sign = 1;
            }
            '-' => {
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
        let mut exps = vec![0i64; vars.len()];
        for factor in term.split(['*', ' ']).map(str::trim).filter(|f| !f.is_empty()) {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::parse(format!("bad exponent in '{factor}'")))?,
                ),
                None => (factor, 1),
            };
            if let Some(v) = vars.position(base) {
                exps[v] += exp;
            } else {
                let c = parse_rat(base)?;
                if exp != 1 {
                    return Err(Error::parse(format!("cannot raise coefficient '{base}'")));
                }
                coeff *= c;
            }
        }
        out.add_term(exps, coeff);
    }
    Ok(out)
}

/// A monomial parametrization of the multicone adapted to a maximal chain.
///
/// `chart_vars` lists the chart variables top cover first: the variable at
/// position j measures vanishing along the cover p_{r-j} > p_{r-j-1}, and the
/// last variable measures vanishing at the origin below the chain's minimal
/// element. Each ambient variable maps to a single Laurent monomial.
#[derive(Debug, Clone)]
pub struct ChainChart {
    pub chain: Chain,
    pub chart_vars: Vec<String>,
    /// ambient variable -> (coefficient, exponents over chart_vars)
    pub subst: BTreeMap<String, (Rat, Vec<i64>)>,
}

#[derive(Deserialize)]
struct ChartJson {
    chain: Vec<String>,
    vars: Vec<String>,
    subst: BTreeMap<String, BTreeMap<String, i64>>,
}

impl ChainChart {
    pub fn from_json(text: &str) -> Result<Self> {
        let j: ChartJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("chart json: {e}")))?;
        let mut subst = BTreeMap::new();
        for (amb, exps) in j.subst {
            let mut e = vec![0i64; j.vars.len()];
            for (v, x) in exps {
                let Some(pos) = j.vars.iter().position(|w| w == &v) else {
                    return Err(Error::parse(format!("unknown chart variable '{v}'")));
                };
                e[pos] = x;
            }
            subst.insert(amb, (Rat::from_integer(BigInt::from(1)), e));
        }
        Ok(ChainChart {
            chain: Chain::new(j.chain),
            chart_vars: j.vars,
            subst,
        })
    }

    /// Substitutes the chart monomials into an ambient polynomial.
    pub fn pullback(&self, g: &MultiGradedPoly, vars: &VarTable) -> Result<MultiGradedPoly> {
        let mut out = MultiGradedPoly::zero();
        for (e, c) in &g.terms {
            let mut coeff = c.clone();
            let mut exps = vec![0i64; self.chart_vars.len()];
            for (v, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let name = &vars.names[v];
                let Some((mc, me)) = self.subst.get(name) else {
                    return Err(Error::domain(format!(
                        "chart does not substitute variable '{name}'"
                    )));
                };
                if exp < 0 {
                    return Err(Error::domain("negative ambient exponent".to_string()));
                }
                for _ in 0..exp {
                    coeff *= mc.clone();
                }
                for (k, &me_k) in me.iter().enumerate() {
                    exps[k] += me_k * exp;
                }
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }
}

/// One level of the chain-valuation recursion.
#[derive(Debug, Clone)]
pub struct Step {
    pub element: String,
    /// vanishing order nu at this level
    pub nu: BigInt,
    /// the bond of this level's cover
    pub bond: u64,
    /// nu / bond, the first-step ratio of this level
    pub ratio: Rat,
}

/// Result of the chain valuation: the vector and the per-level orders.
#[derive(Debug, Clone)]
pub struct ChainValuation {
    pub value: QVector,
    pub steps: Vec<Step>,
}

/// Computes the valuation of `g` along the chart's chain. Errors if `g` pulls
/// back to zero (it vanishes on the chart's dense open set).
pub fn chain_valuation(
    g: &MultiGradedPoly,
    chart: &ChainChart,
    s: &StratData,
    vars: &VarTable,
) -> Result<ChainValuation> {
    let chain = &chart.chain;
    let r = chain.len();
    if chart.chart_vars.len() != r {
        return Err(Error::shape(format!(
            "chart has {} variables for a chain of {} elements",
            chart.chart_vars.len(),
            r
        )));
    }
    let bonds = crate::fan::chain_bonds(s, chain)?;
    // restrictions of the extremal functions to their own strata
    let mut f_restricted: Vec<MultiGradedPoly> = Vec::new();
    for (j, label) in chain.labels.iter().enumerate() {
        let f_text = s.extremal.get(label).ok_or_else(|| {
            Error::data(format!("no extremal function attached to '{label}'"))
        })?;
        let f = parse_poly(f_text, vars)?;
        let mut fp = chart.pullback(&f, vars)?;
        for higher in 0..j {
            fp = fp.restrict(higher)?;
        }
        if fp.is_zero() {
            return Err(Error::data(format!(
                "extremal function of '{label}' vanishes on its stratum in this chart"
            )));
        }
        f_restricted.push(fp);
    }
    let g0 = chart.pullback(g, vars)?;
    if g0.is_zero() {
        return Err(Error::domain(
            "function vanishes identically on the chart".to_string(),
        ));
    }
    let mut num = g0;
    let mut den = MultiGradedPoly::one(r);
    let mut steps = Vec::new();
    let mut value = QVector::zero();
    let mut denom_acc = BigInt::from(1);
    for j in 0..r {
        // level j treats the cover below chain.labels[j]
        let var = j;
        let bond = bonds[j];
        let nu = BigInt::from(num.order(var).unwrap() - den.order(var).unwrap());
        denom_acc *= BigInt::from(bond);
        let coeff = Rat::new(nu.clone(), denom_acc.clone());
        value.set(&chain.labels[j], coeff.clone());
        steps.push(Step {
            element: chain.labels[j].clone(),
            nu: nu.clone(),
            bond,
            ratio: Rat::new(nu.clone(), BigInt::from(bond)),
        });
        if j + 1 == r {
            break;
        }
        // g_{next} = (g^bond / f^nu) restricted: leading forms in t_j
        let mut new_num = num.min_part_drop(var).pow(bond);
        let mut new_den = den.min_part_drop(var).pow(bond);
        let f = &f_restricted[j];
        let fmin = f.min_part_drop(var);
        if nu >= BigInt::zero() {
            let k = nu.to_string().parse::<u64>().unwrap();
            new_den = new_den.mul(&fmin.pow(k));
        } else {
            let k = (-nu.clone()).to_string().parse::<u64>().unwrap();
            new_num = new_num.mul(&fmin.pow(k));
        }
        num = new_num;
        den = new_den;
    }
    Ok(ChainValuation { value, steps })
}

/// The quasi-valuation: the lexicographic minimum of the chain valuations
/// over all maximal chains, with respect to the total order.
#[derive(Debug, Clone)]
pub struct ValuationResult {
    pub value: QVector,
    /// the chain achieving the minimum (ties broken by label sequence)
    pub chain: Vec<String>,
    pub per_chain: BTreeMap<Vec<String>, ChainValuation>,
}

pub fn quasi_valuation(
    g: &MultiGradedPoly,
    charts: &BTreeMap<Vec<String>, ChainChart>,
    s: &StratData,
    vars: &VarTable,
    order: &TotalOrder,
) -> Result<ValuationResult> {
    let chains = s.poset.maximal_chains();
    let mut per_chain = BTreeMap::new();
    for chain in &chains {
        let chart = charts.get(&chain.labels).ok_or_else(|| {
            Error::data(format!("missing chart for chain {}", chain.display()))
        })?;
        per_chain.insert(chain.labels.clone(), chain_valuation(g, chart, s, vars)?);
    }
    let (best_key, best) = per_chain
        .iter()
        .min_by(|(ka, a), (kb, b)| {
            a.value
                .lex_cmp(&b.value, order)
                .then_with(|| ka.cmp(kb))
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .unwrap();
    // the minimum is attained exactly on the chains containing the support
    let value = best.value.clone();
    if let Ok(support_chain) = s.poset.sort_chain(&value.support()) {
        debug_assert!(support_chain
            .labels
            .iter()
            .all(|l| best_key.contains(l)));
    }
    // degree compatibility: deg V(g) = deg g for multihomogeneous g
    if let Some(dg) = g.multidegree(vars) {
        let dv = degree_map(&value, s)?;
        let want: Vec<Rat> = dg.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
        if dv != want {
            return Err(Error::data(format!(
                "degree mismatch: deg V(g) = ({}) but deg g = ({})",
                dv.iter().map(fmt_rat).collect::<Vec<_>>().join(", "),
                dg.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
    }
    Ok(ValuationResult {
        value,
        chain: best_key,
        per_chain,
    })
}

/// Quasi-valuation of a sum via its multihomogeneous components: the minimum
/// of the component valuations, asserted equal to the direct computation.
pub fn min_homogeneous_components(
    h: &MultiGradedPoly,
    charts: &BTreeMap<Vec<String>, ChainChart>,
    s: &StratData,
    vars: &VarTable,
    order: &TotalOrder,
) -> Result<QVector> {
    if h.is_zero() {
        return Err(Error::domain("zero polynomial".to_string()));
    }
    let mut best: Option<QVector> = None;
    for comp in h.components(vars) {
        let v = quasi_valuation(&comp, charts, s, vars, order)?.value;
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
    let best = best.unwrap();
    let direct = quasi_valuation(h, charts, s, vars, order)?.value;
    if best != direct {
        return Err(Error::data(
            "component minimum disagrees with the direct quasi-valuation".to_string(),
        ));
    }
    Ok(best)
}


/// Checks a chart against the stratification: relations must pull back to
/// zero, each extremal function must have chain valuation e_p (this pins the
/// bonds), and the coordinates vanishing on each stratum must vanish on the
/// corresponding chart locus, when that data is available.
pub fn validate_chart(
    chart: &ChainChart,
    s: &StratData,
    vars: &VarTable,
    relations: &[MultiGradedPoly],
    vanishing: Option<&BTreeMap<String, Vec<String>>>,
) -> Vec<String> {
    let mut out = Vec::new();
    for (i, rel) in relations.iter().enumerate() {
        match chart.pullback(rel, vars) {
            Ok(p) => {
                if !p.is_zero() {
                    out.push(format!("relation {i} not annihilated by the chart"));
                }
            }
            Err(e) => out.push(format!("relation {i}: {e}")),
        }
    }
    for (j, label) in chart.chain.labels.iter().enumerate() {
        let Some(f_text) = s.extremal.get(label) else {
            out.push(format!("no extremal function for '{label}'"));
            continue;
        };
        let f = match parse_poly(f_text, vars) {
            Ok(f) => f,
            Err(e) => {
                out.push(format!("extremal function of '{label}': {e}"));
                continue;
            }
        };
        match chain_valuation(&f, chart, s, vars) {
            Ok(cv) => {
                if cv.value != QVector::unit(label) {
                    out.push(format!(
                        "extremal function of '{label}' has chain valuation {}, expected e_{label}",
                        cv.value.display(&s.poset)
                    ));
                }
                if j + 1 < chart.chain.labels.len() {
                    let bond = s
                        .poset
                        .bond(label, &chart.chain.labels[j + 1])
                        .unwrap_or(0);
                    // the recursion raises g to the product of the bonds
                    // above level j, so the raw order picks up that factor
                    let mut expected = BigInt::from(bond);
                    for step in cv.steps.iter().take(j) {
                        expected *= BigInt::from(step.bond);
                    }
                    if cv.steps[j].nu != expected {
                        out.push(format!(
                            "chart does not reproduce the bond {bond} on the cover below '{label}'"
                        ));
                    }
                }
            }
            Err(e) => out.push(format!("extremal function of '{label}': {e}")),
        }
    }
    if let Some(vanishing) = vanishing {
        for (j, label) in chart.chain.labels.iter().enumerate().skip(1) {
            let Some(dead) = vanishing.get(label) else {
                continue;
            };
            // on the locus t_0 = ... = t_{j-1} = 0 (top j chart variables),
            // every coordinate vanishing on this stratum must vanish
            for name in dead {
                let Some((_, exps)) = chart.subst.get(name) else {
                    out.push(format!("chart does not substitute variable '{name}'"));
                    continue;
                };
                let head = &exps[..j];
                let ok = head.iter().all(|&e| e >= 0) && head.iter().any(|&e| e > 0);
                if !ok {
                    out.push(format!(
                        "variable '{name}' does not vanish on the chart locus of '{label}'"
                    ));
                }
            }
        }
    }
    out
}
