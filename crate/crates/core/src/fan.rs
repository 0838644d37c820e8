//! The fan of monoids: per-chain monoids and their lattices, LS-lattices,
//! Veronese submonoids, indecomposables and the fan-algebra product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poset::Chain;
use crate::qvec::QVector;
use crate::rational::{denominator_lcm, Rat};
use crate::strat::{classify, StratData};

/// Linear extension of e_p -> deg f_p, as a rational vector of length m.
pub fn degree_map(v: &QVector, s: &StratData) -> Result<Vec<Rat>> {
    let mut out = vec![Rat::zero(); s.m];
    for (label, coeff) in v.iter() {
        let deg = s.degree_of(label)?;
        for (i, &d) in deg.iter().enumerate() {
            out[i] += coeff.clone() * Rat::from_integer(BigInt::from(d));
        }
    }
    Ok(out)
}

/// Total degree |deg v| as a rational.
pub fn total_degree(v: &QVector, s: &StratData) -> Result<Rat> {
    Ok(degree_map(v, s)?.into_iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// All bonds along the chain are 1; the monoid is free on the unit vectors.
    FreeHodge,
    /// The LS-monoid cut out by bond-weighted partial-sum integrality.
    Ls,
    /// Explicitly supplied generators.
    Explicit,
}

/// Generators chosen for the source of a chain monoid.
pub enum GammaSource<'a> {
    /// Attached explicit data if present, else Hodge, else LS, else an error.
    Auto,
    Explicit(&'a [QVector]),
}

/// A finitely generated monoid attached to a maximal chain, described by an
/// irredundant generating set (a Hilbert basis).
#[derive(Debug, Clone)]
pub struct MonoidDesc {
    pub chain: Chain,
    pub flavor: Flavor,
    pub generators: Vec<QVector>,
}

impl MonoidDesc {
    /// Membership by bounded search over non-negative integer combinations of
    /// the generators. Exact: the search is pruned by the coefficient sum,
    /// which strictly increases along any sum of non-zero generators.
    pub fn contains(&self, v: &QVector) -> bool {
        if !v.is_nonnegative() {
            return false;
        }
        if v.support().iter().any(|l| !self.chain.contains(l)) {
            return false;
        }
        fn rec(gens: &[QVector], from: usize, rest: &QVector) -> bool {
            if rest.is_zero() {
                return true;
            }
            if !rest.is_nonnegative() {
                return false;
            }
            for i in from..gens.len() {
                if gens[i].dominated_by(rest) && rec(gens, i, &(rest - &gens[i])) {
                    return true;
                }
            }
            false
        }
        rec(&self.generators, 0, v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "chain": self.chain.labels,
            "flavor": self.flavor,
            "generators": self.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Deterministic generator order along a chain: highest support first, then
/// smaller supports, then textual tie-break.
fn chain_sort_key(chain: &Chain, g: &QVector) -> (usize, usize, String) {
    let top = g
        .support()
        .iter()
        .filter_map(|l| chain.labels.iter().position(|c| c == l))
        .min()
        .unwrap_or(usize::MAX);
    (top, g.support().len(), format!("{g:?}"))
}

fn require_maximal_chain(s: &StratData, chain: &Chain) -> Result<()> {
    for w in chain.labels.windows(2) {
        if !s.poset.is_cover(&w[0], &w[1]) {
            return Err(Error::domain(format!(
                "'{}' does not cover '{}' in the chain",
                w[0], w[1]
            )));
        }
    }
    let len = s.poset.maximal_chains().first().map(|c| c.len()).unwrap_or(0);
    if chain.len() != len
        || chain
            .labels
            .first()
            .map(|t| !s.poset.maximal_elements().contains(t))
            .unwrap_or(true)
    {
        return Err(Error::domain(format!(
            "chain {} is not maximal",
            chain.display()
        )));
    }
    Ok(())
}

/// Bonds along a chain of covers, top cover first, with the virtual bottom
/// bond |deg f_{p_0}| appended last.
pub fn chain_bonds(s: &StratData, chain: &Chain) -> Result<Vec<u64>> {
    let mut bonds = Vec::new();
    for w in chain.labels.windows(2) {
        bonds.push(
            s.poset
                .bond(&w[0], &w[1])
                .ok_or_else(|| Error::domain(format!("'{}' does not cover '{}'", w[0], w[1])))?,
        );
    }
    let bottom = chain
        .labels
        .last()
        .ok_or_else(|| Error::domain("empty chain".to_string()))?;
    bonds.push(s.degree_of(bottom)?.iter().sum());
    Ok(bonds)
}

/// The monoid of a maximal chain.
///
/// With `GammaSource::Auto`, explicitly attached generators win; otherwise a
/// chain with all bonds 1 gets the free monoid on its unit vectors; otherwise
/// an LS-candidate stratification gets the LS-monoid; anything else requires
/// explicit generators.
pub fn gamma_for_chain(s: &StratData, chain: &Chain, source: GammaSource) -> Result<MonoidDesc> {
    require_maximal_chain(s, chain)?;
    match source {
        GammaSource::Explicit(gens) => explicit_monoid(s, chain, gens),
        GammaSource::Auto => {
            if let Some(gens) = s.explicit_gamma.get(&chain.labels) {
                let gens = gens.clone();
                return explicit_monoid(s, chain, &gens);
            }
            let bonds = chain_bonds(s, chain)?;
            if bonds.iter().all(|&b| b == 1) {
                let generators = chain.labels.iter().map(|l| QVector::unit(l)).collect();
                return Ok(MonoidDesc {
                    chain: chain.clone(),
                    flavor: Flavor::FreeHodge,
                    generators,
                });
            }
            if classify(s).is_ls_candidate {
                let generators = ls_hilbert_basis(s, chain)?;
                return Ok(MonoidDesc {
                    chain: chain.clone(),
                    flavor: Flavor::Ls,
                    generators,
                });
            }
            Err(Error::domain(format!(
                "explicit generators required for chain {}",
                chain.display()
            )))
        }
    }
}

fn explicit_monoid(s: &StratData, chain: &Chain, gens: &[QVector]) -> Result<MonoidDesc> {
    for g in gens {
        if !g.is_nonnegative() {
            return Err(Error::domain(
                "monoid generators must have non-negative coefficients".to_string(),
            ));
        }
        if g.support().iter().any(|l| !chain.contains(l)) {
            return Err(Error::domain(
                "monoid generator supported outside the chain".to_string(),
            ));
        }
    }
    let _ = s;
    let mut generators: Vec<QVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    generators.sort_by_key(|g| chain_sort_key(chain, g));
    generators.dedup();
    // drop generators that are sums of the others
    let mut keep: Vec<QVector> = Vec::new();
    for i in 0..generators.len() {
        let others: Vec<QVector> = generators
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let probe = MonoidDesc {
            chain: chain.clone(),
            flavor: Flavor::Explicit,
            generators: others,
        };
        if !probe.contains(&generators[i]) {
            keep.push(generators[i].clone());
        }
    }
    Ok(MonoidDesc {
        chain: chain.clone(),
        flavor: Flavor::Explicit,
        generators: keep,
    })
}

/// Membership in the LS-lattice of a chain of covers: the bond-weighted
/// partial sums from the top and the total sum must be integers.
pub fn ls_lattice_contains(s: &StratData, chain: &Chain, v: &QVector) -> Result<bool> {
    for w in chain.labels.windows(2) {
        if !s.poset.is_cover(&w[0], &w[1]) {
            return Err(Error::domain(format!(
                "'{}' does not cover '{}'; LS-lattices need chains of covers",
                w[0], w[1]
            )));
        }
    }
    if v.support().iter().any(|l| !chain.contains(l)) {
        return Ok(false);
    }
    // partial sums a_i + ... + a_s from the top element down to p_i
    let mut partial = Rat::zero();
    for w in chain.labels.windows(2) {
        let top = &w[0];
        let bond = s.poset.bond(&w[0], &w[1]).unwrap();
        partial += v.get(top);
        let scaled = partial.clone() * Rat::from_integer(BigInt::from(bond));
        if !scaled.is_integer() {
            return Ok(false);
        }
    }
    partial += v.get(chain.labels.last().unwrap());
    Ok(partial.is_integer())
}

/// Hilbert basis of the LS-monoid of a maximal chain: the lattice points of
/// coefficient sum exactly 1 in the non-negative orthant. Every LS-monoid
/// element of integer sum N splits into N such points, so this set generates
/// and is irredundant.
fn ls_hilbert_basis(s: &StratData, chain: &Chain) -> Result<Vec<QVector>> {
    let bonds = chain_bonds(s, chain)?;
    let denom: u64 = bonds.iter().product();
    let n = chain.len();
    let mut out = Vec::new();
    // enumerate (a_1, ..., a_n) in (N_0 / denom)^n with sum 1
    let mut cur = vec![Rat::zero(); n];
    fn rec(
        s: &StratData,
        chain: &Chain,
        denom: u64,
        at: usize,
        left: Rat,
        cur: &mut Vec<Rat>,
        out: &mut Vec<QVector>,
    ) {
        if at == cur.len() {
            if !left.is_zero() {
                return;
            }
            let v = QVector::from_entries(
                chain
                    .labels
                    .iter()
                    .cloned()
                    .zip(cur.iter().cloned())
                    .filter(|(_, c)| !c.is_zero()),
            );
            if ls_lattice_contains(s, chain, &v).unwrap_or(false) {
                out.push(v);
            }
            return;
        }
        let step = Rat::new(BigInt::one(), BigInt::from(denom));
        let mut val = Rat::zero();
        while val <= left {
            cur[at] = val.clone();
            rec(s, chain, denom, at + 1, left.clone() - val.clone(), cur, out);
            val += step.clone();
        }
        cur[at] = Rat::zero();
    }
    rec(s, chain, denom, 0, Rat::one(), &mut cur, &mut out);
    out.sort_by_key(|g| chain_sort_key(chain, g));
    Ok(out)
}

/// An exact lattice given by a basis of sparse rational vectors.
#[derive(Debug, Clone)]
pub struct LatticeDesc {
    pub basis: Vec<QVector>,
}

impl LatticeDesc {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates (over Q) of v in the basis; None if v is outside the span.
    pub fn coordinates(&self, v: &QVector) -> Option<Vec<Rat>> {
        let labels = self.support_labels(v);
        let a: Vec<Vec<Rat>> = labels
            .iter()
            .map(|l| self.basis.iter().map(|b| b.get(l)).collect())
            .collect();
        let rhs: Vec<Rat> = labels.iter().map(|l| v.get(l)).collect();
        let (particular, kernel) = linalg::solve_general(&a, &rhs)?;
        if kernel.is_empty() {
            Some(particular)
        } else {
            None // basis not independent; constructors prevent this
        }
    }

    fn support_labels(&self, extra: &QVector) -> Vec<String> {
        let mut labels: Vec<String> = self
            .basis
            .iter()
            .flat_map(|b| b.support())
            .chain(extra.support())
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Integer-combination membership.
    pub fn contains(&self, v: &QVector) -> bool {
        match self.coordinates(v) {
            Some(coords) => coords.iter().all(|c| c.is_integer()),
            None => false,
        }
    }
}

/// A canonical basis of the lattice generated by rational vectors: scale to
/// integers, take the Hermite normal form of the rows, scale back.
pub fn lattice_basis_from_generators(gens: &[QVector]) -> LatticeDesc {
    let mut labels: Vec<String> = gens.iter().flat_map(|g| g.support()).collect();
    labels.sort();
    labels.dedup();
    if labels.is_empty() {
        return LatticeDesc { basis: vec![] };
    }
    let scale = denominator_lcm(gens.iter().flat_map(|g| g.iter().map(|(_, c)| c)));
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            labels
                .iter()
                .map(|l| {
                    let c = g.get(l) * Rat::from_integer(scale.clone());
                    c.to_integer()
                })
                .collect()
        })
        .collect();
    let basis_rows = linalg::hnf_basis(&rows);
    let basis = basis_rows
        .into_iter()
        .map(|row| {
            QVector::from_entries(labels.iter().cloned().zip(
                row.into_iter()
                    .map(|x| Rat::new(x, scale.clone())),
            ))
        })
        .collect();
    LatticeDesc { basis }
}

/// The lattice spanned by a triangular family of chain valuations, and the
/// integer matrix whose integrality cuts it out.
#[derive(Debug, Clone)]
pub struct ValuationLattice {
    pub chain: Chain,
    /// B, an integer matrix in the descending chain coordinates: v lies in
    /// the lattice iff B v is integral.
    pub b_matrix: Vec<Vec<BigInt>>,
    pub basis: Vec<QVector>,
}

impl ValuationLattice {
    pub fn contains(&self, v: &QVector) -> bool {
        if v.support().iter().any(|l| !self.chain.contains(l)) {
            return false;
        }
        let coords: Vec<Rat> = self.chain.labels.iter().map(|l| v.get(l)).collect();
        self.b_matrix.iter().all(|row| {
            let s: Rat = row
                .iter()
                .zip(&coords)
                .map(|(b, c)| Rat::from_integer(b.clone()) * c.clone())
                .sum();
            s.is_integer()
        })
    }
}

/// Builds the valuation lattice from valuations F_r, ..., F_0 (top first)
/// forming a triangular system with diagonal entries 1/bond. The inverse of
/// the coefficient matrix must be integral.
pub fn lattice_from_valuations(
    s: &StratData,
    chain: &Chain,
    vals: &[QVector],
) -> Result<ValuationLattice> {
    let n = chain.len();
    if vals.len() != n {
        return Err(Error::shape(format!(
            "need {} valuations for chain {}, got {}",
            n,
            chain.display(),
            vals.len()
        )));
    }
    let bonds = chain_bonds(s, chain)?;
    // rows and columns indexed top-down along the chain
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|row| (0..n).map(|col| vals[col].get(&chain.labels[row])).collect())
        .collect();
    for (j, val) in vals.iter().enumerate() {
        if val.support().iter().any(|l| !chain.contains(l)) {
            return Err(Error::domain(
                "valuation supported outside the chain".to_string(),
            ));
        }
        let want = Rat::new(BigInt::one(), BigInt::from(bonds[j]));
        if a[j][j] != want {
            return Err(Error::domain(format!(
                "valuation {j} has diagonal entry {}, expected 1/{}",
                a[j][j],
                bonds[j]
            )));
        }
        // triangular: each valuation is supported at or below its element
        for (i, row) in a.iter().enumerate().take(j) {
            if !row[j].is_zero() {
                return Err(Error::domain(format!(
                    "valuation {j} is not triangular: support reaches above its element (row {i})"
                )));
            }
        }
    }
    let inv = linalg::invert(&a).ok_or_else(|| Error::domain("singular valuation matrix"))?;
    let mut b = Vec::new();
    for row in inv {
        let mut int_row = Vec::new();
        for x in row {
            if !x.is_integer() {
                return Err(Error::domain(
                    "inverse matrix is not integral; the valuations do not satisfy the triangular hypothesis",
                ));
            }
            int_row.push(x.to_integer());
        }
        b.push(int_row);
    }
    Ok(ValuationLattice {
        chain: chain.clone(),
        b_matrix: b,
        basis: vals.to_vec(),
    })
}

/// Hilbert basis of the Veronese submonoid {x in Gamma_C : deg x in N_0 d}.
///
/// Bounded kernel-monoid enumeration: candidate exponent vectors of the
/// generators are searched up to a total-degree bound, and minimality is
/// certified by decomposition checks inside the enumerated range.
pub fn veronese_generators(
    monoid: &MonoidDesc,
    s: &StratData,
    d: &[u64],
) -> Result<Vec<QVector>> {
    if d.len() != s.m {
        return Err(Error::shape(format!(
            "degree vector has length {}, expected {}",
            d.len(),
            s.m
        )));
    }
    if d.iter().all(|&x| x == 0) {
        return Ok(vec![]);
    }
    let gens = &monoid.generators;
    let degs: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| degree_map(g, s))
        .collect::<Result<_>>()?;
    let totals: Vec<Rat> = degs.iter().map(|v| v.iter().cloned().sum()).collect();
    if totals.iter().any(|t| t.is_zero()) {
        return Err(Error::data("monoid generator of total degree zero".to_string()));
    }
    // bound: sum of the generator total degrees, at least 4 |d|
    let dsum: u64 = d.iter().sum();
    let mut bound: Rat = totals.iter().cloned().sum();
    let four_d = Rat::from_integer(BigInt::from(4 * dsum));
    if bound < four_d {
        bound = four_d;
    }
    // componentwise cap: achievable degrees are t*d with t <= bound/|d|
    let tmax = bound.clone() / Rat::from_integer(BigInt::from(dsum));
    let cap: Vec<Rat> = d
        .iter()
        .map(|&x| tmax.clone() * Rat::from_integer(BigInt::from(x)))
        .collect();
    // enumerate exponent vectors whose degree stays under the cap
    let mut members: Vec<QVector> = Vec::new();
    let mut counts = vec![0u64; gens.len()];
    enumerate_capped(&degs, &cap, 0, &vec![Rat::zero(); s.m], &mut counts, &mut |counts| {
        let mut deg = vec![Rat::zero(); s.m];
        for (i, &c) in counts.iter().enumerate() {
            for (k, x) in degs[i].iter().enumerate() {
                deg[k] += x.clone() * Rat::from_integer(BigInt::from(c));
            }
        }
        if !on_ray(&deg, d) {
            return;
        }
        let mut v = QVector::zero();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                v = &v + &gens[i].scale(&Rat::from_integer(BigInt::from(c)));
            }
        }
        if !v.is_zero() {
            members.push(v);
        }
    });
    members.sort_by_key(|v| (total_degree(v, s).unwrap(), v.support(), format!("{v:?}")));
    members.dedup();
    // keep the indecomposable ones
    let mut basis: Vec<QVector> = Vec::new();
    for v in &members {
        let probe = MonoidDesc {
            chain: monoid.chain.clone(),
            flavor: Flavor::Explicit,
            generators: members
                .iter()
                .filter(|w| *w != v && w.coefficient_sum() <= v.coefficient_sum())
                .cloned()
                .collect(),
        };
        if !probe.contains(v) {
            basis.push(v.clone());
        }
    }
    Ok(basis)
}

fn enumerate_capped(
    degs: &[Vec<Rat>],
    cap: &[Rat],
    at: usize,
    acc: &[Rat],
    counts: &mut Vec<u64>,
    f: &mut impl FnMut(&[u64]),
) {
    if at == degs.len() {
        f(counts);
        return;
    }
    let mut c = 0u64;
    loop {
        let used: Vec<Rat> = acc
            .iter()
            .zip(&degs[at])
            .map(|(a, d)| a.clone() + d.clone() * Rat::from_integer(BigInt::from(c)))
            .collect();
        if used.iter().zip(cap).any(|(u, top)| u > top) {
            break;
        }
        counts[at] = c;
        enumerate_capped(degs, cap, at + 1, &used, counts, f);
        c += 1;
    }
    counts[at] = 0;
}

fn on_ray(deg: &[Rat], d: &[u64]) -> bool {
    // deg = t * d for some non-negative rational t
    let mut t: Option<Rat> = None;
    for (x, &di) in deg.iter().zip(d) {
        if di == 0 {
            if !x.is_zero() {
                return false;
            }
        } else {
            let ratio = x.clone() / Rat::from_integer(BigInt::from(di));
            match &t {
                None => t = Some(ratio),
                Some(t0) => {
                    if &ratio != t0 {
                        return false;
                    }
                }
            }
        }
    }
    match t {
        None => deg.iter().all(|x| x.is_zero()),
        Some(t0) => !t0.is_negative(),
    }
}

/// The fan of monoids: one monoid per maximal chain.
#[derive(Debug, Clone)]
pub struct FanOfMonoids {
    pub monoids: BTreeMap<Vec<String>, MonoidDesc>,
}

/// Builds every chain monoid with `GammaSource::Auto`.
pub fn fan_of_monoids(s: &StratData) -> Result<FanOfMonoids> {
    let mut monoids = BTreeMap::new();
    for chain in s.poset.maximal_chains() {
        let m = gamma_for_chain(s, &chain, GammaSource::Auto)?;
        monoids.insert(chain.labels.clone(), m);
    }
    Ok(FanOfMonoids { monoids })
}

impl FanOfMonoids {
    /// Membership in the fan: membership in some chain monoid whose chain
    /// contains the support.
    pub fn contains(&self, v: &QVector) -> bool {
        self.monoids.values().any(|m| m.contains(v))
    }

    /// Indecomposable elements: the union of the per-chain Hilbert bases,
    /// filtered by the fan-wide decomposability definition.
    pub fn indecomposables(&self, s: &StratData) -> Vec<QVector> {
        let mut candidates: Vec<QVector> = self
            .monoids
            .values()
            .flat_map(|m| m.generators.iter().cloned())
            .collect();
        candidates.sort_by_key(|v| (v.support(), format!("{v:?}")));
        candidates.dedup();
        candidates
            .into_iter()
            .filter(|v| !self.is_decomposable(s, v))
            .collect()
    }

    /// An element is decomposable if it is zero or splits as a + b with both
    /// parts in the fan, non-zero, and min supp a >= max supp b.
    pub fn is_decomposable(&self, s: &StratData, v: &QVector) -> bool {
        if v.is_zero() {
            return true;
        }
        // candidate first parts: fan elements componentwise below v
        for part in self.elements_below(v) {
            if part.is_zero() || &part == v {
                continue;
            }
            let rest = v - &part;
            if rest.is_zero() || !self.contains(&rest) {
                continue;
            }
            let (Ok(Some(min_a)), Ok(Some(max_b))) =
                (part.min_support(&s.poset), rest.max_support(&s.poset))
            else {
                continue;
            };
            if s.poset.leq(&max_b, &min_a) {
                return true;
            }
        }
        false
    }

    /// All fan elements componentwise dominated by v (a finite set, found by
    /// bounded generator sums within each chain monoid).
    fn elements_below(&self, v: &QVector) -> Vec<QVector> {
        let mut out: Vec<QVector> = vec![];
        for m in self.monoids.values() {
            let mut acc = Vec::new();
            below_rec(&m.generators, 0, &QVector::zero(), v, &mut acc);
            out.append(&mut acc);
        }
        out.sort_by_key(|v| (v.support(), format!("{v:?}")));
        out.dedup();
        out
    }

    /// The unique factorization of a fan element into indecomposables with
    /// min supp a^k >= max supp a^{k+1}.
    pub fn decompose(&self, s: &StratData, v: &QVector) -> Result<Vec<QVector>> {
        if !self.contains(v) {
            return Err(Error::domain(
                "vector is not in the fan of monoids".to_string(),
            ));
        }
        if v.is_zero() {
            return Ok(vec![]);
        }
        let indecs = self.indecomposables(s);
        let mut parts = Vec::new();
        let mut rest = v.clone();
        'outer: while !rest.is_zero() {
            // candidates for the next (largest) part
            let mut cands: Vec<&QVector> = indecs
                .iter()
                .filter(|a| a.dominated_by(&rest) && self.contains(&(&rest - *a)))
                .collect();
            // the next part must dominate the remainder in the support order
            cands.retain(|a| {
                let diff = &rest - *a;
                match (a.min_support(&s.poset), diff.max_support(&s.poset)) {
                    (Ok(Some(min_a)), Ok(Some(max_b))) => s.poset.leq(&max_b, &min_a),
                    (Ok(Some(_)), Ok(None)) => true,
                    _ => false,
                }
            });
            // prefer the part with the largest minimal support element
            cands.sort_by(|a, b| {
                let ma = a.min_support(&s.poset).unwrap().unwrap();
                let mb = b.min_support(&s.poset).unwrap().unwrap();
                if ma == mb {
                    format!("{a:?}").cmp(&format!("{b:?}"))
                } else if s.poset.leq(&ma, &mb) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Less
                }
            });
            for a in cands {
                let diff = &rest - a;
                if self.contains(&diff) {
                    parts.push(a.clone());
                    rest = diff;
                    continue 'outer;
                }
            }
            return Err(Error::domain(
                "no decomposition into indecomposables found".to_string(),
            ));
        }
        Ok(parts)
    }
}

fn below_rec(gens: &[QVector], from: usize, acc: &QVector, cap: &QVector, out: &mut Vec<QVector>) {
    out.push(acc.clone());
    for i in from..gens.len() {
        let next = acc + &gens[i];
        if next.dominated_by(cap) {
            below_rec(gens, i, &next, cap, out);
        }
    }
}

/// The structure constants of the fan algebra: a + b when the supports share
/// a chain, the zero marker otherwise.
pub fn fan_algebra_product(a: &QVector, b: &QVector, s: &StratData) -> Option<QVector> {
    let mut support: Vec<String> = a.support();
    support.extend(b.support());
    support.sort();
    support.dedup();
    if s.poset.is_chain(&support) {
        Some(a + b)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};
    use crate::strat::build_type_a;

    #[test]
    fn degree_map_type_a() {
        let t = build_type_a(3, &[1, 2]).unwrap();
        let v = QVector::unit("(3,1)");
        assert_eq!(degree_map(&v, &t.strat).unwrap(), vec![rat(1), rat(0)]);
        assert_eq!(
            degree_map(&QVector::zero(), &t.strat).unwrap(),
            vec![rat(0), rat(0)]
        );
    }

    #[test]
    fn type_a_chains_are_free() {
        let t = build_type_a(3, &[1, 2]).unwrap();
        for chain in t.strat.poset.maximal_chains() {
            let m = gamma_for_chain(&t.strat, &chain, GammaSource::Auto).unwrap();
            assert_eq!(m.flavor, Flavor::FreeHodge);
            assert_eq!(m.generators.len(), chain.len());
            assert!(m.generators.iter().all(|g| g.coefficient_sum() == rat(1)));
        }
    }

    #[test]
    fn ls_hilbert_basis_with_bond_two() {
        // a 3-chain with bonds (2, 1) and an LS-candidate degree pattern
        // mirrors the half-integer monoid: {e_a, e_b, e_c, (e_a + e_b)/2}
        use std::collections::BTreeMap;
        let poset = crate::poset::GradedPoset::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("a".into(), "b".into()), ("b".into(), "c".into())],
            [
                ("a".to_string(), 2u32),
                ("b".to_string(), 1u32),
                ("c".to_string(), 0u32),
            ]
            .into_iter()
            .collect(),
            [(("a".to_string(), "b".to_string()), 2u64)]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let chain = Chain::new(vec!["a".into(), "b".into(), "c".into()]);
        let s = StratData {
            poset,
            m: 1,
            index_sets: [
                ("a".to_string(), [1].into_iter().collect()),
                ("b".to_string(), [1].into_iter().collect()),
                ("c".to_string(), [1].into_iter().collect()),
            ]
            .into_iter()
            .collect(),
            degrees: [
                ("a".to_string(), vec![1]),
                ("b".to_string(), vec![1]),
                ("c".to_string(), vec![1]),
            ]
            .into_iter()
            .collect(),
            extremal: BTreeMap::new(),
            explicit_gamma: BTreeMap::new(),
        };
        let basis = ls_hilbert_basis(&s, &chain).unwrap();
        assert_eq!(basis.len(), 4);
        let mut half = QVector::zero();
        half.set("a", rat_frac(1, 2));
        half.set("b", rat_frac(1, 2));
        assert!(basis.contains(&half));
        for l in ["a", "b", "c"] {
            assert!(basis.contains(&QVector::unit(l)));
        }
        // ls_lattice_contains on the same chain
        assert!(ls_lattice_contains(&s, &chain, &half).unwrap());
        let mut bad = QVector::zero();
        bad.set("a", rat_frac(1, 2));
        assert!(!ls_lattice_contains(&s, &chain, &bad).unwrap());
        assert!(ls_lattice_contains(&s, &chain, &QVector::zero()).unwrap());
    }

    #[test]
    fn lattice_basis_and_membership() {
        let mut half = QVector::zero();
        half.set("a", rat_frac(1, 2));
        half.set("b", rat_frac(1, 2));
        let gens = vec![
            QVector::unit("a"),
            QVector::unit("b"),
            QVector::unit("c"),
            half.clone(),
        ];
        let lat = lattice_basis_from_generators(&gens);
        assert_eq!(lat.rank(), 3);
        assert!(lat.contains(&half));
        assert!(lat.contains(&QVector::unit("a")));
        let mut q = QVector::zero();
        q.set("a", rat_frac(1, 2));
        assert!(!lat.contains(&q));
    }

    #[test]
    fn y0y1_degree_map_values() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        // e_X has the degree of its extremal function y0*y1
        assert_eq!(
            degree_map(&QVector::unit("X"), &b.strat).unwrap(),
            vec![rat(0), rat(2)]
        );
        // the half generator has the degree of x0*y1
        let mut half = QVector::zero();
        half.set("X", rat_frac(1, 2));
        half.set("01", rat_frac(1, 2));
        assert_eq!(
            degree_map(&half, &b.strat).unwrap(),
            vec![rat(1), rat(1)]
        );
        assert!(degree_map(&QVector::unit("??"), &b.strat).is_err());
    }

    #[test]
    fn auto_requires_explicit_when_no_data() {
        // strip the attached generators: the bonded chains have no Hodge or
        // LS fallback
        let mut b = crate::builtins::builtin_example("y0y1").unwrap();
        b.strat.explicit_gamma.clear();
        let chain = Chain::new(vec!["X".into(), "01".into(), "0".into()]);
        let err = gamma_for_chain(&b.strat, &chain, GammaSource::Auto).unwrap_err();
        assert!(err.to_string().contains("explicit generators required"));
        // the Hodge chains still work
        let hodge = Chain::new(vec!["X".into(), "00'".into(), "0".into()]);
        assert!(gamma_for_chain(&b.strat, &hodge, GammaSource::Auto).is_ok());
    }

    #[test]
    fn y0y1_monoid_table() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        let s = &b.strat;
        let mut half = QVector::zero();
        half.set("X", rat_frac(1, 2));
        half.set("01", rat_frac(1, 2));
        // the two Hodge chains are free on their unit vectors
        for labels in [["X", "00'", "0"], ["X", "11'", "1"]] {
            let chain = Chain::new(labels.iter().map(|l| l.to_string()).collect());
            let m = gamma_for_chain(s, &chain, GammaSource::Auto).unwrap();
            assert_eq!(m.flavor, Flavor::FreeHodge);
            assert_eq!(m.generators.len(), 3);
        }
        // the two chains through 01 need the half-integer generator
        for labels in [["X", "01", "0"], ["X", "01", "1"]] {
            let chain = Chain::new(labels.iter().map(|l| l.to_string()).collect());
            let m = gamma_for_chain(s, &chain, GammaSource::Auto).unwrap();
            assert_eq!(m.flavor, Flavor::Explicit);
            assert_eq!(m.generators.len(), 4, "{:?}", m.generators);
            assert!(m.generators.contains(&half));
            assert!(m.contains(&half));
            let mut one_and_half = QVector::zero();
            one_and_half.set("X", rat_frac(3, 2));
            one_and_half.set("01", rat_frac(1, 2));
            assert!(m.contains(&one_and_half));
            let mut bad = QVector::zero();
            bad.set("X", rat_frac(1, 2));
            assert!(!m.contains(&bad));
        }
    }

    #[test]
    fn y0y1_veronese_components() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        let s = &b.strat;
        let chain1 = Chain::new(vec!["X".into(), "00'".into(), "0".into()]);
        let m1 = gamma_for_chain(s, &chain1, GammaSource::Auto).unwrap();
        let v1 = veronese_generators(&m1, s, &[0, 1]).unwrap();
        assert_eq!(v1.len(), 2);
        assert!(v1.contains(&QVector::unit("X")));
        assert!(v1.contains(&QVector::unit("00'")));
        let chain2 = Chain::new(vec!["X".into(), "01".into(), "0".into()]);
        let m2 = gamma_for_chain(s, &chain2, GammaSource::Auto).unwrap();
        let v2 = veronese_generators(&m2, s, &[0, 1]).unwrap();
        assert_eq!(v2, vec![QVector::unit("X")]);
        // d = 0 gives the trivial monoid
        assert!(veronese_generators(&m2, s, &[0, 0]).unwrap().is_empty());
    }

    #[test]
    fn valuation_lattice_matrix() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        let s = &b.strat;
        let chain = Chain::new(vec!["X".into(), "01".into(), "0".into()]);
        let mut f2 = QVector::zero();
        f2.set("X", rat_frac(1, 2));
        f2.set("01", rat_frac(1, 2));
        let vals = vec![f2, QVector::unit("01"), QVector::unit("0")];
        let lat = lattice_from_valuations(s, &chain, &vals).unwrap();
        let want: Vec<Vec<num_bigint::BigInt>> = vec![
            vec![2.into(), 0.into(), 0.into()],
            vec![(-1).into(), 1.into(), 0.into()],
            vec![0.into(), 0.into(), 1.into()],
        ];
        assert_eq!(lat.b_matrix, want);
        // membership: 2 a_X, a_01 - a_X, a_0 integral
        let mut v = QVector::zero();
        v.set("X", rat_frac(1, 2));
        v.set("01", rat_frac(3, 2));
        assert!(lat.contains(&v));
        v.set("0", rat_frac(1, 2));
        assert!(!lat.contains(&v));
        // identity valuations give the integer lattice
        let vals = vec![QVector::unit("X"), QVector::unit("01"), QVector::unit("0")];
        let hodge_chain = Chain::new(vec!["X".into(), "00'".into(), "0".into()]);
        let vals_h = vec![QVector::unit("X"), QVector::unit("00'"), QVector::unit("0")];
        let lat_h = lattice_from_valuations(s, &hodge_chain, &vals_h).unwrap();
        for row in &lat_h.b_matrix {
            for (j, x) in row.iter().enumerate() {
                let _ = j;
                assert!(x.magnitude() <= &num_bigint::BigUint::from(1u32));
            }
        }
        // on the bond-2 chain the unit vectors are not triangular with the
        // right diagonal
        assert!(lattice_from_valuations(s, &chain, &vals).is_err());
    }

    #[test]
    fn ls_lattice_agrees_with_valuation_lattice_on_y0y1() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        let s = &b.strat;
        let chain = Chain::new(vec!["X".into(), "01".into(), "0".into()]);
        let mut f2 = QVector::zero();
        f2.set("X", rat_frac(1, 2));
        f2.set("01", rat_frac(1, 2));
        let vals = vec![f2, QVector::unit("01"), QVector::unit("0")];
        let lat = lattice_from_valuations(s, &chain, &vals).unwrap();
        // all half-integer vectors with |entries| <= 3
        let half_range: Vec<Rat> = (-6..=6).map(|k| rat_frac(k, 2)).collect();
        for a in &half_range {
            for b_ in &half_range {
                for c in &half_range {
                    let mut v = QVector::zero();
                    v.set("X", a.clone());
                    v.set("01", b_.clone());
                    v.set("0", c.clone());
                    assert_eq!(
                        ls_lattice_contains(s, &chain, &v).unwrap(),
                        lat.contains(&v),
                        "at ({a}, {b_}, {c})"
                    );
                }
            }
        }
    }

    #[test]
    fn y0y1_indecomposables() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        let s = &b.strat;
        let fan = fan_of_monoids(s).unwrap();
        let indecs = fan.indecomposables(s);
        let mut half = QVector::zero();
        half.set("X", rat_frac(1, 2));
        half.set("01", rat_frac(1, 2));
        assert_eq!(indecs.len(), 7);
        assert!(indecs.contains(&half));
        for l in s.poset.elements() {
            assert!(indecs.contains(&QVector::unit(l)));
        }
    }

    #[test]
    fn decompose_examples() {
        let b = crate::builtins::builtin_example("y0y1").unwrap();
        let s = &b.strat;
        let fan = fan_of_monoids(s).unwrap();
        // 3 e_p splits into three copies
        let v = QVector::unit("X").scale(&rat(3));
        let parts = fan.decompose(s, &v).unwrap();
        assert_eq!(parts, vec![QVector::unit("X"); 3]);
        // the half generator is its own decomposition
        let mut half = QVector::zero();
        half.set("X", rat_frac(1, 2));
        half.set("01", rat_frac(1, 2));
        assert_eq!(fan.decompose(s, &half).unwrap(), vec![half.clone()]);
        // a general element re-sums and respects the support order
        let mut v = QVector::zero();
        v.set("X", rat_frac(3, 2));
        v.set("01", rat_frac(1, 2));
        v.set("0", rat(1));
        let parts = fan.decompose(s, &v).unwrap();
        let mut sum = QVector::zero();
        for p in &parts {
            sum = &sum + p;
        }
        assert_eq!(sum, v);
        for w in parts.windows(2) {
            let min_a = w[0].min_support(&s.poset).unwrap().unwrap();
            let max_b = w[1].max_support(&s.poset).unwrap().unwrap();
            assert!(s.poset.leq(&max_b, &min_a));
        }
        // type-A: decomposition is the column multiset, largest first
        let t = build_type_a(3, &[1, 2]).unwrap();
        let fan_a = fan_of_monoids(&t.strat).unwrap();
        let mut v = QVector::unit("(2,1)");
        v.set("(13,2)", rat(1));
        let parts = fan_a.decompose(&t.strat, &v).unwrap();
        assert_eq!(
            parts,
            vec![QVector::unit("(2,1)"), QVector::unit("(13,2)")]
        );
    }

    #[test]
    fn fan_product_requires_common_chain() {
        let t = build_type_a(3, &[1, 2]).unwrap();
        let a = QVector::unit("(3,1)");
        let b = QVector::unit("(12,2)");
        // (3,1) >= (12,2): product defined
        let p = fan_algebra_product(&a, &b, &t.strat).unwrap();
        assert_eq!(p.get("(3,1)"), rat(1));
        // (1,1) vs (23,2) are incomparable
        let c = QVector::unit("(1,1)");
        let d = QVector::unit("(23,2)");
        assert!(fan_algebra_product(&c, &d, &t.strat).is_none());
        // multiplying by zero keeps the element
        assert_eq!(fan_algebra_product(&a, &QVector::zero(), &t.strat).unwrap(), a);
    }
}
