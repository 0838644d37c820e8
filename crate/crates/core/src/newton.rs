//! Degree cones, Newton-Okounkov polytopes with subchain-labelled face
//! lattices, rational structures, exact volumes, Hilbert leading terms,
//! multidegrees and Ehrhart counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{degree_map, lattice_basis_from_generators, FanOfMonoids, LatticeDesc, MonoidDesc};
use crate::linalg;
use crate::poset::Chain;
use crate::qvec::QVector;
use crate::rational::{denominator_lcm, Rat};
use crate::strat::StratData;

fn deg_vec(s: &StratData, label: &str) -> Result<Vec<Rat>> {
    Ok(s.degree_of(label)?
        .iter()
        .map(|&d| Rat::from_integer(BigInt::from(d)))
        .collect())
}

fn rat_of(d: &[u64]) -> Vec<Rat> {
    d.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()
}

/// The rational polyhedral cone spanned by the degrees of a chain's extremal
/// functions, with both generator and facet descriptions.
#[derive(Debug, Clone)]
pub struct ConeDesc {
    pub chain: Chain,
    /// (label, degree vector)
    pub generators: Vec<(String, Vec<Rat>)>,
    /// basis of the linear span, as rows
    span_basis: Vec<Vec<Rat>>,
    /// facet normals, evaluated via these coordinates of the span
    facet_normals: Vec<Vec<Rat>>,
    pub dim: usize,
}

impl ConeDesc {
    pub fn new(s: &StratData, chain: &Chain) -> Result<ConeDesc> {
        let generators: Vec<(String, Vec<Rat>)> = chain
            .labels
            .iter()
            .map(|l| Ok((l.clone(), deg_vec(s, l)?)))
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<Rat>> = generators.iter().map(|(_, d)| d.clone()).collect();
        let (dim, reduced) = linalg::row_reduce(&rows);
        let span_basis: Vec<Vec<Rat>> = reduced.into_iter().take(dim).collect();
        let mut cone = ConeDesc {
            chain: chain.clone(),
            generators,
            span_basis,
            facet_normals: vec![],
            dim,
        };
        cone.facet_normals = cone.compute_facets()?;
        cone.check_roundtrip()?;
        Ok(cone)
    }

    /// Coordinates of a vector in the span basis; None when outside the span.
    fn span_coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if self.dim == 0 {
            return if v.iter().all(|x| x.is_zero()) {
                Some(vec![])
            } else {
                None
            };
        }
        let a: Vec<Vec<Rat>> = (0..v.len())
            .map(|i| self.span_basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        linalg::solve_unique(&a, v)
    }

    fn gens_in_span(&self) -> Vec<Vec<Rat>> {
        self.generators
            .iter()
            .map(|(_, d)| self.span_coords(d).expect("generator outside its own span"))
            .collect()
    }

    /// Facet normals via naive enumeration of (dim-1)-subsets of generators.
    fn compute_facets(&self) -> Result<Vec<Vec<Rat>>> {
        let k = self.dim;
        if k == 0 {
            return Ok(vec![]);
        }
        let gens = self.gens_in_span();
        let mut normals: Vec<Vec<Rat>> = Vec::new();
        let idx: Vec<usize> = (0..gens.len()).collect();
        for subset in subsets_of_size(&idx, k - 1) {
            let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| gens[i].clone()).collect();
            if linalg::rank(&rows) != k - 1 {
                continue;
            }
            // solve n . g = 0 for all g in the subset: nullspace is 1-dim
            let kernel = linalg::nullspace(&rows, k);
            if kernel.len() != 1 {
                continue;
            }
            let mut n = kernel.into_iter().next().unwrap();
            let pos = gens.iter().all(|g| dot(&n, g) >= Rat::zero());
            let neg = gens.iter().all(|g| dot(&n, g) <= Rat::zero());
            if neg && !pos {
                for x in n.iter_mut() {
                    *x = -x.clone();
                }
            } else if !pos {
                continue;
            }
            normalize_primitive(&mut n);
            if !normals.contains(&n) {
                normals.push(n);
            }
        }
        normals.sort_by_key(|n| format!("{n:?}"));
        Ok(normals)
    }

    /// The facet and generator descriptions must cut out the same cone.
    fn check_roundtrip(&self) -> Result<()> {
        let k = self.dim;
        if k == 0 {
            return Ok(());
        }
        let gens = self.gens_in_span();
        // extreme rays of the facet description
        let idx: Vec<usize> = (0..self.facet_normals.len()).collect();
        for subset in subsets_of_size(&idx, k.saturating_sub(1)) {
            let rows: Vec<Vec<Rat>> = subset
                .iter()
                .map(|&i| self.facet_normals[i].clone())
                .collect();
            if linalg::rank(&rows) != k - 1 {
                continue;
            }
            let kernel = linalg::nullspace(&rows, k);
            if kernel.len() != 1 {
                continue;
            }
            let ray = kernel.into_iter().next().unwrap();
            for candidate in [ray.clone(), ray.iter().map(|x| -x.clone()).collect()] {
                if self
                    .facet_normals
                    .iter()
                    .all(|n| dot(n, &candidate) >= Rat::zero())
                    && !in_cone(&gens, &candidate)
                {
                    return Err(Error::data(
                        "cone facet description does not match its generators".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, d: &[Rat]) -> bool {
        match self.span_coords(d) {
            None => false,
            Some(c) => self.facet_normals.iter().all(|n| dot(n, &c) >= Rat::zero()),
        }
    }

    pub fn relint_contains(&self, d: &[Rat]) -> bool {
        match self.span_coords(d) {
            None => false,
            Some(c) => self.facet_normals.iter().all(|n| dot(n, &c) > Rat::zero()),
        }
    }

    /// The subchain indexing the minimal face containing d: the elements whose
    /// degree lies on every facet through d. Empty when d is outside.
    pub fn restrict(&self, d: &[Rat]) -> Chain {
        let Some(c) = self.span_coords(d) else {
            return Chain::new(vec![]);
        };
        if self.facet_normals.iter().any(|n| dot(n, &c).is_negative()) {
            return Chain::new(vec![]);
        }
        let active: Vec<&Vec<Rat>> = self
            .facet_normals
            .iter()
            .filter(|n| dot(n, &c).is_zero())
            .collect();
        let gens = self.gens_in_span();
        let labels: Vec<String> = self
            .generators
            .iter()
            .zip(&gens)
            .filter(|(_, g)| active.iter().all(|n| dot(n, g).is_zero()))
            .map(|((l, _), _)| l.clone())
            .collect();
        Chain::new(labels)
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).sum()
}

fn normalize_primitive(v: &mut [Rat]) {
    let scale = denominator_lcm(v.iter());
    let mut g = BigInt::zero();
    for x in v.iter() {
        let n = (x.clone() * Rat::from_integer(scale.clone())).to_integer();
        g = num_integer::gcd(g, n);
    }
    if g.is_zero() {
        return;
    }
    let f = Rat::new(scale, g);
    for x in v.iter_mut() {
        *x = x.clone() * f.clone();
    }
}

/// Caratheodory test: is x a non-negative combination of the given vectors?
fn in_cone(gens: &[Vec<Rat>], x: &[Rat]) -> bool {
    if x.iter().all(|c| c.is_zero()) {
        return true;
    }
    let k = x.len();
    let idx: Vec<usize> = (0..gens.len()).collect();
    for size in 1..=k.min(gens.len()) {
        for subset in subsets_of_size(&idx, size) {
            let a: Vec<Vec<Rat>> = (0..k)
                .map(|row| subset.iter().map(|&i| gens[i][row].clone()).collect())
                .collect();
            if let Some((sol, kernel)) = linalg::solve_general(&a, x) {
                if kernel.is_empty() && sol.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}

/// sigma_C, the cone of degrees along a chain.
pub fn sigma_cone(s: &StratData, chain: &Chain) -> Result<ConeDesc> {
    ConeDesc::new(s, chain)
}

/// The subchain C_d: the edge set of the minimal face of sigma_C containing
/// d, empty when d is not in the cone.
pub fn restrict_chain(s: &StratData, chain: &Chain, d: &[u64]) -> Result<Chain> {
    let cone = ConeDesc::new(s, chain)?;
    Ok(cone.restrict(&rat_of(d)))
}

/// The poset of restricted chains at a fixed degree.
#[derive(Debug, Clone)]
pub struct VeronesePoset {
    /// distinct values of C -> C_d over all chains, sorted
    pub elements: Vec<Chain>,
    pub maximal: Vec<bool>,
    /// image index of every maximal chain of the poset
    pub chain_images: BTreeMap<Vec<String>, usize>,
}

impl VeronesePoset {
    /// The maximal chains whose image is maximal in this poset.
    pub fn maximal_chain_representatives(&self) -> Vec<Vec<String>> {
        self.chain_images
            .iter()
            .filter(|(_, &i)| self.maximal[i])
            .map(|(c, _)| c.clone())
            .collect()
    }
}

/// Computes the image of the restriction map over all chains of the poset.
pub fn veronese_poset(s: &StratData, d: &[u64]) -> Result<VeronesePoset> {
    let labels = s.poset.elements().to_vec();
    let mut all_chains: Vec<Vec<String>> = vec![vec![]];
    // grow chains by elements in label order; a subset is a chain iff
    // pairwise comparable
    fn grow(
        s: &StratData,
        labels: &[String],
        from: usize,
        cur: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        for i in from..labels.len() {
            if cur.iter().all(|l| s.poset.comparable(l, &labels[i])) {
                cur.push(labels[i].clone());
                out.push(cur.clone());
                grow(s, labels, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut cur = Vec::new();
    grow(s, &labels, 0, &mut cur, &mut all_chains);
    let dr = rat_of(d);
    let mut elements: Vec<Chain> = Vec::new();
    for subset in &all_chains {
        let chain = s.poset.sort_chain(subset)?;
        let cone = ConeDesc::new(s, &chain)?;
        let restricted = cone.restrict(&dr);
        let restricted = if restricted.is_empty() {
            Chain::new(vec![])
        } else {
            s.poset.sort_chain(&restricted.labels)?
        };
        if !elements.contains(&restricted) {
            elements.push(restricted);
        }
    }
    elements.sort();
    let maximal: Vec<bool> = elements
        .iter()
        .map(|e| {
            !elements.iter().any(|f| {
                f != e
                    && e.labels.iter().all(|l| f.labels.contains(l))
                    && f.labels.len() > e.labels.len()
            })
        })
        .collect();
    let mut chain_images = BTreeMap::new();
    for chain in s.poset.maximal_chains() {
        let cone = ConeDesc::new(s, &chain)?;
        let restricted = cone.restrict(&dr);
        let restricted = if restricted.is_empty() {
            Chain::new(vec![])
        } else {
            s.poset.sort_chain(&restricted.labels)?
        };
        let idx = elements.iter().position(|e| e == &restricted).unwrap();
        chain_images.insert(chain.labels.clone(), idx);
    }
    Ok(VeronesePoset {
        elements,
        maximal,
        chain_images,
    })
}

/// A face of a chain polytope, keyed by its subchain.
#[derive(Debug, Clone)]
pub struct Face {
    pub key: Vec<String>,
    pub dim: usize,
    pub vertices: Vec<usize>,
}

/// The degree-d slice of the cone spanned by a chain monoid: an exact
/// polytope with its subchain-labelled face lattice.
#[derive(Debug, Clone)]
pub struct PolytopeDesc {
    pub chain: Chain,
    pub degree: Vec<u64>,
    pub empty: bool,
    /// dimension of the polytope; 0 for the empty polytope (flagged by
    /// `empty`)
    pub dim: usize,
    pub vertices: Vec<QVector>,
    pub faces: Vec<Face>,
}

impl PolytopeDesc {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "chain": self.chain.labels,
            "degree": self.degree,
            "empty": self.empty,
            "dimension": if self.empty { serde_json::Value::Null } else { self.dim.into() },
            "vertices": self.vertices.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "faces_by_subchain": self.faces.iter().map(|f| serde_json::json!({
                "subchain": f.key,
                "dimension": f.dim,
                "vertices": f.vertices,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Builds the polytope of a chain at degree d. The optional monoid is used to
/// verify that the vertices lie in the rational span of its lattice.
pub fn polytope(
    s: &StratData,
    chain: &Chain,
    d: &[u64],
    monoid: Option<&MonoidDesc>,
) -> Result<PolytopeDesc> {
    if d.len() != s.m {
        return Err(Error::shape(format!(
            "degree vector has length {}, expected {}",
            d.len(),
            s.m
        )));
    }
    let dr = rat_of(d);
    let cone = ConeDesc::new(s, chain)?;
    if !cone.contains(&dr) {
        return Ok(PolytopeDesc {
            chain: chain.clone(),
            degree: d.to_vec(),
            empty: true,
            dim: 0,
            vertices: vec![],
            faces: vec![],
        });
    }
    // faces = distinct D_d over subchains D of the chain
    let mut face_keys: Vec<Vec<String>> = Vec::new();
    let idx: Vec<usize> = (0..chain.len()).collect();
    for size in 0..=chain.len() {
        for subset in subsets_of_size(&idx, size) {
            let sub = Chain::new(subset.iter().map(|&i| chain.labels[i].clone()).collect());
            let sub_cone = ConeDesc::new(s, &sub)?;
            if !sub_cone.contains(&dr) {
                continue;
            }
            let key = sub_cone.restrict(&dr).labels;
            if !face_keys.contains(&key) {
                face_keys.push(key);
            }
        }
    }
    face_keys.sort();
    // vertices: 0-dimensional faces
    let mut vertices: Vec<QVector> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for key in &face_keys {
        let sub = Chain::new(key.clone());
        let sub_cone = ConeDesc::new(s, &sub)?;
        let dim = key.len() - sub_cone.dim;
        dims.push(dim);
        if dim == 0 && !key.is_empty() || (key.is_empty() && d.iter().all(|&x| x == 0)) {
            let vert = solve_vertex(s, key, &dr)?;
            if !vertices.contains(&vert) {
                vertices.push(vert);
            }
        }
    }
    vertices.sort_by_key(|v| format!("{v:?}"));
    if let Some(monoid) = monoid {
        let gens: Vec<QVector> = monoid.generators.to_vec();
        let lattice = lattice_basis_from_generators(&gens);
        for v in &vertices {
            if lattice.coordinates(v).is_none() {
                return Err(Error::data(format!(
                    "vertex {} is outside the rational span of the chain lattice",
                    v.display(&s.poset)
                )));
            }
        }
    }
    let faces: Vec<Face> = face_keys
        .iter()
        .zip(&dims)
        .map(|(key, &dim)| Face {
            key: key.clone(),
            dim,
            vertices: vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| v.support().iter().all(|l| key.contains(l)))
                .map(|(i, _)| i)
                .collect(),
        })
        .collect();
    let full_key = cone.restrict(&dr).labels;
    let dim = faces
        .iter()
        .find(|f| f.key == full_key)
        .map(|f| f.dim)
        .unwrap_or(0);
    Ok(PolytopeDesc {
        chain: chain.clone(),
        degree: d.to_vec(),
        empty: false,
        dim,
        vertices,
        faces,
    })
}

fn solve_vertex(s: &StratData, key: &[String], d: &[Rat]) -> Result<QVector> {
    if key.is_empty() {
        if d.iter().all(|x| x.is_zero()) {
            return Ok(QVector::zero());
        }
        return Err(Error::data("empty face key with non-zero degree".to_string()));
    }
    let cols: Vec<Vec<Rat>> = key.iter().map(|l| deg_vec(s, l)).collect::<Result<_>>()?;
    let a: Vec<Vec<Rat>> = (0..s.m)
        .map(|row| cols.iter().map(|c| c[row].clone()).collect())
        .collect();
    let sol = linalg::solve_unique(&a, d)
        .ok_or_else(|| Error::data("vertex system is not uniquely solvable".to_string()))?;
    if sol.iter().any(|x| x.is_negative()) {
        return Err(Error::data("vertex solution has negative coordinates".to_string()));
    }
    Ok(QVector::from_entries(
        key.iter().cloned().zip(sol),
    ))
}

/// A rational structure on the degree slices of a chain: sections of each
/// unit degree inside the chain lattice and a basis of the degree-zero
/// sublattice. Projection sends the degree-d slice affinely onto the span of
/// the degree-zero part, identifying lattice points with integer vectors.
#[derive(Debug, Clone)]
pub struct RationalStructure {
    pub chain: Chain,
    pub sections: Vec<QVector>,
    pub l0_basis: Vec<QVector>,
}

pub fn rational_structure(
    s: &StratData,
    chain: &Chain,
    lattice: &LatticeDesc,
) -> Result<RationalStructure> {
    // integer degree matrix of the lattice basis
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for b in &lattice.basis {
        let deg = degree_map(b, s)?;
        let mut col = Vec::new();
        for x in &deg {
            if !x.is_integer() {
                return Err(Error::data(
                    "lattice basis has non-integral degrees".to_string(),
                ));
            }
            col.push(x.to_integer());
        }
        cols.push(col);
    }
    let m_rows: Vec<Vec<BigInt>> = (0..s.m)
        .map(|row| cols.iter().map(|c| c[row].clone()).collect())
        .collect();
    let mut sections = Vec::new();
    for i in 0..s.m {
        let mut target = vec![BigInt::zero(); s.m];
        target[i] = BigInt::one();
        let Some((z, _)) = linalg::solve_integer(&m_rows, &target) else {
            return Err(Error::domain(format!(
                "lattice not graded-surjective (no element of degree e_{}; check input)",
                i + 1
            )));
        };
        let mut b = QVector::zero();
        for (j, zj) in z.iter().enumerate() {
            b = &b + &lattice.basis[j].scale(&Rat::from_integer(zj.clone()));
        }
        sections.push(b);
    }
    let kernel = linalg::integer_kernel(&m_rows);
    let raw: Vec<QVector> = kernel
        .iter()
        .map(|z| {
            let mut w = QVector::zero();
            for (j, zj) in z.iter().enumerate() {
                w = &w + &lattice.basis[j].scale(&Rat::from_integer(zj.clone()));
            }
            w
        })
        .collect();
    let l0 = lattice_basis_from_generators(&raw);
    Ok(RationalStructure {
        chain: chain.clone(),
        sections,
        l0_basis: l0.basis,
    })
}

impl RationalStructure {
    pub fn rank(&self) -> usize {
        self.l0_basis.len()
    }

    /// Projects a vector of the chain space into coordinates of the
    /// degree-zero lattice basis.
    pub fn project(&self, s: &StratData, v: &QVector) -> Result<Vec<Rat>> {
        let deg = degree_map(v, s)?;
        let mut shifted = v.clone();
        for (i, c) in deg.iter().enumerate() {
            shifted = &shifted - &self.sections[i].scale(c);
        }
        let l0 = LatticeDesc {
            basis: self.l0_basis.clone(),
        };
        l0.coordinates(&shifted)
            .ok_or_else(|| Error::data("projected point misses the degree-zero span".to_string()))
    }
}

/// Exact volume of the projected polytope, measured against the degree-zero
/// lattice. A polytope of dimension below the lattice rank reports 0 with
/// `collapsed` set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeResult {
    pub value: Rat,
    pub collapsed: bool,
}

pub fn volume(s: &StratData, p: &PolytopeDesc, rs: &RationalStructure) -> Result<VolumeResult> {
    if p.empty {
        return Ok(VolumeResult {
            value: Rat::zero(),
            collapsed: true,
        });
    }
    let r = rs.rank();
    if p.dim < r {
        return Ok(VolumeResult {
            value: Rat::zero(),
            collapsed: true,
        });
    }
    if p.dim > r {
        return Err(Error::data(format!(
            "polytope dimension {} exceeds lattice rank {r}",
            p.dim
        )));
    }
    let points: Vec<Vec<Rat>> = p
        .vertices
        .iter()
        .map(|v| rs.project(s, v))
        .collect::<Result<_>>()?;
    let simplices = triangulate(p, p.faces.iter().max_by_key(|f| f.dim).unwrap());
    let mut vol = Rat::zero();
    let mut rfact = BigInt::one();
    for i in 1..=r {
        rfact *= BigInt::from(i as u64);
    }
    for simplex in simplices {
        let base = &points[simplex[0]];
        let mat: Vec<Vec<Rat>> = simplex[1..]
            .iter()
            .map(|&vi| {
                points[vi]
                    .iter()
                    .zip(base)
                    .map(|(x, b)| x.clone() - b.clone())
                    .collect()
            })
            .collect();
        let d = linalg::det(&mat);
        vol += Rat::new(d.numer().abs(), d.denom().clone()) / Rat::from_integer(rfact.clone());
    }
    Ok(VolumeResult {
        value: vol,
        collapsed: false,
    })
}

/// Triangulates a face by coning its lowest-index vertex over the facets that
/// avoid it; returns simplices as vertex index lists of length dim + 1.
fn triangulate(p: &PolytopeDesc, face: &Face) -> Vec<Vec<usize>> {
    if face.dim == 0 {
        return vec![vec![face.vertices[0]]];
    }
    let v0 = *face.vertices.iter().min().unwrap();
    let mut out = Vec::new();
    for facet in p.faces.iter().filter(|f| {
        f.dim + 1 == face.dim
            && f.key.iter().all(|l| face.key.contains(l))
            && !f.vertices.contains(&v0)
    }) {
        for mut simplex in triangulate(p, facet) {
            simplex.insert(0, v0);
            out.push(simplex);
        }
    }
    out
}

/// The leading term of the multigraded Hilbert polynomial at d: the sum of
/// projected volumes over the maximal restricted chains. `boundary` is set
/// when d touches the boundary of some chain cone, where the result is a
/// best-effort value.
#[derive(Debug, Clone)]
pub struct LeadingTerm {
    pub value: Rat,
    pub boundary: bool,
}

pub fn leading_term(s: &StratData, d: &[u64], fan: &FanOfMonoids) -> Result<LeadingTerm> {
    let dr = rat_of(d);
    let vp = veronese_poset(s, d)?;
    let mut boundary = false;
    for chain in s.poset.maximal_chains() {
        let cone = ConeDesc::new(s, &chain)?;
        if cone.contains(&dr) && !cone.relint_contains(&dr) {
            boundary = true;
        }
    }
    let mut total = Rat::zero();
    let mut seen: Vec<usize> = Vec::new();
    for (chain_labels, &img) in &vp.chain_images {
        if !vp.maximal[img] || vp.elements[img].is_empty() || seen.contains(&img) {
            continue;
        }
        seen.push(img);
        let chain = Chain::new(chain_labels.clone());
        let poly = polytope(s, &chain, d, None)?;
        let monoid = fan
            .monoids
            .get(chain_labels)
            .ok_or_else(|| Error::data("fan is missing a maximal chain monoid".to_string()))?;
        let lattice = lattice_basis_from_generators(&monoid.generators);
        match rational_structure(s, &chain, &lattice) {
            Ok(rs) => {
                let v = volume(s, &poly, &rs)?;
                total += v.value;
            }
            Err(_) if boundary => {
                // boundary collapse without sections; such a component is
                // lower-dimensional and contributes nothing
            }
            Err(e) => return Err(e),
        }
    }
    Ok(LeadingTerm {
        value: total,
        boundary,
    })
}

/// Closed-form volume for LS-type data: the product of the bonds times the
/// multisimplex volume per index-poset block.
pub fn ls_volume(s: &StratData, chain: &Chain, d: &[u64]) -> Result<Rat> {
    // blocks of the chain by index set, in inclusion order
    let mut blocks: Vec<(Vec<usize>, Vec<String>)> = Vec::new();
    for label in &chain.labels {
        let is: Vec<usize> = s.index_set_of(label)?.iter().copied().collect();
        match blocks.last_mut() {
            Some((key, labels)) if *key == is => labels.push(label.clone()),
            _ => blocks.push((is, vec![label.clone()])),
        }
    }
    if blocks.len() != s.m {
        return Err(Error::data(format!(
            "chain crosses {} index sets, expected m = {}",
            blocks.len(),
            s.m
        )));
    }
    // the matrix whose j-th column is the common degree of block j (reversed
    // so inclusion-minimal blocks come first)
    blocks.reverse();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for (_, labels) in &blocks {
        let first = deg_vec(s, &labels[0])?;
        for l in labels {
            if deg_vec(s, l)? != first {
                return Err(Error::data(format!(
                    "degrees differ within the index block of '{l}'"
                )));
            }
        }
        cols.push(first);
    }
    let mat: Vec<Vec<Rat>> = (0..s.m)
        .map(|row| cols.iter().map(|c| c[row].clone()).collect())
        .collect();
    let inv = linalg::invert(&mat)
        .ok_or_else(|| Error::data("index block degree matrix is singular".to_string()))?;
    let dr = rat_of(d);
    let phi: Vec<Rat> = inv.iter().map(|row| dot(row, &dr)).collect();
    if phi.iter().any(|x| x.is_negative()) {
        return Ok(Rat::zero()); // d outside the cone of the chain
    }
    let mut bond_product = Rat::one();
    for (_, _, b) in chain
        .labels
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone(), s.poset.bond(&w[0], &w[1]).unwrap_or(0)))
    {
        if b == 0 {
            return Err(Error::domain("chain contains a non-cover".to_string()));
        }
        bond_product *= Rat::from_integer(BigInt::from(b));
    }
    let mut vol = bond_product;
    for (j, (_, labels)) in blocks.iter().enumerate() {
        let sdim = labels.len() - 1;
        let mut fact = BigInt::one();
        for i in 1..=sdim {
            fact *= BigInt::from(i as u64);
        }
        let mut pow = Rat::one();
        for _ in 0..sdim {
            pow *= phi[j].clone();
        }
        vol *= pow / Rat::from_integer(fact);
    }
    Ok(vol)
}

/// Multidegrees for stratifications whose index poset is totally ordered and
/// whose degrees are unit vectors: the bond-weighted number of maximal chains
/// meeting the i-th degree class in exactly k_i + 1 elements.
pub fn multidegrees(s: &StratData) -> Result<BTreeMap<Vec<usize>, u64>> {
    // each element must have degree a unit vector
    let mut class_of: BTreeMap<String, usize> = BTreeMap::new();
    for l in s.poset.elements() {
        let deg = s.degree_of(l)?;
        let ones: Vec<usize> = deg
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect();
        if ones.len() != 1 || deg[ones[0]] != 1 {
            return Err(Error::domain(format!(
                "multidegrees need unit-vector degrees; '{l}' has degree {deg:?}"
            )));
        }
        class_of.insert(l.clone(), ones[0]);
    }
    let ip = crate::strat::IndexPoset::of(s);
    if !ip.is_totally_ordered() {
        return Err(Error::domain(
            "multidegrees need a totally ordered index poset".to_string(),
        ));
    }
    let mut out: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for chain in s.poset.maximal_chains() {
        let mut counts = vec![0usize; s.m];
        for l in &chain.labels {
            counts[class_of[l]] += 1;
        }
        if counts.contains(&0) {
            return Err(Error::data(
                "a maximal chain misses a degree class".to_string(),
            ));
        }
        let key: Vec<usize> = counts.iter().map(|&c| c - 1).collect();
        let mut bond_product = 1u64;
        for w in chain.labels.windows(2) {
            bond_product *= s.poset.bond(&w[0], &w[1]).unwrap_or(1);
        }
        *out.entry(key).or_insert(0) += bond_product;
    }
    Ok(out)
}

/// Counts the lattice points of the n-fold dilation of the polytope: vectors
/// of the lattice with the dilated degree and non-negative support inside the
/// chain.
pub fn ehrhart_count(
    s: &StratData,
    p: &PolytopeDesc,
    lattice: &LatticeDesc,
    n: u64,
) -> Result<BigInt> {
    if p.empty {
        return Ok(BigInt::zero());
    }
    let target: Vec<Rat> = p
        .degree
        .iter()
        .map(|&x| Rat::from_integer(BigInt::from(x * n)))
        .collect();
    let denom = denominator_lcm(
        lattice
            .basis
            .iter()
            .flat_map(|b| b.iter().map(|(_, c)| c)),
    );
    let step = Rat::new(BigInt::one(), denom);
    let labels = p.chain.labels.clone();
    let degs: Vec<Vec<Rat>> = labels
        .iter()
        .map(|l| deg_vec(s, l))
        .collect::<Result<_>>()?;
    let mut count = BigInt::zero();
    let mut coords: Vec<Rat> = vec![Rat::zero(); labels.len()];
    fn rec(
        labels: &[String],
        degs: &[Vec<Rat>],
        step: &Rat,
        target: &[Rat],
        at: usize,
        acc: &[Rat],
        coords: &mut Vec<Rat>,
        lattice: &LatticeDesc,
        count: &mut BigInt,
    ) {
        if at == labels.len() {
            if acc == target {
                let v = QVector::from_entries(
                    labels.iter().cloned().zip(coords.iter().cloned()),
                );
                if lattice.contains(&v) {
                    *count += 1;
                }
            }
            return;
        }
        let mut val = Rat::zero();
        loop {
            let used: Vec<Rat> = acc
                .iter()
                .zip(&degs[at])
                .map(|(a, d)| a.clone() + d.clone() * val.clone())
                .collect();
            if used.iter().zip(target).any(|(u, t)| u > t) {
                break;
            }
            coords[at] = val.clone();
            rec(labels, degs, step, target, at + 1, &used, coords, lattice, count);
            val += step.clone();
            if degs[at].iter().all(|x| x.is_zero()) {
                break; // zero-degree coordinate: only the zero value matters
            }
        }
        coords[at] = Rat::zero();
    }
    rec(
        &labels,
        &degs,
        &step,
        &target,
        0,
        &vec![Rat::zero(); s.m],
        &mut coords,
        lattice,
        &mut count,
    );
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_example;
    use crate::fan::fan_of_monoids;
    use crate::rational::{rat, rat_frac};

    fn chain_of(s: &StratData, labels: &[&str]) -> Chain {
        s.poset
            .sort_chain(&labels.iter().map(|l| l.to_string()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn type_a_cone_is_orthant() {
        let t = crate::strat::build_type_a(3, &[1, 2]).unwrap();
        for chain in t.strat.poset.maximal_chains() {
            let cone = ConeDesc::new(&t.strat, &chain).unwrap();
            assert_eq!(cone.dim, 2);
            assert!(cone.relint_contains(&[rat(1), rat(1)]));
            assert!(cone.contains(&[rat(1), rat(0)]));
            assert!(!cone.relint_contains(&[rat(1), rat(0)]));
        }
    }

    #[test]
    fn y1_fourth_chain_cone() {
        let b = builtin_example("y1").unwrap();
        let chain = chain_of(&b.strat, &["X", "00'", "0'"]);
        let cone = ConeDesc::new(&b.strat, &chain).unwrap();
        // spanned by (1,1) and (0,1)
        assert!(cone.contains(&[rat(1), rat(1)]));
        assert!(cone.contains(&[rat(0), rat(1)]));
        assert!(!cone.contains(&[rat(2), rat(1)]));
        assert!(cone.relint_contains(&[rat(1), rat(2)]));
        assert!(!cone.relint_contains(&[rat(1), rat(1)]));
    }

    #[test]
    fn restrict_chain_on_bonded_chains() {
        let b = builtin_example("y0y1").unwrap();
        let c2 = chain_of(&b.strat, &["X", "01", "0"]);
        let r = restrict_chain(&b.strat, &c2, &[0, 1]).unwrap();
        assert_eq!(r.labels, vec!["X".to_string()]);
        // d = 0 restricts to the empty chain
        let r0 = restrict_chain(&b.strat, &c2, &[0, 0]).unwrap();
        assert!(r0.is_empty());
        // interior d keeps the whole chain
        let ri = restrict_chain(&b.strat, &c2, &[2, 2]).unwrap();
        assert_eq!(ri.len(), 3);
        // d outside the cone
        let c4 = chain_of(&b.strat, &["X", "11'", "1"]);
        let cone4 = ConeDesc::new(&b.strat, &c4).unwrap();
        assert!(cone4.contains(&[rat(0), rat(1)]));
    }

    #[test]
    fn veronese_poset_y0y1() {
        let b = builtin_example("y0y1").unwrap();
        let vp = veronese_poset(&b.strat, &[0, 1]).unwrap();
        let mut reps = vp.maximal_chain_representatives();
        reps.sort();
        assert_eq!(
            reps,
            vec![
                vec!["X".to_string(), "00'".to_string(), "0".to_string()],
                vec!["X".to_string(), "11'".to_string(), "1".to_string()],
            ]
        );
        let vp = veronese_poset(&b.strat, &[1, 1]).unwrap();
        assert_eq!(vp.maximal_chain_representatives().len(), 4);
        // d = 0: only the empty chain
        let vp = veronese_poset(&b.strat, &[0, 0]).unwrap();
        assert_eq!(vp.elements.len(), 1);
        assert!(vp.elements[0].is_empty());
    }

    #[test]
    fn y1_polytope_vertices() {
        let b = builtin_example("y1").unwrap();
        let chain = chain_of(&b.strat, &["X", "01", "0"]);
        let p = polytope(&b.strat, &chain, &[3, 2], None).unwrap();
        assert!(!p.empty);
        assert_eq!(p.dim, 1);
        assert_eq!(p.vertices.len(), 2);
        let mut v1 = QVector::zero();
        v1.set("0", rat(3));
        v1.set("X", rat(2));
        let mut v2 = QVector::zero();
        v2.set("01", rat_frac(3, 2));
        v2.set("X", rat(2));
        assert!(p.vertices.contains(&v1));
        assert!(p.vertices.contains(&v2));
        // d with d1 > d2 is outside the fourth chain's cone
        let c4 = chain_of(&b.strat, &["X", "00'", "0'"]);
        let p4 = polytope(&b.strat, &c4, &[3, 2], None).unwrap();
        assert!(p4.empty);
    }

    #[test]
    fn y1_per_chain_volumes() {
        let b = builtin_example("y1").unwrap();
        let fan = fan_of_monoids(&b.strat).unwrap();
        let d = [3u64, 2];
        let expect = [
            (vec!["X", "00'", "0"], rat(2)),      // min(d1, d2)
            (vec!["X", "00'", "0'"], rat(0)),     // max(d2 - d1, 0)
            (vec!["X", "01", "0"], rat_frac(3, 2)), // d1 / 2
            (vec!["X", "01", "1"], rat_frac(3, 2)), // d1 / 2
        ];
        for (labels, want) in expect {
            let chain = chain_of(&b.strat, &labels);
            let p = polytope(&b.strat, &chain, &d, None).unwrap();
            let monoid = fan.monoids.get(&chain.labels).unwrap();
            let lattice = lattice_basis_from_generators(&monoid.generators);
            if p.empty {
                assert_eq!(want, rat(0));
                continue;
            }
            let rs = rational_structure(&b.strat, &chain, &lattice).unwrap();
            let v = volume(&b.strat, &p, &rs).unwrap();
            assert_eq!(v.value, want, "chain {labels:?}");
        }
        let lt = leading_term(&b.strat, &d, &fan).unwrap();
        assert_eq!(lt.value, rat(5)); // d1 + d2
        assert!(!lt.boundary);
    }

    #[test]
    fn leading_term_at_zero_degree() {
        let b = builtin_example("y1").unwrap();
        let fan = fan_of_monoids(&b.strat).unwrap();
        let lt = leading_term(&b.strat, &[0, 0], &fan).unwrap();
        assert_eq!(lt.value, rat(0));
    }

    #[test]
    fn leading_term_on_boundary_degree() {
        // d = (0,1) lies on cone boundaries; the component sum still gives
        // the value of d1 + d2 on both stratifications of the same variety
        for name in ["y1", "y0y1"] {
            let b = builtin_example(name).unwrap();
            let fan = fan_of_monoids(&b.strat).unwrap();
            let lt = leading_term(&b.strat, &[0, 1], &fan).unwrap();
            assert_eq!(lt.value, rat(1), "{name}");
            assert!(lt.boundary);
        }
    }

    #[test]
    fn multidegrees_a2() {
        let t = crate::strat::build_type_a(3, &[1, 2]).unwrap();
        let md = multidegrees(&t.strat).unwrap();
        assert_eq!(md.get(&vec![2, 1]), Some(&1));
        assert_eq!(md.get(&vec![1, 2]), Some(&1));
        assert_eq!(md.len(), 2);
    }

    #[test]
    fn multidegree_single_chain() {
        let t = crate::strat::build_type_a(3, &[2]).unwrap();
        let md = multidegrees(&t.strat).unwrap();
        assert_eq!(md.len(), 1);
        assert_eq!(md.values().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn ls_volume_matches_volume_on_type_a() {
        let t = crate::strat::build_type_a(3, &[1, 2]).unwrap();
        let fan = fan_of_monoids(&t.strat).unwrap();
        for chain in t.strat.poset.maximal_chains() {
            for d1 in 1..=3u64 {
                for d2 in 1..=3u64 {
                    let d = [d1, d2];
                    let p = polytope(&t.strat, &chain, &d, None).unwrap();
                    let monoid = fan.monoids.get(&chain.labels).unwrap();
                    let lattice = lattice_basis_from_generators(&monoid.generators);
                    let rs = rational_structure(&t.strat, &chain, &lattice).unwrap();
                    let vol = volume(&t.strat, &p, &rs).unwrap();
                    let lsv = ls_volume(&t.strat, &chain, &d).unwrap();
                    assert_eq!(vol.value, lsv, "chain {} d {d:?}", chain.display());
                }
            }
        }
    }

    #[test]
    fn ehrhart_on_bonded_chain_uses_half_integer_lattice() {
        // on the chain with bond 2 the lattice admits half-integer points, so
        // the dilated segment at d = (1,1) holds floor(n/2) + 1 of them
        let b = builtin_example("y0y1").unwrap();
        let chain = chain_of(&b.strat, &["X", "01", "0"]);
        let fan = fan_of_monoids(&b.strat).unwrap();
        let monoid = fan.monoids.get(&chain.labels).unwrap();
        let lattice = lattice_basis_from_generators(&monoid.generators);
        let p = polytope(&b.strat, &chain, &[1, 1], None).unwrap();
        for n in [1u64, 2, 3, 4, 5, 20] {
            let c = ehrhart_count(&b.strat, &p, &lattice, n).unwrap();
            assert_eq!(c, BigInt::from(n / 2 + 1), "n = {n}");
        }
        let rs = rational_structure(&b.strat, &chain, &lattice).unwrap();
        let v = volume(&b.strat, &p, &rs).unwrap();
        assert_eq!(v.value, rat_frac(1, 2));
    }

    #[test]
    fn ehrhart_unit_segment() {
        // a 2-element chain with equal unit degrees gives the segment [0, d]
        let t = crate::strat::build_type_a(3, &[2]).unwrap();
        // chain: the full Grassmannian chain; at d = 1 the polytope is the
        // standard 2-simplex
        let chain = t.strat.poset.maximal_chains().pop().unwrap();
        let p = polytope(&t.strat, &chain, &[1], None).unwrap();
        let fan = fan_of_monoids(&t.strat).unwrap();
        let monoid = fan.monoids.get(&chain.labels).unwrap();
        let lattice = lattice_basis_from_generators(&monoid.generators);
        // simplex dilation counts: C(n+2, 2)
        for n in [1u64, 2, 5, 10] {
            let c = ehrhart_count(&t.strat, &p, &lattice, n).unwrap();
            assert_eq!(c, BigInt::from((n + 1) * (n + 2) / 2));
        }
        // empty polytope counts zero
        let b = builtin_example("y1").unwrap();
        let c4 = chain_of(&b.strat, &["X", "00'", "0'"]);
        let p4 = polytope(&b.strat, &c4, &[3, 2], None).unwrap();
        let l4 = LatticeDesc { basis: vec![] };
        assert_eq!(ehrhart_count(&b.strat, &p4, &l4, 5).unwrap(), BigInt::zero());
    }
}
