//! The built-in example stratifications, fully populated with charts,
//! relations and (where needed) explicit monoid data.
//!
//! Bar decorations in stratum names are written with a trailing apostrophe:
//! the stratum usually printed "0 0-bar" has label "00'".

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poset::{Chain, GradedPoset};
use crate::qvec::QVector;
use crate::rational::Rat;
use crate::strat::{strat_from_uw, StratData};
use crate::valuation::{ChainChart, MultiGradedPoly, VarTable};
use crate::weyl::{build_underline_w_with, geq_anti};

/// A stratification bundled with the ambient-ring data needed by the
/// valuation engine and with display aliases.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: String,
    pub strat: StratData,
    pub vars: VarTable,
    pub relations: Vec<MultiGradedPoly>,
    pub charts: BTreeMap<Vec<String>, ChainChart>,
    /// coordinates vanishing identically on each stratum's multicone
    pub vanishing: BTreeMap<String, Vec<String>>,
    /// alternative display names accepted for stratum selection
    pub aliases: BTreeMap<String, String>,
}

pub const BUILTIN_NAMES: [&str; 3] = ["y1", "y0y1", "antiA2"];

pub fn builtin_example(name: &str) -> Result<Builtin> {
    match name {
        "y1" => Ok(build_y1()),
        "y0y1" => Ok(build_y0y1()),
        "antiA2" => Ok(build_anti_a2()),
        _ => Err(Error::domain(format!(
            "unknown builtin '{name}' (available: {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

fn p1xp1_vars() -> VarTable {
    VarTable::new(vec![
        ("x0".to_string(), vec![1, 0]),
        ("x1".to_string(), vec![1, 0]),
        ("y0".to_string(), vec![0, 1]),
        ("y1".to_string(), vec![0, 1]),
    ])
}

fn segre_relation(vars: &VarTable) -> MultiGradedPoly {
    crate::valuation::parse_poly("x0*y1 - x1*y0", vars).unwrap()
}

fn chart(
    chain: &[&str],
    chart_vars: &[&str],
    subst: &[(&str, &[(&str, i64)])],
) -> (Vec<String>, ChainChart) {
    let vars: Vec<String> = chart_vars.iter().map(|v| v.to_string()).collect();
    let mut map = BTreeMap::new();
    for (amb, mono) in subst {
        let mut exps = vec![0i64; vars.len()];
        for (v, e) in mono.iter() {
            let pos = vars.iter().position(|w| w == v).unwrap();
            exps[pos] = *e;
        }
        map.insert(amb.to_string(), (Rat::from_integer(BigInt::from(1)), exps));
    }
    let labels: Vec<String> = chain.iter().map(|l| l.to_string()).collect();
    (
        labels.clone(),
        ChainChart {
            chain: Chain::new(labels),
            chart_vars: vars,
            subst: map,
        },
    )
}

/// The diagonal line in P^1 x P^1 with extremal function y1 at the top.
/// Hodge type: all bonds are 1.
fn build_y1() -> Builtin {
    let elements = ["X", "01", "00'", "1", "0", "0'"];
    let covers = [("X", "01"),
        ("X", "00'"),
        ("01", "0"),
        ("01", "1"),
        ("00'", "0"),
        ("00'", "0'")];
    let ranks = [("X", 2u32), ("01", 1), ("00'", 1), ("0", 0), ("1", 0), ("0'", 0)];
    let poset = GradedPoset::new(
        elements.iter().map(|s| s.to_string()).collect(),
        covers
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        ranks.iter().map(|(l, r)| (l.to_string(), *r)).collect(),
        BTreeMap::new(),
    )
    .unwrap();
    let index_sets = [
        ("X", vec![1, 2]),
        ("01", vec![1]),
        ("00'", vec![1, 2]),
        ("1", vec![1]),
        ("0", vec![1]),
        ("0'", vec![2]),
    ];
    let degrees = [
        ("X", vec![0u64, 1]),
        ("01", vec![2, 0]),
        ("00'", vec![1, 1]),
        ("1", vec![1, 0]),
        ("0", vec![1, 0]),
        ("0'", vec![0, 1]),
    ];
    let extremal = [
        ("X", "y1"),
        ("01", "x0*x1"),
        ("00'", "x0*y0"),
        ("1", "x1"),
        ("0", "x0"),
        ("0'", "y0"),
    ];
    let strat = StratData {
        poset,
        m: 2,
        index_sets: index_sets
            .iter()
            .map(|(l, is)| (l.to_string(), is.iter().copied().collect()))
            .collect(),
        degrees: degrees
            .iter()
            .map(|(l, d)| (l.to_string(), d.clone()))
            .collect(),
        extremal: extremal
            .iter()
            .map(|(l, f)| (l.to_string(), f.to_string()))
            .collect(),
        explicit_gamma: BTreeMap::new(),
    };
    let vars = p1xp1_vars();
    let charts: BTreeMap<Vec<String>, ChainChart> = [
        chart(
            &["X", "01", "0"],
            &["t", "s", "u"],
            &[
                ("x0", &[("u", 1)]),
                ("x1", &[("s", 1), ("u", 1)]),
                ("y0", &[("t", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("s", 1), ("u", 1)]),
            ],
        ),
        chart(
            &["X", "01", "1"],
            &["t", "s", "u"],
            &[
                ("x0", &[("s", 1), ("u", 1)]),
                ("x1", &[("u", 1)]),
                ("y0", &[("t", 1), ("s", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("u", 1)]),
            ],
        ),
        chart(
            &["X", "00'", "0"],
            &["t", "s", "u"],
            &[
                ("x0", &[("u", 1)]),
                ("x1", &[("t", 1), ("u", 1)]),
                ("y0", &[("s", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("s", 1), ("u", 1)]),
            ],
        ),
        chart(
            &["X", "00'", "0'"],
            &["t", "s", "u"],
            &[
                ("x0", &[("s", 1), ("u", 1)]),
                ("x1", &[("t", 1), ("s", 1), ("u", 1)]),
                ("y0", &[("u", 1)]),
                ("y1", &[("t", 1), ("u", 1)]),
            ],
        ),
    ]
    .into_iter()
    .collect();
    let vanishing = [
        ("01", vec!["y0", "y1"]),
        ("00'", vec!["x1", "y1"]),
        ("1", vec!["x0", "y0", "y1"]),
        ("0", vec!["x1", "y0", "y1"]),
        ("0'", vec!["x0", "x1", "y1"]),
    ]
    .iter()
    .map(|(l, v)| (l.to_string(), v.iter().map(|s| s.to_string()).collect()))
    .collect();
    Builtin {
        name: "y1".to_string(),
        strat,
        vars: vars.clone(),
        relations: vec![segre_relation(&vars)],
        charts,
        vanishing,
        aliases: BTreeMap::new(),
    }
}

/// The same variety with extremal function y0*y1 at the top; the cover from
/// X to 01 has bond 2 and two chain monoids need half-integer generators.
fn build_y0y1() -> Builtin {
    let elements = ["X", "00'", "01", "11'", "0", "1"];
    let covers = [("X", "00'"),
        ("X", "01"),
        ("X", "11'"),
        ("00'", "0"),
        ("01", "0"),
        ("01", "1"),
        ("11'", "1")];
    let ranks = [
        ("X", 2u32),
        ("00'", 1),
        ("01", 1),
        ("11'", 1),
        ("0", 0),
        ("1", 0),
    ];
    let bonds = [(("X", "01"), 2u64)];
    let poset = GradedPoset::new(
        elements.iter().map(|s| s.to_string()).collect(),
        covers
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        ranks.iter().map(|(l, r)| (l.to_string(), *r)).collect(),
        bonds
            .iter()
            .map(|((a, b), v)| ((a.to_string(), b.to_string()), *v))
            .collect(),
    )
    .unwrap();
    let index_sets = [
        ("X", vec![1, 2]),
        ("00'", vec![1, 2]),
        ("01", vec![1]),
        ("11'", vec![1, 2]),
        ("0", vec![1]),
        ("1", vec![1]),
    ];
    let degrees = [
        ("X", vec![0u64, 2]),
        ("00'", vec![0, 1]),
        ("01", vec![2, 0]),
        ("11'", vec![0, 1]),
        ("0", vec![1, 0]),
        ("1", vec![1, 0]),
    ];
    let extremal = [
        ("X", "y0*y1"),
        ("00'", "y0"),
        ("01", "x0*x1"),
        ("11'", "y1"),
        ("0", "x0"),
        ("1", "x1"),
    ];
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut half_x_01 = QVector::zero();
    half_x_01.set("X", half.clone());
    half_x_01.set("01", half);
    let explicit_gamma: BTreeMap<Vec<String>, Vec<QVector>> = [
        (
            vec!["X".to_string(), "01".to_string(), "0".to_string()],
            vec![
                QVector::unit("X"),
                QVector::unit("01"),
                QVector::unit("0"),
                half_x_01.clone(),
            ],
        ),
        (
            vec!["X".to_string(), "01".to_string(), "1".to_string()],
            vec![
                QVector::unit("X"),
                QVector::unit("01"),
                QVector::unit("1"),
                half_x_01,
            ],
        ),
    ]
    .into_iter()
    .collect();
    let strat = StratData {
        poset,
        m: 2,
        index_sets: index_sets
            .iter()
            .map(|(l, is)| (l.to_string(), is.iter().copied().collect()))
            .collect(),
        degrees: degrees
            .iter()
            .map(|(l, d)| (l.to_string(), d.clone()))
            .collect(),
        extremal: extremal
            .iter()
            .map(|(l, f)| (l.to_string(), f.to_string()))
            .collect(),
        explicit_gamma,
    };
    let vars = p1xp1_vars();
    let charts: BTreeMap<Vec<String>, ChainChart> = [
        chart(
            &["X", "00'", "0"],
            &["t", "s", "u"],
            &[
                ("x0", &[("u", 1)]),
                ("x1", &[("t", 1), ("u", 1)]),
                ("y0", &[("s", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("s", 1), ("u", 1)]),
            ],
        ),
        chart(
            &["X", "01", "0"],
            &["t", "s", "u"],
            &[
                ("x0", &[("u", 1)]),
                ("x1", &[("s", 1), ("u", 1)]),
                ("y0", &[("t", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("s", 1), ("u", 1)]),
            ],
        ),
        chart(
            &["X", "01", "1"],
            &["t", "s", "u"],
            &[
                ("x0", &[("s", 1), ("u", 1)]),
                ("x1", &[("u", 1)]),
                ("y0", &[("t", 1), ("s", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("u", 1)]),
            ],
        ),
        chart(
            &["X", "11'", "1"],
            &["t", "s", "u"],
            &[
                ("x0", &[("t", 1), ("u", 1)]),
                ("x1", &[("u", 1)]),
                ("y0", &[("t", 1), ("s", 1), ("u", 1)]),
                ("y1", &[("s", 1), ("u", 1)]),
            ],
        ),
    ]
    .into_iter()
    .collect();
    let vanishing = [
        ("00'", vec!["x1", "y1"]),
        ("01", vec!["y0", "y1"]),
        ("11'", vec!["x0", "y0"]),
        ("0", vec!["x1", "y0", "y1"]),
        ("1", vec!["x0", "y0", "y1"]),
    ]
    .iter()
    .map(|(l, v)| (l.to_string(), v.iter().map(|s| s.to_string()).collect()))
    .collect();
    Builtin {
        name: "y0y1".to_string(),
        strat,
        vars: vars.clone(),
        relations: vec![segre_relation(&vars)],
        charts,
        vanishing,
        aliases: BTreeMap::new(),
    }
}

/// The reversed-order A2 flag stratification (k = (2, 1)); its fan of monoids
/// is indexed by anti-tableaux. Hardcoded as the single supported instance of
/// the reversed convention.
fn build_anti_a2() -> Builtin {
    let uw = build_underline_w_with(3, &[2, 1], geq_anti, false).unwrap();
    let strat = strat_from_uw(&uw).unwrap();
    // Schubert display names X(i)_w for each element
    let mut aliases = BTreeMap::new();
    for (label, _) in uw.elements() {
        let w = uw.stratum_coset(label).unwrap();
        let full = w.min_lift(&crate::weyl::full_cuts(3)).unwrap();
        let word: String = full.word().iter().map(|x| x.to_string()).collect();
        let (_, i) = uw.element(label).unwrap();
        aliases.insert(format!("X({i})_{word}"), label.clone());
    }
    Builtin {
        name: "antiA2".to_string(),
        strat,
        vars: VarTable::new(vec![]),
        relations: vec![],
        charts: BTreeMap::new(),
        vanishing: BTreeMap::new(),
        aliases,
    }
}

impl Builtin {
    /// Resolves a stratum given either its label or a display alias.
    pub fn resolve_stratum(&self, name: &str) -> Result<String> {
        if self.strat.poset.contains(name) {
            return Ok(name.to_string());
        }
        if let Some(label) = self.aliases.get(name) {
            return Ok(label.clone());
        }
        Err(Error::domain(format!("unknown stratum '{name}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat::{classify, validate_strat};
    use crate::valuation::validate_chart;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let b = builtin_example(name).unwrap();
            let diags = validate_strat(&b.strat);
            assert!(diags.is_empty(), "{name}: {diags:?}");
        }
        assert!(builtin_example("nope").is_err());
    }

    #[test]
    fn y0y1_has_four_chains_and_bond_two() {
        let b = builtin_example("y0y1").unwrap();
        let chains = b.strat.poset.maximal_chains();
        assert_eq!(chains.len(), 4);
        assert_eq!(b.strat.poset.bond("X", "01"), Some(2));
        assert_eq!(b.strat.poset.bond("X", "00'"), Some(1));
        let c = classify(&b.strat);
        assert!(!c.is_hodge && !c.is_ls_candidate);
    }

    #[test]
    fn y1_is_hodge_not_ls() {
        let b = builtin_example("y1").unwrap();
        let c = classify(&b.strat);
        assert!(c.is_hodge);
        assert!(!c.is_ls_candidate);
    }

    #[test]
    fn bond_change_breaks_validation() {
        let b = builtin_example("y1").unwrap();
        let mut text = b.strat.to_json();
        // switch a bond from 1 to 2 without touching the degree data
        text = text.replace(
            "\"top\": \"X\",\n      \"bottom\": \"01\",\n      \"bond\": 1",
            "\"top\": \"X\",\n      \"bottom\": \"01\",\n      \"bond\": 2",
        );
        let s = StratData::from_json(&text).unwrap();
        let diags = validate_strat(&s);
        assert!(
            diags.iter().any(|d| d.contains("bond/degree mismatch")),
            "{diags:?}"
        );
    }

    #[test]
    fn charts_validate() {
        for name in ["y1", "y0y1"] {
            let b = builtin_example(name).unwrap();
            for chain in b.strat.poset.maximal_chains() {
                let chart = b.charts.get(&chain.labels).unwrap();
                let diags =
                    validate_chart(chart, &b.strat, &b.vars, &b.relations, Some(&b.vanishing));
                assert!(diags.is_empty(), "{name} {}: {diags:?}", chain.display());
            }
        }
    }

    #[test]
    fn broken_chart_is_diagnosed() {
        let b = builtin_example("y0y1").unwrap();
        let (_, mut bad) = chart(
            &["X", "01", "0"],
            &["t", "s", "u"],
            &[
                ("x0", &[("u", 1)]),
                ("x1", &[("s", 1), ("u", 1)]),
                ("y0", &[("t", 1), ("u", 1)]),
                ("y1", &[("t", 1), ("s", 1), ("u", 2)]), // breaks the relation
            ],
        );
        bad.chain = Chain::new(vec!["X".into(), "01".into(), "0".into()]);
        let diags = validate_chart(&bad, &b.strat, &b.vars, &b.relations, Some(&b.vanishing));
        assert!(diags.iter().any(|d| d.contains("not annihilated")));
    }

    #[test]
    fn anti_a2_poset_shape() {
        let b = builtin_example("antiA2").unwrap();
        let p = &b.strat.poset;
        assert_eq!(p.len(), 6);
        let mut covers = p.cover_triples();
        covers.sort();
        let expect = vec![
            ("(12,1)", "(2,2)"),
            ("(13,1)", "(12,1)"),
            ("(13,1)", "(3,2)"),
            ("(2,2)", "(1,2)"),
            ("(23,1)", "(13,1)"),
            ("(3,2)", "(2,2)"),
        ];
        let got: Vec<(String, String)> = covers.into_iter().map(|(a, b, _)| (a, b)).collect();
        assert_eq!(
            got,
            expect
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect::<Vec<_>>()
        );
        // Schubert aliases from the strata diagram
        assert_eq!(b.resolve_stratum("X(1)_312").unwrap(), "(13,1)");
        assert_eq!(b.resolve_stratum("X(1)_321").unwrap(), "(23,1)");
        assert_eq!(b.resolve_stratum("X(2)_213").unwrap(), "(2,2)");
    }
}

