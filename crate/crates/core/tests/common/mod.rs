//! Shared test oracles, independent of the implementation paths they check.
#![allow(dead_code)] // each test binary uses a subset

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use stratkit::linalg;
use stratkit::qvec::QVector;
use stratkit::rational::Rat;

/// Weyl dimension formula for sl_n: the number of semistandard tableaux with
/// entries in [1, n] whose shape has counts[i] columns of length k_list[i].
pub fn weyl_dim(n: usize, k_list: &[usize], counts: &[usize]) -> BigInt {
    let mut c = vec![0i64; n];
    for (i, &k) in k_list.iter().enumerate() {
        for r in 0..k {
            c[r] += counts[i] as i64;
        }
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(c[i] - c[j] + (j as i64) - (i as i64));
            den *= BigInt::from((j - i) as i64);
        }
    }
    assert!((&num % &den).is_zero());
    num / den
}

/// Brute-force vertex enumeration of {x >= 0, supp x in labels, deg x = d}:
/// solve every maximal active-constraint subsystem and keep the feasible
/// basic solutions.
pub fn vertices_bruteforce(degrees: &[(String, Vec<u64>)], d: &[u64]) -> Vec<QVector> {
    let m = d.len();
    let dr: Vec<Rat> = d.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
    let n = degrees.len();
    let mut out: Vec<QVector> = Vec::new();
    for mask in 0u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let a: Vec<Vec<Rat>> = (0..m)
            .map(|row| {
                support
                    .iter()
                    .map(|&i| Rat::from_integer(BigInt::from(degrees[i].1[row])))
                    .collect()
            })
            .collect();
        let Some((sol, kernel)) = linalg::solve_general(&a, &dr) else {
            continue;
        };
        if !kernel.is_empty() {
            continue; // not a basic solution
        }
        if sol.iter().any(|x| x.is_negative()) {
            continue;
        }
        let v = QVector::from_entries(
            support
                .iter()
                .map(|&i| degrees[i].0.clone())
                .zip(sol.into_iter()),
        );
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| format!("{v:?}"));
    out
}

/// All maximal chains of a cover relation, by exhaustive path enumeration.
pub fn chains_bruteforce(
    elements: &[String],
    covers: &[(String, String)],
) -> Vec<Vec<String>> {
    let tops: Vec<&String> = elements
        .iter()
        .filter(|l| !covers.iter().any(|(_, q)| q == *l))
        .collect();
    let mut out = Vec::new();
    fn walk(
        at: &str,
        covers: &[(String, String)],
        path: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        path.push(at.to_string());
        let next: Vec<&String> = covers
            .iter()
            .filter(|(p, _)| p == at)
            .map(|(_, q)| q)
            .collect();
        if next.is_empty() {
            out.push(path.clone());
        } else {
            for q in next {
                walk(q, covers, path, out);
            }
        }
        path.pop();
    }
    for t in tops {
        walk(t, covers, &mut Vec::new(), &mut out);
    }
    out.sort();
    out.dedup();
    out
}
