//! Exact linear algebra over the rationals and the integers.
//!
//! Everything here is dense and naive; the matrices in this crate stay tiny
//! (chains of at most a dozen elements, gradings with m <= 4).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Row-reduces a copy of `a` and returns (rank, reduced matrix).
pub fn row_reduce(a: &[Vec<Rat>]) -> (usize, Vec<Vec<Rat>>) {
    let mut m = a.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for x in m[rank].iter_mut() {
            *x *= inv.clone();
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let s = f.clone() * m[rank][k].clone();
                    m[r][k] -= s;
                }
            }
        }
        rank += 1;
    }
    (rank, m)
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    row_reduce(a).0
}

/// Solves A x = b for the unique solution; None if singular or inconsistent.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let (particular, kernel) = solve_general(a, b)?;
    if kernel.is_empty() {
        Some(particular)
    } else {
        None
    }
}

/// Solves A x = b. Returns (particular solution, kernel basis), or None if
/// inconsistent.
pub fn solve_general(a: &[Vec<Rat>], b: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_col: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for x in m[rank].iter_mut() {
            *x *= inv.clone();
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=cols {
                    let s = f.clone() * m[rank][k].clone();
                    m[r][k] -= s;
                }
            }
        }
        pivot_col.push(c);
        rank += 1;
    }
    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let zero = Rat::zero();
    let mut particular = vec![zero.clone(); cols];
    for (r, &c) in pivot_col.iter().enumerate() {
        particular[c] = m[r][cols].clone();
    }
    let mut kernel = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivot_col {
            v[c] = true;
        }
        v
    };
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut vec = vec![zero.clone(); cols];
        vec[free] = Rat::one();
        for (r, &c) in pivot_col.iter().enumerate() {
            vec[c] = -m[r][free].clone();
        }
        kernel.push(vec);
    }
    Some((particular, kernel))
}

/// Basis of {x : A x = 0} with an explicit column count (so empty systems
/// yield the full space).
pub fn nullspace(a: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    if a.is_empty() {
        return (0..ncols)
            .map(|i| {
                (0..ncols)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
    }
    let zero = vec![Rat::zero(); a.len()];
    solve_general(a, &zero).map(|(_, k)| k).unwrap_or_default()
}

/// Inverts a square matrix; None if singular.
pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= inv.clone();
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let s = f.clone() * m[c][k].clone();
                    m[r][k] -= s;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d *= m[c][c].clone();
        let inv = m[c][c].recip();
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = m[r][c].clone() * inv.clone();
                for k in c..n {
                    let s = f.clone() * m[c][k].clone();
                    m[r][k] -= s;
                }
            }
        }
    }
    d
}

/// Row Hermite normal form with transform: returns (H, U) with U * A = H and
/// U unimodular. Zero rows of H come last; pivots are positive and entries
/// above each pivot are reduced into [0, pivot).
pub fn row_hnf_with_transform(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // pick the row with smallest nonzero |entry| in column c at or below r
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h[i][c].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) if h[i][c].abs() < h[b][c].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(p) = best else {
                break;
            };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !h[i][c].is_zero() {
                    let q = div_floor_round(&h[i][c], &h[r][c]);
                    row_sub_mul(&mut h, i, r, &q);
                    row_sub_mul(&mut u, i, r, &q);
                    if !h[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            if !h[i][c].is_zero() {
                let q = num_integer::Integer::div_floor(&h[i][c], &h[r][c]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn div_floor_round(a: &BigInt, b: &BigInt) -> BigInt {
    // rounded quotient keeps remainders small during the Euclid phase
    let (q, rem) = num_integer::Integer::div_rem(a, b);
    if rem.abs() * 2 > b.abs() {
        if (rem.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn row_sub_mul(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for k in 0..m[i].len() {
        let s = q * &m[j][k];
        m[i][k] -= s;
    }
}

/// Nonzero rows of the row HNF of `a`: a canonical basis of the row lattice.
pub fn hnf_basis(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (h, _) = row_hnf_with_transform(a);
    h.into_iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Solves M z = t over the integers, M given by columns? No: M is m x k given
/// as rows (m rows, k columns), z in Z^k. Returns (particular z, kernel basis).
pub fn solve_integer(m: &[Vec<BigInt>], t: &[BigInt]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    assert_eq!(t.len(), nrows);
    // Transpose: rows of A are the columns of M. U * A = H gives M * U^T = H^T.
    let a: Vec<Vec<BigInt>> = (0..ncols).map(|j| (0..nrows).map(|i| m[i][j].clone()).collect()).collect();
    let (h, u) = row_hnf_with_transform(&a);
    // Solve H^T y = t by forward substitution on the staircase rows of H.
    let mut y = vec![BigInt::zero(); ncols];
    let mut residual: Vec<BigInt> = t.to_vec();
    for (j, hrow) in h.iter().enumerate() {
        let Some(p) = hrow.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let (q, rem) = num_integer::Integer::div_rem(&residual[p], &hrow[p]);
        if !rem.is_zero() {
            return None;
        }
        y[j] = q;
        for i in 0..nrows {
            let s = &y[j] * &hrow[i];
            residual[i] -= s;
        }
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // z = U^T y
    let z: Vec<BigInt> = (0..ncols)
        .map(|i| (0..ncols).map(|j| &u[j][i] * &y[j]).sum())
        .collect();
    let kernel: Vec<Vec<BigInt>> = h
        .iter()
        .enumerate()
        .filter(|(_, row)| row.iter().all(|x| x.is_zero()))
        .map(|(j, _)| (0..ncols).map(|i| u[j][i].clone()).collect())
        .collect();
    Some((z, kernel))
}

/// Integer kernel basis of M (rows x cols), vectors in Z^cols with M z = 0.
pub fn integer_kernel(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let t = vec![BigInt::zero(); m.len()];
    solve_integer(m, &t).map(|(_, k)| k).unwrap_or_default()
}
