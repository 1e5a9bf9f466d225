//! Smith normal form over `Z` with both transforms tracked, and the finite
//! quotient `Z^g / <relations>` it describes.

use super::group::{Elem, FinAbGroup};
use crate::error::{Error, Result};

pub type IMat = Vec<Vec<i128>>;

/// `left * a * right = diag(diag)`, with `right_inv = right^{-1}` and each
/// diagonal entry dividing the next. Diagonal entries are nonnegative.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diag: Vec<i128>,
    pub left: IMat,
    pub right: IMat,
    pub right_inv: IMat,
}

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn smith(a: &[Vec<i128>], cols: usize) -> Smith {
    let rows = a.len();
    let mut m: IMat = a.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut right_inv = identity(cols);
    let steps = rows.min(cols);

    let mut t = 0;
    while t < steps {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        left.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in right.iter_mut() {
            row.swap(t, pj);
        }
        right_inv.swap(t, pj);

        let mut clean = true;
        let p = m[t][t];
        for i in t + 1..rows {
            let q = m[i][t] / p;
            if q != 0 {
                for j in 0..cols {
                    m[i][j] -= q * m[t][j];
                }
                for j in 0..rows {
                    left[i][j] -= q * left[t][j];
                }
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / p;
            if q != 0 {
                for row in m.iter_mut() {
                    row[j] -= q * row[t];
                }
                for row in right.iter_mut() {
                    row[j] -= q * row[t];
                }
                for k in 0..cols {
                    right_inv[t][k] += q * right_inv[j][k];
                }
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the trailing block by the pivot
        let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
        if let Some(i) = offender {
            for j in 0..cols {
                m[t][j] += m[i][j];
            }
            for j in 0..rows {
                left[t][j] += left[i][j];
            }
            continue;
        }
        if p < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                left[t][j] = -left[t][j];
            }
        }
        t += 1;
    }
    let diag = (0..steps).map(|i| m[i][i]).collect();
    Smith { diag, left, right, right_inv }
}

/// The finite group `Z^g / rowspace(relations)` in invariant-factor form,
/// with the coordinate map and generator lifts.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    pub group: FinAbGroup,
    right: IMat,
    right_inv: IMat,
    keep: Vec<usize>,
}

impl FiniteQuotient {
    pub fn new(gens: usize, relations: &[Vec<i128>]) -> Result<Self> {
        let s = smith(relations, gens);
        let mut orders = Vec::new();
        let mut keep = Vec::new();
        for i in 0..gens {
            let d = s.diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                return Err(Error::Domain("relations do not present a finite group".into()));
            }
            if d != 1 {
                orders.push(d as u64);
                keep.push(i);
            }
        }
        Ok(FiniteQuotient { group: FinAbGroup::new(orders)?, right: s.right, right_inv: s.right_inv, keep })
    }

    /// Image of an integer vector in generator coordinates.
    pub fn project(&self, x: &[i128]) -> Elem {
        let coords: Vec<i128> = self
            .keep
            .iter()
            .map(|&k| x.iter().zip(&self.right).map(|(&xi, row)| xi * row[k]).sum())
            .collect();
        self.group.reduce_wide(&coords)
    }

    /// Integer vector mapping to the `k`-th invariant-factor generator.
    pub fn lift_generator(&self, k: usize) -> &[i128] {
        &self.right_inv[self.keep[k]]
    }
}
