//! Truncated Dieudonné data over `Z/p^m` with residue field `F_p`, so every
//! Frobenius twist is trivial and `W(k) = Z_p`.
//!
//! Basis order: toric block `chi_i (x) delta` (size d), then étale block
//! `e_j^vee (x) zeta` (size r).

mod padic;
mod series;

pub use padic::{padic_log, second_kind_integral, IntegralSecondKind};
pub use series::{artin_hasse_exp, artin_hasse_log, max_denominator_p_power, minus_log_one_plus, TruncatedSeries, MAX_DEGREE};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cocycles::carry;
use crate::error::{domain, Error, Result};
use crate::motive::MonodromyMatrix;

/// Square matrix over `Z/modulus`, entries in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModMatrix {
    pub modulus: u64,
    pub rows: Vec<Vec<u64>>,
}

impl ModMatrix {
    pub fn zero(modulus: u64, size: usize) -> Self {
        ModMatrix { modulus, rows: vec![vec![0; size]; size] }
    }

    pub fn scalar(modulus: u64, size: usize, c: u64) -> Self {
        let mut out = ModMatrix::zero(modulus, size);
        for i in 0..size {
            out.rows[i][i] = c % modulus;
        }
        out
    }

    pub fn diag(modulus: u64, entries: &[u64]) -> Self {
        let mut out = ModMatrix::zero(modulus, entries.len());
        for (i, &c) in entries.iter().enumerate() {
            out.rows[i][i] = c % modulus;
        }
        out
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.size();
        let q = self.modulus as u128;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ((0..n).map(|k| self.rows[i][k] as u128 * other.rows[k][j] as u128 % q).sum::<u128>() % q) as u64)
                    .collect()
            })
            .collect();
        ModMatrix { modulus: self.modulus, rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DieudonneData {
    pub p: u64,
    pub m: u32,
    pub d: usize,
    pub r: usize,
    #[serde(rename = "F")]
    pub f: ModMatrix,
    #[serde(rename = "V")]
    pub v: ModMatrix,
    #[serde(rename = "N")]
    pub nop: ModMatrix,
}

/// `p^m`, refusing moduli whose products would overflow.
pub fn modulus(p: u64, m: u32) -> Result<u64> {
    p.checked_pow(m)
        .filter(|&q| q < 1 << 62)
        .ok_or_else(|| Error::Limit(format!("{p}^{m} is too large a modulus")))
}

pub fn build_dieudonne(mu: &MonodromyMatrix, p: u64, m: u32) -> Result<DieudonneData> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return domain(format!("{p} is not prime"));
    }
    if m == 0 {
        return domain("truncation level m must be >= 1");
    }
    let q = modulus(p, m)?;
    let (d, r) = (mu.d(), mu.r());
    let f = ModMatrix::diag(q, &[vec![p; d], vec![1; r]].concat());
    let v = ModMatrix::diag(q, &[vec![1; d], vec![p; r]].concat());
    // nu^vee: chi_i (x) delta -> sum_j mu[i][j] e_j^vee (x) zeta
    let mut nop = ModMatrix::zero(q, d + r);
    for i in 0..d {
        for j in 0..r {
            nop.rows[d + j][i] = i128::from(mu.get(i, j)).rem_euclid(q as i128) as u64;
        }
    }
    Ok(DieudonneData { p, m, d, r, f, v, nop })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DieudonneVerdicts {
    pub fv_is_p: bool,
    pub vf_is_p: bool,
    pub n_squared_zero: bool,
    pub fnv_is_n: bool,
    /// `N` kills the étale block and lands in it.
    pub block_shape: bool,
}

impl DieudonneVerdicts {
    pub fn all(&self) -> bool {
        self.fv_is_p && self.vf_is_p && self.n_squared_zero && self.fnv_is_n && self.block_shape
    }
}

impl DieudonneData {
    pub fn verdicts(&self) -> DieudonneVerdicts {
        let size = self.d + self.r;
        let q = self.f.modulus;
        let p_id = ModMatrix::scalar(q, size, self.p);
        let n = &self.nop;
        let block_shape = n.rows.iter().enumerate().all(|(row, vals)| {
            vals.iter().enumerate().all(|(col, &x)| x == 0 || (row >= self.d && col < self.d))
        });
        DieudonneVerdicts {
            fv_is_p: self.f.mul(&self.v) == p_id,
            vf_is_p: self.v.mul(&self.f) == p_id,
            n_squared_zero: n.mul(n).is_zero(),
            fnv_is_n: &self.f.mul(n).mul(&self.v) == n,
            block_shape,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoproductReport {
    pub level: u64,
    /// The global sign with `h(a+b) - h(a) - h(b) = epsilon * gamma(a, b)`,
    /// or `None` if no single sign works.
    pub epsilon: Option<i64>,
    /// First pair breaking the identity for every sign.
    pub counterexample: Option<(u64, u64)>,
}

/// Maximal `p^m` accepted by [`coproduct_identity_check`].
pub const MAX_COPRODUCT_LEVEL: u64 = 10_000;

/// Exhaustive check of the coproduct defect of `h(a) = a~/p^m` against the
/// carry cocycle.
pub fn coproduct_identity_check(p: u64, m: u32) -> Result<CoproductReport> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return domain(format!("{p} is not prime"));
    }
    let n = p
        .checked_pow(m)
        .filter(|&n| n <= MAX_COPRODUCT_LEVEL)
        .ok_or_else(|| Error::Limit(format!("{p}^{m} exceeds {MAX_COPRODUCT_LEVEL}")))?;
    let ni = n as i64;
    let h = |a: i64| Ratio::new(a.rem_euclid(ni), ni);
    let mut candidates = vec![1i64, -1];
    for a in 0..ni {
        for b in 0..ni {
            let defect = h(a + b) - h(a) - h(b);
            let g = carry(n, a, b);
            candidates.retain(|&e| defect == Ratio::from_integer(e * g));
            if candidates.is_empty() {
                return Ok(CoproductReport { level: n, epsilon: None, counterexample: Some((a as u64, b as u64)) });
            }
        }
    }
    // both signs survive only if gamma vanishes identically, i.e. n = 1
    Ok(CoproductReport { level: n, epsilon: candidates.first().copied(), counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::carry_cocycle;

    #[test]
    fn tate_curve_operator() {
        let mu = MonodromyMatrix::new(vec![vec![13]]).unwrap();
        let dd = build_dieudonne(&mu, 5, 2).unwrap();
        assert_eq!(dd.nop.rows, vec![vec![0, 0], vec![13, 0]]);
        assert_eq!(dd.f.rows, vec![vec![5, 0], vec![0, 1]]);
        assert_eq!(dd.v.rows, vec![vec![1, 0], vec![0, 5]]);
        assert!(dd.verdicts().all());
    }

    #[test]
    fn zero_and_negative_monodromy() {
        let dd = build_dieudonne(&MonodromyMatrix::zeros(2, 3), 3, 2).unwrap();
        assert!(dd.nop.is_zero());
        assert!(dd.verdicts().all());
        let mu = MonodromyMatrix::new(vec![vec![-1, 4], vec![0, -9]]).unwrap();
        let dd = build_dieudonne(&mu, 2, 3).unwrap();
        // rows d + j, columns i: the transpose
        assert_eq!(dd.nop.rows[2], vec![7, 0, 0, 0]);
        assert_eq!(dd.nop.rows[3], vec![4, 7, 0, 0]);
        assert!(dd.verdicts().all());
    }

    #[test]
    fn non_prime_rejected() {
        let mu = MonodromyMatrix::new(vec![vec![1]]).unwrap();
        assert!(build_dieudonne(&mu, 4, 1).is_err());
        assert!(build_dieudonne(&mu, 5, 0).is_err());
    }

    #[test]
    fn broken_operator_is_caught() {
        let mu = MonodromyMatrix::new(vec![vec![1]]).unwrap();
        let mut dd = build_dieudonne(&mu, 5, 2).unwrap();
        dd.nop.rows[0][1] = 1;
        let v = dd.verdicts();
        assert!(!v.block_shape && !v.n_squared_zero && !v.fnv_is_n);
    }

    #[test]
    fn coproduct_sign() {
        for (p, m) in [(5, 1), (2, 3), (3, 2)] {
            let rep = coproduct_identity_check(p, m).unwrap();
            assert_eq!(rep.epsilon, Some(-1), "p={p} m={m}");
        }
        assert!(coproduct_identity_check(6, 1).is_err());
    }

    #[test]
    fn carry_helper_matches_cocycle_table() {
        for n in 1..12u64 {
            let c = carry_cocycle(n).unwrap();
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    assert_eq!(*c.value(&[a], &[b]), carry(n, a, b));
                }
            }
        }
    }
}
