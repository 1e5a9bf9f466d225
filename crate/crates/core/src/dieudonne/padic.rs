use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::modulus;
use crate::cocycles::{carry, Elem, FinAbGroup};
use crate::error::{domain, Error, Result};

fn check_prime(p: u64) -> Result<()> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(())
}

fn vp(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `log(u) = sum_{k >= 1} (-1)^{k+1} (u - 1)^k / k` mod `p^m`, for a principal
/// unit `u` given by any integer lift.
///
/// Requires `u = 1 mod p` (odd `p`) or `u = 1 mod 4` (`p = 2`). Terms are summed while
/// `k v(u - 1) - floor(log_p k) < m`; past that point every term is `0 mod p^m`.
pub fn padic_log(u: u64, p: u64, m: u32) -> Result<u64> {
    check_prime(p)?;
    if m == 0 {
        return domain("precision m must be >= 1");
    }
    let q = modulus(p, m)?;
    let principal = match p {
        2 => u % 4 == 1,
        _ => u % p == 1,
    };
    if !principal {
        return domain(format!("{u} is not a principal unit for p = {p} (log does not converge)"));
    }
    let u = u % q;
    let x = (u + q - 1) % q;
    if x == 0 {
        return Ok(0);
    }
    // v(x) from the lift; x = 0 mod p^m was handled above
    let vx = vp(x, p).min(m);
    let qb = BigInt::from(q);
    let xb = BigInt::from(x);
    let mut acc = BigInt::zero();
    for k in 1u64.. {
        if u64::from(vx) * k >= u64::from(m) + floor_log(k, p) {
            break;
        }
        // x^k / k with k = p^e k': divide x^k by p^e exactly, invert k'
        let e = vp(k, p);
        let pe = BigInt::from(p).pow(e);
        let (quot, rem) = xb.modpow(&BigInt::from(k), &(&qb * &pe)).div_rem(&pe);
        if !rem.is_zero() {
            return Err(Error::Precision(format!("term {k} of the logarithm is not p-integral")));
        }
        let inv = mod_inverse(&(BigInt::from(k) / &pe), &qb).expect("k' is prime to p");
        let term = quot * inv % &qb;
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc.mod_floor(&qb).to_u64().expect("reduced below p^m"))
}

fn floor_log(k: u64, p: u64) -> u64 {
    let (mut t, mut e) = (k, 0);
    while t >= p {
        t /= p;
        e += 1;
    }
    e
}

fn mod_inverse(a: &BigInt, q: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(q);
    g.gcd.is_one().then(|| g.x.mod_floor(q))
}

/// `h(a) = sum_i sigma(a_i) (-log u_i)` on `(Z/p^m)^r` with
/// `sigma(a) = a~/p^m`.
///
/// Precision contract: `h` takes values in `p^{-m} Z_p / p^m Z_p`. It is stored
/// as the numerator `N(a) = sum_i a~_i L_i mod p^{2m}` with the scale `p^{-m}`
/// implicit, where `L_i = -log u_i mod p^{2m}` is computed from the integer
/// lift of `u_i`. The coboundary of `h` is then read off mod `p^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralSecondKind {
    pub p: u64,
    pub m: u32,
    pub level: u64,
    pub r: usize,
    /// `L_i = -log u_i mod p^{2m}`.
    pub minus_logs: Vec<u64>,
    /// `N(a)` in point order, so `h(a) = N(a) / p^m`.
    pub numerators: Vec<u64>,
}

pub fn second_kind_integral(units: &[u64], p: u64, m: u32) -> Result<IntegralSecondKind> {
    check_prime(p)?;
    if m == 0 {
        return domain("precision m must be >= 1");
    }
    let level = modulus(p, m)?;
    let wide = m
        .checked_mul(2)
        .and_then(|m2| p.checked_pow(m2))
        .filter(|&w| w < 1 << 62)
        .ok_or_else(|| Error::Precision(format!("p^(2m) = {p}^{} does not fit the working precision", 2 * m)))?;
    let r = units.len();
    // the enlarged precision still has to see a principal unit
    let minus_logs = units
        .iter()
        .map(|&u| {
            let lg = padic_log(u, p, 2 * m)?;
            Ok((wide - lg) % wide)
        })
        .collect::<Result<Vec<_>>>()?;
    let pts = FinAbGroup::power(level, r)?.elements()?;
    let numerators = pts
        .iter()
        .map(|a| {
            let s: u128 = a.iter().zip(&minus_logs).map(|(&ai, &l)| ai as u128 * l as u128 % wide as u128).sum();
            (s % wide as u128) as u64
        })
        .collect();
    Ok(IntegralSecondKind { p, m, level, r, minus_logs, numerators })
}

impl IntegralSecondKind {
    fn group(&self) -> FinAbGroup {
        FinAbGroup::power(self.level, self.r).expect("level >= 1")
    }

    fn wide(&self) -> u64 {
        self.level * self.level
    }

    pub fn numerator(&self, a: &[i64]) -> u64 {
        let g = self.group();
        self.numerators[g.index(&g.reduce(a))]
    }

    /// `h(a)` as the exact rational `N(a) / p^m`.
    pub fn value(&self, a: &[i64]) -> num_rational::BigRational {
        num_rational::BigRational::new(self.numerator(a).into(), self.level.into())
    }

    /// `sum_i gamma(a_i, b_i) L_i mod p^m`.
    pub fn expected_coboundary(&self, a: &[i64], b: &[i64]) -> u64 {
        let s: u128 = a
            .iter()
            .zip(b)
            .zip(&self.minus_logs)
            .map(|((&x, &y), &l)| carry(self.level, x, y) as u128 * (l % self.level) as u128)
            .sum();
        (s % self.level as u128) as u64
    }

    /// `h(a) + h(b) - h(a+b)` when it is integral, reduced mod `p^m`;
    /// `None` when it is not integral (not of the second kind).
    pub fn coboundary(&self, a: &[i64], b: &[i64]) -> Option<u64> {
        let g = self.group();
        let w = self.wide() as i128;
        let sum = g.add(a, b);
        let defect = (self.numerator(a) as i128 + self.numerator(b) as i128 - self.numerator(&sum) as i128).rem_euclid(w);
        let level = self.level as i128;
        (defect % level == 0).then(|| (defect / level) as u64)
    }

    /// First pair `(a, b)` where the coboundary is not integral or differs
    /// from `sum gamma L`, over all pairs of points.
    pub fn coboundary_failure(&self) -> Result<Option<(Elem, Elem)>> {
        let pts = self.group().elements()?;
        for a in &pts {
            for b in &pts {
                if self.coboundary(a, b) != Some(self.expected_coboundary(a, b)) {
                    return Ok(Some((a.clone(), b.clone())));
                }
            }
        }
        Ok(None)
    }
}
