use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::local_field::rational::format_rational;

pub const MAX_DEGREE: usize = 200;

/// Power series with exact rational coefficients, truncated after `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    degree: usize,
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Missing coefficients are zero; extra ones are dropped.
    pub fn new(degree: usize, mut coeffs: Vec<BigRational>) -> Self {
        coeffs.resize(degree + 1, BigRational::zero());
        TruncatedSeries { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        TruncatedSeries::new(degree, Vec::new())
    }

    pub fn one(degree: usize) -> Self {
        TruncatedSeries::new(degree, vec![BigRational::one()])
    }

    /// `Y` itself.
    pub fn var(degree: usize) -> Self {
        TruncatedSeries::new(degree, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn add(&self, other: &Self) -> Self {
        let deg = self.degree.min(other.degree);
        TruncatedSeries { degree: deg, coeffs: (0..=deg).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries { degree: self.degree, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let deg = self.degree.min(other.degree);
        let mut out = vec![BigRational::zero(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(deg + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(deg + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { degree: deg, coeffs: out }
    }

    /// By repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = TruncatedSeries::one(self.degree);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `exp(f)` for `f` without constant term, from `e' = f' e`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs a series without constant term".into()));
        }
        let mut e = vec![BigRational::one()];
        for n in 1..=self.degree {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * BigRational::from_integer(k.into()) * &e[n - k];
                }
            }
            e.push(acc / BigRational::from_integer(n.into()));
        }
        Ok(TruncatedSeries { degree: self.degree, coeffs: e })
    }

    /// Every coefficient has denominator prime to `p`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coeffs.iter().all(|c| c.denom().gcd(&p).is_one())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            degree: usize,
            coefficients: Vec<String>,
        }
        Repr { degree: self.degree, coefficients: self.coeffs.iter().map(format_rational).collect() }.serialize(s)
    }
}

/// `-log(1 + Y) = sum_{k >= 1} (-1)^k Y^k / k`.
pub fn minus_log_one_plus(degree: usize) -> TruncatedSeries {
    let mut c = vec![BigRational::zero()];
    for k in 1..=degree {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        c.push(BigRational::new(BigInt::from(sign), BigInt::from(k)));
    }
    TruncatedSeries::new(degree, c)
}

/// The Artin–Hasse logarithm `l(Y)` of `1 + Y`: the series with
/// `sum_{i >= 0} p^{-i} l^{p^i} = -log(1 + Y)`, equivalently
/// `exp(-l - p^{-1} l^p - p^{-2} l^{p^2} - ...) = 1 + Y`.
///
/// Solved degree by degree. Writing `l = Y g`, the powers `g^{p^i}` are
/// extended one coefficient at a time with the J.C.P. Miller recurrence,
/// which only needs coefficients of `g` already known.
pub fn artin_hasse_log(p: u64, degree: usize) -> Result<TruncatedSeries> {
    if degree > MAX_DEGREE {
        return Err(Error::Limit(format!("degree {degree} exceeds {MAX_DEGREE}")));
    }
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let target = minus_log_one_plus(degree);
    let mut exps: Vec<usize> = Vec::new();
    let mut q = p as usize;
    while q <= degree {
        exps.push(q);
        q = q.saturating_mul(p as usize);
    }
    // powers[i] holds coefficients of g^{exps[i]}
    let mut powers: Vec<Vec<BigRational>> = vec![Vec::new(); exps.len()];
    let mut l = vec![BigRational::zero(); degree + 1];
    let mut g: Vec<BigRational> = Vec::new();

    for k in 1..=degree {
        let mut rest = BigRational::zero();
        let mut p_i = BigRational::one();
        for (idx, &e) in exps.iter().enumerate() {
            p_i *= BigRational::from_integer(p.into());
            if e > k {
                break;
            }
            let h = &mut powers[idx];
            while h.len() <= k - e {
                h.push(miller_next(&g, h, e as u64));
            }
            rest += &h[k - e] / &p_i;
        }
        l[k] = target.coeff(k) - rest;
        g.push(l[k].clone());
    }
    Ok(TruncatedSeries::new(degree, l))
}

/// `exp(-sum_{p^i <= deg} p^{-i} l^{p^i})` with powers taken by plain
/// truncated multiplication; equals `1 + Y` exactly when `l` is the
/// Artin–Hasse logarithm.
pub fn artin_hasse_exp(l: &TruncatedSeries, p: u64) -> Result<TruncatedSeries> {
    let deg = l.degree();
    let mut sum = TruncatedSeries::zero(deg);
    let mut e = 1u64;
    let mut scale = BigRational::one();
    while e as usize <= deg {
        sum = sum.add(&l.pow(e).scale(&scale));
        e = e.saturating_mul(p);
        scale /= BigRational::from_integer(p.into());
    }
    sum.neg().exp()
}

/// Next coefficient of `g^e` given its first `h.len()` coefficients.
fn miller_next(g: &[BigRational], h: &[BigRational], e: u64) -> BigRational {
    let t = h.len();
    if t == 0 {
        return num_traits::pow(g[0].clone(), e as usize);
    }
    let e = BigRational::from_integer(e.into());
    let mut acc = BigRational::zero();
    for s in 1..=t {
        if g[s].is_zero() {
            continue;
        }
        let w = (&e + BigRational::one()) * BigRational::from_integer(s.into()) - BigRational::from_integer(t.into());
        acc += w * &g[s] * &h[t - s];
    }
    acc / (BigRational::from_integer(t.into()) * &g[0])
}

/// Denominator valuation helper for reports: the largest `p`-power in any
/// coefficient denominator.
pub fn max_denominator_p_power(series: &TruncatedSeries, p: u64) -> u32 {
    let p = BigInt::from(p);
    series
        .coeffs()
        .iter()
        .map(|c| {
            let mut d = c.denom().abs();
            let mut v = 0;
            while (&d % &p).is_zero() {
                d /= &p;
                v += 1;
            }
            v
        })
        .max()
        .unwrap_or(0)
}
