//! n-torsion extension classes of a toric 1-motive as Kummer data.
//!
//! `Ext((Z/n)^r, mu_n^d)` is identified entrywise with `(K*/(K*)^n)^{d x r}`:
//! the class of `u` is `u` itself modulo n-th powers, and the Baer sum is the
//! entrywise product.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, shape, Result};
use crate::local_field::{PiMonomial, PowerClass};
use crate::motive::{compute_monodromy, level_n_monodromy, raynaud_decompose, tate_motive, LevelMonodromy, Motive};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KummerClass {
    n: u64,
    r: usize,
    d: usize,
    cls: Vec<Vec<PowerClass>>,
}

impl KummerClass {
    pub fn trivial(n: u64, d: usize, r: usize) -> Result<Self> {
        let one = PowerClass::trivial(n)?;
        Ok(KummerClass { n, r, d, cls: vec![vec![one; r]; d] })
    }

    /// Normalizes each monomial to its class.
    pub fn from_monomials(n: u64, entries: &[Vec<PiMonomial>]) -> Result<Self> {
        if n == 0 {
            return domain("level n must be positive");
        }
        let d = entries.len();
        let r = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|row| row.len() != r) {
            return shape("ragged class matrix");
        }
        let cls = entries
            .iter()
            .map(|row| row.iter().map(|x| PowerClass::of(x, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(KummerClass { n, r, d, cls })
    }

    /// The class with entries `[pi^{N[i][j]}]`, i.e. the push-out of
    /// `theta^pi_n` along `N`.
    pub fn pushout_of_theta(nu: &LevelMonodromy) -> Result<Self> {
        let entries: Vec<Vec<PiMonomial>> =
            nu.entries.iter().map(|row| row.iter().map(|&k| PiMonomial::pi(k as i64)).collect()).collect();
        KummerClass::from_monomials(nu.n, &entries)
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &PowerClass {
        &self.cls[i][j]
    }

    /// Canonical representatives.
    pub fn representatives(&self) -> Vec<Vec<PiMonomial>> {
        self.cls.iter().map(|row| row.iter().map(PowerClass::to_monomial).collect()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.cls.iter().flatten().all(PowerClass::is_trivial)
    }

    /// True when every entry is a unit class (no `pi` component).
    pub fn is_unit_class(&self) -> bool {
        self.cls.iter().flatten().all(|c| c.pi_exponent() == 0)
    }

    pub fn inv(&self) -> KummerClass {
        KummerClass {
            cls: self.cls.iter().map(|row| row.iter().map(PowerClass::inv).collect()).collect(),
            ..self.clone()
        }
    }
}

impl Serialize for KummerClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: u64,
            r: usize,
            d: usize,
            cls: Vec<Vec<PiMonomial>>,
        }
        Repr { n: self.n, r: self.r, d: self.d, cls: self.representatives() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KummerClass {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: u64,
            r: usize,
            d: usize,
            cls: Vec<Vec<PiMonomial>>,
        }
        let repr = Repr::deserialize(de)?;
        let out = KummerClass::from_monomials(repr.n, &repr.cls).map_err(serde::de::Error::custom)?;
        if out.r != repr.r || out.d != repr.d {
            return Err(serde::de::Error::custom(format!(
                "declared shape {}x{} does not match a {}x{} class matrix",
                repr.d, repr.r, out.d, out.r
            )));
        }
        Ok(out)
    }
}

/// `(G^cl, N)`: a unit class (an extension over `R`) and the level-n
/// monodromy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KatoPair {
    pub classical: KummerClass,
    #[serde(rename = "N")]
    pub n_op: LevelMonodromy,
}

impl KatoPair {
    /// `classical + N_*(theta)`.
    pub fn reconstruct(&self) -> Result<KummerClass> {
        baer_sum_class(&self.classical, &KummerClass::pushout_of_theta(&self.n_op)?)
    }
}

pub fn eta_class(m: &Motive, n: u64) -> Result<KummerClass> {
    KummerClass::from_monomials(n, m.entries())
}

pub fn baer_sum_class(c1: &KummerClass, c2: &KummerClass) -> Result<KummerClass> {
    if (c1.n, c1.d, c1.r) != (c2.n, c2.d, c2.r) {
        return shape(format!(
            "classes of shape (n={}, {}x{}) and (n={}, {}x{}) cannot be added",
            c1.n, c1.d, c1.r, c2.n, c2.d, c2.r
        ));
    }
    let cls = c1
        .cls
        .iter()
        .zip(&c2.cls)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(KummerClass { cls, ..c1.clone() })
}

/// `theta^pi_n`, the class of `1 -> pi`.
pub fn theta_class(n: u64) -> Result<KummerClass> {
    if n <= 1 {
        return KummerClass::trivial(1, 1, 1);
    }
    eta_class(&tate_motive(num_rational::BigRational::from_integer(1.into()), n, 0, 1)?, n)
}

/// Whether `eta(n, u)` extends over `R`: all monodromy divisible by `n`.
pub fn extends_over_r(m: &Motive, n: u64) -> Result<bool> {
    Ok(level_n_monodromy(&compute_monodromy(m), n)?.is_zero())
}

pub fn kato_pair(m: &Motive, n: u64) -> Result<KatoPair> {
    let dec = raynaud_decompose(m);
    let classical = eta_class(&dec.u1, n)?;
    let n_op = level_n_monodromy(&compute_monodromy(m), n)?;
    Ok(KatoPair { classical, n_op })
}

/// `eta(n, u2) == (nu_n)_*(theta)` at class level.
pub fn push_theorem_check(m: &Motive, n: u64) -> Result<bool> {
    let dec = raynaud_decompose(m);
    let lhs = eta_class(&dec.u2, n)?;
    let rhs = KummerClass::pushout_of_theta(&level_n_monodromy(&compute_monodromy(m), n)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::rational::{int, rat};
    use crate::motive::{plus_minus_motives, MonodromyMatrix};

    fn mono(c: i64, k: i64) -> PiMonomial {
        PiMonomial::new(int(c), k).unwrap()
    }

    fn single(c: i64, k: i64) -> Motive {
        Motive::new(vec![vec![mono(c, k)]]).unwrap()
    }

    #[test]
    fn class_of_tate_and_inverse_tate() {
        for n in 2..9 {
            let c = eta_class(&single(1, 1), n).unwrap();
            assert_eq!(c.representatives(), vec![vec![PiMonomial::pi(1)]]);
            assert_eq!(c, theta_class(n).unwrap());
            let inv = eta_class(&single(1, -1), n).unwrap();
            assert_eq!(inv.representatives(), vec![vec![PiMonomial::pi(n as i64 - 1)]]);
        }
        assert!(theta_class(1).unwrap().is_trivial());
        assert_eq!(theta_class(5).unwrap().representatives(), vec![vec![PiMonomial::pi(1)]]);
    }

    #[test]
    fn class_examples() {
        assert_eq!(eta_class(&single(32, 7), 5).unwrap().representatives(), vec![vec![PiMonomial::pi(2)]]);
        assert!(eta_class(&single(243, 10), 5).unwrap().is_trivial());
        assert!(eta_class(&single(1, 1), 0).is_err());
    }

    #[test]
    fn baer_sum_examples() {
        let a = eta_class(&single(1, 2), 5).unwrap();
        let b = eta_class(&single(1, 4), 5).unwrap();
        assert_eq!(baer_sum_class(&a, &b).unwrap().representatives(), vec![vec![PiMonomial::pi(1)]]);
        let t = KummerClass::trivial(5, 1, 1).unwrap();
        assert_eq!(baer_sum_class(&a, &t).unwrap(), a);
        let u = single(12, -3);
        let sum = baer_sum_class(&eta_class(&u, 6).unwrap(), &eta_class(&u.inv(), 6).unwrap()).unwrap();
        assert!(sum.is_trivial());
        assert!(baer_sum_class(&a, &eta_class(&single(1, 2), 3).unwrap()).is_err());
    }

    #[test]
    fn good_reduction_examples() {
        assert!(extends_over_r(&single(7, 15), 5).unwrap());
        assert!(extends_over_r(&single(7, 0), 5).unwrap());
        for n in 2..9 {
            assert!(!extends_over_r(&single(1, 1), n).unwrap());
        }
    }

    #[test]
    fn kato_pair_examples() {
        let p = kato_pair(&single(3, 7), 5).unwrap();
        assert_eq!(p.classical.representatives(), vec![vec![mono(3, 0)]]);
        assert_eq!(p.n_op.entries, vec![vec![2]]);
        assert!(p.classical.is_unit_class());

        let tate = tate_motive(int(2), 5, 2, 3).unwrap();
        let p = kato_pair(&tate, 5).unwrap();
        assert_eq!(p.classical.representatives(), vec![vec![mono(2, 0)]]);
        assert_eq!(p.n_op.entries, vec![vec![3]]);
        assert_eq!(p.reconstruct().unwrap(), eta_class(&tate, 5).unwrap());

        let good = single(-5, 0);
        let p = kato_pair(&good, 4).unwrap();
        assert!(p.n_op.is_zero());
        assert_eq!(p.classical, eta_class(&good, 4).unwrap());
    }

    #[test]
    fn push_theorem_examples() {
        assert!(push_theorem_check(&single(1, 1), 5).unwrap());
        let u = Motive::from_monodromy(&MonodromyMatrix::new(vec![vec![13]]).unwrap()).unwrap();
        assert!(push_theorem_check(&u, 5).unwrap());
        assert_eq!(eta_class(&u, 5).unwrap().representatives(), vec![vec![PiMonomial::pi(3)]]);
    }

    #[test]
    fn decomposition_consistency() {
        let u = Motive::new(vec![
            vec![PiMonomial::new(rat(3, 4), -2).unwrap(), mono(10, 5)],
            vec![mono(-1, 0), PiMonomial::new(rat(-2, 9), 3).unwrap()],
        ])
        .unwrap();
        let n = 4;
        let (plus, minus) = plus_minus_motives(&u).unwrap();
        let dec = raynaud_decompose(&u);
        let total = [&dec.u1, &plus, &minus]
            .iter()
            .map(|m| eta_class(m, n).unwrap())
            .reduce(|a, b| baer_sum_class(&a, &b).unwrap())
            .unwrap();
        assert_eq!(total, eta_class(&u, n).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let p = kato_pair(&single(12, 7), 5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"N\""));
        let back: KatoPair = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
