use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::element::KElement;
use super::poly::Poly;
use super::rational::{format_rational, parse_rational};
use crate::error::{domain, Error, Result};

/// `c * pi^k` with `c` a nonzero rational: the elements of `K*` that motive
/// entries, Kummer representatives and model-algebra values are built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiMonomial {
    coeff: BigRational,
    k: i64,
}

impl PiMonomial {
    pub fn new(coeff: BigRational, k: i64) -> Result<Self> {
        if coeff.is_zero() {
            return domain("PiMonomial coefficient must be nonzero");
        }
        Ok(PiMonomial { coeff, k })
    }

    pub fn one() -> Self {
        PiMonomial { coeff: BigRational::one(), k: 0 }
    }

    /// The pure power `pi^k`.
    pub fn pi(k: i64) -> Self {
        PiMonomial { coeff: BigRational::one(), k }
    }

    pub fn unit(coeff: BigRational) -> Result<Self> {
        PiMonomial::new(coeff, 0)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exponent(&self) -> i64 {
        self.k
    }

    pub fn valuation(&self) -> i64 {
        self.k
    }

    pub fn is_unit(&self) -> bool {
        self.k == 0
    }

    pub fn is_integral(&self) -> bool {
        self.k >= 0
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.coeff.is_one()
    }

    /// `c * pi^0`, so that `x = unit_part(x) * pi^valuation(x)`.
    pub fn unit_part(&self) -> PiMonomial {
        PiMonomial { coeff: self.coeff.clone(), k: 0 }
    }

    pub fn mul(&self, other: &PiMonomial) -> PiMonomial {
        PiMonomial { coeff: &self.coeff * &other.coeff, k: self.k + other.k }
    }

    pub fn inv(&self) -> PiMonomial {
        PiMonomial { coeff: self.coeff.recip(), k: -self.k }
    }

    pub fn pow(&self, e: i64) -> PiMonomial {
        let base = if e < 0 { self.coeff.recip() } else { self.coeff.clone() };
        let mut coeff = BigRational::one();
        let mut sq = base;
        let mut m = e.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                coeff *= &sq;
            }
            sq = &sq * &sq;
            m >>= 1;
        }
        PiMonomial { coeff, k: self.k * e }
    }

    pub fn to_kelement(&self) -> KElement {
        let c = KElement::from_rational(self.coeff.clone());
        c.mul(&KElement::pi_pow(self.k))
    }

    /// Recovers the monomial form of a general element, if it has one.
    pub fn from_kelement(x: &KElement) -> Result<Self> {
        let v = x.valuation()?;
        let num = x.numerator();
        let den = x.denominator();
        let single = |p: &Poly| p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if !single(num) || !single(den) {
            return domain("element is not a monomial in pi");
        }
        let c = num.leading().expect("nonzero") / den.leading().expect("nonzero");
        PiMonomial::new(c, v)
    }

    /// Canonical representative of `x (K*)^n`; see [`PowerClass`].
    pub fn nth_power_class(&self, n: u64) -> Result<PiMonomial> {
        Ok(PowerClass::of(self, n)?.to_monomial())
    }

    /// Direct test for membership in `(Q(pi)*)^n` by exact integer roots,
    /// without factoring.
    pub fn is_nth_power(&self, n: u64) -> Result<bool> {
        if n == 0 {
            return domain("n must be positive");
        }
        if self.k.rem_euclid(n as i64) != 0 {
            return Ok(false);
        }
        if self.coeff.is_negative() && n % 2 == 0 {
            return Ok(false);
        }
        let exact_root = |a: &BigInt| -> bool {
            let m = a.abs();
            let Ok(n32) = u32::try_from(n) else {
                return m.is_one();
            };
            let root = m.nth_root(n32);
            num_traits::pow(root, n32 as usize) == m
        };
        Ok(exact_root(self.coeff.numer()) && exact_root(self.coeff.denom()))
    }
}

impl fmt::Display for PiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => write!(f, "{}", self.coeff),
            k => write!(f, "{}*pi^{}", self.coeff, k),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    c: String,
    k: i64,
}

impl Serialize for PiMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialRepr { c: format_rational(&self.coeff), k: self.k }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiMonomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MonomialRepr::deserialize(d)?;
        let c = parse_rational(&repr.c).map_err(D::Error::custom)?;
        PiMonomial::new(c, repr.k).map_err(D::Error::custom)
    }
}

/// The class of a monomial in `K* / (K*)^n`, kept in factored canonical
/// form: `pi`-exponent and every prime exponent reduced into `[0, n)`.
/// The sign survives only for even `n`, since `-1` is an odd power of itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerClass {
    n: u64,
    negative: bool,
    pi_exp: u64,
    primes: BTreeMap<u128, u64>,
}

impl PowerClass {
    pub fn trivial(n: u64) -> Result<Self> {
        if n == 0 {
            return domain("n must be positive");
        }
        Ok(PowerClass { n, negative: false, pi_exp: 0, primes: BTreeMap::new() })
    }

    pub fn of(x: &PiMonomial, n: u64) -> Result<Self> {
        let mut cls = PowerClass::trivial(n)?;
        cls.negative = n % 2 == 0 && x.coeff.is_negative();
        cls.pi_exp = x.k.rem_euclid(n as i64) as u64;
        let n128 = n as u128;
        for (p, e) in factor(x.coeff.numer().magnitude())? {
            cls.bump(p, (e as u128 % n128) as u64);
        }
        for (p, e) in factor(x.coeff.denom().magnitude())? {
            let r = (e as u128 % n128) as u64;
            cls.bump(p, (n - r) % n);
        }
        Ok(cls)
    }

    fn bump(&mut self, p: u128, e: u64) {
        if e == 0 {
            return;
        }
        let slot = self.primes.entry(p).or_insert(0);
        *slot = (*slot + e) % self.n;
        if *slot == 0 {
            self.primes.remove(&p);
        }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn pi_exponent(&self) -> u64 {
        self.pi_exp
    }

    pub fn is_trivial(&self) -> bool {
        !self.negative && self.pi_exp == 0 && self.primes.is_empty()
    }

    /// Baer sum of the corresponding Kummer extensions.
    pub fn mul(&self, other: &PowerClass) -> Result<PowerClass> {
        if self.n != other.n {
            return Err(Error::Shape(format!("levels {} and {} differ", self.n, other.n)));
        }
        let mut out = self.clone();
        out.negative ^= other.negative;
        out.pi_exp = (self.pi_exp + other.pi_exp) % self.n;
        for (&p, &e) in &other.primes {
            out.bump(p, e);
        }
        Ok(out)
    }

    pub fn inv(&self) -> PowerClass {
        let n = self.n;
        PowerClass {
            n,
            negative: self.negative,
            pi_exp: (n - self.pi_exp) % n,
            primes: self.primes.iter().map(|(&p, &e)| (p, (n - e) % n)).collect(),
        }
    }

    /// The canonical lift: an integer coefficient times `pi^pi_exp`.
    pub fn to_monomial(&self) -> PiMonomial {
        let mut c = BigInt::one();
        for (&p, &e) in &self.primes {
            c *= num_traits::pow(BigInt::from(p), e as usize);
        }
        if self.negative {
            c = -c;
        }
        PiMonomial { coeff: BigRational::from_integer(c), k: self.pi_exp as i64 }
    }
}

impl Serialize for PowerClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_monomial().serialize(s)
    }
}

const TRIAL_PRIMES_BELOW: u64 = 1 << 12;

/// Prime factorization of a positive integer. Trial division strips small
/// primes; the cofactor must then fit in 128 bits.
fn factor(m: &BigUint) -> Result<BTreeMap<u128, usize>> {
    let mut out = BTreeMap::new();
    if m.is_zero() {
        return domain("cannot factor zero");
    }
    let mut rest = m.clone();
    if rest.bits() > 128 {
        let mut p = 2u64;
        while p < TRIAL_PRIMES_BELOW && rest.bits() > 128 {
            let bp = BigUint::from(p);
            while (&rest).is_multiple_of(&bp) {
                rest /= &bp;
                *out.entry(p as u128).or_insert(0) += 1;
            }
            p += if p == 2 { 1 } else { 2 };
        }
    }
    let Some(small) = rest.to_u128() else {
        return Err(Error::Limit(format!(
            "coefficient with a {}-bit cofactor is beyond the factorization limit",
            rest.bits()
        )));
    };
    for (p, e) in num_prime::nt_funcs::factorize128(small) {
        *out.entry(p).or_insert(0) += e;
    }
    Ok(out)
}
