use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rational::{format_rational, parse_rational};
use crate::error::{domain, Result};

/// An element of `K = Q(pi)`: a reduced quotient of polynomials in the
/// uniformizer. The denominator is monic and coprime to the numerator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KElement {
    num: Poly,
    den: Poly,
}

impl KElement {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return domain("zero denominator");
        }
        if num.is_zero() {
            return Ok(KElement::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lead = den.leading().expect("nonzero").clone();
        let inv = BigRational::one() / lead;
        Ok(KElement { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn zero() -> Self {
        KElement { num: Poly::zero(), den: Poly::constant(BigRational::one()) }
    }

    pub fn one() -> Self {
        KElement::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        KElement::new(Poly::constant(c), Poly::constant(BigRational::one())).expect("nonzero den")
    }

    /// `pi^k` for any integer `k`.
    pub fn pi_pow(k: i64) -> Self {
        let one = BigRational::one();
        let m = Poly::monomial(one.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            KElement { num: m, den: Poly::constant(one) }
        } else {
            KElement { num: Poly::constant(one), den: m }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `ord_pi(num) - ord_pi(den)`.
    pub fn valuation(&self) -> Result<i64> {
        match (self.num.order(), self.den.order()) {
            (Some(a), Some(b)) => Ok(a as i64 - b as i64),
            _ => domain("valuation of zero"),
        }
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.valuation()? == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().map_or(true, |v| v >= 0)
    }

    pub fn mul(&self, other: &KElement) -> KElement {
        KElement::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero den")
    }

    pub fn add(&self, other: &KElement) -> KElement {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        KElement::new(num, self.den.mul(&other.den)).expect("nonzero den")
    }

    pub fn inv(&self) -> Result<KElement> {
        if self.is_zero() {
            return domain("inverse of zero");
        }
        KElement::new(self.den.clone(), self.num.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct KElementRepr {
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for KElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let conv = |p: &Poly| p.coeffs().iter().map(format_rational).collect::<Vec<_>>();
        KElementRepr { num: conv(&self.num), den: conv(&self.den) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = KElementRepr::deserialize(d)?;
        let conv = |v: &[String]| -> std::result::Result<Poly, D::Error> {
            let cs = v.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(Poly::new(cs))
        };
        let num = conv(&repr.num)?;
        let den = conv(&repr.den)?;
        KElement::new(num, den).map_err(D::Error::custom)
    }
}

impl Default for KElement {
    fn default() -> Self {
        KElement::zero()
    }
}

impl From<BigRational> for KElement {
    fn from(c: BigRational) -> Self {
        if c.is_zero() {
            KElement::zero()
        } else {
            KElement::from_rational(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn valuation_of_monomial() {
        let x = KElement::new(Poly::monomial(q(2, 5), 3), poly(&[1])).unwrap();
        assert_eq!(x.valuation().unwrap(), 3);
    }

    #[test]
    fn valuation_of_one() {
        assert_eq!(KElement::one().valuation().unwrap(), 0);
    }

    #[test]
    fn valuation_after_cancellation() {
        // (pi^2 + pi^3) / pi^5 = (1 + pi) / pi^3
        let x = KElement::new(poly(&[0, 0, 1, 1]), poly(&[0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(x.valuation().unwrap(), -3);
        assert_eq!(x.denominator(), &poly(&[0, 0, 0, 1]));
        assert_eq!(x.numerator(), &poly(&[1, 1]));
    }

    #[test]
    fn zero_has_no_valuation() {
        assert!(matches!(KElement::zero().valuation(), Err(crate::Error::Domain(_))));
        assert!(KElement::new(poly(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn reduced_form_is_canonical() {
        let a = KElement::new(poly(&[2, 2]), poly(&[4, 4, 0])).unwrap();
        let b = KElement::from_rational(q(1, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn valuation_is_additive() {
        let a = KElement::new(poly(&[0, 3, 1]), poly(&[5, 0, 0, 1])).unwrap();
        let b = KElement::new(poly(&[7]), poly(&[0, 0, 2])).unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.valuation().unwrap(), a.valuation().unwrap() + b.valuation().unwrap());
        assert_eq!(KElement::pi_pow(-4).valuation().unwrap(), -4);
    }

    #[test]
    fn sum_can_raise_valuation() {
        let a = KElement::new(poly(&[1, 1]), poly(&[1])).unwrap();
        let b = KElement::new(poly(&[-1]), poly(&[1])).unwrap();
        assert_eq!(a.add(&b).valuation().unwrap(), 1);
    }
}
