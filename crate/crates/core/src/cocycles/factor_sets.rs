//! Factor sets on `(Z/n)^r` attached to one character `chi` of the torus:
//! the additive one `sum_i gamma(a_i, b_i) mu(e_i, chi)`, its multiplicative
//! twin `pi^{-sum ...}`, and the classical one built from units.

use serde::{Serialize, Serializer};

use super::cocycle::{Cocycle2, ValueGroup};
use super::group::FinAbGroup;
use crate::error::{domain, Result};
use crate::local_field::PiMonomial;

use super::cocycle::Integers;

/// `K*` under multiplication, written additively for [`Cocycle2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnitsOfK;

impl ValueGroup for UnitsOfK {
    type Elem = PiMonomial;

    fn zero(&self) -> PiMonomial {
        PiMonomial::one()
    }

    fn add(&self, a: &PiMonomial, b: &PiMonomial) -> PiMonomial {
        a.mul(b)
    }

    fn neg(&self, a: &PiMonomial) -> PiMonomial {
        a.inv()
    }
}

impl Serialize for UnitsOfK {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("K*")
    }
}

fn carry_count(n: u64, a: &[i64], b: &[i64], weights: &[i64]) -> i64 {
    a.iter()
        .zip(b)
        .zip(weights)
        .filter(|((&x, &y), _)| x + y >= n as i64)
        .map(|(_, &w)| w)
        .sum()
}

/// `c(a, b) = sum_i gamma_n(a_i, b_i) mu_i` on `(Z/n)^r`.
pub fn additive_factor_set(mu_row: &[i64], n: u64) -> Result<Cocycle2<Integers>> {
    let base = FinAbGroup::power(n, mu_row.len())?;
    Cocycle2::from_fn(base, Integers, |a, b| carry_count(n, a, b, mu_row))
}

/// `c(a, b) = pi^{-sum_i gamma_n(a_i, b_i) mu_i}`.
pub fn multiplicative_factor_set(mu_row: &[i64], n: u64) -> Result<Cocycle2<UnitsOfK>> {
    let base = FinAbGroup::power(n, mu_row.len())?;
    Cocycle2::from_fn(base, UnitsOfK, |a, b| PiMonomial::pi(-carry_count(n, a, b, mu_row)))
}

/// `c(a, b) = prod_i u_i^{-gamma_n(a_i, b_i)}` for units `u_i`.
pub fn classical_factor_set(units: &[PiMonomial], n: u64) -> Result<Cocycle2<UnitsOfK>> {
    if let Some(bad) = units.iter().find(|u| !u.is_unit()) {
        return domain(format!("{bad} is not a unit"));
    }
    let base = FinAbGroup::power(n, units.len())?;
    Cocycle2::from_fn(base, UnitsOfK, |a, b| {
        units
            .iter()
            .enumerate()
            .filter(|&(i, _)| a[i] + b[i] >= n as i64)
            .fold(PiMonomial::one(), |acc, (_, u)| acc.mul(&u.inv()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::rational::int;

    #[test]
    fn additive_single_generator() {
        let c = additive_factor_set(&[13], 5).unwrap();
        assert_eq!(*c.value(&[2], &[3]), 13);
        assert_eq!(*c.value(&[1], &[3]), 0);
        assert!(c.is_cocycle());
    }

    #[test]
    fn zero_row_gives_zero_cocycle() {
        let c = additive_factor_set(&[0, 0], 4).unwrap();
        assert!(c.table().iter().all(|&v| v == 0));
    }

    #[test]
    fn classical_with_trivial_unit_is_constant() {
        let c = classical_factor_set(&[PiMonomial::one()], 5).unwrap();
        assert!(c.table().iter().all(PiMonomial::is_one));
    }

    #[test]
    fn classical_is_multiplicative_cocycle() {
        let u = [PiMonomial::unit(int(6)).unwrap(), PiMonomial::unit(int(-2)).unwrap()];
        let c = classical_factor_set(&u, 3).unwrap();
        assert!(c.is_cocycle());
        assert_eq!(c.value(&[2, 0], &[2, 1]), &u[0].inv());
    }

    #[test]
    fn classical_rejects_non_units() {
        assert!(classical_factor_set(&[PiMonomial::pi(1)], 3).is_err());
    }

    #[test]
    fn multiplicative_valuation_is_minus_additive() {
        let row = [3, -2, 5];
        let add = additive_factor_set(&row, 3).unwrap();
        let mult = multiplicative_factor_set(&row, 3).unwrap();
        assert!(mult.is_cocycle());
        for (x, y) in add.table().iter().zip(mult.table()) {
            assert_eq!(y.valuation(), -x);
        }
    }
}
