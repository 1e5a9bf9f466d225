//! The field `K = Q(pi)` with its `pi`-adic valuation.
//!
//! Every computation in the crate that only needs valuations, units and
//! classes modulo `n`-th powers runs here exactly. Residue characteristic
//! phenomena live in [`crate::dieudonne`] over `Z/p^m`.

mod element;
mod monomial;
mod poly;
pub mod rational;

pub use element::KElement;
pub use monomial::{PiMonomial, PowerClass};
pub use poly::Poly;

use crate::error::Result;

/// `ord_pi(num) - ord_pi(den)`; errors on zero.
pub fn valuation(x: &KElement) -> Result<i64> {
    x.valuation()
}

pub fn unit_part(x: &PiMonomial) -> PiMonomial {
    x.unit_part()
}

pub fn nth_power_class(x: &PiMonomial, n: u64) -> Result<PiMonomial> {
    x.nth_power_class(n)
}
