//! Symmetric 2-cocycles on finite abelian groups: the carry cocycle, Baer
//! sums, push-outs and pull-backs, coboundary tests, materialized
//! extensions and the composition law for vertical sequences.

mod cocycle;
pub mod exact;
mod factor_sets;
mod group;
pub mod snf;
pub mod vertical;

pub use cocycle::{carry, carry_cocycle, carry_cocycle_mod, Cocycle2, CocycleDefect, Extension, Integers, ValueGroup};
pub use exact::ShortExactSequence;
pub use factor_sets::{additive_factor_set, classical_factor_set, multiplicative_factor_set, UnitsOfK};
pub use group::{Elem, FinAbGroup, Hom, MAX_ENUMERATED};
pub use vertical::{verify_psi_relation, PsiInstance, PsiReport};
