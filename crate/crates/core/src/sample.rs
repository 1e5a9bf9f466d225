//! Seeded random inputs for property checks and verification suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::local_field::PiMonomial;
use crate::motive::{MonodromyMatrix, Motive};

/// Coefficient numerators/denominators are drawn from `1..=COEFF_RANGE`,
/// occasionally replaced by a small prime power so that Kummer classes have
/// nontrivial structure.
pub const COEFF_RANGE: i64 = 60;
pub const EXP_RANGE: i64 = 15;

fn coefficient_part<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    if rng.gen_bool(0.25) {
        let p = [2i64, 3, 5, 7][rng.gen_range(0..4)];
        p.pow(rng.gen_range(0..7))
    } else {
        rng.gen_range(1..=COEFF_RANGE)
    }
}

pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> PiMonomial {
    monomial_with_exponent(rng, 0)
}

pub fn monomial_with_exponent<R: Rng + ?Sized>(rng: &mut R, k: i64) -> PiMonomial {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let c = BigRational::new(BigInt::from(sign * coefficient_part(rng)), BigInt::from(coefficient_part(rng)));
    PiMonomial::new(c, k).expect("nonzero coefficient")
}

pub fn monomial<R: Rng + ?Sized>(rng: &mut R) -> PiMonomial {
    let k = rng.gen_range(-EXP_RANGE..=EXP_RANGE);
    monomial_with_exponent(rng, k)
}

pub fn motive<R: Rng + ?Sized>(rng: &mut R, d: usize, r: usize) -> Motive {
    let entries = (0..d).map(|_| (0..r).map(|_| monomial(rng)).collect()).collect();
    Motive::new(entries).expect("d, r >= 1")
}

/// Shape drawn uniformly from `1..=max_d` by `1..=max_r`.
pub fn motive_upto<R: Rng + ?Sized>(rng: &mut R, max_d: usize, max_r: usize) -> Motive {
    let d = rng.gen_range(1..=max_d);
    let r = rng.gen_range(1..=max_r);
    motive(rng, d, r)
}

/// A motive whose monodromy is a multiple of `n` (good reduction at level n).
pub fn divisible_motive<R: Rng + ?Sized>(rng: &mut R, d: usize, r: usize, n: u64) -> Motive {
    let bound = (EXP_RANGE / n as i64).max(1);
    let mut entry = || {
        let k = rng.gen_range(-bound..=bound) * n as i64;
        monomial_with_exponent(rng, k)
    };
    let entries = (0..d).map(|_| (0..r).map(|_| entry()).collect()).collect();
    Motive::new(entries).expect("d, r >= 1")
}

/// A motive with at least one entry whose valuation is not divisible by `n`
/// (`n >= 2`).
pub fn non_divisible_motive<R: Rng + ?Sized>(rng: &mut R, d: usize, r: usize, n: u64) -> Motive {
    let m = divisible_motive(rng, d, r, n);
    let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..r));
    let shift = rng.gen_range(1..n as i64);
    let mut entries = m.entries().to_vec();
    entries[i][j] = entries[i][j].mul(&PiMonomial::pi(shift));
    Motive::new(entries).expect("same shape")
}

pub fn monodromy<R: Rng + ?Sized>(rng: &mut R, d: usize, r: usize, bound: i64) -> MonodromyMatrix {
    MonodromyMatrix::new((0..d).map(|_| (0..r).map(|_| rng.gen_range(-bound..=bound)).collect()).collect())
        .expect("d, r >= 1")
}

/// A principal unit for `p` below `bound`: `1 mod p`, or `1 mod 4` when `p = 2`.
pub fn principal_unit<R: Rng + ?Sized>(rng: &mut R, p: u64, bound: u64) -> u64 {
    let step = if p == 2 { 4 } else { p };
    1 + step * rng.gen_range(0..=bound / step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motive::compute_monodromy;
    use rand::SeedableRng;

    #[test]
    fn constructed_divisibility() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 2..9 {
            let good = divisible_motive(&mut rng, 2, 3, n);
            assert!(compute_monodromy(&good).rows().iter().flatten().all(|&x| x % n as i64 == 0));
            let bad = non_divisible_motive(&mut rng, 2, 3, n);
            assert!(compute_monodromy(&bad).rows().iter().flatten().any(|&x| x % n as i64 != 0));
        }
    }

    #[test]
    fn principal_units() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..50 {
            assert_eq!(principal_unit(&mut rng, 2, 100) % 4, 1);
            assert_eq!(principal_unit(&mut rng, 5, 100) % 5, 1);
        }
    }
}
