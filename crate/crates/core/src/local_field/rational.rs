use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Magnitude cap for numerators and denominators read from external input.
pub const COEFF_CAP_BITS: u64 = 63;

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let r = if t.contains('/') {
        BigRational::from_str(t).map_err(|e| format!("bad rational {t:?}: {e}"))?
    } else {
        BigRational::from_integer(BigInt::from_str(t).map_err(|e| format!("bad integer {t:?}: {e}"))?)
    };
    Ok(r)
}

pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Whether numerator and denominator both fit under the input cap.
pub fn within_cap(r: &BigRational) -> bool {
    r.numer().abs().bits() <= COEFF_CAP_BITS && r.denom().bits() <= COEFF_CAP_BITS
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
