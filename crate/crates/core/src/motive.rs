//! Strict toric 1-motives `u: Z^r -> G_m^d`, their geometric monodromy and
//! Raynaud's decomposition `u = u1 * u2`.
//!
//! Indexing: `entries[i][j] = e_i^*(u(e_j))`, torus character first. The
//! monodromy matrix uses the same layout, `mu[i][j] = mu(e_j, e_i^*)`, so the
//! dual map `nu^vee` is literally the transpose and `nu(e_j)` is column `j`.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, shape, Error, Result};
use crate::local_field::rational::within_cap;
use crate::local_field::PiMonomial;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Motive {
    r: usize,
    d: usize,
    entries: Vec<Vec<PiMonomial>>,
}

impl Motive {
    /// `entries` is `d` rows of `r` monomials.
    pub fn new(entries: Vec<Vec<PiMonomial>>) -> Result<Self> {
        let d = entries.len();
        let r = entries.first().map_or(0, Vec::len);
        if d == 0 || r == 0 {
            return domain("a motive needs r >= 1 and d >= 1");
        }
        if entries.iter().any(|row| row.len() != r) {
            return shape("ragged motive matrix");
        }
        Ok(Motive { r, d, entries })
    }

    pub fn from_fn(d: usize, r: usize, f: impl Fn(usize, usize) -> PiMonomial) -> Result<Self> {
        Motive::new((0..d).map(|i| (0..r).map(|j| f(i, j)).collect()).collect())
    }

    /// The motive `e_j -> (pi^{mu[i][j]})_i`, i.e. the `u2` shape.
    pub fn from_monodromy(mu: &MonodromyMatrix) -> Result<Self> {
        Motive::from_fn(mu.d(), mu.r(), |i, j| PiMonomial::pi(mu.get(i, j)))
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &PiMonomial {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<PiMonomial>] {
        &self.entries
    }

    fn zip_with(&self, other: &Motive, f: impl Fn(&PiMonomial, &PiMonomial) -> PiMonomial) -> Result<Motive> {
        if self.r != other.r || self.d != other.d {
            return shape(format!("motives of shape {}x{} and {}x{}", self.d, self.r, other.d, other.r));
        }
        Motive::from_fn(self.d, self.r, |i, j| f(&self.entries[i][j], &other.entries[i][j]))
    }

    /// Sum of 1-motives, written multiplicatively in `G_m^d`.
    pub fn mul(&self, other: &Motive) -> Result<Motive> {
        self.zip_with(other, PiMonomial::mul)
    }

    pub fn inv(&self) -> Motive {
        self.map(PiMonomial::inv)
    }

    /// Entrywise `e`-th power (the motive `e * u`).
    pub fn pow(&self, e: i64) -> Motive {
        self.map(|x| x.pow(e))
    }

    pub fn map(&self, f: impl Fn(&PiMonomial) -> PiMonomial) -> Motive {
        Motive { r: self.r, d: self.d, entries: self.entries.iter().map(|row| row.iter().map(&f).collect()).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().flatten().all(PiMonomial::is_one)
    }

    pub fn has_good_reduction(&self) -> bool {
        self.entries.iter().flatten().all(PiMonomial::is_unit)
    }

    /// Rejects coefficients whose numerator or denominator exceeds `2^63`.
    pub fn check_input_limits(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !within_cap(x.coeff()) {
                    return Err(Error::Limit(format!("entry ({i},{j}) coefficient {} exceeds 2^63", x.coeff())));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MotiveRepr {
    r: usize,
    d: usize,
    entries: Vec<Vec<PiMonomial>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ramification_index: Option<u32>,
}

impl Serialize for Motive {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MotiveRepr { r: self.r, d: self.d, entries: self.entries.clone(), ramification_index: None }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Motive {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MotiveRepr::deserialize(d)?;
        if let Some(e) = repr.ramification_index {
            if e != 1 {
                return Err(D::Error::custom(format!(
                    "ramification index {e} requested; only unramified (e = 1) motives are supported"
                )));
            }
        }
        let m = Motive::new(repr.entries).map_err(D::Error::custom)?;
        if m.r != repr.r || m.d != repr.d {
            return Err(D::Error::custom(format!(
                "declared shape {}x{} but entries are {}x{}",
                repr.d, repr.r, m.d, m.r
            )));
        }
        Ok(m)
    }
}

/// Integer `d x r` matrix, `mu[i][j] = mu(e_j, e_i^*)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonodromyMatrix {
    mu: Vec<Vec<i64>>,
}

impl MonodromyMatrix {
    pub fn new(mu: Vec<Vec<i64>>) -> Result<Self> {
        let r = mu.first().map_or(0, Vec::len);
        if mu.is_empty() || r == 0 {
            return domain("monodromy matrix must be nonempty");
        }
        if mu.iter().any(|row| row.len() != r) {
            return shape("ragged monodromy matrix");
        }
        Ok(MonodromyMatrix { mu })
    }

    pub fn zeros(d: usize, r: usize) -> Self {
        MonodromyMatrix { mu: vec![vec![0; r]; d] }
    }

    pub fn d(&self) -> usize {
        self.mu.len()
    }

    pub fn r(&self) -> usize {
        self.mu[0].len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.mu[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.mu
    }

    pub fn is_zero(&self) -> bool {
        self.mu.iter().flatten().all(|&x| x == 0)
    }

    /// `nu(e_j) = mu(e_j, -)`: column `j` as a character vector.
    pub fn nu(&self, j: usize) -> Vec<i64> {
        self.mu.iter().map(|row| row[j]).collect()
    }

    /// `nu^vee`, the `r x d` transpose.
    pub fn nu_dual(&self) -> Vec<Vec<i64>> {
        (0..self.r()).map(|j| self.nu(j)).collect()
    }

    pub fn add(&self, other: &MonodromyMatrix) -> Result<MonodromyMatrix> {
        if self.d() != other.d() || self.r() != other.r() {
            return shape("monodromy matrices of different shapes");
        }
        Ok(MonodromyMatrix {
            mu: self.mu.iter().zip(&other.mu).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect(),
        })
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> MonodromyMatrix {
        MonodromyMatrix { mu: self.mu.iter().map(|row| row.iter().map(|&x| f(x)).collect()).collect() }
    }
}

/// Monodromy reduced modulo `n`, entries in `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelMonodromy {
    pub n: u64,
    pub entries: Vec<Vec<u64>>,
}

impl LevelMonodromy {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaynaudDecomposition {
    /// Unit part: good reduction.
    pub u1: Motive,
    /// `e_j -> pi^{mu(e_j, -)}`.
    pub u2: Motive,
}

pub fn compute_monodromy(m: &Motive) -> MonodromyMatrix {
    MonodromyMatrix { mu: m.entries.iter().map(|row| row.iter().map(PiMonomial::valuation).collect()).collect() }
}

pub fn raynaud_decompose(m: &Motive) -> RaynaudDecomposition {
    let u1 = m.map(PiMonomial::unit_part);
    let u2 = m.map(|x| PiMonomial::pi(x.valuation()));
    RaynaudDecomposition { u1, u2 }
}

/// `(mu+, mu-)` with `mu+ = max(mu, 0)`, `mu- = min(mu, 0)`.
pub fn split_pm(mu: &MonodromyMatrix) -> (MonodromyMatrix, MonodromyMatrix) {
    (mu.map(|x| x.max(0)), mu.map(|x| x.min(0)))
}

pub fn level_n_monodromy(mu: &MonodromyMatrix, n: u64) -> Result<LevelMonodromy> {
    if n == 0 {
        return domain("level n must be positive");
    }
    let n_i = i128::from(n);
    let entries = mu
        .mu
        .iter()
        .map(|row| row.iter().map(|&x| i128::from(x).rem_euclid(n_i) as u64).collect())
        .collect();
    Ok(LevelMonodromy { n, entries })
}

/// The motive `plus`/`minus` parts `e_j -> pi^{mu+-(e_j,-)}` of `u2`.
pub fn plus_minus_motives(m: &Motive) -> Result<(Motive, Motive)> {
    let (plus, minus) = split_pm(&compute_monodromy(m));
    Ok((Motive::from_monodromy(&plus)?, Motive::from_monodromy(&minus)?))
}

/// Tate's curve as a 1-motive: `Z -> G_m`, `1 -> c * pi^{n r + s}`.
pub fn tate_motive(c: BigRational, n: u64, r: u64, s: u64) -> Result<Motive> {
    if n == 0 {
        return domain("n must be positive");
    }
    if s >= n {
        return domain(format!("s = {s} must lie in [0, {n})"));
    }
    let k = n
        .checked_mul(r)
        .and_then(|x| x.checked_add(s))
        .and_then(|x| i64::try_from(x).ok())
        .ok_or_else(|| Error::Limit("n r + s overflows".into()))?;
    Motive::new(vec![vec![PiMonomial::new(c, k)?]])
}
