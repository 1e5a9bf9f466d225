//! The algebra `B[T_1..T_d] / (T_i^n - b_i)` of the finite logarithmic model
//! of the n-torsion, with `B = R^{(Z/n)^r}`.
//!
//! Each `b_i` is a dense table over the points of `(Z/n)^r`, assembled per
//! point `a` (representatives in `[0, n)`) as `b_i = b1_i * b+_i * b-_i`:
//!
//! * `b1_i(a) = prod_j u1[i][j]^{a_j}`
//! * `b+_i(a) = pi^{sum_j a_j mu+[i][j]}`
//! * `b-_i(a) = prod_{a_j != 0} pi^{(n - a_j)(-mu-[i][j])}`

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cocycles::{Elem, FinAbGroup, MAX_ENUMERATED};
use crate::error::{domain, Error, Result};
use crate::local_field::PiMonomial;
use crate::motive::{compute_monodromy, raynaud_decompose, split_pm, Motive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelAlgebra {
    n: u64,
    r: usize,
    d: usize,
    points: Vec<Elem>,
    /// `b[i][k]` is `b_i` at `points[k]`.
    b: Vec<Vec<PiMonomial>>,
    b1: Vec<Vec<PiMonomial>>,
    plus: Vec<Vec<PiMonomial>>,
    minus: Vec<Vec<PiMonomial>>,
}

pub fn point_key(a: &[i64]) -> String {
    a.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Points of `(Z/n)^r` in enumeration order, refusing more than `limit`.
pub fn points(n: u64, r: usize, limit: u64) -> Result<Vec<Elem>> {
    let count = u32::try_from(r).ok().and_then(|r| n.checked_pow(r));
    match count {
        Some(c) if c <= limit.min(MAX_ENUMERATED) => FinAbGroup::power(n, r)?.elements(),
        _ => Err(Error::Limit(format!("n^r = {n}^{r} points exceed the limit {}", limit.min(MAX_ENUMERATED)))),
    }
}

pub fn build_model_algebra(m: &Motive, n: u64) -> Result<ModelAlgebra> {
    build_model_algebra_limited(m, n, MAX_ENUMERATED)
}

/// As [`build_model_algebra`] with a caller-chosen cap on `n^r`.
pub fn build_model_algebra_limited(m: &Motive, n: u64, limit: u64) -> Result<ModelAlgebra> {
    if n == 0 {
        return domain("level n must be positive");
    }
    let (r, d) = (m.r(), m.d());
    let points = points(n, r, limit)?;
    let u1 = raynaud_decompose(m).u1;
    let (mu_plus, mu_minus) = split_pm(&compute_monodromy(m));
    let n_i = n as i64;

    let mut out = ModelAlgebra { n, r, d, points, b: vec![], b1: vec![], plus: vec![], minus: vec![] };
    for i in 0..d {
        // powers[j][k] = u1[i][j]^k for k < n
        let powers: Vec<Vec<PiMonomial>> = (0..r)
            .map(|j| {
                let x = u1.entry(i, j);
                std::iter::successors(Some(PiMonomial::one()), |acc| Some(acc.mul(x))).take(n as usize).collect()
            })
            .collect();
        let (mut b, mut b1, mut plus, mut minus) = (vec![], vec![], vec![], vec![]);
        for a in &out.points {
            let mut unit = PiMonomial::one();
            let (mut e_plus, mut e_minus) = (0i64, 0i64);
            for (j, &aj) in a.iter().enumerate() {
                unit = unit.mul(&powers[j][aj as usize]);
                e_plus += aj * mu_plus.get(i, j);
                if aj != 0 {
                    e_minus += (n_i - aj) * -mu_minus.get(i, j);
                }
            }
            let (p, q) = (PiMonomial::pi(e_plus), PiMonomial::pi(e_minus));
            b.push(unit.mul(&p).mul(&q));
            b1.push(unit);
            plus.push(p);
            minus.push(q);
        }
        out.b.push(b);
        out.b1.push(b1);
        out.plus.push(plus);
        out.minus.push(minus);
    }
    Ok(out)
}

impl ModelAlgebra {
    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// `b_i` as a table in point order.
    pub fn table(&self, i: usize) -> &[PiMonomial] {
        &self.b[i]
    }

    pub fn value(&self, i: usize, a: &[i64]) -> &PiMonomial {
        &self.b[i][self.index(a)]
    }

    /// The three factors `(b1_i(a), b+_i(a), b-_i(a))`.
    pub fn factors(&self, i: usize, a: &[i64]) -> (&PiMonomial, &PiMonomial, &PiMonomial) {
        let k = self.index(a);
        (&self.b1[i][k], &self.plus[i][k], &self.minus[i][k])
    }

    fn index(&self, a: &[i64]) -> usize {
        a.iter().fold(0usize, |acc, &x| acc * self.n as usize + x.rem_euclid(self.n as i64) as usize)
    }
}

fn table_map<S: Serializer>(s: S, points: &[Elem], row: &[PiMonomial]) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(points.len()))?;
    for (a, v) in points.iter().zip(row) {
        map.serialize_entry(&point_key(a), v)?;
    }
    map.end()
}

struct Tables<'a>(&'a [Elem], &'a [Vec<PiMonomial>]);

impl Serialize for Tables<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [Elem], &'a [PiMonomial]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                table_map(s, self.0, self.1)
            }
        }
        s.collect_seq(self.1.iter().map(|row| Row(self.0, row)))
    }
}

impl Serialize for ModelAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factors<'a> {
            unit: Tables<'a>,
            plus: Tables<'a>,
            minus: Tables<'a>,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            n: u64,
            r: usize,
            d: usize,
            b: Tables<'a>,
            factors: Factors<'a>,
        }
        let p = &self.points;
        Repr {
            n: self.n,
            r: self.r,
            d: self.d,
            b: Tables(p, &self.b),
            factors: Factors { unit: Tables(p, &self.b1), plus: Tables(p, &self.plus), minus: Tables(p, &self.minus) },
        }
        .serialize(s)
    }
}

/// First point where the generic fibre disagrees with `nM_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreFailure {
    pub i: usize,
    pub point: String,
    pub ratio: PiMonomial,
}

/// `b_i(a) / prod_j U[i][j]^{a_j}` must be an n-th power in `K*` for every
/// `i` and `a`.
pub fn generic_fibre_failure(alg: &ModelAlgebra, m: &Motive) -> Result<Option<FibreFailure>> {
    if (alg.r, alg.d) != (m.r(), m.d()) {
        return Err(Error::Shape(format!("algebra is {}x{}, motive is {}x{}", alg.d, alg.r, m.d(), m.r())));
    }
    for i in 0..alg.d {
        for (k, a) in alg.points.iter().enumerate() {
            let expected = a.iter().enumerate().fold(PiMonomial::one(), |acc, (j, &aj)| acc.mul(&m.entry(i, j).pow(aj)));
            let ratio = alg.b[i][k].mul(&expected.inv());
            if !ratio.is_nth_power(alg.n)? {
                return Ok(Some(FibreFailure { i, point: point_key(a), ratio }));
            }
        }
    }
    Ok(None)
}

pub fn generic_fibre_check(alg: &ModelAlgebra, m: &Motive) -> Result<bool> {
    Ok(generic_fibre_failure(alg, m)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub min_valuation: i64,
    pub integral: bool,
    /// `(i, point)` where `b_i` is not a unit: the log-structure locus.
    pub non_units: Vec<(usize, String)>,
}

pub fn integrality_report(alg: &ModelAlgebra) -> IntegralityReport {
    let mut min_valuation = i64::MAX;
    let mut non_units = Vec::new();
    for (i, row) in alg.b.iter().enumerate() {
        for (a, v) in alg.points.iter().zip(row) {
            min_valuation = min_valuation.min(v.valuation());
            if !v.is_unit() {
                non_units.push((i, point_key(a)));
            }
        }
    }
    IntegralityReport { min_valuation, integral: min_valuation >= 0, non_units }
}
