//! Seeded verification suites, one per checked identity. Each suite owns its
//! RNG (seeded from the run seed only), so results do not depend on which
//! other suites run or in what order.

use std::collections::HashMap;

use motivic::cocycles::{carry_cocycle, carry_cocycle_mod, vertical};
use motivic::dieudonne::{
    artin_hasse_exp, artin_hasse_log, build_dieudonne, coproduct_identity_check, second_kind_integral, TruncatedSeries,
};
use motivic::extension_classes::{
    baer_sum_class, eta_class, extends_over_r, kato_pair, push_theorem_check, KatoPair, KummerClass,
};
use motivic::local_field::rational::parse_rational;
use motivic::local_field::PiMonomial;
use motivic::log_model::{build_model_algebra, generic_fibre_failure, integrality_report};
use motivic::motive::{compute_monodromy, raynaud_decompose, tate_motive, MonodromyMatrix, Motive};
use motivic::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Smallest failing input found, when any case failed.
    pub counterexample: Option<Value>,
    pub details: Value,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

type SuiteFn = fn(u64) -> motivic::Result<SuiteOutcome>;

/// Suites in a fixed order; `all` runs every one of them.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("tate", tate),
    ("baer", baer),
    ("good-reduction", good_reduction),
    ("push", push),
    ("kato", kato),
    ("model-algebra", model_algebra),
    ("psi", psi),
    ("carry", carry),
    ("dieudonne", dieudonne),
    ("coproduct", coproduct),
    ("artin-hasse", artin_hasse),
    ("second-kind", second_kind),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// `None` for an unknown suite name.
pub fn run_named(name: &str, seed: u64) -> Option<motivic::Result<Vec<SuiteOutcome>>> {
    if name == "all" {
        return Some(SUITES.iter().map(|(_, f)| f(seed)).collect());
    }
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| f(seed).map(|o| vec![o]))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Counts cases and keeps the smallest failure by a caller-supplied size.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    best: Option<(usize, Value)>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: 0, best: None }
    }

    fn record(&mut self, ok: bool, size: usize, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if ok {
            return;
        }
        self.failures += 1;
        if self.best.as_ref().map_or(true, |(s, _)| size < *s) {
            self.best = Some((size, witness()));
        }
    }

    fn finish(self, details: Value) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            counterexample: self.best.map(|(_, v)| v),
            details,
        }
    }
}

fn motive_size(m: &Motive) -> usize {
    m.d() * m.r()
}

fn unit_class(n: u64, c: &PiMonomial) -> motivic::Result<KummerClass> {
    KummerClass::from_monomials(n, &[vec![c.unit_part()]])
}

pub fn tate(_seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut t = Tally::new("tate");
    for eps in ["2", "3/7", "-5"] {
        let c = parse_rational(eps).map_err(motivic::Error::Domain)?;
        let unit = PiMonomial::unit(c.clone())?;
        for n in [2u64, 3, 5, 8] {
            for r in 0u64..=2 {
                for s in 0..n {
                    let u = tate_motive(c.clone(), n, r, s)?;
                    let mu = compute_monodromy(&u);
                    let pair = kato_pair(&u, n)?;
                    let ok = mu.rows() == [vec![(n * r + s) as i64]]
                        && pair.classical == unit_class(n, &unit)?
                        && pair.n_op.entries == [vec![s]]
                        && pair.reconstruct()? == eta_class(&u, n)?;
                    t.record(ok, 0, || json!({"epsilon": eps, "n": n, "r": r, "s": s, "pair": pair}));
                }
            }
        }
    }
    Ok(t.finish(json!({"grid_points": 3 * (2 + 3 + 5 + 8) * 3})))
}

pub fn baer(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("baer");
    for _ in 0..500 {
        let (d, r) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let n = rng.gen_range(1..=8u64);
        let u = sample::motive(&mut rng, d, r);
        let v = sample::motive(&mut rng, d, r);
        let lhs = eta_class(&u.mul(&v)?, n)?;
        let rhs = baer_sum_class(&eta_class(&u, n)?, &eta_class(&v, n)?)?;
        t.record(lhs == rhs, d * r, || json!({"u": u, "v": v, "n": n}));
    }
    Ok(t.finish(json!({"pairs": 500})))
}

pub fn good_reduction(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("good-reduction");
    let (mut divisible, mut non_divisible) = (0, 0);
    for k in 0..500 {
        let (d, r) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let n = rng.gen_range(2..=8u64);
        // a third each: unconstrained, constructed divisible, constructed not
        let (u, expected) = match k % 3 {
            0 => (sample::motive(&mut rng, d, r), None),
            1 => (sample::divisible_motive(&mut rng, d, r, n), Some(true)),
            _ => (sample::non_divisible_motive(&mut rng, d, r, n), Some(false)),
        };
        let ext = extends_over_r(&u, n)?;
        if ext {
            divisible += 1;
        } else {
            non_divisible += 1;
        }
        let pair = kato_pair(&u, n)?;
        let u2_trivial = eta_class(&raynaud_decompose(&u).u2, n)?.is_trivial();
        let ok = ext == pair.n_op.is_zero() && ext == u2_trivial && expected.map_or(true, |e| e == ext);
        t.record(ok, motive_size(&u), || json!({"motive": u, "n": n, "extends": ext}));
    }
    Ok(t.finish(json!({"extends": divisible, "does_not_extend": non_divisible})))
}

pub fn push(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("push");
    for _ in 0..500 {
        let u = sample::motive_upto(&mut rng, 3, 3);
        let n = rng.gen_range(1..=8u64);
        let ok = push_theorem_check(&u, n)?;
        t.record(ok, motive_size(&u), || json!({"motive": u, "n": n}));
    }
    Ok(t.finish(json!({"motives": 500})))
}

pub fn kato(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("kato");
    for _ in 0..500 {
        let u = sample::motive_upto(&mut rng, 3, 3);
        let n = rng.gen_range(1..=8u64);
        let pair = kato_pair(&u, n)?;
        let ok = pair.classical.is_unit_class() && pair.reconstruct()? == eta_class(&u, n)?;
        t.record(ok, motive_size(&u), || json!({"motive": u, "n": n}));
    }

    // injectivity of (classical, N) -> class on r = d = 1, primes in {2, 3}
    let mut injective = json!({});
    for n in [2u64, 3] {
        let mut seen: HashMap<KummerClass, KatoPair> = HashMap::new();
        let mut pairs = 0;
        for sign in [1i64, -1] {
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    for s in 0..n as i64 {
                        let c = parse_rational(&(sign * 2i64.pow(a) * 3i64.pow(b)).to_string())
                            .map_err(motivic::Error::Domain)?;
                        let u = Motive::new(vec![vec![PiMonomial::new(c, s)?]])?;
                        let pair = kato_pair(&u, n)?;
                        let class = pair.reconstruct()?;
                        let consistent = pair.n_op.entries == [vec![s as u64]] && class == eta_class(&u, n)?;
                        let clash = match seen.get(&class) {
                            Some(prev) => prev != &pair,
                            None => {
                                pairs += 1;
                                seen.insert(class, pair.clone());
                                false
                            }
                        };
                        t.record(consistent && !clash, 1, || json!({"n": n, "motive": u, "pair": pair}));
                    }
                }
            }
        }
        injective[n.to_string()] = json!({"distinct_pairs": pairs});
    }
    Ok(t.finish(json!({"roundtrip_motives": 500, "injectivity": injective})))
}

/// Largest `r` with `n^r <= 10^4`, capped at 4.
fn max_rank(n: u64) -> usize {
    (1..=4).rev().find(|&r| n.pow(r as u32) <= 10_000).unwrap_or(1)
}

pub fn model_algebra(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("model-algebra");
    for n in 2..=8u64 {
        for (k, want) in [(1i64, "pi"), (-1, "pi^-1")] {
            let u = Motive::new(vec![vec![PiMonomial::pi(k)]])?;
            let alg = build_model_algebra(&u, n)?;
            let expected: Vec<PiMonomial> = (0..n as i64)
                .map(|a| PiMonomial::pi(if k == 1 { a } else if a == 0 { 0 } else { n as i64 - a }))
                .collect();
            t.record(alg.table(0) == expected.as_slice(), 0, || json!({"table": want, "n": n}));
        }
    }
    let mut points = 0usize;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8u64);
        let (d, r) = (rng.gen_range(1..=3), rng.gen_range(1..=max_rank(n)));
        let u = sample::motive(&mut rng, d, r);
        let alg = build_model_algebra(&u, n)?;
        points += alg.points().len() * d;
        let integral = integrality_report(&alg).integral;
        let fibre = generic_fibre_failure(&alg, &u)?;
        let ok = integral && fibre.is_none() && (0..d).all(|i| alg.table(i)[0].is_one());
        t.record(ok, alg.points().len() * d, || json!({"motive": u, "n": n, "integral": integral, "fibre": fibre}));
    }
    Ok(t.finish(json!({"seeded_motives": 100, "table_values": points})))
}

pub fn psi(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("psi");
    let exhaustive = vertical::exhaustive_instances(&mut rng, 4)?;
    let swept = exhaustive.len();
    let random: Vec<_> = (0..100).map(|_| vertical::random_instance(&mut rng, 12)).collect::<motivic::Result<_>>()?;
    let mut max_middle = 0;
    for inst in exhaustive.iter().chain(&random) {
        let rep = inst.verify()?;
        max_middle = max_middle.max(rep.middle_order);
        t.record(rep.holds(), rep.middle_order as usize, || json!({"instance": inst.describe(), "report": rep}));
    }
    Ok(t.finish(json!({"exhaustive": swept, "random": 100, "largest_middle_group": max_middle})))
}

pub fn carry(_seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut t = Tally::new("carry");
    for n in 1..=64u64 {
        let g = carry_cocycle(n)?;
        t.record(g.is_cocycle(), n as usize, || json!({"n": n, "defect": g.defect()}));
    }
    let mut groups = json!({});
    for q in [2u64, 3, 4, 5, 8, 9] {
        let ext = carry_cocycle_mod(q, q)?.extension_group()?;
        let orders = ext.group.orders().to_vec();
        groups[q.to_string()] = json!(orders);
        t.record(orders == [q * q], q as usize, || json!({"level": q, "extension": orders}));
    }
    Ok(t.finish(json!({"extension_groups": groups})))
}

pub fn dieudonne(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("dieudonne");
    let check = |t: &mut Tally, mu: &MonodromyMatrix, p: u64, m: u32| -> motivic::Result<()> {
        let v = build_dieudonne(mu, p, m)?.verdicts();
        t.record(v.all(), mu.d() * mu.r(), || json!({"mu": mu, "p": p, "m": m, "verdicts": v}));
        Ok(())
    };
    for p in [2u64, 3, 5, 13] {
        for m in 1..=4u32 {
            for x in -9..=9 {
                check(&mut t, &MonodromyMatrix::new(vec![vec![x]])?, p, m)?;
            }
            for d in 1..=3 {
                for r in 1..=3 {
                    for c in [-9, 0, 9] {
                        check(&mut t, &MonodromyMatrix::new(vec![vec![c; r]; d])?, p, m)?;
                    }
                    for _ in 0..20 {
                        check(&mut t, &sample::monodromy(&mut rng, d, r, 9), p, m)?;
                    }
                }
            }
        }
    }
    Ok(t.finish(json!({"primes": [2, 3, 5, 13], "max_m": 4})))
}

pub fn coproduct(_seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut t = Tally::new("coproduct");
    let mut signs = json!({});
    let mut first: Option<Option<i64>> = None;
    for (p, m) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (5, 2)] {
        let rep = coproduct_identity_check(p, m)?;
        signs[rep.level.to_string()] = json!(rep.epsilon);
        let constant = *first.get_or_insert(rep.epsilon) == rep.epsilon;
        t.record(rep.epsilon.is_some() && constant, rep.level as usize, || json!(rep));
    }
    Ok(t.finish(json!({"epsilon": first.flatten(), "per_level": signs})))
}

pub fn artin_hasse(_seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut t = Tally::new("artin-hasse");
    let degree = 50;
    let one_plus_y = TruncatedSeries::one(degree).add(&TruncatedSeries::var(degree));
    for p in [2u64, 3, 5] {
        let l = artin_hasse_log(p, degree)?;
        let integral = l.is_p_integral(p);
        let roundtrip = artin_hasse_exp(&l, p)? == one_plus_y;
        t.record(integral && roundtrip, p as usize, || json!({"p": p, "p_integral": integral, "roundtrip": roundtrip}));
    }
    Ok(t.finish(json!({"degree": degree})))
}

pub fn second_kind(seed: u64) -> motivic::Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut t = Tally::new("second-kind");
    for (p, m) in [(5u64, 1u32), (3, 2), (2, 3)] {
        for r in 1..=2usize {
            let mut tuples = vec![vec![1u64; r]];
            for _ in 0..4 {
                tuples.push((0..r).map(|_| sample::principal_unit(&mut rng, p, 10_000)).collect());
            }
            for units in tuples {
                let h = second_kind_integral(&units, p, m)?;
                let failure = h.coboundary_failure()?;
                t.record(failure.is_none(), r, || json!({"p": p, "m": m, "units": units, "pair": failure}));
            }
        }
    }
    Ok(t.finish(json!({"levels": [5, 9, 8]})))
}
