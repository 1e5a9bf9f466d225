//! How the "vertical" sequence `0 -> I -> M -> Q -> 0` of a Baer sum
//! depends on the summands.
//!
//! Setting: an exact `0 -> I --w--> L --k--> P -> 0`, an extension `eta1` of
//! `N` by `L` and an extension `eta2~` of `N` by `I`. Put
//! `eta = eta1 + w_* eta2~` and, for each extension `M^x` of `N` by `L`,
//! `Q^x = M^x / I`. The middle columns `psi^x: 0 -> I -> M^x -> Q^x -> 0`
//! then satisfy `psi = iota^* psi1 + f^* eta2~`, where `iota: Q -> Q1` is the
//! isomorphism induced by the canonical section `sigma^c: N -> Q2` of
//! `f2: Q2 -> N`.
//!
//! Everything is instantiated over constant finite abelian groups and every
//! group, map and section is materialized explicitly; the relation is then
//! a coboundary test.

use rand::Rng;
use serde::Serialize;

use super::cocycle::{Cocycle2, Extension};
use super::exact::{cokernel, factor_through, generator_lifts, hom_from_table, inverse_table, ShortExactSequence};
use super::group::{Elem, FinAbGroup, Hom};
use crate::error::{domain, Error, Result};

/// One extension `0 -> L -> M -> N -> 0` together with its quotient by `I`.
struct VerticalColumn {
    ext: Extension,
    /// `M -> Q`.
    g: Hom,
    /// `Q -> N`.
    f: Hom,
    /// `P -> Q`.
    p_to_q: Hom,
    /// `psi: 0 -> I -> M -> Q -> 0` as a factor set on `Q`.
    psi: Cocycle2<FinAbGroup>,
}

impl VerticalColumn {
    fn build(psibar: &ShortExactSequence, c: &Cocycle2<FinAbGroup>) -> Result<Self> {
        let ext = c.extension_group()?;
        let tau = psibar.incl.then(&ext.embedding)?;
        let (q, g) = cokernel(&tau)?;
        let f = factor_through(&g, &ext.projection)?;
        // P -> Q: lift through k, include into M, project
        let lifts = generator_lifts(&psibar.proj)?;
        let images = lifts.iter().map(|l| g.apply(&ext.embedding.apply(l))).collect();
        let p_to_q = Hom::new(psibar.quot().clone(), q.clone(), images)?;
        let column = ShortExactSequence::new(tau, g.clone())?;
        let psi = column.cocycle()?;
        Ok(VerticalColumn { ext, g, f, p_to_q, psi })
    }

    fn q(&self) -> &FinAbGroup {
        self.g.target()
    }
}

/// Outcome of [`verify_psi_relation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    /// `psi - (iota^* psi1 + f^* eta2~)` is a coboundary.
    pub psi_relation: bool,
    /// `psi - (iota^* psi1 + (sigma^c f)^* psi2)` is a coboundary.
    pub general_relation: bool,
    /// `(sigma^c)^* psi2` is cohomologous to `eta2~`.
    pub sigma_pullback: bool,
    pub middle_order: u64,
    pub quotient_order: u64,
}

impl PsiReport {
    pub fn holds(&self) -> bool {
        self.psi_relation && self.general_relation && self.sigma_pullback
    }
}

fn is_split(c: &Cocycle2<FinAbGroup>) -> Result<bool> {
    Ok(c.is_coboundary()?.is_some())
}

/// Builds `eta = eta1 + w_* eta2~`, both vertical middle sequences, the
/// canonical section `sigma^c` and the isomorphism `iota`, and tests the
/// composition law. `w` must be the inclusion of `psibar`.
pub fn verify_psi_relation(
    psibar: &ShortExactSequence,
    eta1: &Cocycle2<FinAbGroup>,
    eta2_tilde: &Cocycle2<FinAbGroup>,
    w: &Hom,
) -> Result<PsiReport> {
    if w != &psibar.incl {
        return domain("w must be the inclusion I -> L of the given exact sequence");
    }
    if eta1.fiber() != psibar.mid() {
        return domain("eta1 must be an extension by L");
    }
    if eta2_tilde.fiber() != psibar.sub() {
        return domain("eta2~ must be an extension by I");
    }
    if eta1.base() != eta2_tilde.base() {
        return domain("eta1 and eta2~ must be extensions of the same N");
    }
    let n_grp = eta1.base().clone();
    for (name, c) in [("eta1", eta1), ("eta2~", eta2_tilde)] {
        if let Some(d) = c.defect() {
            return domain(format!("{name} is not a symmetric cocycle: {} at {:?}, {:?}", d.reason, d.a, d.b));
        }
    }

    let Construction { col, col1, col2, sigma_c, iota } = construct(psibar, eta1, eta2_tilde, &n_grp)?;

    let pulled1 = col1.psi.pullback(&iota)?;
    let pulled_eta2 = eta2_tilde.pullback(&col.f)?;
    let rhs = pulled1.baer_sum(&pulled_eta2)?;
    let psi_relation = is_split(&col.psi.difference(&rhs)?)?;

    let sigma_f = col.f.then(&sigma_c)?;
    let rhs_general = pulled1.baer_sum(&col2.psi.pullback(&sigma_f)?)?;
    let general_relation = is_split(&col.psi.difference(&rhs_general)?)?;

    let sigma_back = col2.psi.pullback(&sigma_c)?;
    let sigma_pullback = is_split(&sigma_back.difference(eta2_tilde)?)?;

    Ok(PsiReport {
        psi_relation,
        general_relation,
        sigma_pullback,
        middle_order: col.ext.group.order(),
        quotient_order: col.q().order(),
    })
}

struct Construction {
    col: VerticalColumn,
    col1: VerticalColumn,
    col2: VerticalColumn,
    sigma_c: Hom,
    iota: Hom,
}

fn construct(
    psibar: &ShortExactSequence,
    eta1: &Cocycle2<FinAbGroup>,
    eta2_tilde: &Cocycle2<FinAbGroup>,
    n_grp: &FinAbGroup,
) -> Result<Construction> {
    let w = &psibar.incl;
    let l_grp = psibar.mid();
    let eta2 = eta2_tilde.pushforward(l_grp.clone(), |x| w.apply(x));
    let eta = eta1.baer_sum(&eta2)?;
    let col = VerticalColumn::build(psibar, &eta)?;
    let col1 = VerticalColumn::build(psibar, eta1)?;
    let col2 = VerticalColumn::build(psibar, &eta2)?;

    // delta: M2~ -> M2, (i, n) -> (w(i), n)
    let ext_t = eta2_tilde.extension_group()?;
    let delta_table: Vec<Elem> = ext_t
        .group
        .elements()?
        .iter()
        .map(|m| {
            let (i, n) = ext_t.coords(m);
            col2.ext.element(&w.apply(&i), &n)
        })
        .collect();
    let delta = hom_from_table(&ext_t.group, &col2.ext.group, &delta_table)?;

    // sigma^c h~ = g2 delta
    let sigma_c = factor_through(&ext_t.projection, &delta.then(&col2.g)?)?;
    if !sigma_c.then(&col2.f)?.images().iter().enumerate().all(|(j, e)| e == &n_grp.generator(j)) {
        return Err(Error::Inconsistent("sigma^c is not a section of f2".into()));
    }

    let iota = build_iota(&col, &col1, &col2, &sigma_c)?;

    Ok(Construction { col, col1, col2, sigma_c, iota })
}

/// `iota: Q -> Q1`. An element of `M` with coordinates `(l, n)` corresponds
/// to the class of `((l, n), (0, n))` in the Baer sum of `M1` and `M2`; its
/// image in `Q1 x_N Q2` is moved into `Q1` by subtracting `sigma^c f2` on the
/// second factor and pushing the resulting element of `P` into `Q1`.
fn build_iota(
    col: &VerticalColumn,
    col1: &VerticalColumn,
    col2: &VerticalColumn,
    sigma_c: &Hom,
) -> Result<Hom> {
    let q = col.q();
    let q1 = col1.q();
    let q2 = col2.q();
    let p_in_q2 = inverse_table(&col2.p_to_q)?;
    let l_zero = col.ext.fiber().zero();

    let image_of = |m: &Elem| -> Result<Elem> {
        let (l, n) = col.ext.coords(m);
        let x1 = col1.g.apply(&col1.ext.element(&l, &n));
        let x2 = col2.g.apply(&col2.ext.element(&l_zero, &n));
        let back = sigma_c.apply(&col2.f.apply(&x2));
        let p = p_in_q2
            .get(&q2.sub(&x2, &back))
            .ok_or_else(|| Error::Inconsistent("second coordinate does not fall in P".into()))?;
        Ok(q1.add(&x1, &col1.p_to_q.apply(p)))
    };

    let mut table: Vec<Option<Elem>> = vec![None; q.checked_order()?];
    for m in col.ext.group.elements()? {
        let img = image_of(&m)?;
        let slot = &mut table[q.index(&col.g.apply(&m))];
        match slot {
            Some(prev) if prev != &img => return Err(Error::Inconsistent("iota depends on the lift".into())),
            Some(_) => {}
            None => *slot = Some(img),
        }
    }
    let table: Vec<Elem> = table.into_iter().map(|x| x.expect("g is surjective")).collect();
    let iota = hom_from_table(q, q1, &table)?;
    if !iota.is_injective()? || q.order() != q1.order() {
        return Err(Error::Inconsistent("iota is not an isomorphism".into()));
    }
    if iota.then(&col1.f)? != col.f {
        return Err(Error::Inconsistent("iota does not commute with the projections to N".into()));
    }
    if col.p_to_q.then(&iota)? != col1.p_to_q {
        return Err(Error::Inconsistent("iota does not fix P".into()));
    }
    Ok(iota)
}

/// Input data for [`verify_psi_relation`].
#[derive(Debug, Clone)]
pub struct PsiInstance {
    pub psibar: ShortExactSequence,
    pub eta1: Cocycle2<FinAbGroup>,
    pub eta2_tilde: Cocycle2<FinAbGroup>,
}

impl PsiInstance {
    pub fn verify(&self) -> Result<PsiReport> {
        verify_psi_relation(&self.psibar, &self.eta1, &self.eta2_tilde, &self.psibar.incl)
    }

    pub fn describe(&self) -> String {
        format!(
            "I={:?} L={:?} P={:?} N={:?}",
            self.psibar.sub().orders(),
            self.psibar.mid().orders(),
            self.psibar.quot().orders(),
            self.eta1.base().orders()
        )
    }

    /// Exact sequence `0 -> I -> L -> P -> 0` presented by the factor set `c`.
    pub fn sequence_from_cocycle(c: &Cocycle2<FinAbGroup>) -> Result<ShortExactSequence> {
        let ext = c.extension_group()?;
        ShortExactSequence::new(ext.embedding.clone(), ext.projection.clone())
    }
}

/// Every finite abelian group of order at most 12, one presentation each.
pub fn small_groups(max_order: u64) -> Vec<FinAbGroup> {
    const ALL: &[&[u64]] = &[
        &[],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
        &[11],
        &[12],
        &[2, 6],
    ];
    ALL.iter()
        .map(|o| FinAbGroup::new(o.to_vec()).expect("valid orders"))
        .filter(|g| g.order() <= max_order)
        .collect()
}

/// `sum_j gamma_{m_j}(a_j, b_j) beta_j`: the factor set whose class in
/// `Ext(A, B) = sum_j B / m_j B` is `(beta_j)_j`.
pub fn carry_combination(base: &FinAbGroup, fiber: &FinAbGroup, betas: &[Elem]) -> Result<Cocycle2<FinAbGroup>> {
    if betas.len() != base.rank() {
        return domain("one class parameter per cyclic factor of the base is required");
    }
    let orders = base.orders().to_vec();
    let fb = fiber.clone();
    Cocycle2::from_fn(base.clone(), fiber.clone(), |a, b| {
        let mut acc = fb.zero();
        for (j, &m) in orders.iter().enumerate() {
            if a[j] + b[j] >= m as i64 {
                acc = fb.add(&acc, &betas[j]);
            }
        }
        acc
    })
}

pub fn random_element<R: Rng + ?Sized>(rng: &mut R, g: &FinAbGroup) -> Elem {
    g.orders().iter().map(|&m| rng.gen_range(0..m) as i64).collect()
}

/// A random symmetric factor set: a random class plus a random coboundary.
pub fn random_cocycle<R: Rng + ?Sized>(
    rng: &mut R,
    base: &FinAbGroup,
    fiber: &FinAbGroup,
) -> Result<Cocycle2<FinAbGroup>> {
    let betas: Vec<Elem> = (0..base.rank()).map(|_| random_element(rng, fiber)).collect();
    perturb(rng, carry_combination(base, fiber, &betas)?)
}

fn perturb<R: Rng + ?Sized>(rng: &mut R, c: Cocycle2<FinAbGroup>) -> Result<Cocycle2<FinAbGroup>> {
    let n = c.base().checked_order()?;
    let h: Vec<Elem> = (0..n).map(|i| if i == 0 { c.fiber().zero() } else { random_element(rng, c.fiber()) }).collect();
    c.baer_sum(&Cocycle2::coboundary(c.base().clone(), c.fiber().clone(), &h)?)
}

/// A random instance with `|L| = |I||P| <= max_order` and `|N| <= max_order`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_order: u64) -> Result<PsiInstance> {
    let groups = small_groups(max_order);
    let (i_grp, p_grp) = loop {
        let i = &groups[rng.gen_range(0..groups.len())];
        let p = &groups[rng.gen_range(0..groups.len())];
        if i.order() * p.order() <= max_order {
            break (i.clone(), p.clone());
        }
    };
    let n_grp = groups[rng.gen_range(0..groups.len())].clone();
    let psibar = PsiInstance::sequence_from_cocycle(&random_cocycle(rng, &p_grp, &i_grp)?)?;
    let eta1 = random_cocycle(rng, &n_grp, psibar.mid())?;
    let eta2_tilde = random_cocycle(rng, &n_grp, &i_grp)?;
    Ok(PsiInstance { psibar, eta1, eta2_tilde })
}

/// Every combination of groups of order `<= max_order` (with `|I||P|` also
/// bounded) and every class of `psibar`, `eta1` and `eta2~` in carry
/// normal form; each factor set is shifted by a coboundary drawn from `rng`.
pub fn exhaustive_instances<R: Rng + ?Sized>(rng: &mut R, max_order: u64) -> Result<Vec<PsiInstance>> {
    let groups = small_groups(max_order);
    let mut out = Vec::new();
    for i_grp in &groups {
        for p_grp in &groups {
            if i_grp.order() * p_grp.order() > max_order {
                continue;
            }
            for psi_betas in all_tuples(i_grp, p_grp.rank())? {
                let c = perturb(rng, carry_combination(p_grp, i_grp, &psi_betas)?)?;
                let psibar = PsiInstance::sequence_from_cocycle(&c)?;
                for n_grp in &groups {
                    for b1 in all_tuples(psibar.mid(), n_grp.rank())? {
                        for b2 in all_tuples(i_grp, n_grp.rank())? {
                            let eta1 = perturb(rng, carry_combination(n_grp, psibar.mid(), &b1)?)?;
                            let eta2_tilde = perturb(rng, carry_combination(n_grp, i_grp, &b2)?)?;
                            out.push(PsiInstance { psibar: psibar.clone(), eta1, eta2_tilde });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn all_tuples(g: &FinAbGroup, len: usize) -> Result<Vec<Vec<Elem>>> {
    let els = g.elements()?;
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                els.iter().map(move |e| {
                    let mut next = prefix.clone();
                    next.push(e.clone());
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::cocycle::carry_cocycle_mod;
    use rand::SeedableRng;

    fn z(n: u64) -> FinAbGroup {
        FinAbGroup::cyclic(n).unwrap()
    }

    #[test]
    fn all_trivial_data_splits() {
        let psibar = PsiInstance::sequence_from_cocycle(&Cocycle2::zero(z(2), z(2)).unwrap()).unwrap();
        let eta1 = Cocycle2::zero(z(2), psibar.mid().clone()).unwrap();
        let eta2 = Cocycle2::zero(z(2), z(2)).unwrap();
        let report = verify_psi_relation(&psibar, &eta1, &eta2, &psibar.incl).unwrap();
        assert!(report.holds());
        assert_eq!(report.middle_order, 8);
        assert_eq!(report.quotient_order, 4);
    }

    #[test]
    fn carry_eta2_with_trivial_eta1() {
        // I = P = N = Z/2, L = Z/4 (psibar given by gamma_2)
        let psibar = PsiInstance::sequence_from_cocycle(&carry_cocycle_mod(2, 2).unwrap()).unwrap();
        assert_eq!(psibar.mid().orders(), &[4]);
        let eta1 = Cocycle2::zero(z(2), psibar.mid().clone()).unwrap();
        let eta2 = carry_cocycle_mod(2, 2).unwrap();
        let report = verify_psi_relation(&psibar, &eta1, &eta2, &psibar.incl).unwrap();
        assert!(report.holds(), "{report:?}");
        // eta = w_* gamma_2 on Z/2 with values in Z/4 gives M = Z/2 x Z/4 or Z/8
        assert_eq!(report.middle_order, 8);
    }

    #[test]
    fn non_exact_input_rejected() {
        let z4 = z(4);
        let z2 = z(2);
        let inc = Hom::new(z2.clone(), z4.clone(), vec![vec![2]]).unwrap();
        let bad = Hom::zero(&z4, &z2);
        assert!(ShortExactSequence::new(inc, bad).is_err());
    }

    #[test]
    fn wrong_w_rejected() {
        let psibar = PsiInstance::sequence_from_cocycle(&carry_cocycle_mod(2, 2).unwrap()).unwrap();
        let eta1 = Cocycle2::zero(z(2), psibar.mid().clone()).unwrap();
        let eta2 = Cocycle2::zero(z(2), z(2)).unwrap();
        let other = Hom::zero(psibar.sub(), psibar.mid());
        assert!(matches!(verify_psi_relation(&psibar, &eta1, &eta2, &other), Err(Error::Domain(_))));
    }

    #[test]
    fn random_small_instances_hold() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, 6).unwrap();
            let rep = inst.verify().unwrap();
            assert!(rep.holds(), "{} -> {rep:?}", inst.describe());
        }
    }

    #[test]
    fn dropping_the_eta2_term_breaks_the_relation() {
        let psibar = PsiInstance::sequence_from_cocycle(&Cocycle2::zero(z(2), z(2)).unwrap()).unwrap();
        let eta1 = Cocycle2::zero(z(2), psibar.mid().clone()).unwrap();
        let eta2 = carry_cocycle_mod(2, 2).unwrap();
        let n = z(2);
        let c = construct(&psibar, &eta1, &eta2, &n).unwrap();
        let without = c.col.psi.difference(&c.col1.psi.pullback(&c.iota).unwrap()).unwrap();
        assert!(!is_split(&without).unwrap());
        let with = without.difference(&eta2.pullback(&c.col.f).unwrap()).unwrap();
        assert!(is_split(&with).unwrap());
    }

    #[test]
    fn small_group_catalogue() {
        let g = small_groups(12);
        assert_eq!(g.len(), 17);
        assert_eq!(small_groups(4).len(), 5);
    }
}
