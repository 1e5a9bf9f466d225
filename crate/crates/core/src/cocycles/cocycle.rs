use std::fmt::Debug;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::group::{Elem, FinAbGroup, Hom};
use super::snf::FiniteQuotient;
use crate::error::{domain, shape, Error, Result};

/// An abelian group of cocycle values. Written additively whatever the
/// underlying law is.
pub trait ValueGroup: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

impl ValueGroup for FinAbGroup {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        FinAbGroup::zero(self)
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        FinAbGroup::add(self, a, b)
    }

    fn neg(&self, a: &Elem) -> Elem {
        FinAbGroup::neg(self, a)
    }
}

/// The integers, for cocycles such as the carry cocycle that are defined
/// before any reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl ValueGroup for Integers {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }

    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn neg(&self, a: &i64) -> i64 {
        -a
    }
}

impl Serialize for Integers {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("Z")
    }
}

/// A normalized symmetric 2-cocycle `A x A -> B`, stored densely with row
/// index `index(a)` and column index `index(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle2<G: ValueGroup> {
    base: FinAbGroup,
    fiber: G,
    table: Vec<G::Elem>,
}

/// A triple violating the cocycle identity, or a pair violating
/// normalization/symmetry (then `z` is `None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleDefect {
    pub a: Elem,
    pub b: Elem,
    pub z: Option<Elem>,
    pub reason: &'static str,
}

impl<G: ValueGroup> Cocycle2<G> {
    /// Raw constructor; the table must have `|A|^2` entries. Invariants are
    /// not checked here, see [`Cocycle2::is_cocycle`].
    pub fn from_table(base: FinAbGroup, fiber: G, table: Vec<G::Elem>) -> Result<Self> {
        let n = base.checked_order()?;
        if table.len() != n * n {
            return shape(format!("table of {} entries for a base of order {n}", table.len()));
        }
        Ok(Cocycle2 { base, fiber, table })
    }

    pub fn from_fn(base: FinAbGroup, fiber: G, f: impl Fn(&Elem, &Elem) -> G::Elem) -> Result<Self> {
        let els = base.elements()?;
        let mut table = Vec::with_capacity(els.len() * els.len());
        for a in &els {
            for b in &els {
                table.push(f(a, b));
            }
        }
        Ok(Cocycle2 { base, fiber, table })
    }

    pub fn zero(base: FinAbGroup, fiber: G) -> Result<Self> {
        let z = fiber.zero();
        Cocycle2::from_fn(base, fiber, |_, _| z.clone())
    }

    /// `dh(a, b) = h(a) + h(b) - h(a + b)` for a cochain indexed like the base.
    pub fn coboundary(base: FinAbGroup, fiber: G, h: &[G::Elem]) -> Result<Self> {
        if h.len() != base.checked_order()? {
            return shape("cochain length differs from base order");
        }
        let g = base.clone();
        let fb = fiber.clone();
        Cocycle2::from_fn(base, fiber, |a, b| {
            let ab = g.add(a, b);
            fb.sub(&fb.add(&h[g.index(a)], &h[g.index(b)]), &h[g.index(&ab)])
        })
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn fiber(&self) -> &G {
        &self.fiber
    }

    pub fn table(&self) -> &[G::Elem] {
        &self.table
    }

    fn width(&self) -> usize {
        self.base.order() as usize
    }

    pub fn value_at(&self, i: usize, j: usize) -> &G::Elem {
        &self.table[i * self.width() + j]
    }

    pub fn value(&self, a: &[i64], b: &[i64]) -> &G::Elem {
        self.value_at(self.base.index(a), self.base.index(b))
    }

    /// First violation of normalization, symmetry or the cocycle identity
    /// `c(a,b) + c(a+b,z) = c(b,z) + c(a,b+z)`.
    pub fn defect(&self) -> Option<CocycleDefect> {
        let n = self.width();
        let els: Vec<Elem> = (0..n).map(|i| self.base.element(i)).collect();
        let zero = self.fiber.zero();
        for (i, a) in els.iter().enumerate() {
            if self.value_at(0, i) != &zero || self.value_at(i, 0) != &zero {
                return Some(CocycleDefect { a: a.clone(), b: self.base.zero(), z: None, reason: "not normalized" });
            }
            for (j, b) in els.iter().enumerate().skip(i + 1) {
                if self.value_at(i, j) != self.value_at(j, i) {
                    return Some(CocycleDefect { a: a.clone(), b: b.clone(), z: None, reason: "not symmetric" });
                }
            }
        }
        let sum_idx: Vec<Vec<usize>> =
            els.iter().map(|a| els.iter().map(|b| self.base.index(&self.base.add(a, b))).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                let ij = sum_idx[i][j];
                for k in 0..n {
                    let lhs = self.fiber.add(self.value_at(i, j), self.value_at(ij, k));
                    let rhs = self.fiber.add(self.value_at(j, k), self.value_at(i, sum_idx[j][k]));
                    if lhs != rhs {
                        return Some(CocycleDefect {
                            a: els[i].clone(),
                            b: els[j].clone(),
                            z: Some(els[k].clone()),
                            reason: "cocycle identity fails",
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.defect().is_none()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.base != other.base || self.fiber != other.fiber {
            return domain("cocycles over different groups");
        }
        Ok(())
    }

    /// Baer sum of the classified extensions.
    pub fn baer_sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let table = self.table.iter().zip(&other.table).map(|(a, b)| self.fiber.add(a, b)).collect();
        Ok(Cocycle2 { base: self.base.clone(), fiber: self.fiber.clone(), table })
    }

    pub fn neg(&self) -> Self {
        let table = self.table.iter().map(|a| self.fiber.neg(a)).collect();
        Cocycle2 { base: self.base.clone(), fiber: self.fiber.clone(), table }
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.baer_sum(&other.neg())
    }

    /// Push-out along a homomorphism of value groups, `phi o c`.
    pub fn pushforward<H: ValueGroup>(&self, target: H, phi: impl Fn(&G::Elem) -> H::Elem) -> Cocycle2<H> {
        Cocycle2 { base: self.base.clone(), fiber: target, table: self.table.iter().map(phi).collect() }
    }

    /// Pull-back along `psi: A' -> A`, `c o (psi x psi)`.
    pub fn pullback(&self, psi: &Hom) -> Result<Self> {
        if psi.target() != &self.base {
            return domain("pull-back map does not land in the cocycle's base");
        }
        let base = psi.source().clone();
        let idx: Vec<usize> = base.elements()?.iter().map(|a| self.base.index(&psi.apply(a))).collect();
        let mut table = Vec::with_capacity(idx.len() * idx.len());
        for &i in &idx {
            for &j in &idx {
                table.push(self.value_at(i, j).clone());
            }
        }
        Ok(Cocycle2 { base, fiber: self.fiber.clone(), table })
    }
}

/// The carry cocycle `gamma(a, b) = [sigma(a) + sigma(b)]` on `Z/n` with
/// `sigma(a) = a~/n`, `a~` in `[0, n)`: 1 exactly when `a~ + b~ >= n`.
pub fn carry_cocycle(n: u64) -> Result<Cocycle2<Integers>> {
    let base = FinAbGroup::cyclic(n)?;
    Cocycle2::from_fn(base, Integers, |a, b| carry(n, a[0], b[0]))
}

/// Single value of the carry cocycle at representatives reduced mod `n`.
pub fn carry(n: u64, a: i64, b: i64) -> i64 {
    let n = n as i64;
    i64::from(a.rem_euclid(n) + b.rem_euclid(n) >= n)
}

/// `carry_cocycle(n)` read in `Z/m`.
pub fn carry_cocycle_mod(n: u64, m: u64) -> Result<Cocycle2<FinAbGroup>> {
    let target = FinAbGroup::cyclic(m)?;
    let t = target.clone();
    Ok(carry_cocycle(n)?.pushforward(target, move |&x| t.reduce(&[x])))
}

impl Cocycle2<FinAbGroup> {
    /// The B-part of `k * (0, a)` in the twisted group `B x_c A`.
    fn lift_multiple(&self, a: &[i64], k: u64) -> Elem {
        let b = &self.fiber;
        let (mut acc_b, mut acc_a) = (b.zero(), self.base.zero());
        for _ in 0..k {
            acc_b = b.add(&acc_b, self.value(&acc_a, a));
            acc_a = self.base.add(&acc_a, a);
        }
        acc_b
    }

    /// B-part of `sum_j a~_j (0, e_j)` in `B x_c A`; the element equals `(beta(a), a)`.
    fn standard_lift(&self, a: &[i64]) -> Elem {
        let b = &self.fiber;
        let (mut acc_b, mut acc_a) = (b.zero(), self.base.zero());
        for (j, &aj) in a.iter().enumerate() {
            let e = self.base.generator(j);
            for _ in 0..aj {
                acc_b = b.add(&acc_b, self.value(&acc_a, &e));
                acc_a = self.base.add(&acc_a, &e);
            }
        }
        acc_b
    }

    fn check_normalized_symmetric(&self) -> Result<()> {
        let n = self.width();
        let zero = self.fiber.zero();
        for i in 0..n {
            if self.value_at(0, i) != &zero || self.value_at(i, 0) != &zero {
                return domain("cocycle is not normalized");
            }
            for j in i + 1..n {
                if self.value_at(i, j) != self.value_at(j, i) {
                    return domain("cocycle is not symmetric");
                }
            }
        }
        Ok(())
    }

    /// A cochain `h` with `h(0) = 0` and `c = dh`, if `c` is a coboundary.
    ///
    /// The class of `c` splits iff every standard generator `e_j` of order
    /// `m_j` admits a lift `(beta_j, e_j)` of the same order, i.e.
    /// `m_j beta_j = -s_j` where `(s_j, 0) = m_j (0, e_j)`. That congruence is
    /// solved per cyclic factor of `B` (least solution), the resulting
    /// homomorphic section gives `h`, and `h` is verified on all pairs. A
    /// failed verification means `c` was not a cocycle and is reported as a
    /// domain error.
    pub fn is_coboundary(&self) -> Result<Option<Vec<Elem>>> {
        self.check_normalized_symmetric()?;
        let b = &self.fiber;
        let mut betas = Vec::with_capacity(self.base.rank());
        for (j, &mj) in self.base.orders().iter().enumerate() {
            let s = self.lift_multiple(&self.base.generator(j), mj);
            let target = b.neg(&s);
            let mut beta = Vec::with_capacity(b.rank());
            for (&t, &bk) in target.iter().zip(b.orders()) {
                match solve_linear_congruence(mj as i128, t as i128, bk as i128) {
                    Some(x) => beta.push(x as i64),
                    None => return Ok(None),
                }
            }
            betas.push(beta);
        }
        let els = self.base.elements()?;
        let mut h = Vec::with_capacity(els.len());
        for a in &els {
            // section(a) = sum_j a~_j (beta_j, e_j) = (beta(a) + sum a~_j beta_j, a)
            let mut phi = self.standard_lift(a);
            for (&aj, beta) in a.iter().zip(&betas) {
                phi = b.add(&phi, &b.scale(aj, beta));
            }
            h.push(b.neg(&phi));
        }
        let check = Cocycle2::coboundary(self.base.clone(), b.clone(), &h)?;
        if check.table != self.table {
            return domain("table is not a symmetric 2-cocycle");
        }
        Ok(Some(h))
    }

    /// The middle group `E = B x A` with `(b,a) + (b',a') = (b + b' + c(a,a'), a + a')`.
    pub fn extension_group(&self) -> Result<Extension> {
        self.check_normalized_symmetric()?;
        Extension::build(self)
    }
}

/// Least `x` in `[0, m)` with `a x = t (mod m)`.
fn solve_linear_congruence(a: i128, t: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let a = a.rem_euclid(m);
    let t = t.rem_euclid(m);
    let (g, inv, _) = ext_gcd(a, m);
    if t % g != 0 {
        return None;
    }
    let m2 = m / g;
    Some(((t / g) * inv).rem_euclid(m2))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (g, x, y) = ext_gcd(b, a % b);
    (g, y, x - (a / b) * y)
}

/// A central extension `0 -> B -> E -> A -> 0` materialized from a cocycle:
/// `E` in invariant-factor form plus the coordinate bijection `E <-> B x A`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub group: FinAbGroup,
    pub embedding: Hom,
    pub projection: Hom,
    fiber: FinAbGroup,
    base: FinAbGroup,
    to_group: Vec<Elem>,
    from_group: Vec<(Elem, Elem)>,
}

impl Extension {
    fn build(c: &Cocycle2<FinAbGroup>) -> Result<Self> {
        let fiber = c.fiber.clone();
        let base = c.base.clone();
        let nb = fiber.rank();
        let na = base.rank();
        let gens = nb + na;
        let mut relations = Vec::with_capacity(gens);
        for (k, &bk) in fiber.orders().iter().enumerate() {
            let mut row = vec![0i128; gens];
            row[k] = bk as i128;
            relations.push(row);
        }
        for (j, &mj) in base.orders().iter().enumerate() {
            let s = c.lift_multiple(&base.generator(j), mj);
            let mut row = vec![0i128; gens];
            for (k, &sk) in s.iter().enumerate() {
                row[k] = -(sk as i128);
            }
            row[nb + j] = mj as i128;
            relations.push(row);
        }
        let quotient = FiniteQuotient::new(gens, &relations)?;
        let group = quotient.group.clone();

        let b_els = fiber.elements()?;
        let a_els = base.elements()?;
        let total = b_els.len() * a_els.len();
        if group.checked_order()? != total {
            return Err(Error::Inconsistent(format!("extension has order {} not {total}", group.order())));
        }
        let mut to_group = Vec::with_capacity(total);
        let mut from_group = vec![(Vec::new(), Vec::new()); total];
        let mut seen = vec![false; total];
        for b in &b_els {
            for a in &a_els {
                let beta = c.standard_lift(a);
                let shift = fiber.sub(b, &beta);
                let x: Vec<i128> = shift.iter().chain(a.iter()).map(|&v| v as i128).collect();
                let e = quotient.project(&x);
                let idx = group.index(&e);
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(Error::Inconsistent("coordinate map B x A -> E is not injective".into()));
                }
                from_group[idx] = (b.clone(), a.clone());
                to_group.push(e);
            }
        }
        let embedding = Hom::new(
            fiber.clone(),
            group.clone(),
            (0..nb)
                .map(|k| {
                    let mut x = vec![0i128; gens];
                    x[k] = 1;
                    quotient.project(&x)
                })
                .collect(),
        )?;
        let projection = Hom::new(
            group.clone(),
            base.clone(),
            (0..group.rank()).map(|k| base.reduce_wide(&quotient.lift_generator(k)[nb..])).collect(),
        )?;
        Ok(Extension { group, embedding, projection, fiber, base, to_group, from_group })
    }

    pub fn fiber(&self) -> &FinAbGroup {
        &self.fiber
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    /// The element with cocycle coordinates `(b, a)`.
    pub fn element(&self, b: &[i64], a: &[i64]) -> Elem {
        self.to_group[self.fiber.index(b) * self.base.order() as usize + self.base.index(a)].clone()
    }

    /// Cocycle coordinates `(b, a)` of an element of `E`.
    pub fn coords(&self, e: &[i64]) -> (Elem, Elem) {
        self.from_group[self.group.index(e)].clone()
    }
}

#[derive(Serialize, Deserialize)]
struct CocycleRepr {
    #[serde(rename = "A")]
    a: Vec<u64>,
    #[serde(rename = "B")]
    b: Vec<u64>,
    table: Vec<Elem>,
}

impl<G> Serialize for Cocycle2<G>
where
    G: ValueGroup + Serialize,
    G::Elem: Serialize,
{
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cocycle2", 3)?;
        st.serialize_field("A", self.base.orders())?;
        st.serialize_field("B", &self.fiber)?;
        st.serialize_field("table", &self.table)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Cocycle2<FinAbGroup> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CocycleRepr::deserialize(d)?;
        let base = FinAbGroup::new(repr.a).map_err(D::Error::custom)?;
        let fiber = FinAbGroup::new(repr.b).map_err(D::Error::custom)?;
        if let Some(bad) = repr.table.iter().find(|v| !fiber.contains(v)) {
            return Err(D::Error::custom(format!("table value {bad:?} is not a reduced element of B")));
        }
        Cocycle2::from_table(base, fiber, repr.table).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FinAbGroup {
        FinAbGroup::cyclic(n).unwrap()
    }

    #[test]
    fn carry_values() {
        let g = carry_cocycle(5).unwrap();
        assert_eq!(*g.value(&[2], &[3]), 1);
        assert_eq!(*g.value(&[1], &[2]), 0);
        for a in 0..5 {
            assert_eq!(*g.value(&[0], &[a]), 0);
        }
        assert!(carry_cocycle(1).unwrap().table().iter().all(|&v| v == 0));
        assert!(g.is_cocycle());
    }

    #[test]
    fn zero_cocycle_is_coboundary_of_zero() {
        let c = Cocycle2::zero(z(6), z(4)).unwrap();
        let h = c.is_coboundary().unwrap().unwrap();
        assert!(h.iter().all(|x| x == &vec![0]));
    }

    #[test]
    fn carry_mod_five_does_not_split() {
        let c = carry_cocycle_mod(5, 5).unwrap();
        assert_eq!(c.is_coboundary().unwrap(), None);
        assert_eq!(c.extension_group().unwrap().group.orders(), &[25]);
    }

    #[test]
    fn constructed_coboundary_recovered() {
        let base = FinAbGroup::new(vec![2, 3]).unwrap();
        let fiber = FinAbGroup::new(vec![4, 2]).unwrap();
        let h: Vec<Elem> = (0..6).map(|i| if i == 0 { vec![0, 0] } else { vec![(i * 3 % 4) as i64, (i % 2) as i64] }).collect();
        let c = Cocycle2::coboundary(base, fiber, &h).unwrap();
        assert!(c.is_cocycle());
        let found = c.is_coboundary().unwrap().unwrap();
        let again = Cocycle2::coboundary(c.base().clone(), c.fiber().clone(), &found).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn sum_with_negative_splits() {
        let c = carry_cocycle_mod(6, 4).unwrap();
        assert!(c.baer_sum(&c.neg()).unwrap().is_coboundary().unwrap().is_some());
    }

    #[test]
    fn pushforward_by_three() {
        let g = carry_cocycle(5).unwrap();
        let pushed = g.pushforward(Integers, |&x| 3 * x);
        assert!(pushed.table().iter().all(|&v| v == 0 || v == 3));
        assert_eq!(*pushed.value(&[4], &[4]), 3);
    }

    #[test]
    fn pullback_by_doubling() {
        let g = carry_cocycle(5).unwrap();
        let double = Hom::new(z(5), z(5), vec![vec![2]]).unwrap();
        let pulled = g.pullback(&double).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(pulled.value(&[a], &[b]), g.value(&[(2 * a) % 5], &[(2 * b) % 5]));
            }
        }
        assert!(pulled.is_cocycle());
    }

    #[test]
    fn extension_examples() {
        let zero = Cocycle2::zero(z(3), z(2)).unwrap();
        let mut orders = zero.extension_group().unwrap().group.orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![6]);

        let c = carry_cocycle_mod(4, 2).unwrap();
        assert_eq!(c.extension_group().unwrap().group.orders(), &[8]);
    }

    #[test]
    fn extension_maps_are_exact() {
        let c = carry_cocycle_mod(4, 6).unwrap();
        let ext = c.extension_group().unwrap();
        assert!(ext.embedding.is_injective().unwrap());
        assert!(ext.projection.is_surjective().unwrap());
        assert!(ext.embedding.then(&ext.projection).unwrap().is_zero());
        for e in ext.group.elements().unwrap() {
            let (b, a) = ext.coords(&e);
            assert_eq!(ext.element(&b, &a), e);
            assert_eq!(ext.projection.apply(&e), a);
        }
        // coordinates follow the twisted law
        let (fiber, base) = (c.fiber().clone(), c.base().clone());
        for a in base.elements().unwrap() {
            for a2 in base.elements().unwrap() {
                let b = vec![1];
                let lhs = ext.group.add(&ext.element(&b, &a), &ext.element(&fiber.zero(), &a2));
                let rhs = ext.element(&fiber.add(&b, c.value(&a, &a2)), &base.add(&a, &a2));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn group_mismatch_is_domain_error() {
        let a = carry_cocycle_mod(4, 2).unwrap();
        let b = carry_cocycle_mod(4, 4).unwrap();
        assert!(matches!(a.baer_sum(&b), Err(Error::Domain(_))));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let base = z(3);
        let fiber = z(3);
        let mut table = vec![vec![0]; 9];
        table[1 * 3 + 2] = vec![1];
        let c = Cocycle2::from_table(base, fiber, table).unwrap();
        assert!(!c.is_cocycle());
        assert!(c.is_coboundary().is_err());
    }

    #[test]
    fn json_shape() {
        let c = carry_cocycle_mod(2, 2).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"A":[2],"B":[2],"table":[[0],[0],[0],[1]]}"#);
        let back: Cocycle2<FinAbGroup> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn congruence_solver() {
        assert_eq!(solve_linear_congruence(4, 2, 6), Some(2));
        assert_eq!(solve_linear_congruence(4, 1, 6), None);
        assert_eq!(solve_linear_congruence(5, 0, 5), Some(0));
    }
}
