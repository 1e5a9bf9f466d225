use std::collections::HashSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Error, Result};

/// Element of a [`FinAbGroup`]: one reduced coordinate per cyclic factor.
pub type Elem = Vec<i64>;

/// `Z/m_1 + ... + Z/m_k`. The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

/// Enumeration guard for anything that lists all elements of a group.
pub const MAX_ENUMERATED: u64 = 1_000_000;

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&m| m == 0) {
            return domain("cyclic orders must be >= 1");
        }
        Ok(FinAbGroup { orders })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        FinAbGroup::new(vec![n])
    }

    pub fn trivial() -> Self {
        FinAbGroup { orders: Vec::new() }
    }

    /// `(Z/n)^r`.
    pub fn power(n: u64, r: usize) -> Result<Self> {
        FinAbGroup::new(vec![n; r])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Order, refusing groups too large to enumerate.
    pub fn checked_order(&self) -> Result<usize> {
        let mut acc: u64 = 1;
        for &m in &self.orders {
            acc = acc.checked_mul(m).filter(|&x| x <= MAX_ENUMERATED).ok_or_else(|| {
                Error::Limit(format!("group {:?} has more than {MAX_ENUMERATED} elements", self.orders))
            })?;
        }
        Ok(acc as usize)
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &m| acc.lcm(&m))
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.orders.len()]
    }

    pub fn generator(&self, j: usize) -> Elem {
        let mut e = self.zero();
        e[j] = 1 % self.orders[j] as i64;
        e
    }

    pub fn reduce(&self, x: &[i64]) -> Elem {
        x.iter().zip(&self.orders).map(|(&v, &m)| v.rem_euclid(m as i64)).collect()
    }

    pub fn reduce_wide(&self, x: &[i128]) -> Elem {
        x.iter().zip(&self.orders).map(|(&v, &m)| v.rem_euclid(m as i128) as i64).collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.orders.len() && x.iter().zip(&self.orders).all(|(&v, &m)| v >= 0 && (v as u64) < m)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &m)| (x + y).rem_euclid(m as i64)).collect()
    }

    pub fn neg(&self, a: &[i64]) -> Elem {
        a.iter().zip(&self.orders).map(|(&x, &m)| (-x).rem_euclid(m as i64)).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Elem {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &m)| ((k as i128 * x as i128).rem_euclid(m as i128)) as i64)
            .collect()
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Mixed-radix position of `x`, last coordinate varying fastest.
    pub fn index(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.orders).fold(0usize, |acc, (&v, &m)| acc * m as usize + v as usize)
    }

    pub fn element(&self, mut idx: usize) -> Elem {
        let mut out = vec![0; self.orders.len()];
        for (slot, &m) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        out
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let n = self.checked_order()?;
        Ok((0..n).map(|i| self.element(i)).collect())
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        FinAbGroup { orders: self.orders.iter().chain(&other.orders).copied().collect() }
    }
}

/// Homomorphism between finite abelian groups, given by the images of the
/// standard generators of the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hom {
    source: FinAbGroup,
    target: FinAbGroup,
    images: Vec<Elem>,
}

impl Hom {
    /// Checks that every image lies in the target and is killed by the order
    /// of its generator.
    pub fn new(source: FinAbGroup, target: FinAbGroup, images: Vec<Elem>) -> Result<Self> {
        if images.len() != source.rank() {
            return shape(format!("{} generator images for a source of rank {}", images.len(), source.rank()));
        }
        for (j, img) in images.iter().enumerate() {
            if !target.contains(img) {
                return shape(format!("image {img:?} of generator {j} is not a reduced target element"));
            }
            if !target.is_zero(&target.scale(source.orders[j] as i64, img)) {
                return domain(format!("generator {j} of order {} cannot map to {img:?}", source.orders[j]));
            }
        }
        Ok(Hom { source, target, images })
    }

    pub fn identity(g: &FinAbGroup) -> Hom {
        Hom { source: g.clone(), target: g.clone(), images: (0..g.rank()).map(|j| g.generator(j)).collect() }
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Hom {
        Hom { source: source.clone(), target: target.clone(), images: vec![target.zero(); source.rank()] }
    }

    /// Multiplication by `k` on `Z/a -> Z/b`-style cyclic groups of equal rank.
    pub fn scalar(source: &FinAbGroup, target: &FinAbGroup, k: i64) -> Result<Hom> {
        if source.rank() != target.rank() {
            return shape("scalar map needs groups of equal rank");
        }
        let images = (0..source.rank())
            .map(|j| {
                let mut e = target.zero();
                e[j] = k;
                target.reduce(&e)
            })
            .collect();
        Hom::new(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: &[i64]) -> Elem {
        let mut acc = vec![0i128; self.target.rank()];
        for (&c, img) in x.iter().zip(&self.images) {
            for (slot, &v) in acc.iter_mut().zip(img) {
                *slot += c as i128 * v as i128;
            }
        }
        self.target.reduce_wide(&acc)
    }

    /// `other o self`.
    pub fn then(&self, other: &Hom) -> Result<Hom> {
        if self.target != other.source {
            return shape("composition of non-matching homomorphisms");
        }
        let images = self.images.iter().map(|img| other.apply(img)).collect();
        Hom::new(self.source.clone(), other.target.clone(), images)
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|e| self.target.is_zero(e))
    }

    pub fn kernel_size(&self) -> Result<usize> {
        Ok(self.source.elements()?.iter().filter(|x| self.target.is_zero(&self.apply(x))).count())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel_size()? == 1)
    }

    pub fn image_size(&self) -> Result<usize> {
        let set: HashSet<Elem> = self.source.elements()?.iter().map(|x| self.apply(x)).collect();
        Ok(set.len())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image_size()? == self.target.checked_order()?)
    }
}
