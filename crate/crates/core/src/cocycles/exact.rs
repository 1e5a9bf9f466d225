use std::cell::RefCell;
use std::collections::HashMap;

use super::cocycle::{Cocycle2, Extension};
use super::group::{Elem, FinAbGroup, Hom};
use super::snf::FiniteQuotient;
use crate::error::{domain, Error, Result};

/// `0 -> sub --incl--> mid --proj--> quot -> 0`, checked exact on construction.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub incl: Hom,
    pub proj: Hom,
}

impl ShortExactSequence {
    pub fn new(incl: Hom, proj: Hom) -> Result<Self> {
        if incl.target() != proj.source() {
            return domain("inclusion and projection do not meet in a common middle group");
        }
        if !incl.is_injective()? {
            return domain("first map is not injective");
        }
        if !proj.is_surjective()? {
            return domain("second map is not surjective");
        }
        if !incl.then(&proj)?.is_zero() {
            return domain("composite of the two maps is not zero");
        }
        let (s, m, q) = (incl.source().order(), incl.target().order(), proj.target().order());
        if s * q != m {
            return domain(format!("orders {s} * {q} != {m}: image of the first map is not the kernel"));
        }
        Ok(ShortExactSequence { incl, proj })
    }

    pub fn from_extension(ext: &Extension) -> Self {
        ShortExactSequence { incl: ext.embedding.clone(), proj: ext.projection.clone() }
    }

    pub fn sub(&self) -> &FinAbGroup {
        self.incl.source()
    }

    pub fn mid(&self) -> &FinAbGroup {
        self.incl.target()
    }

    pub fn quot(&self) -> &FinAbGroup {
        self.proj.target()
    }

    /// Set-theoretic section choosing the first preimage in index order.
    pub fn section(&self) -> Result<Vec<Elem>> {
        let q = self.quot();
        let mut out: Vec<Option<Elem>> = vec![None; q.checked_order()?];
        for m in self.mid().elements()? {
            let slot = &mut out[q.index(&self.proj.apply(&m))];
            if slot.is_none() {
                *slot = Some(m);
            }
        }
        out.into_iter()
            .map(|x| x.ok_or_else(|| Error::Inconsistent("projection is not surjective".into())))
            .collect()
    }

    /// Factor set `c(q, q') = incl^{-1}(s(q) + s(q') - s(q + q'))` for the
    /// section `s` of [`ShortExactSequence::section`].
    pub fn cocycle(&self) -> Result<Cocycle2<FinAbGroup>> {
        let sec = self.section()?;
        let inverse = inverse_table(&self.incl)?;
        let (mid, quot) = (self.mid(), self.quot());
        let failure = RefCell::new(None);
        let c = Cocycle2::from_fn(quot.clone(), self.sub().clone(), |a, b| {
            let s = |x: &[i64]| &sec[quot.index(x)];
            let d = mid.sub(&mid.add(s(a), s(b)), s(&quot.add(a, b)));
            match inverse.get(&d) {
                Some(i) => i.clone(),
                None => {
                    *failure.borrow_mut() = Some(d);
                    self.sub().zero()
                }
            }
        })?;
        match failure.into_inner() {
            Some(d) => Err(Error::Inconsistent(format!("section defect {d:?} is not in the image of the inclusion"))),
            None => Ok(c),
        }
    }
}

/// Lookup table inverting an injective homomorphism on its image.
pub fn inverse_table(h: &Hom) -> Result<HashMap<Elem, Elem>> {
    let mut map = HashMap::new();
    for x in h.source().elements()? {
        if map.insert(h.apply(&x), x).is_some() {
            return domain("map is not injective");
        }
    }
    Ok(map)
}

/// `target / image(h)` with its projection.
pub fn cokernel(h: &Hom) -> Result<(FinAbGroup, Hom)> {
    let target = h.target();
    let gens = target.rank();
    let mut relations: Vec<Vec<i128>> = Vec::new();
    for (k, &m) in target.orders().iter().enumerate() {
        let mut row = vec![0i128; gens];
        row[k] = m as i128;
        relations.push(row);
    }
    for img in h.images() {
        relations.push(img.iter().map(|&v| v as i128).collect());
    }
    let quotient = FiniteQuotient::new(gens, &relations)?;
    let images = (0..gens)
        .map(|k| {
            let mut x = vec![0i128; gens];
            x[k] = 1;
            quotient.project(&x)
        })
        .collect();
    let group = quotient.group.clone();
    let proj = Hom::new(target.clone(), group.clone(), images)?;
    Ok((group, proj))
}

/// Lift of each standard generator of `h.target()` through a surjection `h`.
pub fn generator_lifts(h: &Hom) -> Result<Vec<Elem>> {
    let target = h.target();
    let mut out: Vec<Option<Elem>> = vec![None; target.rank()];
    let wanted: HashMap<Elem, usize> = (0..target.rank()).map(|j| (target.generator(j), j)).collect();
    for x in h.source().elements()? {
        if let Some(&j) = wanted.get(&h.apply(&x)) {
            if out[j].is_none() {
                out[j] = Some(x);
            }
        }
    }
    out.into_iter().map(|x| x.ok_or_else(|| Error::Domain("map is not surjective".into()))).collect()
}

/// The unique homomorphism `Q -> T` with `result o proj = f`, given that `f`
/// kills the kernel of the surjection `proj`.
pub fn factor_through(proj: &Hom, f: &Hom) -> Result<Hom> {
    if proj.source() != f.source() {
        return domain("maps do not share a source");
    }
    let lifts = generator_lifts(proj)?;
    let induced = Hom::new(proj.target().clone(), f.target().clone(), lifts.iter().map(|x| f.apply(x)).collect())?;
    for x in proj.source().elements()? {
        if induced.apply(&proj.apply(&x)) != f.apply(&x) {
            return domain("map does not factor through the quotient");
        }
    }
    Ok(induced)
}

/// Builds a homomorphism from a full element table and checks additivity.
pub fn hom_from_table(source: &FinAbGroup, target: &FinAbGroup, table: &[Elem]) -> Result<Hom> {
    let images = (0..source.rank()).map(|j| table[source.index(&source.generator(j))].clone()).collect();
    let hom = Hom::new(source.clone(), target.clone(), images)?;
    for (i, x) in source.elements()?.iter().enumerate() {
        if hom.apply(x) != table[i] {
            return Err(Error::Inconsistent("element table is not additive".into()));
        }
    }
    Ok(hom)
}
