//! Finite modules `R^g / span(relations)` over finite rings, enumerated element
//! by element. These are the brute-force oracles behind cardinalities,
//! minimal generating sets and ideal actions.

use std::collections::BTreeSet;

use crate::error::{check_cap, Error, Result};
use crate::ring::arith::CommRing;
use crate::ring::table::FiniteRing;

/// Default cap on `|R|^g` for cokernel enumeration.
pub const AMBIENT_CAP: u128 = 1 << 20;

/// Default cap on `|M|` for per-element oracles.
pub const MODULE_CAP: u128 = 1 << 12;

/// Default node budget for the minimal generating set search.
pub const SEARCH_BUDGET: u64 = 2_000_000;

pub struct FiniteModule<'a> {
    ring: FiniteRing<'a>,
    g: usize,
    q: usize,
    /// Coset label of every vector code in `R^g`.
    label: Vec<u32>,
    /// One representative code per coset.
    reps: Vec<usize>,
}

impl<'a> FiniteModule<'a> {
    pub fn new(
        ring: FiniteRing<'a>,
        g: usize,
        relations: &[Vec<usize>],
        ambient_cap: u128,
    ) -> Result<Self> {
        let q = ring.size();
        let ambient = (q as u128)
            .checked_pow(g as u32)
            .ok_or(Error::Overflow("ambient module size"))?;
        check_cap("|R|^g", ambient, ambient_cap)?;
        let ambient = ambient as usize;
        let mut m = FiniteModule {
            ring,
            g,
            q,
            label: Vec::new(),
            reps: Vec::new(),
        };
        let mut span = vec![false; ambient];
        span[m.encode(&vec![m.ring.zero(); g])] = true;
        let mut members = vec![m.encode(&vec![m.ring.zero(); g])];
        for row in relations {
            let mut multiples: BTreeSet<usize> = BTreeSet::new();
            for r in 0..q {
                let v: Vec<usize> = row.iter().map(|x| m.ring.mul(&r, x)).collect();
                multiples.insert(m.encode(&v));
            }
            let current = members.clone();
            for s in current {
                for &t in &multiples {
                    let sum = m.add_codes(s, t);
                    if !span[sum] {
                        span[sum] = true;
                        members.push(sum);
                    }
                }
            }
        }
        let mut label = vec![u32::MAX; ambient];
        for code in 0..ambient {
            if label[code] == u32::MAX {
                let id = m.reps.len() as u32;
                m.reps.push(code);
                for &s in &members {
                    label[m.add_codes(code, s)] = id;
                }
            }
        }
        m.label = label;
        Ok(m)
    }

    pub fn encode(&self, v: &[usize]) -> usize {
        v.iter().rev().fold(0, |acc, &x| acc * self.q + x)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        (0..self.g)
            .map(|_| {
                let x = code % self.q;
                code /= self.q;
                x
            })
            .collect()
    }

    fn add_codes(&self, a: usize, b: usize) -> usize {
        let (u, v) = (self.decode(a), self.decode(b));
        let w: Vec<usize> = u.iter().zip(&v).map(|(x, y)| self.ring.add(x, y)).collect();
        self.encode(&w)
    }

    pub fn cardinality(&self) -> usize {
        self.reps.len()
    }

    pub fn generators(&self) -> usize {
        self.g
    }

    /// Label of a vector of `R^g`.
    pub fn class_of(&self, v: &[usize]) -> usize {
        self.label[self.encode(v)] as usize
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.label[self.add_codes(self.reps[a], self.reps[b])] as usize
    }

    pub fn scale(&self, r: usize, a: usize) -> usize {
        let v: Vec<usize> = self
            .decode(self.reps[a])
            .iter()
            .map(|x| self.ring.mul(&r, x))
            .collect();
        self.class_of(&v)
    }

    pub fn zero(&self) -> usize {
        self.label[0] as usize
    }

    /// Submodule generated by the given elements, as a membership vector.
    pub fn span(&self, elems: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.cardinality()];
        member[self.zero()] = true;
        let mut list = vec![self.zero()];
        for &x in elems {
            let cyclic: BTreeSet<usize> = (0..self.q).map(|r| self.scale(r, x)).collect();
            let current = list.clone();
            for s in current {
                for &c in &cyclic {
                    let t = self.add(s, c);
                    if !member[t] {
                        member[t] = true;
                        list.push(t);
                    }
                }
            }
        }
        member
    }

    /// `I·M` for an ideal given by its elements: images of vectors with all
    /// coordinates in `I`.
    pub fn ideal_times_module(&self, ideal: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.cardinality()];
        let k = ideal.len();
        let total = k.pow(self.g as u32);
        for mut idx in 0..total {
            let v: Vec<usize> = (0..self.g)
                .map(|_| {
                    let x = ideal[idx % k];
                    idx /= k;
                    x
                })
                .collect();
            member[self.class_of(&v)] = true;
        }
        member
    }
}

/// Sizes of all minimal generating sets found by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GensetSearch {
    pub sizes: BTreeSet<usize>,
    pub minimal_sets: u64,
    pub nodes: u64,
}

/// Exhaustive search for minimal generating sets.
///
/// Elements are grouped by the cyclic submodule they generate: swapping an
/// element for another generator of the same cyclic submodule leaves the span
/// of every subset unchanged, so minimality depends only on the classes, and a
/// minimal set never uses one class twice. The search walks sets of classes in
/// increasing order, keeps only irredundant sets (a hereditary property) and
/// stops extending a set once it generates, since every proper superset of a
/// generating set is redundant.
pub fn minimal_generating_sets(module: &FiniteModule<'_>, budget: u64) -> Result<GensetSearch> {
    let size = module.cardinality();
    let mut out = GensetSearch {
        sizes: BTreeSet::new(),
        minimal_sets: 0,
        nodes: 0,
    };
    if size == 1 {
        out.sizes.insert(0);
        out.minimal_sets = 1;
        return Ok(out);
    }
    let table: Vec<u16> = {
        let vecs: Vec<Vec<usize>> = module.reps.iter().map(|&c| module.decode(c)).collect();
        let mut t = vec![0u16; size * size];
        for a in 0..size {
            for b in a..size {
                let w: Vec<usize> = vecs[a]
                    .iter()
                    .zip(&vecs[b])
                    .map(|(x, y)| module.ring.add(x, y))
                    .collect();
                let s = module.class_of(&w) as u16;
                t[a * size + b] = s;
                t[b * size + a] = s;
            }
        }
        t
    };
    let zero = module.zero();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in 0..size {
        if x == zero {
            continue;
        }
        let mut cyclic: Vec<usize> = (0..module.q).map(|r| module.scale(r, x)).collect();
        cyclic.sort_unstable();
        cyclic.dedup();
        if seen.insert(cyclic.clone()) {
            classes.push(cyclic);
        }
    }

    let search = Search {
        size,
        table,
        classes,
        budget,
    };
    let mut base = Span::new(size);
    base.insert(zero);
    search.walk(0, &base, &mut Vec::new(), &mut out)?;
    Ok(out)
}

#[derive(Clone)]
struct Span {
    member: Vec<bool>,
    list: Vec<usize>,
}

impl Span {
    fn new(size: usize) -> Self {
        Span {
            member: vec![false; size],
            list: Vec::new(),
        }
    }

    fn insert(&mut self, x: usize) {
        if !self.member[x] {
            self.member[x] = true;
            self.list.push(x);
        }
    }
}

struct Search {
    size: usize,
    table: Vec<u16>,
    classes: Vec<Vec<usize>>,
    budget: u64,
}

impl Search {
    /// `a + C` for a submodule `a` and a cyclic submodule `C`.
    fn sum(&self, a: &Span, c: &[usize]) -> Span {
        let mut out = Span::new(self.size);
        for &x in &a.list {
            for &y in c {
                out.insert(self.table[x * self.size + y] as usize);
            }
        }
        out
    }

    /// `others[i]` is the span of the chosen classes other than the `i`-th.
    fn walk(
        &self,
        start: usize,
        span: &Span,
        others: &mut [(usize, Span)],
        out: &mut GensetSearch,
    ) -> Result<()> {
        for c in start..self.classes.len() {
            out.nodes += 1;
            if out.nodes > self.budget {
                return Err(Error::CapExceeded {
                    what: "minimal generating set search nodes",
                    limit: self.budget as u128,
                    actual: out.nodes as u128,
                });
            }
            let class = &self.classes[c];
            if class.iter().all(|&x| span.member[x]) {
                continue;
            }
            let mut next: Vec<(usize, Span)> = Vec::with_capacity(others.len() + 1);
            let mut irredundant = true;
            for (i, o) in others.iter() {
                let grown = self.sum(o, class);
                if self.classes[*i].iter().all(|&x| grown.member[x]) {
                    irredundant = false;
                    break;
                }
                next.push((*i, grown));
            }
            if !irredundant {
                continue;
            }
            next.push((c, span.clone()));
            let grown = self.sum(span, class);
            if grown.list.len() == self.size {
                out.sizes.insert(next.len());
                out.minimal_sets += 1;
            } else {
                self.walk(c + 1, &grown, &mut next, out)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::arith::ZModRing;

    fn zmod(n: u64) -> FiniteRing<'static> {
        FiniteRing::ZMod(ZModRing { n })
    }

    #[test]
    fn cokernel_cardinalities() {
        assert_eq!(
            FiniteModule::new(zmod(12), 1, &[vec![2]], AMBIENT_CAP)
                .unwrap()
                .cardinality(),
            2
        );
        assert_eq!(
            FiniteModule::new(zmod(12), 2, &[], AMBIENT_CAP)
                .unwrap()
                .cardinality(),
            144
        );
        assert_eq!(
            FiniteModule::new(zmod(12), 2, &[vec![2, 3]], AMBIENT_CAP)
                .unwrap()
                .cardinality(),
            12
        );
        assert_eq!(
            FiniteModule::new(zmod(5), 0, &[], AMBIENT_CAP)
                .unwrap()
                .cardinality(),
            1
        );
        assert!(FiniteModule::new(zmod(64), 4, &[], AMBIENT_CAP).is_err());
    }

    #[test]
    fn genset_examples() {
        let m = FiniteModule::new(zmod(4), 1, &[], AMBIENT_CAP).unwrap();
        let s = minimal_generating_sets(&m, SEARCH_BUDGET).unwrap();
        assert_eq!(s.sizes, BTreeSet::from([1]));
        // The units 1 and 3 generate the same cyclic submodule.
        assert_eq!(s.minimal_sets, 1);
        let m = FiniteModule::new(zmod(2), 2, &[], AMBIENT_CAP).unwrap();
        let s = minimal_generating_sets(&m, SEARCH_BUDGET).unwrap();
        assert_eq!(s.sizes, BTreeSet::from([2]));
        assert_eq!(s.minimal_sets, 3);
        let m = FiniteModule::new(zmod(3), 0, &[], AMBIENT_CAP).unwrap();
        assert_eq!(
            minimal_generating_sets(&m, SEARCH_BUDGET).unwrap().sizes,
            BTreeSet::from([0])
        );
    }

    #[test]
    fn non_local_ring_has_unequal_minimal_sets() {
        // Z/6 = Z/2 x Z/3: {1} and {2, 3} are both minimal.
        let m = FiniteModule::new(zmod(6), 1, &[], AMBIENT_CAP).unwrap();
        let s = minimal_generating_sets(&m, SEARCH_BUDGET).unwrap();
        assert_eq!(s.sizes, BTreeSet::from([1, 2]));
    }

    #[test]
    fn ideal_products() {
        let m = FiniteModule::new(zmod(12), 1, &[], AMBIENT_CAP).unwrap();
        let two: Vec<usize> = (0..12).step_by(2).collect();
        let im = m.ideal_times_module(&two);
        assert_eq!(im.iter().filter(|&&b| b).count(), 6);
    }
}
