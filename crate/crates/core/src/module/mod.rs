//! Finitely presented modules `coker(R^k -> R^g)`: fiber dimensions, the rank
//! map, support, classification and the `M = pM` test.

pub mod finite;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::finspace::{PointMap, PointSet, SpectrumPoset};
use crate::linalg::smith_invariants;
use crate::ordinal::Ordinal;
use crate::ring::arith::factorize;
use crate::ring::{Ideal, PrimeIdeal, RingInstance};
use finite::{minimal_generating_sets, FiniteModule, GensetSearch};

pub use finite::{AMBIENT_CAP, MODULE_CAP, SEARCH_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    ring: RingInstance,
    generators: usize,
    relations: Vec<Vec<i64>>,
}

/// The fiber dimension at every prime, as a map on the spectrum poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankMap {
    pub primes: Vec<PrimeIdeal>,
    pub map: PointMap,
}

impl RankMap {
    pub fn values(&self) -> Vec<usize> {
        self.map
            .values()
            .iter()
            .map(|v| v.as_natural().expect("fiber dimensions are finite") as usize)
            .collect()
    }

    pub fn poset(&self) -> &SpectrumPoset {
        self.map.source()
    }
}

/// The module localized at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSummary {
    pub prime: String,
    pub fiber: usize,
    /// `|M_p|` and `|R_p|` for finite backends.
    pub cardinality: Option<u128>,
    pub ring_cardinality: Option<u128>,
    pub free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleClassification {
    /// Rank of the free part; `None` when a table module is not free.
    pub free_rank: Option<usize>,
    /// Local parts of invariant factors, for the integer backends.
    pub torsion_invariants: Vec<u128>,
    pub is_free: bool,
    pub is_projective: bool,
    /// Identified with projectivity on these backends.
    pub is_flat: bool,
    pub is_locally_free: bool,
    pub cardinality: Option<u128>,
    pub local: Vec<LocalSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GensetSummary {
    pub sizes: BTreeSet<usize>,
    pub fiber: usize,
    pub minimal_sets: u64,
    pub cardinality: usize,
}

/// Caps for the enumerating oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub ambient: u128,
    pub module: u128,
    pub search: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ambient: AMBIENT_CAP,
            module: MODULE_CAP,
            search: SEARCH_BUDGET,
        }
    }
}

fn checked_product<I: IntoIterator<Item = u128>>(it: I) -> Result<u128> {
    it.into_iter()
        .try_fold(1u128, |acc, x| acc.checked_mul(x))
        .ok_or(Error::Overflow("module cardinality"))
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    base.checked_pow(exp as u32)
        .ok_or(Error::Overflow("module cardinality"))
}

impl Presentation {
    pub fn new(ring: RingInstance, generators: usize, relations: Vec<Vec<i64>>) -> Result<Self> {
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != generators {
                    return Err(Error::Validation(format!(
                        "relation {i} has length {}, expected {generators}",
                        row.len()
                    )));
                }
                row.into_iter().map(|x| ring.normalize_entry(x)).collect()
            })
            .collect::<Result<_>>()?;
        Ok(Presentation {
            ring,
            generators,
            relations,
        })
    }

    pub fn free(ring: RingInstance, rank: usize) -> Self {
        Presentation {
            ring,
            generators: rank,
            relations: Vec::new(),
        }
    }

    /// `coker(diag(d_1, ..., d_k))`.
    pub fn diagonal(ring: RingInstance, diag: &[i64]) -> Result<Self> {
        let zero = ring.zero_entry();
        let rows = (0..diag.len())
            .map(|i| {
                (0..diag.len())
                    .map(|j| if i == j { diag[i] } else { zero })
                    .collect()
            })
            .collect();
        Presentation::new(ring, diag.len(), rows)
    }

    pub fn ring(&self) -> &RingInstance {
        &self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn fiber_dim(&self, p: &PrimeIdeal) -> Result<usize> {
        let field = self.ring.residue_field(p)?;
        Ok(self.generators - field.rank(&self.relations))
    }

    pub fn rank_map(&self) -> Result<RankMap> {
        let primes = self.ring.enum_primes()?;
        let values = primes
            .iter()
            .map(|p| Ok(Ordinal::nat(self.fiber_dim(p)? as u64)))
            .collect::<Result<Vec<_>>>()?;
        let map = PointMap::new(self.ring.specialization_order()?, values)?;
        Ok(RankMap { primes, map })
    }

    /// Primes with nonzero fiber, indexed as in `enum_primes`.
    pub fn support(&self) -> Result<PointSet> {
        let rm = self.rank_map()?;
        Ok(PointSet::from_indices(
            rm.values()
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d > 0)
                .map(|(i, _)| i),
        ))
    }

    fn finite_relations(&self) -> Vec<Vec<usize>> {
        self.relations
            .iter()
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect()
    }

    /// Brute-force enumeration of the cokernel, finite backends only.
    pub fn enumerate(&self, ambient_cap: u128) -> Result<FiniteModule<'_>> {
        let ring = self
            .ring
            .finite()
            .ok_or_else(|| Error::Domain(format!("{} is not finite", self.ring.name())))?;
        FiniteModule::new(ring, self.generators, &self.finite_relations(), ambient_cap)
    }

    /// Whether the module is zero, decided without enumeration where possible.
    pub fn is_zero(&self, caps: Caps) -> Result<bool> {
        match &self.ring {
            RingInstance::ZLoc { .. } => {
                let inv = smith_invariants(&self.relations, self.generators)?;
                Ok(inv.len() == self.generators
                    && inv
                        .iter()
                        .all(|&d| d != 0 && self.ring.s_part(d as u128) == 1))
            }
            RingInstance::ZMod { .. } => Ok(self.zmod_invariants()?.iter().all(|&d| d == 1)),
            RingInstance::Table(_) => Ok(self.enumerate(caps.ambient)?.cardinality() == 1),
        }
    }

    /// Smith invariants of `[A; n I]`, all nonzero, `g` of them.
    fn zmod_invariants(&self) -> Result<Vec<i128>> {
        let RingInstance::ZMod { n } = self.ring else {
            unreachable!("ZMod only");
        };
        self.invariants_mod(n)
    }

    fn invariants_mod(&self, q: u64) -> Result<Vec<i128>> {
        let mut rows = self.relations.clone();
        for i in 0..self.generators {
            let mut r = vec![0; self.generators];
            r[i] = q as i64;
            rows.push(r);
        }
        smith_invariants(&rows, self.generators)
    }

    pub fn classify(&self) -> Result<ModuleClassification> {
        self.classify_with(Caps::default())
    }

    pub fn classify_with(&self, caps: Caps) -> Result<ModuleClassification> {
        match &self.ring {
            RingInstance::ZLoc { primes } => self.classify_zloc(primes),
            RingInstance::ZMod { n } => self.classify_zmod(*n),
            RingInstance::Table(_) => self.classify_table(caps),
        }
    }

    fn classify_zloc(&self, primes: &[u64]) -> Result<ModuleClassification> {
        let inv = smith_invariants(&self.relations, self.generators)?;
        let nonzero: Vec<u128> = inv
            .iter()
            .filter(|&&d| d != 0)
            .map(|&d| d as u128)
            .collect();
        let free_rank = self.generators - nonzero.len();
        let torsion: Vec<u128> = nonzero
            .iter()
            .map(|&d| self.ring.s_part(d))
            .filter(|&s| s != 1)
            .collect();
        let mut local = vec![LocalSummary {
            prime: PrimeIdeal::Generic.to_string(),
            fiber: free_rank,
            cardinality: None,
            ring_cardinality: None,
            free: true,
        }];
        for &p in primes {
            let divisible = torsion.iter().filter(|&&t| t % p as u128 == 0).count();
            local.push(LocalSummary {
                prime: PrimeIdeal::ZLoc { p }.to_string(),
                fiber: free_rank + divisible,
                cardinality: None,
                ring_cardinality: None,
                free: divisible == 0,
            });
        }
        let projective = torsion.is_empty();
        Ok(ModuleClassification {
            free_rank: Some(free_rank),
            torsion_invariants: torsion,
            is_free: projective,
            is_projective: projective,
            is_flat: projective,
            is_locally_free: projective,
            cardinality: None,
            local,
        })
    }

    fn classify_zmod(&self, n: u64) -> Result<ModuleClassification> {
        let global = self.zmod_invariants()?;
        let cardinality = checked_product(global.iter().map(|&d| d as u128))?;
        let free_rank = if n == 1 {
            0
        } else {
            global.iter().filter(|&&d| d == n as i128).count()
        };
        let mut torsion = Vec::new();
        let mut local = Vec::new();
        for (p, v) in factorize(n) {
            let q = p.pow(v);
            let inv = self.invariants_mod(q)?;
            torsion.extend(
                inv.iter()
                    .filter(|&&d| d != 1 && d != q as i128)
                    .map(|&d| d as u128),
            );
            let fiber = self.fiber_dim(&PrimeIdeal::ZMod { p })?;
            let card = checked_product(inv.iter().map(|&d| d as u128))?;
            let ring_card = q as u128;
            local.push(LocalSummary {
                prime: PrimeIdeal::ZMod { p }.to_string(),
                fiber,
                cardinality: Some(card),
                ring_cardinality: Some(ring_card),
                free: card == checked_pow(ring_card, fiber)?,
            });
        }
        torsion.sort_unstable();
        let projective = local.iter().all(|l| l.free);
        Ok(ModuleClassification {
            free_rank: Some(free_rank),
            is_free: torsion.is_empty()
                && projective
                && local.windows(2).all(|w| w[0].fiber == w[1].fiber),
            torsion_invariants: torsion,
            is_projective: projective,
            is_flat: projective,
            is_locally_free: projective,
            cardinality: Some(cardinality),
            local,
        })
    }

    fn classify_table(&self, caps: Caps) -> Result<ModuleClassification> {
        let RingInstance::Table(t) = &self.ring else {
            unreachable!("table only");
        };
        let cardinality = self.enumerate(caps.ambient)?.cardinality() as u128;
        let mut local = Vec::new();
        for p in self.ring.enum_primes()? {
            let PrimeIdeal::Table { elements } = &p else {
                unreachable!("table primes");
            };
            let (ring, projection) = t.local_component(elements)?;
            let rows: Vec<Vec<i64>> = self
                .relations
                .iter()
                .map(|r| r.iter().map(|&x| projection[x as usize] as i64).collect())
                .collect();
            let ring_card = ring.size() as u128;
            let local_module = Presentation::new(RingInstance::Table(ring), self.generators, rows)?;
            let card = local_module.enumerate(caps.ambient)?.cardinality() as u128;
            let fiber = self.fiber_dim(&p)?;
            local.push(LocalSummary {
                prime: self.ring.prime_label(&p),
                fiber,
                cardinality: Some(card),
                ring_cardinality: Some(ring_card),
                free: card == checked_pow(ring_card, fiber)?,
            });
        }
        let projective = local.iter().all(|l| l.free);
        let constant = local.windows(2).all(|w| w[0].fiber == w[1].fiber);
        let is_free = projective && constant;
        let free_rank = if is_free {
            Some(local.first().map_or(0, |l| l.fiber))
        } else {
            None
        };
        Ok(ModuleClassification {
            free_rank,
            torsion_invariants: Vec::new(),
            is_free,
            is_projective: projective,
            is_flat: projective,
            is_locally_free: projective,
            cardinality: Some(cardinality),
            local,
        })
    }

    /// `M / pM` as a presentation: the relations plus `x e_j` for every
    /// generator `x` of `p` and every basis vector `e_j`.
    pub fn quotient_by_prime(&self, p: &PrimeIdeal) -> Result<Presentation> {
        let gens = self.ring.prime_generators(p)?;
        let zero = self.ring.zero_entry();
        let mut rows = self.relations.clone();
        for &x in &gens {
            for j in 0..self.generators {
                let mut r = vec![zero; self.generators];
                r[j] = x;
                rows.push(r);
            }
        }
        Presentation::new(self.ring.clone(), self.generators, rows)
    }

    #[allow(non_snake_case)]
    pub fn is_pM_equal_M(&self, p: &PrimeIdeal) -> Result<bool> {
        self.quotient_by_prime(p)?.is_zero(Caps::default())
    }

    /// Exhaustive minimal generating sets over a local finite ring.
    pub fn minimal_gensets_oracle(&self, caps: Caps) -> Result<GensetSummary> {
        let primes = self.ring.enum_primes()?;
        let [p] = &primes[..] else {
            return Err(Error::Domain(format!(
                "{} is not local: {} primes",
                self.ring.name(),
                primes.len()
            )));
        };
        let module = self.enumerate(caps.ambient)?;
        check_cap("|M|", module.cardinality() as u128, caps.module)?;
        let GensetSearch {
            sizes,
            minimal_sets,
            ..
        } = minimal_generating_sets(&module, caps.search)?;
        Ok(GensetSummary {
            sizes,
            fiber: self.fiber_dim(p)?,
            minimal_sets,
            cardinality: module.cardinality(),
        })
    }

    /// Compares `∩ (I_a M)` with `(∩ I_a) M` by enumeration.
    pub fn ideal_action_intersection_check(
        &self,
        ideals: &[Ideal],
        require_projective: bool,
        caps: Caps,
    ) -> Result<bool> {
        if ideals.is_empty() {
            return Err(Error::Domain("empty family of ideals".into()));
        }
        if let Some(i) = ideals.iter().find(|i| i.ring != self.ring) {
            return Err(Error::Domain(format!(
                "ideal over {} used with a module over {}",
                i.ring.name(),
                self.ring.name()
            )));
        }
        if require_projective && !self.classify_with(caps)?.is_projective {
            return Err(Error::Domain("module is not projective".into()));
        }
        let module = self.enumerate(caps.ambient)?;
        check_cap("|M|", module.cardinality() as u128, caps.module)?;
        let sets = ideals
            .iter()
            .map(|i| i.elements())
            .collect::<Result<Vec<_>>>()?;
        let mut meet = sets[0].clone();
        for s in &sets[1..] {
            meet.retain(|x| s.binary_search(x).is_ok());
        }
        let mut lhs = vec![true; module.cardinality()];
        for s in &sets {
            for (l, m) in lhs.iter_mut().zip(module.ideal_times_module(s)) {
                *l &= m;
            }
        }
        Ok(lhs == module.ideal_times_module(&meet))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::TopologyKind;
    use crate::ring::table::TableRing;

    fn zmod(n: u64) -> RingInstance {
        RingInstance::zmod(n).unwrap()
    }

    fn zloc(ps: &[u64]) -> RingInstance {
        RingInstance::zloc(ps).unwrap()
    }

    #[test]
    fn fiber_examples() {
        let m = Presentation::free(zmod(12), 2);
        for p in zmod(12).enum_primes().unwrap() {
            assert_eq!(m.fiber_dim(&p).unwrap(), 2);
        }
        let m = Presentation::diagonal(zloc(&[2, 3]), &[6]).unwrap();
        assert_eq!(m.rank_map().unwrap().values(), vec![0, 1, 1]);
        let m = Presentation::new(zmod(12), 1, vec![vec![2]]).unwrap();
        assert_eq!(m.fiber_dim(&PrimeIdeal::ZMod { p: 2 }).unwrap(), 1);
        assert_eq!(m.fiber_dim(&PrimeIdeal::ZMod { p: 3 }).unwrap(), 0);
        assert!(m.fiber_dim(&PrimeIdeal::ZMod { p: 5 }).is_err());
    }

    #[test]
    fn rank_map_and_support_examples() {
        assert_eq!(
            Presentation::free(zloc(&[2, 3]), 0)
                .rank_map()
                .unwrap()
                .values(),
            vec![0, 0, 0]
        );
        assert_eq!(
            Presentation::free(zmod(12), 3).rank_map().unwrap().values(),
            vec![3, 3]
        );
        let m = Presentation::new(zmod(12), 1, vec![vec![2]]).unwrap();
        assert_eq!(m.support().unwrap(), PointSet::from_indices([0]));
        assert_eq!(
            Presentation::free(zloc(&[2, 3]), 1).support().unwrap(),
            PointSet(0b111)
        );
        assert!(Presentation::free(zmod(12), 0)
            .support()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Presentation::new(zmod(4), 2, vec![vec![1]]),
            Err(Error::Validation(_))
        ));
        let t = RingInstance::table(TableRing::zmod(3).unwrap());
        assert!(Presentation::new(t, 1, vec![vec![3]]).is_err());
        let m = Presentation::new(zmod(4), 1, vec![vec![-1]]).unwrap();
        assert_eq!(m.relations(), &[vec![3]]);
    }

    #[test]
    fn classify_examples() {
        let c = Presentation::diagonal(zloc(&[2]), &[4, 6])
            .unwrap()
            .classify()
            .unwrap();
        assert_eq!(c.torsion_invariants, vec![2, 4]);
        assert_eq!(c.free_rank, Some(0));
        assert!(!c.is_projective && !c.is_free);
        for r in [
            zloc(&[2, 3]),
            zmod(12),
            RingInstance::table(TableRing::zmod(6).unwrap()),
        ] {
            let c = Presentation::free(r.clone(), 2).classify().unwrap();
            assert_eq!(c.free_rank, Some(2), "{}", r.name());
            assert!(c.is_free && c.is_projective && c.is_flat && c.is_locally_free);
            let z = Presentation::free(r, 0).classify().unwrap();
            assert!(z.is_projective && z.is_free);
            assert_eq!(z.free_rank, Some(0));
        }
    }

    #[test]
    fn zmod_projective_not_free() {
        // Z/12 · 3 ≅ Z/4 is projective, with fibers 1 at (2) and 0 at (3).
        let c = Presentation::new(zmod(12), 1, vec![vec![4]])
            .unwrap()
            .classify()
            .unwrap();
        assert!(c.is_projective && !c.is_free);
        assert_eq!(c.cardinality, Some(4));
        assert_eq!(c.torsion_invariants, Vec::<u128>::new());
        // Z/2 over Z/4 is not projective.
        let c = Presentation::new(zmod(4), 1, vec![vec![2]])
            .unwrap()
            .classify()
            .unwrap();
        assert!(!c.is_projective);
        assert_eq!(c.torsion_invariants, vec![2]);
    }

    #[test]
    fn table_classification_matches_zmod() {
        for n in 2..=12u64 {
            for d in 0..n as i64 {
                let a = Presentation::new(zmod(n), 1, vec![vec![d]])
                    .unwrap()
                    .classify()
                    .unwrap();
                let t = RingInstance::table(TableRing::zmod(n as usize).unwrap());
                let b = Presentation::new(t, 1, vec![vec![d]])
                    .unwrap()
                    .classify()
                    .unwrap();
                assert_eq!(a.cardinality, b.cardinality, "n={n} d={d}");
                assert_eq!(a.is_projective, b.is_projective, "n={n} d={d}");
                assert_eq!(a.is_free, b.is_free, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn pm_equal_m_examples() {
        let m = Presentation::new(zloc(&[2, 3]), 1, vec![vec![2]]).unwrap();
        assert!(m.is_pM_equal_M(&PrimeIdeal::ZLoc { p: 3 }).unwrap());
        assert!(!m.is_pM_equal_M(&PrimeIdeal::ZLoc { p: 2 }).unwrap());
        assert!(!m.is_pM_equal_M(&PrimeIdeal::Generic).unwrap());
        let z = Presentation::free(zloc(&[2, 3]), 0);
        for p in zloc(&[2, 3]).enum_primes().unwrap() {
            assert!(z.is_pM_equal_M(&p).unwrap());
        }
        let m = Presentation::new(zmod(12), 1, vec![vec![2]]).unwrap();
        assert!(!m.is_pM_equal_M(&PrimeIdeal::ZMod { p: 2 }).unwrap());
        assert!(m.is_pM_equal_M(&PrimeIdeal::ZMod { p: 3 }).unwrap());
    }

    #[test]
    fn genset_oracle_examples() {
        let s = Presentation::free(zmod(4), 1)
            .minimal_gensets_oracle(Caps::default())
            .unwrap();
        assert_eq!((s.sizes.clone(), s.fiber), (BTreeSet::from([1]), 1));
        let s = Presentation::free(zmod(2), 2)
            .minimal_gensets_oracle(Caps::default())
            .unwrap();
        assert_eq!((s.sizes.clone(), s.fiber), (BTreeSet::from([2]), 2));
        let s = Presentation::free(zmod(9), 0)
            .minimal_gensets_oracle(Caps::default())
            .unwrap();
        assert_eq!((s.sizes.clone(), s.fiber), (BTreeSet::from([0]), 0));
        assert!(Presentation::free(zmod(6), 1)
            .minimal_gensets_oracle(Caps::default())
            .is_err());
    }

    #[test]
    fn ideal_action_examples() {
        let r = zmod(12);
        let ideals = [
            Ideal::new(r.clone(), vec![2]).unwrap(),
            Ideal::new(r.clone(), vec![3]).unwrap(),
        ];
        assert!(Presentation::free(r.clone(), 1)
            .ideal_action_intersection_check(&ideals, true, Caps::default())
            .unwrap());
        let unit = [Ideal::new(r.clone(), vec![1]).unwrap()];
        let m = Presentation::new(r, 2, vec![vec![2, 4]]).unwrap();
        assert!(m
            .ideal_action_intersection_check(&unit, false, Caps::default())
            .unwrap());
        let r4 = zmod(4);
        let twos = [
            Ideal::new(r4.clone(), vec![2]).unwrap(),
            Ideal::new(r4.clone(), vec![2]).unwrap(),
        ];
        assert!(Presentation::free(r4, 2)
            .ideal_action_intersection_check(&twos, true, Caps::default())
            .unwrap());
    }

    #[test]
    fn non_projective_module_can_break_ideal_intersections() {
        // M = Z/4 ⊕ Z/2 over Z/8 is not projective; hypotheses are enforced.
        let r = zmod(8);
        let m = Presentation::diagonal(r.clone(), &[4, 2]).unwrap();
        let ideals = [Ideal::new(r.clone(), vec![2]).unwrap()];
        assert!(m
            .ideal_action_intersection_check(&ideals, true, Caps::default())
            .is_err());
    }

    #[test]
    fn projective_support_is_clopen() {
        let m = Presentation::new(zmod(12), 1, vec![vec![4]]).unwrap();
        assert!(m.classify().unwrap().is_projective);
        let s = m.support().unwrap();
        let poset = zmod(12).specialization_order().unwrap();
        for kind in TopologyKind::ALL {
            assert!(poset.is_closed(s, kind).unwrap() && poset.is_open(s, kind).unwrap());
        }
    }
}
