//! Ring backends with enumerable spectra.
//!
//! * `ZMod(n)`: the integers modulo `n`.
//! * `ZLoc(S)`: the integers localized at the finite prime set `S`, i.e. with
//!   every integer coprime to all of `S` inverted. A semi-local PID whose
//!   spectrum is the zero ideal plus one maximal ideal per prime in `S`.
//! * `Table`: an explicit finite ring.
//!
//! Matrix entries are `i64` throughout: residues for `ZMod`, integers for
//! `ZLoc` and element indices for `Table`.

pub mod arith;
pub mod table;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::SpectrumPoset;
use crate::linalg::gaussian_rank;
use arith::{factorize, is_prime, Rationals, ZModRing};
use table::{ElementSet, FiniteRing, TableRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingInstance {
    ZMod { n: u64 },
    ZLoc { primes: Vec<u64> },
    Table(TableRing),
}

/// A prime ideal, tagged per backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeIdeal {
    /// `pZ/nZ` for a prime `p | n`.
    ZMod { p: u64 },
    /// The zero ideal of `ZLoc(S)`.
    Generic,
    /// The maximal ideal generated by `p ∈ S`.
    ZLoc { p: u64 },
    /// Explicit element subset of a table ring.
    Table { elements: ElementSet },
}

/// Result of localizing at a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Localized {
    Ring(RingInstance),
    /// The fraction field of `ZLoc(S)`.
    Rationals,
}

impl RingInstance {
    pub fn zmod(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("ZMod modulus must be at least 1".into()));
        }
        if n > i64::MAX as u64 {
            return Err(Error::Validation(
                "ZMod modulus exceeds the entry range".into(),
            ));
        }
        Ok(RingInstance::ZMod { n })
    }

    pub fn zloc(primes: &[u64]) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::Validation("ZLoc needs at least one prime".into()));
        }
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!(
                "ZLoc prime {} listed twice",
                w[0]
            )));
        }
        if let Some(&p) = sorted.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::Validation(format!("ZLoc entry {p} is not prime")));
        }
        Ok(RingInstance::ZLoc { primes: sorted })
    }

    pub fn table(t: TableRing) -> Self {
        RingInstance::Table(t)
    }

    pub fn name(&self) -> String {
        match self {
            RingInstance::ZMod { n } => format!("Z/{n}"),
            RingInstance::ZLoc { primes } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                format!("Z_({})", ps.join(","))
            }
            RingInstance::Table(t) => format!("table[{}]", t.size()),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, RingInstance::ZLoc { .. })
    }

    /// Element-index arithmetic for the finite backends.
    pub fn finite(&self) -> Option<FiniteRing<'_>> {
        match self {
            RingInstance::ZMod { n } => Some(FiniteRing::ZMod(ZModRing { n: *n })),
            RingInstance::Table(t) => Some(FiniteRing::Table(t)),
            RingInstance::ZLoc { .. } => None,
        }
    }

    /// Brings an entry into canonical form, rejecting out-of-range table indices.
    pub fn normalize_entry(&self, x: i64) -> Result<i64> {
        match self {
            RingInstance::ZMod { n } => Ok(x.rem_euclid(*n as i64)),
            RingInstance::ZLoc { .. } => Ok(x),
            RingInstance::Table(t) => {
                if x < 0 || x as usize >= t.size() {
                    Err(Error::Validation(format!(
                        "table entry {x} is not an element index below {}",
                        t.size()
                    )))
                } else {
                    Ok(x)
                }
            }
        }
    }

    pub fn zero_entry(&self) -> i64 {
        match self {
            RingInstance::Table(t) => t.zero_elem() as i64,
            _ => 0,
        }
    }

    pub fn one_entry(&self) -> i64 {
        match self {
            RingInstance::ZMod { n } => (1 % n) as i64,
            RingInstance::ZLoc { .. } => 1,
            RingInstance::Table(t) => t.one_elem() as i64,
        }
    }

    pub fn neg_entry(&self, x: i64) -> i64 {
        use arith::CommRing;
        match self {
            RingInstance::ZMod { n } => {
                ZModRing { n: *n }.neg(&ZModRing { n: *n }.reduce(x)) as i64
            }
            RingInstance::ZLoc { .. } => -x,
            RingInstance::Table(t) => t.neg(&(x as usize)) as i64,
        }
    }

    pub fn add_entry(&self, a: i64, b: i64) -> Result<i64> {
        use arith::CommRing;
        match self {
            RingInstance::ZMod { n } => {
                let z = ZModRing { n: *n };
                Ok(z.add(&z.reduce(a), &z.reduce(b)) as i64)
            }
            RingInstance::ZLoc { .. } => a.checked_add(b).ok_or(Error::Overflow("entry sum")),
            RingInstance::Table(t) => Ok(t.add(&(a as usize), &(b as usize)) as i64),
        }
    }

    pub fn mul_entry(&self, a: i64, b: i64) -> Result<i64> {
        use arith::CommRing;
        match self {
            RingInstance::ZMod { n } => {
                let z = ZModRing { n: *n };
                Ok(z.mul(&z.reduce(a), &z.reduce(b)) as i64)
            }
            RingInstance::ZLoc { .. } => a.checked_mul(b).ok_or(Error::Overflow("entry product")),
            RingInstance::Table(t) => Ok(t.mul(&(a as usize), &(b as usize)) as i64),
        }
    }

    pub fn is_zero_entry(&self, x: i64) -> bool {
        match self {
            RingInstance::ZMod { n } => x.rem_euclid(*n as i64) == 0,
            RingInstance::ZLoc { .. } => x == 0,
            RingInstance::Table(t) => x as usize == t.zero_elem(),
        }
    }

    /// All primes, without duplicates, in a fixed order.
    pub fn enum_primes(&self) -> Result<Vec<PrimeIdeal>> {
        Ok(match self {
            RingInstance::ZMod { n } => factorize(*n)
                .into_iter()
                .map(|(p, _)| PrimeIdeal::ZMod { p })
                .collect(),
            RingInstance::ZLoc { primes } => std::iter::once(PrimeIdeal::Generic)
                .chain(primes.iter().map(|&p| PrimeIdeal::ZLoc { p }))
                .collect(),
            RingInstance::Table(t) => t
                .primes()?
                .into_iter()
                .map(|elements| PrimeIdeal::Table { elements })
                .collect(),
        })
    }

    pub fn prime_label(&self, p: &PrimeIdeal) -> String {
        match (self, p) {
            (RingInstance::Table(t), PrimeIdeal::Table { elements }) => t.label_of(elements),
            _ => p.to_string(),
        }
    }

    fn check_prime(&self, p: &PrimeIdeal) -> Result<()> {
        let ok = match (self, p) {
            (RingInstance::ZMod { n }, PrimeIdeal::ZMod { p }) => is_prime(*p) && n % p == 0,
            (RingInstance::ZLoc { .. }, PrimeIdeal::Generic) => true,
            (RingInstance::ZLoc { primes }, PrimeIdeal::ZLoc { p }) => primes.contains(p),
            (RingInstance::Table(t), PrimeIdeal::Table { elements }) => {
                elements.windows(2).all(|w| w[0] < w[1])
                    && elements.last().is_none_or(|&e| e < t.size())
                    && t.ideal_generated(elements) == *elements
                    && t.is_prime_ideal(elements)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{p} is not a prime of {}",
                self.name()
            )))
        }
    }

    /// Whether `p ⊆ q` as ideals.
    pub fn prime_contained(&self, p: &PrimeIdeal, q: &PrimeIdeal) -> bool {
        match (p, q) {
            // pZ/nZ ⊆ qZ/nZ iff q | p.
            (PrimeIdeal::ZMod { p }, PrimeIdeal::ZMod { p: q }) => p % q == 0,
            (PrimeIdeal::Generic, _) => true,
            (PrimeIdeal::ZLoc { .. }, PrimeIdeal::Generic) => false,
            (PrimeIdeal::ZLoc { p }, PrimeIdeal::ZLoc { p: q }) => p % q == 0,
            (PrimeIdeal::Table { elements: a }, PrimeIdeal::Table { elements: b }) => {
                a.iter().all(|x| b.binary_search(x).is_ok())
            }
            _ => false,
        }
    }

    /// The spectrum ordered by inclusion, points in `enum_primes` order.
    pub fn specialization_order(&self) -> Result<SpectrumPoset> {
        let primes = self.enum_primes()?;
        let labels = primes.iter().map(|p| self.prime_label(p)).collect();
        let mut rel = Vec::new();
        for (i, p) in primes.iter().enumerate() {
            for (j, q) in primes.iter().enumerate() {
                if i != j && self.prime_contained(p, q) {
                    rel.push((i, j));
                }
            }
        }
        SpectrumPoset::from_relations(labels, &rel)
    }

    /// Ring elements generating `p`.
    pub fn prime_generators(&self, p: &PrimeIdeal) -> Result<Vec<i64>> {
        self.check_prime(p)?;
        Ok(match p {
            PrimeIdeal::ZMod { p } | PrimeIdeal::ZLoc { p } => vec![*p as i64],
            PrimeIdeal::Generic => vec![],
            PrimeIdeal::Table { elements } => elements.iter().map(|&e| e as i64).collect(),
        })
    }

    pub fn residue_field(&self, p: &PrimeIdeal) -> Result<ResidueField> {
        self.check_prime(p)?;
        Ok(match (self, p) {
            (_, PrimeIdeal::ZMod { p }) | (_, PrimeIdeal::ZLoc { p }) => ResidueField {
                characteristic: *p,
                size: Some(*p),
                repr: Repr::Prime(*p),
            },
            (_, PrimeIdeal::Generic) => ResidueField {
                characteristic: 0,
                size: None,
                repr: Repr::Rationals,
            },
            (RingInstance::Table(t), PrimeIdeal::Table { elements }) => {
                let (field, projection) = t.quotient(elements)?;
                if !field.is_field() {
                    return Err(Error::Domain(format!(
                        "quotient by {} is not a field",
                        t.label_of(elements)
                    )));
                }
                ResidueField {
                    characteristic: field.characteristic(),
                    size: Some(field.size() as u64),
                    repr: Repr::Table { field, projection },
                }
            }
            _ => unreachable!("check_prime matched the backend"),
        })
    }

    pub fn localize(&self, p: &PrimeIdeal) -> Result<Localized> {
        self.check_prime(p)?;
        Ok(match (self, p) {
            (RingInstance::ZMod { n }, PrimeIdeal::ZMod { p }) => {
                let mut q = 1;
                let mut m = *n;
                while m % p == 0 {
                    m /= p;
                    q *= p;
                }
                Localized::Ring(RingInstance::ZMod { n: q })
            }
            (RingInstance::ZLoc { .. }, PrimeIdeal::ZLoc { p }) => {
                Localized::Ring(RingInstance::ZLoc { primes: vec![*p] })
            }
            (RingInstance::ZLoc { .. }, PrimeIdeal::Generic) => Localized::Rationals,
            (RingInstance::Table(t), PrimeIdeal::Table { elements }) => {
                Localized::Ring(RingInstance::Table(t.local_component(elements)?.0))
            }
            _ => unreachable!("check_prime matched the backend"),
        })
    }

    /// The S-part of `x`: the largest divisor of `x` built from primes in `S`.
    pub fn s_part(&self, x: u128) -> u128 {
        let RingInstance::ZLoc { primes } = self else {
            return x;
        };
        if x == 0 {
            return 0;
        }
        let mut out = 1;
        let mut m = x;
        for &p in primes {
            let p = p as u128;
            while m.is_multiple_of(p) {
                m /= p;
                out *= p;
            }
        }
        out
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeIdeal::ZMod { p } | PrimeIdeal::ZLoc { p } => write!(f, "({p})"),
            PrimeIdeal::Generic => f.write_str("(0)"),
            PrimeIdeal::Table { elements } => {
                let e: Vec<String> = elements.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", e.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Prime(u64),
    Rationals,
    Table {
        field: TableRing,
        projection: Vec<usize>,
    },
}

/// The residue field at a prime, with the map from ring entries into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueField {
    /// 0 for the rationals.
    pub characteristic: u64,
    /// `None` for the rationals.
    pub size: Option<u64>,
    #[serde(skip)]
    repr: Repr,
}

impl ResidueField {
    pub fn is_rationals(&self) -> bool {
        self.size.is_none()
    }

    /// Degree over the prime field, for finite fields.
    pub fn degree(&self) -> Option<u32> {
        let (c, mut s) = (self.characteristic, self.size?);
        let mut d = 0;
        while s > 1 {
            if s % c != 0 {
                return None;
            }
            s /= c;
            d += 1;
        }
        Some(d)
    }

    /// Rank of a matrix of ring entries after reduction into the field.
    pub fn rank(&self, rows: &[Vec<i64>]) -> usize {
        match &self.repr {
            Repr::Prime(p) => {
                let z = ZModRing { n: *p };
                gaussian_rank(
                    &z,
                    rows.iter()
                        .map(|r| r.iter().map(|&x| z.reduce(x)).collect())
                        .collect(),
                )
            }
            Repr::Rationals => gaussian_rank(
                &Rationals,
                rows.iter()
                    .map(|r| {
                        r.iter()
                            .map(|&x| BigRational::from_integer(BigInt::from(x)))
                            .collect()
                    })
                    .collect(),
            ),
            Repr::Table { field, projection } => gaussian_rank(
                field,
                rows.iter()
                    .map(|r| r.iter().map(|&x| projection[x as usize]).collect())
                    .collect(),
            ),
        }
    }
}

/// An ideal given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub ring: RingInstance,
    pub generators: Vec<i64>,
}

impl Ideal {
    pub fn new(ring: RingInstance, generators: Vec<i64>) -> Result<Self> {
        let generators = generators
            .into_iter()
            .map(|g| ring.normalize_entry(g))
            .collect::<Result<_>>()?;
        Ok(Ideal { ring, generators })
    }

    /// Member element indices, for the finite backends.
    pub fn elements(&self) -> Result<ElementSet> {
        match &self.ring {
            RingInstance::ZMod { n } => {
                let n = *n;
                let g = self.generators.iter().fold(n, |g, &x| {
                    num_integer::gcd(g, x.rem_euclid(n as i64) as u64)
                });
                Ok((0..n).step_by(g as usize).map(|x| x as usize).collect())
            }
            RingInstance::Table(t) => {
                let gens: Vec<usize> = self.generators.iter().map(|&x| x as usize).collect();
                Ok(t.ideal_generated(&gens))
            }
            RingInstance::ZLoc { .. } => {
                Err(Error::Domain("ideals of ZLoc are not enumerable".into()))
            }
        }
    }

    pub fn contains(&self, x: i64) -> Result<bool> {
        match &self.ring {
            RingInstance::ZLoc { .. } => {
                let g = self
                    .generators
                    .iter()
                    .fold(0u128, |g, &y| num_integer::gcd(g, y.unsigned_abs() as u128));
                let d = self.ring.s_part(g);
                Ok(if d == 0 {
                    x == 0
                } else {
                    (x.unsigned_abs() as u128).is_multiple_of(d)
                })
            }
            _ => {
                let x = self.ring.normalize_entry(x)? as usize;
                Ok(self.elements()?.binary_search(&x).is_ok())
            }
        }
    }
}
