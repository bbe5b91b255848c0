//! Finite T0 spaces presented by a specialization order.
//!
//! On a finite spectrum the Zariski closed sets are the up-sets of the
//! inclusion order on primes, the flat closed sets are the down-sets, and the
//! patch topology is discrete. Point sets are bit masks over point indices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::ordinal::Ordinal;

/// Hard limit on points, fixed by the `u64` mask representation.
pub const MAX_POINTS: usize = 64;

/// Limit for [`arbitrary_meet_of_flat_opens_is_open`], which scans all subsets.
pub const MEET_CHECK_CAP: usize = 15;

/// Mask with the low `k` bits set.
pub fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// A set of points of a [`SpectrumPoset`], stored as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        PointSet(it.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(move |&i| self.contains(i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Zariski,
    Flat,
    Patch,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 3] = [
        TopologyKind::Zariski,
        TopologyKind::Flat,
        TopologyKind::Patch,
    ];
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::Zariski => "zariski",
            TopologyKind::Flat => "flat",
            TopologyKind::Patch => "patch",
        })
    }
}

/// Finite poset of primes; `leq(p, q)` means `p ⊆ q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoset {
    labels: Vec<String>,
    /// `up[p]` is the mask of all `q` with `p <= q`.
    up: Vec<u64>,
}

impl SpectrumPoset {
    /// Builds the poset generated by `relations` (pairs `p <= q`), closing
    /// reflexively and transitively and rejecting cycles.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        check_cap("poset points", n as u128, MAX_POINTS as u128)?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Validation(format!(
                    "duplicate point identifier {l:?}"
                )));
            }
        }
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(p, q) in relations {
            if p >= n || q >= n {
                return Err(Error::Domain(format!(
                    "relation ({p},{q}) names an unknown point"
                )));
            }
            up[p] |= 1 << q;
        }
        // Warshall closure on rows.
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(Error::Validation(format!(
                        "order is not antisymmetric between {:?} and {:?}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(SpectrumPoset { labels, up })
    }

    pub fn antichain(labels: Vec<String>) -> Result<Self> {
        Self::from_relations(labels, &[])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> PointSet {
        PointSet(low_mask(self.len()))
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p] >> q & 1 == 1
    }

    /// Covering pairs `(p, q)`: `p < q` with nothing strictly between.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p != q
                    && self.leq(p, q)
                    && !(0..n).any(|r| r != p && r != q && self.leq(p, r) && self.leq(r, q))
                {
                    edges.push((p, q));
                }
            }
        }
        edges
    }

    fn check_subset(&self, s: PointSet) -> Result<()> {
        if s.0 & !self.full().0 != 0 {
            return Err(Error::Domain(format!(
                "point set {:#b} contains points outside a {}-point space",
                s.0,
                self.len()
            )));
        }
        Ok(())
    }

    /// Smallest up-set containing `s`.
    pub fn up_closure(&self, s: PointSet) -> Result<PointSet> {
        self.check_subset(s)?;
        Ok(PointSet(s.indices().fold(0, |m, p| m | self.up[p])))
    }

    /// Smallest down-set containing `s`.
    pub fn down_closure(&self, s: PointSet) -> Result<PointSet> {
        self.check_subset(s)?;
        let n = self.len();
        Ok(PointSet::from_indices(
            (0..n).filter(|&p| s.indices().any(|q| self.leq(p, q))),
        ))
    }

    pub fn is_closed(&self, s: PointSet, kind: TopologyKind) -> Result<bool> {
        Ok(match kind {
            TopologyKind::Zariski => self.up_closure(s)? == s,
            TopologyKind::Flat => self.down_closure(s)? == s,
            TopologyKind::Patch => {
                self.check_subset(s)?;
                true
            }
        })
    }

    pub fn is_open(&self, s: PointSet, kind: TopologyKind) -> Result<bool> {
        self.check_subset(s)?;
        self.is_closed(PointSet(self.full().0 & !s.0), kind)
    }

    /// Every closed set of the given topology; enumerates all subsets.
    pub fn closed_sets(&self, kind: TopologyKind) -> Result<Vec<PointSet>> {
        check_cap("closed-set enumeration points", self.len() as u128, 20)?;
        let mut out = Vec::new();
        for m in 0..=self.full().0 {
            if self.is_closed(PointSet(m), kind)? {
                out.push(PointSet(m));
            }
        }
        Ok(out)
    }

    /// Labels of the points in `s`, sorted.
    pub fn label_list(&self, s: PointSet) -> Vec<String> {
        let mut v: Vec<String> = s
            .indices()
            .filter(|&i| i < self.len())
            .map(|i| self.labels[i].clone())
            .collect();
        v.sort();
        v
    }
}

/// Target space of a point map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "alpha")]
pub enum Target {
    Discrete,
    WellFounded(Ordinal),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Discrete => f.write_str("discrete"),
            Target::WellFounded(a) => write!(f, "wellfounded({a})"),
        }
    }
}

/// A total assignment of ordinals to the points of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    source: SpectrumPoset,
    values: Vec<Ordinal>,
}

impl PointMap {
    pub fn new(source: SpectrumPoset, values: Vec<Ordinal>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::Validation(format!(
                "point map has {} values for {} points",
                values.len(),
                source.len()
            )));
        }
        Ok(PointMap { source, values })
    }

    pub fn source(&self) -> &SpectrumPoset {
        &self.source
    }

    pub fn values(&self) -> &[Ordinal] {
        &self.values
    }

    pub fn value(&self, p: usize) -> Ordinal {
        self.values[p]
    }

    fn preimage(&self, pred: impl Fn(Ordinal) -> bool) -> PointSet {
        PointSet::from_indices((0..self.values.len()).filter(|&p| pred(self.values[p])))
    }

    /// `p <= q` implies equal values.
    pub fn is_stable_along_specialization(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|p| (0..n).all(|q| !self.source.leq(p, q) || self.values[p] == self.values[q]))
    }
}

/// A closed or open preimage that failed, for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityFailure {
    /// The target value (discrete) or the closed-set threshold (well-founded).
    pub at: Ordinal,
    pub preimage: Vec<String>,
}

/// Continuity check with the first failing preimage.
pub fn continuity_witness(
    map: &PointMap,
    source_kind: TopologyKind,
    target: Target,
) -> Result<Option<ContinuityFailure>> {
    let space = &map.source;
    let mut attained: Vec<Ordinal> = map.values.clone();
    attained.sort();
    attained.dedup();
    match target {
        Target::Discrete => {
            for &v in &attained {
                let pre = map.preimage(|x| x == v);
                if !space.is_open(pre, source_kind)? {
                    return Ok(Some(ContinuityFailure {
                        at: v,
                        preimage: space.label_list(pre),
                    }));
                }
            }
        }
        Target::WellFounded(alpha) => {
            if let Some(&v) = attained.iter().find(|&&v| v >= alpha) {
                return Err(Error::Domain(format!(
                    "value {v} is not a point of {alpha}"
                )));
            }
            // Preimages of the closed set t change only at t = 0 and t = v+1.
            let mut thresholds = vec![Ordinal::ZERO, alpha];
            for &v in &attained {
                thresholds.push(v.succ()?);
            }
            thresholds.sort();
            thresholds.dedup();
            for t in thresholds {
                let pre = map.preimage(|x| x < t);
                if !space.is_closed(pre, source_kind)? {
                    return Ok(Some(ContinuityFailure {
                        at: t,
                        preimage: space.label_list(pre),
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_continuous(map: &PointMap, source_kind: TopologyKind, target: Target) -> Result<bool> {
    Ok(continuity_witness(map, source_kind, target)?.is_none())
}

/// Whether every intersection of flat-open sets is flat-open.
///
/// A family is closed under arbitrary intersections iff, for every subset
/// `S`, the intersection of all members containing `S` is again a member.
/// Those hulls are computed for all subsets at once by a superset sweep.
pub fn arbitrary_meet_of_flat_opens_is_open(space: &SpectrumPoset) -> Result<bool> {
    let n = space.len();
    check_cap("points for meet check", n as u128, MEET_CHECK_CAP as u128)?;
    let size = 1usize << n;
    let full = space.full().0;
    let mut member = vec![false; size];
    for (m, slot) in member.iter_mut().enumerate() {
        *slot = space.is_open(PointSet(m as u64), TopologyKind::Flat)?;
    }
    let mut hull: Vec<u64> = (0..size)
        .map(|m| if member[m] { m as u64 } else { full })
        .collect();
    for bit in 0..n {
        for m in 0..size {
            if m >> bit & 1 == 0 {
                hull[m] &= hull[m | 1 << bit];
            }
        }
    }
    Ok(hull.iter().all(|&h| member[h as usize]))
}

/// Direct spectrality axioms of a finite space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralCheck {
    pub t0: bool,
    pub quasi_compact: bool,
    pub qc_opens_meet_stable: bool,
    pub qc_opens_basis: bool,
    pub sober: bool,
}

impl SpectralCheck {
    pub fn is_spectral(&self) -> bool {
        self.t0
            && self.quasi_compact
            && self.qc_opens_meet_stable
            && self.qc_opens_basis
            && self.sober
    }
}

/// A finite topological space given by its closed sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    points: usize,
    closed: Vec<u64>,
}

impl FiniteTopology {
    pub fn from_closed_sets(points: usize, mut closed: Vec<u64>) -> Result<Self> {
        check_cap("topology points", points as u128, MAX_POINTS as u128)?;
        let full = low_mask(points);
        closed.sort_unstable();
        closed.dedup();
        if closed.iter().any(|&c| c & !full != 0) {
            return Err(Error::Validation("closed set outside the space".into()));
        }
        if closed.first() != Some(&0) || !closed.contains(&full) {
            return Err(Error::Validation(
                "closed sets must include the empty set and the space".into(),
            ));
        }
        for &a in &closed {
            for &b in &closed {
                if closed.binary_search(&(a | b)).is_err()
                    || closed.binary_search(&(a & b)).is_err()
                {
                    return Err(Error::Validation(
                        "closed sets not stable under union and intersection".into(),
                    ));
                }
            }
        }
        Ok(FiniteTopology { points, closed })
    }

    pub fn closed_sets(&self) -> &[u64] {
        &self.closed
    }

    pub fn closure(&self, m: u64) -> u64 {
        self.closed
            .iter()
            .filter(|&&c| c & m == m)
            .fold(low_mask(self.points), |a, &c| a & c)
    }

    fn is_irreducible(&self, c: u64) -> bool {
        if c == 0 {
            return false;
        }
        let proper: Vec<u64> = self
            .closed
            .iter()
            .copied()
            .filter(|&a| a != c && a & c == a)
            .collect();
        !proper.iter().any(|&a| proper.iter().any(|&b| a | b == c))
    }

    pub fn spectral_check(&self) -> SpectralCheck {
        let n = self.points;
        let full = low_mask(n);
        let point_closures: Vec<u64> = (0..n).map(|x| self.closure(1 << x)).collect();
        let t0 = (0..n).all(|x| (x + 1..n).all(|y| point_closures[x] != point_closures[y]));
        let opens: Vec<u64> = self.closed.iter().map(|&c| full & !c).collect();
        // Finitely many opens, so every open set is quasi-compact and the
        // quasi-compact opens are all opens.
        let qc_opens_meet_stable = opens
            .iter()
            .all(|&a| opens.iter().all(|&b| opens.contains(&(a & b))));
        let sober = self
            .closed
            .iter()
            .filter(|&&c| self.is_irreducible(c))
            .all(|&c| point_closures.iter().filter(|&&pc| pc == c).count() == 1);
        SpectralCheck {
            t0,
            quasi_compact: true,
            qc_opens_meet_stable,
            qc_opens_basis: true,
            sober,
        }
    }
}
