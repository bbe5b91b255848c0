//! Ordinals below ω·2 and the well-founded topology.
//!
//! The closed subsets of an ordinal α are exactly the ordinals β ≤ α. Points
//! of α are the ordinals β < α, so on a finite α the closed sets are the
//! initial segments `{0, .., β-1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finspace::{low_mask, FiniteTopology, SpectralCheck};

/// Largest finite α for which the topology is materialized as explicit bit sets.
pub const MATERIALIZE_CAP: u64 = 64;

/// Bound for the exhaustive family enumerations in [`topology_report`].
pub const EXHAUSTIVE_CAP: u64 = 12;

/// An ordinal `ω·omega_part + finite_part` with `omega_part ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    omega_part: u8,
    finite_part: u64,
}

impl Ordinal {
    pub const ZERO: Ordinal = Ordinal::nat(0);
    pub const OMEGA: Ordinal = Ordinal::omega_plus(0);

    pub fn new(omega_part: u8, finite_part: u64) -> Result<Self> {
        if omega_part > 1 {
            return Err(Error::Range(format!(
                "omega coefficient {omega_part} outside the supported range below w*2"
            )));
        }
        Ok(Ordinal {
            omega_part,
            finite_part,
        })
    }

    pub const fn nat(n: u64) -> Self {
        Ordinal {
            omega_part: 0,
            finite_part: n,
        }
    }

    pub const fn omega_plus(k: u64) -> Self {
        Ordinal {
            omega_part: 1,
            finite_part: k,
        }
    }

    pub fn omega_part(&self) -> u8 {
        self.omega_part
    }

    pub fn finite_part(&self) -> u64 {
        self.finite_part
    }

    pub fn is_finite(&self) -> bool {
        self.omega_part == 0
    }

    /// The natural number this ordinal denotes, if it is finite.
    pub fn as_natural(&self) -> Option<u64> {
        self.is_finite().then_some(self.finite_part)
    }

    pub fn succ(&self) -> Result<Ordinal> {
        let finite_part = self
            .finite_part
            .checked_add(1)
            .ok_or_else(|| Error::Range(format!("successor of {self} overflows")))?;
        Ok(Ordinal {
            omega_part: self.omega_part,
            finite_part,
        })
    }

    /// The ordinal whose successor is `self`, if any.
    pub fn pred(&self) -> Option<Ordinal> {
        (self.finite_part > 0).then(|| Ordinal {
            omega_part: self.omega_part,
            finite_part: self.finite_part - 1,
        })
    }

    /// True iff `self` is not a successor. Zero counts as a limit ordinal.
    pub fn is_limit(&self) -> bool {
        self.finite_part == 0
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.omega_part, self.finite_part) {
            (0, n) => write!(f, "{n}"),
            (_, 0) => write!(f, "w"),
            (_, k) => write!(f, "w+{k}"),
        }
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid ordinal token {s:?}"));
        let digits = |t: &str| -> Result<u64> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        if s == "w" {
            Ok(Ordinal::OMEGA)
        } else if let Some(rest) = s.strip_prefix("w+") {
            Ok(Ordinal::omega_plus(digits(rest)?))
        } else {
            Ok(Ordinal::nat(digits(s)?))
        }
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The ordinal `alpha` carrying its well-founded topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WellFoundedSpace {
    pub alpha: Ordinal,
}

impl WellFoundedSpace {
    pub fn new(alpha: Ordinal) -> Self {
        WellFoundedSpace { alpha }
    }

    /// Closure of the point `beta`, as the closed set it names.
    pub fn closure_of_point(&self, beta: Ordinal) -> Result<Ordinal> {
        if beta >= self.alpha {
            return Err(Error::Domain(format!(
                "{beta} is not a point of {}",
                self.alpha
            )));
        }
        Ok(beta.succ()?.min(self.alpha))
    }

    /// The generic point of the closed set `beta`, absent for limits (including 0).
    pub fn generic_point_of_closed(&self, beta: Ordinal) -> Result<Option<Ordinal>> {
        if beta > self.alpha {
            return Err(Error::Domain(format!(
                "{beta} is not a closed subset of {}",
                self.alpha
            )));
        }
        Ok(beta.pred())
    }

    /// Closed sets are totally ordered, so any nonempty one is irreducible.
    pub fn is_irreducible_closed(&self, beta: Ordinal) -> bool {
        beta != Ordinal::ZERO
    }

    /// Explicit closed-set family, for finite `alpha` up to [`MATERIALIZE_CAP`].
    pub fn finite_topology(&self) -> Result<FiniteTopology> {
        let n = self.alpha.as_natural().ok_or_else(|| {
            Error::Domain(format!(
                "{} is infinite and cannot be materialized",
                self.alpha
            ))
        })?;
        crate::error::check_cap("ordinal points", n as u128, MATERIALIZE_CAP as u128)?;
        let closed = (0..=n).map(|b| low_mask(b as usize)).collect();
        FiniteTopology::from_closed_sets(n as usize, closed)
    }
}

/// Outcome of the spectrality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralVerdict {
    pub alpha: Ordinal,
    pub spectral: bool,
    /// Direct axiom check, present for finite `alpha` up to [`MATERIALIZE_CAP`].
    pub direct: Option<SpectralCheck>,
    pub witness: Option<String>,
}

/// Spectral iff `alpha` is a natural number. Finite cases are re-derived from
/// the axioms and must agree with the formula.
pub fn is_spectral(alpha: Ordinal) -> SpectralVerdict {
    let formula = alpha.is_finite();
    if !formula {
        let space = WellFoundedSpace::new(alpha);
        let irreducible = space.is_irreducible_closed(Ordinal::OMEGA);
        let generic = space
            .generic_point_of_closed(Ordinal::OMEGA)
            .expect("w <= alpha for infinite alpha");
        let witness = format!(
            "closed set w is irreducible ({irreducible}) and has no generic point ({})",
            generic.is_none()
        );
        return SpectralVerdict {
            alpha,
            spectral: false,
            direct: None,
            witness: Some(witness),
        };
    }
    let direct = WellFoundedSpace::new(alpha)
        .finite_topology()
        .ok()
        .map(|t| t.spectral_check());
    if let Some(check) = &direct {
        assert_eq!(
            check.is_spectral(),
            formula,
            "direct spectrality check disagrees on {alpha}"
        );
    }
    SpectralVerdict {
        alpha,
        spectral: true,
        direct,
        witness: None,
    }
}

/// One named property of the well-founded topology and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &'static str, holds: bool, detail: impl Into<String>) -> Self {
        PropertyCheck {
            name,
            holds,
            detail: detail.into(),
        }
    }
}

/// Exhaustive check of the topology axioms and point-set properties of a
/// finite `alpha <= EXHAUSTIVE_CAP`, computed on explicit bit sets and
/// compared against the ordinal formulas.
pub fn topology_report(alpha: u64) -> Result<Vec<PropertyCheck>> {
    crate::error::check_cap("exhaustive ordinal", alpha as u128, EXHAUSTIVE_CAP as u128)?;
    let space = WellFoundedSpace::new(Ordinal::nat(alpha));
    let n = alpha as usize;
    let full = low_mask(n);
    let closed: Vec<u64> = (0..=n).map(low_mask).collect();
    let is_closed = |m: u64| closed.contains(&m);
    let mut out = Vec::new();

    let pairwise = closed
        .iter()
        .all(|&a| closed.iter().all(|&b| is_closed(a & b) && is_closed(a | b)));
    out.push(PropertyCheck::new(
        "axioms",
        is_closed(0) && is_closed(full) && pairwise,
        "empty set and whole space closed, closed sets stable under finite unions and intersections",
    ));

    // Nonempty families of closed sets, indexed by a mask over `closed`.
    let families = 1u64 << closed.len();
    let (mut meet_ok, mut join_ok, mut min_ok, mut compact_ok) = (true, true, true, true);
    for fam in 1..families {
        let members = (0..closed.len()).filter(|i| fam >> i & 1 == 1);
        let (mut meet, mut join) = (full, 0u64);
        let (mut lo, mut hi) = (usize::MAX, 0usize);
        for i in members {
            meet &= closed[i];
            join |= closed[i];
            lo = lo.min(i);
            hi = hi.max(i);
        }
        meet_ok &= meet == closed[lo] && is_closed(meet);
        join_ok &= join == closed[hi] && is_closed(join);
        min_ok &= closed
            .iter()
            .any(|&c| c == meet && fam >> c.count_ones() & 1 == 1);
        // Complements form an open family; if it covers, one member must.
        let union_of_opens = full & !meet;
        if union_of_opens == full {
            compact_ok &= closed
                .iter()
                .enumerate()
                .any(|(i, &c)| fam >> i & 1 == 1 && full & !c == full);
        }
    }
    out.push(PropertyCheck::new(
        "intersections",
        meet_ok,
        "every nonempty family of closed sets meets in its minimum",
    ));
    out.push(PropertyCheck::new(
        "unions",
        join_ok,
        "every family of closed sets unites in its maximum",
    ));
    out.push(PropertyCheck::new(
        "quasi-compact",
        compact_ok,
        "every open cover has a single-member subcover",
    ));
    out.push(PropertyCheck::new(
        "noetherian",
        min_ok,
        "every nonempty family of closed sets has a least member",
    ));

    let closure_of = |m: u64| {
        closed
            .iter()
            .filter(|&&c| c & m == m)
            .fold(full, |a, &c| a & c)
    };
    let mut closure_ok = true;
    for b in 0..n {
        let explicit = closure_of(1 << b);
        let formula = space.closure_of_point(Ordinal::nat(b as u64))?;
        closure_ok &= explicit == low_mask(formula.finite_part() as usize);
        closure_ok &= closure_of(explicit) == explicit;
    }
    out.push(PropertyCheck::new(
        "closure-successor",
        closure_ok,
        "closure of each point is its successor and closure is idempotent",
    ));

    let mut generic_ok = true;
    let mut irreducible_ok = true;
    for (b, &c) in closed.iter().enumerate() {
        let generic: Vec<usize> = (0..n).filter(|&x| closure_of(1 << x) == c).collect();
        let formula = space.generic_point_of_closed(Ordinal::nat(b as u64))?;
        generic_ok &= match formula {
            Some(k) => generic == [k.finite_part() as usize],
            None => generic.is_empty(),
        };
        let reducible = closed
            .iter()
            .filter(|&&a| a != c && a & c == a)
            .any(|&a| closed.iter().any(|&d| d != c && d & c == d && a | d == c));
        let explicit = c != 0 && !reducible;
        irreducible_ok &= explicit == space.is_irreducible_closed(Ordinal::nat(b as u64));
    }
    out.push(PropertyCheck::new(
        "generic-points",
        generic_ok,
        "successor closed sets have exactly one generic point, limits none",
    ));
    out.push(PropertyCheck::new(
        "irreducible",
        irreducible_ok,
        "a closed set is irreducible iff it is nonempty",
    ));

    let opens: Vec<u64> = closed.iter().map(|&c| full & !c).collect();
    let mut qc_ok = true;
    for &u in &opens {
        let inside: Vec<u64> = opens.iter().copied().filter(|&o| o & u == o).collect();
        for fam in 1u64..(1 << inside.len()) {
            let members: Vec<u64> = (0..inside.len())
                .filter(|i| fam >> i & 1 == 1)
                .map(|i| inside[i])
                .collect();
            let cover = members.iter().fold(0, |a, &o| a | o);
            if cover == u && !members.contains(&u) {
                qc_ok = false;
            }
        }
    }
    out.push(PropertyCheck::new(
        "quasi-compact-opens",
        qc_ok,
        "every open cover of an open set contains that set",
    ));

    let discrete = closed.len() as u128 == 1u128 << n;
    out.push(PropertyCheck::new(
        "discreteness",
        discrete == (alpha <= 1),
        format!("discrete={discrete}"),
    ));
    if alpha == 2 {
        out.push(PropertyCheck::new(
            "sierpinski",
            closed == [0b00, 0b01, 0b11],
            "closed sets of 2 are {}, {0}, {0,1}",
        ));
    }

    let mut subspace_ok = true;
    for b in 0..n {
        let beta = low_mask(b);
        let mut induced: Vec<u64> = closed.iter().map(|&c| c & beta).collect();
        induced.sort_unstable();
        induced.dedup();
        let own: Vec<u64> = (0..=b).map(low_mask).collect();
        subspace_ok &= induced == own;
    }
    out.push(PropertyCheck::new(
        "subspace",
        subspace_ok,
        "subspace topology on each beta < alpha is its well-founded topology",
    ));

    let verdict = is_spectral(Ordinal::nat(alpha));
    let direct = verdict.direct.as_ref().map(|d| d.is_spectral());
    out.push(PropertyCheck::new(
        "spectral",
        verdict.spectral && direct == Some(true),
        format!("formula={} direct={direct:?}", verdict.spectral),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn succ_examples() {
        assert_eq!(Ordinal::nat(1).succ().unwrap(), Ordinal::nat(2));
        assert_eq!(Ordinal::ZERO.succ().unwrap(), Ordinal::nat(1));
        assert_eq!(Ordinal::OMEGA.succ().unwrap(), Ordinal::omega_plus(1));
        assert!(matches!(
            Ordinal::nat(u64::MAX).succ(),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn limit_examples() {
        assert!(Ordinal::ZERO.is_limit());
        assert!(!Ordinal::nat(7).is_limit());
        assert!(Ordinal::OMEGA.is_limit());
        assert!(!Ordinal::omega_plus(3).is_limit());
    }

    #[test]
    fn order_puts_omega_above_naturals() {
        assert!(Ordinal::nat(u64::MAX) < Ordinal::OMEGA);
        assert!(Ordinal::OMEGA < Ordinal::omega_plus(1));
        assert!(Ordinal::new(2, 0).is_err());
    }

    #[test]
    fn closure_examples() {
        let s = WellFoundedSpace::new(Ordinal::nat(3));
        assert_eq!(
            s.closure_of_point(Ordinal::nat(1)).unwrap(),
            Ordinal::nat(2)
        );
        let s = WellFoundedSpace::new(Ordinal::nat(5));
        assert_eq!(s.closure_of_point(Ordinal::ZERO).unwrap(), Ordinal::nat(1));
        let s = WellFoundedSpace::new(Ordinal::omega_plus(1));
        assert_eq!(
            s.closure_of_point(Ordinal::OMEGA).unwrap(),
            Ordinal::omega_plus(1)
        );
        assert!(matches!(
            s.closure_of_point(Ordinal::omega_plus(1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn generic_point_examples() {
        let s = WellFoundedSpace::new(Ordinal::omega_plus(1));
        assert_eq!(
            s.generic_point_of_closed(Ordinal::nat(3)).unwrap(),
            Some(Ordinal::nat(2))
        );
        assert_eq!(s.generic_point_of_closed(Ordinal::ZERO).unwrap(), None);
        assert_eq!(s.generic_point_of_closed(Ordinal::OMEGA).unwrap(), None);
        assert!(s.generic_point_of_closed(Ordinal::omega_plus(2)).is_err());
    }

    #[test]
    fn irreducible_examples() {
        let s = WellFoundedSpace::new(Ordinal::omega_plus(1));
        assert!(!s.is_irreducible_closed(Ordinal::ZERO));
        assert!(s.is_irreducible_closed(Ordinal::nat(1)));
        assert!(s.is_irreducible_closed(Ordinal::OMEGA));
    }

    #[test]
    fn spectral_examples() {
        let v = is_spectral(Ordinal::nat(4));
        assert!(v.spectral);
        assert!(v.direct.unwrap().is_spectral());
        let v = is_spectral(Ordinal::OMEGA);
        assert!(!v.spectral);
        assert!(v.witness.unwrap().contains("no generic point"));
        let v = is_spectral(Ordinal::ZERO);
        assert!(v.spectral && v.direct.unwrap().is_spectral());
        assert!(!is_spectral(Ordinal::omega_plus(1)).spectral);
    }

    #[test]
    fn tokens_parse_and_print() {
        for (s, o) in [
            ("0", Ordinal::ZERO),
            ("17", Ordinal::nat(17)),
            ("w", Ordinal::OMEGA),
            ("w+1", Ordinal::omega_plus(1)),
        ] {
            assert_eq!(s.parse::<Ordinal>().unwrap(), o);
            assert_eq!(o.to_string(), s);
        }
        for bad in ["", "w+", "w1", "-1", "w+-2", "omega", " 3", "w+0x1"] {
            assert!(bad.parse::<Ordinal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn report_holds_up_to_cap() {
        for alpha in 0..=EXHAUSTIVE_CAP {
            for check in topology_report(alpha).unwrap() {
                assert!(check.holds, "alpha={alpha}: {check:?}");
            }
        }
        assert!(topology_report(EXHAUSTIVE_CAP + 1).is_err());
    }
}
