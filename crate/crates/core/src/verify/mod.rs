//! Instance-level verification suites: each takes a module, an ordinal or a
//! multilinear table and checks one claim, reporting pass, fail or vacuous
//! (hypothesis unmet) with structured evidence.

pub mod corpus;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{
    base_change_fiber_check, delta_kernel_is_zero, ext_presentation, MultilinearTable,
};
use crate::finspace::{
    arbitrary_meet_of_flat_opens_is_open, continuity_witness, Target, TopologyKind,
};
use crate::module::{ModuleClassification, Presentation, RankMap};
use crate::ordinal::{is_spectral, topology_report, Ordinal, WellFoundedSpace, EXHAUSTIVE_CAP};
pub use corpus::{
    default_corpus, generate_corpus, generate_modules, generate_tables, negative_controls, Instance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    /// Projective: fiber zero at p iff M = pM.
    Th11,
    /// Projective: support is clopen in both topologies.
    Th22,
    /// Locally free: support of the n-th exterior power is {rank >= n};
    /// fibers of exterior powers are binomials of fibers everywhere.
    Lemma33,
    /// Projective: rank map continuous into discrete naturals.
    Prop2,
    /// Locally free and patch continuous: Zariski and flat continuous.
    Lemma566,
    /// Flat over a ring with finitely many minimal or maximal primes: patch
    /// continuous rank map and projective.
    Prop1,
    /// Projective: rank map continuous into the well-founded naturals.
    Prop300,
    /// Flat: projective iff patch continuous into the well-founded naturals.
    Thm721000,
    /// Well-founded topology: closures, generic points, irreducibility and
    /// the axioms.
    Theorem1,
    /// Well-founded topology is spectral iff alpha is finite.
    Th190,
    /// Flat opens are closed under arbitrary intersections; projective rank
    /// maps are continuous into `w+1`.
    Lemma400,
    /// Multilinear tables: alternating implies skew, alternating iff
    /// adjacent-alternating; exterior powers of projectives stay projective.
    Appendix,
}

impl SuiteId {
    pub const ALL: [SuiteId; 12] = [
        SuiteId::Th11,
        SuiteId::Th22,
        SuiteId::Lemma33,
        SuiteId::Prop2,
        SuiteId::Lemma566,
        SuiteId::Prop1,
        SuiteId::Prop300,
        SuiteId::Thm721000,
        SuiteId::Theorem1,
        SuiteId::Th190,
        SuiteId::Lemma400,
        SuiteId::Appendix,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteId::Th11 => "th11",
            SuiteId::Th22 => "th22",
            SuiteId::Lemma33 => "lemma33",
            SuiteId::Prop2 => "prop2",
            SuiteId::Lemma566 => "lemma566",
            SuiteId::Prop1 => "prop1",
            SuiteId::Prop300 => "prop300",
            SuiteId::Thm721000 => "thm721000",
            SuiteId::Theorem1 => "theorem1",
            SuiteId::Th190 => "th190",
            SuiteId::Lemma400 => "lemma400",
            SuiteId::Appendix => "appendix",
        }
    }

    pub fn applies_to(&self, instance: &Instance) -> bool {
        match instance {
            Instance::Ordinal(_) => matches!(self, SuiteId::Theorem1 | SuiteId::Th190),
            Instance::Table(_) => matches!(self, SuiteId::Appendix),
            Instance::Module(_) => !matches!(self, SuiteId::Theorem1 | SuiteId::Th190),
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    pub data: Value,
}

impl Witness {
    pub fn new(label: impl Into<String>, data: Value) -> Self {
        Witness {
            label: label.into(),
            data,
        }
    }
}

/// Label of the witness recorded when a non-locally-free module's rank map is
/// patch continuous but not Zariski continuous.
pub const NECESSITY_WITNESS: &str = "hypothesis-necessity witness";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub suite: SuiteId,
    pub instance: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub runtime_us: u64,
}

impl Verdict {
    pub fn has_witness(&self, label: &str) -> bool {
        self.witnesses.iter().any(|w| w.label == label)
    }
}

/// Outcome before timing and labelling are attached.
struct Outcome {
    status: Status,
    witnesses: Vec<Witness>,
    notes: Vec<String>,
}

impl Outcome {
    fn new(status: Status) -> Self {
        Outcome {
            status,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn judged(ok: bool) -> Self {
        Outcome::new(if ok { Status::Pass } else { Status::Fail })
    }

    fn witness(mut self, label: impl Into<String>, data: Value) -> Self {
        self.witnesses.push(Witness::new(label, data));
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

const FLATNESS_NOTE: &str =
    "flatness is identified with projectivity for finitely generated modules over these backends";
const PATCH_NOTE: &str =
    "patch topology on a finite spectrum is discrete, so patch continuity holds unconditionally";

pub fn run_suite(id: SuiteId, instance: &Instance) -> Result<Verdict> {
    let start = Instant::now();
    let outcome = match (id, instance) {
        (SuiteId::Theorem1, Instance::Ordinal(a)) => ordinal_topology(*a)?,
        (SuiteId::Th190, Instance::Ordinal(a)) => ordinal_spectrality(*a)?,
        (SuiteId::Appendix, Instance::Table(t)) => alternating_tables(t),
        (_, Instance::Module(m)) if id.applies_to(instance) => {
            let ctx = ModuleContext::new(m)?;
            match id {
                SuiteId::Th11 => fiber_vs_pm(&ctx)?,
                SuiteId::Th22 => clopen_support(&ctx)?,
                SuiteId::Lemma33 => exterior_support(&ctx)?,
                SuiteId::Prop2 => discrete_continuity(&ctx)?,
                SuiteId::Lemma566 => patch_implies_zariski(&ctx)?,
                SuiteId::Prop1 => flat_is_projective(&ctx)?,
                SuiteId::Prop300 => wellfounded_continuity(&ctx)?,
                SuiteId::Thm721000 => projective_iff_patch(&ctx)?,
                SuiteId::Lemma400 => flat_meets(&ctx)?,
                SuiteId::Appendix => exterior_projectivity(&ctx)?,
                SuiteId::Theorem1 | SuiteId::Th190 => unreachable!("ordinal suites"),
            }
        }
        _ => {
            return Err(Error::MalformedInstance(format!(
                "suite {id} does not apply to {}",
                instance.label()
            )))
        }
    };
    Ok(Verdict {
        suite: id,
        instance: instance.label(),
        status: outcome.status,
        witnesses: outcome.witnesses,
        notes: outcome.notes,
        runtime_us: start.elapsed().as_micros() as u64,
    })
}

struct ModuleContext<'a> {
    m: &'a Presentation,
    class: ModuleClassification,
    ranks: RankMap,
}

impl<'a> ModuleContext<'a> {
    fn new(m: &'a Presentation) -> Result<Self> {
        Ok(ModuleContext {
            m,
            class: m.classify()?,
            ranks: m.rank_map()?,
        })
    }

    fn labels(&self) -> &[String] {
        self.ranks.poset().labels()
    }

    /// `None` when continuous, otherwise the failing preimage as JSON.
    fn continuity(&self, kind: TopologyKind, target: Target) -> Result<Option<Value>> {
        Ok(continuity_witness(&self.ranks.map, kind, target)?.map(|f| {
            json!({"source": kind, "target": target.to_string(), "at": f.at, "preimage": f.preimage})
        }))
    }

    fn continuity_checks(&self, pairs: &[(TopologyKind, Target)]) -> Result<(bool, Vec<Witness>)> {
        let mut failures = Vec::new();
        for &(kind, target) in pairs {
            if let Some(w) = self.continuity(kind, target)? {
                failures.push(Witness::new("discontinuity", w));
            }
        }
        Ok((failures.is_empty(), failures))
    }

    fn rank_data(&self) -> Value {
        let vals = self.ranks.values();
        Value::Object(
            self.labels()
                .iter()
                .cloned()
                .zip(vals.into_iter().map(Value::from))
                .collect(),
        )
    }
}

fn fiber_vs_pm(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut bad = None;
    for (i, p) in ctx.ranks.primes.iter().enumerate() {
        let fiber_zero = ctx.ranks.values()[i] == 0;
        let pm = ctx.m.is_pM_equal_M(p)?;
        rows.push(json!({"prime": ctx.labels()[i], "fiber_zero": fiber_zero, "pm_equal_m": pm}));
        if fiber_zero != pm && bad.is_none() {
            bad = Some(rows.last().cloned().expect("just pushed"));
        }
    }
    let table = Value::Array(rows);
    if !(ctx.class.is_projective || ctx.class.is_flat) {
        return Ok(Outcome::new(Status::Vacuous).witness("truth table", table));
    }
    let out = Outcome::judged(bad.is_none()).witness("truth table", table);
    Ok(match bad {
        Some(row) => out.witness("failing prime", row),
        None => out,
    })
}

fn clopen_support(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let support = ctx.m.support()?;
    let poset = ctx.ranks.poset();
    let data = json!({"support": poset.label_list(support)});
    if !ctx.class.is_projective {
        return Ok(Outcome::new(Status::Vacuous).witness("support", data));
    }
    let mut failed = Vec::new();
    for kind in [TopologyKind::Zariski, TopologyKind::Flat] {
        if !poset.is_closed(support, kind)? {
            failed.push(format!("{kind}-closed"));
        }
        if !poset.is_open(support, kind)? {
            failed.push(format!("{kind}-open"));
        }
    }
    let out = Outcome::judged(failed.is_empty()).witness("support", data);
    Ok(if failed.is_empty() {
        out
    } else {
        out.witness("failed properties", json!(failed))
    })
}

fn exterior_support(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let g = ctx.m.generators();
    let ranks = ctx.ranks.values();
    let mut base_change_failures = Vec::new();
    let mut support_failures = Vec::new();
    let mut checked = 0;
    for n in 0..=g + 1 {
        let ext = ext_presentation(ctx.m, n)?;
        for p in &ctx.ranks.primes {
            let v = base_change_fiber_check(ctx.m, n, p)?;
            checked += 1;
            if !v.equal {
                base_change_failures.push(json!({"n": n, "prime": ctx.m.ring().prime_label(p), "lhs": v.lhs, "rhs": v.rhs}));
            }
        }
        if ctx.class.is_locally_free {
            let actual = ext.support()?;
            let expected = crate::finspace::PointSet::from_indices(
                (0..ranks.len()).filter(|&i| ranks[i] >= n),
            );
            if actual != expected {
                let poset = ctx.ranks.poset();
                support_failures.push(json!({
                    "n": n,
                    "support": poset.label_list(actual),
                    "expected": poset.label_list(expected),
                }));
            }
        }
    }
    let note =
        format!("exterior fiber dimensions matched binomials in {checked} prime/degree checks");
    if !base_change_failures.is_empty() {
        return Ok(Outcome::new(Status::Fail).witness("base change", json!(base_change_failures)));
    }
    if !ctx.class.is_locally_free {
        return Ok(Outcome::new(Status::Vacuous)
            .note(note)
            .witness("rank map", ctx.rank_data()));
    }
    let out = Outcome::judged(support_failures.is_empty()).note(note);
    Ok(if support_failures.is_empty() {
        out
    } else {
        out.witness("support mismatch", json!(support_failures))
    })
}

fn discrete_continuity(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    if !ctx.class.is_projective {
        return Ok(Outcome::new(Status::Vacuous).witness("rank map", ctx.rank_data()));
    }
    let (ok, ws) = ctx.continuity_checks(&[
        (TopologyKind::Zariski, Target::Discrete),
        (TopologyKind::Flat, Target::Discrete),
    ])?;
    let mut out = Outcome::judged(ok).witness("rank map", ctx.rank_data());
    out.witnesses.extend(ws);
    Ok(out)
}

fn patch_implies_zariski(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let patch = ctx
        .continuity(TopologyKind::Patch, Target::Discrete)?
        .is_none();
    let zariski = ctx.continuity(TopologyKind::Zariski, Target::Discrete)?;
    let flat = ctx.continuity(TopologyKind::Flat, Target::Discrete)?;
    let sides = json!({
        "locally_free": ctx.class.is_locally_free,
        "patch": patch,
        "zariski": zariski.is_none(),
        "flat": flat.is_none(),
        "rank_map": ctx.rank_data(),
    });
    if !ctx.class.is_locally_free {
        let mut out = Outcome::new(Status::Vacuous).witness("continuity", sides);
        if let (true, Some(w)) = (patch, zariski) {
            out = out
                .witness(NECESSITY_WITNESS, w)
                .note("not locally free: patch continuous but not Zariski continuous");
        }
        return Ok(out);
    }
    if !patch {
        return Ok(Outcome::new(Status::Vacuous).witness("continuity", sides));
    }
    let mut out = Outcome::judged(zariski.is_none() && flat.is_none()).witness("continuity", sides);
    for w in [zariski, flat].into_iter().flatten() {
        out = out.witness("discontinuity", w);
    }
    Ok(out.note(PATCH_NOTE))
}

fn flat_is_projective(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let poset = ctx.ranks.poset();
    let n = poset.len();
    let minimal = (0..n)
        .filter(|&p| (0..n).all(|q| q == p || !poset.leq(q, p)))
        .count();
    let maximal = (0..n)
        .filter(|&p| (0..n).all(|q| q == p || !poset.leq(p, q)))
        .count();
    let ring_data = json!({"minimal_primes": minimal, "maximal_primes": maximal});
    // Every supported spectrum is finite, so the ring hypothesis always holds.
    if !ctx.class.is_flat {
        return Ok(Outcome::new(Status::Vacuous)
            .witness("spectrum", ring_data)
            .note(FLATNESS_NOTE));
    }
    let patch = ctx.continuity(TopologyKind::Patch, Target::Discrete)?;
    let ok = patch.is_none() && ctx.class.is_projective;
    let mut out = Outcome::judged(ok)
        .witness("spectrum", ring_data)
        .note(FLATNESS_NOTE)
        .note(PATCH_NOTE);
    if let Some(w) = patch {
        out = out.witness("discontinuity", w);
    }
    Ok(out)
}

fn wellfounded_continuity(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    if !ctx.class.is_projective {
        return Ok(Outcome::new(Status::Vacuous).witness("rank map", ctx.rank_data()));
    }
    let w = Target::WellFounded(Ordinal::OMEGA);
    let (ok, ws) = ctx.continuity_checks(&[(TopologyKind::Zariski, w), (TopologyKind::Flat, w)])?;
    let mut out = Outcome::judged(ok)
        .witness("rank map", ctx.rank_data())
        .note(PATCH_NOTE);
    out.witnesses.extend(ws);
    Ok(out)
}

fn projective_iff_patch(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let patch = ctx
        .continuity(TopologyKind::Patch, Target::WellFounded(Ordinal::OMEGA))?
        .is_none();
    let sides = json!({"flat": ctx.class.is_flat, "projective": ctx.class.is_projective, "patch_continuous": patch});
    let status = if !ctx.class.is_flat {
        Status::Vacuous
    } else if ctx.class.is_projective == patch {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Outcome::new(status)
        .witness("sides", sides)
        .note(PATCH_NOTE)
        .note("only the projective-implies-continuous direction is falsifiable on finite spectra")
        .note(FLATNESS_NOTE))
}

fn flat_meets(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    let poset = ctx.ranks.poset();
    let meets = arbitrary_meet_of_flat_opens_is_open(poset)?;
    let mut out = Outcome::judged(meets).witness(
        "flat opens",
        json!({"points": poset.len(), "meet_stable": meets}),
    );
    if ctx.class.is_projective {
        let w = Target::WellFounded(Ordinal::omega_plus(1));
        let (ok, ws) =
            ctx.continuity_checks(&[(TopologyKind::Zariski, w), (TopologyKind::Flat, w)])?;
        if !ok {
            out.status = Status::Fail;
        }
        out.witnesses.extend(ws);
        out = out.note("projective rank map checked against the well-founded topology on w+1");
    }
    Ok(out)
}

fn alternating_tables(t: &MultilinearTable) -> Outcome {
    let r = t.alternating_report();
    let data = serde_json::to_value(r).expect("flags serialize");
    if !r.multilinear {
        return Outcome::new(Status::Vacuous).witness("flags", data);
    }
    let skew_ok = !r.alternating || r.skew_symmetric;
    let adjacent_ok = r.alternating == r.alternating_adjacent;
    let mut out = Outcome::judged(skew_ok && adjacent_ok).witness("flags", data);
    if r.skew_symmetric && !r.alternating {
        out = out.note("skew-symmetric but not alternating");
    }
    out
}

/// Exterior powers of a projective module are projective; the
/// antisymmetrization map is injective on free modules.
fn exterior_projectivity(ctx: &ModuleContext<'_>) -> Result<Outcome> {
    if !ctx.class.is_projective {
        return Ok(Outcome::new(Status::Vacuous));
    }
    let g = ctx.m.generators();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for n in 0..=g.min(3) {
        if !ext_presentation(ctx.m, n)?.classify()?.is_projective {
            failures.push(json!({"n": n, "check": "exterior power projective"}));
        }
    }
    if ctx.m.relations().is_empty() {
        for n in 1..=g.min(3) {
            match delta_kernel_is_zero(g, n, ctx.m.ring(), 1 << 16) {
                Ok(true) => {}
                Ok(false) => {
                    failures.push(json!({"n": n, "check": "antisymmetrization injective"}))
                }
                Err(Error::CapExceeded { .. }) => {
                    notes.push(format!("kernel scan skipped for n={n}: over cap"))
                }
                Err(e) => return Err(e),
            }
        }
    }
    let mut out = Outcome::judged(failures.is_empty());
    if !failures.is_empty() {
        out = out.witness("failed", json!(failures));
    }
    out.notes = notes;
    Ok(out)
}

fn ordinal_topology(alpha: Ordinal) -> Result<Outcome> {
    if let Some(n) = alpha.as_natural().filter(|&n| n <= EXHAUSTIVE_CAP) {
        let report = topology_report(n)?;
        let failed: Vec<&str> = report.iter().filter(|c| !c.holds).map(|c| c.name).collect();
        let out = Outcome::judged(failed.is_empty()).witness(
            "properties",
            serde_json::to_value(&report).expect("serializable"),
        );
        return Ok(if failed.is_empty() {
            out
        } else {
            out.witness("failed properties", json!(failed))
        });
    }
    // Beyond exhaustive range: check closures and generic points on a window
    // of ordinals below and above w.
    let space = WellFoundedSpace::new(alpha);
    let window: Vec<Ordinal> = (0..=8)
        .map(Ordinal::nat)
        .chain((0..=8).map(Ordinal::omega_plus))
        .filter(|&b| b <= alpha)
        .collect();
    let mut failed = Vec::new();
    for &b in window.iter().filter(|&&b| b < alpha) {
        if space.closure_of_point(b)? != b.succ()? {
            failed.push(format!("closure of {b}"));
        }
    }
    let mut closures: Vec<Ordinal> = window
        .iter()
        .filter(|&&b| b < alpha)
        .map(|&b| space.closure_of_point(b))
        .collect::<Result<_>>()?;
    let before = closures.len();
    closures.sort();
    closures.dedup();
    if closures.len() != before {
        failed.push("distinct points share a closure".into());
    }
    for &b in &window {
        let generic = space.generic_point_of_closed(b)?;
        if generic.is_some() == b.is_limit() {
            failed.push(format!("generic point of {b}"));
        }
        if let Some(x) = generic {
            if space.closure_of_point(x)? != b {
                failed.push(format!("generic point {x} of {b} does not generate it"));
            }
        }
    }
    if alpha != Ordinal::ZERO && !space.is_irreducible_closed(alpha) {
        failed.push("alpha irreducible".into());
    }
    let out = Outcome::judged(failed.is_empty())
        .witness("window", json!(window))
        .note("axioms, quasi-compactness and noetherianity beyond the exhaustive range follow from the total order of closed sets and are not re-enumerated");
    Ok(if failed.is_empty() {
        out
    } else {
        out.witness("failed properties", json!(failed))
    })
}

fn ordinal_spectrality(alpha: Ordinal) -> Result<Outcome> {
    let v = is_spectral(alpha);
    let mut ok = v.spectral == alpha.is_finite();
    if let Some(d) = &v.direct {
        ok &= d.is_spectral() == v.spectral;
    }
    let mut out =
        Outcome::judged(ok).witness("verdict", serde_json::to_value(&v).expect("serializable"));
    if !alpha.is_finite() {
        let space = WellFoundedSpace::new(alpha);
        let irreducible = space.is_irreducible_closed(Ordinal::OMEGA);
        let generic = space.generic_point_of_closed(Ordinal::OMEGA)?;
        if !(irreducible && generic.is_none()) {
            out.status = Status::Fail;
        }
        out = out.witness(
            "closed set w is irreducible, no generic point",
            json!({"irreducible": irreducible, "generic": generic}),
        );
    } else if v.direct.is_none() {
        out = out.note("finite alpha above the materialization cap: formula only");
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub counts: BTreeMap<SuiteId, Counts>,
    pub instances: usize,
    pub necessity_witnesses: usize,
    pub success: bool,
    pub notes: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl Summary {
    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }

    pub fn total(&self) -> Counts {
        self.counts.values().fold(Counts::default(), |a, c| Counts {
            pass: a.pass + c.pass,
            fail: a.fail + c.fail,
            vacuous: a.vacuous + c.vacuous,
        })
    }

    /// Plain-text table of per-suite counts.
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<10} {:>6} {:>6} {:>8}\n",
            "suite", "pass", "fail", "vacuous"
        );
        for (id, c) in &self.counts {
            s.push_str(&format!(
                "{:<10} {:>6} {:>6} {:>8}\n",
                id.name(),
                c.pass,
                c.fail,
                c.vacuous
            ));
        }
        let t = self.total();
        s.push_str(&format!(
            "{:<10} {:>6} {:>6} {:>8}\n",
            "total", t.pass, t.fail, t.vacuous
        ));
        s
    }
}

/// Runs every applicable suite on every instance. A suite that errors counts
/// as a failure carrying the error text.
pub fn run_all(corpus: &[Instance], suites: &[SuiteId]) -> Summary {
    let jobs: Vec<(&Instance, SuiteId)> = corpus
        .iter()
        .flat_map(|i| {
            suites
                .iter()
                .filter(|s| s.applies_to(i))
                .map(move |&s| (i, s))
        })
        .collect();
    let verdicts: Vec<Verdict> = jobs
        .par_iter()
        .map(|&(inst, id)| {
            run_suite(id, inst).unwrap_or_else(|e| Verdict {
                suite: id,
                instance: inst.label(),
                status: Status::Fail,
                witnesses: vec![Witness::new("error", json!(e.to_string()))],
                notes: Vec::new(),
                runtime_us: 0,
            })
        })
        .collect();
    let mut counts: BTreeMap<SuiteId, Counts> =
        suites.iter().map(|&s| (s, Counts::default())).collect();
    for v in &verdicts {
        let c = counts.entry(v.suite).or_default();
        match v.status {
            Status::Pass => c.pass += 1,
            Status::Fail => c.fail += 1,
            Status::Vacuous => c.vacuous += 1,
        }
    }
    let necessity_witnesses = verdicts
        .iter()
        .filter(|v| v.has_witness(NECESSITY_WITNESS))
        .count();
    let success = verdicts.iter().all(|v| v.status != Status::Fail);
    Summary {
        counts,
        instances: corpus.len(),
        necessity_witnesses,
        success,
        notes: vec![
            FLATNESS_NOTE.to_string(),
            PATCH_NOTE.to_string(),
            "no supported backend has a finitely generated flat module that is not projective, so the converse direction of the flat/projective criterion is structurally vacuous".to_string(),
        ],
        verdicts,
    }
}
