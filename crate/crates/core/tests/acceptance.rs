//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the report reads top to bottom; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use wftop::exterior::{base_change_fiber_check, binomial, ext_presentation, MultilinearTable};
use wftop::finspace::{continuity_witness, is_continuous, Target, TopologyKind};
use wftop::module::{Caps, Presentation};
use wftop::ordinal::{is_spectral, topology_report, Ordinal, WellFoundedSpace};
use wftop::ring::table::TableRing;
use wftop::ring::{PrimeIdeal, RingInstance};
use wftop::verify::{default_corpus, run_suite, Instance, Status, SuiteId, NECESSITY_WITNESS};
use wftop::Error;

const SEED: u64 = 0;
const CORPUS_SIZE: usize = 200;
const TABLES: usize = 120;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took >= limit {
            o.ok = false;
            o.detail.push_str(&format!("; over time limit {limit:?}"));
        }
    }
    o.detail.push_str(&format!(" [{:.3}s]", took.as_secs_f64()));
    o
}

fn modules(corpus: &[Instance]) -> impl Iterator<Item = &Presentation> {
    corpus.iter().filter_map(|i| match i {
        Instance::Module(m) => Some(m),
        _ => None,
    })
}

fn projective(corpus: &[Instance]) -> Vec<&Presentation> {
    modules(corpus)
        .filter(|m| m.classify().map(|c| c.is_projective).unwrap_or(false))
        .collect()
}

fn primes(m: &Presentation) -> Vec<PrimeIdeal> {
    m.ring()
        .enum_primes()
        .expect("corpus rings have enumerable primes")
}

fn exterior_ranks() -> Outcome {
    let rings = [
        RingInstance::zmod(12).unwrap(),
        RingInstance::zloc(&[2, 3]).unwrap(),
    ];
    let mut checked = 0;
    for ring in rings {
        for n in 0..=6 {
            let m = Presentation::free(ring.clone(), n);
            for i in 0..=n + 1 {
                let ext = ext_presentation(&m, i).unwrap();
                let want = binomial(n, i) as usize;
                let class = ext.classify().unwrap();
                let fibers_ok = primes(&ext)
                    .iter()
                    .all(|p| ext.fiber_dim(p).unwrap() == want);
                if class.free_rank != Some(want) || !class.is_free || !fibers_ok {
                    return outcome(
                        false,
                        format!("{} rank {n}, degree {i}: {class:?}", ring.name()),
                    );
                }
                checked += 1;
            }
        }
    }
    outcome(
        true,
        format!("{checked} exterior powers of free modules have binomial rank"),
    )
}

fn base_change(corpus: &[Instance]) -> Outcome {
    let mut checks = 0;
    for m in modules(corpus) {
        for n in 0..=3 {
            for p in primes(m) {
                let v = base_change_fiber_check(m, n, &p).unwrap();
                if !v.equal {
                    return outcome(
                        false,
                        format!("{m:?} degree {n} at {p:?}: {} vs {}", v.lhs, v.rhs),
                    );
                }
                checks += 1;
            }
        }
    }
    outcome(true, format!("{checks} prime/degree checks, no mismatch"))
}

fn fiber_vs_pm(corpus: &[Instance]) -> Outcome {
    let proj = projective(corpus);
    let mut checks = 0;
    for m in &proj {
        for p in primes(m) {
            let zero = m.fiber_dim(&p).unwrap() == 0;
            let pm = m.is_pM_equal_M(&p).unwrap();
            if zero != pm {
                return outcome(
                    false,
                    format!("{m:?} at {p:?}: fiber zero {zero}, pM = M {pm}"),
                );
            }
            checks += 1;
        }
    }
    outcome(
        true,
        format!("{} projective modules, {checks} primes", proj.len()),
    )
}

fn clopen_support(corpus: &[Instance]) -> Outcome {
    let proj = projective(corpus);
    for m in &proj {
        let s = m.support().unwrap();
        let poset = m.ring().specialization_order().unwrap();
        for kind in [TopologyKind::Zariski, TopologyKind::Flat] {
            if !poset.is_closed(s, kind).unwrap() || !poset.is_open(s, kind).unwrap() {
                return outcome(false, format!("{m:?}: support not {kind}-clopen"));
            }
        }
    }
    outcome(true, format!("{} projective supports clopen", proj.len()))
}

fn rank_continuity(corpus: &[Instance]) -> Outcome {
    let proj = projective(corpus);
    let pairs = [
        (TopologyKind::Zariski, Target::Discrete),
        (TopologyKind::Flat, Target::Discrete),
        (TopologyKind::Zariski, Target::WellFounded(Ordinal::OMEGA)),
        (TopologyKind::Flat, Target::WellFounded(Ordinal::OMEGA)),
    ];
    for m in &proj {
        let ranks = m.rank_map().unwrap();
        for (kind, target) in pairs {
            if let Some(f) = continuity_witness(&ranks.map, kind, target).unwrap() {
                return outcome(false, format!("{m:?}: {kind} -> {target} fails at {f:?}"));
            }
        }
    }
    outcome(
        true,
        format!("{} projective rank maps, 4 topology pairs", proj.len()),
    )
}

fn negative_control() -> Outcome {
    let m = Presentation::new(RingInstance::zloc(&[2, 3]).unwrap(), 1, vec![vec![2]]).unwrap();
    let ranks = m.rank_map().unwrap();
    let patch = is_continuous(&ranks.map, TopologyKind::Patch, Target::Discrete).unwrap();
    let zariski = is_continuous(&ranks.map, TopologyKind::Zariski, Target::Discrete).unwrap();
    let v = run_suite(SuiteId::Lemma566, &Instance::Module(m)).unwrap();
    let ok = patch && !zariski && v.status == Status::Vacuous && v.has_witness(NECESSITY_WITNESS);
    outcome(
        ok,
        format!(
            "patch {patch}, zariski {zariski}, suite {}, necessity witness {}",
            v.status,
            v.has_witness(NECESSITY_WITNESS)
        ),
    )
}

fn ordinal_topology() -> Outcome {
    let required = [
        "axioms",
        "closure-successor",
        "generic-points",
        "unions",
        "quasi-compact",
    ];
    for a in 0..=12 {
        let report = topology_report(a).unwrap();
        for name in required {
            if !report.iter().any(|c| c.name == name) {
                return outcome(false, format!("alpha {a}: no {name} check"));
            }
        }
        if let Some(c) = report.iter().find(|c| !c.holds) {
            return outcome(false, format!("alpha {a}: {} fails", c.name));
        }
    }
    let mut direct = 0;
    let alphas = (0..=64)
        .map(Ordinal::nat)
        .chain((0..=8).map(Ordinal::omega_plus));
    for a in alphas {
        let v = is_spectral(a);
        if v.spectral != a.is_finite() {
            return outcome(false, format!("is_spectral({a}) = {}", v.spectral));
        }
        if a.is_finite() {
            match &v.direct {
                Some(d) if d.is_spectral() => direct += 1,
                _ => {
                    return outcome(
                        false,
                        format!("alpha {a}: direct check missing or disagrees"),
                    )
                }
            }
        }
    }
    for a in [Ordinal::OMEGA, Ordinal::omega_plus(1)] {
        let space = WellFoundedSpace::new(a);
        let witness = is_spectral(a).witness.is_some();
        let generic = space.generic_point_of_closed(Ordinal::OMEGA).unwrap();
        if !witness || generic.is_some() || !space.is_irreducible_closed(Ordinal::OMEGA) {
            return outcome(false, format!("{a}: missing no-generic-point witness"));
        }
    }
    outcome(
        true,
        format!(
            "alpha <= 12 exhaustive, {direct} direct spectral checks agree, w and w+1 witnessed"
        ),
    )
}

/// Alternating and skew checks straight from the definitions, over a
/// two-argument table.
fn xy_flags(t: &MultilinearTable) -> (bool, bool) {
    let q = t.ring().finite().unwrap().size();
    let f = |x: usize, y: usize| t.values()[x * q + y][0];
    let alternating = (0..q).all(|x| f(x, x) == 0);
    let neg = |v: usize| (q - v) % q;
    let skew = (0..q).all(|x| (0..q).all(|y| f(x, y) == neg(f(y, x))));
    (alternating, skew)
}

fn multilinear_identities(corpus: &[Instance]) -> Outcome {
    let generated = wftop::verify::generate_tables(SEED, TABLES).unwrap();
    let tables: Vec<&MultilinearTable> = corpus
        .iter()
        .filter_map(|i| match i {
            Instance::Table(t) => Some(t),
            _ => None,
        })
        .chain(&generated)
        .collect();
    let mut alternating = 0;
    for t in &tables {
        let r = t.alternating_report();
        if r.multilinear && r.alternating && !r.skew_symmetric {
            return outcome(
                false,
                format!(
                    "alternating but not skew: {}",
                    Instance::Table((*t).clone()).label()
                ),
            );
        }
        if r.multilinear && r.alternating != r.alternating_adjacent {
            return outcome(
                false,
                format!(
                    "alternating differs from adjacent: {}",
                    Instance::Table((*t).clone()).label()
                ),
            );
        }
        alternating += r.alternating as usize;
    }
    let z2 = RingInstance::zmod(2).unwrap();
    let xy = MultilinearTable::from_fn(z2, 2, 1, 1, |x| vec![x[0][0] * x[1][0]]).unwrap();
    let r = xy.alternating_report();
    let (alt, skew) = xy_flags(&xy);
    let ok =
        tables.len() >= 100 && r.skew_symmetric && !r.alternating && (alt, skew) == (false, true);
    outcome(
        ok,
        format!(
            "{} tables ({alternating} alternating); xy over Z/2 skew and not alternating",
            tables.len()
        ),
    )
}

/// Size of the submodule of `(Z/n)^g` spanned by `rows`, by closure.
fn span_size(n: u64, g: usize, rows: &[Vec<i64>]) -> u64 {
    let encode = |v: &[u64]| v.iter().fold(0u64, |a, &x| a * n + x);
    let size = n.pow(g as u32) as usize;
    let mut seen = vec![false; size];
    let zero = vec![0u64; g];
    seen[encode(&zero) as usize] = true;
    let mut frontier = vec![zero];
    let mut count = 1;
    while let Some(v) = frontier.pop() {
        for r in rows {
            let w: Vec<u64> = v
                .iter()
                .zip(r)
                .map(|(&a, &b)| (a + b.rem_euclid(n as i64) as u64) % n)
                .collect();
            let code = encode(&w) as usize;
            if !seen[code] {
                seen[code] = true;
                count += 1;
                frontier.push(w);
            }
        }
    }
    count
}

fn oracle_agreement(corpus: &[Instance]) -> Outcome {
    for n in 1..=16u64 {
        let table = TableRing::zmod(n as usize).unwrap();
        let oracle: BTreeSet<Vec<usize>> = table
            .primes()
            .unwrap()
            .into_iter()
            .map(|p| p.to_vec())
            .collect();
        let ring = RingInstance::zmod(n).unwrap();
        let mine: BTreeSet<Vec<usize>> = ring
            .enum_primes()
            .unwrap()
            .into_iter()
            .map(|p| match p {
                PrimeIdeal::ZMod { p } => (0..n as usize).filter(|x| x % p as usize == 0).collect(),
                other => panic!("unexpected prime {other:?}"),
            })
            .collect();
        if oracle != mine {
            return outcome(
                false,
                format!("primes of Z/{n}: {mine:?} vs oracle {oracle:?}"),
            );
        }
    }
    let mut counted = 0;
    for m in modules(corpus) {
        let RingInstance::ZMod { n } = *m.ring() else {
            continue;
        };
        if n > 16 {
            continue;
        }
        let g = m.generators();
        let exhaustive = n.pow(g as u32) / span_size(n, g, m.relations());
        let snf = m.classify().unwrap().cardinality;
        if snf != Some(exhaustive as u128) {
            return outcome(false, format!("{m:?}: {snf:?} vs {exhaustive}"));
        }
        counted += 1;
    }
    outcome(
        true,
        format!("primes of Z/n for n <= 16; {counted} cokernel cardinalities"),
    )
}

fn minimal_gensets(corpus: &[Instance]) -> Outcome {
    let (mut checked, mut too_big, mut over_budget) = (0, 0, 0);
    for m in modules(corpus) {
        if !m.ring().is_finite() || primes(m).len() != 1 {
            continue;
        }
        match m.minimal_gensets_oracle(Caps::default()) {
            Ok(s) => {
                if s.sizes.iter().any(|&k| k != s.fiber) {
                    return outcome(
                        false,
                        format!("{m:?}: sizes {:?}, fiber {}", s.sizes, s.fiber),
                    );
                }
                checked += 1;
            }
            Err(Error::CapExceeded { what, .. }) if what.contains("|M|") => too_big += 1,
            Err(Error::CapExceeded { .. }) => over_budget += 1,
            Err(e) => return outcome(false, format!("{m:?}: {e}")),
        }
    }
    outcome(
        over_budget == 0,
        format!("{checked} local modules, every minimal generating set has fiber size; {too_big} above 2^12 out of scope; {over_budget} over search budget"),
    )
}

fn main() -> ExitCode {
    let corpus = default_corpus(SEED, CORPUS_SIZE).expect("corpus within cap");
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(&str, Outcome)> = vec![
        (
            "exterior ranks of free modules",
            timed(secs(1), exterior_ranks),
        ),
        (
            "fiber base change of exterior powers",
            timed(secs(30), || base_change(&corpus)),
        ),
        (
            "projective: fiber zero iff pM = M",
            timed(None, || fiber_vs_pm(&corpus)),
        ),
        (
            "projective: support clopen",
            timed(None, || clopen_support(&corpus)),
        ),
        (
            "projective: rank map continuity",
            timed(None, || rank_continuity(&corpus)),
        ),
        (
            "negative control: patch but not Zariski",
            timed(None, negative_control),
        ),
        (
            "well-founded ordinal topology",
            timed(secs(5), ordinal_topology),
        ),
        (
            "alternating, adjacent and skew tables",
            timed(None, || multilinear_identities(&corpus)),
        ),
        (
            "oracle agreement: primes and cardinalities",
            timed(None, || oracle_agreement(&corpus)),
        ),
        (
            "minimal generating sets have fiber size",
            timed(None, || minimal_gensets(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        let tag = if o.ok { "PASS" } else { "FAIL" };
        failed += !o.ok as usize;
        println!("[{tag}] {:>2}. {name}: {}", i + 1, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
