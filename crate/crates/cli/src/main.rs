use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use wftop::exterior::{base_change_fiber_check, binomial, ext_presentation};
use wftop::finspace::{continuity_witness, Target, TopologyKind};
use wftop::instance::{parse_instance, InstanceFile};
use wftop::module::Presentation;
use wftop::ordinal::{is_spectral, topology_report, Ordinal, EXHAUSTIVE_CAP};
use wftop::ring::RingInstance;
use wftop::verify::{default_corpus, run_all, Instance, SuiteId};
use wftop::Error;

/// Rank maps, exterior powers and the well-founded topology on small rings
/// and ordinals.
#[derive(Parser)]
#[command(name = "wftop", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Instance file; reads standard input when omitted or `-`.
    path: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Primes, specialization order and closed sets of the instance's ring.
    Spec(Input),
    /// Rank map of the instance's module and its continuity verdicts.
    RankMap(Input),
    /// Presentation of an exterior power and fiber base-change checks.
    Extpow {
        #[command(flatten)]
        input: Input,
        /// Degree of the exterior power.
        #[arg(short, long)]
        n: usize,
    },
    /// Topology report and spectrality for an ordinal such as `5`, `w`, `w+3`.
    Ordinal { alpha: Ordinal },
    /// Run verification suites on a seeded corpus or on one instance file.
    Verify {
        /// Suites to run (repeatable); all by default.
        #[arg(long = "suite")]
        suites: Vec<SuiteId>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of generated instances.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Verify this instance file instead of a generated corpus.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Validation(_) | Error::MalformedInstance(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn read_instance(path: Option<&PathBuf>) -> Result<InstanceFile, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(parse_instance(&text)?)
}

fn ring_of(f: &InstanceFile) -> Result<&RingInstance, Failure> {
    f.ring
        .as_ref()
        .ok_or_else(|| Failure::Usage("instance has no ring".into()))
}

fn module_of(f: &InstanceFile) -> Result<&Presentation, Failure> {
    f.module
        .as_ref()
        .ok_or_else(|| Failure::Usage("instance has no module".into()))
}

fn emit(json_mode: bool, value: &Value, text: String) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("json values serialize")
        );
    } else {
        print!("{text}");
    }
}

fn spec(json_mode: bool, ring: &RingInstance) -> Result<(), Failure> {
    let poset = ring.specialization_order()?;
    let labels = poset.labels();
    let order: Vec<Value> = poset
        .cover_edges()
        .into_iter()
        .map(|(p, q)| json!([labels[p], labels[q]]))
        .collect();
    let mut closed = serde_json::Map::new();
    let mut text = format!("ring {}\nprimes: {}\n", ring.name(), labels.join(", "));
    text.push_str("covers (p < q):");
    for (p, q) in poset.cover_edges() {
        text.push_str(&format!(" {} < {};", labels[p], labels[q]));
    }
    text.push('\n');
    for kind in TopologyKind::ALL {
        let sets: Vec<Vec<String>> = poset
            .closed_sets(kind)?
            .into_iter()
            .map(|s| poset.label_list(s))
            .collect();
        text.push_str(&format!("{kind} closed sets ({}):\n", sets.len()));
        for s in &sets {
            text.push_str(&format!("  {{{}}}\n", s.join(", ")));
        }
        closed.insert(kind.to_string(), json!(sets));
    }
    let value =
        json!({"ring": ring.name(), "primes": labels, "covers": order, "closed_sets": closed});
    emit(json_mode, &value, text);
    Ok(())
}

fn rank_map(json_mode: bool, m: &Presentation) -> Result<(), Failure> {
    let ranks = m.rank_map()?;
    let labels = ranks.poset().labels().to_vec();
    let values = ranks.values();
    let mut text = format!("ring {}\nrank map:\n", m.ring().name());
    for (l, v) in labels.iter().zip(&values) {
        text.push_str(&format!("  {l:<12} {v}\n"));
    }
    text.push_str("continuity:\n");
    let targets = [
        Target::Discrete,
        Target::WellFounded(Ordinal::OMEGA),
        Target::WellFounded(Ordinal::omega_plus(1)),
    ];
    let mut verdicts = Vec::new();
    for kind in TopologyKind::ALL {
        for target in targets {
            let failure = continuity_witness(&ranks.map, kind, target)?;
            let ok = failure.is_none();
            text.push_str(&format!(
                "  {:<8} -> {:<16} {}",
                kind.to_string(),
                target.to_string(),
                ok
            ));
            if let Some(f) = &failure {
                text.push_str(&format!(
                    "  (preimage of {} is {{{}}})",
                    f.at,
                    f.preimage.join(", ")
                ));
            }
            text.push('\n');
            verdicts.push(json!({"source": kind, "target": target.to_string(), "continuous": ok, "witness": failure}));
        }
    }
    let rank: serde_json::Map<String, Value> = labels
        .into_iter()
        .zip(values.into_iter().map(Value::from))
        .collect();
    emit(
        json_mode,
        &json!({"ring": m.ring().name(), "rank_map": rank, "continuity": verdicts}),
        text,
    );
    Ok(())
}

fn extpow(json_mode: bool, m: &Presentation, n: usize) -> Result<(), Failure> {
    let ext = ext_presentation(m, n)?;
    let mut checks = Vec::new();
    let mut text = format!(
        "exterior power {n} of a {}-generator module over {}\ngenerators: {}\nrelations: {}\nbase change (fiber of power vs binomial of fiber):\n",
        m.generators(),
        m.ring().name(),
        ext.generators(),
        ext.relations().len()
    );
    let ranks = m.rank_map()?;
    for p in &ranks.primes {
        let v = base_change_fiber_check(m, n, p)?;
        let label = m.ring().prime_label(p);
        text.push_str(&format!(
            "  {label:<12} {} vs {}  {}\n",
            v.lhs,
            v.rhs,
            if v.equal { "ok" } else { "MISMATCH" }
        ));
        checks.push(json!({"prime": label, "fiber": v.lhs, "binomial": v.rhs, "equal": v.equal}));
    }
    let value = json!({
        "n": n,
        "generators": ext.generators(),
        "relations": ext.relations(),
        "free_rank_bound": binomial(m.generators(), n).to_string(),
        "base_change": checks,
    });
    emit(json_mode, &value, text);
    Ok(())
}

fn ordinal(json_mode: bool, alpha: Ordinal) -> Result<(), Failure> {
    let verdict = is_spectral(alpha);
    let report = match alpha.as_natural() {
        Some(n) if n <= EXHAUSTIVE_CAP => Some(topology_report(n)?),
        _ => None,
    };
    let mut text = format!("ordinal {alpha}\nspectral: {}\n", verdict.spectral);
    if let Some(w) = &verdict.witness {
        text.push_str(&format!("witness: {w}\n"));
    }
    match &report {
        Some(checks) => {
            for c in checks {
                text.push_str(&format!(
                    "  [{}] {}: {}\n",
                    if c.holds { "ok" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
        }
        None => text.push_str(&format!("no exhaustive report above {EXHAUSTIVE_CAP}\n")),
    }
    emit(
        json_mode,
        &json!({"spectral": verdict, "properties": report}),
        text,
    );
    Ok(())
}

fn verify(
    json_mode: bool,
    suites: Vec<SuiteId>,
    seed: u64,
    budget: usize,
    input: Option<PathBuf>,
) -> Result<bool, Failure> {
    let suites = if suites.is_empty() {
        SuiteId::ALL.to_vec()
    } else {
        suites
    };
    let corpus = match input {
        Some(p) => Instance::from_file(read_instance(Some(&p))?),
        None => default_corpus(seed, budget)?,
    };
    let summary = run_all(&corpus, &suites);
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summaries serialize")
        );
    } else {
        println!("{} instances, seed {seed}", summary.instances);
        print!("{}", summary.table());
        println!(
            "hypothesis-necessity witnesses: {}",
            summary.necessity_witnesses
        );
        for v in summary.failures() {
            println!("FAIL {} on {}", v.suite, v.instance);
            for w in &v.witnesses {
                println!("  {}: {}", w.label, w.data);
            }
        }
        for n in &summary.notes {
            println!("note: {n}");
        }
    }
    Ok(summary.success)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let j = cli.json;
    match cli.command {
        Command::Spec(i) => spec(j, ring_of(&read_instance(i.path.as_ref())?)?)?,
        Command::RankMap(i) => rank_map(j, module_of(&read_instance(i.path.as_ref())?)?)?,
        Command::Extpow { input, n } => {
            extpow(j, module_of(&read_instance(input.path.as_ref())?)?, n)?
        }
        Command::Ordinal { alpha } => ordinal(j, alpha)?,
        Command::Verify {
            suites,
            seed,
            budget,
            input,
        } => return verify(j, suites, seed, budget, input),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
