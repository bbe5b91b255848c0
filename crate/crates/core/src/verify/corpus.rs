//! Seeded instance generation and curated negative controls.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_cap, Result};
use crate::exterior::{permutations, sort_parity, MultilinearTable};
use crate::instance::InstanceFile;
use crate::module::Presentation;
use crate::ordinal::Ordinal;
use crate::ring::arith::CommRing;
use crate::ring::table::TableRing;
use crate::ring::RingInstance;

pub const CORPUS_CAP: usize = 100_000;

const ZLOC_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Module(Presentation),
    Ordinal(Ordinal),
    Table(MultilinearTable),
}

impl Instance {
    pub fn label(&self) -> String {
        match self {
            Instance::Module(m) => format!(
                "{} g={} rel={:?}",
                m.ring().name(),
                m.generators(),
                m.relations()
            ),
            Instance::Ordinal(a) => format!("ordinal {a}"),
            Instance::Table(t) => format!(
                "multilinear {} n={} s={} t={}",
                t.ring().name(),
                t.arity(),
                t.source_rank(),
                t.target_rank()
            ),
        }
    }

    pub fn from_file(f: InstanceFile) -> Vec<Instance> {
        let mut out = Vec::new();
        if let Some(m) = f.module {
            out.push(Instance::Module(m));
        }
        if let Some(a) = f.ordinal {
            out.push(Instance::Ordinal(a));
        }
        out
    }
}

/// Finite rings of size at most 8, as tables.
pub fn table_catalogue() -> Vec<TableRing> {
    let z = |n| TableRing::zmod(n).expect("small zmod table");
    let f4 = TableRing::poly_quotient(2, &[1, 1]).expect("F_4");
    let dual = TableRing::poly_quotient(2, &[0, 0]).expect("F_2[x]/(x^2)");
    let mut out: Vec<TableRing> = (2..=8).map(z).collect();
    out.push(f4.clone());
    out.push(dual.clone());
    out.push(TableRing::poly_quotient(2, &[1, 1, 0]).expect("F_8"));
    out.push(TableRing::poly_quotient(2, &[0, 0, 0]).expect("F_2[x]/(x^3)"));
    out.push(TableRing::product(&z(2), &z(2)).expect("F_2 x F_2"));
    out.push(TableRing::product(&z(2), &z(3)).expect("F_2 x F_3"));
    out.push(TableRing::product(&f4, &z(2)).expect("F_4 x F_2"));
    out.push(TableRing::product(&dual, &z(2)).expect("F_2[x]/(x^2) x F_2"));
    out.push(
        TableRing::product(&TableRing::product(&z(2), &z(2)).expect("F_2^2"), &z(2))
            .expect("F_2^3"),
    );
    out
}

/// Largest generator count for a finite ring of the given size. The number of
/// minimal generating sets grows like `|k|^(d(d-1))`, so exhaustive oracles
/// stay tractable only for few generators over large rings.
pub fn max_generators(ring_size: Option<usize>) -> usize {
    match ring_size {
        None => 4,
        Some(q) if q <= 3 => 4,
        Some(q) if q <= 13 => 3,
        Some(_) => 2,
    }
}

fn random_entry(rng: &mut ChaCha8Rng, ring: &RingInstance) -> i64 {
    match ring {
        RingInstance::ZLoc { .. } => rng.gen_range(-12..=12),
        RingInstance::ZMod { n } => rng.gen_range(0..*n as i64),
        RingInstance::Table(t) => rng.gen_range(0..t.size() as i64),
    }
}

fn random_ring(rng: &mut ChaCha8Rng, backend: usize, catalogue: &[TableRing]) -> RingInstance {
    match backend {
        0 => RingInstance::zmod(rng.gen_range(1..=64)).expect("modulus in range"),
        1 => {
            let k = rng.gen_range(1..=3);
            let primes: Vec<u64> = ZLOC_PRIMES.choose_multiple(rng, k).copied().collect();
            RingInstance::zloc(&primes).expect("distinct primes")
        }
        _ => RingInstance::table(catalogue.choose(rng).expect("nonempty catalogue").clone()),
    }
}

/// Adds `r` times column `i` to column `j`: a change of basis, so the
/// presented module is unchanged up to isomorphism.
fn column_op(ring: &RingInstance, rows: &mut [Vec<i64>], i: usize, j: usize, r: i64) -> Result<()> {
    for row in rows.iter_mut() {
        let t = ring.mul_entry(r, row[i])?;
        row[j] = ring.add_entry(row[j], t)?;
    }
    Ok(())
}

/// Relations making generator `j` generate a projective cyclic summand.
fn projective_diagonal(rng: &mut ChaCha8Rng, ring: &RingInstance) -> i64 {
    match ring {
        RingInstance::ZMod { n } => {
            // R/(a) with gcd(a, n/a) = 1 is a direct factor of R.
            let unitary: Vec<u64> = (1..=*n)
                .filter(|a| n % a == 0 && num_integer::gcd(*a, n / a) == 1)
                .collect();
            *unitary.choose(rng).expect("n divides itself") as i64 % *n as i64
        }
        RingInstance::ZLoc { primes } => {
            // Zero keeps a free summand, an S-unit kills the generator.
            let units: Vec<i64> = [1i64, 5, 7, 11, 13, 35]
                .into_iter()
                .filter(|u| primes.iter().all(|&p| u % p as i64 != 0))
                .collect();
            if rng.gen_bool(0.6) {
                0
            } else {
                *units.choose(rng).expect("1 is a unit")
            }
        }
        RingInstance::Table(t) => {
            // R/(1 - e) = Re for an idempotent e.
            let e = *t.idempotents().choose(rng).expect("0 and 1 are idempotent");
            t.sub(&t.one_elem(), &e) as i64
        }
    }
}

/// A diagonal entry that is usually not a direct-factor generator, so the
/// cyclic quotient tends to be non-projective.
fn torsion_diagonal(rng: &mut ChaCha8Rng, ring: &RingInstance) -> i64 {
    match ring {
        RingInstance::ZMod { n } => {
            let mut divisors: Vec<u64> = (1..=*n)
                .filter(|a| n % a == 0 && num_integer::gcd(*a, n / a) != 1)
                .collect();
            if divisors.is_empty() {
                divisors = (1..=*n).filter(|a| n % a == 0).collect();
            }
            *divisors.choose(rng).expect("n divides itself") as i64 % *n as i64
        }
        RingInstance::ZLoc { primes } => {
            let p = *primes.choose(rng).expect("nonempty") as i64;
            let q = *primes.choose(rng).expect("nonempty") as i64;
            [p, p * p, p * q][rng.gen_range(0..3)]
        }
        RingInstance::Table(t) => rng.gen_range(0..t.size() as i64),
    }
}

fn random_presentation(
    rng: &mut ChaCha8Rng,
    backend: usize,
    catalogue: &[TableRing],
) -> Result<Presentation> {
    let ring = random_ring(rng, backend, catalogue);
    let size = ring.finite().map(|f| f.size());
    let g = rng.gen_range(0..=max_generators(size));
    let zero = ring.zero_entry();
    let shape = rng.gen_range(0..4);
    match shape {
        0 => Ok(Presentation::free(ring, g)),
        1 => {
            let k = rng.gen_range(0..=4);
            let rows = (0..k)
                .map(|_| (0..g).map(|_| random_entry(rng, &ring)).collect())
                .collect();
            Presentation::new(ring, g, rows)
        }
        _ => {
            let mut rows: Vec<Vec<i64>> = (0..g)
                .map(|j| {
                    let d = if shape == 3 && (j == 0 || rng.gen_bool(0.5)) {
                        torsion_diagonal(rng, &ring)
                    } else {
                        projective_diagonal(rng, &ring)
                    };
                    (0..g).map(|i| if i == j { d } else { zero }).collect()
                })
                .collect();
            if g >= 2 {
                for _ in 0..rng.gen_range(0..=2) {
                    let i = rng.gen_range(0..g);
                    let j = (i + rng.gen_range(1..g)) % g;
                    let r = match &ring {
                        RingInstance::ZLoc { .. } => rng.gen_range(-2..=2),
                        _ => random_entry(rng, &ring),
                    };
                    column_op(&ring, &mut rows, i, j, r)?;
                }
            }
            rows.shuffle(rng);
            Presentation::new(ring, g, rows)
        }
    }
}

fn small_table_rings() -> Vec<RingInstance> {
    let mut out: Vec<RingInstance> = [2, 3, 4, 5]
        .iter()
        .map(|&n| RingInstance::zmod(n).expect("small"))
        .collect();
    out.push(RingInstance::table(
        TableRing::poly_quotient(2, &[1, 1]).expect("F_4"),
    ));
    out.push(RingInstance::table(
        TableRing::poly_quotient(2, &[0, 0]).expect("dual numbers"),
    ));
    out
}

/// `f(x_1..x_n)_k = Σ_I c[k][I] Π_j x_j[I_j]` for a coefficient tensor `c`.
fn tensor_table(
    ring: &RingInstance,
    n: usize,
    s: usize,
    coef: &[Vec<usize>],
) -> Result<MultilinearTable> {
    let f = ring.finite().expect("finite");
    let t = coef.len();
    MultilinearTable::from_fn(ring.clone(), n, s, t, |x| {
        coef.iter()
            .map(|ck| {
                let mut acc = f.zero();
                for (code, c) in ck.iter().enumerate() {
                    let mut term = *c;
                    let mut rest = code;
                    for xj in x.iter().rev() {
                        term = f.mul(&term, &xj[rest % s]);
                        rest /= s;
                    }
                    acc = f.add(&acc, &term);
                }
                acc
            })
            .collect()
    })
}

fn antisymmetrize(ring: &RingInstance, n: usize, s: usize, ck: &[usize]) -> Vec<usize> {
    let f = ring.finite().expect("finite");
    let perms = permutations(n);
    let digits = |mut code: usize| -> Vec<usize> {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = code % s;
            code /= s;
        }
        d
    };
    let encode = |d: &[usize]| d.iter().fold(0, |acc, &x| acc * s + x);
    (0..ck.len())
        .map(|code| {
            let idx = digits(code);
            perms.iter().fold(f.zero(), |acc, p| {
                let permuted: Vec<usize> = p.iter().map(|&k| idx[k]).collect();
                let c = ck[encode(&permuted)];
                if sort_parity(p) {
                    f.sub(&acc, &c)
                } else {
                    f.add(&acc, &c)
                }
            })
        })
        .collect()
}

fn random_table(rng: &mut ChaCha8Rng, rings: &[RingInstance]) -> Result<MultilinearTable> {
    let ring = rings.choose(rng).expect("nonempty").clone();
    let q = ring.finite().expect("finite").size();
    let n = if rng.gen_bool(0.6) { 2 } else { 3 };
    let s: usize = if n == 3 && q > 3 {
        1
    } else {
        rng.gen_range(1..=2)
    };
    let t = rng.gen_range(1..=2);
    let width = s.pow(n as u32);
    match rng.gen_range(0..4) {
        0 | 1 => {
            let coef: Vec<Vec<usize>> = (0..t)
                .map(|_| {
                    let raw: Vec<usize> = (0..width).map(|_| rng.gen_range(0..q)).collect();
                    antisymmetrize(&ring, n, s, &raw)
                })
                .collect();
            tensor_table(&ring, n, s, &coef)
        }
        2 => {
            let coef: Vec<Vec<usize>> = (0..t)
                .map(|_| (0..width).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            tensor_table(&ring, n, s, &coef)
        }
        _ => {
            let tuples = q.pow((s * n) as u32);
            let values = (0..tuples)
                .map(|_| (0..t).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            MultilinearTable::new(ring, n, s, t, values)
        }
    }
}

/// Alternating, plain multilinear and arbitrary tables in roughly 2:1:1 proportion.
pub fn generate_tables(seed: u64, count: usize) -> Result<Vec<MultilinearTable>> {
    check_cap("corpus budget", count as u128, CORPUS_CAP as u128)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7461_626c_6573);
    let rings = small_table_rings();
    (0..count).map(|_| random_table(&mut rng, &rings)).collect()
}

/// Module presentations only, backends in rotation.
pub fn generate_modules(seed: u64, count: usize) -> Result<Vec<Presentation>> {
    check_cap("corpus budget", count as u128, CORPUS_CAP as u128)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let catalogue = table_catalogue();
    (0..count)
        .map(|i| random_presentation(&mut rng, i % 3, &catalogue))
        .collect()
}

/// Deterministic mixed corpus: seven module instances (backends in rotation),
/// two multilinear tables and one ordinal below `w·2` per ten.
pub fn generate_corpus(seed: u64, budget: usize) -> Result<Vec<Instance>> {
    check_cap("corpus budget", budget as u128, CORPUS_CAP as u128)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let catalogue = table_catalogue();
    let rings = small_table_rings();
    let mut modules = 0;
    (0..budget)
        .map(|i| {
            Ok(match i % 10 {
                0..=6 => {
                    let m = random_presentation(&mut rng, modules % 3, &catalogue)?;
                    modules += 1;
                    Instance::Module(m)
                }
                7 | 8 => Instance::Table(random_table(&mut rng, &rings)?),
                _ => {
                    let k = rng.gen_range(0..=12);
                    Instance::Ordinal(if rng.gen_bool(0.5) {
                        Ordinal::nat(k)
                    } else {
                        Ordinal::omega_plus(k)
                    })
                }
            })
        })
        .collect()
}

/// Curated controls followed by `budget` generated instances.
pub fn default_corpus(seed: u64, budget: usize) -> Result<Vec<Instance>> {
    let mut out = negative_controls();
    out.extend(generate_corpus(seed, budget)?);
    Ok(out)
}

/// Hand-picked instances at hypothesis boundaries.
pub fn negative_controls() -> Vec<Instance> {
    let zloc = |ps: &[u64]| RingInstance::zloc(ps).expect("primes");
    let zmod = |n| RingInstance::zmod(n).expect("modulus");
    let xy = {
        let ring = zmod(2);
        let f = ring.finite().expect("finite");
        MultilinearTable::from_fn(ring.clone(), 2, 1, 1, |x| vec![f.mul(&x[0][0], &x[1][0])])
            .expect("tiny table")
    };
    vec![
        Instance::Module(Presentation::new(zloc(&[2, 3]), 1, vec![vec![2]]).expect("valid")),
        Instance::Module(Presentation::diagonal(zloc(&[2, 3]), &[6]).expect("valid")),
        Instance::Module(Presentation::diagonal(zloc(&[2]), &[4, 6]).expect("valid")),
        Instance::Module(Presentation::new(zmod(4), 1, vec![vec![2]]).expect("valid")),
        Instance::Module(Presentation::new(zmod(12), 1, vec![vec![4]]).expect("valid")),
        Instance::Table(xy),
        Instance::Ordinal(Ordinal::OMEGA),
        Instance::Ordinal(Ordinal::omega_plus(1)),
        Instance::Ordinal(Ordinal::ZERO),
    ]
}
