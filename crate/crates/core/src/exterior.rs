//! Exterior powers: presentations of `Λⁿ(M)`, compound matrices, the
//! antisymmetrization map into `M^{⊗n}`, and exhaustive checks on explicit
//! multilinear maps.

use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::linalg::{determinant, gaussian_rank};
use crate::module::Presentation;
use crate::ring::arith::{CommRing, Rationals};
use crate::ring::{PrimeIdeal, RingInstance};

/// Cap on generator and relation counts of exterior presentations.
pub const WEDGE_CAP: u128 = 4096;

/// Cap on `g^n` rows of the antisymmetrization matrix.
pub const TENSOR_CAP: u128 = 4096;

/// Cap on the number of evaluations in multilinear table checks.
pub const TABLE_CAP: u128 = 1 << 22;

/// Strictly increasing index tuples of length `n` drawn from `0..g`, in lexicographic order.
pub fn wedge_indices(g: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, g: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..g {
            cur.push(i);
            rec(i + 1, g, n, cur, out);
            cur.pop();
        }
    }
    rec(0, g, n, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Parity of the permutation sorting `seq` (distinct entries), by merge sort
/// inversion counting. `true` for odd.
pub fn sort_parity(seq: &[usize]) -> bool {
    fn count(v: &mut [usize]) -> usize {
        if v.len() <= 1 {
            return 0;
        }
        let mid = v.len() / 2;
        let mut inv = count(&mut v[..mid]) + count(&mut v[mid..]);
        let mut merged = Vec::with_capacity(v.len());
        let (mut i, mut j) = (0, mid);
        while i < mid && j < v.len() {
            if v[i] <= v[j] {
                merged.push(v[i]);
                i += 1;
            } else {
                inv += mid - i;
                merged.push(v[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&v[i..mid]);
        merged.extend_from_slice(&v[j..]);
        v.copy_from_slice(&merged);
        inv
    }
    count(&mut seq.to_vec()) % 2 == 1
}

/// `e_i ∧ e_J` as `(sign is negative, sorted index)`, or `None` when `i ∈ J`.
fn wedge_with(i: usize, j: &[usize]) -> Option<(bool, Vec<usize>)> {
    if j.contains(&i) {
        return None;
    }
    let mut seq = Vec::with_capacity(j.len() + 1);
    seq.push(i);
    seq.extend_from_slice(j);
    let odd = sort_parity(&seq);
    seq.sort_unstable();
    Some((odd, seq))
}

/// Presentation of `Λⁿ(M)`: generators are the wedges `e_I`, relations are
/// `r ∧ e_J` for every relation `r` and every `(n-1)`-wedge `J`.
pub fn ext_presentation(m: &Presentation, n: usize) -> Result<Presentation> {
    let ring = m.ring();
    if n == 0 {
        return Ok(Presentation::free(ring.clone(), 1));
    }
    let g = m.generators();
    let gens = binomial(g, n);
    check_cap("wedge generators", gens, WEDGE_CAP)?;
    check_cap(
        "wedge relations",
        (m.relations().len() as u128).saturating_mul(binomial(g, n - 1)),
        WEDGE_CAP,
    )?;
    let basis = wedge_indices(g, n);
    let position = |idx: &[usize]| {
        basis
            .binary_search_by(|b| b.as_slice().cmp(idx))
            .expect("sorted wedge")
    };
    let zero = ring.zero_entry();
    let mut rows = Vec::new();
    for r in m.relations() {
        for j in wedge_indices(g, n - 1) {
            let mut row = vec![zero; basis.len()];
            for (i, &a) in r.iter().enumerate() {
                if let Some((odd, idx)) = wedge_with(i, &j) {
                    // Each sorted wedge arises from at most one i for fixed J.
                    row[position(&idx)] = if odd { ring.neg_entry(a) } else { a };
                }
            }
            rows.push(row);
        }
    }
    Presentation::new(ring.clone(), basis.len(), rows)
}

/// `Λⁿ` of a matrix: entry `(I, J)` is the minor on rows `I` and columns `J`.
pub fn compound_matrix<R: CommRing>(ring: &R, a: &[Vec<R::Elem>], n: usize) -> Vec<Vec<R::Elem>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let col_idx = wedge_indices(cols, n);
    wedge_indices(rows, n)
        .iter()
        .map(|ri| {
            col_idx
                .iter()
                .map(|ci| {
                    let sub: Vec<Vec<R::Elem>> = ri
                        .iter()
                        .map(|&i| ci.iter().map(|&j| a[i][j].clone()).collect())
                        .collect();
                    determinant(ring, &sub)
                })
                .collect()
        })
        .collect()
}

/// Position of `(i_1, ..., i_n)` in the tensor basis of `(R^g)^{⊗n}`.
pub fn tensor_index(g: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * g + i)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Matrix of `x_I ↦ Σ_σ sgn(σ) x_{σ(I)}`, tensor rows by wedge columns.
pub fn delta_matrix(g: usize, n: usize, ring: &RingInstance) -> Result<Vec<Vec<i64>>> {
    let rows = (g as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_cap("tensor rows", rows, TENSOR_CAP)?;
    let basis = wedge_indices(g, n);
    let (one, minus_one) = (ring.one_entry(), ring.neg_entry(ring.one_entry()));
    let mut out = vec![vec![ring.zero_entry(); basis.len()]; rows as usize];
    let perms = permutations(n);
    for (c, w) in basis.iter().enumerate() {
        for s in &perms {
            let idx: Vec<usize> = s.iter().map(|&k| w[k]).collect();
            out[tensor_index(g, &idx)][c] = if sort_parity(s) { minus_one } else { one };
        }
    }
    Ok(out)
}

/// Whether `delta_matrix(g, n)` is injective: an exhaustive kernel scan over
/// finite rings, rational rank over `ZLoc` (a domain).
pub fn delta_kernel_is_zero(
    g: usize,
    n: usize,
    ring: &RingInstance,
    scan_cap: u128,
) -> Result<bool> {
    let d = delta_matrix(g, n, ring)?;
    let cols = binomial(g, n) as usize;
    match ring.finite() {
        None => {
            let q: Vec<Vec<_>> = d
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| num_rational::BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect();
            Ok(gaussian_rank(&Rationals, q) == cols)
        }
        Some(f) => {
            let size = f.size();
            let total = (size as u128).checked_pow(cols as u32).unwrap_or(u128::MAX);
            check_cap("kernel scan", total, scan_cap)?;
            let zero = f.zero();
            for mut code in 1..total as usize {
                let v: Vec<usize> = (0..cols)
                    .map(|_| {
                        let x = code % size;
                        code /= size;
                        x
                    })
                    .collect();
                if v.iter().all(|&x| x == zero) {
                    continue;
                }
                let image_zero = d.iter().all(|row| {
                    row.iter()
                        .zip(&v)
                        .fold(zero, |acc, (&a, x)| f.add(&acc, &f.mul(&(a as usize), x)))
                        == zero
                });
                if image_zero {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeVerdict {
    pub lhs: usize,
    pub rhs: usize,
    pub equal: bool,
}

/// `dim Λⁿ(M) ⊗ κ(p)` against `C(dim M ⊗ κ(p), n)`.
pub fn base_change_fiber_check(
    m: &Presentation,
    n: usize,
    p: &PrimeIdeal,
) -> Result<BaseChangeVerdict> {
    let lhs = ext_presentation(m, n)?.fiber_dim(p)?;
    let rhs = binomial(m.fiber_dim(p)?, n) as usize;
    Ok(BaseChangeVerdict {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// An explicit map `(R^s)^n -> R^t` over a finite ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearTable {
    ring: RingInstance,
    arity: usize,
    source_rank: usize,
    target_rank: usize,
    /// Indexed by the tuple code `Σ code(x_k) |R^s|^(n-1-k)`.
    values: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AlternatingReport {
    pub multilinear: bool,
    pub alternating: bool,
    pub alternating_adjacent: bool,
    pub skew_symmetric: bool,
}

impl MultilinearTable {
    pub fn new(
        ring: RingInstance,
        arity: usize,
        source_rank: usize,
        target_rank: usize,
        values: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let q = ring
            .finite()
            .ok_or_else(|| Error::Domain("multilinear tables need a finite ring".into()))?
            .size();
        let points = (q as u128)
            .checked_pow(source_rank as u32)
            .unwrap_or(u128::MAX);
        let tuples = points.checked_pow(arity as u32).unwrap_or(u128::MAX);
        check_cap("table tuples", tuples, TABLE_CAP)?;
        check_cap(
            "table evaluations",
            tuples.saturating_mul(points),
            TABLE_CAP,
        )?;
        if values.len() as u128 != tuples {
            return Err(Error::Validation(format!(
                "table has {} values for {tuples} tuples",
                values.len()
            )));
        }
        if let Some(v) = values
            .iter()
            .find(|v| v.len() != target_rank || v.iter().any(|&x| x >= q))
        {
            return Err(Error::Validation(format!(
                "table value {v:?} is not in R^{target_rank}"
            )));
        }
        Ok(MultilinearTable {
            ring,
            arity,
            source_rank,
            target_rank,
            values,
        })
    }

    pub fn from_fn(
        ring: RingInstance,
        arity: usize,
        source_rank: usize,
        target_rank: usize,
        f: impl Fn(&[Vec<usize>]) -> Vec<usize>,
    ) -> Result<Self> {
        let q = ring
            .finite()
            .ok_or_else(|| Error::Domain("multilinear tables need a finite ring".into()))?
            .size();
        let points = (q as u128)
            .checked_pow(source_rank as u32)
            .unwrap_or(u128::MAX);
        let tuples = points.checked_pow(arity as u32).unwrap_or(u128::MAX);
        check_cap("table tuples", tuples, TABLE_CAP)?;
        let values = (0..tuples as usize)
            .map(|code| f(&decode_tuple(code, arity, source_rank, q)))
            .collect();
        MultilinearTable::new(ring, arity, source_rank, target_rank, values)
    }

    pub fn ring(&self) -> &RingInstance {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn values(&self) -> &[Vec<usize>] {
        &self.values
    }

    fn q(&self) -> usize {
        self.ring.finite().expect("checked at construction").size()
    }

    fn point_code(&self, x: &[usize]) -> usize {
        x.iter().rev().fold(0, |acc, &v| acc * self.q() + v)
    }

    fn eval(&self, xs: &[Vec<usize>]) -> &[usize] {
        let points = self.q().pow(self.source_rank as u32);
        let code = xs
            .iter()
            .fold(0, |acc, x| acc * points + self.point_code(x));
        &self.values[code]
    }

    fn tuples(&self) -> impl Iterator<Item = Vec<Vec<usize>>> + '_ {
        (0..self.values.len()).map(|c| decode_tuple(c, self.arity, self.source_rank, self.q()))
    }

    fn points(&self) -> Vec<Vec<usize>> {
        let q = self.q();
        (0..q.pow(self.source_rank as u32))
            .map(|c| decode_point(c, self.source_rank, q))
            .collect()
    }

    pub fn is_multilinear(&self) -> bool {
        let f = self.ring.finite().expect("checked at construction");
        let points = self.points();
        let q = f.size();
        let add = |a: &[usize], b: &[usize]| -> Vec<usize> {
            a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
        };
        for t in self.tuples() {
            for k in 0..self.arity {
                for y in &points {
                    let mut sum = t.clone();
                    sum[k] = add(&t[k], y);
                    let mut other = t.clone();
                    other[k] = y.clone();
                    if self.eval(&sum) != add(self.eval(&t), self.eval(&other)).as_slice() {
                        return false;
                    }
                }
                for r in 0..q {
                    let mut scaled = t.clone();
                    scaled[k] = t[k].iter().map(|x| f.mul(&r, x)).collect();
                    let rhs: Vec<usize> = self.eval(&t).iter().map(|x| f.mul(&r, x)).collect();
                    if self.eval(&scaled) != rhs.as_slice() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn vanishes_when(&self, pair: impl Fn(usize, usize) -> bool) -> bool {
        let zero = self.ring.finite().expect("checked at construction").zero();
        self.tuples().all(|t| {
            let repeated =
                (0..self.arity).any(|i| (i + 1..self.arity).any(|j| pair(i, j) && t[i] == t[j]));
            !repeated || self.eval(&t).iter().all(|&x| x == zero)
        })
    }

    /// Zero whenever two coordinates agree.
    pub fn is_alternating(&self) -> bool {
        self.vanishes_when(|_, _| true)
    }

    /// Zero whenever two adjacent coordinates agree.
    pub fn is_alternating_adjacent(&self) -> bool {
        self.vanishes_when(|i, j| j == i + 1)
    }

    /// `f(x_σ) = sgn(σ) f(x)` for every permutation `σ`.
    pub fn is_skew_symmetric(&self) -> bool {
        let f = self.ring.finite().expect("checked at construction");
        let perms = permutations(self.arity);
        self.tuples().all(|t| {
            let base = self.eval(&t);
            perms.iter().all(|s| {
                let permuted: Vec<Vec<usize>> = s.iter().map(|&k| t[k].clone()).collect();
                let expected: Vec<usize> = if sort_parity(s) {
                    base.iter().map(|x| f.neg(x)).collect()
                } else {
                    base.to_vec()
                };
                self.eval(&permuted) == expected.as_slice()
            })
        })
    }

    pub fn alternating_report(&self) -> AlternatingReport {
        AlternatingReport {
            multilinear: self.is_multilinear(),
            alternating: self.is_alternating(),
            alternating_adjacent: self.is_alternating_adjacent(),
            skew_symmetric: self.is_skew_symmetric(),
        }
    }
}

fn decode_point(mut code: usize, rank: usize, q: usize) -> Vec<usize> {
    (0..rank)
        .map(|_| {
            let x = code % q;
            code /= q;
            x
        })
        .collect()
}

fn decode_tuple(mut code: usize, arity: usize, rank: usize, q: usize) -> Vec<Vec<usize>> {
    if arity == 0 {
        return Vec::new();
    }
    let points = q.pow(rank as u32);
    let mut out: Vec<Vec<usize>> = (0..arity)
        .map(|_| {
            let c = code % points;
            code /= points;
            decode_point(c, rank, q)
        })
        .collect();
    out.reverse();
    out
}
