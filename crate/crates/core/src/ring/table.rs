//! Finite commutative rings given by explicit addition and multiplication tables.

use crate::error::{check_cap, Error, Result};
use crate::ring::arith::{CommRing, Field, ZModRing};

/// Largest table accepted at construction (validation is cubic in the size).
pub const TABLE_SIZE_CAP: usize = 256;

/// Cap for ideal and prime enumeration.
pub const ENUM_CAP: usize = 16;

/// A sorted list of element indices.
pub type ElementSet = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRing {
    labels: Vec<String>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
}

impl TableRing {
    /// Validates the tables as a commutative unital ring.
    pub fn new(labels: Vec<String>, add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Validation("ring table has no elements".into()));
        }
        check_cap("table ring size", n as u128, TABLE_SIZE_CAP as u128)?;
        for (name, t) in [("add", &add), ("mul", &mul)] {
            if t.len() != n || t.iter().any(|row| row.len() != n) {
                return Err(Error::Validation(format!("{name} table is not {n}x{n}")));
            }
            if t.iter().flatten().any(|&x| x >= n) {
                return Err(Error::Validation(format!(
                    "{name} table has an entry out of range"
                )));
            }
        }
        let axiom = |name: &str| Error::Validation(format!("table violates {name}"));
        let range = || 0..n;
        for a in range() {
            for b in range() {
                if add[a][b] != add[b][a] {
                    return Err(axiom("commutativity of addition"));
                }
                if mul[a][b] != mul[b][a] {
                    return Err(axiom("commutativity of multiplication"));
                }
                for c in range() {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return Err(axiom("associativity of addition"));
                    }
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(axiom("associativity of multiplication"));
                    }
                    if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]] {
                        return Err(axiom("distributivity"));
                    }
                }
            }
        }
        let zero = range()
            .find(|&z| range().all(|a| add[z][a] == a))
            .ok_or_else(|| axiom("existence of an additive identity"))?;
        let one = range()
            .find(|&u| range().all(|a| mul[u][a] == a))
            .ok_or_else(|| axiom("existence of a multiplicative identity"))?;
        let mut neg = Vec::with_capacity(n);
        for a in range() {
            neg.push(
                range()
                    .find(|&b| add[a][b] == zero)
                    .ok_or_else(|| axiom("existence of additive inverses"))?,
            );
        }
        Ok(TableRing {
            labels,
            add,
            mul,
            neg,
            zero,
            one,
        })
    }

    fn from_ops(
        labels: Vec<String>,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = labels.len();
        let add_t = (0..n)
            .map(|a| (0..n).map(|b| add(a, b)).collect())
            .collect();
        let mul_t = (0..n)
            .map(|a| (0..n).map(|b| mul(a, b)).collect())
            .collect();
        TableRing::new(labels, add_t, mul_t)
    }

    /// The table of `Z/nZ`, element `i` being the residue `i`.
    pub fn zmod(n: usize) -> Result<Self> {
        TableRing::from_ops(
            (0..n).map(|i| i.to_string()).collect(),
            |a, b| (a + b) % n,
            |a, b| (a * b) % n,
        )
    }

    /// `F_p[x]/(x^d + c_{d-1} x^{d-1} + ... + c_0)` with `low_coeffs = [c_0, .., c_{d-1}]`.
    pub fn poly_quotient(p: usize, low_coeffs: &[usize]) -> Result<Self> {
        let d = low_coeffs.len();
        let size = p
            .checked_pow(d as u32)
            .ok_or(Error::Overflow("poly_quotient"))?;
        check_cap("table ring size", size as u128, TABLE_SIZE_CAP as u128)?;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..d)
                .map(|_| {
                    let r = x % p;
                    x /= p;
                    r
                })
                .collect()
        };
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
        let label = |x: usize| -> String {
            let terms: Vec<String> = digits(x)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| match (i, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => "x".into(),
                    (1, c) => format!("{c}x"),
                    (i, 1) => format!("x^{i}"),
                    (i, c) => format!("{c}x^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        };
        let add = |a: usize, b: usize| {
            let (u, v) = (digits(a), digits(b));
            encode(&(0..d).map(|i| (u[i] + v[i]) % p).collect::<Vec<_>>())
        };
        let mul = |a: usize, b: usize| {
            let (u, v) = (digits(a), digits(b));
            let mut prod = vec![0usize; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    prod[i + j] = (prod[i + j] + u[i] * v[j]) % p;
                }
            }
            for k in (d..2 * d).rev() {
                let c = prod[k];
                if c != 0 {
                    prod[k] = 0;
                    for (i, &lc) in low_coeffs.iter().enumerate() {
                        let t = prod[k - d + i] + (p - (c * lc) % p);
                        prod[k - d + i] = t % p;
                    }
                }
            }
            encode(&prod[..d])
        };
        TableRing::from_ops((0..size).map(label).collect(), add, mul)
    }

    /// Direct product, elements ordered lexicographically.
    pub fn product(a: &TableRing, b: &TableRing) -> Result<Self> {
        let nb = b.size();
        let labels = (0..a.size() * nb)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        TableRing::from_ops(
            labels,
            |x, y| a.add[x / nb][y / nb] * nb + b.add[x % nb][y % nb],
            |x, y| a.mul[x / nb][y / nb] * nb + b.mul[x % nb][y % nb],
        )
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn zero_elem(&self) -> usize {
        self.zero
    }

    pub fn one_elem(&self) -> usize {
        self.one
    }

    pub fn label_of(&self, set: &[usize]) -> String {
        let names: Vec<&str> = set.iter().map(|&i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Ideal generated by `gens`: the additive closure of all products `r*g`.
    pub fn ideal_generated(&self, gens: &[usize]) -> ElementSet {
        let n = self.size();
        let mut steps: Vec<usize> = Vec::new();
        for &g in gens {
            for r in 0..n {
                steps.push(self.mul[r][g]);
            }
        }
        steps.sort_unstable();
        steps.dedup();
        self.additive_closure(&steps)
    }

    fn additive_closure(&self, steps: &[usize]) -> ElementSet {
        let n = self.size();
        let mut member = vec![false; n];
        member[self.zero] = true;
        let mut stack = vec![self.zero];
        while let Some(x) = stack.pop() {
            for &s in steps {
                let y = self.add[x][s];
                if !member[y] {
                    member[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..n).filter(|&i| member[i]).collect()
    }

    /// All ideals, by closing ever larger generator sets starting from zero.
    pub fn oracle_enum_ideals(&self) -> Result<Vec<ElementSet>> {
        check_cap(
            "table ring size for ideal enumeration",
            self.size() as u128,
            ENUM_CAP as u128,
        )?;
        let mut found = vec![self.ideal_generated(&[])];
        let mut i = 0;
        while i < found.len() {
            let current = found[i].clone();
            for a in 0..self.size() {
                if current.binary_search(&a).is_err() {
                    let mut gens = current.clone();
                    gens.push(a);
                    let next = self.ideal_generated(&gens);
                    if !found.contains(&next) {
                        found.push(next);
                    }
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(found)
    }

    /// Proper and closed against products: `ab ∈ I` forces `a ∈ I` or `b ∈ I`.
    pub fn is_prime_ideal(&self, ideal: &[usize]) -> bool {
        let n = self.size();
        let inside = |x: usize| ideal.binary_search(&x).is_ok();
        if inside(self.one) {
            return false;
        }
        (0..n).all(|a| inside(a) || (0..n).all(|b| inside(b) || !inside(self.mul[a][b])))
    }

    pub fn primes(&self) -> Result<Vec<ElementSet>> {
        Ok(self
            .oracle_enum_ideals()?
            .into_iter()
            .filter(|i| self.is_prime_ideal(i))
            .collect())
    }

    /// Quotient `R/I` with the projection `R -> R/I`; classes are indexed by
    /// first appearance.
    pub fn quotient(&self, ideal: &[usize]) -> Result<(TableRing, Vec<usize>)> {
        let n = self.size();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for r in 0..n {
            if class[r] == usize::MAX {
                let c = reps.len();
                reps.push(r);
                for &i in ideal {
                    class[self.add[r][i]] = c;
                }
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("{}+I", self.labels[r]))
            .collect();
        let q = TableRing::from_ops(
            labels,
            |a, b| class[self.add[reps[a]][reps[b]]],
            |a, b| class[self.mul[reps[a]][reps[b]]],
        )?;
        Ok((q, class))
    }

    pub fn is_field(&self) -> bool {
        let n = self.size();
        n > 1 && (0..n).all(|a| a == self.zero || (0..n).any(|b| self.mul[a][b] == self.one))
    }

    pub fn characteristic(&self) -> u64 {
        let mut x = self.one;
        let mut k = 1u64;
        while x != self.zero {
            x = self.add[x][self.one];
            k += 1;
        }
        k
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size()).filter(|&e| self.mul[e][e] == e).collect()
    }

    /// Nonzero idempotents with no smaller nonzero idempotent below them.
    pub fn primitive_idempotents(&self) -> Vec<usize> {
        let idem = self.idempotents();
        idem.iter()
            .copied()
            .filter(|&e| e != self.zero)
            .filter(|&e| {
                idem.iter().all(|&f| {
                    let fe = self.mul[f][e];
                    fe == self.zero || fe == e
                })
            })
            .collect()
    }

    /// Local factor `R e` at `prime`, where `e` is the primitive idempotent
    /// outside `prime`, and the projection `r -> r e`.
    pub fn local_component(&self, prime: &[usize]) -> Result<(TableRing, Vec<usize>)> {
        if !self.is_prime_ideal(prime) {
            return Err(Error::Domain(format!(
                "{} is not a prime ideal",
                self.label_of(prime)
            )));
        }
        let outside: Vec<usize> = self
            .primitive_idempotents()
            .into_iter()
            .filter(|e| prime.binary_search(e).is_err())
            .collect();
        let [e] = outside[..] else {
            return Err(Error::Validation(format!(
                "idempotent decomposition failed at {}: {} primitive idempotents outside the prime",
                self.label_of(prime),
                outside.len()
            )));
        };
        let mut image: Vec<usize> = (0..self.size()).map(|r| self.mul[r][e]).collect::<Vec<_>>();
        image.sort_unstable();
        image.dedup();
        let index = |x: usize| {
            image
                .binary_search(&x)
                .expect("closed under the idempotent")
        };
        let labels = image.iter().map(|&x| self.labels[x].clone()).collect();
        let local = TableRing::from_ops(
            labels,
            |a, b| index(self.add[image[a]][image[b]]),
            |a, b| index(self.mul[image[a]][image[b]]),
        )?;
        let projection = (0..self.size()).map(|r| index(self.mul[r][e])).collect();
        Ok((local, projection))
    }
}

impl CommRing for TableRing {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        self.add[*a][*b]
    }
    fn neg(&self, a: &usize) -> usize {
        self.neg[*a]
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul[*a][*b]
    }
}

impl Field for TableRing {
    fn inv(&self, a: &usize) -> Option<usize> {
        (0..self.size()).find(|&b| self.mul[*a][b] == self.one)
    }
}

/// Finite ring arithmetic on element indices, over either backend.
#[derive(Clone, Copy, Debug)]
pub enum FiniteRing<'a> {
    ZMod(ZModRing),
    Table(&'a TableRing),
}

impl FiniteRing<'_> {
    pub fn size(&self) -> usize {
        match self {
            FiniteRing::ZMod(z) => z.n as usize,
            FiniteRing::Table(t) => t.size(),
        }
    }
}

impl CommRing for FiniteRing<'_> {
    type Elem = usize;

    fn zero(&self) -> usize {
        match self {
            FiniteRing::ZMod(_) => 0,
            FiniteRing::Table(t) => t.zero,
        }
    }
    fn one(&self) -> usize {
        match self {
            FiniteRing::ZMod(z) => z.one() as usize,
            FiniteRing::Table(t) => t.one,
        }
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        match self {
            FiniteRing::ZMod(z) => z.add(&(*a as u64), &(*b as u64)) as usize,
            FiniteRing::Table(t) => t.add[*a][*b],
        }
    }
    fn neg(&self, a: &usize) -> usize {
        match self {
            FiniteRing::ZMod(z) => z.neg(&(*a as u64)) as usize,
            FiniteRing::Table(t) => t.neg[*a],
        }
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        match self {
            FiniteRing::ZMod(z) => z.mul(&(*a as u64), &(*b as u64)) as usize,
            FiniteRing::Table(t) => t.mul[*a][*b],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_counts() {
        assert_eq!(
            TableRing::zmod(6)
                .unwrap()
                .oracle_enum_ideals()
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            TableRing::zmod(4)
                .unwrap()
                .oracle_enum_ideals()
                .unwrap()
                .len(),
            3
        );
        let f4 = TableRing::poly_quotient(2, &[1, 1]).unwrap();
        assert!(f4.is_field());
        assert_eq!(f4.oracle_enum_ideals().unwrap().len(), 2);
        let big = TableRing::zmod(17).unwrap();
        assert!(matches!(
            big.oracle_enum_ideals(),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn validation_names_the_axiom() {
        let labels = vec!["a".to_string(), "b".to_string()];
        // Multiplication without identity.
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![0, 0], vec![0, 0]];
        let err = TableRing::new(labels.clone(), add.clone(), mul).unwrap_err();
        assert!(err.to_string().contains("multiplicative identity"), "{err}");
        let mul = vec![vec![0, 1], vec![0, 1]];
        let err = TableRing::new(labels, add, mul).unwrap_err();
        assert!(
            err.to_string().contains("commutativity of multiplication"),
            "{err}"
        );
    }

    #[test]
    fn product_and_components() {
        let r =
            TableRing::product(&TableRing::zmod(2).unwrap(), &TableRing::zmod(4).unwrap()).unwrap();
        assert_eq!(r.size(), 8);
        let primes = r.primes().unwrap();
        assert_eq!(primes.len(), 2);
        let mut sizes: Vec<usize> = primes
            .iter()
            .map(|p| r.local_component(p).unwrap().0.size())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
        assert_eq!(r.primitive_idempotents().len(), 2);
    }

    #[test]
    fn quotient_residue_fields() {
        let r = TableRing::zmod(12).unwrap();
        let p2 = r.ideal_generated(&[2]);
        let (q, proj) = r.quotient(&p2).unwrap();
        assert!(q.is_field());
        assert_eq!(q.size(), 2);
        assert_eq!(proj[5], proj[1]);
        assert_eq!(q.characteristic(), 2);
    }

    #[test]
    fn poly_quotients() {
        let dual = TableRing::poly_quotient(2, &[0, 0]).unwrap(); // F2[x]/x^2
        assert!(!dual.is_field());
        assert_eq!(dual.primes().unwrap().len(), 1);
        let f8 = TableRing::poly_quotient(2, &[1, 1, 0]).unwrap(); // x^3+x+1
        assert!(f8.is_field());
        let split = TableRing::poly_quotient(2, &[0, 1]).unwrap(); // x^2+x
        assert_eq!(split.primes().unwrap().len(), 2);
    }
}
