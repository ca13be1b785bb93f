//! Finite semigroups given by multiplication tables, and evaluation of
//! words and κ-terms under a generator map `δ`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::kterm::{Factor, KTerm};
use crate::wordkit::{Alphabet, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

/// A finite semigroup as a dense row-major table. When
/// `has_adjoined_identity` is set, element 0 is a two-sided identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSemigroup {
    size: usize,
    table: Vec<usize>,
    has_adjoined_identity: bool,
}

/// First triple `(x, y, z)` with `(xy)z != x(yz)`.
fn associativity_witness(size: usize, table: &[usize]) -> Option<(usize, usize, usize)> {
    let m = |x: usize, y: usize| table[x * size + y];
    for x in 0..size {
        for y in 0..size {
            let xy = m(x, y);
            for z in 0..size {
                if m(xy, z) != m(x, m(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

fn check_dimensions(size: usize, table: &[usize]) -> Result<()> {
    if size == 0 {
        return Err(Error::Structural("semigroup must be non-empty".into()));
    }
    if table.len() != size * size {
        return Err(Error::Structural(format!(
            "table has {} entries, expected {}",
            table.len(),
            size * size
        )));
    }
    if let Some(bad) = table.iter().find(|&&v| v >= size) {
        return Err(Error::Structural(format!(
            "table entry {bad} out of range 0..{size}"
        )));
    }
    Ok(())
}

fn identity_at_zero(size: usize, table: &[usize]) -> bool {
    (0..size).all(|x| table[x] == x && table[x * size] == x)
}

/// True iff the raw table is associative and, when `identity` is set,
/// element 0 is a two-sided identity.
pub fn verify_table(size: usize, table: &[usize], identity: bool) -> Result<bool> {
    check_dimensions(size, table)?;
    Ok(
        associativity_witness(size, table).is_none()
            && (!identity || identity_at_zero(size, table)),
    )
}

impl FinSemigroup {
    pub fn new(size: usize, table: Vec<usize>, has_adjoined_identity: bool) -> Result<Self> {
        check_dimensions(size, &table)?;
        if let Some((x, y, z)) = associativity_witness(size, &table) {
            return Err(Error::Structural(format!(
                "not associative at ({x}, {y}, {z}): ({x}*{y})*{z} = {} but {x}*({y}*{z}) = {}",
                table[table[x * size + y] * size + z],
                table[x * size + table[y * size + z]]
            )));
        }
        if has_adjoined_identity && !identity_at_zero(size, &table) {
            return Err(Error::Structural("element 0 is not an identity".into()));
        }
        Ok(FinSemigroup {
            size,
            table,
            has_adjoined_identity,
        })
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..size * size).map(|i| f(i / size, i % size)).collect();
        Self::new(size, table, false)
    }

    /// `{0, …, n−1}` under `min`.
    pub fn min_semilattice(n: usize) -> Self {
        Self::from_fn(n, |x, y| x.min(y)).expect("min is associative")
    }

    /// Integers mod `n` under addition.
    pub fn cyclic_group(n: usize) -> Self {
        Self::from_fn(n, |x, y| (x + y) % n).expect("addition is associative")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn has_adjoined_identity(&self) -> bool {
        self.has_adjoined_identity
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size).map(Element)
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        Element(self.table[x.0 * self.size + y.0])
    }

    pub fn is_idempotent(&self, x: Element) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> BTreeSet<Element> {
        self.elements().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// `s^n` for `n ≥ 1`.
    pub fn pow(&self, s: Element, n: usize) -> Element {
        assert!(n >= 1, "pow needs a positive exponent");
        let mut acc = s;
        for _ in 1..n {
            acc = self.mul(acc, s);
        }
        acc
    }

    /// `(index, period)` of the monogenic subsemigroup of `s`: the least
    /// `i` and `p` with `s^{i+p} = s^i`.
    pub fn orbit(&self, s: Element) -> (usize, usize) {
        let mut seen: HashMap<Element, usize> = HashMap::new();
        let mut cur = s;
        let mut n = 1;
        loop {
            if let Some(&first) = seen.get(&cur) {
                return (first, n - first);
            }
            seen.insert(cur, n);
            cur = self.mul(cur, s);
            n += 1;
        }
    }

    /// Least `n ≥ 1` such that `s^n` is idempotent for every `s`.
    pub fn exponent(&self) -> usize {
        (1..)
            .find(|&n| self.elements().all(|s| self.is_idempotent(self.pow(s, n))))
            .expect("finite semigroups have an exponent")
    }

    /// `s^ω`, the idempotent power of `s`.
    pub fn omega(&self, s: Element) -> Element {
        let (index, period) = self.orbit(s);
        self.pow(s, index.div_ceil(period) * period)
    }

    /// `s^{ω−1}`: the inverse of `s·s^ω` in the maximal subgroup of `s^ω`,
    /// read off the power orbit as `s^{m−1}` for a multiple `m` of the
    /// period with `m − 1 ≥ index`.
    pub fn omega_minus_one(&self, s: Element) -> Element {
        let (index, period) = self.orbit(s);
        let m = (index + 1).div_ceil(period) * period;
        self.pow(s, m - 1)
    }

    /// `S¹`: a fresh identity at index 0, old element `i` at index `i + 1`.
    pub fn adjoin_identity(&self) -> FinSemigroup {
        let n = self.size + 1;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = match (x, y) {
                    (0, y) => y,
                    (x, 0) => x,
                    (x, y) => self.table[(x - 1) * self.size + (y - 1)] + 1,
                };
            }
        }
        FinSemigroup {
            size: n,
            table,
            has_adjoined_identity: true,
        }
    }

    /// Direct product; the pair `(x, y)` has index `x * other.size + y`.
    pub fn product(&self, other: &FinSemigroup) -> FinSemigroup {
        let n = self.size * other.size;
        let table = (0..n * n)
            .map(|i| {
                let (p, q) = (i / n, i % n);
                let x = self.mul(Element(p / other.size), Element(q / other.size));
                let y = other.mul(Element(p % other.size), Element(q % other.size));
                x.0 * other.size + y.0
            })
            .collect();
        FinSemigroup {
            size: n,
            table,
            has_adjoined_identity: false,
        }
    }

    /// The transformation semigroup on `{0, …, degree−1}` generated by
    /// `gens` (maps written as image vectors, composed left to right).
    /// Returns the semigroup and the elements corresponding to `gens`, or
    /// `None` if more than `cap` elements arise.
    pub fn from_transformations(
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Option<(FinSemigroup, Vec<Element>)> {
        let mut elems: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut gen_idx = Vec::new();
        for g in gens {
            let i = *index.entry(g.clone()).or_insert_with(|| {
                elems.push(g.clone());
                elems.len() - 1
            });
            gen_idx.push(Element(i));
        }
        let mut frontier = 0;
        while frontier < elems.len() {
            let x = elems[frontier].clone();
            for g in gens {
                let xg: Vec<usize> = x.iter().map(|&p| g[p]).collect();
                if !index.contains_key(&xg) {
                    if elems.len() >= cap {
                        return None;
                    }
                    index.insert(xg.clone(), elems.len());
                    elems.push(xg);
                }
            }
            frontier += 1;
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let xy: Vec<usize> = x.iter().map(|&p| y[p]).collect();
                table[i * n + j] = index[&xy];
            }
        }
        let s = FinSemigroup {
            size: n,
            table,
            has_adjoined_identity: false,
        };
        Some((s, gen_idx))
    }

    /// Value of a non-empty product of elements.
    pub fn fold(&self, xs: impl IntoIterator<Item = Element>) -> Option<Element> {
        xs.into_iter().reduce(|a, b| self.mul(a, b))
    }

    /// Structural evaluation of a κ-term under `image`; `None` for the
    /// empty term.
    pub fn eval_term<L: Clone + Eq>(
        &self,
        term: &KTerm<L>,
        image: &dyn Fn(&L) -> Element,
    ) -> Option<Element> {
        let vals = term.factors().iter().map(|f| match f {
            Factor::Letter(a) => image(a),
            Factor::Pow(x) => {
                let base = self
                    .eval_term(x, image)
                    .expect("(ω−1)-power of a non-empty term");
                self.omega_minus_one(base)
            }
        });
        self.fold(vals)
    }
}

/// The homomorphism `δ` restricted to the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    alphabet: Alphabet,
    image: Vec<Element>,
}

impl GeneratorMap {
    pub fn new(alphabet: Alphabet, image: Vec<Element>, s: &FinSemigroup) -> Result<Self> {
        if image.len() != alphabet.len() {
            return Err(Error::input(format!(
                "{} generator images for an alphabet of {} letters",
                image.len(),
                alphabet.len()
            )));
        }
        if let Some(e) = image.iter().find(|e| e.0 >= s.size()) {
            return Err(Error::input(format!(
                "generator image {} out of range",
                e.0
            )));
        }
        Ok(GeneratorMap { alphabet, image })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, a: Letter) -> Element {
        self.image[a.0 as usize]
    }

    pub fn images(&self) -> &[Element] {
        &self.image
    }

    /// True iff the images generate all of `s`.
    pub fn generates(&self, s: &FinSemigroup) -> bool {
        let mut seen: BTreeSet<Element> = self.image.iter().copied().collect();
        let mut frontier: Vec<Element> = seen.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &self.image {
                let y = s.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.len() == s.size()
    }
}

/// A semigroup together with its generator map: the homomorphism `δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delta {
    pub semigroup: FinSemigroup,
    pub generators: GeneratorMap,
}

impl Delta {
    pub fn new(semigroup: FinSemigroup, generators: GeneratorMap) -> Self {
        Delta {
            semigroup,
            generators,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.generators.alphabet()
    }

    pub fn eval_word(&self, w: &[Letter]) -> Result<Element> {
        if let Some(a) = w
            .iter()
            .find(|a| a.0 as usize >= self.generators.alphabet().len())
        {
            return Err(Error::input(format!("unknown letter index {}", a.0)));
        }
        self.semigroup
            .fold(w.iter().map(|&a| self.generators.image(a)))
            .ok_or_else(|| Error::input("cannot evaluate the empty word in a semigroup"))
    }

    pub fn eval_kterm(&self, term: &KTerm) -> Result<Element> {
        if let Some(a) = term
            .content()
            .into_iter()
            .find(|a| a.0 as usize >= self.generators.alphabet().len())
        {
            return Err(Error::input(format!("unknown letter index {}", a.0)));
        }
        self.semigroup
            .eval_term(term, &|a: &Letter| self.generators.image(*a))
            .ok_or_else(|| Error::input("cannot evaluate the empty term in a semigroup"))
    }

    /// Evaluation in `S¹`: `None` stands for the adjoined identity.
    pub fn eval_monoid(&self, term: &KTerm) -> Result<Option<Element>> {
        if term.is_empty() {
            Ok(None)
        } else {
            self.eval_kterm(term).map(Some)
        }
    }

    pub fn exponent(&self) -> usize {
        self.semigroup.exponent()
    }

    pub fn is_idempotent_word(&self, w: &[Letter]) -> bool {
        self.eval_word(w)
            .map(|e| self.semigroup.is_idempotent(e))
            .unwrap_or(false)
    }
}
