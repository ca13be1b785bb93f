#![allow(dead_code)]

use std::path::PathBuf;

use kappa_reduce::files;
use kappa_reduce::reduce::{self, BorderPolicy, GraphSystem, ReductionContext};
use kappa_reduce::{Alphabet, Delta, Element, Factor, FinSemigroup, GeneratorMap, KTerm, Letter};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn graph(name: &str) -> GraphSystem {
    files::load_graph(&fixture(name)).unwrap()
}

pub const FIXTURES: [&str; 5] = [
    "f1.toml",
    "f2.toml",
    "f3.toml",
    "mixed.toml",
    "longest.toml",
];

/// Index and period of `s` by listing its powers until one repeats.
pub fn index_period(s: &FinSemigroup, x: Element) -> (usize, usize) {
    let mut powers = vec![x];
    loop {
        let next = s.mul(*powers.last().unwrap(), x);
        if let Some(p) = powers.iter().position(|&y| y == next) {
            return (p + 1, powers.len() - p);
        }
        powers.push(next);
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Three exponents `N` with `x^{N−1} = x^{ω−1}` for every `x` in `s`:
/// multiples of every period, at least `slack` above every index.
pub fn valid_ns(s: &FinSemigroup, slack: usize) -> [usize; 3] {
    let (mut lcm, mut idx) = (1, 1);
    for x in s.elements() {
        let (i, p) = index_period(s, x);
        lcm = lcm / gcd(lcm, p) * p;
        idx = idx.max(i);
    }
    let c = (idx + slack).div_ceil(lcm).max(1);
    [c * lcm, (c + 1) * lcm, (c + 2) * lcm]
}

pub fn delta(s: &FinSemigroup, alphabet: &Alphabet, images: &[usize]) -> Delta {
    let gens = GeneratorMap::new(
        alphabet.clone(),
        images.iter().map(|&i| Element(i)).collect(),
        s,
    )
    .unwrap();
    Delta::new(s.clone(), gens)
}

/// Every assignment of the letters of `alphabet` to elements of `s`.
pub fn all_deltas(s: &FinSemigroup, alphabet: &Alphabet) -> Vec<Delta> {
    let n = alphabet.len() as u32;
    (0..s.size().pow(n))
        .map(|mut code| {
            let images: Vec<usize> = (0..n)
                .map(|_| {
                    let d = code % s.size();
                    code /= s.size();
                    d
                })
                .collect();
            delta(s, alphabet, &images)
        })
        .collect()
}

/// Small semigroups written out by hand, all of size at most 4.
pub fn small_semigroups() -> Vec<FinSemigroup> {
    vec![
        FinSemigroup::min_semilattice(2),
        FinSemigroup::min_semilattice(3),
        FinSemigroup::cyclic_group(2),
        FinSemigroup::cyclic_group(3),
        FinSemigroup::cyclic_group(4),
        FinSemigroup::cyclic_group(2).adjoin_identity(),
        // left zero, right zero
        FinSemigroup::from_fn(2, |x, _| x).unwrap(),
        FinSemigroup::from_fn(3, |_, y| y).unwrap(),
        // null semigroup with zero 0
        FinSemigroup::from_fn(3, |_, _| 0).unwrap(),
        // monogenic semigroup of index 2 and period 2: a, a², a³, a⁴=a²
        FinSemigroup::from_fn(3, |x, y| {
            let e = x + y + 2;
            if e <= 3 {
                e - 1
            } else {
                (e - 2) % 2 + 1
            }
        })
        .unwrap(),
    ]
}

/// A random transformation semigroup with `gens` generators on up to
/// `degree` points, of size at most `cap`.
pub fn random_semigroup(
    rng: &mut ChaCha8Rng,
    degree: usize,
    gens: usize,
    cap: usize,
) -> FinSemigroup {
    loop {
        let d = rng.gen_range(2..=degree);
        let maps: Vec<Vec<usize>> = (0..gens)
            .map(|_| (0..d).map(|_| rng.gen_range(0..d)).collect())
            .collect();
        if let Some((s, _)) = FinSemigroup::from_transformations(&maps, cap) {
            return s;
        }
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, letters: u16, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| Letter(rng.gen_range(0..letters)))
        .collect()
}

/// A random non-empty term with (ω−1)-powers nested at most `depth` deep.
pub fn random_term(rng: &mut ChaCha8Rng, letters: u16, depth: usize) -> KTerm {
    let n = rng.gen_range(1..=3);
    let mut fs = Vec::new();
    for _ in 0..n {
        if depth > 0 && rng.gen_bool(0.4) {
            fs.push(Factor::Pow(random_term(rng, letters, depth - 1)));
        } else {
            fs.push(Factor::Letter(Letter(rng.gen_range(0..letters))));
        }
    }
    KTerm::from_factors(fs)
}

/// Value in `S¹` of a possibly empty product, `None` standing for 1.
pub fn times(s: &FinSemigroup, x: Option<Element>, y: Option<Element>) -> Option<Element> {
    match (x, y) {
        (Some(a), Some(b)) => Some(s.mul(a, b)),
        (a, None) => a,
        (None, b) => b,
    }
}

pub fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

/// The simplified system of a fixture and its reduction context.
pub fn context(name: &str, policy: BorderPolicy) -> (GraphSystem, ReductionContext) {
    let g = graph(name);
    let (s, _) = reduce::simplify(&g).unwrap();
    let ctx = reduce::compute_context(&s, reduce::ell_eta(&g), policy, None).unwrap();
    (s, ctx)
}
