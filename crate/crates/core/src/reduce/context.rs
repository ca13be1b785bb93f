//! Confinality classes, borders and the constants `n_S, p_η, ℓ_η, L, E, Q,
//! q_Q, M, k` of a simplified system.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finsemi::{Delta, Element};
use crate::reduce::graph::GraphSystem;
use crate::superpose::SplitContext;
use crate::wordkit::{self, Alphabet, Border, LeftInfWord, Word};

/// How the representative `y_Δ` of a class is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderPolicy {
    /// `y_Δ = ∞u` with `u` the Lyndon root.
    #[default]
    Periodic,
    /// `y_Δ = ∞u·c` with `c` the longest common prefix of the tails of the
    /// class, unless that word is itself periodic. Produces non-periodic
    /// borders; the projections of vertices are then not preserved in
    /// general.
    Longest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfinalClass {
    pub y: LeftInfWord,
    /// `(vertex, z_v)` with `p_D η v = y·z_v`, by vertex index.
    pub members: Vec<(usize, Word)>,
}

impl ConfinalClass {
    pub fn is_periodic(&self) -> bool {
        self.y.is_periodic()
    }

    pub fn root(&self) -> &Word {
        self.y.root()
    }

    pub fn border(&self, m: usize) -> Border {
        Border {
            word: self.y.suffix(m),
            root: self.is_periodic().then(|| self.y.root().clone()),
        }
    }
}

/// The ∝-classes of the projections `p_D η v`, ordered by first vertex.
pub fn compute_classes(g: &GraphSystem, policy: BorderPolicy) -> Result<Vec<ConfinalClass>> {
    let mut by_root: BTreeMap<Word, Vec<(usize, LeftInfWord)>> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, t) in g.eta.vertices.iter().enumerate() {
        let d = t
            .p_d()
            .ok_or_else(|| Error::input(format!("vertex {} has a finite label", g.vertices[i])))?;
        let root = d.root().clone();
        if !by_root.contains_key(&root) {
            order.push(root.clone());
        }
        by_root.entry(root).or_default().push((i, d));
    }
    Ok(order
        .into_iter()
        .map(|root| {
            let ds = &by_root[&root];
            let common = match policy {
                BorderPolicy::Periodic => Word::empty(),
                BorderPolicy::Longest => longest_common_prefix(ds.iter().map(|(_, d)| d.tail())),
            };
            // ∞u·c is itself periodic when c continues the period of u
            let continues = root.iter().cycle().take(common.len()).eq(common.iter());
            let (y, cut) = if continues {
                (LeftInfWord::periodic(root), 0)
            } else {
                (LeftInfWord::new(root, common.clone()), common.len())
            };
            ConfinalClass {
                y,
                members: ds
                    .iter()
                    .map(|(v, d)| (*v, Word::from(&d.tail()[cut..])))
                    .collect(),
            }
        })
        .collect())
}

fn longest_common_prefix<'a>(mut ws: impl Iterator<Item = &'a Word>) -> Word {
    let Some(first) = ws.next() else {
        return Word::empty();
    };
    let mut n = first.len();
    for w in ws {
        n = n.min(
            first
                .iter()
                .zip(w.iter())
                .take_while(|(a, b)| a == b)
                .count(),
        );
    }
    Word::from(&first[..n])
}

/// Proposition 1 conditions at `m`: borders of distinct classes are
/// distinct words at gap `> q`, and non-periodic borders have self-gap `> q`.
pub fn borders_separated(classes: &[ConfinalClass], m: usize, q: usize) -> bool {
    let ys: Vec<Word> = classes.iter().map(|c| c.y.suffix(m)).collect();
    for i in 0..ys.len() {
        if !classes[i].is_periodic() && gap(&ys[i], &ys[i]) <= q {
            return false;
        }
        for j in i + 1..ys.len() {
            if ys[i] == ys[j] || gap(&ys[i], &ys[j]) <= q {
                return false;
            }
        }
    }
    true
}

fn gap(a: &Word, b: &Word) -> usize {
    wordkit::gap(a, b).expect("equal non-empty lengths")
}

/// Past this length failures of the Proposition 1 conditions cannot occur:
/// a shift by `r ≤ q` fails at `m` only if two distinct ultimately periodic
/// words agree on their last `m − r` letters, which by Fine and Wilf is at
/// most `max tail + 2·max period` letters.
pub fn separation_bound(classes: &[ConfinalClass], q: usize) -> usize {
    let tail = classes.iter().map(|c| c.y.tail().len()).max().unwrap_or(0);
    let period = classes.iter().map(|c| c.y.root().len()).max().unwrap_or(0);
    q + tail + 2 * period
}

/// Least `m₀` such that the Proposition 1 conditions hold for every
/// `m ≥ m₀`.
pub fn find_q_q(classes: &[ConfinalClass], q: usize) -> usize {
    let stab = separation_bound(classes, q) + 1;
    (1..=stab)
        .rev()
        .find(|&m| !borders_separated(classes, m, q))
        .map_or(1, |m| m + 1)
}

/// Length of the longest word with no factor of idempotent value, or
/// `None` if it exceeds `cap`.
pub fn longest_idempotent_free(delta: &Delta, cap: usize) -> Option<usize> {
    let s = &delta.semigroup;
    let gens: BTreeSet<Element> = delta.generators.images().iter().copied().collect();
    // state: set of values of the non-empty suffixes
    let mut level: BTreeSet<BTreeSet<Element>> = BTreeSet::new();
    level.insert(BTreeSet::new());
    for n in 0..=cap {
        let mut next = BTreeSet::new();
        for st in &level {
            for &a in &gens {
                let mut ns: BTreeSet<Element> = st.iter().map(|&x| s.mul(x, a)).collect();
                ns.insert(a);
                if ns.iter().all(|&x| !s.is_idempotent(x)) {
                    next.insert(ns);
                }
            }
        }
        if next.is_empty() {
            return Some(n);
        }
        level = next;
    }
    None
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, Serialize)]
pub struct Constants {
    pub n_s: usize,
    pub p_eta: usize,
    pub ell_eta: usize,
    pub l: usize,
    pub e: usize,
    pub q: usize,
    pub q_q: usize,
    pub m: usize,
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionContext {
    pub constants: Constants,
    pub classes: Vec<ConfinalClass>,
    /// Class index of each vertex of the simplified graph.
    pub class_of: Vec<usize>,
    /// `z_v` of each vertex of the simplified graph.
    pub z: Vec<Word>,
    pub borders: Vec<Border>,
    pub split: SplitContext,
}

impl ReductionContext {
    pub fn k(&self) -> usize {
        self.constants.k
    }

    pub fn l(&self) -> usize {
        self.constants.l
    }

    pub fn class(&self, v: usize) -> &ConfinalClass {
        &self.classes[self.class_of[v]]
    }

    /// The border `y_v` of a vertex.
    pub fn border_of(&self, v: usize) -> &Border {
        &self.borders[self.class_of[v]]
    }

    pub fn roots(&self) -> BTreeSet<Word> {
        self.classes
            .iter()
            .filter(|c| c.is_periodic())
            .map(|c| c.root().clone())
            .collect()
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let c = &self.constants;
        let mut s = format!(
            "n_S = {}\np_eta = {}\nell_eta = {}\nL = {}\nE = {}\nQ = {}\nq_Q = {}\nM = {}\nk = {}\n",
            c.n_s, c.p_eta, c.ell_eta, c.l, c.e, c.q, c.q_q, c.m, c.k
        );
        if self.roots().is_empty() {
            s.push_str("no roots: p_eta = 1\n");
        }
        for (i, cl) in self.classes.iter().enumerate() {
            let b = &self.borders[i];
            s.push_str(&format!(
                "class {}: y = {}, border {} ({})\n",
                i + 1,
                alphabet.show_inf(&cl.y),
                alphabet.show(&b.word),
                match &b.root {
                    Some(u) => format!("periodic, root {}", alphabet.show(u)),
                    None => "non-periodic".to_string(),
                }
            ));
        }
        s
    }
}

/// Computes classes and constants for a simplified system. `ell_eta` is
/// the longest finite label of the original system; `ecap` bounds the
/// search for `E` (default `|S|·n_S + n_S·p_η`).
pub fn compute_context(
    g: &GraphSystem,
    ell_eta: usize,
    policy: BorderPolicy,
    ecap: Option<usize>,
) -> Result<ReductionContext> {
    let classes = compute_classes(g, policy)?;
    let n_s = g.delta.exponent();
    let p_eta = classes
        .iter()
        .filter(|c| c.is_periodic())
        .map(|c| c.root().len())
        .fold(1, lcm);
    let mut class_of = vec![0; g.vertices.len()];
    let mut z = vec![Word::empty(); g.vertices.len()];
    for (ci, c) in classes.iter().enumerate() {
        for (v, zv) in &c.members {
            class_of[*v] = ci;
            z[*v] = zv.clone();
        }
    }
    let l = z
        .iter()
        .map(|w| w.len())
        .chain([ell_eta])
        .max()
        .unwrap_or(0);
    let floor = n_s * p_eta;
    let cap = ecap.unwrap_or(g.delta.semigroup.size() * n_s + floor);
    let free = longest_idempotent_free(&g.delta, cap)
        .ok_or_else(|| Error::Config(format!("E search exceeded the cap {cap}")))?;
    let e = floor.max(free + 1);
    if e > cap {
        return Err(Error::Config(format!("E = {e} exceeds the cap {cap}")));
    }
    let q = l + e;
    let q_q = find_q_q(&classes, q);
    let lower = q_q.max(q + 1);
    let m = lower.div_ceil(p_eta) * p_eta;
    let k = m + q;
    let borders: Vec<Border> = classes.iter().map(|c| c.border(m)).collect();
    let split = SplitContext::new(g.delta.clone(), borders.clone(), m, l, e)?;
    Ok(ReductionContext {
        constants: Constants {
            n_s,
            p_eta,
            ell_eta,
            l,
            e,
            q,
            q_q,
            m,
            k,
        },
        classes,
        class_of,
        z,
        borders,
        split,
    })
}
