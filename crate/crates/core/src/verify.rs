//! Deciders for pseudoidentities over `D_k`, `K_k`, `Sl`, `G` and `V∗D_k`,
//! solution checks for `Σ_Γ`, and the conditions C₁–C₃.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::finsemi::{Element, FinSemigroup};
use crate::kterm::{Factor, KTerm};
use crate::reduce::graph::{show_s1, GraphElement, GraphSystem, Labeling};
use crate::superpose::phi_k_term;

/// Maximum number of generator maps tried per sample member.
const SAMPLE_MAPS: usize = 4096;

#[derive(Debug, Clone)]
pub enum Variety {
    Sl,
    G,
    /// Refutation only: a pseudoidentity failing in a member fails in `V`.
    Sample(Vec<FinSemigroup>),
}

impl Variety {
    pub fn is_exact(&self) -> bool {
        !matches!(self, Variety::Sample(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Variety::Sl => "sl",
            Variety::G => "g",
            Variety::Sample(_) => "sample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// No sample member refutes the identity.
    Unrefuted,
}

impl Verdict {
    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

pub fn dk_satisfies<L: Clone + Eq>(pi: &KTerm<L>, rho: &KTerm<L>, k: usize) -> bool {
    pi.t_k(k) == rho.t_k(k)
}

pub fn kk_satisfies<L: Clone + Eq>(pi: &KTerm<L>, rho: &KTerm<L>, k: usize) -> bool {
    pi.i_k(k) == rho.i_k(k)
}

pub fn sl_satisfies<L: Clone + Ord>(pi: &KTerm<L>, rho: &KTerm<L>) -> bool {
    pi.content() == rho.content()
}

/// Reduced free-group word of a term, reading `x^{ω−1}` as `x⁻¹`. The flag
/// marks inverse letters.
pub fn free_group_word<L: Clone + Eq>(t: &KTerm<L>) -> Vec<(L, bool)> {
    let mut out: Vec<(L, bool)> = Vec::new();
    let push = |out: &mut Vec<(L, bool)>, x: (L, bool)| match out.last() {
        Some((a, inv)) if *a == x.0 && *inv != x.1 => {
            out.pop();
        }
        _ => out.push(x),
    };
    for f in t.factors() {
        match f {
            Factor::Letter(a) => push(&mut out, (a.clone(), false)),
            Factor::Pow(x) => {
                for (a, inv) in free_group_word(x).into_iter().rev() {
                    push(&mut out, (a, !inv));
                }
            }
        }
    }
    out
}

pub fn g_satisfies<L: Clone + Eq>(pi: &KTerm<L>, rho: &KTerm<L>) -> bool {
    free_group_word(pi) == free_group_word(rho)
}

/// Semigroup and letter assignment under which two terms differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleWitness<L> {
    pub member: usize,
    pub assignment: Vec<(L, Element)>,
    pub left: Option<Element>,
    pub right: Option<Element>,
}

/// Looks for a member of `sample` and a map of the letters of the two terms
/// into it under which they evaluate differently. Values are taken in `S¹`
/// so that the empty term is comparable. Maps are enumerated exhaustively
/// when there are at most a few thousand, otherwise drawn from a fixed seed.
pub fn sample_refute<L: Clone + Ord>(
    pi: &KTerm<L>,
    rho: &KTerm<L>,
    sample: &[FinSemigroup],
) -> Option<SampleWitness<L>> {
    if pi == rho {
        return None;
    }
    let letters: Vec<L> = pi.content().union(&rho.content()).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (member, s) in sample.iter().enumerate() {
        let n = s.size();
        let total = (n as f64).powi(letters.len() as i32);
        let exhaustive = total <= SAMPLE_MAPS as f64;
        let count = if exhaustive {
            total as usize
        } else {
            SAMPLE_MAPS
        };
        for idx in 0..count {
            let assignment: Vec<Element> = if exhaustive {
                let mut x = idx;
                (0..letters.len())
                    .map(|_| {
                        let e = Element(x % n);
                        x /= n;
                        e
                    })
                    .collect()
            } else {
                (0..letters.len())
                    .map(|_| Element(rng.gen_range(0..n)))
                    .collect()
            };
            let image = |a: &L| assignment[letters.binary_search(a).expect("letter in content")];
            let left = s.eval_term(pi, &image);
            let right = s.eval_term(rho, &image);
            if left != right {
                return Some(SampleWitness {
                    member,
                    assignment: letters
                        .iter()
                        .cloned()
                        .zip(assignment.iter().copied())
                        .collect(),
                    left,
                    right,
                });
            }
        }
    }
    None
}

/// `V ⊨ π = ρ` for the backend; `Unrefuted` only for samples.
pub fn v_satisfies<L: Clone + Ord>(v: &Variety, pi: &KTerm<L>, rho: &KTerm<L>) -> Verdict {
    match (pi.is_empty(), rho.is_empty()) {
        (true, true) => return Verdict::Pass,
        (true, false) | (false, true) => return Verdict::Fail,
        _ => {}
    }
    let holds = match v {
        Variety::Sl => sl_satisfies(pi, rho),
        Variety::G => g_satisfies(pi, rho),
        Variety::Sample(s) => {
            return match sample_refute(pi, rho, s) {
                Some(_) => Verdict::Fail,
                None => Verdict::Unrefuted,
            }
        }
    };
    if holds {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Which clause of the `V∗D_k` characterization decided the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdkClause {
    Prefix,
    Suffix,
    Superposition,
}

/// `V∗D_k ⊨ π = ρ` iff `i_k π = i_k ρ`, `t_k π = t_k ρ` and
/// `V ⊨ Φ_k π = Φ_k ρ`.
pub fn vdk_check<L: Clone + Ord>(
    v: &Variety,
    pi: &KTerm<L>,
    rho: &KTerm<L>,
    k: usize,
) -> (Verdict, Option<VdkClause>) {
    if !kk_satisfies(pi, rho, k) {
        return (Verdict::Fail, Some(VdkClause::Prefix));
    }
    if !dk_satisfies(pi, rho, k) {
        return (Verdict::Fail, Some(VdkClause::Suffix));
    }
    match v_satisfies(v, &phi_k_term(pi, k), &phi_k_term(rho, k)) {
        Verdict::Fail => (Verdict::Fail, Some(VdkClause::Superposition)),
        ok => (ok, None),
    }
}

pub fn vdk_satisfies<L: Clone + Ord>(
    v: &Variety,
    pi: &KTerm<L>,
    rho: &KTerm<L>,
    k: usize,
) -> Verdict {
    vdk_check(v, pi, rho, k).0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub element: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn push(
        &mut self,
        check: &str,
        element: &str,
        k: Option<usize>,
        verdict: Verdict,
        witness: Option<String>,
    ) {
        self.entries.push(CheckEntry {
            check: check.to_string(),
            element: element.to_string(),
            k,
            verdict,
            witness,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        !self.entries.iter().any(|e| e.verdict.is_fail())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.verdict.is_fail())
    }

    pub fn by_check<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a CheckEntry> + 'a {
        self.entries.iter().filter(move |e| e.check == check)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let verdict = match e.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Unrefuted => "unrefuted",
            };
            s.push_str(&format!("{verdict:9} {:6} {}", e.check, e.element));
            if let Some(k) = e.k {
                s.push_str(&format!(" k={k}"));
            }
            if let Some(w) = &e.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push('\n');
        }
        s
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// `δ(labels g) = φ g` for every element.
pub fn check_delta(g: &GraphSystem, labels: &Labeling) -> Report {
    let mut r = Report::default();
    for el in g.elements() {
        let want = g.phi(el);
        let (ok, witness) = match g.delta.eval_monoid(labels.get(el)) {
            Ok(got) if got == want => (true, None),
            Ok(got) => (
                false,
                Some(format!("delta = {}, phi = {}", show_s1(got), show_s1(want))),
            ),
            Err(e) => (false, Some(e.to_string())),
        };
        r.push("delta", g.name(el), None, verdict(ok), witness);
    }
    r
}

/// Checks every equation `(αe)·e = ωe` over `V∗D_{k′}` for `k′ = 1..=kmax`.
pub fn check_equations(g: &GraphSystem, labels: &Labeling, v: &Variety, kmax: usize) -> Report {
    let mut r = Report::default();
    for (i, e) in g.edges.iter().enumerate() {
        let lhs = labels.vertices[e.from].clone().mul(&labels.edges[i]);
        let rhs = &labels.vertices[e.to];
        for k in 1..=kmax {
            let (verdict, clause) = vdk_check(v, &lhs, rhs, k);
            let witness = clause.map(|c| {
                let a = g.delta.alphabet();
                format!("{c:?} clause fails for {} = {}", lhs.show(a), rhs.show(a))
            });
            r.push("eq", &e.name, Some(k), verdict, witness);
        }
    }
    r
}

/// `δ∘labels = φ` together with every equation over `V∗D_{k′}`,
/// `k′ = 1..=kmax`.
pub fn check_solution(g: &GraphSystem, labels: &Labeling, v: &Variety, kmax: usize) -> Report {
    let mut r = check_delta(g, labels);
    r.extend(check_equations(g, labels, v, kmax));
    r
}

/// C₁: finite labels are kept.
pub fn check_c1(g: &GraphSystem, produced: &Labeling) -> Report {
    let mut r = Report::default();
    let a = g.delta.alphabet();
    for el in g.elements() {
        let old = g.eta.get(el);
        if old.is_finite() {
            let new = produced.get(el);
            let witness = (old != new).then(|| format!("{} became {}", old.show(a), new.show(a)));
            r.push("C1", g.name(el), None, verdict(old == new), witness);
        }
    }
    r
}

/// C₂: vertices keep their projection into `Ω_A D`.
pub fn check_c2(g: &GraphSystem, produced: &Labeling) -> Report {
    let mut r = Report::default();
    let a = g.delta.alphabet();
    for (i, name) in g.vertices.iter().enumerate() {
        let Some(old) = g.eta.vertices[i].p_d() else {
            continue;
        };
        let new = produced.vertices[i].p_d();
        let ok = new.as_ref() == Some(&old);
        let witness = (!ok).then(|| {
            format!(
                "p_D was {}, now {}",
                a.show_inf(&old),
                new.map_or("finite".to_string(), |y| a.show_inf(&y))
            )
        });
        r.push("C2", name, None, verdict(ok), witness);
    }
    r
}

/// C₃: each vertex label keeps its prefix `u` of length `l`, and the
/// remainders have the same value under `δ`.
pub fn check_c3(g: &GraphSystem, produced: &Labeling, l: usize) -> Report {
    let mut r = Report::default();
    let a = g.delta.alphabet();
    for (i, name) in g.vertices.iter().enumerate() {
        let old = &g.eta.vertices[i];
        let new = &produced.vertices[i];
        let u = old.i_k(l);
        let witness = if new.i_k(l) != u {
            Some(format!(
                "prefix {} became {}",
                a.show(&u),
                a.show(&new.i_k(l))
            ))
        } else {
            let rest = |t: &KTerm| t.strip_prefix(&u).map(|p| g.delta.eval_monoid(&p));
            match (rest(old), rest(new)) {
                (Some(Ok(x)), Some(Ok(y))) if x == y => None,
                (Some(Ok(x)), Some(Ok(y))) => Some(format!(
                    "residues evaluate to {} and {}",
                    show_s1(x),
                    show_s1(y)
                )),
                _ => Some("cannot strip the common prefix".to_string()),
            }
        };
        r.push("C3", name, None, verdict(witness.is_none()), witness);
    }
    r
}

/// Elements whose label under `labels` is infinite.
pub fn infinite_elements(g: &GraphSystem, labels: &Labeling) -> BTreeSet<GraphElement> {
    g.elements()
        .filter(|&el| !labels.get(el).is_finite())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordkit::Alphabet;

    fn t(s: &str) -> KTerm {
        KTerm::parse(s, &Alphabet::from_chars("ab").unwrap()).unwrap()
    }

    #[test]
    fn dk_and_kk() {
        assert!(dk_satisfies(&t("(ab)^w"), &t("a(ab)^w"), 2));
        assert!(!dk_satisfies(&t("a"), &t("b"), 1));
        assert!(!kk_satisfies(&t("a(ab)^w"), &t("(ab)^w"), 2));
    }

    #[test]
    fn semilattice_and_group() {
        assert!(sl_satisfies(&t("(ab)^w"), &t("(ba)^w b")));
        assert!(!sl_satisfies(&t("a"), &t("ab")));
        assert!(g_satisfies(&t("(a)^w-1 a b"), &t("b")));
        assert!(g_satisfies(&t("(ab)^w-1"), &t("(b)^w-1(a)^w-1")));
        assert!(!g_satisfies(&t("ab"), &t("ba")));
        assert!(g_satisfies(&t("(ab)^w"), &t("(ba)^w")));
    }

    #[test]
    fn vdk() {
        assert_eq!(
            vdk_satisfies(&Variety::Sl, &t("(ab)^w(ab)^w"), &t("(ab)^w"), 2),
            Verdict::Pass
        );
        assert_eq!(
            vdk_satisfies(&Variety::G, &t("(ab)^w a"), &t("(ab)^w b"), 1),
            Verdict::Fail
        );
        assert_eq!(
            vdk_check(&Variety::Sl, &t("(a)^w b (a)^w"), &t("(a)^w b"), 2).1,
            Some(VdkClause::Suffix)
        );
    }

    #[test]
    fn sampling() {
        let z3 = FinSemigroup::cyclic_group(3);
        assert!(sample_refute(&t("ab"), &t("ba"), std::slice::from_ref(&z3)).is_none());
        assert!(sample_refute(&t("ab"), &t("ab"), &[z3]).is_none());
        // left-zero band: xy = x
        let lz = FinSemigroup::from_fn(2, |x, _| x).unwrap();
        let w = sample_refute(&t("ab"), &t("ba"), &[lz]).unwrap();
        assert_ne!(w.left, w.right);
    }
}
