//! Library results checked against brute-force oracles written here.

mod common;

use std::collections::BTreeSet;

use common::*;
use kappa_reduce::reduce::context::{find_q_q, longest_idempotent_free};
use kappa_reduce::reduce::{BorderPolicy, ConfinalClass};
use kappa_reduce::superpose::{self, hat, lambda_k, phi_k_term, rho_k};
use kappa_reduce::verify::{g_satisfies, sl_satisfies};
use kappa_reduce::wordkit::{self, canonicalize, gap, suffix_of_leftinf};
use kappa_reduce::{Element, FinSemigroup, KTerm, LeftInfWord, Letter, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn w(text: &str) -> Word {
    ab().word(text).unwrap()
}

fn term(text: &str) -> KTerm {
    KTerm::parse(text, &ab()).unwrap()
}

fn t(w: &[Letter], k: usize) -> Vec<Letter> {
    w[w.len().saturating_sub(k)..].to_vec()
}

fn i(w: &[Letter], k: usize) -> Vec<Letter> {
    w[..k.min(w.len())].to_vec()
}

/// `g(y1, y2)` straight from its definition: the least `r` such that
/// `y1·u = v·y2` or `y2·u = v·y1` with `|u| = |v| = r`; then `u` and `v`
/// are forced to be a suffix and a prefix.
fn gap_oracle(y1: &[Letter], y2: &[Letter]) -> usize {
    let works =
        |x: &[Letter], y: &[Letter], r: usize| [x, &t(y, r)].concat() == [&i(x, r), y].concat();
    (1..=y1.len())
        .find(|&r| works(y1, y2, r) || works(y2, y1, r))
        .unwrap()
}

#[test]
fn eval_examples_match_expansion() {
    let s = FinSemigroup::min_semilattice(2);
    let d = delta(&s, &ab(), &[1, 0]);
    let x = term("((ab)^w-1)ab");
    assert_eq!(d.eval_kterm(&x).unwrap(), Element(0));
    for n in valid_ns(&s, 1) {
        assert_eq!(d.eval_word(&x.expand(n).unwrap()).unwrap(), Element(0));
    }
}

#[test]
fn prefix_suffix_examples_are_stable() {
    let x = term("(ab)^w-1");
    assert_eq!(x.i_k(3), &w("aba")[..]);
    for n in 5..=10 {
        assert_eq!(i(&x.expand(n).unwrap(), 3), &w("aba")[..]);
    }
    let y = term("(ab)^w-1 b");
    assert_eq!(y.t_k(3), &w("abb")[..]);
    for n in 5..=10 {
        assert_eq!(t(&y.expand(n).unwrap(), 3), &w("abb")[..]);
    }
}

#[test]
fn projection_examples() {
    let x = term("(ab)^w-1").p_d().unwrap();
    assert_eq!(x, LeftInfWord::periodic(w("ab")));
    for m in 1..=12 {
        assert_eq!(suffix_of_leftinf(&x, m), Word::from(t(&w("ab").pow(10), m)));
    }
    let y = LeftInfWord::new(w("ab"), w("b"));
    assert_eq!(suffix_of_leftinf(&y, 2), w("bb"));
    assert_eq!(t(&w("ab").pow(5).concat(&w("b")), 2), &w("bb")[..]);
}

#[test]
fn gap_examples() {
    for (a, b, g) in [("abab", "abab", 2), ("aa", "ab", 1), ("ab", "ab", 2)] {
        assert_eq!(gap_oracle(&w(a), &w(b)), g);
        assert_eq!(gap(&w(a), &w(b)).unwrap(), g);
    }
}

#[test]
fn q_q_examples() {
    let cls = |y: LeftInfWord| ConfinalClass { y, members: vec![] };
    assert_eq!(find_q_q(&[cls(LeftInfWord::periodic(w("ab")))], 3), 1);
    let two = [
        cls(LeftInfWord::periodic(w("a"))),
        cls(LeftInfWord::periodic(w("b"))),
    ];
    assert_eq!(find_q_q(&two, 3), 4);
    for m in 1..=3 {
        assert!(gap_oracle(&w("a").pow(m), &w("b").pow(m)) <= 3);
    }
    // a lone non-periodic class: least m after which the self-gap exceeds Q
    let y = LeftInfWord::new(w("ab"), w("bb"));
    let q = 3;
    let brute = (1..40)
        .rev()
        .find(|&m| gap_oracle(&suffix_of_leftinf(&y, m), &suffix_of_leftinf(&y, m)) <= q)
        .map_or(1, |m| m + 1);
    assert_eq!(find_q_q(&[cls(y)], q), brute);
}

/// The F1 constants, with each clause on `E` re-checked over all words.
#[test]
fn f1_constants() {
    let (s, ctx) = context("f1.toml", BorderPolicy::Periodic);
    let c = &ctx.constants;
    assert_eq!(
        (c.n_s, c.p_eta, c.ell_eta, c.l, c.e, c.q, c.q_q, c.m, c.k),
        (1, 2, 1, 1, 2, 3, 1, 4, 7)
    );
    let d = &s.delta;
    let has_idempotent_factor = |w: &[Letter]| {
        (0..w.len()).any(|a| (a + 1..=w.len()).any(|b| d.is_idempotent_word(&w[a..b])))
    };
    let words = |n: usize| -> Vec<Vec<Letter>> {
        (0..1usize << n)
            .map(|code| (0..n).map(|p| Letter((code >> p & 1) as u16)).collect())
            .collect()
    };
    assert!(words(c.e).iter().all(|w| has_idempotent_factor(w)));
    assert!(c.e >= c.n_s * c.p_eta);
    assert!(c.e == c.n_s * c.p_eta || words(c.e - 1).iter().any(|w| !has_idempotent_factor(w)));
    assert_eq!(longest_idempotent_free(d, 10), Some(0));
    let borders: Vec<Word> = ctx.borders.iter().map(|b| b.word.clone()).collect();
    assert_eq!(borders, vec![w("abab")]);
}

#[test]
fn canonical_forms() {
    let y = canonicalize(&w("ba"), &[]);
    assert_eq!((y.root(), y.tail()), (&w("ab"), &w("a")));
    let z = canonicalize(&w("abab"), &w("ab"));
    assert_eq!((z.root(), z.tail()), (&w("ab"), &Word::empty()));
    let (z1, z2) = wordkit::confinal(&y, &z).unwrap();
    assert_eq!((z1, z2), (w("a"), Word::empty()));
}

/// Values of all terms of depth at most 2 built from two letters, bases of
/// length at most 2 and at most two factors per product.
fn shallow_terms() -> Vec<KTerm> {
    let a = Letter(0);
    let b = Letter(1);
    let short: Vec<KTerm> = [
        vec![a],
        vec![b],
        vec![a, a],
        vec![a, b],
        vec![b, a],
        vec![b, b],
    ]
    .iter()
    .map(|x| KTerm::word(x))
    .collect();
    let mut factors: Vec<KTerm> = vec![KTerm::letter(a), KTerm::letter(b)];
    factors.extend(short.iter().cloned().map(KTerm::omega_minus_one));
    let mut one = factors.clone();
    for x in &factors {
        for y in &factors {
            one.push(x.clone().mul(y));
        }
    }
    let mut all = one.clone();
    for x in &one {
        let p = KTerm::omega_minus_one(x.clone());
        all.push(KTerm::letter(a).mul(&p));
        all.push(p.clone().mul(&KTerm::letter(b)));
        all.push(p);
    }
    all
}

#[test]
fn shallow_terms_evaluate_like_their_expansions() {
    let terms = shallow_terms();
    assert!(terms.iter().any(|t| t.depth() == 2));
    for s in small_semigroups() {
        let ns = valid_ns(&s, 1);
        for d in all_deltas(&s, &ab()) {
            for x in &terms {
                let v = d.eval_kterm(x).unwrap();
                for n in ns {
                    assert_eq!(
                        v,
                        d.eval_word(&x.expand(n).unwrap()).unwrap(),
                        "{}",
                        x.show(&ab())
                    );
                }
            }
        }
    }
}

fn phi_letter_images(rng: &mut ChaCha8Rng, s: &FinSemigroup, k: usize) -> Vec<Element> {
    (0..1usize << (k + 1))
        .map(|_| Element(rng.gen_range(0..s.size())))
        .collect()
}

fn phi_index(w: &[Letter]) -> usize {
    w.iter().enumerate().map(|(p, a)| (a.0 as usize) << p).sum()
}

fn group_sample() -> Vec<FinSemigroup> {
    let s3 = FinSemigroup::from_transformations(&[vec![1, 0, 2], vec![1, 2, 0]], 10)
        .unwrap()
        .0;
    vec![
        FinSemigroup::cyclic_group(2),
        FinSemigroup::cyclic_group(3),
        FinSemigroup::cyclic_group(4),
        s3,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn eval_matches_expansion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_semigroup(&mut r, 3, 2, 12);
        let x = random_term(&mut r, 2, 3);
        let d = delta(&s, &ab(), &[r.gen_range(0..s.size()), r.gen_range(0..s.size())]);
        for n in valid_ns(&s, 1) {
            prop_assert_eq!(d.eval_kterm(&x).unwrap(), d.eval_word(&x.expand(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn omega_minus_one_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_semigroup(&mut r, 4, 2, 40);
        for x in s.elements() {
            let y = s.omega_minus_one(x);
            let e = s.mul(x, y);
            prop_assert!(s.is_idempotent(e));
            prop_assert_eq!(s.mul(y, x), e);
            prop_assert_eq!(s.mul(e, y), y);
            // x^{N−1} by repeated multiplication, N ≥ 2
            let n = valid_ns(&s, 1)[0];
            let p = (2..n).fold(x, |p, _| s.mul(p, x));
            prop_assert_eq!(p, y);
        }
    }

    #[test]
    fn prefixes_and_suffixes_are_stable(seed in any::<u64>(), k in 1usize..=8) {
        let mut r = rng(seed);
        let x = random_term(&mut r, 2, 2);
        for n in k + 2..=k + 4 {
            let e = x.expand(n).unwrap();
            prop_assert_eq!(x.i_k(k), i(&e, k));
            prop_assert_eq!(x.t_k(k), t(&e, k));
        }
    }

    #[test]
    fn projection_matches_long_expansions(seed in any::<u64>(), m in 1usize..=12) {
        let mut r = rng(seed);
        let x = random_term(&mut r, 2, 2);
        if let Some(y) = x.p_d() {
            let e = x.expand(m + 2).unwrap();
            prop_assert!(e.len() >= m);
            prop_assert_eq!(&suffix_of_leftinf(&y, m)[..], &t(&e, m)[..]);
        } else {
            prop_assert!(x.is_finite());
        }
    }

    #[test]
    fn normalize_preserves_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = random_term(&mut r, 2, 2);
        let v = random_term(&mut r, 2, 1);
        // plant redexes x^ω xⁿ x^ω
        let x = u.clone().mul(&KTerm::omega(v.clone())).mul(&v.pow(r.gen_range(0..3))).mul(&KTerm::omega(v)).mul(&u);
        let nf = x.normalize();
        prop_assert_eq!(nf.normalize(), nf.clone());
        let s = random_semigroup(&mut r, 4, 2, 30);
        for d in all_deltas(&s, &ab()) {
            prop_assert_eq!(d.eval_kterm(&x).unwrap(), d.eval_kterm(&nf).unwrap());
        }
    }

    #[test]
    fn canonicalize_keeps_the_word(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (lr, lt) = (r.gen_range(1..=4), r.gen_range(0..=5));
        let root = random_word(&mut r, 2, lr);
        let tail = random_word(&mut r, 2, lt);
        let y = canonicalize(&root, &tail);
        prop_assert_eq!(canonicalize(y.root(), y.tail()), y.clone());
        let long = [root.repeat(40), tail].concat();
        for m in 1..=30 {
            prop_assert_eq!(&suffix_of_leftinf(&y, m)[..], &t(&long, m)[..]);
        }
    }

    #[test]
    fn gap_matches_definition(seed in any::<u64>(), m in 1usize..=10) {
        let mut r = rng(seed);
        let y1 = random_word(&mut r, 2, m);
        let y2 = if r.gen_bool(0.3) { y1.clone() } else { random_word(&mut r, 2, m) };
        let g = gap(&y1, &y2).unwrap();
        prop_assert_eq!(g, gap_oracle(&y1, &y2));
        prop_assert_eq!(g, gap(&y2, &y1).unwrap());
        prop_assert!(g <= m);
    }

    /// `Φ_k` of a term evaluates like the factor sequence of its expansions.
    #[test]
    fn superposition_matches_factor_sequences(seed in any::<u64>(), k in 1usize..=3) {
        let mut r = rng(seed);
        let x = random_term(&mut r, 2, 2);
        let s = random_semigroup(&mut r, 3, 2, 10);
        let img = phi_letter_images(&mut r, &s, k);
        let f = |a: &Vec<Letter>| img[phi_index(a)];
        let lhs = s.eval_term(&phi_k_term(&x, k), &f);
        for n in valid_ns(&s, k + 2) {
            let e = x.expand(n).unwrap();
            let rhs = s.fold(e.windows(k + 1).map(|win| img[phi_index(win)]));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn semilattice_decider_compares_contents(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_term(&mut r, 3, 2);
        let y = random_term(&mut r, 3, 2);
        let letters = |t: &KTerm| t.expand(2).unwrap().into_iter().collect::<BTreeSet<_>>();
        prop_assert_eq!(sl_satisfies(&x, &y), letters(&x) == letters(&y));
    }

    /// Equal in the free profinite group implies equal in every finite
    /// group; a disagreement in a finite group refutes.
    #[test]
    fn group_decider_agrees_with_finite_groups(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_term(&mut r, 2, 2);
        let y = if r.gen_bool(0.5) {
            // an identity of groups: x^{ω−1}·x·z = z
            let z = random_term(&mut r, 2, 1);
            KTerm::omega_minus_one(x.clone()).mul(&x).mul(&z)
        } else {
            random_term(&mut r, 2, 2)
        };
        let target = if r.gen_bool(0.5) { y.clone() } else { x.clone().mul(&KTerm::omega(x.clone())) };
        let decided = g_satisfies(&y, &target);
        let mut refuted = false;
        for s in group_sample() {
            for d in all_deltas(&s, &ab()) {
                if d.eval_kterm(&y).unwrap() != d.eval_kterm(&target).unwrap() {
                    refuted = true;
                }
            }
        }
        prop_assert!(!(decided && refuted));
        let x2 = x.clone().mul(&KTerm::omega(x.clone()));
        prop_assert!(g_satisfies(&x2, &x));
    }
}

/// `δ` is unchanged by the basic transformation, and `ŵ` splits as
/// `λ_k(w)·a_{j+1}⋯a_k = a₁⋯a_j·ϱ_k(w)`.
#[test]
fn basic_transformation_preserves_values() {
    let mut r = rng(7);
    for name in FIXTURES {
        let (g, ctx) = context(name, BorderPolicy::Periodic);
        let k = ctx.k();
        let d = &g.delta;
        let letters = d.alphabet().len() as u16;
        for _ in 0..200 {
            let x = random_word(&mut r, letters, k);
            let h = hat(&x, &ctx.split).unwrap();
            assert_eq!(
                d.eval_kterm(&h).unwrap(),
                d.eval_word(&x).unwrap(),
                "{name}"
            );
            let ef = superpose::essential(&x, &ctx.split).unwrap();
            assert!(ef.i <= ef.j && d.is_idempotent_word(&ef.word));
            assert_eq!(&x[ef.i - 1..ef.j], &ef.word[..]);
            let lam = lambda_k(&x, &ctx.split).unwrap();
            let rho = rho_k(&x, &ctx.split).unwrap();
            assert_eq!(lam.mul(&KTerm::word(&x[ef.j..])), h);
            assert_eq!(KTerm::word(&x[..ef.j]).mul(&rho), h);
            assert!(ctx.split.e() >= ef.word.len());
        }
    }
}

/// The reduced form assembled from the window essentials is `θ_k w` after
/// normalization.
#[test]
fn reduced_form_is_normalized_theta() {
    let mut r = rng(11);
    for name in FIXTURES {
        let (g, ctx) = context(name, BorderPolicy::Periodic);
        let k = ctx.k();
        let letters = g.delta.alphabet().len() as u16;
        for _ in 0..100 {
            let len = r.gen_range(k + 1..3 * k);
            let x = random_word(&mut r, letters, len);
            let th = superpose::theta_k_word(&x, &ctx.split).unwrap();
            let rf = superpose::reduced_form(&x, &ctx.split).unwrap();
            assert_eq!(rf.r(), len - k + 1);
            assert_eq!(
                rf.to_kterm().normalize(),
                th,
                "{name}: {}",
                g.delta.alphabet().show(&x)
            );
        }
    }
}

/// `|l′_w| = i − 1 > L`, and two bounds of a word are more than `Q` apart
/// unless they close the same periodic border.
#[test]
fn left_hands_and_bounds_are_spread_out() {
    let mut r = rng(13);
    for name in FIXTURES {
        let (g, ctx) = context(name, BorderPolicy::Periodic);
        let (k, m, q, l) = (ctx.k(), ctx.constants.m, ctx.constants.q, ctx.l());
        let letters = g.delta.alphabet().len() as u16;
        let roots: Vec<Word> = ctx.roots().into_iter().collect();
        for n in 0..300 {
            // half of the words are built around a border so that bounds occur
            let x = if n % 2 == 0 || roots.is_empty() {
                random_word(&mut r, letters, k)
            } else {
                let u = &roots[r.gen_range(0..roots.len())];
                let lead = r.gen_range(0..=k - m);
                let mut x = random_word(&mut r, letters, lead);
                x.extend(u.iter().cycle().take(k - lead));
                x
            };
            let ef = superpose::essential(&x, &ctx.split).unwrap();
            assert!(ef.i - 1 > l, "{name}: |l'| = {} for {}", ef.i - 1, g.delta.alphabet().show(&x));
            let bs = superpose::bounds(&x, &ctx.split).unwrap();
            for (p, b1) in bs.iter().enumerate() {
                for b2 in &bs[p + 1..] {
                    let same = x[b1.position - m..b1.position] == x[b2.position - m..b2.position];
                    assert!(
                        b2.position - b1.position > q || same && b1.periodic,
                        "{name}: bounds {} and {} in {}",
                        b1.position,
                        b2.position,
                        g.delta.alphabet().show(&x)
                    );
                }
            }
        }
    }
}
