//! k-superposition machinery: `Φ_k`, splitting factorizations, essential
//! factors, the basic transformation `ŵ`, `λ_k`, `ϱ_k`, `ψ_k`, `θ_k` and
//! reduced forms.
//!
//! Positions are 1-based and inclusive, as in the paper.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::finsemi::Delta;
use crate::kterm::{Factor, KTerm};
use crate::wordkit::{self, Alphabet, Border, Letter, Word};

/// Everything the transforms need: the borders `B_M`, the constants, and `δ`.
#[derive(Debug, Clone)]
pub struct SplitContext {
    borders: BTreeMap<Word, Border>,
    m: usize,
    q: usize,
    e: usize,
    l: usize,
    n_s: usize,
    delta: Delta,
}

impl SplitContext {
    pub fn new(
        delta: Delta,
        borders: impl IntoIterator<Item = Border>,
        m: usize,
        l: usize,
        e: usize,
    ) -> Result<Self> {
        let q = l + e;
        if m <= q {
            return Err(Error::input(format!("M = {m} must exceed Q = {q}")));
        }
        if e == 0 {
            return Err(Error::input("E must be positive"));
        }
        let mut map = BTreeMap::new();
        for b in borders {
            if b.word.len() != m {
                return Err(Error::input(format!(
                    "border of length {} in a context with M = {m}",
                    b.word.len()
                )));
            }
            if let Some(u) = &b.root {
                if !m.is_multiple_of(u.len()) || u.pow(m / u.len()) != b.word {
                    return Err(Error::input("periodic border is not a power of its root"));
                }
            }
            if let Some(old) = map.insert(b.word.clone(), b.clone()) {
                if old != b {
                    return Err(Error::internal("one border word with two different roots"));
                }
            }
        }
        let n_s = delta.exponent();
        Ok(SplitContext {
            borders: map,
            m,
            q,
            e,
            l,
            n_s,
            delta,
        })
    }

    pub fn borders(&self) -> impl Iterator<Item = &Border> {
        self.borders.values()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.m + self.q
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn delta(&self) -> &Delta {
        &self.delta
    }

    fn check_len(&self, w: &[Letter]) -> Result<()> {
        if w.len() != self.k() {
            return Err(Error::input(format!(
                "expected a word of length k = {}, got {}",
                self.k(),
                w.len()
            )));
        }
        Ok(())
    }
}

/// A bound of a word: a position where a border ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub position: usize,
    pub periodic: bool,
}

/// All bounds of `w`, increasing.
pub fn bounds(w: &[Letter], ctx: &SplitContext) -> Result<Vec<Bound>> {
    let m = ctx.m;
    if w.len() < m {
        return Err(Error::input(format!(
            "word of length {} is shorter than M = {m}",
            w.len()
        )));
    }
    Ok((m..=w.len())
        .filter_map(|p| {
            ctx.borders.get(&w[p - m..p]).map(|b| Bound {
                position: p,
                periodic: b.is_periodic(),
            })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFactorization {
    pub left: Word,
    pub right: Word,
    pub point: usize,
    /// Root of the last border when the splitting point is periodic.
    pub root: Option<Word>,
}

impl SplitFactorization {
    pub fn is_periodic(&self) -> bool {
        self.root.is_some()
    }

    pub fn dump(&self, alphabet: &Alphabet) -> String {
        let mut s = format!(
            "split s={} left={} right={}",
            self.point,
            alphabet.show(&self.left),
            alphabet.show(&self.right)
        );
        match &self.root {
            Some(u) => {
                let _ = write!(s, " periodic root={}", alphabet.show(u));
            }
            None => s.push_str(" non-periodic"),
        }
        s
    }
}

pub fn split(w: &[Letter], ctx: &SplitContext) -> Result<SplitFactorization> {
    ctx.check_len(w)?;
    let last = bounds(w, ctx)?.last().copied();
    let point = last.map_or(w.len(), |b| b.position);
    let root = match last {
        Some(b) if b.periodic => ctx.borders[&w[point - ctx.m..point]].root.clone(),
        _ => None,
    };
    Ok(SplitFactorization {
        left: Word::from(&w[..point]),
        right: Word::from(&w[point..]),
        point,
        root,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialFactor {
    pub i: usize,
    pub j: usize,
    pub word: Word,
}

pub fn essential(w: &[Letter], ctx: &SplitContext) -> Result<EssentialFactor> {
    let sf = split(w, ctx)?;
    essential_from_split(w, &sf, ctx)
}

fn essential_from_split(
    w: &[Letter],
    sf: &SplitFactorization,
    ctx: &SplitContext,
) -> Result<EssentialFactor> {
    let s = sf.point;
    let lo = s.saturating_sub(ctx.e) + 1;
    if let Some(u) = &sf.root {
        let e = u.pow(ctx.n_s);
        if e.len() > ctx.e || e.len() > s {
            return Err(Error::internal(format!(
                "root power of length {} does not fit the window of length E = {}",
                e.len(),
                ctx.e
            )));
        }
        let i = s - e.len() + 1;
        debug_assert_eq!(&w[i - 1..s], &e[..]);
        return Ok(EssentialFactor { i, j: s, word: e });
    }
    for j in (lo..=s).rev() {
        if let Some(i) = (lo..=j)
            .rev()
            .find(|&i| ctx.delta.is_idempotent_word(&w[i - 1..j]))
        {
            return Ok(EssentialFactor {
                i,
                j,
                word: Word::from(&w[i - 1..j]),
            });
        }
    }
    Err(Error::internal(format!(
        "no idempotent factor in positions {lo}..={s}; E = {} is too small",
        ctx.e
    )))
}

fn letters(w: &[Letter]) -> KTerm {
    KTerm::word(w)
}

/// `ŵ = a₁⋯a_j (a_i⋯a_j)^ω a_{j+1}⋯a_k`.
pub fn hat(w: &[Letter], ctx: &SplitContext) -> Result<KTerm> {
    let ef = essential(w, ctx)?;
    Ok(letters(&w[..ef.j])
        .mul(&KTerm::omega(letters(&ef.word)))
        .mul(&letters(&w[ef.j..])))
}

/// `λ_k w = a₁⋯a_j (a_i⋯a_j)^ω`.
pub fn lambda_k(w: &[Letter], ctx: &SplitContext) -> Result<KTerm> {
    let ef = essential(w, ctx)?;
    Ok(letters(&w[..ef.j]).mul(&KTerm::omega(letters(&ef.word))))
}

/// `ϱ_k w = (a_i⋯a_j)^ω a_{j+1}⋯a_k`.
pub fn rho_k(w: &[Letter], ctx: &SplitContext) -> Result<KTerm> {
    let ef = essential(w, ctx)?;
    Ok(KTerm::omega(letters(&ef.word)).mul(&letters(&w[ef.j..])))
}

/// The sequence of length-`k+1` factors of `w`.
pub fn phi_k<L: Clone>(w: &[L], k: usize) -> Vec<Vec<L>> {
    if w.len() <= k {
        return Vec::new();
    }
    w.windows(k + 1).map(|f| f.to_vec()).collect()
}

fn phi_word_term<L: Clone + Eq>(w: &[L], k: usize) -> KTerm<Vec<L>> {
    KTerm::word(&phi_k(w, k))
}

/// `Φ_k` on κ-terms.
///
/// Products use `Φ_k(πρ) = Φ_k(π) Φ_k(t_kπ · i_kρ) Φ_k(ρ)`. For a power
/// base `y` with `t_k(yⁿ) = t_k y` (that is, `|y| ≥ k` or `y` infinite),
/// `Φ_k(yⁿ) = P(CP)ⁿ⁻¹` with `P = Φ_k y` and `C = Φ_k(t_k y · i_k y)`, so
/// `Φ_k(y^{ω−1}) = P(CP)^{ω−1}(CP)^{ω−1}`. Short finite bases are first
/// rewritten with `x^{ω−1} = (x^m)^{ω−1} x^{m−1}`.
pub fn phi_k_term<L: Clone + Eq>(t: &KTerm<L>, k: usize) -> KTerm<Vec<L>> {
    assert!(k >= 1, "Φ_k needs k ≥ 1");
    let mut acc = KTerm::empty();
    let mut suffix: Vec<L> = Vec::new();
    for f in t.factors() {
        let single = KTerm::from_factors(vec![f.clone()]);
        let (phi_f, pre, suf) = match f {
            Factor::Letter(a) => (KTerm::empty(), vec![a.clone()], vec![a.clone()]),
            Factor::Pow(x) => (phi_pow(x, k), single.i_k(k), single.t_k(k)),
        };
        let mut mid = suffix.clone();
        mid.extend(pre);
        acc.append(phi_word_term(&mid, k));
        acc.append(phi_f);
        suffix.extend(suf);
        let cut = suffix.len().saturating_sub(k);
        suffix.drain(..cut);
    }
    acc
}

fn phi_pow<L: Clone + Eq>(x: &KTerm<L>, k: usize) -> KTerm<Vec<L>> {
    if let Some(w) = x.as_word() {
        if w.len() < k {
            let m = k.div_ceil(w.len());
            let mut t = KTerm::omega_minus_one(x.pow(m));
            t.append(x.pow(m - 1));
            return phi_k_term(&t, k);
        }
    }
    let p = phi_k_term(x, k);
    let mut mid = x.t_k(k);
    mid.extend(x.i_k(k));
    let cp = phi_word_term(&mid, k).mul(&p);
    p.mul(&KTerm::omega_minus_one(cp.clone()))
        .mul(&KTerm::omega_minus_one(cp))
}

/// `ψ_k` on one letter of `A^{k+1}`:
/// `(a_{i₁}⋯a_{j₁})^ω a_{j₁+1}⋯a_{j₂} (a_{i₂}⋯a_{j₂})^ω`.
pub fn psi_k(letter: &[Letter], ctx: &SplitContext) -> Result<KTerm> {
    let k = ctx.k();
    if letter.len() != k + 1 {
        return Err(Error::input(format!(
            "ψ_k expects a word of length {}",
            k + 1
        )));
    }
    let e1 = essential(&letter[..k], ctx)?;
    let e2 = essential(&letter[1..], ctx)?;
    let j2 = e2.j + 1;
    if e1.j > j2 {
        return Err(Error::internal(format!(
            "essential factors out of order: j₁ = {} > j₂ = {j2}",
            e1.j
        )));
    }
    Ok(KTerm::omega(letters(&e1.word))
        .mul(&letters(&letter[e1.j..j2]))
        .mul(&KTerm::omega(letters(&e2.word))))
}

/// `θ_k = ψ_k ∘ Φ_k`, normalized.
pub fn theta_k(t: &KTerm, ctx: &SplitContext) -> Result<KTerm> {
    let phi = phi_k_term(t, ctx.k());
    let mut images: BTreeMap<Vec<Letter>, KTerm> = BTreeMap::new();
    for a in phi.content() {
        let img = psi_k(&a, ctx)?;
        images.insert(a, img);
    }
    Ok(phi.map_letters(&mut |a| images[a].clone()).normalize())
}

pub fn theta_k_word(w: &[Letter], ctx: &SplitContext) -> Result<KTerm> {
    theta_k(&KTerm::word(w), ctx)
}

/// One block `e_{n_p}^ω f̄_p` of a reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaBlock {
    /// Window index `n_p`.
    pub n: usize,
    /// Absolute position of the essential factor.
    pub i: usize,
    pub j: usize,
    pub e: Word,
    pub f: Word,
}

impl ThetaBlock {
    /// Last absolute position covered by `f̄_p`.
    pub fn f_end(&self) -> usize {
        self.j + self.f.len()
    }
}

/// `θ_k(w) = e_{n₁}^ω f̄₁ ⋯ e_{n_q}^ω f̄_q` together with the per-window
/// essential positions it was assembled from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedTheta {
    pub word: Word,
    pub windows: Vec<(usize, usize)>,
    pub blocks: Vec<ThetaBlock>,
}

impl ReducedTheta {
    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    pub fn r(&self) -> usize {
        self.windows.len()
    }

    pub fn to_kterm(&self) -> KTerm {
        let mut t = KTerm::empty();
        for b in &self.blocks {
            t.append(KTerm::omega(letters(&b.e)));
            t.append(letters(&b.f));
        }
        t
    }

    pub fn dump(&self, alphabet: &Alphabet) -> String {
        let mut s = format!(
            "reduced theta of {} (r={}, q={})\n",
            alphabet.show(&self.word),
            self.r(),
            self.q()
        );
        for (p, (i, j)) in self.windows.iter().enumerate() {
            let _ = writeln!(
                s,
                "  window {}: e=[{i},{j}] {}",
                p + 1,
                alphabet.show(&self.word[i - 1..*j])
            );
        }
        for b in &self.blocks {
            let _ = writeln!(
                s,
                "  block n={} e=({})^w at [{},{}] fbar={}",
                b.n,
                alphabet.show(&b.e),
                b.i,
                b.j,
                alphabet.show(&b.f)
            );
        }
        s
    }
}

fn commute(x: &[Letter], v: &[Letter]) -> bool {
    x.len() + v.len() == 0 || [x, v].concat() == [v, x].concat()
}

pub fn reduced_form(w: &[Letter], ctx: &SplitContext) -> Result<ReducedTheta> {
    let k = ctx.k();
    if w.len() <= k {
        return Err(Error::input(format!(
            "reduced form needs a word longer than k = {k}"
        )));
    }
    let windows = w
        .windows(k)
        .enumerate()
        .map(|(p, win)| essential(win, ctx).map(|ef| (ef.i + p, ef.j + p)))
        .collect::<Result<Vec<_>>>()?;
    for pair in windows.windows(2) {
        if pair[0].1 > pair[1].1 {
            return Err(Error::internal(format!(
                "essential factors out of order: j = {} then {}",
                pair[0].1, pair[1].1
            )));
        }
    }
    let mut blocks: Vec<ThetaBlock> = Vec::new();
    for (p, &(i, j)) in windows.iter().enumerate() {
        let e = Word::from(&w[i - 1..j]);
        if let Some(cur) = blocks.last_mut() {
            let v = &w[cur.j..j];
            if cur.e == e && commute(&e, v) {
                cur.f = Word::from(v);
                continue;
            }
            cur.f = Word::from(v);
        }
        blocks.push(ThetaBlock {
            n: p + 1,
            i,
            j,
            e,
            f: Word::empty(),
        });
    }
    Ok(ReducedTheta {
        word: Word::from(w),
        windows,
        blocks,
    })
}

/// Checks the Lemma 1 relation on a word of length `k+1`: `a₁ l_{w₂} =
/// l_{w₁} x` for some `x`, and `j₁ ≤ j₂`.
pub fn lemma1_holds(w: &[Letter], ctx: &SplitContext) -> Result<bool> {
    let k = ctx.k();
    if w.len() != k + 1 {
        return Err(Error::input(format!(
            "Lemma 1 concerns words of length {}",
            k + 1
        )));
    }
    let s1 = split(&w[..k], ctx)?;
    let s2 = split(&w[1..], ctx)?;
    let mut lhs = vec![w[0]];
    lhs.extend_from_slice(&s2.left);
    let prefix = lhs.starts_with(&s1.left);
    let j1 = essential_from_split(&w[..k], &s1, ctx)?.j;
    let j2 = essential_from_split(&w[1..], &s2, ctx)?.j + 1;
    Ok(prefix && j1 <= j2)
}

/// The splitting factorization and essential factor of `w`, for traces.
pub fn describe(w: &[Letter], ctx: &SplitContext) -> Result<String> {
    let a = ctx.delta.alphabet();
    let sf = split(w, ctx)?;
    let ef = essential_from_split(w, &sf, ctx)?;
    Ok(format!(
        "{}: {}; essential [{},{}] {}",
        a.show(w),
        sf.dump(a),
        ef.i,
        ef.j,
        a.show(&ef.word)
    ))
}

/// `t_k` of a plain word; re-exported for callers that only see this module.
pub fn t_k(w: &[Letter], k: usize) -> Word {
    wordkit::t_k(w, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsemi::{FinSemigroup, GeneratorMap};

    fn al() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        al().word(s).unwrap()
    }

    fn t(s: &str) -> KTerm {
        KTerm::parse(s, &al()).unwrap()
    }

    /// Semilattice with δ(a) = 1, δ(b) = 0, borders {abab}, M = 4, L = 1, E = 2.
    fn f1() -> SplitContext {
        let s = FinSemigroup::min_semilattice(2);
        let g = GeneratorMap::new(al(), vec![crate::Element(1), crate::Element(0)], &s).unwrap();
        let b = Border {
            word: w("abab"),
            root: Some(w("ab")),
        };
        SplitContext::new(Delta::new(s, g), [b], 4, 1, 2).unwrap()
    }

    fn z3() -> SplitContext {
        let s = FinSemigroup::cyclic_group(3);
        let g = GeneratorMap::new(al(), vec![crate::Element(1), crate::Element(2)], &s).unwrap();
        SplitContext::new(Delta::new(s, g), [], 8, 0, 6).unwrap()
    }

    #[test]
    fn bound_positions() {
        let c = f1();
        let pos = |s: &str| {
            bounds(&w(s), &c)
                .unwrap()
                .iter()
                .map(|b| (b.position, b.periodic))
                .collect::<Vec<_>>()
        };
        assert_eq!(pos("ababab"), vec![(4, true), (6, true)]);
        assert_eq!(pos("bbbbbb"), vec![]);
        assert_eq!(pos("abab"), vec![(4, true)]);
        assert!(bounds(&w("aba"), &c).is_err());
    }

    #[test]
    fn splitting() {
        let c = f1();
        let sf = split(&w("abababb"), &c).unwrap();
        assert_eq!(
            (sf.point, sf.left.clone(), sf.right.clone()),
            (6, w("ababab"), w("b"))
        );
        assert_eq!(sf.root, Some(w("ab")));
        let sf = split(&w("bbbbbbb"), &c).unwrap();
        assert_eq!((sf.point, sf.right.len(), sf.is_periodic()), (7, 0, false));
        let sf = split(&w("ababbbb"), &c).unwrap();
        assert_eq!(
            (sf.point, sf.left.clone(), sf.right.clone()),
            (4, w("abab"), w("bbb"))
        );
        assert!(split(&w("abab"), &c).is_err());
    }

    #[test]
    fn essential_factors() {
        let c = f1();
        let ef = essential(&w("bbbbbbb"), &c).unwrap();
        assert_eq!((ef.i, ef.j, ef.word), (7, 7, w("b")));
        let ef = essential(&w("abababb"), &c).unwrap();
        assert_eq!((ef.i, ef.j, ef.word), (5, 6, w("ab")));
        let z = z3();
        let mut x = w("b").pow(11);
        x.extend_from(&w("aaa"));
        let ef = essential(&x, &z).unwrap();
        assert_eq!((ef.i, ef.j, ef.word), (12, 14, w("aaa")));
    }

    #[test]
    fn transforms() {
        let c = f1();
        assert_eq!(hat(&w("bbbbbbb"), &c).unwrap(), t("bbbbbbb(b)^w"));
        assert_eq!(lambda_k(&w("bbbbbbb"), &c).unwrap(), t("bbbbbbb(b)^w"));
        assert_eq!(rho_k(&w("abababb"), &c).unwrap(), t("(ab)^w b"));
        assert_eq!(hat(&w("abababb"), &c).unwrap(), t("ababab(ab)^w b"));
    }

    #[test]
    fn phi_on_words() {
        let ab = phi_k(&w("aab"), 1);
        assert_eq!(ab, vec![w("aa").to_vec(), w("ab").to_vec()]);
        assert!(phi_k(&w("ab"), 2).is_empty());
        assert_eq!(phi_k(&w("aaa"), 1).len(), 2);
        assert_eq!(
            phi_k_term(&t("abba"), 2),
            KTerm::word(&phi_k(&w("abba"), 2))
        );
        assert!(phi_k_term(&t("ab"), 2).is_empty());
    }

    #[test]
    fn psi_and_theta() {
        let c = f1();
        assert_eq!(psi_k(&w("bbbbbbbb"), &c).unwrap(), t("(b)^w b (b)^w"));
        assert_eq!(theta_k_word(&w("bbbbbbbb"), &c).unwrap(), t("(b)^w b"));
        assert!(theta_k_word(&w("bbbbbbb"), &c).unwrap().is_empty());
        let rf = reduced_form(&w("bbbbbbbb"), &c).unwrap();
        assert_eq!(rf.q(), 1);
        assert_eq!(rf.to_kterm(), theta_k_word(&w("bbbbbbbb"), &c).unwrap());
    }

    #[test]
    fn reduced_forms_reassemble() {
        let c = f1();
        for s in [
            "ababababababab",
            "abababbbbababb",
            "bbbabababbbaaab",
            "aabbaabbaabbaab",
        ] {
            let x = w(s);
            let rf = reduced_form(&x, &c).unwrap();
            assert_eq!(rf.to_kterm(), theta_k_word(&x, &c).unwrap(), "{s}");
        }
    }

    #[test]
    fn lemma1_on_samples() {
        let c = f1();
        for s in ["abababbb", "bbbbbbbb", "babababa", "aabababb"] {
            assert!(lemma1_holds(&w(s), &c).unwrap(), "{s}");
        }
    }
}
