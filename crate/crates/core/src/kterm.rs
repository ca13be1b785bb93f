//! κ-terms: words over letters built with product and the (ω−1)-power.
//!
//! A term is stored as the flat list of its product factors, so products
//! are flattened by construction and the empty list is the empty word `1`.
//! `x^ω` is derived syntax for `x^{ω−1}·x`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::wordkit::{Alphabet, LeftInfWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor<L = Letter> {
    Letter(L),
    /// `x^{ω−1}` for a non-empty `x`.
    Pow(KTerm<L>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KTerm<L = Letter> {
    factors: Vec<Factor<L>>,
}

impl<L> Default for KTerm<L> {
    fn default() -> Self {
        KTerm {
            factors: Vec::new(),
        }
    }
}

impl<L: Clone + Eq> KTerm<L> {
    pub fn empty() -> Self {
        KTerm {
            factors: Vec::new(),
        }
    }

    pub fn letter(a: L) -> Self {
        KTerm {
            factors: vec![Factor::Letter(a)],
        }
    }

    pub fn word(w: &[L]) -> Self {
        KTerm {
            factors: w.iter().cloned().map(Factor::Letter).collect(),
        }
    }

    pub fn from_factors(factors: Vec<Factor<L>>) -> Self {
        debug_assert!(factors
            .iter()
            .all(|f| !matches!(f, Factor::Pow(x) if x.is_empty())));
        KTerm { factors }
    }

    /// `x^{ω−1}`. Panics on the empty term.
    pub fn omega_minus_one(x: KTerm<L>) -> Self {
        assert!(!x.is_empty(), "(ω−1)-power of the empty term");
        KTerm {
            factors: vec![Factor::Pow(x)],
        }
    }

    /// `x^ω = x^{ω−1}·x`.
    pub fn omega(x: KTerm<L>) -> Self {
        let mut t = Self::omega_minus_one(x.clone());
        t.factors.extend(x.factors);
        t
    }

    pub fn factors(&self) -> &[Factor<L>] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<Factor<L>> {
        self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(mut self, other: &KTerm<L>) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    pub fn push_letter(&mut self, a: L) {
        self.factors.push(Factor::Letter(a));
    }

    pub fn append(&mut self, other: KTerm<L>) {
        self.factors.extend(other.factors);
    }

    pub fn product<'a>(terms: impl IntoIterator<Item = &'a KTerm<L>>) -> Self
    where
        L: 'a,
    {
        let mut t = Self::empty();
        for x in terms {
            t.factors.extend(x.factors.iter().cloned());
        }
        t
    }

    pub fn pow(&self, n: usize) -> Self {
        KTerm {
            factors: (0..n).flat_map(|_| self.factors.iter().cloned()).collect(),
        }
    }

    /// True iff no (ω−1)-power occurs.
    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::Letter(_)))
    }

    pub fn as_word(&self) -> Option<Vec<L>> {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Letter(a) => Some(a.clone()),
                Factor::Pow(_) => None,
            })
            .collect()
    }

    pub fn content(&self) -> BTreeSet<L>
    where
        L: Ord,
    {
        let mut out = BTreeSet::new();
        self.collect_content(&mut out);
        out
    }

    fn collect_content(&self, out: &mut BTreeSet<L>)
    where
        L: Ord,
    {
        for f in &self.factors {
            match f {
                Factor::Letter(a) => {
                    out.insert(a.clone());
                }
                Factor::Pow(x) => x.collect_content(out),
            }
        }
    }

    /// Nesting depth of (ω−1)-powers.
    pub fn depth(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Letter(_) => 0,
                Factor::Pow(x) => 1 + x.depth(),
            })
            .max()
            .unwrap_or(0)
    }

    /// Replaces every `x^{ω−1}` by `x^{N−1}`, recursively.
    pub fn expand(&self, n: usize) -> Result<Vec<L>> {
        if n == 0 {
            return Err(Error::input("expansion exponent must be positive"));
        }
        let mut out = Vec::new();
        self.expand_into(n, &mut out);
        Ok(out)
    }

    fn expand_into(&self, n: usize, out: &mut Vec<L>) {
        for f in &self.factors {
            match f {
                Factor::Letter(a) => out.push(a.clone()),
                Factor::Pow(x) => {
                    let mut inner = Vec::new();
                    x.expand_into(n, &mut inner);
                    for _ in 1..n {
                        out.extend_from_slice(&inner);
                    }
                }
            }
        }
    }

    /// Suffix of length `min(k, |τ|)` of the denoted pseudoword.
    pub fn t_k(&self, k: usize) -> Vec<L> {
        let mut rev: Vec<L> = Vec::new();
        for f in self.factors.iter().rev() {
            if rev.len() >= k {
                break;
            }
            match f {
                Factor::Letter(a) => rev.push(a.clone()),
                Factor::Pow(x) => {
                    let need = k - rev.len();
                    let s = match x.as_word() {
                        Some(w) => periodic_suffix(&w, need),
                        None => x.t_k(need),
                    };
                    rev.extend(s.into_iter().rev());
                }
            }
        }
        rev.truncate(k);
        rev.reverse();
        rev
    }

    /// Prefix of length `min(k, |τ|)` of the denoted pseudoword.
    pub fn i_k(&self, k: usize) -> Vec<L> {
        let mut out: Vec<L> = Vec::new();
        for f in &self.factors {
            if out.len() >= k {
                break;
            }
            match f {
                Factor::Letter(a) => out.push(a.clone()),
                Factor::Pow(x) => {
                    let need = k - out.len();
                    let s = match x.as_word() {
                        Some(w) => periodic_prefix(&w, need),
                        None => x.i_k(need),
                    };
                    out.extend(s);
                }
            }
        }
        out.truncate(k);
        out
    }

    /// Applies a homomorphism given on letters.
    pub fn map_letters<M: Clone + Eq>(&self, f: &mut impl FnMut(&L) -> KTerm<M>) -> KTerm<M> {
        let mut out = KTerm::empty();
        for x in &self.factors {
            match x {
                Factor::Letter(a) => out.append(f(a)),
                Factor::Pow(y) => {
                    let img = y.map_letters(f);
                    if !img.is_empty() {
                        out.factors.push(Factor::Pow(img));
                    }
                }
            }
        }
        out
    }

    /// Right-hand cofactor `π` with `self = u·π` as pseudowords, unfolding
    /// `x^{ω−1} = x·x^{ω−1}·x^{ω−1}` as needed. `None` if `u` is not a prefix.
    pub fn strip_prefix(&self, u: &[L]) -> Option<KTerm<L>> {
        let mut rest: Vec<Factor<L>> = self.factors.iter().rev().cloned().collect();
        let mut todo = u.iter();
        let mut want = todo.next();
        while let Some(a) = want {
            match rest.pop()? {
                Factor::Letter(b) => {
                    if &b != a {
                        return None;
                    }
                    want = todo.next();
                }
                Factor::Pow(x) => {
                    rest.push(Factor::Pow(x.clone()));
                    rest.push(Factor::Pow(x.clone()));
                    rest.extend(x.factors.into_iter().rev());
                }
            }
        }
        rest.reverse();
        Some(KTerm { factors: rest })
    }

    /// Rewrites `x^ω v x^ω` to `x^ω v` as long as possible, leftmost first,
    /// after normalizing every (ω−1)-power argument. `v` must be `x^n`, or,
    /// when `x` is a word, any word commuting with `x`.
    pub fn normalize(&self) -> KTerm<L> {
        let mut fs: Vec<Factor<L>> = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Letter(a) => Factor::Letter(a.clone()),
                Factor::Pow(x) => Factor::Pow(x.normalize()),
            })
            .collect();
        while let Some((start, end)) = find_redex(&fs) {
            fs.drain(start..end);
        }
        KTerm { factors: fs }
    }

    pub fn is_normal(&self) -> bool {
        *self == self.normalize()
    }
}

impl KTerm<Letter> {
    /// Projection into `Ω_A D`; `None` for finite terms.
    pub fn p_d(&self) -> Option<LeftInfWord> {
        let r = self
            .factors
            .iter()
            .rposition(|f| matches!(f, Factor::Pow(_)))?;
        let tail: Vec<Letter> = self.factors[r + 1..]
            .iter()
            .map(|f| match f {
                Factor::Letter(a) => *a,
                Factor::Pow(_) => unreachable!(),
            })
            .collect();
        let Factor::Pow(x) = &self.factors[r] else {
            unreachable!()
        };
        let head = match x.as_word() {
            Some(w) => LeftInfWord::periodic(w.into()),
            None => x.p_d().expect("infinite base"),
        };
        Some(head.append(&tail))
    }

    pub fn show(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        fmt_term(self, &mut s, &|a: &Letter, out: &mut String| {
            alphabet.fmt_letter(*a, out)
        });
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        syntax::parse(text, alphabet)
    }
}

fn periodic_suffix<L: Clone>(w: &[L], need: usize) -> Vec<L> {
    let mut rev = Vec::with_capacity(need);
    while rev.len() < need {
        for a in w.iter().rev() {
            if rev.len() == need {
                break;
            }
            rev.push(a.clone());
        }
    }
    rev.reverse();
    rev
}

fn periodic_prefix<L: Clone>(w: &[L], need: usize) -> Vec<L> {
    w.iter().cycle().take(need).cloned().collect()
}

fn matches_at<L: PartialEq>(fs: &[Factor<L>], at: usize, pat: &[Factor<L>]) -> bool {
    fs.len() >= at + pat.len() && fs[at..at + pat.len()] == *pat
}

/// Range of the second `x^ω` in the leftmost `x^ω v x^ω` redex.
fn find_redex<L: Clone + Eq>(fs: &[Factor<L>]) -> Option<(usize, usize)> {
    for (i, f) in fs.iter().enumerate() {
        let Factor::Pow(x) = f else { continue };
        let xs = x.factors();
        let l = xs.len();
        if !matches_at(fs, i + 1, xs) {
            continue;
        }
        let after = i + 1 + l;
        let second_omega = |j: usize| {
            matches!(fs.get(j), Some(Factor::Pow(y)) if y == x) && matches_at(fs, j + 1, xs)
        };
        if let Some(xw) = x.as_word() {
            let mut r = after;
            while matches!(fs.get(r), Some(Factor::Letter(_))) {
                r += 1;
            }
            if second_omega(r) {
                let v: Vec<L> = fs[after..r]
                    .iter()
                    .map(|f| match f {
                        Factor::Letter(a) => a.clone(),
                        Factor::Pow(_) => unreachable!(),
                    })
                    .collect();
                let mut xv = xw.clone();
                xv.extend_from_slice(&v);
                let mut vx = v;
                vx.extend_from_slice(&xw);
                if xv == vx {
                    return Some((r, r + 1 + l));
                }
            }
        } else {
            let mut j = after;
            while matches_at(fs, j, xs) {
                j += l;
            }
            if second_omega(j) {
                return Some((j, j + 1 + l));
            }
        }
    }
    None
}

/// Prints a term in the round-trippable grammar, writing `x^{ω−1}·x` as
/// `(x)^w`.
pub fn fmt_term<L: Clone + Eq>(t: &KTerm<L>, out: &mut String, letter: &dyn Fn(&L, &mut String)) {
    let fs = t.factors();
    let mut i = 0;
    while i < fs.len() {
        match &fs[i] {
            Factor::Letter(a) => {
                letter(a, out);
                i += 1;
            }
            Factor::Pow(x) => {
                out.push('(');
                fmt_term(x, out, letter);
                let l = x.factors().len();
                if matches_at(fs, i + 1, x.factors()) {
                    out.push_str(")^w");
                    i += 1 + l;
                } else {
                    out.push_str(")^w-1");
                    i += 1;
                }
            }
        }
    }
}

mod syntax {
    //! `term := factor+ ; factor := letter | "(" term ")" suffix? ;
    //! suffix := "^w-1" | "^w"`, whitespace insignificant, `1` is the
    //! empty term.

    use super::*;

    struct Parser<'a> {
        chars: Vec<(usize, usize, char)>,
        pos: usize,
        alphabet: &'a Alphabet,
    }

    impl Parser<'_> {
        fn peek(&self) -> Option<char> {
            self.chars.get(self.pos).map(|c| c.2)
        }

        fn err(&self, message: impl Into<String>) -> Error {
            let (line, column) = self
                .chars
                .get(self.pos)
                .map(|c| (c.0, c.1))
                .or_else(|| self.chars.last().map(|c| (c.0, c.1 + 1)))
                .unwrap_or((1, 1));
            Error::Parse {
                line,
                column,
                message: message.into(),
            }
        }

        fn expect(&mut self, s: &str) -> Result<()> {
            for want in s.chars() {
                if self.peek() != Some(want) {
                    return Err(self.err(format!("expected {s:?}")));
                }
                self.pos += 1;
            }
            Ok(())
        }

        fn term(&mut self) -> Result<KTerm> {
            let mut t = KTerm::empty();
            loop {
                match self.peek() {
                    None | Some(')') => break,
                    Some('(') => {
                        self.pos += 1;
                        let inner = self.term()?;
                        self.expect(")")?;
                        if inner.is_empty() {
                            return Err(self.err("empty parenthesized term"));
                        }
                        if self.peek() == Some('^') {
                            self.expect("^w")?;
                            if self.peek() == Some('-') {
                                self.expect("-1")?;
                                t.factors.push(Factor::Pow(inner));
                            } else {
                                t.append(KTerm::omega(inner));
                            }
                        } else {
                            t.append(inner);
                        }
                    }
                    Some('[') => {
                        self.pos += 1;
                        let mut name = String::new();
                        loop {
                            match self.peek() {
                                Some(']') => break,
                                Some(c) => name.push(c),
                                None => return Err(self.err("unterminated letter name")),
                            }
                            self.pos += 1;
                        }
                        self.pos += 1;
                        t.push_letter(self.letter(&name)?);
                    }
                    Some(c) => {
                        if c == '^' || c == ']' {
                            return Err(self.err(format!("unexpected {c:?}")));
                        }
                        let a = self.letter(&c.to_string())?;
                        self.pos += 1;
                        t.push_letter(a);
                    }
                }
            }
            if t.is_empty() {
                return Err(self.err("expected a factor"));
            }
            Ok(t)
        }

        fn letter(&self, name: &str) -> Result<Letter> {
            self.alphabet
                .lookup(name)
                .ok_or_else(|| self.err(format!("unknown letter {name:?}")))
        }
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<KTerm> {
        if text.trim() == "1" {
            return Ok(KTerm::empty());
        }
        let mut chars = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            for (col, c) in line.chars().enumerate() {
                if !c.is_whitespace() {
                    chars.push((ln + 1, col + 1, c));
                }
            }
        }
        let mut p = Parser {
            chars,
            pos: 0,
            alphabet,
        };
        let t = p.term()?;
        if p.pos != p.chars.len() {
            return Err(p.err("unbalanced ')'"));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn al() -> Alphabet {
        Alphabet::from_chars("abc").unwrap()
    }

    fn t(s: &str) -> KTerm {
        KTerm::parse(s, &al()).unwrap()
    }

    fn w(s: &str) -> Vec<Letter> {
        al().word(s).unwrap().into_letters()
    }

    #[test]
    fn parse_and_print() {
        for s in ["a", "ab(ab)^w", "(a)^w-1b", "((a)^w-1b)^w c", "1"] {
            let x = t(s);
            assert_eq!(t(&x.show(&al())), x);
        }
        assert_eq!(t("(ab)^w"), KTerm::omega(t("ab")));
        assert_eq!(t("(ab)^w").show(&al()), "(ab)^w");
        assert_eq!(t("(a b) c"), t("abc"));
        assert!(KTerm::parse("(ab", &al()).is_err());
        assert!(KTerm::parse("ab)", &al()).is_err());
        assert!(KTerm::parse("a^w", &al()).is_err());
        assert!(KTerm::parse("d", &al()).is_err());
        match KTerm::parse("ab\n(a)^x", &al()) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(t("(ab)^w(ab)^w").normalize(), t("(ab)^w"));
        assert_eq!(t("(ab)^w ab (ab)^w").normalize(), t("(ab)^w ab"));
        assert_eq!(t("a").normalize(), t("a"));
        assert_eq!(t("(ab)^w a (ab)^w").normalize(), t("(ab)^w a (ab)^w"));
        // commuting middle factor
        assert_eq!(t("(abab)^w ab (abab)^w").normalize(), t("(abab)^w ab"));
        // non-word base: only structural powers
        assert_eq!(
            t("((a)^w b)^w (a)^w b ((a)^w b)^w").normalize(),
            t("((a)^w b)^w (a)^w b")
        );
        // arguments are normalized first
        assert_eq!(t("((a)^w(a)^w)^w-1").normalize(), t("((a)^w)^w-1"));
        let x = t("(ab)^w(ab)^w ab (ab)^w c (a)^w (a)^w");
        assert_eq!(x.normalize().normalize(), x.normalize());
    }

    #[test]
    fn finiteness() {
        assert!(t("ab").is_finite());
        assert_eq!(t("ab").as_word(), Some(w("ab")));
        assert!(!t("(ab)^w-1").is_finite());
        assert!(!t("a(b)^w-1a").is_finite());
        assert_eq!(t("a(b)^w-1a").as_word(), None);
    }

    #[test]
    fn expansions() {
        assert_eq!(t("(ab)^w-1").expand(3).unwrap(), w("abab"));
        assert_eq!(t("(a)^w-1 b").expand(4).unwrap(), w("aaab"));
        assert_eq!(t("((a)^w-1)^w-1").expand(2).unwrap(), w("a"));
        assert!(t("a").expand(0).is_err());
    }

    #[test]
    fn bounded_prefixes_and_suffixes() {
        assert_eq!(t("(ab)^w-1").i_k(3), w("aba"));
        assert_eq!(t("(ab)^w-1 b").t_k(3), w("abb"));
        assert_eq!(t("ab").t_k(2), w("ab"));
        assert_eq!(t("ab").t_k(5), w("ab"));
        assert_eq!(t("c((a)^w b)^w-1").t_k(4), w("aaab"));
    }

    #[test]
    fn projections() {
        assert_eq!(
            t("(ab)^w-1").p_d(),
            Some(LeftInfWord::periodic(w("ab").into()))
        );
        assert_eq!(
            t("(ab)^w-1 bb").p_d(),
            Some(LeftInfWord::new(w("ab").into(), w("bb").into()))
        );
        assert_eq!(
            t("a(b)^w-1").p_d(),
            Some(LeftInfWord::periodic(w("b").into()))
        );
        assert_eq!(t("ab").p_d(), None);
        assert_eq!(
            t("((a)^w b)^w-1 c").p_d(),
            Some(LeftInfWord::new(w("a").into(), w("bc").into()))
        );
    }

    #[test]
    fn contents() {
        assert_eq!(t("(ab)^w-1").content(), w("ab").into_iter().collect());
        assert_eq!(t("a").content(), w("a").into_iter().collect());
        assert_eq!(t("a(ba)^w-1c").content(), w("abc").into_iter().collect());
    }

    #[test]
    fn prefix_stripping() {
        let x = t("(ab)^w c");
        let r = x.strip_prefix(&w("aba")).unwrap();
        assert_eq!(r.i_k(3), w("bab"));
        assert!(x.strip_prefix(&w("b")).is_none());
        assert_eq!(t("abc").strip_prefix(&w("ab")), Some(t("c")));
    }
}
