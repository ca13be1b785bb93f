//! Finite words, ultimately periodic left-infinite words and the small
//! amount of combinatorics on words the construction relies on.
//!
//! Letters are indices into a declared [`Alphabet`]; the lexicographic order
//! used for Lyndon words is the declaration order.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A letter of the alphabet `A`, identified by its position in the
/// declared alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u16);

/// Declared, ordered alphabet. Single-character names print bare, longer
/// names print as `[name]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

const RESERVED: &[char] = &['(', ')', '[', ']', '^', '1'];

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::input("alphabet must be non-empty"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty()
                || n.chars()
                    .any(|c| c.is_whitespace() || RESERVED.contains(&c))
            {
                return Err(Error::input(format!("invalid letter name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::input(format!("duplicate letter {n:?}")));
            }
        }
        if names.len() > u16::MAX as usize {
            return Err(Error::input("alphabet too large"));
        }
        Ok(Alphabet { names })
    }

    /// Alphabet whose letters are the characters of `chars`, in order.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| Letter(i as u16))
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a.0 as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Letter(i as u16))
    }

    pub fn fmt_letter(&self, a: Letter, out: &mut String) {
        let n = self.name(a);
        if n.chars().count() == 1 {
            out.push_str(n);
        } else {
            out.push('[');
            out.push_str(n);
            out.push(']');
        }
    }

    pub fn show(&self, w: &[Letter]) -> String {
        let mut s = String::new();
        for &a in w {
            self.fmt_letter(a, &mut s);
        }
        s
    }

    /// Parses a plain word; `"1"` and `""` denote the empty word.
    pub fn word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            let name: String = if c == '[' {
                let mut n = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(ch) => n.push(ch),
                        None => {
                            return Err(Error::input(format!("unterminated letter in {text:?}")))
                        }
                    }
                }
                n
            } else {
                c.to_string()
            };
            let a = self
                .lookup(&name)
                .ok_or_else(|| Error::input(format!("unknown letter {name:?}")))?;
            out.push(a);
        }
        Ok(Word(out))
    }

    pub fn show_inf(&self, y: &LeftInfWord) -> String {
        format!("inf({}){}", self.show(&y.root), self.show(&y.tail))
    }

    /// Parses `inf(root)tail`.
    pub fn left_inf(&self, text: &str) -> Result<LeftInfWord> {
        let t = text.trim();
        let rest = t
            .strip_prefix("inf(")
            .ok_or_else(|| Error::input(format!("expected inf(root)tail, got {t:?}")))?;
        let close = rest
            .find(')')
            .ok_or_else(|| Error::input(format!("unterminated root in {t:?}")))?;
        let root = self.word(&rest[..close])?;
        let tail = self.word(&rest[close + 1..])?;
        if root.is_empty() {
            return Err(Error::input("left-infinite word needs a non-empty root"));
        }
        Ok(LeftInfWord::new(root, tail))
    }
}

/// A finite word over `A`; may be empty (the empty word is `1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn extend_from(&mut self, w: &[Letter]) {
        self.0.extend_from_slice(w);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Factor `a_i ⋯ a_j` with 1-based inclusive positions.
    pub fn factor(&self, i: usize, j: usize) -> Word {
        Word(self.0[i - 1..j].to_vec())
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<&[Letter]> for Word {
    fn from(s: &[Letter]) -> Self {
        Word(s.to_vec())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for a in &self.0 {
            write!(f, "<{}>", a.0)?;
        }
        Ok(())
    }
}

/// Longest suffix of length at most `k`.
pub fn t_k(w: &[Letter], k: usize) -> Word {
    Word(w[w.len().saturating_sub(k)..].to_vec())
}

/// Longest prefix of length at most `k`.
pub fn i_k(w: &[Letter], k: usize) -> Word {
    Word(w[..w.len().min(k)].to_vec())
}

/// Shortest `u` with `w = u^m`.
pub fn primitive_root(w: &[Letter]) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::input("primitive root of the empty word"));
    }
    let n = w.len();
    let p = (1..=n)
        .find(|&p| n.is_multiple_of(p) && w[p..] == w[..n - p])
        .unwrap_or(n);
    Ok(Word(w[..p].to_vec()))
}

pub fn is_primitive(w: &[Letter]) -> bool {
    !w.is_empty()
        && primitive_root(w)
            .map(|r| r.len() == w.len())
            .unwrap_or(false)
}

fn rotation(w: &[Letter], r: usize) -> Vec<Letter> {
    let mut v = w[r..].to_vec();
    v.extend_from_slice(&w[..r]);
    v
}

/// True iff `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(w: &[Letter]) -> bool {
    !w.is_empty() && (1..w.len()).all(|r| w < rotation(w, r).as_slice())
}

/// Index `r` such that `w[r..] w[..r]` is the least rotation of `w`.
fn least_rotation(w: &[Letter]) -> usize {
    (0..w.len())
        .min_by(|&x, &y| rotation(w, x).cmp(&rotation(w, y)))
        .unwrap_or(0)
}

/// The Lyndon word conjugate to a primitive word.
pub fn lyndon_conjugate(w: &[Letter]) -> Result<Word> {
    if !is_primitive(w) {
        return Err(Error::input("lyndon_conjugate needs a primitive word"));
    }
    Ok(Word(rotation(w, least_rotation(w))))
}

/// Ultimately periodic left-infinite word `···root root · tail`.
///
/// Values built through [`LeftInfWord::new`] are canonical: the root is a
/// Lyndon word and the tail does not start with the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeftInfWord {
    root: Word,
    tail: Word,
}

impl LeftInfWord {
    /// Builds and canonicalizes `∞root · tail`. Panics on an empty root.
    pub fn new(root: Word, tail: Word) -> Self {
        canonicalize(&root, &tail)
    }

    /// `∞u` for a non-empty word `u`.
    pub fn periodic(u: Word) -> Self {
        Self::new(u, Word::empty())
    }

    pub fn root(&self) -> &Word {
        &self.root
    }

    pub fn tail(&self) -> &Word {
        &self.tail
    }

    pub fn is_periodic(&self) -> bool {
        self.tail.is_empty()
    }

    /// Right multiplication by a finite word.
    pub fn append(&self, w: &[Letter]) -> Self {
        canonicalize(&self.root, &self.tail.concat(w))
    }

    /// The length-`m` suffix.
    pub fn suffix(&self, m: usize) -> Word {
        suffix_of_leftinf(self, m)
    }
}

/// Canonical representative of `∞root · tail`: Lyndon root, and a tail
/// that does not start with that root.
pub fn canonicalize(root: &[Letter], tail: &[Letter]) -> LeftInfWord {
    assert!(!root.is_empty(), "left-infinite word with empty root");
    let p = primitive_root(root).expect("non-empty root");
    // ∞(xy) = ∞(yx)·y
    let r = least_rotation(&p);
    let lyndon = Word(rotation(&p, r));
    let mut t = p[r..].to_vec();
    t.extend_from_slice(tail);
    let mut start = 0;
    while t.len() - start >= lyndon.len() && t[start..start + lyndon.len()] == lyndon[..] {
        start += lyndon.len();
    }
    LeftInfWord {
        root: lyndon,
        tail: Word(t[start..].to_vec()),
    }
}

/// Witness tails `(z1, z2)` with `y1 = y z1`, `y2 = y z2` when the two
/// words share a left-infinite prefix.
pub fn confinal(y1: &LeftInfWord, y2: &LeftInfWord) -> Option<(Word, Word)> {
    (y1.root == y2.root).then(|| (y1.tail.clone(), y2.tail.clone()))
}

pub fn suffix_of_leftinf(y: &LeftInfWord, m: usize) -> Word {
    if m <= y.tail.len() {
        return t_k(&y.tail, m);
    }
    let need = m - y.tail.len();
    let reps = need.div_ceil(y.root.len());
    let mut w = y.root.pow(reps);
    w.extend_from(&y.tail);
    t_k(&w, m)
}

/// Minimum `|u|` over `u ∈ A⁺` such that `y1 u = v y2` or `y2 u = v y1`
/// for some `v ∈ A⁺`. A shift by `r` works exactly when the length `m − r`
/// suffix of one word equals the length `m − r` prefix of the other.
pub fn gap(y1: &[Letter], y2: &[Letter]) -> Result<usize> {
    if y1.len() != y2.len() || y1.is_empty() {
        return Err(Error::input(
            "gap needs two non-empty words of equal length",
        ));
    }
    let m = y1.len();
    Ok((1..=m)
        .find(|&r| {
            let o = m - r;
            y1[r..] == y2[..o] || y2[r..] == y1[..o]
        })
        .unwrap_or(m))
}

/// A border: the length-`M` suffix of a class representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Border {
    pub word: Word,
    /// Present iff the border is periodic.
    pub root: Option<Word>,
}

impl Border {
    pub fn is_periodic(&self) -> bool {
        self.root.is_some()
    }
}
