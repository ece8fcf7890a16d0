//! Generator alphabets with formal inverses, words over them, free reduction
//! and the shortlex order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

/// Index of a symbol in its alphabet. Symbol order is index order.
pub type Symbol = usize;

/// A finite ordered symbol set with an involutive inverse map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorAlphabet {
    names: Vec<String>,
    inverse: Vec<Symbol>,
}

impl GeneratorAlphabet {
    /// Builds an alphabet from names (in order) and the index of each inverse.
    pub fn new(names: Vec<String>, inverse: Vec<Symbol>) -> Result<Self> {
        if names.len() != inverse.len() {
            return Err(Error::usage("inverse table length differs from symbol count"));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::usage(format!("invalid symbol name {name:?}")));
            }
            if let Some(j) = seen.insert(name.as_str(), i) {
                return Err(Error::usage(format!("duplicate symbol name {name:?} at {j} and {i}")));
            }
        }
        for (i, &inv) in inverse.iter().enumerate() {
            if inv >= names.len() || inverse[inv] != i {
                return Err(Error::usage(format!(
                    "inverse map is not an involution at symbol {:?}",
                    names[i]
                )));
            }
        }
        Ok(Self { names, inverse })
    }

    /// Builds `x, X, y, Y, ...` style alphabets from `(generator, inverse)`
    /// name pairs. A pair whose second entry equals the first, or is `None`,
    /// is a self-inverse generator.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, Option<S>)]) -> Result<Self> {
        let mut names = Vec::new();
        let mut inverse = Vec::new();
        for (g, inv) in pairs {
            let g = g.as_ref();
            match inv.as_ref().map(AsRef::as_ref) {
                Some(h) if h != g => {
                    let i = names.len();
                    names.push(g.to_string());
                    names.push(h.to_string());
                    inverse.push(i + 1);
                    inverse.push(i);
                }
                _ => {
                    inverse.push(names.len());
                    names.push(g.to_string());
                }
            }
        }
        Self::new(names, inverse)
    }

    /// Free-group alphabet on the given generators, with inverses written as
    /// the upper-cased name (single letters) or `name^-1`.
    pub fn free<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let pairs: Vec<(String, Option<String>)> = generators
            .iter()
            .map(|g| {
                let g = g.as_ref().to_string();
                let inv = default_inverse_name(&g);
                (g, Some(inv))
            })
            .collect();
        Self::from_pairs(&pairs)
    }

    /// Alphabet of `n` self-inverse generators named `a, b, c, ...`
    /// (falling back to `x1, x2, ...` beyond 26).
    pub fn involutions(n: usize) -> Self {
        let names: Vec<String> = (0..n)
            .map(|i| {
                if n <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{}", i + 1)
                }
            })
            .collect();
        Self { names, inverse: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn inverse(&self, s: Symbol) -> Symbol {
        self.inverse[s]
    }

    pub fn inverse_table(&self) -> &[Symbol] {
        &self.inverse
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_involution(&self, s: Symbol) -> bool {
        self.inverse[s] == s
    }

    /// True if every name is a single character, so words print without separators.
    fn compact_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. Whitespace, `*` and `.` separate tokens; within a token
    /// the longest matching symbol name is taken greedily. `""`, `"1"`, `"e"`
    /// and `"ε"` denote the empty word unless they are symbol names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed.is_empty()
            || (["1", "e", "ε", "IdWord"].contains(&trimmed) && self.symbol(trimmed).is_none())
        {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for token in trimmed.split(|c: char| c.is_whitespace() || c == '*' || c == '.') {
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        letters.push(i);
                        rest = &rest[n.len()..];
                    }
                    None => {
                        let bad: String = rest.chars().take_while(|c| c.is_alphanumeric()).collect();
                        let bad = if bad.is_empty() { rest.chars().take(1).collect() } else { bad };
                        return Err(Error::parse(
                            format!("word {text:?}"),
                            format!("unknown symbol {bad:?}"),
                        ));
                    }
                }
            }
        }
        Ok(Word(letters))
    }

    /// Formats a word with this alphabet's names; the empty word is `""`.
    pub fn format_word(&self, w: &[Symbol]) -> String {
        let sep = if self.compact_names() { "" } else { " " };
        w.iter().map(|&s| self.names[s].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Like [`format_word`](Self::format_word) but writes `ε` for the empty word.
    pub fn display_word(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            "ε".to_string()
        } else {
            self.format_word(w)
        }
    }

    pub fn invert(&self, w: &[Symbol]) -> Word {
        invert_word(w, self)
    }

    pub fn free_reduce(&self, w: &[Symbol]) -> Word {
        free_reduce(w, self)
    }
}

pub fn default_inverse_name(g: &str) -> String {
    let mut chars = g.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_lowercase() => c.to_uppercase().collect(),
        _ => format!("{g}^-1"),
    }
}

/// A sequence of symbol indices; may be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_slice(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }

    /// Prefix of length `i` (clamped).
    pub fn prefix(&self, i: usize) -> &[Symbol] {
        &self.0[..i.min(self.0.len())]
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for Word {
    type Target = Vec<Symbol>;
    fn deref(&self) -> &Vec<Symbol> {
        &self.0
    }
}

impl DerefMut for Word {
    fn deref_mut(&mut self) -> &mut Vec<Symbol> {
        &mut self.0
    }
}

impl std::borrow::Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Shortlex comparison: shorter words first, then lexicographic by symbol index.
pub fn shortlex_cmp(u: &[Symbol], v: &[Symbol]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// `u <_slex v`, checking both words are over `alphabet`.
pub fn shortlex_less(u: &[Symbol], v: &[Symbol], alphabet: &GeneratorAlphabet) -> Result<bool> {
    let n = alphabet.len();
    if u.iter().chain(v).any(|&s| s >= n) {
        return Err(Error::usage("word contains a symbol outside the alphabet"));
    }
    Ok(shortlex_cmp(u, v) == Ordering::Less)
}

/// Reverses `w` and inverts every letter.
pub fn invert_word(w: &[Symbol], alphabet: &GeneratorAlphabet) -> Word {
    w.iter().rev().map(|&s| alphabet.inverse(s)).collect()
}

/// Deletes adjacent inverse pairs until none remain.
pub fn free_reduce(w: &[Symbol], alphabet: &GeneratorAlphabet) -> Word {
    let mut out: Vec<Symbol> = Vec::with_capacity(w.len());
    for &s in w {
        if out.last() == Some(&alphabet.inverse(s)) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    Word(out)
}

/// Free and cyclic reduction: also strips `x ... x^-1` from the two ends.
pub fn cyclic_reduce(w: &[Symbol], alphabet: &GeneratorAlphabet) -> Word {
    let mut r = free_reduce(w, alphabet).0;
    let mut lo = 0;
    let mut hi = r.len();
    while hi - lo >= 2 && alphabet.inverse(r[lo]) == r[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    r.truncate(hi);
    r.drain(..lo);
    Word(r)
}

/// Every word over `n` symbols of length exactly `len`, in lexicographic order.
pub fn all_words_of_length(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| (0..n).map(move |s| w.concat(&[s])))
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GeneratorAlphabet {
        GeneratorAlphabet::free(&["a", "b"]).unwrap()
    }

    #[test]
    fn shortlex_examples() {
        let a = f2();
        let w = |s: &str| a.parse_word(s).unwrap();
        // order a < A < b < B
        assert!(shortlex_less(&w("ab"), &w("ba"), &a).unwrap());
        assert!(!shortlex_less(&w("a"), &w("a"), &a).unwrap());
        assert!(shortlex_less(&w("ba"), &w("aab"), &a).unwrap());
        assert!(shortlex_less(&[7], &[0], &a).is_err());
    }

    #[test]
    fn shortlex_is_strict_total_order_exhaustive() {
        let mut words = Vec::new();
        for len in 0..=6 {
            words.extend(all_words_of_length(2, len));
        }
        let alpha = GeneratorAlphabet::involutions(2);
        for u in &words {
            for v in &words {
                let lt = shortlex_less(u, v, &alpha).unwrap();
                let gt = shortlex_less(v, u, &alpha).unwrap();
                let eq = u == v;
                assert_eq!([lt, gt, eq].iter().filter(|&&b| b).count(), 1);
            }
        }
    }

    #[test]
    fn inversion_examples() {
        let a = f2();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert_eq!(invert_word(&w("ab"), &a), w("BA"));
        assert_eq!(invert_word(&[], &a), Word::empty());
        let cox = GeneratorAlphabet::involutions(2);
        assert_eq!(invert_word(&[0, 0], &cox), Word(vec![0, 0]));
    }

    #[test]
    fn free_reduction_examples() {
        let a = f2();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert_eq!(free_reduce(&w("aAb"), &a), w("b"));
        assert_eq!(free_reduce(&w("ab"), &a), w("ab"));
        assert_eq!(free_reduce(&w("abBA"), &a), Word::empty());
    }

    /// Independent fixpoint oracle: delete the first cancelling pair, repeat.
    fn pair_deletion(w: &[Symbol], a: &GeneratorAlphabet) -> Vec<Symbol> {
        let mut v = w.to_vec();
        loop {
            let pos = v.windows(2).position(|p| a.inverse(p[0]) == p[1]);
            match pos {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn free_reduce_matches_pair_deletion() {
        let a = f2();
        for len in 0..=6 {
            for w in all_words_of_length(4, len) {
                assert_eq!(free_reduce(&w, &a).0, pair_deletion(&w, &a));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let a = f2();
        assert_eq!(a.names(), &["a", "A", "b", "B"]);
        assert_eq!(a.parse_word("a B").unwrap(), Word(vec![0, 3]));
        assert_eq!(a.parse_word("").unwrap(), Word::empty());
        assert!(matches!(a.parse_word("abc"), Err(Error::Parse { .. })));
        assert_eq!(a.format_word(&[0, 3]), "aB");
        let long = GeneratorAlphabet::free(&["x1", "x2"]).unwrap();
        assert_eq!(long.names()[1], "x1^-1");
        let w = long.parse_word("x1 x2^-1").unwrap();
        assert_eq!(w, Word(vec![0, 3]));
        assert_eq!(long.format_word(&w), "x1 x2^-1");
    }

    #[test]
    fn alphabet_validation() {
        assert!(GeneratorAlphabet::new(vec!["a".into(), "a".into()], vec![1, 0]).is_err());
        assert!(GeneratorAlphabet::new(vec!["a".into(), "b".into()], vec![1, 1]).is_err());
        assert!(GeneratorAlphabet::new(vec!["a".into()], vec![0]).is_ok());
    }

    #[test]
    fn cyclic_reduction() {
        let a = f2();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert_eq!(cyclic_reduce(&w("abA"), &a), w("b"));
        assert_eq!(cyclic_reduce(&w("ab"), &a), w("ab"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn free_reduce_idempotent(w in proptest::collection::vec(0usize..4, 0..30)) {
                let a = f2();
                let once = free_reduce(&w, &a);
                prop_assert_eq!(free_reduce(&once, &a), once);
            }

            #[test]
            fn word_times_inverse_is_trivial(w in proptest::collection::vec(0usize..4, 0..30)) {
                let a = f2();
                let inv = invert_word(&w, &a);
                prop_assert!(free_reduce(&Word(w.clone()).concat(&inv), &a).is_empty());
                prop_assert_eq!(invert_word(&inv, &a).0, w);
            }
        }
    }
}
