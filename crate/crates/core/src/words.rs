//! Finite words, alphabets and periodic words represented as necklaces.
//!
//! Symbols are small integers `0..size`; the text form maps them to
//! `'a'..='z'`, so a binary word prints as a string over `a` and `b`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ALPHABET: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if (2..=MAX_ALPHABET).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(Error::AlphabetSize(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn symbols(self) -> impl Iterator<Item = u8> + Clone {
        0..self.0
    }

    pub fn letter(self, symbol: u8) -> char {
        (b'a' + symbol) as char
    }

    pub fn symbol(self, letter: char) -> Result<u8> {
        let s = (letter as u32).wrapping_sub('a' as u32);
        if s < self.0 as u32 {
            Ok(s as u8)
        } else {
            Err(Error::InvalidLetter(letter))
        }
    }

    pub fn render(self, symbols: &[u8]) -> String {
        symbols.iter().map(|&s| self.letter(s)).collect()
    }

    pub(crate) fn check_same(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch { left: self.size(), right: other.size() })
        }
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Alphabet::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.size()
    }
}

/// A finite word over a fixed alphabet. The empty word is allowed.
///
/// Ordering is shortlex: shorter words first, then lexicographic. This is
/// the order restriction lists are printed in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.size()) {
            return Err(Error::SymbolOutOfRange { symbol: bad, size: alphabet.size() });
        }
        Ok(Word { alphabet, symbols })
    }

    pub(crate) fn from_raw(alphabet: Alphabet, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.size()));
        Word { alphabet, symbols }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { alphabet, symbols: Vec::new() }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let symbols = text.chars().map(|c| alphabet.symbol(c)).collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, symbols })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `self[start..end]` as a word, 0-based and half-open.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word::from_raw(self.alphabet, self.symbols[start..end].to_vec())
    }

    pub fn rotate(&self, by: usize) -> Word {
        let mut symbols = self.symbols.clone();
        if !symbols.is_empty() {
            let by = by % symbols.len();
            symbols.rotate_left(by);
        }
        Word::from_raw(self.alphabet, symbols)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .cmp(&other.alphabet)
            .then(self.symbols.len().cmp(&other.symbols.len()))
            .then_with(|| self.symbols.cmp(&other.symbols))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(&self.symbols))
    }
}

/// A periodic bi-infinite word, stored as its primitive period in
/// lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace {
    period: Word,
}

impl Necklace {
    /// Parses a period and canonicalizes it.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        canonicalize(&Word::parse(alphabet, text)?)
    }

    pub fn period_word(&self) -> &Word {
        &self.period
    }

    pub fn symbols(&self) -> &[u8] {
        self.period.symbols()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.period.alphabet()
    }

    /// The least period.
    pub fn n(&self) -> usize {
        self.period.len()
    }

    /// Symbol at position `i` of the periodization (taken mod n).
    pub fn at(&self, i: usize) -> u8 {
        self.period.symbols[i % self.n()]
    }

    /// Letters occurring in the word, ascending.
    pub fn letters(&self) -> BTreeSet<u8> {
        self.period.symbols.iter().copied().collect()
    }

    /// Swaps `a` and `b`; only meaningful for binary words.
    pub fn complement(&self) -> Necklace {
        debug_assert_eq!(self.alphabet(), Alphabet::BINARY);
        let symbols = self.period.symbols.iter().map(|&s| 1 - s).collect();
        canonicalize(&Word::from_raw(self.alphabet(), symbols)).expect("nonempty")
    }

    /// The length-`k` window starting at position `i`, read cyclically.
    pub fn window(&self, i: usize, k: usize) -> Vec<u8> {
        (i..i + k).map(|j| self.at(j)).collect()
    }

    pub fn factors(&self, k: usize) -> BTreeSet<Word> {
        factors(self, k)
    }

    pub fn is_factor(&self, x: &Word) -> Result<bool> {
        is_factor(self, x)
    }

    /// Factor test on raw symbols, without the alphabet check.
    pub fn contains(&self, x: &[u8]) -> bool {
        if x.is_empty() {
            return true;
        }
        let n = self.n();
        let p = self.symbols();
        (0..n).any(|i| x.iter().enumerate().all(|(j, &s)| p[(i + j) % n] == s))
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.period.fmt(f)
    }
}

/// Necklace of the bi-infinite periodization of `word`.
pub fn canonicalize(word: &Word) -> Result<Necklace> {
    let s = word.symbols();
    if s.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = s.len();
    let p = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (0..n).all(|i| s[i] == s[(i + d) % n]))
        .unwrap_or(n);
    let root = &s[..p];
    let r = least_rotation(root);
    let mut period = root.to_vec();
    period.rotate_left(r);
    Ok(Necklace { period: Word::from_raw(word.alphabet(), period) })
}

/// Start index of the lexicographically least rotation (two-pointer
/// minimum-expression scan, linear time).
pub fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// All length-`k` factors of the periodic word; `{ε}` for `k = 0`.
pub fn factors(w: &Necklace, k: usize) -> BTreeSet<Word> {
    (0..w.n()).map(|i| Word::from_raw(w.alphabet(), w.window(i, k))).collect()
}

pub fn is_factor(w: &Necklace, x: &Word) -> Result<bool> {
    w.alphabet().check_same(x.alphabet())?;
    Ok(w.contains(x.symbols()))
}

/// Iterator over primitive necklaces (Lyndon words) of length `n`, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Necklaces {
    alphabet: Alphabet,
    n: usize,
    current: Vec<u8>,
    done: bool,
}

impl Iterator for Necklaces {
    type Item = Necklace;

    fn next(&mut self) -> Option<Necklace> {
        let top = self.alphabet.size() as u8 - 1;
        // Duval's successor walks every Lyndon word of length <= n; keep length n.
        while !self.done {
            let found =
                (self.current.len() == self.n).then(|| Word::from_raw(self.alphabet, self.current.clone()));
            let m = self.current.len();
            let mut next: Vec<u8> = (0..self.n).map(|i| self.current[i % m]).collect();
            while next.last() == Some(&top) {
                next.pop();
            }
            match next.last_mut() {
                Some(last) => *last += 1,
                None => self.done = true,
            }
            self.current = next;
            if let Some(period) = found {
                return Some(Necklace { period });
            }
        }
        None
    }
}

pub fn enumerate_necklaces(alphabet: Alphabet, n: usize) -> Necklaces {
    Necklaces { alphabet, n, current: vec![0], done: n == 0 }
}

/// Number of primitive necklaces of length `n` (Moreau's formula).
pub fn primitive_necklace_count(alphabet: Alphabet, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let k = alphabet.size() as i128;
    let total: i128 =
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(d) as i128 * k.pow((n / d) as u32)).sum();
    (total / n as i128) as u64
}

pub fn mobius(mut m: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(s: &str) -> Word {
        Word::parse(Alphabet::BINARY, s).unwrap()
    }

    fn texts(set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn canonical_forms() {
        let ab = canonicalize(&bin("abab")).unwrap();
        assert_eq!((ab.to_string(), ab.n()), ("ab".into(), 2));
        let aab = canonicalize(&bin("aab")).unwrap();
        assert_eq!((aab.to_string(), aab.n()), ("aab".into(), 3));
        assert_eq!(canonicalize(&bin("baa")).unwrap(), aab);
        assert_eq!(canonicalize(&bin("a")).unwrap().n(), 1);
        assert_eq!(canonicalize(&bin("")), Err(Error::EmptyWord));
    }

    #[test]
    fn factor_examples() {
        let aab = Necklace::parse(Alphabet::BINARY, "aab").unwrap();
        assert_eq!(texts(&aab.factors(2)), ["aa", "ab", "ba"]);
        assert_eq!(texts(&aab.factors(3)), ["aab", "aba", "baa"]);
        assert_eq!(texts(&aab.factors(0)), [""]);
        let a = Necklace::parse(Alphabet::BINARY, "a").unwrap();
        assert_eq!(texts(&a.factors(3)), ["aaa"]);
    }

    #[test]
    fn factor_membership() {
        let aab = Necklace::parse(Alphabet::BINARY, "aab").unwrap();
        assert!(!aab.is_factor(&bin("bab")).unwrap());
        assert!(aab.is_factor(&bin("aabaab")).unwrap());
        let ab = Necklace::parse(Alphabet::BINARY, "ab").unwrap();
        assert!(!ab.is_factor(&bin("aa")).unwrap());
        let ternary = Word::parse(Alphabet::new(3).unwrap(), "ab").unwrap();
        assert!(matches!(ab.is_factor(&ternary), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn small_necklace_lists() {
        let list = |n| enumerate_necklaces(Alphabet::BINARY, n).map(|w| w.to_string()).collect::<Vec<_>>();
        assert_eq!(list(1), ["a", "b"]);
        assert_eq!(list(3), ["aab", "abb"]);
        assert_eq!(list(6).len(), 9);
        assert_eq!(primitive_necklace_count(Alphabet::BINARY, 6), 9);
    }

    #[test]
    fn enumeration_matches_moreau() {
        for size in 2..=4 {
            let a = Alphabet::new(size).unwrap();
            for n in 1..=9 {
                let all: Vec<_> = enumerate_necklaces(a, n).collect();
                assert_eq!(all.len() as u64, primitive_necklace_count(a, n), "size {size} n {n}");
                let distinct: BTreeSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                assert!(all.iter().all(|w| canonicalize(w.period_word()).as_ref() == Ok(w)));
            }
        }
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(27).is_err());
        assert_eq!(Alphabet::BINARY.symbol('c'), Err(Error::InvalidLetter('c')));
        assert!(Word::new(Alphabet::BINARY, vec![0, 2]).is_err());
    }
}
