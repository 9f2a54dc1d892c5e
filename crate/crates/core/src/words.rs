//! Alphabets, words and the elementary word combinatorics everything else
//! is built on: subsequences, distances, borders and binary arithmetic.
//!
//! Letters are stored as indices into an [`Alphabet`]; the alphabet order
//! fixes every enumeration order in the crate. Words compare in length-lex
//! order (shorter first, then letter by letter), so a `BTreeSet<Word>`
//! iterates in the canonical witness order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
pub type Letter = u8;

/// Textual spelling of the empty word.
pub const EPSILON: &str = "eps";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Arc<[char]>,
}

impl Alphabet {
    /// Builds an alphabet from its letters in order, e.g. `"ab"`.
    pub fn new(letters: &str) -> Result<Self> {
        let letters: Vec<char> = letters.chars().collect();
        if letters.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least two letters, got {}",
                letters.len()
            )));
        }
        if letters.len() > usize::from(Letter::MAX) {
            return Err(Error::InvalidAlphabet("too many letters".into()));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {c:?}")));
            }
            if c.is_whitespace() || "|.*()".contains(*c) {
                return Err(Error::InvalidAlphabet(format!("reserved character {c:?}")));
            }
        }
        Ok(Alphabet { letters: letters.into() })
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn is_binary(&self) -> bool {
        self.size() == 2
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.size() as Letter
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.letters[usize::from(letter)]
    }

    pub fn index_of(&self, c: char) -> Result<Letter> {
        self.letters
            .iter()
            .position(|&l| l == c)
            .map(|i| i as Letter)
            .ok_or(Error::UnknownLetter(c))
    }

    /// Parses juxtaposed letters; `eps` denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == EPSILON {
            return Ok(Word::empty());
        }
        text.chars().map(|c| self.index_of(c)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            EPSILON.to_string()
        } else {
            word.0.iter().map(|&l| self.symbol(l)).collect()
        }
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().collect()
    }

    /// All words of length exactly `n`, in length-lex order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|w| self.letters().map(move |a| w.push(a)))
                .collect();
        }
        out
    }

    /// All words of length at most `n`, in length-lex order.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|len| self.words_of_length(len)).collect()
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NonBinary)
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.as_string())
    }
}

/// A finite word; letters are alphabet indices.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, letter: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// Subsequences of `w` of length exactly `m`, duplicates collapsed.
pub fn subsequences(w: &Word, m: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    if m > w.len() {
        return out;
    }
    fn go(w: &[Letter], m: usize, start: usize, acc: &mut Vec<Letter>, out: &mut BTreeSet<Word>) {
        if acc.len() == m {
            out.insert(Word(acc.clone()));
            return;
        }
        let need = m - acc.len();
        for i in start..=w.len() - need {
            acc.push(w[i]);
            go(w, m, i + 1, acc, out);
            acc.pop();
        }
    }
    go(w.letters(), m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Number of differing positions, or `None` when the lengths differ.
pub fn hamming(u: &Word, v: &Word) -> Option<usize> {
    if u.len() != v.len() {
        return None;
    }
    Some(u.0.iter().zip(&v.0).filter(|(a, b)| a != b).count())
}

pub fn levenshtein(u: &Word, v: &Word) -> usize {
    let (a, b) = (u.letters(), v.letters());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn longest_common_subsequence(u: &Word, v: &Word) -> usize {
    let (a, b) = (u.letters(), v.letters());
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            cur[j] = if a[i - 1] == b[j - 1] {
                prev[j - 1] + 1
            } else {
                prev[j].max(cur[j - 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Minimum number of single-letter deletions and insertions turning `u` into `v`.
pub fn indel_distance(u: &Word, v: &Word) -> usize {
    u.len() + v.len() - 2 * longest_common_subsequence(u, v)
}

/// Length of the longest nonempty proper border of `w` (0 when unbordered).
fn longest_border(w: &[Letter]) -> usize {
    // KMP failure function
    let mut fail = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail.last().copied().unwrap_or(0)
}

/// True iff no nonempty proper prefix of `w` is also a suffix.
pub fn is_unbordered(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(longest_border(w.letters()) == 0)
}

/// Shortest `u` (length-lex least among the shortest) with `w·u` unbordered.
///
/// The search is capped at `|u| ≤ |w| + 2`.
pub fn unbordered_extension(alphabet: &Alphabet, w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let cap = w.len() + 2;
    let mut queue = VecDeque::from([Word::empty()]);
    while let Some(u) = queue.pop_front() {
        if longest_border(w.concat(&u).letters()) == 0 {
            return Ok(u);
        }
        if u.len() < cap {
            queue.extend(alphabet.letters().map(|a| u.push(a)));
        }
    }
    Err(Error::internal(format!(
        "no unbordered extension of length at most {cap}"
    )))
}

/// Positionwise sum in Z/2Z; letters map to 0/1 by alphabet order.
pub fn xor_add(alphabet: &Alphabet, u: &Word, v: &Word) -> Result<Word> {
    alphabet.require_binary()?;
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(Word(u.0.iter().zip(&v.0).map(|(a, b)| a ^ b).collect()))
}

pub fn complement_word(alphabet: &Alphabet, w: &Word) -> Result<Word> {
    alphabet.require_binary()?;
    Ok(Word(w.0.iter().map(|a| a ^ 1).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Parity of the number of occurrences of the alphabet's second letter.
pub fn parity_ones(alphabet: &Alphabet, w: &Word) -> Result<Parity> {
    alphabet.require_binary()?;
    Ok(Parity::of(w.count(1)))
}
