//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use codekit_core::transducers::EditKind;
use codekit_core::words::subsequences;
use codekit_core::{Alphabet, Word};
use rand::Rng;
use rustc_hash::FxHashSet;

/// Words of length at most 28 over at most four letters packed into a u64:
/// two bits per letter, the length in the top byte.
mod packed {
    const LEN_SHIFT: u32 = 56;
    const BODY: u64 = (1 << LEN_SHIFT) - 1;

    pub fn len(p: u64) -> usize {
        (p >> LEN_SHIFT) as usize
    }

    pub fn pack(w: &[u8]) -> u64 {
        let body = w.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c as u64) << (2 * i));
        body | (w.len() as u64) << LEN_SHIFT
    }

    pub fn unpack(p: u64) -> Vec<u8> {
        (0..len(p)).map(|i| ((p >> (2 * i)) & 3) as u8).collect()
    }

    fn with_len(body: u64, n: usize) -> u64 {
        (body & BODY) | (n as u64) << LEN_SHIFT
    }

    pub fn delete(p: u64, i: usize) -> u64 {
        let low = p & ((1u64 << (2 * i)) - 1);
        let high = ((p & BODY) >> (2 * i + 2)) << (2 * i);
        with_len(low | high, len(p) - 1)
    }

    pub fn insert(p: u64, i: usize, c: u8) -> u64 {
        let low = p & ((1u64 << (2 * i)) - 1);
        let high = ((p & BODY) >> (2 * i)) << (2 * i + 2);
        with_len(low | (c as u64) << (2 * i) | high, len(p) + 1)
    }

    pub fn substitute(p: u64, i: usize, c: u8) -> u64 {
        (p & !(3u64 << (2 * i))) | (c as u64) << (2 * i)
    }

    pub fn at(p: u64, i: usize) -> u8 {
        ((p >> (2 * i)) & 3) as u8
    }
}

#[derive(Clone, Copy)]
pub struct Steps {
    pub delete: bool,
    pub insert: bool,
    pub substitute: bool,
}

fn neighbours(p: u64, letters: u8, steps: Steps, out: &mut Vec<u64>) {
    let n = packed::len(p);
    if steps.delete {
        out.extend((0..n).map(|i| packed::delete(p, i)));
    }
    if steps.insert {
        for i in 0..=n {
            out.extend((0..letters).map(|c| packed::insert(p, i, c)));
        }
    }
    if steps.substitute {
        for i in 0..n {
            let cur = packed::at(p, i);
            out.extend((0..letters).filter(|&c| c != cur).map(|c| packed::substitute(p, i, c)));
        }
    }
}

/// Rounds `1..=k` of single edits from `w`; the union of the rounds if
/// `union`, else the last round only.
pub fn step_rounds(a: &Alphabet, w: &Word, k: usize, steps: Steps, union: bool) -> BTreeSet<Word> {
    let letters = a.size() as u8;
    let mut round: FxHashSet<u64> = [packed::pack(w.letters())].into_iter().collect();
    let mut all: FxHashSet<u64> = FxHashSet::default();
    let mut buf = Vec::new();
    for _ in 0..k {
        let mut next = FxHashSet::default();
        for &p in &round {
            buf.clear();
            neighbours(p, letters, steps, &mut buf);
            next.extend(buf.iter().copied());
        }
        round = next;
        if union {
            all.extend(round.iter().copied());
        }
    }
    let chosen = if union { all } else { round };
    chosen.into_iter().map(|p| Word(packed::unpack(p))).collect()
}

/// Same-length words at Hamming distance exactly `k`.
fn substitutions(a: &Alphabet, w: &Word, k: usize) -> BTreeSet<Word> {
    fn go(a: &Alphabet, w: &[u8], i: usize, left: usize, cur: &mut Vec<u8>, out: &mut BTreeSet<Word>) {
        if w.len() - i < left {
            return;
        }
        if i == w.len() {
            out.insert(Word(cur.clone()));
            return;
        }
        cur.push(w[i]);
        go(a, w, i + 1, left, cur, out);
        cur.pop();
        if left > 0 {
            for c in a.letters().filter(|&c| c != w[i]) {
                cur.push(c);
                go(a, w, i + 1, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(a, w.letters(), 0, k, &mut Vec::new(), &mut out);
    out
}

const INSERT: Steps = Steps { delete: false, insert: true, substitute: false };
const INDEL: Steps = Steps { delete: true, insert: true, substitute: false };
const EDIT: Steps = Steps { delete: true, insert: true, substitute: true };

/// Definitional images: subsequences for deletions, iterated single
/// insertions, Hamming spheres, and rounds of single edits for the
/// composed relations.
pub fn edit_image(a: &Alphabet, kind: EditKind, k: usize, w: &Word) -> BTreeSet<Word> {
    let n = w.len();
    let exact = |i: usize| -> BTreeSet<Word> {
        match kind {
            EditKind::Deletion | EditKind::DeletionUpTo => {
                if i <= n {
                    subsequences(w, n - i)
                } else {
                    BTreeSet::new()
                }
            }
            EditKind::Insertion | EditKind::InsertionUpTo => step_rounds(a, w, i, INSERT, false),
            EditKind::Substitution | EditKind::SubstitutionUpTo => substitutions(a, w, i),
            EditKind::Indel | EditKind::Levenshtein => unreachable!(),
        }
    };
    match kind {
        EditKind::Deletion | EditKind::Insertion | EditKind::Substitution => exact(k),
        EditKind::DeletionUpTo | EditKind::InsertionUpTo | EditKind::SubstitutionUpTo => {
            (1..=k).flat_map(exact).collect()
        }
        EditKind::Indel => step_rounds(a, w, k, INDEL, true),
        EditKind::Levenshtein => step_rounds(a, w, k, EDIT, true),
    }
}

/// True when some message of length at most `max` has two factorizations.
pub fn ambiguous_message(x: &BTreeSet<Word>, a: &Alphabet, max: usize) -> bool {
    a.words_up_to(max).iter().any(|m| {
        let l = m.letters();
        let mut count = vec![0u8; l.len() + 1];
        count[0] = 1;
        for i in 1..=l.len() {
            let mut c = 0u8;
            for w in x {
                let n = w.len();
                if n <= i && &l[i - n..i] == w.letters() {
                    c = c.saturating_add(count[i - n]);
                }
            }
            count[i] = c.min(2);
        }
        count[l.len()] >= 2
    })
}

/// Up to `max_words` distinct random words with lengths in `1..=max_len`.
pub fn random_set(rng: &mut impl Rng, a: &Alphabet, max_words: usize, max_len: usize) -> BTreeSet<Word> {
    let count = rng.gen_range(1..=max_words);
    let mut out = BTreeSet::new();
    while out.len() < count {
        let n = rng.gen_range(1..=max_len);
        out.insert(Word((0..n).map(|_| rng.gen_range(0..a.size() as u8)).collect()));
    }
    out
}
