//! Transducer images against direct combinatorial definitions.

use std::collections::BTreeSet;

use codekit_core::transducers::{EditKind, EditRelation};
use codekit_core::words::{hamming, indel_distance, levenshtein, subsequences};
use codekit_core::{Alphabet, Word};
use proptest::prelude::*;

fn is_subsequence(short: &Word, long: &Word) -> bool {
    let mut it = long.letters().iter();
    short.letters().iter().all(|c| it.any(|d| d == c))
}

fn oracle(a: &Alphabet, kind: EditKind, k: usize, w: &Word) -> BTreeSet<Word> {
    let n = w.len();
    let exact = |i: usize| -> BTreeSet<Word> {
        match kind {
            EditKind::Deletion | EditKind::DeletionUpTo if i <= n => subsequences(w, n - i),
            EditKind::Deletion | EditKind::DeletionUpTo => BTreeSet::new(),
            EditKind::Insertion | EditKind::InsertionUpTo => a
                .words_of_length(n + i)
                .into_iter()
                .filter(|u| is_subsequence(w, u))
                .collect(),
            EditKind::Substitution | EditKind::SubstitutionUpTo => a
                .words_of_length(n)
                .into_iter()
                .filter(|u| hamming(w, u) == Some(i))
                .collect(),
            _ => unreachable!(),
        }
    };
    let dist_ball = |dist: &dyn Fn(&Word, &Word) -> usize| -> BTreeSet<Word> {
        let mut out: BTreeSet<Word> = a
            .words_up_to(n + k)
            .into_iter()
            .filter(|u| (1..=k).contains(&dist(w, u)))
            .collect();
        if k >= 2 {
            out.insert(w.clone());
        }
        out
    };
    match kind {
        EditKind::Deletion | EditKind::Insertion | EditKind::Substitution => exact(k),
        EditKind::DeletionUpTo | EditKind::InsertionUpTo | EditKind::SubstitutionUpTo => {
            (1..=k).flat_map(exact).collect()
        }
        EditKind::Indel => dist_ball(&indel_distance),
        EditKind::Levenshtein => dist_ball(&levenshtein),
    }
}

/// Iterated single edits, for the composed relations.
fn by_steps(a: &Alphabet, subst: bool, k: usize, w: &Word) -> BTreeSet<Word> {
    let step = |u: &Word| -> BTreeSet<Word> {
        let l = u.letters();
        let mut out = BTreeSet::new();
        for i in 0..l.len() {
            let mut v = l.to_vec();
            v.remove(i);
            out.insert(Word(v));
            if subst {
                for c in a.letters().filter(|&c| c != l[i]) {
                    let mut v = l.to_vec();
                    v[i] = c;
                    out.insert(Word(v));
                }
            }
        }
        for i in 0..=l.len() {
            for c in a.letters() {
                let mut v = l.to_vec();
                v.insert(i, c);
                out.insert(Word(v));
            }
        }
        out
    };
    let mut round: BTreeSet<Word> = [w.clone()].into();
    let mut all = BTreeSet::new();
    for _ in 0..k {
        round = round.iter().flat_map(step).collect();
        all.extend(round.iter().cloned());
    }
    all
}

#[test]
fn all_relations_on_short_words() {
    for letters in ["ab", "abc"] {
        let a = Alphabet::new(letters).unwrap();
        let max = if letters.len() == 2 { 5 } else { 3 };
        for kind in EditKind::ALL {
            for k in 1..=3 {
                let rel = EditRelation::new(kind, k).unwrap();
                let t = rel.transducer(&a);
                for w in a.words_up_to(max) {
                    let got = t.image_word(&w).unwrap();
                    assert_eq!(got, oracle(&a, kind, k, &w), "{rel} on {}", a.render(&w));
                }
            }
        }
    }
}

#[test]
fn composed_relations_match_step_iteration() {
    let a = Alphabet::new("ab").unwrap();
    for k in 1..=3 {
        let s = EditRelation::new(EditKind::Indel, k).unwrap().transducer(&a);
        let l = EditRelation::new(EditKind::Levenshtein, k).unwrap().transducer(&a);
        for w in a.words_up_to(4) {
            assert_eq!(s.image_word(&w).unwrap(), by_steps(&a, false, k, &w));
            assert_eq!(l.image_word(&w).unwrap(), by_steps(&a, true, k, &w));
        }
    }
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..2, 0..=max).prop_map(Word)
}

proptest! {
    #[test]
    fn inverse_relation_is_converse(u in word_strategy(6), v in word_strategy(6), k in 1usize..=2, ki in 0usize..8) {
        let a = Alphabet::new("ab").unwrap();
        let rel = EditRelation::new(EditKind::ALL[ki], k).unwrap();
        let fwd = rel.apply_word(&a, &u).unwrap().contains(&v);
        let back = rel.inverse().apply_word(&a, &v).unwrap().contains(&u);
        prop_assert_eq!(fwd, back);
    }

    #[test]
    fn closures_adjust_identity(u in word_strategy(7), k in 1usize..=3, ki in 0usize..8) {
        use codekit_core::transducers::Closure;
        let a = Alphabet::new("ab").unwrap();
        let rel = EditRelation::new(EditKind::ALL[ki], k).unwrap();
        let plain = rel.apply_word(&a, &u).unwrap();
        let hat = rel.with_closure(Closure::Reflexive).apply_word(&a, &u).unwrap();
        let bar = rel.with_closure(Closure::Antireflexive).apply_word(&a, &u).unwrap();
        let mut expect_hat = plain.clone();
        expect_hat.insert(u.clone());
        let mut expect_bar = plain.clone();
        expect_bar.remove(&u);
        prop_assert_eq!(hat, expect_hat);
        prop_assert_eq!(bar, expect_bar);
        prop_assert_eq!(plain.contains(&u), !rel.plain_is_antireflexive());
    }
}
