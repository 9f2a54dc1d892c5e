//! Replays witnesses with word distances instead of transducers.

use codekit_core::codes::{sardinas_patterson, DoubleFactorization};
use codekit_core::transducers::{Closure, EditKind, EditRelation};
use codekit_core::words::{hamming, indel_distance, levenshtein, longest_common_subsequence};
use codekit_core::{Language, Word};

fn is_subsequence(short: &Word, long: &Word) -> bool {
    longest_common_subsequence(short, long) == short.len()
}

/// `v ∈ rel(u)`, decided from edit distances.
pub fn related(rel: EditRelation, u: &Word, v: &Word) -> bool {
    let k = rel.k;
    let plain = match rel.kind {
        EditKind::Deletion => u.len() == v.len() + k && is_subsequence(v, u),
        EditKind::Insertion => v.len() == u.len() + k && is_subsequence(u, v),
        EditKind::Substitution => hamming(u, v) == Some(k),
        EditKind::DeletionUpTo => (1..=k).contains(&u.len().saturating_sub(v.len())) && is_subsequence(v, u),
        EditKind::InsertionUpTo => (1..=k).contains(&v.len().saturating_sub(u.len())) && is_subsequence(u, v),
        EditKind::SubstitutionUpTo => hamming(u, v).is_some_and(|d| (1..=k).contains(&d)),
        // unions of 1..=k single steps; a step can be undone by the next one
        EditKind::Indel => {
            let d = indel_distance(u, v);
            d <= k && (d > 0 || k >= 2)
        }
        EditKind::Levenshtein => {
            let d = levenshtein(u, v);
            d <= k && (d > 0 || k >= 2)
        }
    };
    match rel.closure {
        Closure::Plain => plain,
        Closure::Reflexive => plain || u == v,
        Closure::Antireflexive => plain && u != v,
    }
}

pub fn factorization(x: &Language, w: &DoubleFactorization) -> bool {
    w.verify(x)
}

/// `u, v ∈ X` and `v ∈ τ̲(u)`.
pub fn dependence(x: &Language, rel: EditRelation, u: &Word, v: &Word) -> bool {
    x.contains(u) && x.contains(v) && u != v && related(rel.plain(), u, v)
}

/// `x ≠ y` in `X` sharing `common` in their images.
pub fn confusion(x: &Language, rel: EditRelation, a: &Word, b: &Word, common: &Word) -> bool {
    a != b && x.contains(a) && x.contains(b) && related(rel, a, common) && related(rel, b, common)
}

/// `u ∈ X`, `y ∉ X`, `y ∈ τ(u)`.
pub fn escape(x: &Language, rel: EditRelation, u: &Word, y: &Word) -> bool {
    x.contains(u) && !x.contains(y) && related(rel, u, y)
}

/// `w ∉ X` and `X ∪ {w}` is still a code.
pub fn extension(x: &Language, w: &Word) -> bool {
    if x.contains(w) {
        return false;
    }
    x.union(&Language::word(x.alphabet().clone(), w.clone()))
        .and_then(|y| sardinas_patterson(&y))
        .is_ok_and(|v| v.is_code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use codekit_core::Alphabet;

    fn w(s: &str) -> Word {
        Alphabet::new("ab").unwrap().parse_word(s).unwrap()
    }

    fn rel(s: &str) -> EditRelation {
        s.parse().unwrap()
    }

    #[test]
    fn distances_match_relations() {
        assert!(related(rel("delta:1"), &w("aab"), &w("ab")));
        assert!(!related(rel("delta:1"), &w("aab"), &w("b")));
        assert!(related(rel("Delta:2"), &w("aab"), &w("b")));
        assert!(related(rel("sigma:2"), &w("aa"), &w("bb")));
        assert!(!related(rel("Sigma:1"), &w("aa"), &w("bb")));
        assert!(related(rel("S:2"), &w("ab"), &w("ab")));
        assert!(!related(rel("S:2:bar"), &w("ab"), &w("ab")));
        assert!(!related(rel("Lambda:1"), &w("ab"), &w("ab")));
        assert!(related(rel("Lambda:1:hat"), &w("ab"), &w("ab")));
        assert!(related(rel("Lambda:1"), &w("baa"), &w("aaa")));
    }
}
