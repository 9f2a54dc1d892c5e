//! Regular languages over a declared alphabet.
//!
//! [`Language`] is either an explicit finite word set or an NFA. Finite
//! operands stay finite wherever the result is finite by construction;
//! everything else goes through determinization, which is bounded by a
//! state cap held per thread (see [`set_state_cap`]).

mod dfa;
mod expr;
mod nfa;

use std::collections::BTreeSet;
use std::cell::Cell;
use std::sync::OnceLock;

pub use dfa::Dfa;
pub use expr::{compile, parse_expr, Expr};
pub use nfa::{Nfa, StateId};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

pub const DEFAULT_STATE_CAP: usize = 1 << 16;

thread_local! {
    static STATE_CAP: Cell<usize> = const { Cell::new(DEFAULT_STATE_CAP) };
}

/// Maximum number of states any determinization or product may create on
/// the current thread.
pub fn state_cap() -> usize {
    STATE_CAP.with(Cell::get)
}

pub fn set_state_cap(cap: usize) {
    STATE_CAP.with(|c| c.set(cap.max(1)));
}

/// Upper bound on explicit enumerations of finite languages.
pub const FINITE_ENUMERATION_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug)]
enum Repr {
    Finite(BTreeSet<Word>),
    Regular(Nfa),
}

#[derive(Clone, Debug)]
pub struct Language {
    alphabet: Alphabet,
    repr: Repr,
    canonical: OnceLock<Dfa>,
}

impl Language {
    pub fn finite(alphabet: Alphabet, words: impl IntoIterator<Item = Word>) -> Self {
        Language {
            alphabet,
            repr: Repr::Finite(words.into_iter().collect()),
            canonical: OnceLock::new(),
        }
    }

    pub fn regular(nfa: Nfa) -> Self {
        Language {
            alphabet: nfa.alphabet().clone(),
            repr: Repr::Regular(nfa),
            canonical: OnceLock::new(),
        }
    }

    pub fn from_dfa(dfa: Dfa) -> Self {
        let lang = Language::regular(dfa.to_nfa());
        let canonical = dfa.minimize();
        let _ = lang.canonical.set(canonical);
        lang
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Language::finite(alphabet, [])
    }

    /// `{ε}`
    pub fn epsilon(alphabet: Alphabet) -> Self {
        Language::finite(alphabet, [Word::empty()])
    }

    pub fn word(alphabet: Alphabet, w: Word) -> Self {
        Language::finite(alphabet, [w])
    }

    /// `A*`
    pub fn universal(alphabet: Alphabet) -> Self {
        Language::regular(Nfa::universal(alphabet))
    }

    /// `A^n`
    pub fn level(alphabet: Alphabet, n: usize) -> Self {
        let words = alphabet.words_of_length(n);
        Language::finite(alphabet, words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The explicit word set, when this language is stored as one.
    pub fn as_finite(&self) -> Option<&BTreeSet<Word>> {
        match &self.repr {
            Repr::Finite(s) => Some(s),
            Repr::Regular(_) => None,
        }
    }

    pub fn to_nfa(&self) -> Nfa {
        match &self.repr {
            Repr::Finite(s) => Nfa::from_words(self.alphabet.clone(), s),
            Repr::Regular(n) => n.clone(),
        }
    }

    /// Canonical minimal DFA (cached).
    pub fn dfa(&self) -> Result<Dfa> {
        if let Some(d) = self.canonical.get() {
            return Ok(d.clone());
        }
        let d = self.to_nfa().determinize()?.minimize();
        let _ = self.canonical.set(d.clone());
        Ok(d)
    }

    pub fn contains(&self, w: &Word) -> bool {
        match &self.repr {
            Repr::Finite(s) => s.contains(w),
            Repr::Regular(n) => match self.canonical.get() {
                Some(d) => d.accepts(w),
                None => n.accepts(w),
            },
        }
    }

    /// Explicit members if the language is finite, `None` if infinite.
    pub fn finite_words(&self) -> Result<Option<BTreeSet<Word>>> {
        match &self.repr {
            Repr::Finite(s) => Ok(Some(s.clone())),
            Repr::Regular(_) => self.dfa()?.finite_words(FINITE_ENUMERATION_LIMIT),
        }
    }

    pub fn is_finite(&self) -> Result<bool> {
        match &self.repr {
            Repr::Finite(_) => Ok(true),
            Repr::Regular(_) => Ok(self.dfa()?.is_finite()),
        }
    }

    /// Same language, stored explicitly when it is finite.
    pub fn normalized(&self) -> Result<Language> {
        match &self.repr {
            Repr::Finite(_) => Ok(self.clone()),
            Repr::Regular(_) => Ok(match self.finite_words()? {
                Some(words) => Language::finite(self.alphabet.clone(), words),
                None => self.clone(),
            }),
        }
    }

    fn check(&self, other: &Language) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn union(&self, other: &Language) -> Result<Language> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => {
                Language::finite(self.alphabet.clone(), a.union(b).cloned())
            }
            _ => Language::regular(self.to_nfa().union(&other.to_nfa())),
        })
    }

    pub fn intersect(&self, other: &Language) -> Result<Language> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Finite(a), _) => {
                Language::finite(self.alphabet.clone(), a.iter().filter(|w| other.contains(w)).cloned())
            }
            (_, Repr::Finite(b)) => {
                Language::finite(self.alphabet.clone(), b.iter().filter(|w| self.contains(w)).cloned())
            }
            _ => Language::from_dfa(self.dfa()?.product(&other.dfa()?, |p, q| p && q)?),
        })
    }

    /// `self \ other`
    pub fn difference(&self, other: &Language) -> Result<Language> {
        self.check(other)?;
        Ok(match &self.repr {
            Repr::Finite(a) => Language::finite(
                self.alphabet.clone(),
                a.iter().filter(|w| !other.contains(w)).cloned(),
            ),
            Repr::Regular(_) => {
                Language::from_dfa(self.dfa()?.product(&other.dfa()?, |p, q| p && !q)?)
            }
        })
    }

    /// Complement relative to `A*`.
    pub fn complement(&self) -> Result<Language> {
        Ok(Language::from_dfa(self.dfa()?.complement()))
    }

    pub fn concat(&self, other: &Language) -> Result<Language> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => Language::finite(
                self.alphabet.clone(),
                a.iter().flat_map(|x| b.iter().map(move |y| x.concat(y))),
            ),
            _ => Language::regular(self.to_nfa().concat(&other.to_nfa())),
        })
    }

    pub fn star(&self) -> Language {
        match &self.repr {
            Repr::Finite(s) if s.iter().all(Word::is_empty) => Language::epsilon(self.alphabet.clone()),
            _ => Language::regular(self.to_nfa().star()),
        }
    }

    /// `U⁻¹X = { v : ∃u ∈ U, uv ∈ X }`; with `drop_epsilon` the empty word
    /// is removed from the result.
    pub fn left_quotient(prefixes: &Language, x: &Language, drop_epsilon: bool) -> Result<Language> {
        prefixes.check(x)?;
        let mut out = match (&prefixes.repr, &x.repr) {
            (Repr::Finite(us), Repr::Finite(xs)) => {
                let mut out = BTreeSet::new();
                for u in us {
                    for w in xs {
                        if u.is_prefix_of(w) {
                            out.insert(Word(w.letters()[u.len()..].to_vec()));
                        }
                    }
                }
                Language::finite(x.alphabet.clone(), out)
            }
            (_, Repr::Finite(xs)) => {
                // every suffix of a member of X whose complementary prefix lies in U
                let mut out = BTreeSet::new();
                for w in xs {
                    for i in 0..=w.len() {
                        if prefixes.contains(&Word(w.letters()[..i].to_vec())) {
                            out.insert(Word(w.letters()[i..].to_vec()));
                        }
                    }
                }
                Language::finite(x.alphabet.clone(), out)
            }
            _ => Language::regular(x.to_nfa().left_quotient_by(&prefixes.to_nfa())),
        };
        if drop_epsilon && out.contains(&Word::empty()) {
            out = out.difference(&Language::epsilon(x.alphabet.clone()))?;
        }
        Ok(out)
    }

    /// `X U⁻¹ = { v : ∃u ∈ U, vu ∈ X }`.
    pub fn right_quotient(x: &Language, suffixes: &Language) -> Result<Language> {
        x.check(suffixes)?;
        Ok(match (&x.repr, &suffixes.repr) {
            (Repr::Finite(xs), _) => {
                let mut out = BTreeSet::new();
                for w in xs {
                    for i in 0..=w.len() {
                        if suffixes.contains(&Word(w.letters()[i..].to_vec())) {
                            out.insert(Word(w.letters()[..i].to_vec()));
                        }
                    }
                }
                Language::finite(x.alphabet.clone(), out)
            }
            _ => {
                let rev = x.to_nfa().reverse().left_quotient_by(&suffixes.to_nfa().reverse());
                Language::regular(rev.reverse().trim())
            }
        })
    }

    /// Factor language `F(L)`.
    pub fn factors(&self) -> Language {
        match &self.repr {
            Repr::Finite(s) => {
                let mut out = BTreeSet::new();
                for w in s {
                    for i in 0..=w.len() {
                        for j in i..=w.len() {
                            out.insert(Word(w.letters()[i..j].to_vec()));
                        }
                    }
                }
                Language::finite(self.alphabet.clone(), out)
            }
            Repr::Regular(n) => Language::regular(n.factors()),
        }
    }

    pub fn is_empty(&self) -> Result<bool> {
        match &self.repr {
            Repr::Finite(s) => Ok(s.is_empty()),
            Repr::Regular(_) => Ok(self.dfa()?.is_empty()),
        }
    }

    pub fn is_universal(&self) -> Result<bool> {
        match &self.repr {
            Repr::Finite(_) => Ok(false),
            Repr::Regular(_) => Ok(self.dfa()?.is_universal()),
        }
    }

    /// Length-lex least member.
    pub fn shortest_word(&self) -> Result<Option<Word>> {
        match &self.repr {
            Repr::Finite(s) => Ok(s.first().cloned()),
            Repr::Regular(_) => Ok(self.dfa()?.shortest_word()),
        }
    }

    pub fn equivalent(&self, other: &Language) -> Result<bool> {
        self.check(other)?;
        if let (Repr::Finite(a), Repr::Finite(b)) = (&self.repr, &other.repr) {
            return Ok(a == b);
        }
        Ok(self.dfa()? == other.dfa()?)
    }

    pub fn is_subset(&self, other: &Language) -> Result<bool> {
        self.difference(other)?.is_empty()
    }

    /// Members of length at most `max_len`.
    pub fn words_up_to(&self, max_len: usize) -> Result<BTreeSet<Word>> {
        match &self.repr {
            Repr::Finite(s) => Ok(s.iter().filter(|w| w.len() <= max_len).cloned().collect()),
            Repr::Regular(_) => Ok(self.dfa()?.words_up_to(max_len)),
        }
    }

    /// Renders the language: explicit members when finite, a size summary otherwise.
    pub fn describe(&self) -> String {
        match self.finite_words() {
            Ok(Some(words)) => {
                let items: Vec<String> = words.iter().map(|w| self.alphabet.render(w)).collect();
                format!("{{{}}}", items.join(", "))
            }
            Ok(None) => match self.dfa() {
                Ok(d) => format!("<infinite regular language, {} minimal-DFA states>", d.num_states()),
                Err(e) => format!("<regular language: {e}>"),
            },
            Err(e) => format!("<regular language: {e}>"),
        }
    }
}
