//! Normal-form transducers and the edit relations they realize.
//!
//! Every transition reads at most one letter and writes at most one letter;
//! `(ε, ε)` transitions are eliminated as soon as a construction produces
//! them. The basic machines have two states: identity loops on both and a
//! single defect transition from the first to the second. Longer relations
//! are obtained by chaining (the accepting state of one copy becomes the
//! initial state of the next) or by genuine composition.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::{Language, Nfa};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// Cap on the number of words in the image of a single word.
const WORD_IMAGE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub input: Option<Letter>,
    pub output: Option<Letter>,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Transducer {
    alphabet: Alphabet,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    edges: Vec<Vec<Edge>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicKind {
    Deletion,
    Insertion,
    Substitution,
}

impl Transducer {
    fn with_states(alphabet: Alphabet, n: usize) -> Self {
        Transducer {
            alphabet,
            initial: Vec::new(),
            accepting: vec![false; n],
            edges: vec![Vec::new(); n],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn edges(&self, state: usize) -> &[Edge] {
        &self.edges[state]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    fn add_edge(&mut self, from: usize, input: Option<Letter>, output: Option<Letter>, target: usize) {
        let e = Edge { input, output, target };
        if !self.edges[from].contains(&e) {
            self.edges[from].push(e);
        }
    }

    fn add_identity_loops(&mut self, state: usize) {
        for a in self.alphabet.letters() {
            self.add_edge(state, Some(a), Some(a), state);
        }
    }

    fn add_defects(&mut self, kind: BasicKind, from: usize, to: usize) {
        for a in self.alphabet.letters() {
            match kind {
                BasicKind::Deletion => self.add_edge(from, Some(a), None, to),
                BasicKind::Insertion => self.add_edge(from, None, Some(a), to),
                BasicKind::Substitution => {
                    for b in self.alphabet.letters().filter(|&b| b != a) {
                        self.add_edge(from, Some(a), Some(b), to);
                    }
                }
            }
        }
    }

    /// The identity relation on `A*`.
    pub fn identity(alphabet: Alphabet) -> Self {
        let mut t = Transducer::with_states(alphabet, 1);
        t.initial.push(0);
        t.accepting[0] = true;
        t.add_identity_loops(0);
        t
    }

    /// Two-state machine for exactly one deletion, insertion or substitution.
    pub fn basic(kind: BasicKind, alphabet: Alphabet) -> Self {
        Transducer::chain(&[kind], 1, 1, alphabet)
    }

    /// `steps` copies of a one-defect machine glued end to start. Each link
    /// may use any of `kinds` as its defect; states `min_defects..=steps`
    /// accept.
    fn chain(kinds: &[BasicKind], steps: usize, min_defects: usize, alphabet: Alphabet) -> Self {
        let mut t = Transducer::with_states(alphabet, steps + 1);
        t.initial.push(0);
        for s in 0..=steps {
            t.add_identity_loops(s);
            t.accepting[s] = s >= min_defects;
        }
        for s in 0..steps {
            for &kind in kinds {
                t.add_defects(kind, s, s + 1);
            }
        }
        t
    }

    fn check(&self, other: &Transducer) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn union(&self, other: &Transducer) -> Result<Transducer> {
        self.check(other)?;
        let mut t = self.clone();
        let off = t.num_states();
        for s in 0..other.num_states() {
            t.add_state(other.accepting[s]);
        }
        for (s, edges) in other.edges.iter().enumerate() {
            for e in edges {
                t.edges[s + off].push(Edge { target: e.target + off, ..*e });
            }
        }
        t.initial.extend(other.initial.iter().map(|s| s + off));
        Ok(t)
    }

    /// The converse relation: input and output labels swap.
    pub fn inverse(&self) -> Transducer {
        let mut t = self.clone();
        for edges in &mut t.edges {
            for e in edges.iter_mut() {
                std::mem::swap(&mut e.input, &mut e.output);
            }
        }
        t
    }

    pub fn reflexive_closure(&self) -> Transducer {
        self.union(&Transducer::identity(self.alphabet.clone()))
            .expect("same alphabet")
    }

    /// `self` then `other`: the image of `w` is `other(self(w))`.
    pub fn compose(&self, other: &Transducer) -> Result<Transducer> {
        self.check(other)?;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut t = Transducer::with_states(self.alphabet.clone(), 0);
        let mut intern = |pair: (usize, usize), t: &mut Transducer, pairs: &mut Vec<(usize, usize)>| {
            *index.entry(pair).or_insert_with(|| {
                pairs.push(pair);
                t.add_state(self.accepting[pair.0] && other.accepting[pair.1])
            })
        };
        for &p in &self.initial {
            for &q in &other.initial {
                let id = intern((p, q), &mut t, &mut pairs);
                t.initial.push(id);
            }
        }
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for e in &self.edges[p] {
                match e.output {
                    None => {
                        let to = intern((e.target, q), &mut t, &mut pairs);
                        t.add_edge(i, e.input, None, to);
                    }
                    Some(mid) => {
                        for f in other.edges[q].iter().filter(|f| f.input == Some(mid)) {
                            let to = intern((e.target, f.target), &mut t, &mut pairs);
                            t.add_edge(i, e.input, f.output, to);
                        }
                    }
                }
            }
            for f in other.edges[q].iter().filter(|f| f.input.is_none()) {
                let to = intern((p, f.target), &mut t, &mut pairs);
                t.add_edge(i, None, f.output, to);
            }
            i += 1;
        }
        Ok(t.remove_silent().trim())
    }

    /// Eliminates `(ε, ε)` transitions.
    fn remove_silent(&self) -> Transducer {
        let n = self.num_states();
        let mut t = Transducer::with_states(self.alphabet.clone(), n);
        t.initial = self.initial.clone();
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(q) = stack.pop() {
                if self.accepting[q] {
                    t.accepting[s] = true;
                }
                for e in &self.edges[q] {
                    if e.input.is_none() && e.output.is_none() {
                        if !seen[e.target] {
                            seen[e.target] = true;
                            stack.push(e.target);
                        }
                    } else {
                        t.add_edge(s, e.input, e.output, e.target);
                    }
                }
            }
        }
        t
    }

    /// Keeps only states on some initial-to-accepting path.
    pub fn trim(&self) -> Transducer {
        let n = self.num_states();
        let mut reach = vec![false; n];
        let mut stack = self.initial.clone();
        for &s in &stack {
            reach[s] = true;
        }
        while let Some(s) = stack.pop() {
            for e in &self.edges[s] {
                if !reach[e.target] {
                    reach[e.target] = true;
                    stack.push(e.target);
                }
            }
        }
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, edges) in self.edges.iter().enumerate() {
            for e in edges {
                rev[e.target].push(s);
            }
        }
        let mut co = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&s| co[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut t = Transducer::with_states(self.alphabet.clone(), 0);
        for s in 0..n {
            if reach[s] && co[s] {
                map[s] = t.add_state(self.accepting[s]);
            }
        }
        for (s, edges) in self.edges.iter().enumerate() {
            if map[s] == usize::MAX {
                continue;
            }
            for e in edges {
                if map[e.target] != usize::MAX {
                    t.add_edge(map[s], e.input, e.output, map[e.target]);
                }
            }
        }
        t.initial = self.initial.iter().filter(|&&s| map[s] != usize::MAX).map(|&s| map[s]).collect();
        t.initial.dedup();
        t
    }

    /// True when some cycle reads no input, so single words may have
    /// infinite images.
    fn has_input_free_cycle(&self) -> bool {
        let n = self.num_states();
        let mut mark = vec![0u8; n];
        fn visit(t: &Transducer, s: usize, mark: &mut [u8]) -> bool {
            mark[s] = 1;
            for e in t.edges[s].iter().filter(|e| e.input.is_none()) {
                let m = mark[e.target];
                if m == 1 || (m == 0 && visit(t, e.target, mark)) {
                    return true;
                }
            }
            mark[s] = 2;
            false
        }
        (0..n).any(|s| mark[s] == 0 && visit(self, s, &mut mark))
    }

    /// Image of a regular language (product construction).
    pub fn image(&self, lang: &Language) -> Result<Language> {
        if lang.alphabet() != &self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if let Some(words) = lang.as_finite() {
            if !self.has_input_free_cycle() {
                let mut out = BTreeSet::new();
                for w in words {
                    out.extend(self.image_word(w)?);
                }
                return Ok(Language::finite(self.alphabet.clone(), out));
            }
        }
        let src = lang.to_nfa();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut out = Nfa::new(self.alphabet.clone());
        let mut intern = |pair: (usize, usize), out: &mut Nfa, pairs: &mut Vec<(usize, usize)>| {
            *index.entry(pair).or_insert_with(|| {
                pairs.push(pair);
                out.add_state(src.is_accepting(pair.0) && self.accepting[pair.1])
            })
        };
        for &l in src.initial() {
            for &p in &self.initial {
                let id = intern((l, p), &mut out, &mut pairs);
                out.add_initial(id);
            }
        }
        let mut i = 0;
        while i < pairs.len() {
            let (l, p) = pairs[i];
            for &(label, l2) in src.transitions(l) {
                if label.is_none() {
                    let to = intern((l2, p), &mut out, &mut pairs);
                    out.add_transition(i, None, to);
                }
            }
            for e in &self.edges[p] {
                match e.input {
                    None => {
                        let to = intern((l, e.target), &mut out, &mut pairs);
                        out.add_transition(i, e.output, to);
                    }
                    Some(a) => {
                        for &(label, l2) in src.transitions(l) {
                            if label == Some(a) {
                                let to = intern((l2, e.target), &mut out, &mut pairs);
                                out.add_transition(i, e.output, to);
                            }
                        }
                    }
                }
            }
            i += 1;
        }
        let image = Language::regular(out.trim());
        if lang.as_finite().is_some() {
            image.normalized()
        } else {
            Ok(image)
        }
    }

    /// Exact image of a single word.
    pub fn image_word(&self, w: &Word) -> Result<BTreeSet<Word>> {
        if self.has_input_free_cycle() {
            let lang = Language::word(self.alphabet.clone(), w.clone());
            return self
                .image(&lang)?
                .finite_words()?
                .ok_or_else(|| Error::InvalidArgument("image of a single word is infinite".into()));
        }
        WordImage::new(self, w).enumerate()
    }
}

/// Lazily determinized product of a word with a transducer, read on the
/// output side. Nodes are `(position, state)`; without input-free cycles
/// the product is acyclic, so each output word is one path of the subset
/// automaton and is produced exactly once.
struct WordImage<'a> {
    t: &'a Transducer,
    word: &'a [Letter],
    k: usize,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    delta: Vec<Vec<Option<usize>>>,
    accepting: Vec<bool>,
}

const UNSET: Option<usize> = Some(usize::MAX);

impl<'a> WordImage<'a> {
    fn new(t: &'a Transducer, w: &'a Word) -> Self {
        WordImage {
            t,
            word: w.letters(),
            k: t.alphabet.size(),
            subsets: Vec::new(),
            index: HashMap::new(),
            delta: Vec::new(),
            accepting: Vec::new(),
        }
    }

    fn node(&self, pos: usize, state: usize) -> usize {
        pos * self.t.num_states() + state
    }

    /// Successors of a node along edges writing `output`.
    fn moves(&self, node: usize, output: Option<Letter>, out: &mut Vec<usize>) {
        let ns = self.t.num_states();
        let (pos, s) = (node / ns, node % ns);
        for e in self.t.edges[s].iter().filter(|e| e.output == output) {
            match e.input {
                None => out.push(self.node(pos, e.target)),
                Some(a) if self.word.get(pos) == Some(&a) => out.push(self.node(pos + 1, e.target)),
                Some(_) => {}
            }
        }
    }

    fn intern(&mut self, mut set: Vec<usize>) -> Option<usize> {
        let mut stack = set.clone();
        let mut buf = Vec::new();
        while let Some(n) = stack.pop() {
            buf.clear();
            self.moves(n, None, &mut buf);
            for &m in &buf {
                if !set.contains(&m) {
                    set.push(m);
                    stack.push(m);
                }
            }
        }
        if set.is_empty() {
            return None;
        }
        set.sort_unstable();
        if let Some(&id) = self.index.get(&set) {
            return Some(id);
        }
        let ns = self.t.num_states();
        let end = self.word.len();
        let id = self.subsets.len();
        self.accepting.push(set.iter().any(|&n| n / ns == end && self.t.accepting[n % ns]));
        self.index.insert(set.clone(), id);
        self.subsets.push(set);
        self.delta.push(vec![UNSET; self.k]);
        Some(id)
    }

    fn step(&mut self, id: usize, c: Letter) -> Option<usize> {
        {
            let cached = self.delta[id][c as usize]?;
            if cached != usize::MAX {
                return Some(cached);
            }
        }
        let mut next = Vec::new();
        for &n in &self.subsets[id] {
            self.moves(n, Some(c), &mut next);
        }
        next.sort_unstable();
        next.dedup();
        let to = self.intern(next);
        self.delta[id][c as usize] = to;
        to
    }

    fn enumerate(mut self) -> Result<BTreeSet<Word>> {
        let starts: Vec<usize> = self.t.initial.iter().map(|&s| self.node(0, s)).collect();
        let mut out = Vec::new();
        let Some(root) = self.intern(starts) else {
            return Ok(BTreeSet::new());
        };
        let mut prefix: Vec<Letter> = Vec::new();
        let mut stack: Vec<(usize, Letter)> = vec![(root, 0)];
        if self.accepting[root] {
            out.push(Word::empty());
        }
        while let Some(top) = stack.last_mut() {
            let (id, c) = *top;
            if c as usize == self.k {
                stack.pop();
                prefix.pop();
                continue;
            }
            top.1 += 1;
            if let Some(next) = self.step(id, c) {
                prefix.push(c);
                if self.accepting[next] {
                    out.push(Word(prefix.clone()));
                    if out.len() > WORD_IMAGE_LIMIT {
                        return Err(Error::resource("single-word image size", WORD_IMAGE_LIMIT as u64));
                    }
                }
                stack.push((next, 0));
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// Edit relation families. Lower-case kinds change exactly `k` letters,
/// the others are unions over `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditKind {
    /// `delta`: delete exactly k letters.
    Deletion,
    /// `iota`: insert exactly k letters.
    Insertion,
    /// `sigma`: substitute exactly k positions.
    Substitution,
    /// `Delta`: delete between 1 and k letters.
    DeletionUpTo,
    /// `I`: insert between 1 and k letters.
    InsertionUpTo,
    /// `Sigma`: substitute between 1 and k positions.
    SubstitutionUpTo,
    /// `S`: up to k successive single deletions or insertions.
    Indel,
    /// `Lambda`: up to k successive single deletions, insertions or substitutions.
    Levenshtein,
}

impl EditKind {
    pub fn name(self) -> &'static str {
        match self {
            EditKind::Deletion => "delta",
            EditKind::Insertion => "iota",
            EditKind::Substitution => "sigma",
            EditKind::DeletionUpTo => "Delta",
            EditKind::InsertionUpTo => "I",
            EditKind::SubstitutionUpTo => "Sigma",
            EditKind::Indel => "S",
            EditKind::Levenshtein => "Lambda",
        }
    }

    pub const ALL: [EditKind; 8] = [
        EditKind::Deletion,
        EditKind::Insertion,
        EditKind::Substitution,
        EditKind::DeletionUpTo,
        EditKind::InsertionUpTo,
        EditKind::SubstitutionUpTo,
        EditKind::Indel,
        EditKind::Levenshtein,
    ];

    pub fn inverse(self) -> EditKind {
        match self {
            EditKind::Deletion => EditKind::Insertion,
            EditKind::Insertion => EditKind::Deletion,
            EditKind::DeletionUpTo => EditKind::InsertionUpTo,
            EditKind::InsertionUpTo => EditKind::DeletionUpTo,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    #[default]
    Plain,
    /// Union with the identity (`:hat`).
    Reflexive,
    /// Identical pairs removed (`:bar`).
    Antireflexive,
}

/// Symbolic edit relation, e.g. `delta:2`, `Lambda:1:bar`, `sigma:1:hat`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EditRelation {
    pub kind: EditKind,
    pub k: usize,
    pub closure: Closure,
}

impl EditRelation {
    pub fn new(kind: EditKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("edit relations need k >= 1".into()));
        }
        Ok(EditRelation { kind, k, closure: Closure::Plain })
    }

    pub fn with_closure(self, closure: Closure) -> Self {
        EditRelation { closure, ..self }
    }

    pub fn plain(self) -> Self {
        self.with_closure(Closure::Plain)
    }

    pub fn inverse(self) -> Self {
        EditRelation { kind: self.kind.inverse(), ..self }
    }

    /// True when the plain relation never relates a word to itself, so its
    /// antireflexive restriction is the relation itself.
    pub fn plain_is_antireflexive(&self) -> bool {
        !(matches!(self.kind, EditKind::Indel | EditKind::Levenshtein) && self.k >= 2)
    }

    /// Transducer for the plain relation (`Plain`, `Antireflexive`) or its
    /// reflexive closure (`Reflexive`). The antireflexive restriction is not
    /// a transducer construction; [`EditRelation::apply`] and
    /// [`EditRelation::apply_word`] realize it.
    pub fn transducer(&self, alphabet: &Alphabet) -> Transducer {
        let a = alphabet.clone();
        let k = self.k;
        let plain = match self.kind {
            EditKind::Deletion => Transducer::chain(&[BasicKind::Deletion], k, k, a),
            EditKind::Insertion => Transducer::chain(&[BasicKind::Insertion], k, k, a),
            EditKind::Substitution => Transducer::chain(&[BasicKind::Substitution], k, k, a),
            EditKind::DeletionUpTo => Transducer::chain(&[BasicKind::Deletion], k, 1, a),
            EditKind::InsertionUpTo => Transducer::chain(&[BasicKind::Insertion], k, 1, a),
            EditKind::SubstitutionUpTo => Transducer::chain(&[BasicKind::Substitution], k, 1, a),
            EditKind::Indel => {
                let step = Transducer::chain(&[BasicKind::Deletion, BasicKind::Insertion], 1, 1, a);
                Transducer::union_of_powers(&step, k)
            }
            EditKind::Levenshtein => {
                let step = Transducer::chain(
                    &[BasicKind::Deletion, BasicKind::Insertion, BasicKind::Substitution],
                    1,
                    1,
                    a,
                );
                Transducer::union_of_powers(&step, k)
            }
        };
        match self.closure {
            Closure::Reflexive => plain.reflexive_closure(),
            Closure::Plain | Closure::Antireflexive => plain,
        }
    }

    /// Image of one word, honoring the closure flag.
    pub fn apply_word(&self, alphabet: &Alphabet, w: &Word) -> Result<BTreeSet<Word>> {
        let mut out = self.transducer(alphabet).image_word(w)?;
        if self.closure == Closure::Antireflexive {
            out.remove(w);
        }
        Ok(out)
    }

    /// Image of a language, honoring the closure flag.
    ///
    /// The antireflexive restriction of `S_k`/`Lambda_k` with `k >= 2` is
    /// only computed on finite languages; infinite ones are reported as
    /// unsupported.
    pub fn apply(&self, lang: &Language) -> Result<Language> {
        if self.closure != Closure::Antireflexive || self.plain_is_antireflexive() {
            return self.transducer(lang.alphabet()).image(lang);
        }
        let words = lang.finite_words()?.ok_or_else(|| {
            Error::Unsupported(format!(
                "antireflexive {}:{} image of an infinite regular set",
                self.kind.name(),
                self.k
            ))
        })?;
        let mut out = BTreeSet::new();
        for w in &words {
            out.extend(self.apply_word(lang.alphabet(), w)?);
        }
        Ok(Language::finite(lang.alphabet().clone(), out))
    }
}

impl Transducer {
    /// `⋃_{1≤i≤k} step^i` with genuine composition.
    fn union_of_powers(step: &Transducer, k: usize) -> Transducer {
        let mut power = step.clone();
        let mut acc = step.clone();
        for _ in 1..k {
            power = power.compose(step).expect("same alphabet");
            acc = acc.union(&power).expect("same alphabet");
        }
        acc.trim()
    }
}

impl fmt::Display for EditRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.name(), self.k)?;
        match self.closure {
            Closure::Plain => Ok(()),
            Closure::Reflexive => write!(f, ":hat"),
            Closure::Antireflexive => write!(f, ":bar"),
        }
    }
}

impl FromStr for EditRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad relation {s:?}"));
        let mut parts = s.trim().split(':');
        let name = parts.next().ok_or_else(bad)?;
        let kind = EditKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(bad)?;
        let k: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let closure = match parts.next() {
            None => Closure::Plain,
            Some("hat") => Closure::Reflexive,
            Some("bar") => Closure::Antireflexive,
            Some(_) => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(EditRelation::new(kind, k)?.with_closure(closure))
    }
}
