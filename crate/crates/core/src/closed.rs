//! Codes closed under an edit relation.
//!
//! Covers closedness checks, the finite family of δ_k-closed codes
//! (enumeration, maximality, complete embeddings), the families that are
//! provably empty, and the orbit structure of iterated k-substitutions.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::automata::{Language, Nfa};
use crate::codes::{measure_finite, sardinas_patterson, DoubleFactorization, Distribution};
use crate::error::{Error, Result};
use crate::transducers::{EditKind, EditRelation};
use crate::words::{complement_word, parity_ones, Alphabet, Parity, Word};

/// Cap on search nodes for the finite-universe searches.
pub const SEARCH_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedReport {
    pub closed: bool,
    /// `(x, y)` with `x ∈ X` and `y ∈ τ(x) ∖ X`.
    pub witness: Option<(Word, Word)>,
}

/// Decides `τ(X) ⊆ X`.
pub fn is_closed(x: &Language, rel: EditRelation) -> Result<ClosedReport> {
    let alphabet = x.alphabet();
    if let Some(words) = x.finite_words()? {
        for u in &words {
            if let Some(y) = rel.apply_word(alphabet, u)?.into_iter().find(|y| !words.contains(y)) {
                return Ok(ClosedReport { closed: false, witness: Some((u.clone(), y)) });
            }
        }
        return Ok(ClosedReport { closed: true, witness: None });
    }
    let escape = rel.apply(x)?.difference(x)?;
    match escape.shortest_word()? {
        None => Ok(ClosedReport { closed: true, witness: None }),
        Some(y) => {
            let src = rel
                .inverse()
                .apply_word(alphabet, &y)?
                .into_iter()
                .find(|u| x.contains(u))
                .ok_or_else(|| Error::internal("escaping word without a preimage"))?;
            Ok(ClosedReport { closed: false, witness: Some((src, y)) })
        }
    }
}

/// Least superset of a finite set closed under a length-nonincreasing relation.
pub fn closure_star(alphabet: &Alphabet, x: &BTreeSet<Word>, rel: EditRelation) -> Result<BTreeSet<Word>> {
    match rel.kind {
        EditKind::Deletion | EditKind::DeletionUpTo | EditKind::Substitution | EditKind::SubstitutionUpTo => {}
        _ => return Err(Error::InvalidArgument(format!("closure under {rel} is infinite"))),
    }
    let mut out = x.clone();
    let mut stack: Vec<Word> = x.iter().cloned().collect();
    while let Some(u) = stack.pop() {
        for y in rel.apply_word(alphabet, &u)? {
            if out.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    Ok(out)
}

/// Lengths admissible in a δ_k-closed code: `[1, k²−k−1] ∖ {k}`.
pub fn delta_length_bound(k: usize) -> Vec<usize> {
    let top = (k * k).saturating_sub(k + 1);
    (1..=top).filter(|&n| n != k).collect()
}

fn delta(k: usize) -> EditRelation {
    EditRelation { kind: EditKind::Deletion, k, closure: Default::default() }
}

fn is_code_set(alphabet: &Alphabet, set: &BTreeSet<Word>) -> Result<bool> {
    Ok(sardinas_patterson(&Language::finite(alphabet.clone(), set.iter().cloned()))?.is_code)
}

fn is_complete_finite(alphabet: &Alphabet, set: &BTreeSet<Word>) -> Result<bool> {
    let m = measure_finite(&Language::finite(alphabet.clone(), set.iter().cloned()), &Distribution::uniform(alphabet))?;
    Ok(m.is_one())
}

/// Size first, then the sorted word lists compared element by element.
fn canonical(a: &BTreeSet<Word>, b: &BTreeSet<Word>) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

/// Depth-first search over subsets of `units` (each a set of words added
/// together). A unit may join only if its `deps` are already chosen and
/// the result stays a code. Units in `forced` are always taken.
struct UnitSearch<'a> {
    alphabet: &'a Alphabet,
    units: Vec<BTreeSet<Word>>,
    deps: Vec<BTreeSet<Word>>,
    forced: Vec<bool>,
    nodes: u64,
    universe: usize,
}

impl UnitSearch<'_> {
    fn run(&mut self, visit: &mut dyn FnMut(&BTreeSet<Word>) -> Result<()>) -> Result<()> {
        self.go(0, &mut BTreeSet::new(), visit)
    }

    fn go(
        &mut self,
        i: usize,
        chosen: &mut BTreeSet<Word>,
        visit: &mut dyn FnMut(&BTreeSet<Word>) -> Result<()>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > SEARCH_BUDGET {
            return Err(Error::resource(
                format!("closed-code search over a universe of {} words", self.universe),
                SEARCH_BUDGET,
            ));
        }
        if i == self.units.len() {
            return visit(chosen);
        }
        if !self.forced[i] {
            self.go(i + 1, chosen, visit)?;
        }
        if self.deps[i].is_subset(chosen) {
            let added: Vec<Word> = self.units[i].difference(chosen).cloned().collect();
            chosen.extend(added.iter().cloned());
            if is_code_set(self.alphabet, chosen)? {
                self.go(i + 1, chosen, visit)?;
            }
            for w in &added {
                chosen.remove(w);
            }
        }
        Ok(())
    }
}

fn delta_search<'a>(alphabet: &'a Alphabet, k: usize, forced: &BTreeSet<Word>) -> Result<UnitSearch<'a>> {
    let mut universe: Vec<Word> = Vec::new();
    for n in delta_length_bound(k) {
        universe.extend(alphabet.words_of_length(n));
    }
    let rel = delta(k);
    let deps = universe
        .iter()
        .map(|y| rel.apply_word(alphabet, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitSearch {
        alphabet,
        forced: universe.iter().map(|y| forced.contains(y)).collect(),
        units: universe.iter().map(|y| BTreeSet::from([y.clone()])).collect(),
        deps,
        nodes: 0,
        universe: universe.len(),
    })
}

/// All nonempty δ_k-closed codes, in canonical order, at most `limit`.
pub fn enumerate_delta_closed(k: usize, alphabet: &Alphabet, limit: Option<usize>) -> Result<Vec<BTreeSet<Word>>> {
    let mut found = Vec::new();
    let mut search = delta_search(alphabet, k, &BTreeSet::new())?;
    search.run(&mut |set| {
        if !set.is_empty() {
            found.push(set.clone());
        }
        Ok(())
    })?;
    found.sort_by(canonical);
    if let Some(l) = limit {
        found.truncate(l);
    }
    Ok(found)
}

fn require_closed_code(x: &Language, rel: EditRelation) -> Result<BTreeSet<Word>> {
    let words = x
        .finite_words()?
        .ok_or_else(|| Error::pre(format!("a {rel}-closed code is finite")))?;
    if !sardinas_patterson(x)?.is_code {
        return Err(Error::pre("not a code"));
    }
    if !is_closed(x, rel)?.closed {
        return Err(Error::pre(format!("not {rel}-closed")));
    }
    Ok(words)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    pub maximal: bool,
    /// A word `y` whose closure can join `X` without breaking code-ness.
    pub witness: Option<Word>,
}

/// Maximality among δ_k-closed codes. Candidates are tried longest first.
pub fn is_maximal_delta_closed(x: &Language, k: usize) -> Result<MaximalityReport> {
    let words = require_closed_code(x, delta(k))?;
    let alphabet = x.alphabet();
    let lengths = delta_length_bound(k);
    for &n in lengths.iter().rev() {
        for y in alphabet.words_of_length(n) {
            if words.contains(&y) {
                continue;
            }
            let mut z = closure_star(alphabet, &BTreeSet::from([y.clone()]), delta(k))?;
            z.extend(words.iter().cloned());
            if is_code_set(alphabet, &z)? {
                return Ok(MaximalityReport { maximal: false, witness: Some(y) });
            }
        }
    }
    Ok(MaximalityReport { maximal: true, witness: None })
}

/// Every complete δ_k-closed code containing `X`.
pub fn embed_delta_closed_complete(x: &Language, k: usize) -> Result<Vec<BTreeSet<Word>>> {
    let words = require_closed_code(x, delta(k))?;
    let alphabet = x.alphabet();
    let mut found = Vec::new();
    let mut search = delta_search(alphabet, k, &words)?;
    if search.forced.iter().filter(|f| **f).count() != words.len() {
        return Ok(found);
    }
    search.run(&mut |set| {
        if !set.is_empty() && is_complete_finite(alphabet, set)? {
            found.push(set.clone());
        }
        Ok(())
    })?;
    found.sort_by(canonical);
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EmptyFamilyWitness {
    /// Closure would contain `x` and `x^{m}`, which factor two ways.
    PowerForced { x: Word, chain: Vec<Word>, factorization: DoubleFactorization },
    /// Closure would contain `ε`, so no code survives.
    DeletionChain { chain: Vec<Word> },
}

impl EmptyFamilyWitness {
    pub fn chain(&self) -> &[Word] {
        match self {
            EmptyFamilyWitness::PowerForced { chain, .. } | EmptyFamilyWitness::DeletionChain { chain } => chain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmptyFamily {
    pub relation: EditRelation,
    pub explanation: String,
    pub witness: Option<EmptyFamilyWitness>,
}

/// Explains why no code is closed under `rel` and, given a nonempty
/// candidate, exhibits the chain of images that breaks it. Each link of
/// the chain is an image of the previous one under `rel`.
pub fn assert_empty_family(rel: EditRelation, candidate: Option<&Language>) -> Result<EmptyFamily> {
    let (step, explanation): (EditRelation, String) = match rel.kind {
        EditKind::Insertion => (
            rel,
            format!("closed under {rel} implies closed under its iterates: x^(k+1) = x.x^k is reached from x in |x| steps"),
        ),
        EditKind::InsertionUpTo => (
            EditRelation::new(EditKind::Insertion, 1)?,
            format!("{rel} contains iota:1, so x.x is reached from x in |x| steps"),
        ),
        EditKind::DeletionUpTo | EditKind::Indel | EditKind::Levenshtein => (
            EditRelation::new(EditKind::Deletion, 1)?,
            format!("{rel} contains delta:1, so every word reaches eps"),
        ),
        _ => return Err(Error::InvalidArgument(format!("the {rel}-closed family is not empty in general"))),
    };
    let Some(x) = candidate else {
        return Ok(EmptyFamily { relation: rel, explanation, witness: None });
    };
    let alphabet = x.alphabet();
    let Some(u) = x.shortest_word()? else {
        return Err(Error::pre("candidate must be nonempty"));
    };
    let witness = if step.kind == EditKind::Deletion {
        let chain: Vec<Word> = (0..=u.len()).rev().map(|n| Word(u.0[..n].to_vec())).collect();
        EmptyFamilyWitness::DeletionChain { chain }
    } else if u.is_empty() {
        EmptyFamilyWitness::DeletionChain { chain: vec![u] }
    } else {
        let k = step.k;
        let tail = u.pow(k);
        let chain: Vec<Word> = (0..=u.len()).map(|j| u.concat(&Word(tail.0[..j * k].to_vec()))).collect();
        let factorization = DoubleFactorization { left: vec![u.clone(); k + 1], right: vec![u.pow(k + 1)] };
        EmptyFamilyWitness::PowerForced { x: u, chain, factorization }
    };
    for pair in witness.chain().windows(2) {
        if !step.apply_word(alphabet, &pair[0])?.contains(&pair[1]) {
            return Err(Error::internal("empty-family chain has a broken link"));
        }
    }
    Ok(EmptyFamily { relation: rel, explanation, witness: Some(witness) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OrbitShape {
    /// `|w| < k`: no substitution applies.
    Singleton(Word),
    /// binary, `|w| = k`: `{w, w̄}`.
    Pair(Word, Word),
    /// binary, `k` even, `|w| > k`: same length, same parity of second letters.
    Parity(usize, Parity),
    /// all words of length `n`.
    Full(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaOrbit {
    pub alphabet: Alphabet,
    pub shape: OrbitShape,
}

impl SigmaOrbit {
    pub fn contains(&self, w: &Word) -> bool {
        match &self.shape {
            OrbitShape::Singleton(u) => u == w,
            OrbitShape::Pair(u, v) => u == w || v == w,
            OrbitShape::Parity(n, p) => w.len() == *n && Parity::of(w.count(1)) == *p,
            OrbitShape::Full(n) => w.len() == *n,
        }
    }

    pub fn cardinality(&self) -> u128 {
        match &self.shape {
            OrbitShape::Singleton(_) => 1,
            OrbitShape::Pair(..) => 2,
            OrbitShape::Parity(n, _) => 1u128 << (n - 1),
            OrbitShape::Full(n) => (self.alphabet.size() as u128).pow(*n as u32),
        }
    }

    pub fn materialize(&self) -> BTreeSet<Word> {
        match &self.shape {
            OrbitShape::Singleton(u) => BTreeSet::from([u.clone()]),
            OrbitShape::Pair(u, v) => BTreeSet::from([u.clone(), v.clone()]),
            OrbitShape::Parity(n, _) | OrbitShape::Full(n) => {
                self.alphabet.words_of_length(*n).into_iter().filter(|w| self.contains(w)).collect()
            }
        }
    }
}

impl fmt::Display for SigmaOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        match &self.shape {
            OrbitShape::Singleton(u) => write!(f, "Singleton({})", a.render(u)),
            OrbitShape::Pair(u, v) => write!(f, "Pair({}, {})", a.render(u), a.render(v)),
            OrbitShape::Parity(n, Parity::Even) => write!(f, "Even({n})"),
            OrbitShape::Parity(n, Parity::Odd) => write!(f, "Odd({n})"),
            OrbitShape::Full(n) => write!(f, "Full({n})"),
        }
    }
}

/// Orbit of `w` under repeated k-substitutions, in closed form.
pub fn sigma_star(alphabet: &Alphabet, w: &Word, k: usize) -> Result<SigmaOrbit> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let n = w.len();
    let shape = if n < k {
        OrbitShape::Singleton(w.clone())
    } else if !alphabet.is_binary() {
        OrbitShape::Full(n)
    } else if n == k {
        OrbitShape::Pair(w.clone(), complement_word(alphabet, w)?)
    } else if k % 2 == 1 {
        OrbitShape::Full(n)
    } else {
        OrbitShape::Parity(n, parity_ones(alphabet, w)?)
    };
    Ok(SigmaOrbit { alphabet: alphabet.clone(), shape })
}

/// Binary words of length `n` whose count of the second letter has parity `p`.
pub fn parity_language(alphabet: &Alphabet, n: usize, p: Parity) -> Result<Language> {
    alphabet.require_binary()?;
    let mut nfa = Nfa::new(alphabet.clone());
    let mut ids = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let even = nfa.add_state(i == n && p == Parity::Even);
        let odd = nfa.add_state(i == n && p == Parity::Odd);
        ids.push([even, odd]);
    }
    nfa.add_initial(ids[0][0]);
    for i in 0..n {
        for par in 0..2 {
            nfa.add_transition(ids[i][par], Some(0), ids[i + 1][par]);
            nfa.add_transition(ids[i][par], Some(1), ids[i + 1][1 - par]);
        }
    }
    Ok(Language::regular(nfa))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ClosedClassification {
    /// `X ⊆ A^{≤k}`
    ShortSubset(usize),
    Even(usize),
    Odd(usize),
    Full(usize),
    NotClosed { x: Word, y: Word },
    NotCode(DoubleFactorization),
}

fn code_and_closed(x: &Language, rel: EditRelation) -> Result<Option<ClosedClassification>> {
    let v = sardinas_patterson(x)?;
    if let Some(w) = v.witness {
        return Ok(Some(ClosedClassification::NotCode(w)));
    }
    if let Some((u, y)) = is_closed(x, rel)?.witness {
        return Ok(Some(ClosedClassification::NotClosed { x: u, y }));
    }
    Ok(None)
}

fn longer_than(alphabet: &Alphabet, k: usize) -> Result<Language> {
    Language::level(alphabet.clone(), k + 1).concat(&Language::universal(alphabet.clone()))
}

/// Structure of a σ_k-closed code: short words only, or one parity class,
/// or a full level.
pub fn classify_sigma_closed(x: &Language, k: usize) -> Result<ClosedClassification> {
    let rel = EditRelation::new(EditKind::Substitution, k)?;
    if let Some(c) = code_and_closed(x, rel)? {
        return Ok(c);
    }
    let alphabet = x.alphabet();
    let Some(long) = x.intersect(&longer_than(alphabet, k)?)?.shortest_word()? else {
        return Ok(ClosedClassification::ShortSubset(k));
    };
    let n = long.len();
    if x.equivalent(&Language::level(alphabet.clone(), n))? {
        return Ok(ClosedClassification::Full(n));
    }
    if alphabet.is_binary() {
        if x.equivalent(&parity_language(alphabet, n, Parity::Even)?)? {
            return Ok(ClosedClassification::Even(n));
        }
        if x.equivalent(&parity_language(alphabet, n, Parity::Odd)?)? {
            return Ok(ClosedClassification::Odd(n));
        }
    }
    Err(Error::internal("closed code outside the three admissible shapes"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum UpToSigmaClassification {
    Empty,
    /// `X = A^n`
    Level(usize),
    NotClosed { x: Word, y: Word },
    NotCode(DoubleFactorization),
}

/// A Σ_k-closed code is empty or a full level.
#[allow(non_snake_case)]
pub fn classify_Sigma_closed(x: &Language, k: usize) -> Result<UpToSigmaClassification> {
    let rel = EditRelation::new(EditKind::SubstitutionUpTo, k)?;
    match code_and_closed(x, rel)? {
        Some(ClosedClassification::NotCode(w)) => return Ok(UpToSigmaClassification::NotCode(w)),
        Some(ClosedClassification::NotClosed { x, y }) => return Ok(UpToSigmaClassification::NotClosed { x, y }),
        _ => {}
    }
    let Some(u) = x.shortest_word()? else {
        return Ok(UpToSigmaClassification::Empty);
    };
    if x.equivalent(&Language::level(x.alphabet().clone(), u.len()))? {
        Ok(UpToSigmaClassification::Level(u.len()))
    } else {
        Err(Error::internal("closed code is not a full level"))
    }
}

/// Complete σ_k-closed codes containing `X`. Inside `A^{≤k}` the search
/// runs over unions of orbits; a set with a longer word embeds only in the
/// full level of that length.
pub fn sigma_complete_embedding(x: &Language, k: usize) -> Result<Vec<BTreeSet<Word>>> {
    let alphabet = x.alphabet();
    let words = x
        .finite_words()?
        .ok_or_else(|| Error::pre("a non-complete σ_k-closed code is finite"))?;
    let as_lang = Language::finite(alphabet.clone(), words.iter().cloned());
    if !sardinas_patterson(&as_lang)?.is_code {
        return Ok(Vec::new());
    }
    if is_complete_finite(alphabet, &words)? {
        return Err(Error::pre("already complete"));
    }
    if words.iter().all(|w| w.len() <= k) {
        let mut units: Vec<BTreeSet<Word>> = Vec::new();
        let mut covered = BTreeSet::new();
        for w in alphabet.words_up_to(k) {
            if w.is_empty() || covered.contains(&w) {
                continue;
            }
            let orbit = sigma_star(alphabet, &w, k)?.materialize();
            covered.extend(orbit.iter().cloned());
            units.push(orbit);
        }
        let forced: Vec<bool> = units.iter().map(|u| u.iter().any(|w| words.contains(w))).collect();
        let universe = covered.len();
        let mut search = UnitSearch {
            alphabet,
            deps: vec![BTreeSet::new(); units.len()],
            units,
            forced,
            nodes: 0,
            universe,
        };
        let mut found = Vec::new();
        search.run(&mut |set| {
            if !set.is_empty() && is_complete_finite(alphabet, set)? {
                found.push(set.clone());
            }
            Ok(())
        })?;
        found.sort_by(canonical);
        return Ok(found);
    }
    let n = words.iter().next().map(Word::len).unwrap_or(0);
    if n > k && words.iter().all(|w| w.len() == n) {
        return Ok(vec![alphabet.words_of_length(n).into_iter().collect()]);
    }
    Ok(Vec::new())
}
