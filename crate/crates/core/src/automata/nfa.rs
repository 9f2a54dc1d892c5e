use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{state_cap, Dfa};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

pub type StateId = usize;

/// Nondeterministic automaton with ε-transitions (`None` labels).
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    transitions: Vec<Vec<(Option<Letter>, StateId)>>,
}

impl Nfa {
    /// An automaton with no states (denotes ∅).
    pub fn new(alphabet: Alphabet) -> Self {
        Nfa {
            alphabet,
            initial: Vec::new(),
            accepting: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn transitions(&self, s: StateId) -> &[(Option<Letter>, StateId)] {
        &self.transitions[s]
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.transitions.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn set_accepting(&mut self, s: StateId, accepting: bool) {
        self.accepting[s] = accepting;
    }

    pub fn add_initial(&mut self, s: StateId) {
        if !self.initial.contains(&s) {
            self.initial.push(s);
        }
    }

    pub fn add_transition(&mut self, from: StateId, label: Option<Letter>, to: StateId) {
        debug_assert!(label.is_none_or(|l| usize::from(l) < self.alphabet.size()));
        if !self.transitions[from].contains(&(label, to)) {
            self.transitions[from].push((label, to));
        }
    }

    pub fn epsilon(alphabet: Alphabet) -> Self {
        let mut n = Nfa::new(alphabet);
        let s = n.add_state(true);
        n.add_initial(s);
        n
    }

    /// `A*`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut n = Nfa::epsilon(alphabet);
        for a in n.alphabet.letters() {
            n.add_transition(0, Some(a), 0);
        }
        n
    }

    /// Trie automaton for a finite word set.
    pub fn from_words<'a>(alphabet: Alphabet, words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut n = Nfa::new(alphabet);
        let root = n.add_state(false);
        n.add_initial(root);
        let mut children: HashMap<(StateId, Letter), StateId> = HashMap::new();
        for w in words {
            let mut s = root;
            for &a in w.letters() {
                s = match children.get(&(s, a)) {
                    Some(&t) => t,
                    None => {
                        let t = n.add_state(false);
                        n.add_transition(s, Some(a), t);
                        children.insert((s, a), t);
                        t
                    }
                };
            }
            n.accepting[s] = true;
        }
        n
    }

    /// Copies `other`'s states into `self`, returning the offset.
    fn absorb(&mut self, other: &Nfa) -> usize {
        let off = self.num_states();
        for s in 0..other.num_states() {
            self.add_state(other.accepting[s]);
        }
        for (s, edges) in other.transitions.iter().enumerate() {
            for &(l, t) in edges {
                self.transitions[s + off].push((l, t + off));
            }
        }
        off
    }

    pub fn union(&self, other: &Nfa) -> Nfa {
        let mut n = self.clone();
        let off = n.absorb(other);
        for &s in &other.initial {
            n.add_initial(s + off);
        }
        n
    }

    pub fn concat(&self, other: &Nfa) -> Nfa {
        let mut n = self.clone();
        let off = n.absorb(other);
        for s in 0..self.num_states() {
            if self.accepting[s] {
                n.accepting[s] = false;
                for &t in &other.initial {
                    n.add_transition(s, None, t + off);
                }
            }
        }
        n
    }

    pub fn star(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        let hub = n.add_state(true);
        n.add_initial(hub);
        let off = n.absorb(self);
        for &s in &self.initial {
            n.add_transition(hub, None, s + off);
        }
        for s in 0..self.num_states() {
            if self.accepting[s] {
                n.add_transition(s + off, None, hub);
            }
        }
        n
    }

    pub fn reverse(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for s in 0..self.num_states() {
            n.add_state(self.initial.contains(&s));
        }
        for (s, edges) in self.transitions.iter().enumerate() {
            for &(l, t) in edges {
                n.transitions[t].push((l, s));
            }
        }
        for s in 0..self.num_states() {
            if self.accepting[s] {
                n.add_initial(s);
            }
        }
        n
    }

    pub(crate) fn epsilon_closure(&self, seeds: impl IntoIterator<Item = StateId>) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = Vec::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            out.push(s);
            for &(l, t) in &self.transitions[s] {
                if l.is_none() && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn step(&self, set: &[StateId], a: Letter) -> Vec<StateId> {
        let mut next = Vec::new();
        for &s in set {
            for &(l, t) in &self.transitions[s] {
                if l == Some(a) {
                    next.push(t);
                }
            }
        }
        self.epsilon_closure(next)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut cur = self.epsilon_closure(self.initial.iter().copied());
        for &a in w.letters() {
            if cur.is_empty() {
                return false;
            }
            cur = self.step(&cur, a);
        }
        cur.iter().any(|&s| self.accepting[s])
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in &self.transitions[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.num_states()];
        for (s, edges) in self.transitions.iter().enumerate() {
            for &(_, t) in edges {
                rev[t].push(s);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<StateId> = (0..self.num_states()).filter(|&s| seen[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Restriction to states that are both reachable and co-reachable.
    pub fn trim(&self) -> Nfa {
        let reach = self.reachable();
        let coreach = self.coreachable();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut n = Nfa::new(self.alphabet.clone());
        for s in 0..self.num_states() {
            if reach[s] && coreach[s] {
                map[s] = n.add_state(self.accepting[s]);
            }
        }
        for (s, edges) in self.transitions.iter().enumerate() {
            if map[s] == usize::MAX {
                continue;
            }
            for &(l, t) in edges {
                if map[t] != usize::MAX {
                    n.add_transition(map[s], l, map[t]);
                }
            }
        }
        for &s in &self.initial {
            if map[s] != usize::MAX {
                n.add_initial(map[s]);
            }
        }
        n
    }

    /// Factor language: every useful state becomes initial and accepting.
    pub fn factors(&self) -> Nfa {
        let mut n = self.trim();
        for s in 0..n.num_states() {
            n.accepting[s] = true;
            n.add_initial(s);
        }
        n
    }

    /// `{ v : ∃u ∈ L(prefixes), u·v ∈ L(self) }`.
    pub fn left_quotient_by(&self, prefixes: &Nfa) -> Nfa {
        let start: Vec<(StateId, StateId)> = prefixes
            .epsilon_closure(prefixes.initial.iter().copied())
            .into_iter()
            .flat_map(|p| {
                self.epsilon_closure(self.initial.iter().copied())
                    .into_iter()
                    .map(move |q| (p, q))
            })
            .collect();
        let mut seen: BTreeSet<(StateId, StateId)> = start.iter().copied().collect();
        let mut stack = start;
        while let Some((p, q)) = stack.pop() {
            let mut push = |pair: (StateId, StateId)| {
                if seen.insert(pair) {
                    stack.push(pair);
                }
            };
            for &(l, p2) in &prefixes.transitions[p] {
                match l {
                    None => push((p2, q)),
                    Some(a) => {
                        for &(l2, q2) in &self.transitions[q] {
                            if l2 == Some(a) {
                                push((p2, q2));
                            }
                        }
                    }
                }
            }
            for &(l2, q2) in &self.transitions[q] {
                if l2.is_none() {
                    push((p, q2));
                }
            }
        }
        let mut n = self.clone();
        n.initial.clear();
        for &(p, q) in &seen {
            if prefixes.accepting[p] {
                n.add_initial(q);
            }
        }
        n.trim()
    }

    /// Subset construction; the result is total and not yet minimized.
    pub fn determinize(&self) -> Result<Dfa> {
        let cap = state_cap();
        let k = self.alphabet.size();
        let start = self.epsilon_closure(self.initial.iter().copied());
        let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
        let mut sets: Vec<Vec<StateId>> = Vec::new();
        let mut delta: Vec<usize> = Vec::new();
        index.insert(start.clone(), 0);
        sets.push(start);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let set = sets[i].clone();
            for a in self.alphabet.letters() {
                let next = self.step(&set, a);
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if sets.len() >= cap {
                            return Err(Error::resource("automaton states", cap as u64));
                        }
                        let j = sets.len();
                        index.insert(next.clone(), j);
                        sets.push(next);
                        queue.push_back(j);
                        j
                    }
                };
                let slot = i * k + usize::from(a);
                if delta.len() <= slot {
                    delta.resize(slot + 1, 0);
                }
                delta[slot] = j;
            }
        }
        delta.resize(sets.len() * k, 0);
        let accepting = sets
            .iter()
            .map(|set| set.iter().any(|&s| self.accepting[s]))
            .collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), 0, accepting, delta))
    }
}
