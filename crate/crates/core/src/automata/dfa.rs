use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{state_cap, Nfa};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// Complete deterministic automaton.
///
/// After [`Dfa::minimize`] the automaton is canonical: minimal, with states
/// numbered in breadth-first order from the initial state following the
/// alphabet order. Two canonical DFAs are equal iff their languages are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<usize>,
}

impl Dfa {
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(delta.len(), accepting.len() * alphabet.size());
        Dfa { alphabet, initial, accepting, delta }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    #[inline]
    pub fn next(&self, s: usize, a: Letter) -> usize {
        self.delta[s * self.alphabet.size() + usize::from(a)]
    }

    pub fn run(&self, w: &Word) -> usize {
        w.letters().iter().fold(self.initial, |s, &a| self.next(s, a))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.accepting[self.run(w)]
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for acc in &mut d.accepting {
            *acc = !*acc;
        }
        d
    }

    /// Synchronous product; `combine` decides acceptance of a state pair.
    pub fn product(&self, other: &Dfa, combine: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let cap = state_cap();
        let k = self.alphabet.size();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in self.alphabet.letters() {
                let pair = (self.next(p, a), other.next(q, a));
                let j = match index.get(&pair) {
                    Some(&j) => j,
                    None => {
                        if pairs.len() >= cap {
                            return Err(Error::resource("automaton states", cap as u64));
                        }
                        index.insert(pair, pairs.len());
                        pairs.push(pair);
                        pairs.len() - 1
                    }
                };
                delta.push(j);
            }
            i += 1;
        }
        debug_assert_eq!(delta.len(), pairs.len() * k);
        let accepting = pairs
            .iter()
            .map(|&(p, q)| combine(self.accepting[p], other.accepting[q]))
            .collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), 0, accepting, delta))
    }

    /// States in BFS discovery order from the initial state.
    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for a in self.alphabet.letters() {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Canonical minimal automaton (Moore partition refinement, then BFS renumbering).
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.size();
        let order = self.bfs_order();
        let mut local = vec![usize::MAX; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            local[s] = i;
        }
        let n = order.len();
        let succ: Vec<usize> = order
            .iter()
            .flat_map(|&s| self.alphabet.letters().map(move |a| (s, a)))
            .map(|(s, a)| local[self.next(s, a)])
            .collect();
        let mut class: Vec<usize> = order.iter().map(|&s| usize::from(self.accepting[s])).collect();
        let mut classes = {
            let distinct: BTreeSet<usize> = class.iter().copied().collect();
            distinct.len()
        };
        loop {
            let mut sig_index: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next_class = vec![0; n];
            for s in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[s]);
                sig.extend(succ[s * k..(s + 1) * k].iter().map(|&t| class[t]));
                let fresh = sig_index.len();
                next_class[s] = *sig_index.entry(sig).or_insert(fresh);
            }
            let count = sig_index.len();
            class = next_class;
            if count == classes {
                break;
            }
            classes = count;
        }
        // renumber classes in BFS order from the initial class
        let mut rep = vec![usize::MAX; classes];
        for s in 0..n {
            if rep[class[s]] == usize::MAX {
                rep[class[s]] = s;
            }
        }
        let mut number = vec![usize::MAX; classes];
        let mut queue = VecDeque::from([class[0]]);
        number[class[0]] = 0;
        let mut next_id = 1;
        let mut visit = Vec::new();
        while let Some(c) = queue.pop_front() {
            visit.push(c);
            let s = rep[c];
            for a in 0..k {
                let t = class[succ[s * k + a]];
                if number[t] == usize::MAX {
                    number[t] = next_id;
                    next_id += 1;
                    queue.push_back(t);
                }
            }
        }
        let mut accepting = vec![false; classes];
        let mut delta = vec![0; classes * k];
        for &c in &visit {
            let s = rep[c];
            accepting[number[c]] = self.accepting[order[s]];
            for a in 0..k {
                delta[number[c] * k + a] = number[class[succ[s * k + a]]];
            }
        }
        Dfa::from_parts(self.alphabet.clone(), 0, accepting, delta)
    }

    fn useful(&self) -> Vec<bool> {
        let reach = {
            let mut r = vec![false; self.num_states()];
            for s in self.bfs_order() {
                r[s] = true;
            }
            r
        };
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.num_states()];
        for s in 0..self.num_states() {
            for a in self.alphabet.letters() {
                rev[self.next(s, a)].push(s);
            }
        }
        let mut co = self.accepting.clone();
        let mut stack: Vec<usize> = (0..self.num_states()).filter(|&s| co[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        reach.iter().zip(&co).map(|(a, b)| *a && *b).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.bfs_order().iter().any(|&s| self.accepting[s])
    }

    pub fn is_universal(&self) -> bool {
        self.bfs_order().iter().all(|&s| self.accepting[s])
    }

    /// Length-lex least accepted word.
    pub fn shortest_word(&self) -> Option<Word> {
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            if self.accepting[s] {
                let mut letters = Vec::new();
                let mut cur = s;
                while let Some((p, a)) = parent[cur] {
                    letters.push(a);
                    cur = p;
                }
                letters.reverse();
                return Some(Word(letters));
            }
            for a in self.alphabet.letters() {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// True iff the language is finite (no cycle through useful states).
    pub fn is_finite(&self) -> bool {
        let useful = self.useful();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.num_states()];
        for root in 0..self.num_states() {
            if !useful[root] || mark[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, Letter)> = vec![(root, 0)];
            mark[root] = 1;
            while let Some(&mut (s, ref mut a)) = stack.last_mut() {
                if usize::from(*a) == self.alphabet.size() {
                    mark[s] = 2;
                    stack.pop();
                    continue;
                }
                let t = self.next(s, *a);
                *a += 1;
                if !useful[t] {
                    continue;
                }
                match mark[t] {
                    0 => {
                        mark[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// All accepted words when the language is finite with at most `limit`
    /// members; `Ok(None)` when it is infinite.
    pub fn finite_words(&self, limit: usize) -> Result<Option<BTreeSet<Word>>> {
        if !self.is_finite() {
            return Ok(None);
        }
        let useful = self.useful();
        let mut out = BTreeSet::new();
        if !useful[self.initial] {
            return Ok(Some(out));
        }
        let mut stack = vec![(self.initial, Word::empty())];
        while let Some((s, w)) = stack.pop() {
            if self.accepting[s] {
                out.insert(w.clone());
                if out.len() > limit {
                    return Err(Error::resource("finite language size", limit as u64));
                }
            }
            for a in self.alphabet.letters() {
                let t = self.next(s, a);
                if useful[t] {
                    stack.push((t, w.push(a)));
                }
            }
        }
        Ok(Some(out))
    }

    /// Accepted words of length at most `max_len`, in length-lex order.
    pub fn words_up_to(&self, max_len: usize) -> BTreeSet<Word> {
        let useful = self.useful();
        let mut out = BTreeSet::new();
        let mut layer = vec![(self.initial, Word::empty())];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (s, w) in layer {
                if !useful[s] {
                    continue;
                }
                if self.accepting[s] {
                    out.insert(w.clone());
                }
                if len < max_len {
                    next.extend(self.alphabet.letters().map(|a| (self.next(s, a), w.push(a))));
                }
            }
            layer = next;
        }
        out
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for s in 0..self.num_states() {
            n.add_state(self.accepting[s]);
        }
        for s in 0..self.num_states() {
            for a in self.alphabet.letters() {
                n.add_transition(s, Some(a), self.next(s, a));
            }
        }
        n.add_initial(self.initial);
        n.trim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    fn dfa_of(words: &[&str]) -> Dfa {
        let ws: Vec<Word> = words.iter().map(|s| w(s)).collect();
        Nfa::from_words(ab(), &ws).determinize().unwrap().minimize()
    }

    #[test]
    fn minimize_is_canonical() {
        let d1 = dfa_of(&["ab", "b"]);
        let d2 = dfa_of(&["b", "ab", "b"]);
        assert_eq!(d1, d2);
        assert_eq!(d1.minimize(), d1);
        assert_ne!(d1, dfa_of(&["ab"]));
    }

    #[test]
    fn star_minimal_size() {
        // (aa)* over {a,b}: even-a states plus sink
        let n = Nfa::from_words(ab(), [&w("aa")]).star();
        let d = n.determinize().unwrap().minimize();
        assert_eq!(d.num_states(), 3);
        assert!(d.accepts(&w("aaaa")) && !d.accepts(&w("aaa")));
        assert!(!d.is_finite());
    }

    #[test]
    fn shortest_and_finite_words() {
        let d = dfa_of(&["ba", "bb", "aab"]);
        assert_eq!(d.shortest_word(), Some(w("ba")));
        let words = d.finite_words(10).unwrap().unwrap();
        assert_eq!(words.len(), 3);
        assert!(d.complement().shortest_word() == Some(w("eps")));
        assert!(d.finite_words(2).is_err());
    }

    #[test]
    fn product_ops() {
        let x = dfa_of(&["a", "ab"]);
        let y = dfa_of(&["ab", "b"]);
        let i = x.product(&y, |p, q| p && q).unwrap().minimize();
        assert_eq!(i, dfa_of(&["ab"]));
        let u = x.product(&y, |p, q| p || q).unwrap().minimize();
        assert_eq!(u, dfa_of(&["a", "ab", "b"]));
    }
}
