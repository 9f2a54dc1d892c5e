//! Classical code tests: Sardinas–Patterson, prefix/suffix/bifix,
//! Bernoulli measures, completeness and maximality.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::automata::{Dfa, Language};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// Maximum number of distinct quotient sets before Sardinas–Patterson gives up.
pub const SP_ITERATION_CAP: usize = 10_000;

/// Two different factorizations over `X` of one word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleFactorization {
    pub left: Vec<Word>,
    pub right: Vec<Word>,
}

impl DoubleFactorization {
    pub fn word(&self) -> Word {
        Word(self.left.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    /// Replays the witness against `x` without trusting how it was found.
    pub fn verify(&self, x: &Language) -> bool {
        let right: Word = Word(self.right.iter().flat_map(|w| w.0.iter().copied()).collect());
        !self.left.is_empty()
            && !self.right.is_empty()
            && self.left != self.right
            && self.word() == right
            && self.left.iter().chain(&self.right).all(|w| x.contains(w))
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let side = |ws: &[Word]| ws.iter().map(|w| format!("({})", alphabet.render(w))).collect::<String>();
        format!(
            "{} = {} = {}",
            alphabet.render(&self.word()),
            side(&self.left),
            side(&self.right)
        )
    }
}

#[derive(Debug, Clone)]
pub struct CodeVerdict {
    pub is_code: bool,
    pub witness: Option<DoubleFactorization>,
    /// `U_0, U_1, ...` up to the set that stopped the iteration.
    pub trace: Vec<Language>,
}

/// Runs the Sardinas–Patterson procedure on `x`.
pub fn sardinas_patterson(x: &Language) -> Result<CodeVerdict> {
    if x.contains(&Word::empty()) {
        let e = Word::empty();
        return Ok(CodeVerdict {
            is_code: false,
            witness: Some(DoubleFactorization { left: vec![e.clone()], right: vec![e.clone(), e] }),
            trace: Vec::new(),
        });
    }
    match x.as_finite() {
        Some(words) => Ok(sp_finite(x.alphabet(), words)?),
        None => sp_regular(x),
    }
}

/// Each member `u` of a quotient set carries `(P, Q)` with
/// `concat(P) = concat(Q)·u` and `P`, `Q` starting with different words.
type Provenance = BTreeMap<Word, (Vec<Word>, Vec<Word>)>;

fn sp_finite(alphabet: &Alphabet, x: &BTreeSet<Word>) -> Result<CodeVerdict> {
    let mut current: Provenance = BTreeMap::new();
    for long in x {
        for short in x {
            if short != long && short.is_prefix_of(long) {
                let u = Word(long.0[short.len()..].to_vec());
                current.entry(u).or_insert_with(|| (vec![long.clone()], vec![short.clone()]));
            }
        }
    }
    let mut trace = Vec::new();
    let mut seen: HashSet<BTreeSet<Word>> = HashSet::new();
    loop {
        let keys: BTreeSet<Word> = current.keys().cloned().collect();
        trace.push(Language::finite(alphabet.clone(), keys.clone()));
        if let Some((p, q)) = current.get(&Word::empty()) {
            return Ok(CodeVerdict {
                is_code: false,
                witness: Some(DoubleFactorization { left: p.clone(), right: q.clone() }),
                trace,
            });
        }
        if !seen.insert(keys) {
            return Ok(CodeVerdict { is_code: true, witness: None, trace });
        }
        if seen.len() > SP_ITERATION_CAP {
            return Err(Error::resource("Sardinas-Patterson iterations", SP_ITERATION_CAP as u64));
        }
        let mut next: Provenance = BTreeMap::new();
        for (u, (p, q)) in &current {
            for w in x {
                // u⁻¹X: concat(Q)·w = concat(P)·v
                if u.is_prefix_of(w) {
                    let v = Word(w.0[u.len()..].to_vec());
                    next.entry(v).or_insert_with(|| {
                        let mut q2 = q.clone();
                        q2.push(w.clone());
                        (q2, p.clone())
                    });
                }
                // X⁻¹u: concat(P) = concat(Q)·w·v
                if w.is_prefix_of(u) {
                    let v = Word(u.0[w.len()..].to_vec());
                    next.entry(v).or_insert_with(|| {
                        let mut q2 = q.clone();
                        q2.push(w.clone());
                        (p.clone(), q2)
                    });
                }
            }
        }
        current = next;
    }
}

fn sp_regular(x: &Language) -> Result<CodeVerdict> {
    let mut trace: Vec<Language> = Vec::new();
    let mut seen: HashSet<Dfa> = HashSet::new();
    let mut u = Language::left_quotient(x, x, true)?;
    loop {
        let canon = u.dfa()?;
        let u_lang = Language::from_dfa(canon.clone());
        trace.push(u_lang.clone());
        if canon.accepts(&Word::empty()) {
            let witness = reconstruct(x, &trace)?;
            return Ok(CodeVerdict { is_code: false, witness: Some(witness), trace });
        }
        if !seen.insert(canon) {
            return Ok(CodeVerdict { is_code: true, witness: None, trace });
        }
        if seen.len() > SP_ITERATION_CAP {
            return Err(Error::resource("Sardinas-Patterson iterations", SP_ITERATION_CAP as u64));
        }
        u = Language::left_quotient(&u_lang, x, false)?.union(&Language::left_quotient(x, &u_lang, false)?)?;
    }
}

enum Step {
    /// `u_{j-1}·u_j ∈ X`
    Extend(Word),
    /// `u_{j-1} = x·u_j` with `x ∈ X`
    Consume(Word),
}

/// Walks back from `ε ∈ U_m` to `U_0` choosing shortest predecessors, then
/// replays the derivation forwards.
fn reconstruct(x: &Language, trace: &[Language]) -> Result<DoubleFactorization> {
    let alphabet = x.alphabet().clone();
    let mut u = Word::empty();
    let mut steps = Vec::new();
    for j in (1..trace.len()).rev() {
        let single = Language::word(alphabet.clone(), u.clone());
        let extend = trace[j - 1]
            .intersect(&Language::right_quotient(x, &single)?)?
            .shortest_word()?;
        let consume = trace[j - 1].intersect(&x.concat(&single)?)?.shortest_word()?;
        let (prev, step) = match (extend, consume) {
            (Some(a), Some(b)) if b < a => {
                let w = Word(b.0[..b.len() - u.len()].to_vec());
                (b, Step::Consume(w))
            }
            (Some(a), _) => {
                let w = a.concat(&u);
                (a, Step::Extend(w))
            }
            (None, Some(b)) => {
                let w = Word(b.0[..b.len() - u.len()].to_vec());
                (b, Step::Consume(w))
            }
            (None, None) => return Err(Error::internal("quotient trace has no predecessor")),
        };
        steps.push(step);
        u = prev;
    }
    let single = Language::word(alphabet, u.clone());
    let short = x
        .intersect(&Language::right_quotient(x, &single)?)?
        .shortest_word()?
        .ok_or_else(|| Error::internal("U_0 element without origin"))?;
    let long = short.concat(&u);
    let (mut p, mut q) = (vec![long], vec![short]);
    for step in steps.into_iter().rev() {
        match step {
            Step::Extend(w) => {
                q.push(w);
                std::mem::swap(&mut p, &mut q);
            }
            Step::Consume(w) => q.push(w),
        }
    }
    let witness = DoubleFactorization { left: p, right: q };
    if witness.verify(x) {
        Ok(witness)
    } else {
        Err(Error::internal("reconstructed factorization does not verify"))
    }
}

fn plus(alphabet: &Alphabet) -> Result<Language> {
    let a = Language::level(alphabet.clone(), 1);
    a.concat(&a.star())
}

/// `X ∩ XA⁺ = ∅`
pub fn is_prefix(x: &Language) -> Result<bool> {
    x.intersect(&x.concat(&plus(x.alphabet())?)?)?.is_empty()
}

/// `X ∩ A⁺X = ∅`
pub fn is_suffix(x: &Language) -> Result<bool> {
    x.intersect(&plus(x.alphabet())?.concat(x)?)?.is_empty()
}

pub fn is_bifix(x: &Language) -> Result<bool> {
    Ok(is_prefix(x)? && is_suffix(x)?)
}

/// Positive Bernoulli distribution with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    alphabet: Alphabet,
    weights: Vec<BigRational>,
}

impl Distribution {
    pub fn uniform(alphabet: &Alphabet) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::from(alphabet.size()));
        Distribution { alphabet: alphabet.clone(), weights: vec![p; alphabet.size()] }
    }

    pub fn new(alphabet: &Alphabet, weights: Vec<BigRational>) -> Result<Self> {
        if weights.len() != alphabet.size() {
            return Err(Error::InvalidArgument("one weight per letter required".into()));
        }
        if weights.iter().any(|w| *w <= BigRational::zero()) {
            return Err(Error::InvalidArgument("letter weights must be positive".into()));
        }
        let total: BigRational = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!("letter weights sum to {total}, not 1")));
        }
        Ok(Distribution { alphabet: alphabet.clone(), weights })
    }

    /// Parses `a=1/2,b=1/2`; decimals such as `0.25` are read exactly.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidArgument(m);
        let mut weights: Vec<Option<BigRational>> = vec![None; alphabet.size()];
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected letter=weight, got {item:?}")))?;
            let mut chars = name.trim().chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => alphabet.index_of(c)?,
                _ => return Err(bad(format!("bad letter {name:?}"))),
            };
            let slot = &mut weights[letter as usize];
            if slot.is_some() {
                return Err(bad(format!("letter {name} given twice")));
            }
            *slot = Some(parse_rational(value.trim()).ok_or_else(|| bad(format!("bad weight {value:?}")))?);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| bad(format!("no weight for {}", alphabet.symbol(i as u8)))))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(alphabet, weights)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn word(&self, w: &Word) -> BigRational {
        w.letters().iter().fold(BigRational::one(), |acc, &a| acc * &self.weights[a as usize])
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((int, frac)) = s.split_once('.') {
        if int.chars().chain(frac.chars()).any(|c| !c.is_ascii_digit()) || frac.is_empty() {
            return None;
        }
        let num: BigInt = format!("{int}{frac}").parse().ok()?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Some(BigRational::new(num, den));
    }
    BigRational::from_str(s).ok()
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}={}", self.alphabet.symbol(i as u8), w))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

fn check_alphabet(x: &Language, d: &Distribution) -> Result<()> {
    if x.alphabet() == d.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Exact measure of a finite set.
pub fn measure_finite(x: &Language, d: &Distribution) -> Result<BigRational> {
    check_alphabet(x, d)?;
    let words = x
        .finite_words()?
        .ok_or_else(|| Error::pre("exact measure needs a finite set; use measure_partial"))?;
    Ok(words.iter().map(|w| d.word(w)).sum())
}

/// `μ(X ∩ A^{≤n})`, computed on the minimal automaton.
pub fn measure_partial(x: &Language, d: &Distribution, n: usize) -> Result<BigRational> {
    check_alphabet(x, d)?;
    let dfa = x.dfa()?;
    let mut mass = vec![BigRational::zero(); dfa.num_states()];
    mass[dfa.initial()] = BigRational::one();
    let mut total = BigRational::zero();
    for len in 0..=n {
        for (s, m) in mass.iter().enumerate() {
            if dfa.is_accepting(s) && !m.is_zero() {
                total += m;
            }
        }
        if len == n {
            break;
        }
        let mut next = vec![BigRational::zero(); dfa.num_states()];
        for (s, m) in mass.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for a in x.alphabet().letters() {
                next[dfa.next(s, a)] += m * &d.weights[a as usize];
            }
        }
        mass = next;
    }
    Ok(total)
}

/// Every word is a factor of some message over `X`.
pub fn is_complete(x: &Language) -> Result<bool> {
    x.star().factors().is_universal()
}

/// For regular codes maximality coincides with completeness.
pub fn is_maximal_code(x: &Language) -> Result<bool> {
    if !sardinas_patterson(x)?.is_code {
        return Err(Error::pre("not a code"));
    }
    is_complete(x)
}

/// Length-lex least word that is not a factor of `X*`.
pub fn find_non_factor(x: &Language) -> Result<Word> {
    x.star()
        .factors()
        .complement()?
        .shortest_word()?
        .ok_or_else(|| Error::pre("complete: every word is a factor"))
}
