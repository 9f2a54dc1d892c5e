//! Block channel simulator.
//!
//! Messages are sequences of codeword indices. Each block is corrupted on
//! its own, staying inside the antireflexive image of the sent codeword, so
//! block boundaries survive transmission. Decoding looks the received block
//! up among the reflexive images of all codewords.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::Language;
use crate::error::{Error, Result};
use crate::independence::is_independent;
use crate::transducers::{Closure, EditRelation};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Exact,
    Detected,
    Corrected(Word),
    Ambiguous(Vec<Word>),
}

/// Maps codeword indices to blocks; `code` is in length-lex order.
pub fn encode(message: &[usize], code: &[Word]) -> Result<Vec<Word>> {
    message
        .iter()
        .map(|&i| {
            code.get(i)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("index {i} out of range for {} codewords", code.len())))
        })
        .collect()
}

/// Precomputed channel images of one finite code.
#[derive(Debug, Clone)]
pub struct Channel {
    alphabet: Alphabet,
    rel: EditRelation,
    code: Vec<Word>,
    members: BTreeSet<Word>,
    /// antireflexive image of each codeword, in length-lex order
    noise: HashMap<Word, Vec<Word>>,
    /// codewords whose reflexive image contains a given word
    preimages: HashMap<Word, Vec<Word>>,
}

impl Channel {
    pub fn new(alphabet: &Alphabet, code: &BTreeSet<Word>, rel: EditRelation) -> Result<Self> {
        let bar = rel.with_closure(Closure::Antireflexive);
        let mut noise = HashMap::new();
        let mut preimages: HashMap<Word, Vec<Word>> = HashMap::new();
        for x in code {
            let img = bar.apply_word(alphabet, x)?;
            for y in img.iter().chain(std::iter::once(x)) {
                preimages.entry(y.clone()).or_default().push(x.clone());
            }
            noise.insert(x.clone(), img.into_iter().collect());
        }
        Ok(Channel {
            alphabet: alphabet.clone(),
            rel,
            code: code.iter().cloned().collect(),
            members: code.clone(),
            noise,
            preimages,
        })
    }

    pub fn code(&self) -> &[Word] {
        &self.code
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relation(&self) -> EditRelation {
        self.rel
    }

    /// Replaces each block, with probability `p`, by a uniform element of
    /// its antireflexive image; blocks with an empty image pass unchanged.
    pub fn corrupt(&self, blocks: &[Word], p: f64, rng: &mut impl Rng) -> Result<Vec<Word>> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
        }
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let img = match self.noise.get(b) {
                Some(img) => img.clone(),
                None => self
                    .rel
                    .with_closure(Closure::Antireflexive)
                    .apply_word(&self.alphabet, b)?
                    .into_iter()
                    .collect(),
            };
            if !img.is_empty() && rng.gen_bool(p) {
                out.push(img[rng.gen_range(0..img.len())].clone());
            } else {
                out.push(b.clone());
            }
        }
        Ok(out)
    }

    pub fn decode(&self, received: &Word) -> Outcome {
        if self.members.contains(received) {
            return Outcome::Exact;
        }
        match self.preimages.get(received).map(Vec::as_slice) {
            None | Some([]) => Outcome::Detected,
            Some([x]) => Outcome::Corrected(x.clone()),
            Some(xs) => Outcome::Ambiguous(xs.to_vec()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub blocks: u64,
    /// blocks whose received word differs from the sent one
    pub corrupted: u64,
    pub exact: u64,
    pub detected: u64,
    pub corrected: u64,
    pub ambiguous: u64,
    /// corrupted blocks decoded as a codeword: received word in the code
    pub undetected: u64,
    /// corrupted blocks uniquely corrected to the wrong codeword
    pub miscorrected: u64,
}

impl Tally {
    pub fn record(&mut self, sent: &Word, received: &Word, outcome: &Outcome) {
        self.blocks += 1;
        let corrupted = sent != received;
        if corrupted {
            self.corrupted += 1;
        }
        match outcome {
            Outcome::Exact => {
                self.exact += 1;
                if corrupted {
                    self.undetected += 1;
                }
            }
            Outcome::Detected => self.detected += 1,
            Outcome::Corrected(x) => {
                if x == sent {
                    self.corrected += 1;
                } else {
                    self.miscorrected += 1;
                }
            }
            Outcome::Ambiguous(_) => self.ambiguous += 1,
        }
    }

    fn merge(&mut self, o: &Tally) {
        self.blocks += o.blocks;
        self.corrupted += o.corrupted;
        self.exact += o.exact;
        self.detected += o.detected;
        self.corrected += o.corrected;
        self.ambiguous += o.ambiguous;
        self.undetected += o.undetected;
        self.miscorrected += o.miscorrected;
    }

    fn rate(&self, n: u64) -> Option<f64> {
        (self.corrupted > 0).then(|| n as f64 / self.corrupted as f64)
    }

    /// Share of corrupted blocks recognized as corrupted.
    pub fn detection_rate(&self) -> Option<f64> {
        self.rate(self.corrupted - self.undetected)
    }

    /// Share of corrupted blocks restored to the sent codeword.
    pub fn correction_rate(&self) -> Option<f64> {
        self.rate(self.corrected)
    }

    pub fn ambiguity_rate(&self) -> Option<f64> {
        self.rate(self.ambiguous)
    }

    pub fn exact_rate(&self) -> Option<f64> {
        (self.blocks > 0).then(|| self.exact as f64 / self.blocks as f64)
    }
}

/// Decodes a received block sequence against what was sent.
pub fn decode_blocks(channel: &Channel, sent: &[Word], received: &[Word]) -> Result<(Vec<Outcome>, Tally)> {
    if sent.len() != received.len() {
        return Err(Error::LengthMismatch(sent.len(), received.len()));
    }
    let mut tally = Tally::default();
    let outcomes = sent
        .iter()
        .zip(received)
        .map(|(s, r)| {
            let o = channel.decode(r);
            tally.record(s, r, &o);
            o
        })
        .collect();
    Ok((outcomes, tally))
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub code: Language,
    pub rel: EditRelation,
    pub p: f64,
    /// blocks per message
    pub len: usize,
    pub seed: u64,
    pub trials: u64,
    /// truncation length for infinite codes
    pub max_word_len: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub relation: String,
    pub codewords: usize,
    pub independent: bool,
    pub seed: u64,
    pub trials: u64,
    pub tally: Tally,
    pub detection_rate: Option<f64>,
    pub correction_rate: Option<f64>,
    pub ambiguity_rate: Option<f64>,
    pub exact_rate: Option<f64>,
}

/// Trial `i` draws from stream `i` of the generator seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let alphabet = cfg.code.alphabet();
    let words = match cfg.max_word_len {
        Some(l) => cfg.code.words_up_to(l)?,
        None => cfg
            .code
            .finite_words()?
            .ok_or_else(|| Error::pre("infinite code: give a maximum codeword length"))?,
    };
    if words.is_empty() {
        return Err(Error::pre("no codewords to transmit"));
    }
    let truncated = Language::finite(alphabet.clone(), words.iter().cloned());
    let independent = is_independent(&truncated, cfg.rel)?.independent;
    let channel = Channel::new(alphabet, &words, cfg.rel)?;
    let mut tally = Tally::default();
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t);
        let message: Vec<usize> = (0..cfg.len).map(|_| rng.gen_range(0..words.len())).collect();
        let sent = encode(&message, channel.code())?;
        let received = channel.corrupt(&sent, cfg.p, &mut rng)?;
        let (_, t) = decode_blocks(&channel, &sent, &received)?;
        tally.merge(&t);
    }
    Ok(ExperimentReport {
        relation: cfg.rel.to_string(),
        codewords: words.len(),
        independent,
        seed: cfg.seed,
        trials: cfg.trials,
        detection_rate: tally.detection_rate(),
        correction_rate: tally.correction_rate(),
        ambiguity_rate: tally.ambiguity_rate(),
        exact_rate: tally.exact_rate(),
        tally,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile;

    fn ab() -> Alphabet {
        Alphabet::new("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    fn rel(s: &str) -> EditRelation {
        s.parse().unwrap()
    }

    fn channel(e: &str, r: &str) -> Channel {
        let words = compile(&ab(), e).unwrap().finite_words().unwrap().unwrap();
        Channel::new(&ab(), &words, rel(r)).unwrap()
    }

    #[test]
    fn encoding() {
        let code = vec![w("a"), w("bb")];
        assert_eq!(encode(&[0, 1], &code).unwrap(), code);
        assert!(encode(&[], &code).unwrap().is_empty());
        assert!(encode(&[2], &code).is_err());
    }

    #[test]
    fn corruption() {
        let c = channel("a|bb|baa", "Lambda:1");
        let blocks = vec![w("baa"), w("a")];
        let mut rng = trial_rng(7, 0);
        assert_eq!(c.corrupt(&blocks, 0.0, &mut rng).unwrap(), blocks);
        let mut seen = BTreeSet::new();
        for s in 0..200 {
            let out = c.corrupt(&[w("baa")], 1.0, &mut trial_rng(s, 0)).unwrap();
            assert!(rel("Lambda:1").apply_word(&ab(), &w("baa")).unwrap().contains(&out[0]));
            seen.insert(out[0].clone());
        }
        assert!(seen.contains(&w("aaa")));
        let d = channel("a|bb", "delta:2");
        assert_eq!(d.corrupt(&[w("a")], 1.0, &mut rng).unwrap(), vec![w("a")]);
        assert!(d.corrupt(&[w("a")], 1.5, &mut rng).is_err());
    }

    #[test]
    fn decoding() {
        let c = channel("a|bb|baa|babb|babaa", "Lambda:1");
        assert_eq!(c.decode(&w("aaa")), Outcome::Corrected(w("baa")));
        assert_eq!(c.decode(&w("bb")), Outcome::Exact);
        let c = channel("aabbb|bbbbaa", "Delta:2");
        let sent = encode(&[0, 1, 0, 1], c.code()).unwrap();
        let received = c.corrupt(&sent, 1.0, &mut trial_rng(3, 0)).unwrap();
        let (outcomes, tally) = decode_blocks(&c, &sent, &received).unwrap();
        assert_eq!(tally.corrected, 4);
        let restored: Vec<Word> = outcomes
            .into_iter()
            .map(|o| match o {
                Outcome::Corrected(x) => x,
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(restored, sent);
    }

    #[test]
    fn experiments() {
        let cfg = ExperimentConfig {
            code: compile(&ab(), "aaaa|aaab|abb|bab").unwrap(),
            rel: rel("delta:1"),
            p: 1.0,
            len: 20,
            seed: 5,
            trials: 50,
            max_word_len: None,
        };
        let r = run_experiment(&cfg).unwrap();
        assert!(r.independent);
        assert!(r.tally.ambiguous > 0);
        assert_eq!(r.tally.undetected, 0);
        let again = run_experiment(&cfg).unwrap();
        assert_eq!(again.tally, r.tally);
        let quiet = run_experiment(&ExperimentConfig { p: 0.0, ..cfg.clone() }).unwrap();
        assert_eq!(quiet.exact_rate, Some(1.0));
        assert_eq!(quiet.correction_rate, None);
        let inf = ExperimentConfig { code: compile(&ab(), "(ba)*.(a|bb)").unwrap(), ..cfg };
        assert!(run_experiment(&inf).is_err());
        assert_eq!(run_experiment(&ExperimentConfig { max_word_len: Some(5), ..inf }).unwrap().codewords, 5);
    }
}
