//! Error detection and correction for codes under an edit relation:
//! independence, error correction, code-ness of channel images, maximality
//! among independent codes and the two completion constructions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::automata::Language;
use crate::codes::{find_non_factor, is_complete, sardinas_patterson, CodeVerdict};
use crate::error::{Error, Result};
use crate::transducers::{Closure, EditRelation};
use crate::words::{is_unbordered, unbordered_extension, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    /// `(x, y)` with `x, y ∈ X` and `y` in the antireflexive image of `x`.
    pub witness: Option<(Word, Word)>,
}

/// `(x, y, z)` with `x ≠ y` in `X` and `z ∈ τ(x) ∩ τ(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrectionWitness {
    pub x: Word,
    pub y: Word,
    pub common: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrectionReport {
    pub correcting: bool,
    pub witness: Option<CorrectionWitness>,
}

fn unsupported_infinite(rel: &EditRelation, what: &str) -> Error {
    Error::Unsupported(format!("{what} for {rel} on an infinite regular set"))
}

/// Decides `X ∩ τ̲(X) = ∅`.
pub fn is_independent(x: &Language, rel: EditRelation) -> Result<IndependenceReport> {
    let bar = rel.with_closure(Closure::Antireflexive);
    let alphabet = x.alphabet();
    if let Some(words) = x.finite_words()? {
        for u in &words {
            let img = bar.apply_word(alphabet, u)?;
            if let Some(y) = img.iter().find(|y| words.contains(*y)) {
                return Ok(IndependenceReport { independent: false, witness: Some((u.clone(), y.clone())) });
            }
        }
        return Ok(IndependenceReport { independent: true, witness: None });
    }
    if !rel.plain_is_antireflexive() {
        return Err(unsupported_infinite(&rel, "independence"));
    }
    let clash = bar.apply(x)?.intersect(x)?;
    match clash.shortest_word()? {
        None => Ok(IndependenceReport { independent: true, witness: None }),
        Some(y) => {
            let src = bar
                .inverse()
                .apply_word(alphabet, &y)?
                .into_iter()
                .find(|u| x.contains(u))
                .ok_or_else(|| Error::internal("image word without a preimage in X"))?;
            Ok(IndependenceReport { independent: false, witness: Some((src, y)) })
        }
    }
}

/// Checks `τ(x) ∩ τ(y) ≠ ∅ ⟹ x = y` on a finite set, by pairs and through
/// the inverse-image criterion, and insists that both agree.
pub fn is_error_correcting(x: &Language, rel: EditRelation) -> Result<CorrectionReport> {
    let words = x.finite_words()?.ok_or_else(|| unsupported_infinite(&rel, "error correction"))?;
    let alphabet = x.alphabet();
    let images: Vec<(Word, BTreeSet<Word>)> = words
        .iter()
        .map(|w| Ok((w.clone(), rel.apply_word(alphabet, w)?)))
        .collect::<Result<_>>()?;

    let mut pairwise = None;
    'outer: for (i, (u, iu)) in images.iter().enumerate() {
        for (v, iv) in &images[i + 1..] {
            if let Some(z) = iu.intersection(iv).next() {
                pairwise = Some(CorrectionWitness { x: u.clone(), y: v.clone(), common: z.clone() });
                break 'outer;
            }
        }
    }

    let inverse = rel.inverse();
    let mut by_inverse = true;
    for (u, iu) in &images {
        if iu.is_empty() {
            continue;
        }
        let mut back = BTreeSet::new();
        for z in iu {
            back.extend(inverse.apply_word(alphabet, z)?.into_iter().filter(|v| words.contains(v)));
        }
        if back.len() != 1 || !back.contains(u) {
            by_inverse = false;
            break;
        }
    }
    if by_inverse != pairwise.is_none() {
        return Err(Error::internal("error-correction criteria disagree"));
    }
    Ok(CorrectionReport { correcting: by_inverse, witness: pairwise })
}

pub fn hat_image(x: &Language, rel: EditRelation) -> Result<Language> {
    rel.with_closure(Closure::Reflexive).apply(x)
}

pub fn underline_image(x: &Language, rel: EditRelation) -> Result<Language> {
    rel.with_closure(Closure::Antireflexive).apply(x)
}

/// Sardinas–Patterson on `τ̂(X) = X ∪ τ(X)`.
pub fn hat_image_is_code(x: &Language, rel: EditRelation) -> Result<CodeVerdict> {
    sardinas_patterson(&hat_image(x, rel)?)
}

/// Sardinas–Patterson on `τ̲(X)`.
pub fn underline_image_is_code(x: &Language, rel: EditRelation) -> Result<CodeVerdict> {
    let img = underline_image(x, rel).map_err(|e| match e {
        Error::Unsupported(_) => unsupported_infinite(&rel, "code-ness of the antireflexive image"),
        other => other,
    })?;
    sardinas_patterson(&img)
}

fn require_independent_code(x: &Language, rel: EditRelation) -> Result<()> {
    if !sardinas_patterson(x)?.is_code {
        return Err(Error::pre("not a code"));
    }
    if !is_independent(x, rel)?.independent {
        return Err(Error::pre(format!("not {}-independent", rel.with_closure(Closure::Antireflexive))));
    }
    Ok(())
}

/// Within independent codes, maximal coincides with complete.
pub fn is_maximal_independent(x: &Language, rel: EditRelation) -> Result<bool> {
    require_independent_code(x, rel)?;
    is_complete(x)
}

/// A word `w` outside `X` such that `X ∪ {w}` is still an independent code:
/// `w = v^{k+1}·u` with `v` the least non-factor of `X*` and `u` making the
/// result unbordered.
pub fn witness_independent_extension(x: &Language, rel: EditRelation) -> Result<Word> {
    require_independent_code(x, rel)?;
    if is_complete(x)? {
        return Err(Error::pre("complete: no independent code strictly contains it"));
    }
    let alphabet = x.alphabet();
    let v = find_non_factor(x)?;
    let head = v.pow(rel.k + 1);
    let w = head.concat(&unbordered_extension(alphabet, &head)?);

    let bar = rel.with_closure(Closure::Antireflexive);
    let single = Language::word(alphabet.clone(), w.clone());
    let forward = bar.apply_word(alphabet, &w)?.iter().all(|y| !x.contains(y));
    let backward = !bar.apply(x)?.contains(&w);
    if !forward || !backward {
        return Err(Error::internal("extension word meets the channel image"));
    }
    let y = x.union(&single)?;
    if !sardinas_patterson(&y)?.is_code || !is_independent(&y, rel)?.independent {
        return Err(Error::internal("extended set is not an independent code"));
    }
    Ok(w)
}

/// Result of the completion `Y = X ∪ w(Uw)*`.
#[derive(Debug, Clone)]
pub struct Completion {
    pub w: Word,
    pub u: Language,
    pub y: Language,
}

/// Length-lex least unbordered word outside `F(X*)`.
fn least_unbordered_non_factor(x: &Language) -> Result<Word> {
    let alphabet = x.alphabet();
    let v = find_non_factor(x)?;
    let bound = v.len() + unbordered_extension(alphabet, &v)?.len();
    let factors = x.star().factors().dfa()?;
    for len in 1..=bound {
        for w in alphabet.words_of_length(len) {
            if !factors.accepts(&w) && is_unbordered(&w)? {
                return Ok(w);
            }
        }
    }
    Err(Error::internal("no unbordered non-factor within the bound"))
}

/// Embeds a non-complete code into the complete code `X ∪ w(Uw)*` with
/// `U = A* ∖ (X* ∪ A*wA*)`.
pub fn er_complete(x: &Language) -> Result<Completion> {
    if !sardinas_patterson(x)?.is_code {
        return Err(Error::pre("not a code"));
    }
    if is_complete(x)? {
        return Err(Error::pre("already complete"));
    }
    let alphabet = x.alphabet().clone();
    let w = least_unbordered_non_factor(x)?;
    let wl = Language::word(alphabet.clone(), w.clone());
    let all = Language::universal(alphabet.clone());
    let containing = all.concat(&wl)?.concat(&all)?;
    let u = x.star().union(&containing)?.complement()?;
    let y = x.union(&wl.concat(&u.concat(&wl)?.star())?)?;
    if !is_complete(&y)? || !sardinas_patterson(&y)?.is_code {
        return Err(Error::internal("completion failed its own check"));
    }
    Ok(Completion { w, u, y })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Check {
    Holds,
    Fails(String),
    Unsupported(String),
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Holds => write!(f, "holds"),
            Check::Fails(w) => write!(f, "fails: {w}"),
            Check::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

/// The channel constraints for one code and relation.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelCheckReport {
    /// `X ∩ τ̲(X) = ∅`
    pub independent: Check,
    /// `τ(x) ∩ τ(y) ≠ ∅ ⟹ x = y`
    pub error_correcting: Check,
    pub maximal_independent: Check,
    pub hat_image_code: Check,
    pub underline_image_code: Check,
}

fn lift<T>(r: Result<T>, judge: impl FnOnce(T) -> Check) -> Result<Check> {
    match r {
        Ok(v) => Ok(judge(v)),
        Err(Error::Unsupported(m)) => Ok(Check::Unsupported(m)),
        Err(Error::Precondition(m)) => Ok(Check::Fails(m)),
        Err(e) => Err(e),
    }
}

pub fn channel_check(x: &Language, rel: EditRelation) -> Result<ChannelCheckReport> {
    let a = x.alphabet();
    let pair = |u: &Word, v: &Word| format!("{} -> {}", a.render(u), a.render(v));
    let code = |v: CodeVerdict| match v.witness {
        None => Check::Holds,
        Some(w) => Check::Fails(w.render(a)),
    };
    Ok(ChannelCheckReport {
        independent: lift(is_independent(x, rel), |r| match r.witness {
            None => Check::Holds,
            Some((u, v)) => Check::Fails(pair(&u, &v)),
        })?,
        error_correcting: lift(is_error_correcting(x, rel), |r| match r.witness {
            None => Check::Holds,
            Some(c) => Check::Fails(format!(
                "{} in image of {} and {}",
                a.render(&c.common),
                a.render(&c.x),
                a.render(&c.y)
            )),
        })?,
        maximal_independent: lift(is_maximal_independent(x, rel), |m| {
            if m {
                Check::Holds
            } else {
                Check::Fails("not complete".into())
            }
        })?,
        hat_image_code: lift(hat_image_is_code(x, rel), code)?,
        underline_image_code: lift(underline_image_is_code(x, rel), code)?,
    })
}

/// Renders an independence witness as `x -> y`.
pub fn render_pair(alphabet: &Alphabet, pair: &(Word, Word)) -> String {
    format!("{} -> {}", alphabet.render(&pair.0), alphabet.render(&pair.1))
}
