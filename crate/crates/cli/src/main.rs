//! `codekit`: decide code properties and run the edit-channel tools from the
//! command line.

mod report;
mod verify;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use codekit_core::automata::set_state_cap;
use codekit_core::channel::{run_experiment, ExperimentConfig};
use codekit_core::closed::{
    assert_empty_family, classify_Sigma_closed, classify_sigma_closed, embed_delta_closed_complete,
    enumerate_delta_closed, is_closed, sigma_complete_embedding, sigma_star, ClosedClassification,
    UpToSigmaClassification,
};
use codekit_core::codes::{
    find_non_factor, is_complete, is_maximal_code, is_prefix, is_suffix, measure_finite, measure_partial,
    sardinas_patterson, CodeVerdict, Distribution,
};
use codekit_core::independence::{
    er_complete, hat_image, hat_image_is_code, is_error_correcting, is_independent, underline_image,
    underline_image_is_code, witness_independent_extension,
};
use codekit_core::transducers::{EditKind, EditRelation};
use codekit_core::{compile, Alphabet, Error, Language, Result, Word};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use report::{error_exit_code, error_report, exit, Format, Report, Status};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "codekit", version, about = "Variable-length codes under edit relations")]
struct Cli {
    /// Alphabet letters, e.g. `ab`
    #[arg(long, global = true)]
    alphabet: Option<String>,
    /// Language file: `alphabet: <letters>` then one expression per line
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Re-check every witness before reporting it
    #[arg(long, global = true)]
    verify_witness: bool,
    /// Cap on automaton states built by any single construction
    #[arg(long, global = true)]
    max_states: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageClosure {
    Hat,
    Bar,
}

#[derive(Subcommand)]
enum Command {
    /// Sardinas-Patterson test
    Code { expr: Option<String> },
    /// Prefix, suffix and bifix tests
    Prefix { expr: Option<String> },
    /// Measure under a Bernoulli distribution
    Measure {
        expr: Option<String>,
        /// Letter weights, e.g. `a=1/2,b=1/2`
        #[arg(long)]
        dist: Option<String>,
        /// Length bound for infinite languages
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
    },
    /// Completeness: every word is a factor of X*
    Complete { expr: Option<String> },
    /// Maximality among codes
    Maximal { expr: Option<String> },
    /// Independence: X and its image under the relation are disjoint
    Independent {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
    },
    /// Error correction: distinct codewords have disjoint images
    Errcorrect {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
    },
    /// Whether the hat or bar image of X is a code
    ImageCode {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
        #[arg(long, value_enum, default_value_t = ImageClosure::Hat)]
        closure: ImageClosure,
    },
    /// A word extending an independent code
    Extend {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
    },
    /// Complete code containing X
    ErComplete { expr: Option<String> },
    /// Closedness: the image of X stays inside X
    Closed {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
    },
    /// Orbit of a word under repeated k-substitutions
    SigmaStar {
        word: String,
        #[arg(long)]
        k: usize,
        /// List the members when there are at most this many
        #[arg(long, default_value_t = 64)]
        limit: u128,
    },
    /// Shape of a sigma:k- or Sigma:k-closed code
    ClassifyClosed {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
    },
    /// All delta:k-closed codes
    EnumDeltaClosed {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Complete delta:k- or sigma:k-closed codes containing X
    EmbedClosed {
        expr: Option<String>,
        #[arg(long)]
        rel: EditRelation,
    },
    /// Transmit random messages through the block channel
    Simulate {
        #[arg(long)]
        code: Option<String>,
        #[arg(long)]
        rel: EditRelation,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Truncation length for infinite codes
        #[arg(long)]
        max_word_len: Option<usize>,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn internal_check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!("{what} failed its re-check")))
    }
}

struct Ctx {
    alphabet: Option<String>,
    file: Option<PathBuf>,
    verify: bool,
}

impl Ctx {
    fn language(&self, expr: Option<&str>) -> Result<Language> {
        match (&self.file, expr) {
            (Some(_), Some(_)) => Err(usage("give an expression or --file, not both")),
            (None, None) => Err(usage("missing language expression")),
            (None, Some(e)) => compile(&self.alphabet()?, e),
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
                let header = lines.next().unwrap_or_default();
                let letters = header
                    .strip_prefix("alphabet:")
                    .ok_or_else(|| usage("language file must start with `alphabet: <letters>`"))?
                    .trim();
                if self.alphabet.as_deref().is_some_and(|a| a != letters) {
                    return Err(usage("--alphabet disagrees with the file header"));
                }
                let alphabet = Alphabet::new(letters)?;
                let mut x = Language::empty(alphabet.clone());
                for line in lines {
                    x = x.union(&compile(&alphabet, line)?)?;
                }
                Ok(x)
            }
        }
    }

    fn alphabet(&self) -> Result<Alphabet> {
        let letters = self.alphabet.as_deref().ok_or_else(|| usage("missing --alphabet"))?;
        Alphabet::new(letters)
    }

    fn verified(&self, r: &mut Report, ok: impl FnOnce() -> bool) -> Result<()> {
        if self.verify {
            internal_check(ok(), "witness")?;
            r.push("witness_verified", true);
        }
        Ok(())
    }
}

fn words(a: &Alphabet, ws: &BTreeSet<Word>) -> Value {
    ws.iter().map(|w| Value::from(a.render(w))).collect()
}

fn lang_value(x: &Language) -> Value {
    match x.finite_words() {
        Ok(Some(ws)) => words(x.alphabet(), &ws),
        _ => x.describe().into(),
    }
}

fn pair(a: &Alphabet, u: &Word, v: &Word) -> Value {
    json!({ "x": a.render(u), "y": a.render(v) })
}

fn code_report(ctx: &Ctx, name: &'static str, x: &Language, v: &CodeVerdict) -> Result<Report> {
    let a = x.alphabet();
    let mut r = Report::new(name, Status::of(v.is_code)).list("trace", v.trace.iter().map(lang_value).collect());
    if let Some(w) = &v.witness {
        r.push("witness", w.render(a));
        ctx.verified(&mut r, || verify::factorization(x, w))?;
    }
    Ok(r)
}

/// Shortest `y ∈ X ∩ XA⁺` with its prefix in `X`.
fn prefix_witness(x: &Language) -> Result<Option<(Word, Word)>> {
    let a = x.alphabet().clone();
    let plus = Language::level(a.clone(), 1).concat(&Language::universal(a))?;
    let Some(y) = x.intersect(&x.concat(&plus)?)?.shortest_word()? else {
        return Ok(None);
    };
    let u = (0..y.len()).map(|n| Word(y.0[..n].to_vec())).find(|u| x.contains(u));
    Ok(u.map(|u| (u, y)))
}

fn require_kind(rel: EditRelation, kinds: &[EditKind]) -> Result<()> {
    if kinds.contains(&rel.kind) {
        Ok(())
    } else {
        let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
        Err(usage(format!("relation must be one of {}", names.join(", "))))
    }
}

fn count(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| n.to_string().into())
}

fn run(cli: Cli) -> Result<Report> {
    if let Some(n) = cli.max_states {
        if n == 0 {
            return Err(usage("--max-states must be positive"));
        }
        set_state_cap(n);
    }
    let ctx = Ctx { alphabet: cli.alphabet, file: cli.file, verify: cli.verify_witness };
    match cli.command {
        Command::Code { expr } => {
            let x = ctx.language(expr.as_deref())?;
            let v = sardinas_patterson(&x)?;
            code_report(&ctx, "code", &x, &v)
        }
        Command::Prefix { expr } => {
            let x = ctx.language(expr.as_deref())?;
            let prefix = is_prefix(&x)?;
            let suffix = is_suffix(&x)?;
            let mut r = Report::new("prefix", Status::of(prefix)).field("suffix", suffix).field("bifix", prefix && suffix);
            if let Some((u, y)) = prefix_witness(&x)? {
                r.push("witness", pair(x.alphabet(), &u, &y));
                ctx.verified(&mut r, || x.contains(&u) && x.contains(&y) && u != y && u.is_prefix_of(&y))?;
            }
            Ok(r)
        }
        Command::Measure { expr, dist, n } => {
            let x = ctx.language(expr.as_deref())?;
            let d = match dist {
                Some(text) => Distribution::parse(x.alphabet(), &text)?,
                None => Distribution::uniform(x.alphabet()),
            };
            let finite = x.is_finite()?;
            let mu = if finite { measure_finite(&x, &d)? } else { measure_partial(&x, &d, n)? };
            let mut r = Report::new("measure", Status::of(mu <= BigRational::one()))
                .field("distribution", d.to_string())
                .field("mu", mu.to_string())
                .field("approx", mu.to_f64());
            if !finite {
                r.push("words_up_to", n);
            }
            Ok(r)
        }
        Command::Complete { expr } => {
            let x = ctx.language(expr.as_deref())?;
            let complete = is_complete(&x)?;
            let mut r = Report::new("complete", Status::of(complete));
            if !complete {
                let w = find_non_factor(&x)?;
                r.push("non_factor", x.alphabet().render(&w));
                ctx.verified(&mut r, || !x.star().factors().contains(&w))?;
            }
            Ok(r)
        }
        Command::Maximal { expr } => {
            let x = ctx.language(expr.as_deref())?;
            let v = sardinas_patterson(&x)?;
            if let Some(w) = &v.witness {
                let mut r = Report::new("maximal", Status::Fails).field("reason", "not a code");
                r.push("witness", w.render(x.alphabet()));
                ctx.verified(&mut r, || verify::factorization(&x, w))?;
                return Ok(r);
            }
            if is_maximal_code(&x)? {
                return Ok(Report::new("maximal", Status::Holds));
            }
            let w = er_complete(&x)?.w;
            let mut r = Report::new("maximal", Status::Fails).field("extension", x.alphabet().render(&w));
            ctx.verified(&mut r, || verify::extension(&x, &w))?;
            Ok(r)
        }
        Command::Independent { expr, rel } => {
            let x = ctx.language(expr.as_deref())?;
            let rep = is_independent(&x, rel)?;
            let mut r = Report::new("independent", Status::of(rep.independent)).field("relation", rel.to_string());
            if let Some((u, v)) = &rep.witness {
                r.push("witness", pair(x.alphabet(), u, v));
                ctx.verified(&mut r, || verify::dependence(&x, rel, u, v))?;
            }
            Ok(r)
        }
        Command::Errcorrect { expr, rel } => {
            let x = ctx.language(expr.as_deref())?;
            let rep = is_error_correcting(&x, rel)?;
            let mut r = Report::new("errcorrect", Status::of(rep.correcting)).field("relation", rel.to_string());
            if let Some(c) = &rep.witness {
                let a = x.alphabet();
                r.push("witness", json!({ "x": a.render(&c.x), "y": a.render(&c.y), "common": a.render(&c.common) }));
                ctx.verified(&mut r, || verify::confusion(&x, rel, &c.x, &c.y, &c.common))?;
            }
            Ok(r)
        }
        Command::ImageCode { expr, rel, closure } => {
            let x = ctx.language(expr.as_deref())?;
            let (image, verdict) = match closure {
                ImageClosure::Hat => (hat_image(&x, rel)?, hat_image_is_code(&x, rel)?),
                ImageClosure::Bar => (underline_image(&x, rel)?, underline_image_is_code(&x, rel)?),
            };
            let mut r = code_report(&ctx, "image-code", &image, &verdict)?;
            r.push("image", lang_value(&image));
            Ok(r)
        }
        Command::Extend { expr, rel } => {
            let x = ctx.language(expr.as_deref())?;
            let w = witness_independent_extension(&x, rel)?;
            let mut r = Report::new("extend", Status::Holds).field("relation", rel.to_string()).field("word", x.alphabet().render(&w));
            ctx.verified(&mut r, || {
                let y = x.union(&Language::word(x.alphabet().clone(), w.clone()));
                verify::extension(&x, &w) && y.and_then(|y| is_independent(&y, rel)).is_ok_and(|r| r.independent)
            })?;
            Ok(r)
        }
        Command::ErComplete { expr } => {
            let x = ctx.language(expr.as_deref())?;
            let c = er_complete(&x)?;
            let mut r = Report::new("er-complete", Status::Holds)
                .field("w", x.alphabet().render(&c.w))
                .field("U", lang_value(&c.u))
                .field("Y", lang_value(&c.y));
            ctx.verified(&mut r, || {
                let complete = is_complete(&c.y).unwrap_or(false);
                let code = sardinas_patterson(&c.y).is_ok_and(|v| v.is_code);
                complete && code && x.is_subset(&c.y).unwrap_or(false)
            })?;
            Ok(r)
        }
        Command::Closed { expr, rel } => {
            let x = ctx.language(expr.as_deref())?;
            let rep = is_closed(&x, rel)?;
            let mut r = Report::new("closed", Status::of(rep.closed)).field("relation", rel.to_string());
            if let Some((u, y)) = &rep.witness {
                r.push("witness", pair(x.alphabet(), u, y));
                ctx.verified(&mut r, || verify::escape(&x, rel, u, y))?;
                if let Ok(family) = assert_empty_family(rel, None) {
                    r.push("family", format!("empty: {}", family.explanation));
                }
            }
            Ok(r)
        }
        Command::SigmaStar { word, k, limit } => {
            let a = ctx.alphabet()?;
            let w = a.parse_word(&word)?;
            let orbit = sigma_star(&a, &w, k)?;
            let mut r = Report::new("sigma-star", Status::Holds)
                .field("shape", orbit.to_string())
                .field("cardinality", count(orbit.cardinality()));
            if orbit.cardinality() <= limit {
                r.push("members", words(&a, &orbit.materialize()));
            }
            Ok(r)
        }
        Command::ClassifyClosed { expr, rel } => {
            require_kind(rel, &[EditKind::Substitution, EditKind::SubstitutionUpTo])?;
            let x = ctx.language(expr.as_deref())?;
            let a = x.alphabet();
            let (class, failure): (String, Option<(&str, Value)>) = if rel.kind == EditKind::Substitution {
                match classify_sigma_closed(&x, rel.k)? {
                    ClosedClassification::ShortSubset(k) => (format!("subset of A^<={k}"), None),
                    ClosedClassification::Even(n) => (format!("even words of length {n}"), None),
                    ClosedClassification::Odd(n) => (format!("odd words of length {n}"), None),
                    ClosedClassification::Full(n) => (format!("A^{n}"), None),
                    ClosedClassification::NotClosed { x: u, y } => ("not closed".into(), Some(("witness", pair(a, &u, &y)))),
                    ClosedClassification::NotCode(w) => ("not a code".into(), Some(("witness", w.render(a).into()))),
                }
            } else {
                match classify_Sigma_closed(&x, rel.k)? {
                    UpToSigmaClassification::Empty => ("empty".into(), None),
                    UpToSigmaClassification::Level(n) => (format!("A^{n}"), None),
                    UpToSigmaClassification::NotClosed { x: u, y } => ("not closed".into(), Some(("witness", pair(a, &u, &y)))),
                    UpToSigmaClassification::NotCode(w) => ("not a code".into(), Some(("witness", w.render(a).into()))),
                }
            };
            let mut r = Report::new("classify-closed", Status::of(failure.is_none()))
                .field("relation", rel.to_string())
                .field("class", class);
            if let Some((k, v)) = failure {
                r.push(k, v);
            }
            Ok(r)
        }
        Command::EnumDeltaClosed { k, limit } => {
            let a = ctx.alphabet()?;
            let codes = enumerate_delta_closed(k, &a, limit)?;
            let list: Vec<Value> = codes.iter().map(|c| words(&a, c)).collect();
            Ok(Report::new("enum-delta-closed", Status::Holds).field("count", codes.len()).list("codes", list))
        }
        Command::EmbedClosed { expr, rel } => {
            require_kind(rel, &[EditKind::Deletion, EditKind::Substitution])?;
            let x = ctx.language(expr.as_deref())?;
            let found = match rel.kind {
                EditKind::Deletion => embed_delta_closed_complete(&x, rel.k)?,
                _ => sigma_complete_embedding(&x, rel.k)?,
            };
            let list: Vec<Value> = found.iter().map(|c| words(x.alphabet(), c)).collect();
            Ok(Report::new("embed-closed", Status::of(!found.is_empty()))
                .field("relation", rel.to_string())
                .field("count", found.len())
                .list("embeddings", list))
        }
        Command::Simulate { code, rel, p, len, seed, trials, max_word_len } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(usage("--p must lie in [0, 1]"));
            }
            let x = ctx.language(code.as_deref())?;
            let cfg = ExperimentConfig { code: x, rel, p, len, seed, trials, max_word_len };
            let rep = run_experiment(&cfg)?;
            let t = &rep.tally;
            let silent = t.undetected + t.miscorrected;
            Ok(Report::new("simulate", Status::of(silent == 0))
                .field("relation", rep.relation.clone())
                .field("codewords", rep.codewords)
                .field("independent", rep.independent)
                .field("seed", rep.seed)
                .field("trials", rep.trials)
                .field("tally", serde_json::to_value(t).expect("tally serializes"))
                .field("detection_rate", rep.detection_rate)
                .field("correction_rate", rep.correction_rate)
                .field("ambiguity_rate", rep.ambiguity_rate)
                .field("exact_rate", rep.exact_rate))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit::USAGE } else { exit::HOLDS };
            return ExitCode::from(code as u8);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(r) => {
            print!("{}", r.render(format));
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            let text = error_report(&e, format);
            match format {
                Format::Json => print!("{text}"),
                Format::Text => eprint!("{text}"),
            }
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
