//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use codekit_core::channel::{run_experiment, ExperimentConfig};
use codekit_core::closed::{
    closure_star, embed_delta_closed_complete, enumerate_delta_closed, is_closed, is_maximal_delta_closed,
    sigma_star, OrbitShape,
};
use codekit_core::codes::{
    is_complete, measure_finite, sardinas_patterson, DoubleFactorization, Distribution,
};
use codekit_core::independence::{
    er_complete, hat_image, hat_image_is_code, is_error_correcting, is_independent, is_maximal_independent,
    underline_image, underline_image_is_code, witness_independent_extension,
};
use codekit_core::transducers::{EditKind, EditRelation};
use codekit_core::words::{parity_ones, Parity};
use codekit_core::{compile, Alphabet, Language, Word};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ab() -> Alphabet {
    Alphabet::new("ab").unwrap()
}

fn lang(a: &Alphabet, e: &str) -> Language {
    compile(a, e).unwrap()
}

fn word(a: &Alphabet, s: &str) -> Word {
    a.parse_word(s).unwrap()
}

fn rel(s: &str) -> EditRelation {
    s.parse().unwrap()
}

fn finite(a: &Alphabet, words: impl IntoIterator<Item = Word>) -> Language {
    Language::finite(a.clone(), words)
}

fn sp_correctness() -> Outcome {
    let a = ab();
    let x = lang(&a, "a|ab|ba");
    let v = sardinas_patterson(&x).map_err(|e| e.to_string())?;
    let wit = v.witness.ok_or("no witness for {a,ab,ba}")?;
    ensure!(!v.is_code && wit.verify(&x), "{{a,ab,ba}} verdict or witness wrong");
    ensure!(sardinas_patterson(&lang(&a, "a|b")).unwrap().is_code, "{{a,b}} not a code");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut codes, mut agree) = (0, 0);
    for _ in 0..200 {
        let set = common::random_set(&mut rng, &a, 6, 4);
        let l = finite(&a, set.iter().cloned());
        let v = sardinas_patterson(&l).unwrap();
        let oracle = !common::ambiguous_message(&set, &a, 10);
        let witness_ok = v.witness.as_ref().map_or(true, |w| w.verify(&l));
        if v.is_code == oracle && witness_ok {
            agree += 1;
        }
        codes += v.is_code as usize;
    }
    ensure!(agree == 200, "agreement {agree}/200");
    Ok(format!("witness {}; 200/200 random sets agree ({codes} codes)", wit.render(&a)))
}

fn anbn_pipeline() -> Outcome {
    let a = ab();
    let n_max = 8;
    let x = finite(&a, (2..=n_max).map(|n| Word([vec![0u8; n], vec![1u8; n]].concat())));
    let d1 = rel("delta:1");
    let hat = hat_image_is_code(&x, d1).unwrap();
    ensure!(hat.is_code, "hat image not a code");
    ensure!(hat.trace[1..].iter().all(|u| u.is_empty().unwrap()), "some U_p (p >= 1) is nonempty");
    ensure!(underline_image_is_code(&x, d1).unwrap().is_code, "underline image not a code");
    let bar = underline_image(&x, d1).unwrap();
    ensure!(is_independent(&bar, d1).unwrap().independent, "underline image not delta:1-independent");
    ensure!(is_error_correcting(&x, d1).unwrap().correcting, "not error-correcting");
    let u0: Vec<String> = hat.trace[0].finite_words().unwrap().unwrap().iter().map(|w| a.render(w)).collect();
    let b = finite(&a, [word(&a, "b")]);
    ensure!(
        hat.trace[0].equivalent(&b).unwrap(),
        "U_0 = {{{}}}, expected {{b}} (aab is a prefix of aabbb); other clauses hold, U_p = {{}} for p >= 1",
        u0.join(",")
    );
    Ok(format!("truncation n <= {n_max}: hat image is a code, U_0={{b}}, {} empty sets follow", hat.trace.len() - 1))
}

fn closed_code_suite() -> Outcome {
    let a = ab();
    let x = lang(&a, "aa|ab|bb|aaaab|abbbb");
    ensure!(sardinas_patterson(&x).unwrap().is_code, "not a code");
    ensure!(is_closed(&x, rel("delta:3")).unwrap().closed, "not delta:3-closed");
    let mu = measure_finite(&x, &Distribution::uniform(&a)).unwrap();
    ensure!(mu == BigRational::new(13.into(), 16.into()), "measure {mu}");
    ensure!(!is_complete(&x).unwrap(), "complete");
    ensure!(is_maximal_delta_closed(&x, 3).unwrap().maximal, "not maximal");
    ensure!(embed_delta_closed_complete(&x, 3).unwrap().is_empty(), "has a complete embedding");
    Ok(format!("code, delta:3-closed, mu = {mu}, non-complete, maximal, no complete embedding"))
}

fn edit_conformance() -> Outcome {
    let mut checked = 0u64;
    for (letters, max) in [("ab", 7), ("abc", 7)] {
        let a = Alphabet::new(letters).unwrap();
        let words = a.words_up_to(max);
        for kind in EditKind::ALL {
            for k in 1..=3 {
                let r = EditRelation::new(kind, k).unwrap();
                let t = r.transducer(&a);
                for w in &words {
                    let got = t.image_word(w).unwrap();
                    let want = common::edit_image(&a, kind, k, w);
                    ensure!(got == want, "{r} on {} over {letters}: {} vs {} words", a.render(w), got.len(), want.len());
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (relation, word) pairs, zero discrepancies"))
}

fn sigma_closed_forms() -> Outcome {
    let mut checked = 0u64;
    for (letters, max_len, max_k) in [("ab", 10, 4), ("abc", 6, 3)] {
        let a = Alphabet::new(letters).unwrap();
        for k in 1..=max_k {
            let r = EditRelation::new(EditKind::Substitution, k).unwrap();
            // σ_k is symmetric, so orbits partition each level
            let mut class_of: HashMap<Word, usize> = HashMap::new();
            let mut classes: Vec<BTreeSet<Word>> = Vec::new();
            for w in a.words_up_to(max_len) {
                let id = match class_of.get(&w) {
                    Some(&id) => id,
                    None => {
                        let orbit = closure_star(&a, &BTreeSet::from([w.clone()]), r).unwrap();
                        for u in &orbit {
                            class_of.insert(u.clone(), classes.len());
                        }
                        classes.push(orbit);
                        classes.len() - 1
                    }
                };
                let o = sigma_star(&a, &w, k).unwrap();
                let bfs = &classes[id];
                ensure!(o.materialize() == *bfs, "{letters} k={k} w={}: shape {o} disagrees with BFS", a.render(&w));
                ensure!(o.cardinality() == bfs.len() as u128, "cardinality mismatch at {}", a.render(&w));
                let n = w.len() as u32;
                let expected = match o.shape {
                    OrbitShape::Singleton(_) => 1,
                    OrbitShape::Pair(..) => 2,
                    OrbitShape::Parity(..) => 1u128 << (n - 1),
                    OrbitShape::Full(_) => (a.size() as u128).pow(n),
                };
                ensure!(o.cardinality() == expected, "unexpected cardinality at {}", a.render(&w));
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (word, k) pairs, zero discrepancies"))
}

fn independence_battery() -> Outcome {
    let a = ab();
    let x = lang(&a, "(ba)*.(a|bb)");
    for r in ["sigma:1", "delta:1", "iota:1", "S:1:bar", "Lambda:1:bar"] {
        ensure!(is_independent(&x, rel(r)).unwrap().independent, "prefix code not {r}-independent");
        ensure!(is_maximal_independent(&x, rel(r)).unwrap(), "prefix code not maximal for {r}");
    }
    for n in 1..=5 {
        let level = Language::level(a.clone(), n);
        for k in 1..=3 {
            let sig = EditRelation::new(EditKind::SubstitutionUpTo, k).unwrap();
            let rep = is_independent(&level, sig).unwrap();
            ensure!(!rep.independent, "A^{n} is {sig}-independent");
            let (u, v) = rep.witness.unwrap();
            ensure!(sig.apply_word(&a, &u).unwrap().contains(&v), "bad witness for A^{n}");
            let io = EditRelation::new(EditKind::Insertion, k).unwrap();
            ensure!(is_independent(&level, io).unwrap().independent, "A^{n} is {io}-dependent");
        }
    }
    let bifix = lang(&a, "a.b*.a|b.a*.b");
    ensure!(is_independent(&bifix, rel("sigma:1")).unwrap().independent, "bifix code dependent");
    ensure!(is_maximal_independent(&bifix, rel("sigma:1")).unwrap(), "bifix code not maximal");
    let truncated = finite(&a, bifix.words_up_to(8).unwrap());
    let rep = is_error_correcting(&truncated, rel("sigma:1")).unwrap();
    let c = rep.witness.ok_or("bifix truncation is error-correcting")?;
    ensure!(c.common == word(&a, "ab"), "witness {} instead of ab", a.render(&c.common));
    Ok(format!(
        "prefix code independent and maximal for 5 relations; A^n checks n<=5, k<=3; ab in image of {} and {}",
        a.render(&c.x),
        a.render(&c.y)
    ))
}

fn random_code(rng: &mut impl Rng, a: &Alphabet, accept: impl Fn(&Language) -> bool) -> Language {
    loop {
        let l = finite(a, common::random_set(rng, a, 6, 4));
        if sardinas_patterson(&l).unwrap().is_code && accept(&l) {
            return l;
        }
    }
}

fn constructions() -> Outcome {
    let a = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rels = ["delta:1", "iota:1", "sigma:1", "Delta:2", "S:1", "Lambda:1", "sigma:2"].map(rel);
    let mut extended = 0;
    for i in 0..50 {
        let x = random_code(&mut rng, &a, |l| !is_complete(l).unwrap());
        let c = er_complete(&x).map_err(|e| format!("code {i}: {e}"))?;
        ensure!(is_complete(&c.y).unwrap(), "completion {i} not complete");
        ensure!(sardinas_patterson(&c.y).unwrap().is_code, "completion {i} not a code");
        ensure!(x.is_subset(&c.y).unwrap(), "completion {i} lost words");
        for r in rels {
            if !is_independent(&x, r).unwrap().independent {
                continue;
            }
            let w = witness_independent_extension(&x, r).map_err(|e| format!("code {i}, {r}: {e}"))?;
            let y = x.union(&Language::word(a.clone(), w.clone())).unwrap();
            ensure!(!x.contains(&w), "extension word already present");
            ensure!(sardinas_patterson(&y).unwrap().is_code, "extended set not a code");
            ensure!(is_independent(&y, r).unwrap().independent, "extended set not independent");
            extended += 1;
        }
    }
    Ok(format!("50 completions verified; {extended} independent extensions verified"))
}

fn closed_family_emptiness() -> Outcome {
    let a = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checks = 0;
    for _ in 0..100 {
        let x = random_code(&mut rng, &a, |_| true);
        for kind in [EditKind::Insertion, EditKind::DeletionUpTo, EditKind::Indel, EditKind::Levenshtein] {
            for k in 1..=3 {
                let r = EditRelation::new(kind, k).unwrap();
                let rep = is_closed(&x, r).unwrap();
                let (u, y) = rep.witness.clone().ok_or(format!("{r}-closed code found"))?;
                ensure!(!rep.closed, "{r}: verdict closed");
                ensure!(x.contains(&u) && !x.contains(&y), "{r}: witness membership");
                ensure!(r.apply_word(&a, &u).unwrap().contains(&y), "{r}: witness not an image");
                checks += 1;
            }
        }
    }
    ensure!(enumerate_delta_closed(1, &a, None).unwrap().is_empty(), "delta:1-closed code found");
    let two = enumerate_delta_closed(2, &a, None).unwrap();
    let expected: Vec<BTreeSet<Word>> = [vec!["a"], vec!["b"], vec!["a", "b"]]
        .iter()
        .map(|ws| ws.iter().map(|s| word(&a, s)).collect())
        .collect();
    ensure!(two == expected, "delta:2 family has {} codes", two.len());
    Ok(format!("{checks} non-closed verdicts with witnesses; delta:1 family empty; delta:2 family = {{a}}, {{b}}, {{a,b}}"))
}

fn simulator() -> Outcome {
    let a = ab();
    let cfg = ExperimentConfig {
        code: lang(&a, "aabbb|bbbbaa"),
        rel: rel("Delta:2"),
        p: 1.0,
        len: 100,
        seed: 42,
        trials: 10,
        max_word_len: None,
    };
    let r = run_experiment(&cfg).unwrap();
    ensure!(r.tally.blocks == 1000, "{} blocks", r.tally.blocks);
    ensure!(r.correction_rate == Some(1.0), "correction rate {:?}", r.correction_rate);
    ensure!(r.tally.ambiguous == 0, "{} ambiguous", r.tally.ambiguous);
    let cfg6 = ExperimentConfig { code: lang(&a, "aaaa|aaab|abb|bab"), rel: rel("delta:1"), ..cfg.clone() };
    let r6 = run_experiment(&cfg6).unwrap();
    let t = &r6.tally;
    ensure!(r6.independent, "example code not independent");
    ensure!(t.undetected == 0 && t.miscorrected == 0, "silent errors: {t:?}");
    ensure!(t.corrupted == t.detected + t.corrected + t.ambiguous, "unaccounted corrupted blocks");
    ensure!(t.ambiguous > 0, "no ambiguous outcome");
    ensure!(run_experiment(&cfg6).unwrap().tally == *t, "same seed, different report");
    ensure!(run_experiment(&cfg).unwrap().tally == r.tally, "same seed, different report");
    Ok(format!(
        "correction rate 1 over {} corrupted blocks; second code: {} corrected, {} ambiguous, 0 silent",
        r.tally.corrupted, t.corrected, t.ambiguous
    ))
}

fn parity_invariants() -> Outcome {
    let a = Alphabet::new("01").unwrap();
    let mut instances = 0u64;
    for k in [2usize, 4] {
        let r = EditRelation::new(EditKind::Substitution, k).unwrap();
        let mut orbits: HashMap<(usize, Parity), BTreeSet<Word>> = HashMap::new();
        for w in a.words_up_to(8).into_iter().filter(|w| w.len() > k) {
            let pw = parity_ones(&a, &w).unwrap();
            let orbit = closure_star(&a, &BTreeSet::from([w.clone()]), r).unwrap();
            for u in &orbit {
                let diff = u.count(1) as i64 - w.count(1) as i64;
                ensure!(diff % 2 == 0, "parity changes from {} to {}", a.render(&w), a.render(u));
                instances += 1;
            }
            orbits.entry((w.len(), pw)).or_insert(orbit);
        }
        for ((n, _), orbit) in &orbits {
            for v in a.words_up_to(n - 1).into_iter().filter(|v| !v.is_empty()) {
                let mut set = orbit.clone();
                set.insert(v.clone());
                let l = finite(&a, set);
                let verdict = sardinas_patterson(&l).unwrap();
                ensure!(!verdict.is_code, "orbit of length {n} with {} is a code (k={k})", a.render(&v));
                let wit: DoubleFactorization = verdict.witness.unwrap();
                ensure!(wit.verify(&l), "bad witness");
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances, zero counterexamples"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Sardinas-Patterson correctness", sp_correctness),
        ("a^n b^n pipeline under delta:1", anbn_pipeline),
        ("delta:3-closed code {a2,ab,b2,a4b,ab4}", closed_code_suite),
        ("edit-image conformance", edit_conformance),
        ("sigma_k* closed forms", sigma_closed_forms),
        ("independence battery", independence_battery),
        ("completion constructions", constructions),
        ("closed-family emptiness", closed_family_emptiness),
        ("channel simulator guarantees", simulator),
        ("parity invariants", parity_invariants),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|s| !s.starts_with('-')).collect();
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        total += took;
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} [{name}] ({:.1}s): {detail}", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} [{name}] ({:.1}s): {why}", took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.1}s", total.as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
