//! Language expressions: `word | eps | empty | E|E | E.E | E* | (E)`.
//!
//! A maximal run of letters is one atom, so `ab*` means `(ab)*`. Two atoms
//! written side by side are concatenated as if joined by `.`. The keywords
//! `eps` and `empty` take precedence over letter runs spelling them.

use std::collections::BTreeSet;

use crate::automata::{Language, Nfa};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Empty,
    Epsilon,
    Word(Word),
    Union(Box<Expr>, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
}

impl Expr {
    fn has_star(&self) -> bool {
        match self {
            Expr::Empty | Expr::Epsilon | Expr::Word(_) => false,
            Expr::Union(a, b) | Expr::Concat(a, b) => a.has_star() || b.has_star(),
            Expr::Star(_) => true,
        }
    }

    fn finite_words(&self) -> BTreeSet<Word> {
        match self {
            Expr::Empty => BTreeSet::new(),
            Expr::Epsilon => BTreeSet::from([Word::empty()]),
            Expr::Word(w) => BTreeSet::from([w.clone()]),
            Expr::Union(a, b) => a.finite_words().union(&b.finite_words()).cloned().collect(),
            Expr::Concat(a, b) => {
                let right = b.finite_words();
                a.finite_words()
                    .iter()
                    .flat_map(|x| right.iter().map(move |y| x.concat(y)))
                    .collect()
            }
            Expr::Star(_) => unreachable!("star in finite evaluation"),
        }
    }

    fn to_nfa(&self, alphabet: &Alphabet) -> Nfa {
        match self {
            Expr::Empty => Nfa::new(alphabet.clone()),
            Expr::Epsilon => Nfa::epsilon(alphabet.clone()),
            Expr::Word(w) => Nfa::from_words(alphabet.clone(), [w]),
            Expr::Union(a, b) => a.to_nfa(alphabet).union(&b.to_nfa(alphabet)),
            Expr::Concat(a, b) => a.to_nfa(alphabet).concat(&b.to_nfa(alphabet)),
            Expr::Star(a) => a.to_nfa(alphabet).star(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word(Word),
    Epsilon,
    Empty,
    Bar,
    Dot,
    Star,
    Open,
    Close,
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn tokenize(alphabet: &Alphabet, text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '|' => Token::Bar,
            '.' => Token::Dot,
            '*' => Token::Star,
            '(' => Token::Open,
            ')' => Token::Close,
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"|.*()".contains(chars[i]) {
                    i += 1;
                }
                let run: String = chars[start..i].iter().collect();
                let tok = match run.as_str() {
                    "eps" => Token::Epsilon,
                    "empty" => Token::Empty,
                    _ => {
                        let mut letters = Vec::with_capacity(run.len());
                        for (off, ch) in run.chars().enumerate() {
                            let l = alphabet.index_of(ch).map_err(|_| {
                                parse_error(start + off, format!("letter {ch:?} is not in the alphabet"))
                            })?;
                            letters.push(l);
                        }
                        Token::Word(Word(letters))
                    }
                };
                out.push((start, tok));
                continue;
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn union(&mut self) -> Result<Expr> {
        let mut e = self.concat()?;
        while self.peek() == Some(&Token::Bar) {
            self.pos += 1;
            e = Expr::Union(Box::new(e), Box::new(self.concat()?));
        }
        Ok(e)
    }

    fn concat(&mut self) -> Result<Expr> {
        let mut e = self.postfix()?;
        loop {
            match self.peek() {
                Some(Token::Dot) => {
                    self.pos += 1;
                }
                Some(Token::Word(_) | Token::Epsilon | Token::Empty | Token::Open) => {}
                _ => return Ok(e),
            }
            e = Expr::Concat(Box::new(e), Box::new(self.postfix()?));
        }
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            e = Expr::Star(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Token::Word(w)) => Ok(Expr::Word(w)),
            Some(Token::Epsilon) => Ok(Expr::Epsilon),
            Some(Token::Empty) => Ok(Expr::Empty),
            Some(Token::Open) => {
                let e = self.union()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(parse_error(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(parse_error(at, format!("unexpected {t:?}"))),
            None => Err(parse_error(at, "unexpected end of expression")),
        }
    }
}

pub fn parse_expr(alphabet: &Alphabet, text: &str) -> Result<Expr> {
    let tokens = tokenize(alphabet, text)?;
    let mut p = Parser { tokens, pos: 0, end: text.chars().count() };
    let e = p.union()?;
    if p.pos < p.tokens.len() {
        return Err(parse_error(p.offset(), "trailing input"));
    }
    Ok(e)
}

/// Parses and compiles an expression; star-free expressions yield finite languages.
pub fn compile(alphabet: &Alphabet, text: &str) -> Result<Language> {
    let e = parse_expr(alphabet, text)?;
    if e.has_star() {
        Ok(Language::regular(e.to_nfa(alphabet)))
    } else {
        Ok(Language::finite(alphabet.clone(), e.finite_words()))
    }
}
