//! Finite group presentations: freely reduced words, a small text format,
//! and the built-in Cartwright–Steger presentation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One block `g^k` of a word, `k != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: usize, exponent: i64) -> Self {
        Syllable { generator, exponent }
    }
}

/// A freely reduced word: no zero exponents, no two adjacent syllables on
/// the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Freely reduces an arbitrary syllable sequence.
    pub fn from_syllables(raw: impl IntoIterator<Item = Syllable>) -> Self {
        free_reduce(raw)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of `|exponent|`.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.syllables.iter().chain(other.syllables.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.generator, -s.exponent))
                .collect(),
        }
    }

    /// Total exponent of each generator, i.e. the image in `Z^n`.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0; generators];
        for s in &self.syllables {
            sums[s.generator] += s.exponent;
        }
        sums
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|s| s.generator).max()
    }
}

/// Merges adjacent syllables on equal generators and drops zero exponents
/// until the sequence is stable.
pub fn free_reduce(raw: impl IntoIterator<Item = Syllable>) -> Word {
    let mut stack: Vec<Syllable> = Vec::new();
    for s in raw {
        if s.exponent == 0 {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.generator == s.generator => {
                top.exponent += s.exponent;
                if top.exponent == 0 {
                    stack.pop();
                }
            }
            _ => stack.push(s),
        }
    }
    Word { syllables: stack }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown generator `{name}` at line {line}, column {column}")]
    UnknownGenerator { name: String, line: usize, column: usize },
    #[error("zero exponent at line {line}, column {column}")]
    ZeroExponent { line: usize, column: usize },
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("relation {relation} uses generator index {index} but only {generators} generators exist")]
    GeneratorOutOfRange { relation: usize, index: usize, generators: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generator_names: Vec<String>,
    relations: Vec<Word>,
}

fn valid_name(name: &str) -> bool {
    let Some(first) = name.chars().next() else {
        return false;
    };
    !first.is_ascii_digit()
        && !first.is_whitespace()
        && !name.chars().any(|c| c.is_whitespace() || c == '^' || c == '#')
        && first != '-'
}

impl Presentation {
    pub fn new(
        generator_names: Vec<String>,
        relations: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        for (i, name) in generator_names.iter().enumerate() {
            if !valid_name(name) {
                return Err(PresentationError::InvalidName(name.clone()));
            }
            if generator_names[..i].contains(name) {
                return Err(PresentationError::DuplicateName(name.clone()));
            }
        }
        let n = generator_names.len();
        for (j, w) in relations.iter().enumerate() {
            if let Some(g) = w.max_generator().filter(|&g| g >= n) {
                return Err(PresentationError::GeneratorOutOfRange {
                    relation: j,
                    index: g,
                    generators: n,
                });
            }
        }
        let relations = relations.into_iter().map(|w| free_reduce(w.syllables)).collect();
        Ok(Presentation { generator_names, relations })
    }

    /// Free group on the given generator names.
    pub fn free(names: &[&str]) -> Result<Self, PresentationError> {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|g| g == name)
    }

    /// Renders a word with this presentation's generator names.
    pub fn format_word(&self, w: &Word) -> String {
        w.syllables
            .iter()
            .map(|s| {
                let name = &self.generator_names[s.generator];
                if s.exponent == 1 {
                    name.clone()
                } else {
                    format!("{name}^{}", s.exponent)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the `gens:` / `rel:` text format.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut names: Option<Vec<String>> = None;
        let mut relations = Vec::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = match raw_line.find('#') {
                Some(p) => &raw_line[..p],
                None => raw_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let body = line.trim_start();
            if let Some(rest) = body.strip_prefix("gens:") {
                if names.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate `gens:` line"));
                }
                let mut list = Vec::new();
                for (col, tok) in tokens(rest, indent + 5) {
                    if !valid_name(tok) {
                        return Err(syntax(line_no, col, &format!("invalid generator name `{tok}`")));
                    }
                    if list.iter().any(|n: &String| n == tok) {
                        return Err(PresentationError::DuplicateName(tok.to_string()));
                    }
                    list.push(tok.to_string());
                }
                names = Some(list);
            } else if let Some(rest) = body.strip_prefix("rel:") {
                let Some(gens) = names.as_ref() else {
                    return Err(syntax(line_no, indent + 1, "`rel:` before `gens:`"));
                };
                let mut raw = Vec::new();
                for (col, tok) in tokens(rest, indent + 4) {
                    raw.push(parse_token(tok, gens, line_no, col)?);
                }
                relations.push(free_reduce(raw));
            } else {
                return Err(syntax(line_no, indent + 1, "expected `gens:` or `rel:`"));
            }
        }
        let names = names.ok_or_else(|| syntax(1, 1, "missing `gens:` line"))?;
        Presentation::new(names, relations)
    }
}

fn syntax(line: usize, column: usize, message: &str) -> PresentationError {
    PresentationError::Syntax { line, column, message: message.to_string() }
}

/// Whitespace-separated tokens with their 1-based columns; `offset` is the
/// number of bytes preceding `s` on the line.
fn tokens(s: &str, offset: usize) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((offset + b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((offset + b + 1, &s[b..]));
    }
    out.into_iter()
}

fn parse_token(
    tok: &str,
    gens: &[String],
    line: usize,
    column: usize,
) -> Result<Syllable, PresentationError> {
    let (name, exponent) = match tok.split_once('^') {
        Some((name, exp)) => {
            let k: i64 = exp.parse().map_err(|_| {
                syntax(line, column + name.len() + 1, &format!("bad exponent `{exp}`"))
            })?;
            if k == 0 {
                return Err(PresentationError::ZeroExponent { line, column: column + name.len() + 1 });
            }
            (name, k)
        }
        None => (tok, 1),
    };
    if name.is_empty() {
        return Err(syntax(line, column, "missing generator name before `^`"));
    }
    let generator = gens.iter().position(|g| g == name).ok_or_else(|| {
        PresentationError::UnknownGenerator { name: name.to_string(), line, column }
    })?;
    Ok(Syllable::new(generator, exponent))
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.generator_names.join(" "))?;
        for w in &self.relations {
            writeln!(f, "rel: {}", self.format_word(w).trim_end())?;
        }
        Ok(())
    }
}

const CARTWRIGHT_STEGER: &str = include_str!("../data/cartwright_steger.grp");

/// The 3-generator, 12-relation presentation of the fundamental group of the
/// Cartwright–Steger surface, generators in the order `x, y, z`.
pub fn cartwright_steger() -> Presentation {
    Presentation::parse(CARTWRIGHT_STEGER).expect("built-in presentation parses")
}

/// The raw text of the built-in presentation.
pub fn cartwright_steger_text() -> &'static str {
    CARTWRIGHT_STEGER
}
