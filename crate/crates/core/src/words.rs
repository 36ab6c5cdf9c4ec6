//! Words and ordered variable words: substitution, composition, truncation.
//!
//! Letters are integers `0..k` for an alphabet of size `k`; the text rendering
//! maps `0..26` to `a..z` for display only. Variables render as `x0`, `x1`, ….
//! An ordered variable word with anchor set `Y = {y_0 < … < y_{n-1}}` has the
//! first occurrence of variable `j` at position `y_j`, and every occurrence of
//! variable `j` before the first occurrence of variable `j+1`.

use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from word construction and the word operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet size must be at least 1")]
    InvalidAlphabet,
    #[error("letter {letter} at position {position} is not below alphabet size {alphabet}")]
    InvalidLetter {
        letter: usize,
        position: usize,
        alphabet: usize,
    },
    #[error("variable x{variable} occurs at position {position}, after the first occurrence of x{next}")]
    OrderViolation {
        variable: usize,
        position: usize,
        next: usize,
    },
    #[error("variable x{0} never occurs although a higher variable does")]
    MissingVariable(usize),
    #[error("substitution word has {given} letters but the variable word has dimension {dimension}")]
    TooManyLetters { given: usize, dimension: usize },
    #[error("composition sequence has length {given}, expected the dimension {dimension}")]
    DimensionMismatch { given: usize, dimension: usize },
    #[error("index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("cannot parse {0:?} as a word")]
    ParseWord(String),
    #[error("cannot parse {0:?} as a token sequence")]
    ParseTokens(String),
}

/// A finite alphabet; its letters are the integers `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self, WordError> {
        if size == 0 {
            return Err(WordError::InvalidAlphabet);
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, letter: usize) -> bool {
        letter < self.size
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }
}

/// A token of a variable word: a variable kind or a letter.
///
/// `Var` sorts before `Letter`; the canonical enumeration order of
/// instantiation sequences depends on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Var(usize),
    Letter(usize),
}

impl Token {
    pub fn is_var(&self) -> bool {
        matches!(self, Token::Var(_))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Token::Letter(a) => write!(f, "{}", letter_to_string(a)),
            Token::Var(j) => write!(f, "x{j}"),
        }
    }
}

fn letter_to_string(a: usize) -> String {
    if a < 26 {
        ((b'a' + a as u8) as char).to_string()
    } else {
        format!("{{{a}}}")
    }
}

// Interchange form: letters below 26 are single-character strings, larger
// letters are {"l":i}, variables are {"x":j}.
impl Serialize for Token {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct VarRepr {
            x: usize,
        }
        #[derive(Serialize)]
        struct LetterRepr {
            l: usize,
        }
        match *self {
            Token::Letter(a) if a < 26 => {
                serializer.serialize_str(&((b'a' + a as u8) as char).to_string())
            }
            Token::Letter(l) => LetterRepr { l }.serialize(serializer),
            Token::Var(x) => VarRepr { x }.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TokenVisitor;

        impl<'de> Visitor<'de> for TokenVisitor {
            type Value = Token;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a single-character letter string, {\"l\":i}, or {\"x\":j}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Token, E> {
                let mut chars = v.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => {
                        Ok(Token::Letter((c as u8 - b'a') as usize))
                    }
                    (Some(c), None) if c.is_ascii_digit() => {
                        Ok(Token::Letter((c as u8 - b'0') as usize))
                    }
                    _ => Err(E::custom(format!("invalid letter token {v:?}"))),
                }
            }

            fn visit_map<A: de::MapAccess<'de>>(self, mut map: A) -> Result<Token, A::Error> {
                let key: String = map
                    .next_key()?
                    .ok_or_else(|| de::Error::custom("empty token object"))?;
                let value: usize = map.next_value()?;
                match key.as_str() {
                    "x" => Ok(Token::Var(value)),
                    "l" => Ok(Token::Letter(value)),
                    other => Err(de::Error::custom(format!("unknown token key {other:?}"))),
                }
            }
        }

        deserializer.deserialize_any(TokenVisitor)
    }
}

/// A finite word: a sequence of letters. The empty word is a value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>, alphabet: Alphabet) -> Result<Self, WordError> {
        for (position, &letter) in letters.iter().enumerate() {
            if !alphabet.contains(letter) {
                return Err(WordError::InvalidLetter {
                    letter,
                    position,
                    alphabet: alphabet.size(),
                });
            }
        }
        Ok(Word(letters))
    }

    /// Builds a word without checking letters against an alphabet.
    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    /// Parses `a..z` (as 0..26) and `0..9` (as 0..9) characters.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            } else if c.is_ascii_lowercase() {
                letters.push((c as u8 - b'a') as usize);
            } else if c.is_ascii_digit() {
                letters.push((c as u8 - b'0') as usize);
            } else {
                return Err(WordError::ParseWord(text.to_string()));
            }
        }
        Ok(Word(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.0.get(i).copied()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn count_letter(&self, letter: usize) -> usize {
        self.0.iter().filter(|&&a| a == letter).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.0 {
            write!(f, "{}", letter_to_string(a))?;
        }
        Ok(())
    }
}

// Words interchange as strings when every letter fits `a..z`, otherwise as
// arrays of integers.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.iter().all(|&a| a < 26) {
            serializer.serialize_str(&self.to_string())
        } else {
            let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
            for a in &self.0 {
                seq.serialize_element(a)?;
            }
            seq.end()
        }
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WordVisitor;

        impl<'de> Visitor<'de> for WordVisitor {
            type Value = Word;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a word string or an array of letters")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Word, E> {
                Word::parse(v).map_err(|e| E::custom(e.to_string()))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Word, A::Error> {
                let mut letters = Vec::new();
                while let Some(a) = seq.next_element::<usize>()? {
                    letters.push(a);
                }
                Ok(Word(letters))
            }
        }

        deserializer.deserialize_any(WordVisitor)
    }
}

/// An ordered variable word over an alphabet, together with its inferred
/// anchor set. Dimension 0 (no variables) is allowed; such a word is a plain
/// word and converts via [`VariableWord::to_word`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableWord {
    tokens: Vec<Token>,
    anchors: Vec<usize>,
    alphabet: Alphabet,
}

impl VariableWord {
    /// Validates a token sequence as an ordered variable word and infers its
    /// anchors as the first-occurrence positions of each variable kind.
    pub fn new(tokens: Vec<Token>, alphabet: Alphabet) -> Result<Self, WordError> {
        let mut first: Vec<Option<usize>> = Vec::new();
        let mut last: Vec<usize> = Vec::new();
        for (position, token) in tokens.iter().enumerate() {
            match *token {
                Token::Letter(letter) => {
                    if !alphabet.contains(letter) {
                        return Err(WordError::InvalidLetter {
                            letter,
                            position,
                            alphabet: alphabet.size(),
                        });
                    }
                }
                Token::Var(j) => {
                    if j >= first.len() {
                        first.resize(j + 1, None);
                        last.resize(j + 1, 0);
                    }
                    if first[j].is_none() {
                        first[j] = Some(position);
                    }
                    last[j] = position;
                }
            }
        }
        let mut anchors = Vec::with_capacity(first.len());
        for (j, f) in first.iter().enumerate() {
            match f {
                Some(p) => anchors.push(*p),
                None => return Err(WordError::MissingVariable(j)),
            }
        }
        for j in 0..anchors.len().saturating_sub(1) {
            if last[j] >= anchors[j + 1] {
                return Err(WordError::OrderViolation {
                    variable: j,
                    position: last[j],
                    next: j + 1,
                });
            }
        }
        Ok(VariableWord {
            tokens,
            anchors,
            alphabet,
        })
    }

    /// Parses a compact rendering such as `"abx0ax0bx1bb"` or `"x0 0"`.
    /// An `x` followed by digits is a variable; letters and digits are letters.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self, WordError> {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == 'x' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                let mut j = i + 1;
                let mut idx = 0usize;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    idx = idx * 10 + (chars[j] as u8 - b'0') as usize;
                    j += 1;
                }
                tokens.push(Token::Var(idx));
                i = j;
            } else if c.is_ascii_lowercase() {
                tokens.push(Token::Letter((c as u8 - b'a') as usize));
                i += 1;
            } else if c.is_ascii_digit() {
                tokens.push(Token::Letter((c as u8 - b'0') as usize));
                i += 1;
            } else {
                return Err(WordError::ParseTokens(text.to_string()));
            }
        }
        Self::new(tokens, alphabet)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Anchor positions `Y`, strictly increasing.
    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    /// Number of variable kinds.
    pub fn dimension(&self) -> usize {
        self.anchors.len()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// The underlying word, if there are no variables.
    pub fn to_word(&self) -> Option<Word> {
        if self.dimension() > 0 {
            return None;
        }
        let letters = self
            .tokens
            .iter()
            .map(|t| match *t {
                Token::Letter(a) => a,
                Token::Var(_) => unreachable!("dimension 0"),
            })
            .collect();
        Some(Word(letters))
    }

    /// Substitution `w[u]`: replaces each occurrence of variable `i < |u|` by
    /// `u(i)` and cuts just before the first occurrence of variable `|u|`.
    pub fn substitute(&self, u: &Word) -> Result<Word, WordError> {
        if u.len() > self.dimension() {
            return Err(WordError::TooManyLetters {
                given: u.len(),
                dimension: self.dimension(),
            });
        }
        for (position, &letter) in u.letters().iter().enumerate() {
            if !self.alphabet.contains(letter) {
                return Err(WordError::InvalidLetter {
                    letter,
                    position,
                    alphabet: self.alphabet.size(),
                });
            }
        }
        let cut = if u.len() < self.dimension() {
            self.anchors[u.len()]
        } else {
            self.tokens.len()
        };
        let letters = self.tokens[..cut]
            .iter()
            .map(|t| match *t {
                Token::Letter(a) => a,
                Token::Var(j) => u.letters()[j],
            })
            .collect();
        Ok(Word(letters))
    }

    /// In-place instantiation of every variable kind: occurrence of variable
    /// `i` becomes `u[i]`, a letter or a fresh variable. Fresh variable
    /// indices must form `0..d` for some `d >= 1`, and the result must again
    /// be an ordered variable word.
    pub fn compose(&self, u: &[Token]) -> Result<VariableWord, WordError> {
        if u.len() != self.dimension() {
            return Err(WordError::DimensionMismatch {
                given: u.len(),
                dimension: self.dimension(),
            });
        }
        let mut seen: Vec<bool> = Vec::new();
        for token in u {
            match *token {
                Token::Letter(letter) => {
                    if !self.alphabet.contains(letter) {
                        return Err(WordError::InvalidLetter {
                            letter,
                            position: 0,
                            alphabet: self.alphabet.size(),
                        });
                    }
                }
                Token::Var(j) => {
                    if j >= seen.len() {
                        seen.resize(j + 1, false);
                    }
                    seen[j] = true;
                }
            }
        }
        if seen.is_empty() {
            return Err(WordError::MissingVariable(0));
        }
        if let Some(gap) = seen.iter().position(|used| !used) {
            return Err(WordError::MissingVariable(gap));
        }
        let tokens = self
            .tokens
            .iter()
            .map(|t| match *t {
                Token::Letter(a) => Token::Letter(a),
                Token::Var(j) => u[j],
            })
            .collect();
        Self::new(tokens, self.alphabet)
    }

    /// Cuts just before the first occurrence of variable `j`, yielding a
    /// variable word of dimension `j`; `j = dimension` returns the word
    /// unchanged. The result for `j = 0` has no variables.
    pub fn truncate_before(&self, j: usize) -> Result<VariableWord, WordError> {
        if j > self.dimension() {
            return Err(WordError::IndexOutOfRange {
                index: j,
                dimension: self.dimension(),
            });
        }
        if j == self.dimension() {
            return Ok(self.clone());
        }
        let prefix = self.tokens[..self.anchors[j]].to_vec();
        Ok(Self::new(prefix, self.alphabet)
            .expect("a prefix of an ordered variable word cut at an anchor is ordered"))
    }
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tokens {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
