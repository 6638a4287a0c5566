use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sieve::SieveSegment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Plus,
    Minus,
    Any,
}

/// Which sequence a pattern is read against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignField {
    /// `+` means λ(n) = +1, `-` means λ(n) = −1.
    Lambda,
    /// `+` means μ²(n) = 1, `-` means μ²(n) = 0.
    Squarefree,
}

impl SignField {
    /// `true` where the field reads as `-`.
    #[inline]
    pub(crate) fn minus_at(self, segment: &SieveSegment, i: usize) -> bool {
        match self {
            SignField::Lambda => segment.lambda_bit_at(i),
            SignField::Squarefree => segment.mu_at(i) == 0,
        }
    }
}

impl FromStr for SignField {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" | "liouville" => Ok(SignField::Lambda),
            "mu2" | "squarefree" => Ok(SignField::Squarefree),
            other => Err(LabError::param("fn", format!("unknown field `{other}`"))),
        }
    }
}

/// A string over `{+, -, *}` with one marked position.
///
/// `n` matches when the symbol at offset `i` from the marker agrees with the
/// field at `n + i` for every non-`*` symbol, and `n` exceeds the number of
/// symbols left of the marker. Textual form puts `^` (or `∨`) in front of the
/// marked symbol: `"-*^+"` constrains `n - 2` and `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    symbols: Vec<Symbol>,
    marker: usize,
}

pub const MAX_PATTERN_LEN: usize = 64;

impl SignPattern {
    pub fn new(symbols: Vec<Symbol>, marker: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(LabError::param("pattern", "no symbols"));
        }
        if symbols.len() > MAX_PATTERN_LEN {
            return Err(LabError::param(
                "pattern",
                format!("longer than {MAX_PATTERN_LEN} symbols"),
            ));
        }
        if marker >= symbols.len() {
            return Err(LabError::param("pattern", "marker past the last symbol"));
        }
        Ok(SignPattern { symbols, marker })
    }

    /// `len` `+` symbols with the marker in the middle-left position `marker`.
    pub fn run(len: usize, marker: usize) -> Result<Self> {
        SignPattern::new(vec![Symbol::Plus; len], marker)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of symbols left of the marker.
    pub fn left(&self) -> u64 {
        self.marker as u64
    }

    /// Number of symbols right of the marker.
    pub fn right(&self) -> u64 {
        (self.symbols.len() - self.marker - 1) as u64
    }

    pub fn is_unconstrained(&self) -> bool {
        self.symbols.iter().all(|&s| s == Symbol::Any)
    }

    /// `(care, want)`: bit `j` of `care` is set when symbol `j` is not `*`,
    /// and bit `j` of `want` when it is `-`.
    pub(crate) fn masks(&self) -> (u64, u64) {
        let mut care = 0u64;
        let mut want = 0u64;
        for (j, s) in self.symbols.iter().enumerate() {
            match s {
                Symbol::Plus => care |= 1 << j,
                Symbol::Minus => {
                    care |= 1 << j;
                    want |= 1 << j;
                }
                Symbol::Any => {}
            }
        }
        (care, want)
    }

    /// All `2^len` patterns of `+`/`-` with the marker at `marker`.
    pub fn all_signs(len: usize, marker: usize) -> Result<Vec<Self>> {
        if len > 16 {
            return Err(LabError::param("len", "enumeration capped at 16 symbols"));
        }
        (0..1u32 << len)
            .map(|bits| {
                let symbols = (0..len)
                    .map(|j| {
                        if bits >> (len - 1 - j) & 1 == 1 {
                            Symbol::Minus
                        } else {
                            Symbol::Plus
                        }
                    })
                    .collect();
                SignPattern::new(symbols, marker)
            })
            .collect()
    }
}

impl FromStr for SignPattern {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut marker = None;
        for c in s.chars() {
            match c {
                '^' | '∨' => {
                    if marker.is_some() {
                        return Err(LabError::param("pattern", "more than one marker"));
                    }
                    marker = Some(symbols.len());
                }
                '+' => symbols.push(Symbol::Plus),
                '-' | '−' => symbols.push(Symbol::Minus),
                '*' | '∗' => symbols.push(Symbol::Any),
                c if c.is_whitespace() => {}
                other => {
                    return Err(LabError::param(
                        "pattern",
                        format!("unexpected character `{other}` in `{s}`"),
                    ))
                }
            }
        }
        let marker = marker.ok_or_else(|| LabError::param("pattern", "missing `^` marker"))?;
        SignPattern::new(symbols, marker)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, s) in self.symbols.iter().enumerate() {
            if j == self.marker {
                f.write_str("^")?;
            }
            f.write_str(match s {
                Symbol::Plus => "+",
                Symbol::Minus => "-",
                Symbol::Any => "*",
            })?;
        }
        Ok(())
    }
}

impl Serialize for SignPattern {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
