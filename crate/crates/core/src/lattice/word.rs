use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which free factor a generator belongs to: A acts on the p-tree, B on the
/// l-tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
}

impl Family {
    pub fn prefix(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
        }
    }

    pub fn other(self) -> Family {
        match self {
            Family::A => Family::B,
            Family::B => Family::A,
        }
    }
}

/// A generator letter such as `a2` or `b3'` (the prime marks an inverse).
/// Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub family: Family,
    pub index: usize,
    pub inverted: bool,
}

impl Generator {
    pub fn new(family: Family, index: usize, inverted: bool) -> Self {
        Generator {
            family,
            index,
            inverted,
        }
    }

    pub fn a(index: usize) -> Self {
        Generator::new(Family::A, index, false)
    }

    pub fn b(index: usize) -> Self {
        Generator::new(Family::B, index, false)
    }

    pub fn inverse(self) -> Self {
        Generator {
            inverted: !self.inverted,
            ..self
        }
    }

    /// Name without the inverse mark, e.g. `a2` for `a2'`.
    pub fn base_name(&self) -> String {
        format!("{}{}", self.family.prefix(), self.index)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.prefix(), self.index)?;
        if self.inverted {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Generator> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad generator letter {s:?}"));
        let (body, inverted) = match s.strip_suffix('\'') {
            Some(body) => (body, true),
            None => (s, false),
        };
        let mut chars = body.chars();
        let family = match chars.next() {
            Some('a') => Family::A,
            Some('b') => Family::B,
            _ => return Err(bad()),
        };
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Generator {
            family,
            index,
            inverted,
        })
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A sequence of generator letters, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn new(letters: Vec<Generator>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Cancel adjacent g g' pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Generator> = Vec::with_capacity(self.0.len());
        for &g in &self.0 {
            if out.last() == Some(&g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word(out)
    }

    pub fn is_pure(&self, family: Family) -> bool {
        self.0.iter().all(|g| g.family == family)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Parses comma-separated letters, e.g. `a1,a2',b3`. The empty string is
/// the empty word.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s.trim().is_empty() {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<_>>()
            .map(Word)
    }
}
