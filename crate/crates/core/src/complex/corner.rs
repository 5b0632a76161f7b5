use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{Family, Generator, Presentation, Square};

/// Which two edges of a square meet at the corner used as the lookup key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// (a, b)
    BottomRight,
    /// (a, b̃)
    BottomLeft,
    /// (ã, b̃)
    TopLeft,
    /// (ã, b)
    TopRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::BottomRight,
        Corner::BottomLeft,
        Corner::TopLeft,
        Corner::TopRight,
    ];

    fn key(self, s: &Square) -> (Generator, Generator) {
        match self {
            Corner::BottomRight => (s.a, s.b),
            Corner::BottomLeft => (s.a, s.b_tilde),
            Corner::TopLeft => (s.a_tilde, s.b_tilde),
            Corner::TopRight => (s.a_tilde, s.b),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Square completion: two adjacent edges determine the square.
///
/// Every geometric square contributes its four oriented readings, and each
/// map must hit every (A-letter, B-letter) pair exactly once. That is the
/// link condition for a complete square complex.
#[derive(Debug, Clone)]
pub struct CornerTable {
    maps: [BTreeMap<(Generator, Generator), Square>; 4],
}

impl CornerTable {
    pub fn build(pres: &Presentation) -> Result<CornerTable> {
        let mut maps: [BTreeMap<_, _>; 4] = Default::default();
        for sq in pres.squares() {
            for oriented in sq.corners() {
                for corner in Corner::ALL {
                    let key = corner.key(&oriented);
                    if let Some(prev) = maps[corner.index()].insert(key, oriented) {
                        return Err(Error::Invariant(format!(
                            "{corner:?} corner ({}, {}) lies on both {prev} and {oriented}",
                            key.0, key.1
                        )));
                    }
                }
            }
        }
        let lat = pres.lattice();
        let expected = lat.letters(Family::A).len() * lat.letters(Family::B).len();
        for corner in Corner::ALL {
            let got = maps[corner.index()].len();
            if got != expected {
                return Err(Error::Invariant(format!(
                    "{corner:?} corner map covers {got} of {expected} pairs"
                )));
            }
        }
        Ok(CornerTable { maps })
    }

    pub fn lookup(&self, corner: Corner, a: Generator, b: Generator) -> Option<&Square> {
        self.maps[corner.index()].get(&(a, b))
    }

    pub fn len(&self, corner: Corner) -> usize {
        self.maps[corner.index()].len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps[0].is_empty()
    }

    /// Each map is a bijection from letter pairs onto oriented squares, and
    /// all four maps see the same set of oriented squares.
    pub fn is_bijective(&self) -> bool {
        let values = |m: &BTreeMap<_, Square>| {
            let mut v: Vec<Square> = m.values().copied().collect();
            v.sort();
            v
        };
        let first = values(&self.maps[0]);
        let mut dedup = first.clone();
        dedup.dedup();
        dedup.len() == first.len() && self.maps.iter().all(|m| values(m) == first)
    }
}
