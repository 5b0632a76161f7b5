use super::{Family, Generator, GroupElement, Lattice, Word};
use crate::error::{Error, Result};

/// Which family's letters come first in a normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// β·α: all B-letters, then all A-letters.
    BThenA,
    /// α·β: all A-letters, then all B-letters.
    AThenB,
}

impl Lattice {
    /// Split off the last letter of the given family: returns (g, rest) with
    /// rest · g = γ and ℓ(rest) = ℓ(γ) - 1.
    ///
    /// The letter is the unique g with x·ḡ divisible by the family's prime.
    /// All candidates are tried and uniqueness is checked.
    pub fn peel(&self, gamma: &GroupElement, family: Family) -> Result<(Generator, GroupElement)> {
        if gamma.params() != self.params() {
            return Err(Error::MixedParams(
                gamma.params().as_pair(),
                self.params().as_pair(),
            ));
        }
        if gamma.exponent(family) == 0 {
            return Err(Error::Precondition(format!(
                "{gamma} has no {} part to peel",
                family.prefix()
            )));
        }
        let q = self.prime_big(family);
        let mut hit: Option<(Generator, _)> = None;
        for g in self.letters(family) {
            let prod = gamma.rep() * &self.letter_quat(g)?.conj();
            if let Some(quotient) = prod.div_exact(&q) {
                if let Some((prev, _)) = hit {
                    return Err(Error::Invariant(format!(
                        "peel of {gamma}: both {prev} and {g} divide"
                    )));
                }
                hit = Some((g, quotient));
            }
        }
        let (g, quotient) = hit.ok_or_else(|| {
            Error::Invariant(format!(
                "peel of {gamma}: no {} letter divides",
                family.prefix()
            ))
        })?;
        let rest = self
            .element(&quotient)
            .map_err(|e| Error::Invariant(format!("peel remainder left Γ: {e}")))?;
        if rest.length() + 1 != gamma.length()
            || rest.exponent(family) + 1 != gamma.exponent(family)
        {
            return Err(Error::Invariant(format!(
                "peel of {gamma} did not shorten by one"
            )));
        }
        Ok((g, rest))
    }

    /// The unique reduced word for γ with the two families separated.
    pub fn normal_form(&self, gamma: &GroupElement, order: Order) -> Result<Word> {
        // peel the trailing family first
        let (tail, head) = match order {
            Order::BThenA => (Family::A, Family::B),
            Order::AThenB => (Family::B, Family::A),
        };
        let mut tail_letters = Vec::with_capacity(gamma.exponent(tail) as usize);
        let mut head_letters = Vec::with_capacity(gamma.exponent(head) as usize);
        let mut cur = gamma.clone();
        while cur.exponent(tail) > 0 {
            let (g, rest) = self.peel(&cur, tail)?;
            tail_letters.push(g);
            cur = rest;
        }
        while cur.exponent(head) > 0 {
            let (g, rest) = self.peel(&cur, head)?;
            head_letters.push(g);
            cur = rest;
        }
        if !cur.is_identity() {
            return Err(Error::Invariant(format!(
                "normal form of {gamma} did not terminate"
            )));
        }
        head_letters.reverse();
        tail_letters.reverse();
        head_letters.extend(tail_letters);
        Ok(Word(head_letters))
    }
}
