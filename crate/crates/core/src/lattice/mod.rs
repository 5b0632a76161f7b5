//! The lattice Γ = Γ_{p,l}: generators, canonical elements, words, normal
//! forms, the square presentation and the p-adic matrix embedding.

mod element;
mod normal_form;
mod padic;
mod presentation;
mod word;

pub use element::GroupElement;
pub use normal_form::Order;
pub use padic::{embed_quat, padic_embed, PadicMatrix, PadicMatrixPair};
pub use presentation::{
    dickson_factor, relators_equivalent, DicksonFactorization, GeneratorDoc, Presentation,
    PresentationDoc, Square, SquareDoc,
};
pub use word::{Family, Generator, Word};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::ensure_odd_prime;
use crate::quat::Quat;

/// A pair of distinct odd primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeParams {
    p: u64,
    l: u64,
}

impl LatticeParams {
    pub fn new(p: u64, l: u64) -> Result<Self> {
        ensure_odd_prime(p)?;
        ensure_odd_prime(l)?;
        if p == l {
            return Err(Error::InvalidParams(format!(
                "p and l must differ (both {p})"
            )));
        }
        Ok(LatticeParams { p, l })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn prime(&self, family: Family) -> u64 {
        match family {
            Family::A => self.p,
            Family::B => self.l,
        }
    }

    pub fn as_pair(&self) -> (u64, u64) {
        (self.p, self.l)
    }
}

/// All x with x0 > 0, |x|^2 = q and Γ̃ parity, sorted descending by
/// (x1, x2, x3). There are q + 1 of them.
pub fn enumerate_norm_family(q: u64) -> Result<Vec<Quat>> {
    ensure_odd_prime(q)?;
    let q = q as i64;
    let bound = q.sqrt();
    let mut out = Vec::new();
    for x1 in -bound..=bound {
        for x2 in -bound..=bound {
            for x3 in -bound..=bound {
                let rest = q - x1 * x1 - x2 * x2 - x3 * x3;
                if rest <= 0 {
                    continue;
                }
                let x0 = rest.sqrt();
                if x0 * x0 != rest {
                    continue;
                }
                let x = Quat::new(x0, x1, x2, x3);
                if x.has_gamma_parity() {
                    out.push((x1, x2, x3, x));
                }
            }
        }
    }
    out.sort_by_key(|t| std::cmp::Reverse((t.0, t.1, t.2)));
    Ok(out.into_iter().map(|t| t.3).collect())
}

/// The generator sets Ã and B̃ for the given primes.
pub fn enumerate_generators(params: LatticeParams) -> Result<(Vec<Quat>, Vec<Quat>)> {
    Ok((
        enumerate_norm_family(params.p)?,
        enumerate_norm_family(params.l)?,
    ))
}

/// One member of each conjugate pair {x, x̄}: the one whose first nonzero
/// imaginary coordinate is positive. Input order is preserved, so a family
/// sorted descending by (x1, x2, x3) yields a descending list.
pub fn choose_generator_representatives(family: &[Quat]) -> Vec<Quat> {
    use num_traits::{Signed, Zero};
    family
        .iter()
        .filter(|x| {
            x.coords()[1..]
                .iter()
                .find(|c| !c.is_zero())
                .is_some_and(|c| c.is_positive())
        })
        .cloned()
        .collect()
}

/// Parameters together with the chosen generator representatives. This is
/// the context every word-level operation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    params: LatticeParams,
    a_reps: Vec<Quat>,
    b_reps: Vec<Quat>,
}

impl Lattice {
    pub fn new(params: LatticeParams) -> Result<Self> {
        let (a, b) = enumerate_generators(params)?;
        Ok(Lattice {
            params,
            a_reps: choose_generator_representatives(&a),
            b_reps: choose_generator_representatives(&b),
        })
    }

    pub fn from_primes(p: u64, l: u64) -> Result<Self> {
        Lattice::new(LatticeParams::new(p, l)?)
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn reps(&self, family: Family) -> &[Quat] {
        match family {
            Family::A => &self.a_reps,
            Family::B => &self.b_reps,
        }
    }

    /// All letters of one family: g1, g1', g2, g2', ...
    pub fn letters(&self, family: Family) -> Vec<Generator> {
        (1..=self.reps(family).len())
            .flat_map(|i| [false, true].map(|inv| Generator::new(family, i, inv)))
            .collect()
    }

    /// Every letter of both families, A first.
    pub fn all_letters(&self) -> Vec<Generator> {
        let mut v = self.letters(Family::A);
        v.extend(self.letters(Family::B));
        v
    }

    /// The quaternion of a letter; inverses use the conjugate.
    pub fn letter_quat(&self, g: Generator) -> Result<Quat> {
        let reps = self.reps(g.family);
        let rep = g
            .index
            .checked_sub(1)
            .and_then(|i| reps.get(i))
            .ok_or_else(|| Error::LetterOutOfRange(g.to_string()))?;
        Ok(if g.inverted { rep.conj() } else { rep.clone() })
    }

    /// The letter whose quaternion equals `x` up to sign, if any.
    pub fn letter_for_quat(&self, x: &Quat) -> Option<Generator> {
        let target = x.clone().sign_normalized();
        self.all_letters().into_iter().find(|&g| {
            self.letter_quat(g)
                .map(|q| q.sign_normalized() == target)
                .unwrap_or(false)
        })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.params)
    }

    pub fn element(&self, x: &Quat) -> Result<GroupElement> {
        GroupElement::from_quat(self.params, x)
    }

    pub fn generator(&self, g: Generator) -> Result<GroupElement> {
        self.element(&self.letter_quat(g)?)
    }

    /// Product of the letters' quaternions, canonicalized.
    pub fn evaluate(&self, w: &Word) -> Result<GroupElement> {
        let mut acc = Quat::one();
        for &g in w.letters() {
            acc = &acc * &self.letter_quat(g)?;
            // keep coordinates small; scalars are central and irrelevant
            acc = acc.primitive()?;
        }
        self.element(&acc)
    }

    /// Every element within word length `radius` of the identity with one
    /// shortest word each, breadth-first, ties broken by letter order.
    pub fn ball(&self, radius: u32) -> Result<Vec<(Word, GroupElement)>> {
        let mut seen = HashSet::new();
        seen.insert(Quat::one());
        let mut out = vec![(Word::empty(), self.identity())];
        let gens: Vec<_> = self
            .all_letters()
            .into_iter()
            .map(|g| Ok((g, self.generator(g)?)))
            .collect::<Result<_>>()?;
        let mut frontier = 0;
        for _ in 0..radius {
            let end = out.len();
            for idx in frontier..end {
                for (g, ge) in &gens {
                    let next = out[idx].1.multiply(ge)?;
                    if seen.insert(next.rep().clone()) {
                        let mut letters = out[idx].0.letters().to_vec();
                        letters.push(*g);
                        out.push((Word(letters), next));
                    }
                }
            }
            frontier = end;
        }
        Ok(out)
    }

    pub(crate) fn prime_big(&self, family: Family) -> BigInt {
        BigInt::from(self.params.prime(family))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64, d: i64) -> Quat {
        Quat::new(a, b, c, d)
    }

    #[test]
    fn generator_sets_for_3_5() {
        let params = LatticeParams::new(3, 5).unwrap();
        let (a, b) = enumerate_generators(params).unwrap();
        assert_eq!(
            a,
            vec![
                q(1, 0, 1, 1),
                q(1, 0, 1, -1),
                q(1, 0, -1, 1),
                q(1, 0, -1, -1)
            ]
        );
        assert_eq!(b.len(), 6);
        for x in [
            q(1, 2, 0, 0),
            q(1, -2, 0, 0),
            q(1, 0, 2, 0),
            q(1, 0, -2, 0),
            q(1, 0, 0, 2),
            q(1, 0, 0, -2),
        ] {
            assert!(b.contains(&x));
        }
        assert_eq!(
            choose_generator_representatives(&a),
            vec![q(1, 0, 1, 1), q(1, 0, 1, -1)]
        );
        assert_eq!(
            choose_generator_representatives(&b),
            vec![q(1, 2, 0, 0), q(1, 0, 2, 0), q(1, 0, 0, 2)]
        );
    }

    #[test]
    fn seven_has_eight_generators() {
        let a = enumerate_norm_family(7).unwrap();
        assert_eq!(a.len(), 8);
        assert!(a.contains(&q(1, 2, 1, 1)));
        assert_eq!(choose_generator_representatives(&a).len(), 4);
    }

    #[test]
    fn jacobi_counts() {
        for p in [3u64, 5, 7, 11, 13, 17, 29, 37, 41] {
            assert_eq!(
                enumerate_norm_family(p).unwrap().len() as u64,
                p + 1,
                "p = {p}"
            );
        }
    }

    #[test]
    fn params_validation() {
        assert!(LatticeParams::new(3, 3).is_err());
        assert!(LatticeParams::new(2, 5).is_err());
        assert!(LatticeParams::new(3, 9).is_err());
        assert!(LatticeParams::new(3, 5).is_ok());
    }

    #[test]
    fn evaluate_examples() {
        let lat = Lattice::from_primes(3, 5).unwrap();
        let w: Word = "a1,a2',a1,a1".parse().unwrap();
        assert_eq!(lat.evaluate(&w).unwrap().rep(), &q(5, 6, 2, -4));
        let w: Word = "b3,b2',b3',b1".parse().unwrap();
        assert_eq!(lat.evaluate(&w).unwrap().rep(), &q(11, -18, -6, 12));
        assert!(lat.evaluate(&Word::empty()).unwrap().is_identity());
        let w: Word = "a3".parse().unwrap();
        assert!(matches!(lat.evaluate(&w), Err(Error::LetterOutOfRange(_))));
    }

    #[test]
    fn ball_sizes() {
        let lat = Lattice::from_primes(3, 5).unwrap();
        let b = lat.ball(2).unwrap();
        let by_len = |k: u32| b.iter().filter(|(_, e)| e.length() == k).count();
        assert_eq!(by_len(0), 1);
        assert_eq!(by_len(1), 10);
        // reduced pure words 4·3 and 6·5; each mixed element is one a·b
        assert_eq!(by_len(2), 12 + 30 + 24);
        for (w, e) in &b {
            assert_eq!(w.len() as u32, e.length());
            assert_eq!(&lat.evaluate(w).unwrap(), e);
        }
    }

    #[test]
    fn letter_lookup() {
        let lat = Lattice::from_primes(3, 5).unwrap();
        assert_eq!(
            lat.letter_for_quat(&q(1, 0, -1, 1)),
            Some(Generator::a(2).inverse())
        );
        assert_eq!(
            lat.letter_for_quat(&q(-1, 0, 0, 2)),
            Some(Generator::b(3).inverse())
        );
        assert_eq!(lat.letter_for_quat(&q(3, 2, 1, 1)), None);
    }
}
