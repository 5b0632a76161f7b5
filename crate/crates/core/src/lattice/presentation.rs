use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{Family, Generator, GroupElement, Lattice, LatticeParams, Word};
use crate::error::{Error, Result};
use crate::quat::Quat;

/// The four factors of a norm-pl quaternion: z·y = ±x and ỹ·z̃ = ±x with
/// z, z̃ ∈ Ã and y, ỹ ∈ B̃.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DicksonFactorization {
    pub z: Quat,
    pub y: Quat,
    pub y_tilde: Quat,
    pub z_tilde: Quat,
}

/// Exhaustive factorization of x with |x|^2 = p·l in both orders. Fails
/// with an invariant error if either factorization is not unique.
pub fn dickson_factor(lattice: &Lattice, x: &Quat) -> Result<DicksonFactorization> {
    let params = lattice.params();
    let pl = BigInt::from(params.p()) * BigInt::from(params.l());
    let norm = x.norm2();
    if norm != pl {
        return Err(Error::WrongNorm {
            expected: pl.to_string(),
            actual: norm.to_string(),
        });
    }
    if !x.has_gamma_parity() {
        return Err(Error::NotInGamma {
            quat: Box::new(x.clone()),
            reason: crate::error::MembershipFailure::BadParity,
        });
    }
    let quats = |f: Family| -> Result<Vec<Quat>> {
        lattice
            .letters(f)
            .into_iter()
            .map(|g| lattice.letter_quat(g))
            .collect()
    };
    let a_all = quats(Family::A)?;
    let b_all = quats(Family::B)?;
    let neg = -x.clone();
    let matches = |q: &Quat| q == x || *q == neg;

    let mut zy = Vec::new();
    let mut yz = Vec::new();
    for z in &a_all {
        for y in &b_all {
            if matches(&(z * y)) {
                zy.push((z.clone(), y.clone()));
            }
            if matches(&(y * z)) {
                yz.push((y.clone(), z.clone()));
            }
        }
    }
    if zy.len() != 1 || yz.len() != 1 {
        return Err(Error::Invariant(format!(
            "factorization of {x} not unique: {} A·B and {} B·A factorizations",
            zy.len(),
            yz.len()
        )));
    }
    let (z, y) = zy.pop().unwrap();
    let (y_tilde, z_tilde) = yz.pop().unwrap();
    Ok(DicksonFactorization {
        z,
        y,
        y_tilde,
        z_tilde,
    })
}

/// A square of the complex, read as the relation a·b = b̃·ã: bottom edge a,
/// right edge b, left edge b̃, top edge ã.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub a: Generator,
    pub b: Generator,
    pub b_tilde: Generator,
    pub a_tilde: Generator,
}

impl Square {
    /// The four readings of the same square, one per corner. Each is again a
    /// valid relation a·b = b̃·ã.
    pub fn corners(&self) -> [Square; 4] {
        let Square {
            a,
            b,
            b_tilde: bt,
            a_tilde: at,
        } = *self;
        [
            Square {
                a,
                b,
                b_tilde: bt,
                a_tilde: at,
            },
            Square {
                a: a.inverse(),
                b: bt,
                b_tilde: b,
                a_tilde: at.inverse(),
            },
            Square {
                a: at,
                b: b.inverse(),
                b_tilde: bt.inverse(),
                a_tilde: a,
            },
            Square {
                a: at.inverse(),
                b: bt.inverse(),
                b_tilde: b.inverse(),
                a_tilde: a.inverse(),
            },
        ]
    }

    /// The corner reading with the smallest (a, b) pair.
    pub fn canonical(&self) -> Square {
        self.corners()
            .into_iter()
            .min_by_key(|s| (s.a, s.b))
            .unwrap()
    }

    /// a·b·ã⁻¹·b̃⁻¹
    pub fn relator(&self) -> Word {
        Word(vec![
            self.a,
            self.b,
            self.a_tilde.inverse(),
            self.b_tilde.inverse(),
        ])
    }

    /// Check the relation by quaternion multiplication.
    pub fn holds_in(&self, lattice: &Lattice) -> Result<bool> {
        let lhs = lattice.evaluate(&Word(vec![self.a, self.b]))?;
        let rhs = lattice.evaluate(&Word(vec![self.b_tilde, self.a_tilde]))?;
        Ok(lhs == rhs)
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} = {}{}", self.a, self.b, self.b_tilde, self.a_tilde)
    }
}

/// Generators plus the (p+1)(l+1)/4 square relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    lattice: Lattice,
    squares: Vec<Square>,
}

impl Presentation {
    pub fn derive(lattice: &Lattice) -> Result<Presentation> {
        let mut set = BTreeSet::new();
        for a in lattice.letters(Family::A) {
            for b in lattice.letters(Family::B) {
                set.insert(Self::square_at(lattice, a, b)?.canonical());
            }
        }
        let params = lattice.params();
        let expected = ((params.p() + 1) * (params.l() + 1) / 4) as usize;
        if set.len() != expected {
            return Err(Error::Invariant(format!(
                "expected {expected} squares, found {}",
                set.len()
            )));
        }
        Ok(Presentation {
            lattice: lattice.clone(),
            squares: set.into_iter().collect(),
        })
    }

    pub fn for_primes(p: u64, l: u64) -> Result<Presentation> {
        Presentation::derive(&Lattice::from_primes(p, l)?)
    }

    /// The square whose bottom-right corner reads (a, b).
    fn square_at(lattice: &Lattice, a: Generator, b: Generator) -> Result<Square> {
        let x = &lattice.letter_quat(a)? * &lattice.letter_quat(b)?;
        let f = dickson_factor(lattice, &x)?;
        let lookup = |q: &Quat| {
            lattice
                .letter_for_quat(q)
                .ok_or_else(|| Error::Invariant(format!("{q} is not a generator")))
        };
        Ok(Square {
            a,
            b,
            b_tilde: lookup(&f.y_tilde)?,
            a_tilde: lookup(&f.z_tilde)?,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn params(&self) -> LatticeParams {
        self.lattice.params()
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn relators(&self) -> Vec<Word> {
        self.squares.iter().map(Square::relator).collect()
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<GroupElement> {
        self.lattice.evaluate(w)
    }

    pub fn to_doc(&self) -> PresentationDoc {
        let mut generators = Vec::new();
        for family in [Family::A, Family::B] {
            for (i, rep) in self.lattice.reps(family).iter().enumerate() {
                let c = rep.to_i64s().expect("generator coordinates are tiny");
                generators.push(GeneratorDoc {
                    name: Generator::new(family, i + 1, false).to_string(),
                    quat: c,
                });
            }
        }
        PresentationDoc {
            p: self.params().p(),
            l: self.params().l(),
            generators,
            squares: self
                .squares
                .iter()
                .map(|s| SquareDoc {
                    a: s.a,
                    b: s.b,
                    b_tilde: s.b_tilde,
                    a_tilde: s.a_tilde,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable") + "\n"
    }

    /// Rebuild from the JSON schema, checking it agrees with a fresh
    /// derivation for the same primes.
    pub fn from_json(s: &str) -> Result<Presentation> {
        let doc: PresentationDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let derived = Presentation::for_primes(doc.p, doc.l)?;
        if derived.to_doc() != doc {
            return Err(Error::Golden(format!(
                "presentation document for ({}, {}) disagrees with derivation",
                doc.p, doc.l
            )));
        }
        Ok(derived)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params = self.params();
        out += &format!("Γ_{{{},{}}}\n", params.p(), params.l());
        for family in [Family::A, Family::B] {
            for (i, rep) in self.lattice.reps(family).iter().enumerate() {
                out += &format!("{}{} = ψ({})\n", family.prefix(), i + 1, rep);
            }
        }
        out += &format!("squares: {}\n", self.squares.len());
        for s in &self.squares {
            let rel = s
                .relator()
                .letters()
                .iter()
                .map(|g| g.to_string())
                .collect::<String>();
            out += &format!("{rel}    ({s})\n");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub quat: [i64; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDoc {
    pub a: Generator,
    pub b: Generator,
    pub b_tilde: Generator,
    pub a_tilde: Generator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub p: u64,
    pub l: u64,
    pub generators: Vec<GeneratorDoc>,
    pub squares: Vec<SquareDoc>,
}

/// True when two relators agree up to cyclic rotation and inversion.
pub fn relators_equivalent(x: &Word, y: &Word) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let n = x.len();
    let rotations = |w: &Word| -> Vec<Word> {
        (0..n.max(1))
            .map(|k| {
                Word(
                    w.letters()
                        .iter()
                        .cycle()
                        .skip(k)
                        .take(n)
                        .copied()
                        .collect(),
                )
            })
            .collect()
    };
    let yi = y.inverse();
    rotations(x).iter().any(|r| r == y || *r == yi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::from_primes(3, 5).unwrap()
    }

    #[test]
    fn dickson_example() {
        let f = dickson_factor(&lat(), &Quat::new(1, 2, 1, 3)).unwrap();
        assert_eq!(f.z, Quat::new(1, 0, -1, 1));
        assert_eq!(f.y, Quat::new(1, 2, 0, 0));
        assert_eq!(f.y_tilde, Quat::new(1, 0, 0, -2));
        assert_eq!(f.z_tilde, Quat::new(1, 0, -1, -1));
        assert_eq!(&f.z * &f.y, Quat::new(1, 2, 1, 3));
        assert_eq!(&f.y_tilde * &f.z_tilde, Quat::new(-1, -2, -1, -3));

        let f = dickson_factor(&lat(), &Quat::new(3, 2, 1, 1)).unwrap();
        assert_eq!(f.z, Quat::new(1, 0, 1, -1));
        assert_eq!(f.y, Quat::new(1, 0, 0, 2));
    }

    #[test]
    fn dickson_errors() {
        assert!(matches!(
            dickson_factor(&lat(), &Quat::new(1, 2, 0, 0)),
            Err(Error::WrongNorm { .. })
        ));
        // norm 15 = 1 + 4 + 9 + 1, wrong parity
        assert!(matches!(
            dickson_factor(&lat(), &Quat::new(1, 3, 2, 1)),
            Err(Error::NotInGamma { .. })
        ));
    }

    #[test]
    fn presentation_3_5_matches_known_relators() {
        let pres = Presentation::for_primes(3, 5).unwrap();
        assert_eq!(pres.squares().len(), 6);
        let known = [
            "a1,b1,a2,b2",
            "a1,b2,a2,b1'",
            "a1,b3,a2',b1",
            "a1,b3',a1,b2'",
            "a1,b1',a2',b3",
            "a2,b3,a2,b2'",
        ];
        let ours = pres.relators();
        for k in known {
            let k: Word = k.parse().unwrap();
            assert_eq!(
                ours.iter().filter(|r| relators_equivalent(r, &k)).count(),
                1,
                "{k}"
            );
        }
        for s in pres.squares() {
            assert!(s.holds_in(pres.lattice()).unwrap());
        }
    }

    #[test]
    fn square_counts() {
        assert_eq!(Presentation::for_primes(3, 7).unwrap().squares().len(), 8);
        assert_eq!(Presentation::for_primes(5, 7).unwrap().squares().len(), 12);
    }

    #[test]
    fn json_round_trip() {
        let pres = Presentation::for_primes(3, 5).unwrap();
        let json = pres.to_json();
        assert_eq!(Presentation::from_json(&json).unwrap(), pres);
        let tampered = json.replacen("\"b2'\"", "\"b2\"", 1);
        assert!(Presentation::from_json(&tampered).is_err());
    }

    #[test]
    fn relator_equivalence() {
        let x: Word = "a1,b2',a1,b3'".parse().unwrap();
        let y: Word = "a1,b3',a1,b2'".parse().unwrap();
        assert!(relators_equivalent(&x, &y));
        let z: Word = "b2,a1',b3,a1'".parse().unwrap();
        assert!(relators_equivalent(&x, &z));
        let no: Word = "a1,b2,a1,b3".parse().unwrap();
        assert!(!relators_equivalent(&x, &no));
    }
}
