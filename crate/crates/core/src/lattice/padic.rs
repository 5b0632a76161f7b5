use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{GroupElement, LatticeParams};
use crate::error::Result;
use crate::numtheory::{hensel_lift_cd, mod_inverse, valuation, PadicCD};
use crate::quat::Quat;

/// A 2×2 integer matrix with entries reduced into [0, modulus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicMatrix {
    pub modulus: BigInt,
    pub m: [[BigInt; 2]; 2],
}

impl PadicMatrix {
    pub fn new(modulus: BigInt, m: [[BigInt; 2]; 2]) -> Self {
        let m = m.map(|row| row.map(|e| e.mod_floor(&modulus)));
        PadicMatrix { modulus, m }
    }

    pub fn det(&self) -> BigInt {
        let m = &self.m;
        (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).mod_floor(&self.modulus)
    }

    pub fn mul(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        let (a, b) = (&self.m, &other.m);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        PadicMatrix::new(
            self.modulus.clone(),
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        )
    }

    pub fn scale(&self, s: &BigInt) -> PadicMatrix {
        PadicMatrix::new(
            self.modulus.clone(),
            self.m.clone().map(|row| row.map(|e| e * s)),
        )
    }

    /// Smallest p-adic valuation among the entries (k for the zero matrix).
    pub fn content_valuation(&self, p: u64) -> u32 {
        let k = valuation(&self.modulus, p);
        self.m
            .iter()
            .flatten()
            .filter(|e| !e.is_zero())
            .map(|e| valuation(e, p))
            .min()
            .unwrap_or(k)
    }

    /// Equality in PGL2: after removing the largest power of p dividing
    /// each side, the two agree up to a unit, at whatever precision remains.
    /// Returns None when no digits are left to compare.
    pub fn projectively_equal(&self, other: &PadicMatrix, p: u64) -> Option<bool> {
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        let k = valuation(&self.modulus, p);
        let (va, vb) = (self.content_valuation(p), other.content_valuation(p));
        let lost = va.max(vb);
        if lost >= k {
            return None;
        }
        let pb = BigInt::from(p);
        let m = pb.pow(k - lost);
        let strip = |x: &PadicMatrix, v: u32| {
            x.m.clone()
                .map(|r| r.map(|e| (e / pb.pow(v)).mod_floor(&m)))
        };
        let (a, b) = (strip(self, va), strip(other, vb));
        let (i, j) = (0..4)
            .map(|t| (t / 2, t % 2))
            .find(|&(i, j)| !b[i][j].is_multiple_of(&pb))
            .expect("a stripped matrix has a unit entry");
        let u = (&a[i][j] * mod_inverse(&b[i][j], &m)?).mod_floor(&m);
        let all = (0..4).all(|t| {
            let (i, j) = (t / 2, t % 2);
            a[i][j] == (&u * &b[i][j]).mod_floor(&m)
        });
        Some(all && !u.is_multiple_of(&pb))
    }

    pub fn is_scalar(&self) -> bool {
        self.m[0][1].is_zero() && self.m[1][0].is_zero() && self.m[0][0] == self.m[1][1]
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.m;
        write!(
            f,
            "[[{}, {}], [{}, {}]] mod {}",
            m[0][0], m[0][1], m[1][0], m[1][1], self.modulus
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicMatrixPair {
    pub k: u32,
    pub p_side: PadicMatrix,
    pub l_side: PadicMatrix,
}

/// The matrix
///
/// ```text
/// [ x0 + x1 c + x3 d    -x1 d + x2 + x3 c ]
/// [ -x1 d - x2 + x3 c    x0 - x1 c - x3 d ]
/// ```
///
/// reduced mod p^k. Its determinant is |x|^2 because c^2 + d^2 = -1.
pub fn embed_quat(x: &Quat, cd: &PadicCD) -> PadicMatrix {
    let [x0, x1, x2, x3] = x.coords();
    let (c, d) = (&cd.c, &cd.d);
    PadicMatrix::new(
        cd.modulus(),
        [
            [x0 + x1 * c + x3 * d, -(x1 * d) + x2 + x3 * c],
            [-(x1 * d) - x2 + x3 * c, x0 - x1 * c - x3 * d],
        ],
    )
}

/// Both local images of γ at precision k.
pub fn padic_embed(params: LatticeParams, gamma: &GroupElement, k: u32) -> Result<PadicMatrixPair> {
    let cp = hensel_lift_cd(params.p(), k)?;
    let cl = hensel_lift_cd(params.l(), k)?;
    Ok(PadicMatrixPair {
        k,
        p_side: embed_quat(gamma.rep(), &cp),
        l_side: embed_quat(gamma.rep(), &cl),
    })
}
