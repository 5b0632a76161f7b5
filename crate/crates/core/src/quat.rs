//! Exact integer quaternions.
//!
//! Everything here is arbitrary precision. Norms of lattice elements grow as
//! p^r l^s, and fixed-width intermediates overflow long before the searches
//! in this crate run out of interesting cases.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer quaternion x0 + x1 i + x2 j + x3 k.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quat([BigInt; 4]);

impl Quat {
    pub fn new(
        x0: impl Into<BigInt>,
        x1: impl Into<BigInt>,
        x2: impl Into<BigInt>,
        x3: impl Into<BigInt>,
    ) -> Self {
        Quat([x0.into(), x1.into(), x2.into(), x3.into()])
    }

    pub fn from_coords(coords: [BigInt; 4]) -> Self {
        Quat(coords)
    }

    pub fn zero() -> Self {
        Quat::new(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Quat::new(1, 0, 0, 0)
    }

    pub fn scalar(s: impl Into<BigInt>) -> Self {
        Quat::new(s, 0, 0, 0)
    }

    #[inline]
    pub fn coords(&self) -> &[BigInt; 4] {
        &self.0
    }

    #[inline]
    pub fn coord(&self, i: usize) -> &BigInt {
        &self.0[i]
    }

    /// Coordinates as i64, if they all fit.
    pub fn to_i64s(&self) -> Option<[i64; 4]> {
        use num_traits::ToPrimitive;
        Some([
            self.0[0].to_i64()?,
            self.0[1].to_i64()?,
            self.0[2].to_i64()?,
            self.0[3].to_i64()?,
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// True when the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.0[1..].iter().all(Zero::is_zero)
    }

    pub fn re(&self) -> &BigInt {
        &self.0[0]
    }

    pub fn conj(&self) -> Quat {
        Quat([self.0[0].clone(), -&self.0[1], -&self.0[2], -&self.0[3]])
    }

    /// |x|^2 = x0^2 + x1^2 + x2^2 + x3^2.
    pub fn norm2(&self) -> BigInt {
        self.0.iter().map(|c| c * c).sum()
    }

    /// m(x) = x1^2 + x2^2 + x3^2, the norm of the imaginary part.
    pub fn m_value(&self) -> BigInt {
        self.0[1..].iter().map(|c| c * c).sum()
    }

    /// gcd of the four coordinates (0 for the zero quaternion).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn scale(&self, s: &BigInt) -> Quat {
        Quat([
            &self.0[0] * s,
            &self.0[1] * s,
            &self.0[2] * s,
            &self.0[3] * s,
        ])
    }

    /// Divide every coordinate by `d`, if all are divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Quat> {
        if d.is_zero() || !self.is_divisible_by(d) {
            return None;
        }
        Some(Quat([
            &self.0[0] / d,
            &self.0[1] / d,
            &self.0[2] / d,
            &self.0[3] / d,
        ]))
    }

    pub fn is_divisible_by(&self, d: &BigInt) -> bool {
        !d.is_zero() && self.0.iter().all(|c| c.is_multiple_of(d))
    }

    /// Flip the sign so the first nonzero coordinate is positive.
    pub fn sign_normalized(self) -> Quat {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self,
        }
    }

    /// x / content(x), sign-normalized.
    pub fn primitive(&self) -> Result<Quat> {
        if self.is_zero() {
            return Err(Error::ZeroQuaternion);
        }
        let g = self.content();
        let q = self
            .div_exact(&g)
            .expect("content divides every coordinate");
        Ok(q.sign_normalized())
    }

    /// The coprime, sign-normalized direction of the imaginary part.
    pub fn direction(&self) -> Result<Direction> {
        if self.is_real() {
            return Err(Error::CentralElement);
        }
        Direction::from_vector([self.0[1].clone(), self.0[2].clone(), self.0[3].clone()])
    }

    /// The Γ̃ parity pattern: for |x|^2 ≡ 1 (mod 4), x0 odd and x1, x2, x3
    /// even; for |x|^2 ≡ 3 (mod 4), x1 even and x0, x2, x3 odd. Invariant
    /// under x -> -x.
    pub fn has_gamma_parity(&self) -> bool {
        let odd = |c: &BigInt| c.is_odd();
        let n4 = self.norm2().mod_floor(&BigInt::from(4));
        if n4 == BigInt::one() {
            odd(&self.0[0]) && !odd(&self.0[1]) && !odd(&self.0[2]) && !odd(&self.0[3])
        } else if n4 == BigInt::from(3) {
            !odd(&self.0[1]) && odd(&self.0[0]) && odd(&self.0[2]) && odd(&self.0[3])
        } else {
            false
        }
    }

    /// The rotation v -> y v y^{-1} of the imaginary 3-space, as an exact
    /// rational matrix acting on column vectors (v1, v2, v3).
    pub fn theta(&self) -> Result<RationalMatrix3> {
        if self.is_zero() {
            return Err(Error::ZeroQuaternion);
        }
        let n = self.norm2();
        let ybar = self.conj();
        let basis = [
            Quat::new(0, 1, 0, 0),
            Quat::new(0, 0, 1, 0),
            Quat::new(0, 0, 0, 1),
        ];
        let mut m: [[BigRational; 3]; 3] = Default::default();
        for (col, e) in basis.iter().enumerate() {
            let img = &(self * e) * &ybar;
            debug_assert!(img.re().is_zero());
            for (row, entry) in m.iter_mut().enumerate() {
                entry[col] = BigRational::new(img.0[row + 1].clone(), n.clone());
            }
        }
        Ok(RationalMatrix3(m))
    }
}

impl Mul for &Quat {
    type Output = Quat;

    fn mul(self, y: &Quat) -> Quat {
        let [a0, a1, a2, a3] = &self.0;
        let [b0, b1, b2, b3] = &y.0;
        Quat([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }
}

impl Mul for Quat {
    type Output = Quat;

    fn mul(self, y: Quat) -> Quat {
        &self * &y
    }
}

impl Neg for Quat {
    type Output = Quat;

    fn neg(self) -> Quat {
        let [a, b, c, d] = self.0;
        Quat([-a, -b, -c, -d])
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (c, unit) in self.0.iter().zip(["", "i", "j", "k"]) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            if !unit.is_empty() && abs.is_one() {
                f.write_str(unit)?;
            } else {
                write!(f, "{abs}{unit}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quat({self})")
    }
}

/// Parses "x0,x1,x2,x3".
impl FromStr for Quat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Quat> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four comma-separated integers, got {s:?}"
            )));
        }
        let mut coords: [BigInt; 4] = Default::default();
        for (slot, part) in coords.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {part:?} in {s:?}")))?;
        }
        Ok(Quat(coords))
    }
}

/// A primitive integer vector (c1, c2, c3), sign-normalized so the first
/// nonzero coordinate is positive, together with n = c1^2 + c2^2 + c3^2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    c: [BigInt; 3],
    n: BigInt,
}

impl Direction {
    pub fn from_vector(v: [BigInt; 3]) -> Result<Direction> {
        let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return Err(Error::CentralElement);
        }
        let mut c = v.map(|x| x / &g);
        if c.iter()
            .find(|x| !x.is_zero())
            .is_some_and(Signed::is_negative)
        {
            c = c.map(|x| -x);
        }
        let n = c.iter().map(|x| x * x).sum();
        Ok(Direction { c, n })
    }

    pub fn c(&self) -> &[BigInt; 3] {
        &self.c
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.c[0], self.c[1], self.c[2])
    }
}

/// A 3x3 matrix over Q, indexed `m[row][col]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix3(pub [[BigRational; 3]; 3]);

impl RationalMatrix3 {
    pub fn identity() -> Self {
        let mut m: [[BigRational; 3]; 3] = Default::default();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = BigRational::one();
        }
        RationalMatrix3(m)
    }

    pub fn apply(&self, v: &[BigRational; 3]) -> [BigRational; 3] {
        std::array::from_fn(|r| (0..3).map(|c| &self.0[r][c] * &v[c]).sum())
    }

    /// Apply to an integer vector.
    pub fn apply_int(&self, v: [i64; 3]) -> [BigRational; 3] {
        self.apply(&v.map(|x| BigRational::from_integer(BigInt::from(x))))
    }

    pub fn transpose(&self) -> Self {
        RationalMatrix3(std::array::from_fn(|r| {
            std::array::from_fn(|c| self.0[c][r].clone())
        }))
    }

    pub fn trace(&self) -> BigRational {
        (0..3).map(|i| self.0[i][i].clone()).sum()
    }

    pub fn det(&self) -> BigRational {
        let m = &self.0;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn is_orthogonal(&self) -> bool {
        &self.transpose() * self == RationalMatrix3::identity()
    }
}

impl Mul for &RationalMatrix3 {
    type Output = RationalMatrix3;

    fn mul(self, o: &RationalMatrix3) -> RationalMatrix3 {
        RationalMatrix3(std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..3).map(|k| &self.0[r][k] * &o.0[k][c]).sum())
        }))
    }
}
