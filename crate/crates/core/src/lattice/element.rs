use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Family, LatticeParams};
use crate::error::{Error, MembershipFailure, Result};
use crate::quat::{Direction, Quat};

/// An element of Γ, stored as its primitive sign-normalized quaternion.
///
/// ψ kills exactly the nonzero integers, so two quaternions give the same
/// element iff their canonical representatives agree coordinate-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    params: LatticeParams,
    rep: Quat,
    r: u32,
    s: u32,
}

fn strip_prime(n: &mut BigInt, q: u64) -> u32 {
    let q = BigInt::from(q);
    let mut e = 0;
    loop {
        let (quo, rem) = n.div_rem(&q);
        if !rem.is_zero() {
            return e;
        }
        *n = quo;
        e += 1;
    }
}

impl GroupElement {
    pub fn identity(params: LatticeParams) -> Self {
        GroupElement {
            params,
            rep: Quat::one(),
            r: 0,
            s: 0,
        }
    }

    /// Canonical element for a nonzero quaternion, or "not in Γ".
    pub fn from_quat(params: LatticeParams, x: &Quat) -> Result<Self> {
        let rep = x.primitive()?;
        let mut rest = rep.norm2();
        let r = strip_prime(&mut rest, params.p());
        let s = strip_prime(&mut rest, params.l());
        if !rest.is_one() {
            return Err(Error::NotInGamma {
                quat: Box::new(x.clone()),
                reason: MembershipFailure::BadNorm,
            });
        }
        if !rep.has_gamma_parity() {
            return Err(Error::NotInGamma {
                quat: Box::new(x.clone()),
                reason: MembershipFailure::BadParity,
            });
        }
        Ok(GroupElement { params, rep, r, s })
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn rep(&self) -> &Quat {
        &self.rep
    }

    /// Exponent of p in the norm.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Exponent of l in the norm.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn exponent(&self, family: Family) -> u32 {
        match family {
            Family::A => self.r,
            Family::B => self.s,
        }
    }

    /// Word length ℓ = r + s.
    pub fn length(&self) -> u32 {
        self.r + self.s
    }

    pub fn is_identity(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    /// Lies in Γ_p (no l in the norm) and is not the identity.
    pub fn is_pure(&self, family: Family) -> bool {
        !self.is_identity() && self.exponent(family.other()) == 0
    }

    fn check_params(&self, other: &GroupElement) -> Result<()> {
        if self.params != other.params {
            return Err(Error::MixedParams(
                self.params.as_pair(),
                other.params.as_pair(),
            ));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_params(other)?;
        GroupElement::from_quat(self.params, &(&self.rep * &other.rep))
            .map_err(|e| Error::Invariant(format!("product left Γ: {e}")))
    }

    pub fn invert(&self) -> GroupElement {
        GroupElement {
            params: self.params,
            rep: self.rep.conj().sign_normalized(),
            r: self.r,
            s: self.s,
        }
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = GroupElement::identity(self.params);
        for _ in 0..k.unsigned_abs() {
            acc = acc.multiply(&base).expect("same params");
        }
        acc
    }

    /// g · self · g^{-1}
    pub fn conjugate_by(&self, g: &GroupElement) -> Result<GroupElement> {
        g.multiply(self)?.multiply(&g.invert())
    }

    /// Direction of the imaginary part; undefined for the identity.
    pub fn direction(&self) -> Result<Direction> {
        if self.is_identity() {
            return Err(Error::IdentityElement);
        }
        self.rep.direction()
    }

    /// Commutation via the direction criterion. The identity commutes with
    /// everything.
    pub fn commutes(&self, other: &GroupElement) -> bool {
        if self.is_identity() || other.is_identity() {
            return true;
        }
        self.rep.direction().ok() == other.rep.direction().ok()
    }

    /// Commutation checked by multiplying quaternions both ways.
    pub fn commutes_by_product(&self, other: &GroupElement) -> bool {
        &self.rep * &other.rep == &other.rep * &self.rep
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ({})", self.rep)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ({}) [r={}, s={}]", self.rep, self.r, self.s)
    }
}
