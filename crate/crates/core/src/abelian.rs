//! Maximal abelian subgroups: which centralizers are period subgroups, which
//! are Z² without being period subgroups, and which are certifiably Z.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{Family, GroupElement, Lattice, LatticeParams, Word};
use crate::numtheory::{
    legendre, norm_form_parity, norm_form_solutions, solve_norm_equation, sqrt_mod_prime_power,
    valuation, LegendreValue,
};
use crate::quat::{Direction, Quat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Purity {
    PureP,
    PureL,
    Mixed,
}

impl fmt::Display for Purity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Purity::PureP => "pure-p",
            Purity::PureL => "pure-l",
            Purity::Mixed => "mixed",
        })
    }
}

/// Invariants of Z_Γ(γ) that can be read off one nontrivial element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerDescriptor {
    pub params: LatticeParams,
    pub sample: GroupElement,
    pub dir: Direction,
    pub n: BigInt,
    pub leg_p: LegendreValue,
    pub leg_l: LegendreValue,
    pub purity: Purity,
}

pub fn describe_centralizer(gamma: &GroupElement) -> Result<CentralizerDescriptor> {
    let params = gamma.params();
    let dir = gamma.direction()?;
    let n = dir.n().clone();
    let minus_n = -n.clone();
    let purity = match (gamma.r(), gamma.s()) {
        (_, 0) => Purity::PureP,
        (0, _) => Purity::PureL,
        _ => Purity::Mixed,
    };
    Ok(CentralizerDescriptor {
        params,
        sample: gamma.clone(),
        leg_p: legendre(minus_n.clone(), params.p())?,
        leg_l: legendre(minus_n, params.l())?,
        dir,
        n,
        purity,
    })
}

/// (−n/p) = (−n/l) = 1.
pub fn is_period_eligible(desc: &CentralizerDescriptor) -> bool {
    desc.leg_p == LegendreValue::One && desc.leg_l == LegendreValue::One
}

/// Writes x = x0 + z0·(c1 i + c2 j + c3 k) for the given direction.
fn norm_form_coords(x: &Quat, dir: &Direction) -> (BigInt, BigInt) {
    let c = dir.c();
    let k = c
        .iter()
        .position(|ci| !ci.is_zero())
        .expect("direction is nonzero");
    (x.re().clone(), x.coord(k + 1) / &c[k])
}

/// How q behaves in Q(√−n): `Some((e/2, t))` when q splits in the sense that
/// n = q^e u with e even and −u a square mod q, where t is a square root of
/// −u modulo q^precision.
fn split_root(n: &BigInt, q: u64, precision: u32) -> Result<Option<(u32, BigInt)>> {
    let e = valuation(n, q);
    if e % 2 == 1 {
        return Ok(None);
    }
    let u = n / BigInt::from(q).pow(e);
    if legendre(-u.clone(), q)? != LegendreValue::One {
        return Ok(None);
    }
    let t = sqrt_mod_prime_power(&(-u), q, precision)?
        .ok_or_else(|| Error::Invariant(format!("no square root mod {q}^{precision}")))?;
    Ok(Some((e / 2, t)))
}

/// The split signature (d_p, d_l) of a non-identity element.
///
/// For q split in Q(√−n) the two q-adic embeddings give valuations
/// v(x0 + z0√−n) and v(x0 − z0√−n) summing to v_q(|x|²); d_q is their
/// difference, and d_q = 0 when q does not split. On the centralizer of a
/// fixed direction d is a homomorphism to Z² with torsion kernel, so two
/// commuting elements generate a Z² iff their signatures are independent.
pub fn split_signature(gamma: &GroupElement) -> Result<[i64; 2]> {
    let dir = gamma.direction()?;
    let (x0, z0) = norm_form_coords(gamma.rep(), &dir);
    let params = gamma.params();
    let mut out = [0i64; 2];
    for (slot, (q, vq)) in [(params.p(), gamma.r()), (params.l(), gamma.s())]
        .into_iter()
        .enumerate()
    {
        let e = valuation(dir.n(), q);
        // both valuations are at most v_q(|x|^2), so K digits determine them
        let precision = vq + e / 2 + 1;
        let Some((half, t)) = split_root(dir.n(), q, precision)? else {
            continue;
        };
        let modulus = BigInt::from(q).pow(precision);
        let root = BigInt::from(q).pow(half) * t;
        let plus = (&x0 + &z0 * &root).mod_floor(&modulus);
        let minus = (&x0 - &z0 * &root).mod_floor(&modulus);
        if plus.is_zero() || minus.is_zero() {
            return Err(Error::Invariant("split signature precision too low".into()));
        }
        out[slot] = valuation(&plus, q) as i64 - valuation(&minus, q) as i64;
    }
    Ok(out)
}

/// Commuting elements generating a free abelian group of rank two.
pub fn are_independent(gamma: &GroupElement, delta: &GroupElement) -> Result<bool> {
    if gamma.is_identity() || delta.is_identity() || !gamma.commutes(delta) {
        return Ok(false);
    }
    let a = split_signature(gamma)?;
    let b = split_signature(delta)?;
    Ok(a[0] * b[1] - a[1] * b[0] != 0)
}

/// Number of primes among p, l that split for this n: the rank of every
/// centralizer with invariant n.
pub fn centralizer_rank(params: LatticeParams, n: &BigInt) -> Result<u32> {
    let mut rank = 0;
    for q in [params.p(), params.l()] {
        if split_root(n, q, 1)?.is_some() {
            rank += 1;
        }
    }
    Ok(rank)
}

fn n_as_u128(n: &BigInt) -> Result<u128> {
    n.to_u128()
        .ok_or(Error::Overflow("norm form: n exceeds 128 bits"))
}

fn direction_element(
    params: LatticeParams,
    dir: &Direction,
    y0: i128,
    z0: i128,
) -> Result<GroupElement> {
    let c = dir.c();
    let z = BigInt::from(z0);
    let x = Quat::from_coords([BigInt::from(y0), &z * &c[0], &z * &c[1], &z * &c[2]]);
    GroupElement::from_quat(params, &x)
}

/// An element commuting with γ that is not in a common cyclic group with it,
/// found by solving y0² + n z0² = p^a l^b.
///
/// Pure exponents over the prime(s) missing from γ's norm come first (by
/// ascending exponent), then mixed (a, b) with a + b ≤ s_max.
pub fn find_commuting_complement(gamma: &GroupElement, s_max: u32) -> Result<Option<GroupElement>> {
    let params = gamma.params();
    let dir = gamma.direction()?;
    // no complement can exist unless both primes split
    if centralizer_rank(params, dir.n())? < 2 {
        return Ok(None);
    }
    let n = n_as_u128(dir.n())?;
    let mut absent = Vec::new();
    if gamma.r() == 0 {
        absent.push(params.p());
    }
    if gamma.s() == 0 {
        absent.push(params.l());
    }
    for q in absent {
        for sol in solve_norm_equation(n, q, s_max, Some(&dir))? {
            let delta = direction_element(params, &dir, sol.y0, sol.z0)?;
            if are_independent(gamma, &delta)? {
                return Ok(Some(delta));
            }
        }
    }
    let pattern = dir.c().clone().map(|c| c.is_odd());
    let (p, l) = (params.p() as u128, params.l() as u128);
    for total in 2..=s_max {
        for a in 1..total {
            let target = p
                .checked_pow(a)
                .zip(l.checked_pow(total - a))
                .and_then(|(x, y)| x.checked_mul(y))
                .ok_or(Error::Overflow("find_commuting_complement: p^a l^b"))?;
            for (y0, z0) in norm_form_solutions(n, target) {
                if !norm_form_parity(y0, z0, pattern, target) {
                    continue;
                }
                let delta = direction_element(params, &dir, y0, z0)?;
                if are_independent(gamma, &delta)? {
                    return Ok(Some(delta));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    #[serde(rename = "Z2_PERIOD")]
    Z2Period,
    #[serde(rename = "Z2_NONPERIOD")]
    Z2Nonperiod,
    #[serde(rename = "Z_CERTIFIED")]
    ZCertified,
    #[serde(rename = "UNDETERMINED")]
    Undetermined,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Z2Period => "Z2_PERIOD",
            VerdictKind::Z2Nonperiod => "Z2_NONPERIOD",
            VerdictKind::ZCertified => "Z_CERTIFIED",
            VerdictKind::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub s_max: u32,
    pub radius: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            s_max: 12,
            radius: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A conjugate g γ g⁻¹ lies in Γ_p (or Γ_l) with Legendre pattern (1, −1).
    LegendrePattern {
        conjugator: Word,
        conjugate: GroupElement,
        family: Family,
    },
    /// A mixed conjugate whose n has odd valuation at p or l.
    OddValuation {
        conjugator: Word,
        conjugate: GroupElement,
        prime: u64,
        valuation: u32,
    },
    /// Two commuting elements with independent split signatures.
    IndependentPair {
        first: GroupElement,
        second: GroupElement,
        signatures: [[i64; 2]; 2],
    },
    Exhausted(SearchBounds),
}

impl Certificate {
    pub fn tag(&self) -> &'static str {
        match self {
            Certificate::LegendrePattern { .. } => "corollary4",
            Certificate::OddValuation { .. } => "odd_valuation",
            Certificate::IndependentPair { .. } => "independent_pair",
            Certificate::Exhausted(_) => "exhausted",
        }
    }

    /// Re-derive the claim from scratch.
    pub fn check(&self, gamma: &GroupElement) -> Result<bool> {
        let conj_ok = |w: &Word, c: &GroupElement| -> Result<bool> {
            let lat = Lattice::new(gamma.params())?;
            Ok(gamma.conjugate_by(&lat.evaluate(w)?)? == *c)
        };
        Ok(match self {
            Certificate::LegendrePattern {
                conjugator,
                conjugate,
                family,
            } => {
                let d = describe_centralizer(conjugate)?;
                let (own, other) = match family {
                    Family::A => (d.leg_p, d.leg_l),
                    Family::B => (d.leg_l, d.leg_p),
                };
                conj_ok(conjugator, conjugate)?
                    && conjugate.is_pure(*family)
                    && own == LegendreValue::One
                    && other == LegendreValue::MinusOne
            }
            Certificate::OddValuation {
                conjugator,
                conjugate,
                prime,
                valuation: v,
            } => {
                let d = describe_centralizer(conjugate)?;
                conj_ok(conjugator, conjugate)?
                    && d.purity == Purity::Mixed
                    && valuation(&d.n, *prime) == *v
                    && v % 2 == 1
            }
            Certificate::IndependentPair {
                first,
                second,
                signatures,
            } => {
                first.commutes_by_product(second)
                    && are_independent(first, second)?
                    && split_signature(first)? == signatures[0]
                    && split_signature(second)? == signatures[1]
            }
            Certificate::Exhausted(_) => true,
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Certificate::LegendrePattern {
                conjugator,
                conjugate,
                family,
            } => json!({
                "type": self.tag(),
                "conjugator": conjugator.to_string(),
                "conjugate": quat_json(conjugate.rep()),
                "family": family.prefix().to_string(),
            }),
            Certificate::OddValuation {
                conjugator,
                conjugate,
                prime,
                valuation,
            } => json!({
                "type": self.tag(),
                "conjugator": conjugator.to_string(),
                "conjugate": quat_json(conjugate.rep()),
                "prime": prime,
                "valuation": valuation,
            }),
            Certificate::IndependentPair {
                first,
                second,
                signatures,
            } => json!({
                "type": self.tag(),
                "first": quat_json(first.rep()),
                "second": quat_json(second.rep()),
                "signatures": signatures,
            }),
            Certificate::Exhausted(b) => json!({
                "type": self.tag(),
                "s_max": b.s_max,
                "radius": b.radius,
            }),
        }
    }
}

/// Coordinates as JSON numbers when they fit, decimal strings otherwise.
pub fn quat_json(x: &Quat) -> Value {
    Value::Array(x.coords().iter().map(bigint_json).collect())
}

pub fn bigint_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub kind: VerdictKind,
    pub descriptor: CentralizerDescriptor,
    pub certificate: Option<Certificate>,
}

impl ClassificationVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.to_string(),
            "n": bigint_json(&self.descriptor.n),
            "direction": self.descriptor.dir.c().iter().map(bigint_json).collect::<Vec<_>>(),
            "purity": self.descriptor.purity.to_string(),
            "legendre": {
                "p": self.descriptor.leg_p.value(),
                "l": self.descriptor.leg_l.value(),
            },
            "certificate": self.certificate.as_ref().map(Certificate::to_json),
        })
    }
}

fn certificate_for(
    conjugator: &Word,
    conjugate: &GroupElement,
    params: LatticeParams,
) -> Result<Option<Certificate>> {
    let d = describe_centralizer(conjugate)?;
    use LegendreValue::{MinusOne, One};
    match d.purity {
        Purity::PureP if d.leg_p == One && d.leg_l == MinusOne => {
            return Ok(Some(Certificate::LegendrePattern {
                conjugator: conjugator.clone(),
                conjugate: conjugate.clone(),
                family: Family::A,
            }))
        }
        Purity::PureL if d.leg_l == One && d.leg_p == MinusOne => {
            return Ok(Some(Certificate::LegendrePattern {
                conjugator: conjugator.clone(),
                conjugate: conjugate.clone(),
                family: Family::B,
            }))
        }
        Purity::Mixed => {
            for q in [params.p(), params.l()] {
                let v = valuation(&d.n, q);
                if v % 2 == 1 {
                    return Ok(Some(Certificate::OddValuation {
                        conjugator: conjugator.clone(),
                        conjugate: conjugate.clone(),
                        prime: q,
                        valuation: v,
                    }));
                }
            }
        }
        _ => {}
    }
    Ok(None)
}

/// Decide the isomorphism type of Z_Γ(γ) where a certificate can be found.
pub fn classify(gamma: &GroupElement, bounds: SearchBounds) -> Result<ClassificationVerdict> {
    let descriptor = describe_centralizer(gamma)?;
    let pair = |delta: GroupElement| -> Result<Certificate> {
        Ok(Certificate::IndependentPair {
            signatures: [split_signature(gamma)?, split_signature(&delta)?],
            first: gamma.clone(),
            second: delta,
        })
    };
    let complement = find_commuting_complement(gamma, bounds.s_max)?;
    if is_period_eligible(&descriptor) {
        let certificate = complement.map(pair).transpose()?;
        return Ok(ClassificationVerdict {
            kind: VerdictKind::Z2Period,
            descriptor,
            certificate,
        });
    }
    if let Some(delta) = complement {
        return Ok(ClassificationVerdict {
            kind: VerdictKind::Z2Nonperiod,
            descriptor,
            certificate: Some(pair(delta)?),
        });
    }
    let params = gamma.params();
    let lattice = Lattice::new(params)?;
    for (w, g) in lattice.ball(bounds.radius)? {
        let conjugate = gamma.conjugate_by(&g)?;
        if let Some(cert) = certificate_for(&w, &conjugate, params)? {
            return Ok(ClassificationVerdict {
                kind: VerdictKind::ZCertified,
                descriptor,
                certificate: Some(cert),
            });
        }
    }
    Ok(ClassificationVerdict {
        kind: VerdictKind::Undetermined,
        descriptor,
        certificate: Some(Certificate::Exhausted(bounds)),
    })
}

/// Commuting x, y with |x|² = p^r and |y|² = l^r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPair {
    pub x: GroupElement,
    pub y: GroupElement,
    pub r: u32,
    pub dir: Direction,
}

impl PeriodPair {
    pub fn check(&self) -> Result<bool> {
        let params = self.x.params();
        let minus_n = -self.dir.n().clone();
        Ok(self.x.commutes(&self.y)
            && self.x.commutes_by_product(&self.y)
            && self.x.rep().norm2() == BigInt::from(params.p()).pow(self.r)
            && self.y.rep().norm2() == BigInt::from(params.l()).pow(self.r)
            && self.x.direction()? == self.dir
            && legendre(minus_n.clone(), params.p())? == LegendreValue::One
            && legendre(minus_n, params.l())? == LegendreValue::One)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "n": bigint_json(self.dir.n()),
            "direction": self.dir.c().iter().map(bigint_json).collect::<Vec<_>>(),
            "x": quat_json(self.x.rep()),
            "y": quat_json(self.y.rep()),
        })
    }
}

/// Primitive sign-normalized (c1, c2, c3) with c1² + c2² + c3² = n, in
/// lexicographic order.
pub fn directions_with_norm(n: u64) -> Vec<Direction> {
    let b = n.isqrt() as i64;
    let mut out = Vec::new();
    for c1 in 0..=b {
        for c2 in -b..=b {
            for c3 in -b..=b {
                if (c1 * c1 + c2 * c2 + c3 * c3) as u64 != n {
                    continue;
                }
                let v = [c1, c2, c3];
                if v.iter().fold(0i64, |g, &c| g.gcd(&c)) != 1 {
                    continue;
                }
                // first nonzero coordinate positive
                if v.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
                    continue;
                }
                out.push(Direction::from_vector(v.map(BigInt::from)).expect("nonzero"));
            }
        }
    }
    out
}

/// The first commuting pair of norms p^r, l^r, by ascending r, then n, then
/// direction.
pub fn find_period_pair(params: LatticeParams, r_max: u32) -> Result<Option<PeriodPair>> {
    let (p, l) = (params.p() as u128, params.l() as u128);
    for r in 1..=r_max {
        let (Some(pr), Some(lr)) = (p.checked_pow(r), l.checked_pow(r)) else {
            return Err(Error::Overflow("find_period_pair: q^r"));
        };
        let n_max = pr.min(lr);
        for n in 1..n_max {
            let minus = -BigInt::from(n);
            if legendre(minus.clone(), params.p())? != LegendreValue::One
                || legendre(minus, params.l())? != LegendreValue::One
            {
                continue;
            }
            let Ok(n64) = u64::try_from(n) else {
                return Err(Error::Overflow("find_period_pair: n"));
            };
            for dir in directions_with_norm(n64) {
                let pattern = dir.c().clone().map(|c| c.is_odd());
                let first = |target: u128| {
                    norm_form_solutions(n, target)
                        .into_iter()
                        .find(|&(y0, z0)| norm_form_parity(y0, z0, pattern, target))
                };
                if let (Some((xy, xz)), Some((yy, yz))) = (first(pr), first(lr)) {
                    let pair = PeriodPair {
                        x: direction_element(params, &dir, xy, xz)?,
                        y: direction_element(params, &dir, yy, yz)?,
                        r,
                        dir,
                    };
                    if !pair.check()? {
                        return Err(Error::Invariant(format!(
                            "period pair for n = {n}, r = {r} fails its invariants"
                        )));
                    }
                    return Ok(Some(pair));
                }
            }
        }
    }
    Ok(None)
}
