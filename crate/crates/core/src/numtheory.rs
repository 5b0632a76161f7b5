//! Modular and Diophantine helpers: Legendre symbols, square roots modulo
//! primes and prime powers, the c^2 + d^2 + 1 ≡ 0 lift used by the matrix
//! embedding, and the exhaustive solver for y0^2 + n z0^2 = q^s.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quat::Direction;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all u64.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn ensure_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Exponent of the prime `p` in `n` (0 for n = 0).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegendreValue {
    MinusOne,
    Zero,
    One,
}

impl LegendreValue {
    pub fn value(self) -> i8 {
        match self {
            LegendreValue::MinusOne => -1,
            LegendreValue::Zero => 0,
            LegendreValue::One => 1,
        }
    }
}

impl fmt::Display for LegendreValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for LegendreValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

/// Legendre symbol (a/p) by Euler's criterion.
pub fn legendre(a: impl Into<BigInt>, p: u64) -> Result<LegendreValue> {
    ensure_odd_prime(p)?;
    let r = a
        .into()
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue below p");
    Ok(legendre_u64(r, p))
}

fn legendre_u64(a: u64, p: u64) -> LegendreValue {
    let a = a % p;
    if a == 0 {
        LegendreValue::Zero
    } else if pow_mod(a, (p - 1) / 2, p) == 1 {
        LegendreValue::One
    } else {
        LegendreValue::MinusOne
    }
}

/// Smallest nonnegative r with r^2 ≡ a (mod p), or None for a non-residue.
pub fn sqrt_mod(a: impl Into<BigInt>, p: u64) -> Result<Option<u64>> {
    ensure_odd_prime(p)?;
    let a = a
        .into()
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue below p");
    Ok(tonelli_shanks(a, p).map(|r| r.min(p - r)))
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != LegendreValue::One {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p)
        .find(|&z| legendre_u64(z, p) == LegendreValue::MinusOne)
        .expect("a non-residue exists for odd p");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// A square root of `a` modulo p^k for p ∤ a, lifted from the smallest root
/// mod p. Returns None when `a` is not a residue.
pub fn sqrt_mod_prime_power(a: &BigInt, p: u64, k: u32) -> Result<Option<BigInt>> {
    ensure_odd_prime(p)?;
    if k == 0 {
        return Ok(Some(BigInt::zero()));
    }
    let pb = BigInt::from(p);
    if a.is_multiple_of(&pb) {
        return Err(Error::Invariant(format!("{p} divides {a}")));
    }
    let Some(r0) = sqrt_mod(a.clone(), p)? else {
        return Ok(None);
    };
    let mut r = BigInt::from(r0);
    let mut modulus = pb.clone();
    for _ in 1..k {
        modulus *= &pb;
        // r <- r - (r^2 - a) / (2r)
        let f = (&r * &r - a).mod_floor(&modulus);
        let inv = mod_inverse(&(BigInt::from(2) * &r), &modulus)
            .expect("2r is a unit since p is odd and p ∤ a");
        r = (&r - f * inv).mod_floor(&modulus);
    }
    Ok(Some(r))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// (c, d) with c^2 + d^2 + 1 ≡ 0 (mod p), reduced into [0, p).
///
/// For p ≡ 1 (mod 4) this is the smallest square root of -1 with d = 0.
/// Otherwise the smallest nonzero c admitting a d, then the smallest such d.
pub fn solve_cd_mod_p(p: u64) -> Result<(u64, u64)> {
    ensure_odd_prime(p)?;
    if p % 4 == 1 {
        let c = sqrt_mod(-1, p)?.expect("-1 is a square mod p ≡ 1 (mod 4)");
        return Ok((c, 0));
    }
    for c in 1..p {
        let target = (p - 1 - mul_mod(c, c, p)) % p;
        if let Some(d) = tonelli_shanks(target, p) {
            return Ok((c, d.min(p - d)));
        }
    }
    Err(Error::Invariant(format!(
        "no solution of c^2+d^2+1 mod {p}"
    )))
}

/// c, d modulo p^k with c^2 + d^2 + 1 ≡ 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicCD {
    pub p: u64,
    pub k: u32,
    pub c: BigInt,
    pub d: BigInt,
}

impl PadicCD {
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k)
    }
}

/// Lift the base solution to precision p^k, holding d fixed and moving c
/// by Newton steps (2c is a unit because c ≢ 0 mod p).
pub fn hensel_lift_cd(p: u64, k: u32) -> Result<PadicCD> {
    if k == 0 {
        return Err(Error::InvalidParams(
            "precision k must be at least 1".into(),
        ));
    }
    let (c0, d0) = solve_cd_mod_p(p)?;
    let pb = BigInt::from(p);
    let d = BigInt::from(d0);
    let mut c = BigInt::from(c0);
    let mut modulus = pb.clone();
    for _ in 1..k {
        modulus *= &pb;
        let f = (&c * &c + &d * &d + BigInt::from(1)).mod_floor(&modulus);
        let inv = mod_inverse(&(BigInt::from(2) * &c), &modulus)
            .ok_or_else(|| Error::Invariant("2c not invertible".into()))?;
        c = (&c - f * inv).mod_floor(&modulus);
    }
    Ok(PadicCD { p, k, c, d })
}

/// One coprime solution of y0^2 + n z0^2 = q^s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormEquationSolution {
    pub y0: i128,
    pub z0: i128,
    pub s: u32,
    pub q: u64,
}

/// All coprime (y0, z0) with z0 > 0 and y0^2 + n z0^2 = target, ordered by
/// z0 then y0 (positive y0 before its negative).
pub fn norm_form_solutions(n: u128, target: u128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut z: u128 = 1;
    while let Some(nz2) = z.checked_mul(z).and_then(|z2| z2.checked_mul(n)) {
        if nz2 > target {
            break;
        }
        let rest = target - nz2;
        let y = rest.sqrt();
        if y * y == rest && y.gcd(&z) == 1 {
            let (y, zi) = (y as i128, z as i128);
            out.push((y, zi));
            if y != 0 {
                out.push((-y, zi));
            }
        }
        z += 1;
    }
    out
}

/// Γ̃ parity for y0 + z0 (c1 i + c2 j + c3 k) of norm `target`, using only
/// residues mod 2 and mod 4.
pub fn norm_form_parity(y0: i128, z0: i128, c_odd: [bool; 3], target: u128) -> bool {
    let odd = |x: i128| x.rem_euclid(2) == 1;
    let imag = c_odd.map(|c| c && odd(z0));
    match target % 4 {
        1 => odd(y0) && !imag[0] && !imag[1] && !imag[2],
        3 => odd(y0) && !imag[0] && imag[1] && imag[2],
        _ => false,
    }
}

pub(crate) fn direction_parity_pattern(dir: &Direction) -> [bool; 3] {
    let c = dir.c();
    [c[0].is_odd(), c[1].is_odd(), c[2].is_odd()]
}

/// Every coprime solution of y0^2 + n z0^2 = q^s with 1 <= s <= s_max and
/// z0 > 0, ordered by (s, z0, y0) with the positive y0 first. With `parity`
/// set, only solutions whose quaternion y0 + z0 (c1 i + c2 j + c3 k) meets the
/// Γ̃ parity condition are kept.
pub fn solve_norm_equation(
    n: u128,
    q: u64,
    s_max: u32,
    parity: Option<&Direction>,
) -> Result<Vec<NormEquationSolution>> {
    ensure_odd_prime(q)?;
    // refuse up front rather than after hours of searching smaller exponents
    (q as u128)
        .checked_pow(s_max)
        .and_then(|t| t.checked_mul(n.max(1)))
        .ok_or(Error::Overflow("solve_norm_equation: q^s"))?;
    let pattern = parity.map(direction_parity_pattern);
    let mut out = Vec::new();
    let mut target: u128 = 1;
    for s in 1..=s_max {
        target *= q as u128;
        for (y0, z0) in norm_form_solutions(n, target) {
            if pattern.is_some_and(|c| !norm_form_parity(y0, z0, c, target)) {
                continue;
            }
            out.push(NormEquationSolution { y0, z0, s, q });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leg(a: i64, p: u64) -> i8 {
        legendre(a, p).unwrap().value()
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(ensure_odd_prime(2).is_err());
        assert!(ensure_odd_prime(9).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(leg(-2, 3), 1);
        assert_eq!(leg(-2, 5), -1);
        assert_eq!(leg(-14, 3), 1);
        assert_eq!(leg(-14, 5), 1);
        assert_eq!(leg(-126, 3), 0);
        assert_eq!(leg(-126, 5), 1);
        assert_eq!(leg(-50, 3), 1);
        assert_eq!(leg(-50, 5), 0);
        assert!(legendre(3, 4).is_err());
        assert!(legendre(3, 15).is_err());
    }

    #[test]
    fn legendre_against_residue_table() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<i64> = (1..p as i64).map(|r| r * r % p as i64).collect();
            for a in -50i64..=50 {
                let ar = a.rem_euclid(p as i64);
                let expected = if ar == 0 {
                    0
                } else if squares.contains(&ar) {
                    1
                } else {
                    -1
                };
                assert_eq!(leg(a, p), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(-1, 5).unwrap(), Some(2));
        assert_eq!(sqrt_mod(2, 5).unwrap(), None);
        assert_eq!(sqrt_mod(0, 7).unwrap(), Some(0));
        for p in [3u64, 5, 7, 13, 17, 41, 97, 113] {
            for a in 0..p {
                let brute = (0..p).find(|r| r * r % p == a);
                assert_eq!(sqrt_mod(a as i64, p).unwrap(), brute, "sqrt({a}) mod {p}");
            }
        }
    }

    #[test]
    fn sqrt_mod_prime_powers() {
        for (a, p, k) in [(-14i64, 3u64, 6u32), (-14, 5, 5), (-6, 5, 4), (-1, 13, 3)] {
            let a = BigInt::from(a);
            let r = sqrt_mod_prime_power(&a, p, k).unwrap().unwrap();
            let m = BigInt::from(p).pow(k);
            assert!((&r * &r - &a).is_multiple_of(&m));
        }
        assert_eq!(sqrt_mod_prime_power(&BigInt::from(2), 5, 3).unwrap(), None);
    }

    #[test]
    fn cd_base_solutions() {
        assert_eq!(solve_cd_mod_p(5).unwrap(), (2, 0));
        assert_eq!(solve_cd_mod_p(3).unwrap(), (1, 1));
        assert_eq!(solve_cd_mod_p(13).unwrap(), (5, 0));
        assert_eq!(solve_cd_mod_p(7).unwrap(), (2, 3));
    }

    #[test]
    fn cd_lifts() {
        let l = hensel_lift_cd(3, 2).unwrap();
        assert_eq!(
            (l.c.clone(), l.d.clone()),
            (BigInt::from(4), BigInt::from(1))
        );
        let l = hensel_lift_cd(5, 1).unwrap();
        assert_eq!((l.c, l.d), (BigInt::from(2), BigInt::zero()));
        let l = hensel_lift_cd(5, 3).unwrap();
        assert_eq!(
            (l.c.clone(), l.d.clone()),
            (BigInt::from(57), BigInt::zero())
        );
        assert!((BigInt::from(57 * 57 + 1)).is_multiple_of(&BigInt::from(125)));
        assert!(hensel_lift_cd(5, 0).is_err());
    }

    #[test]
    fn cd_lifts_are_coherent() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let mut prev = hensel_lift_cd(p, 1).unwrap();
            for k in 2..=8 {
                let cur = hensel_lift_cd(p, k).unwrap();
                let m = cur.modulus();
                assert!((&cur.c * &cur.c + &cur.d * &cur.d + BigInt::from(1)).is_multiple_of(&m));
                let pm = prev.modulus();
                assert_eq!(cur.c.mod_floor(&pm), prev.c);
                assert_eq!(cur.d.mod_floor(&pm), prev.d);
                prev = cur;
            }
        }
    }

    #[test]
    fn norm_equation_examples() {
        let sols = solve_norm_equation(14, 3, 4, None).unwrap();
        assert!(sols.contains(&NormEquationSolution {
            y0: 5,
            z0: 2,
            s: 4,
            q: 3
        }));
        assert!(sols.contains(&NormEquationSolution {
            y0: -5,
            z0: 2,
            s: 4,
            q: 3
        }));
        let sols = solve_norm_equation(14, 5, 4, None).unwrap();
        assert!(sols.contains(&NormEquationSolution {
            y0: 11,
            z0: 6,
            s: 4,
            q: 5
        }));
        assert!(sols.contains(&NormEquationSolution {
            y0: -11,
            z0: 6,
            s: 4,
            q: 5
        }));
        let sols = solve_norm_equation(2, 3, 1, None).unwrap();
        assert_eq!(
            sols,
            vec![
                NormEquationSolution {
                    y0: 1,
                    z0: 1,
                    s: 1,
                    q: 3
                },
                NormEquationSolution {
                    y0: -1,
                    z0: 1,
                    s: 1,
                    q: 3
                },
            ]
        );
        assert!(solve_norm_equation(2, 5, 8, None).unwrap().is_empty());
    }

    #[test]
    fn norm_equation_parity_filter() {
        let dir = Direction::from_vector([3, 1, -2].map(BigInt::from)).unwrap();
        let sols = solve_norm_equation(14, 5, 4, Some(&dir)).unwrap();
        // 11 + 6 (3i + j - 2k) has even imaginary part and odd real part
        assert!(sols.iter().any(|s| s.y0 == 11 && s.z0 == 6));
        for s in &sols {
            let q = crate::quat::Quat::new(s.y0, s.z0 * 3, s.z0, -2 * s.z0);
            assert!(q.has_gamma_parity());
        }
    }

    #[test]
    fn norm_equation_overflow_is_reported() {
        assert!(matches!(
            solve_norm_equation(1, 3, 200, None),
            Err(Error::Overflow(_))
        ));
    }
}
