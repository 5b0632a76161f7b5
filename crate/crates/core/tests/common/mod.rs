//! Plain i128 quaternion arithmetic, written independently of the library
//! so that tests can cross-check it.

#![allow(dead_code)]

use quatlat_core::{GroupElement, Quat};

pub type Q = [i128; 4];

pub fn mul(a: &Q, b: &Q) -> Q {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn conj(a: &Q) -> Q {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn norm(a: &Q) -> i128 {
    a.iter().map(|c| c * c).sum()
}

pub fn m(a: &Q) -> i128 {
    a[1..].iter().map(|c| c * c).sum()
}

pub fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divide out the content and make the first nonzero coordinate positive.
/// Two quaternions give the same group element iff these agree.
pub fn canon(a: &Q) -> Q {
    let g = a.iter().fold(0, |g, &c| gcd(g, c));
    assert!(g != 0, "zero quaternion");
    let mut out = a.map(|c| c / g);
    if out.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        out = out.map(|c| -c);
    }
    out
}

pub fn same(a: &Q, b: &Q) -> bool {
    canon(a) == canon(b)
}

pub fn mul_c(a: &Q, b: &Q) -> Q {
    canon(&mul(a, b))
}

pub fn pow(a: &Q, k: u32) -> Q {
    (0..k).fold([1, 0, 0, 0], |acc, _| mul_c(&acc, a))
}

pub fn conjugate(a: &Q, by: &Q) -> Q {
    canon(&mul(&mul(by, a), &conj(by)))
}

/// Exponents (r, s) with norm = p^r l^s, if the norm has that shape.
pub fn factor_norm(mut n: i128, p: i128, l: i128) -> Option<(u32, u32)> {
    let (mut r, mut s) = (0, 0);
    while n % p == 0 {
        n /= p;
        r += 1;
    }
    while n % l == 0 {
        n /= l;
        s += 1;
    }
    (n == 1).then_some((r, s))
}

pub fn bidegree(a: &Q, p: i128, l: i128) -> (u32, u32) {
    factor_norm(norm(&canon(a)), p, l).expect("norm is p^r l^s")
}

pub fn length(a: &Q, p: i128, l: i128) -> u32 {
    let (r, s) = bidegree(a, p, l);
    r + s
}

pub fn is_central(a: &Q) -> bool {
    a[1] == 0 && a[2] == 0 && a[3] == 0
}

/// Non-central quaternions commute iff their imaginary parts are parallel.
pub fn commute(a: &Q, b: &Q) -> bool {
    a[2] * b[3] - a[3] * b[2] == 0
        && a[3] * b[1] - a[1] * b[3] == 0
        && a[1] * b[2] - a[2] * b[1] == 0
}

/// Commutation read off the products: xy and yx agree up to a scalar.
pub fn commute_by_product(a: &Q, b: &Q) -> bool {
    same(&mul(a, b), &mul(b, a))
}

/// n = c1² + c2² + c3² for the primitive imaginary direction.
pub fn n_of(a: &Q) -> i128 {
    let g = a[1..].iter().fold(0, |g, &c| gcd(g, c));
    a[1..].iter().map(|c| (c / g) * (c / g)).sum()
}

pub fn valuation(mut n: i128, p: i128) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn pow_mod(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut r = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Euler's criterion.
pub fn legendre(a: i128, p: i128) -> i8 {
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// The mod-4 shape required of an element: odd real part and even
/// imaginary parts for norm 1 mod 4; even i-part, odd rest for 3 mod 4.
pub fn parity_ok(a: &Q) -> bool {
    let odd = |c: i128| c.rem_euclid(2) == 1;
    match norm(a) % 4 {
        1 => odd(a[0]) && !odd(a[1]) && !odd(a[2]) && !odd(a[3]),
        3 => odd(a[0]) && !odd(a[1]) && odd(a[2]) && odd(a[3]),
        _ => false,
    }
}

/// All parity-satisfying quaternions of norm n, one from each ± pair.
pub fn family(n: i128) -> Vec<Q> {
    let b = (n as f64).sqrt() as i128 + 1;
    let mut out = Vec::new();
    for x0 in 0..=b {
        for x1 in -b..=b {
            for x2 in -b..=b {
                for x3 in -b..=b {
                    let x = [x0, x1, x2, x3];
                    if norm(&x) == n && parity_ok(&x) && canon(&x) == x {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Generators of Γ_{3,5} under the library's naming convention, written out
/// by hand.
pub fn gen35(name: &str) -> Q {
    let (base, inv) = match name.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (name, false),
    };
    let q = match base {
        "a1" => [1, 0, 1, 1],
        "a2" => [1, 0, 1, -1],
        "b1" => [1, 2, 0, 0],
        "b2" => [1, 0, 2, 0],
        "b3" => [1, 0, 0, 2],
        _ => panic!("unknown letter {name}"),
    };
    if inv {
        conj(&q)
    } else {
        q
    }
}

pub fn eval35(word: &str) -> Q {
    word.split(',')
        .filter(|s| !s.is_empty())
        .fold([1, 0, 0, 0], |acc, g| mul_c(&acc, &gen35(g)))
}

pub fn to_q(x: &Quat) -> Q {
    x.to_i64s().expect("fits in i64").map(i128::from)
}

pub fn from_q(x: &Q) -> Quat {
    Quat::new(x[0] as i64, x[1] as i64, x[2] as i64, x[3] as i64)
}

pub fn rep(g: &GroupElement) -> Q {
    to_q(g.rep())
}
