mod common;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use common::*;
use quatlat_core::abelian::{are_independent, describe_centralizer, split_signature};
use quatlat_core::numtheory::{
    legendre as lib_legendre, norm_form_solutions, sqrt_mod, sqrt_mod_prime_power,
};
use quatlat_core::{Lattice, Order, Quat, Word};

const PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 29, 41];
const LETTERS: [&str; 10] = [
    "a1", "a1'", "a2", "a2'", "b1", "b1'", "b2", "b2'", "b3", "b3'",
];

fn coord() -> impl Strategy<Value = i128> {
    -1_000_000i128..=1_000_000
}

fn quat() -> impl Strategy<Value = Q> {
    [coord(), coord(), coord(), coord()]
}

/// Words in Γ_{3,5}, not necessarily reduced.
fn word(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(LETTERS.to_vec()), 0..=max).prop_map(|w| w.join(","))
}

fn lat() -> Lattice {
    Lattice::from_primes(3, 5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_matches_oracle(x in quat(), y in quat()) {
        let q = |v: &Q| Quat::new(v[0] as i64, v[1] as i64, v[2] as i64, v[3] as i64);
        let got = (&q(&x) * &q(&y)).to_i64s().unwrap().map(i128::from);
        prop_assert_eq!(got, mul(&x, &y));
    }

    #[test]
    fn primitive_divides_out_content(x in quat(), k in 1i64..50) {
        prop_assume!(x != [0; 4]);
        let big = from_q(&x).scale(&BigInt::from(k));
        let p = big.primitive().unwrap();
        prop_assert_eq!(p.content(), BigInt::from(1));
        prop_assert!(same(&to_q(&p), &x));
    }

    #[test]
    fn theta_is_a_rotation_fixing_the_axis(x in quat()) {
        prop_assume!(!is_central(&x));
        let t = from_q(&x).theta().unwrap();
        prop_assert!(t.is_orthogonal());
        let axis = t.apply_int([x[1] as i64, x[2] as i64, x[3] as i64]);
        let expect = [x[1], x[2], x[3]].map(|c| num_rational::BigRational::from_integer(BigInt::from(c)));
        prop_assert_eq!(axis, expect);
    }

    #[test]
    fn legendre_is_euler(a in -10_000i64..10_000, i in 0usize..PRIMES.len()) {
        let p = PRIMES[i];
        prop_assert_eq!(lib_legendre(a, p).unwrap().value(), legendre(a as i128, p as i128));
    }

    #[test]
    fn square_roots_square(a in 1u64..100_000, i in 0usize..PRIMES.len(), k in 1u32..6) {
        let p = PRIMES[i];
        match sqrt_mod(a, p).unwrap() {
            Some(r) => prop_assert_eq!((r as u128 * r as u128) % p as u128, a as u128 % p as u128),
            None => prop_assert_eq!(legendre(a as i128, p as i128), -1),
        }
        if a % p != 0 {
            let m = BigInt::from(p).pow(k);
            if let Some(r) = sqrt_mod_prime_power(&BigInt::from(a), p, k).unwrap() {
                prop_assert_eq!((&r * &r - BigInt::from(a)) % &m, BigInt::from(0));
            } else {
                prop_assert_eq!(legendre(a as i128, p as i128), -1);
            }
        }
    }

    #[test]
    fn norm_form_solutions_are_complete(n in 1u128..60, target in 1u128..5_000) {
        let got = norm_form_solutions(n, target);
        let mut brute = Vec::new();
        for z0 in 1i128.. {
            if n as i128 * z0 * z0 > target as i128 {
                break;
            }
            for y0 in -(target as i128)..=(target as i128) {
                if y0 * y0 + n as i128 * z0 * z0 == target as i128 && gcd(y0, z0) == 1 {
                    brute.push((y0, z0));
                }
            }
        }
        let mut sorted = got.clone();
        sorted.sort();
        brute.sort();
        prop_assert_eq!(sorted, brute);
    }

    #[test]
    fn words_evaluate_like_the_oracle(w in word(10)) {
        let g = lat().evaluate(&w.parse::<Word>().unwrap()).unwrap();
        let x = eval35(&w);
        prop_assert!(same(&to_q(g.rep()), &x));
        prop_assert_eq!(g.length(), length(&x, 3, 5));
    }

    #[test]
    fn normal_form_is_a_geodesic_for_the_element(w in word(10), a_first in any::<bool>()) {
        let lat = lat();
        let g = lat.evaluate(&w.parse::<Word>().unwrap()).unwrap();
        let order = if a_first { Order::AThenB } else { Order::BThenA };
        let nf = lat.normal_form(&g, order).unwrap();
        prop_assert!(nf.is_freely_reduced());
        prop_assert_eq!(nf.len() as u32, g.length());
        prop_assert!(same(&eval35(&nf.to_string()), &eval35(&w)));
        prop_assert_eq!(nf.free_reduce(), nf.clone());
    }

    #[test]
    fn inverse_and_product(u in word(6), v in word(6)) {
        let lat = lat();
        let g = lat.evaluate(&u.parse::<Word>().unwrap()).unwrap();
        let h = lat.evaluate(&v.parse::<Word>().unwrap()).unwrap();
        prop_assert!(g.multiply(&g.invert()).unwrap().is_identity());
        let gh = g.multiply(&h).unwrap();
        prop_assert!(same(&to_q(gh.rep()), &mul(&eval35(&u), &eval35(&v))));
        prop_assert!(gh.length() <= g.length() + h.length());
    }

    #[test]
    fn n_is_the_direction_norm(w in word(6)) {
        let g = lat().evaluate(&w.parse::<Word>().unwrap()).unwrap();
        prop_assume!(!g.is_identity());
        let d = describe_centralizer(&g).unwrap();
        prop_assert_eq!(d.n.to_i128().unwrap(), n_of(&eval35(&w)));
    }

    #[test]
    fn powers_are_dependent(w in word(4), k in 2i64..4) {
        let g = lat().evaluate(&w.parse::<Word>().unwrap()).unwrap();
        prop_assume!(!g.is_identity());
        let sig = split_signature(&g).unwrap();
        let sig_k = split_signature(&g.pow(k)).unwrap();
        prop_assert_eq!(sig_k, [sig[0] * k, sig[1] * k]);
        prop_assert!(!are_independent(&g, &g.pow(k)).unwrap());
    }
}
