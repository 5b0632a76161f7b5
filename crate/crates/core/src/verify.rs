//! Seeded invariant suite. Each check samples with its own RNG stream
//! derived from the seed, so adding a check never perturbs the others.

use std::fmt;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{
    are_independent, classify, describe_centralizer, find_commuting_complement, find_period_pair,
    SearchBounds, VerdictKind,
};
use crate::complex::{minset_region, tile_apartment, CornerTable, Diagram, Format};
use crate::error::{Error, Result};
use crate::lattice::{
    enumerate_norm_family, padic_embed, Family, GroupElement, Lattice, LatticeParams, Order,
    Presentation, Word,
};
use crate::numtheory::{hensel_lift_cd, legendre, valuation, LegendreValue};
use crate::quat::Quat;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub params: LatticeParams,
    pub seed: u64,
    pub samples: usize,
    pub bounds: SearchBounds,
    pub golden_dir: Option<PathBuf>,
}

impl VerifyConfig {
    pub fn new(params: LatticeParams, seed: u64) -> Self {
        VerifyConfig {
            params,
            seed,
            samples: 1000,
            bounds: SearchBounds::default(),
            golden_dir: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of one check: Ok(detail) passes, Err(reason) fails.
type Outcome = std::result::Result<String, String>;

struct Ctx {
    cfg: VerifyConfig,
    lattice: Lattice,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Uniform quaternion with coordinates in [−bound, bound].
pub fn random_quat(rng: &mut impl Rng, bound: i64) -> Quat {
    Quat::new(
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
    )
}

/// A freely reduced word of length at most `max_len` with letters drawn from
/// the given families.
pub fn random_word(
    rng: &mut impl Rng,
    lattice: &Lattice,
    max_len: usize,
    families: &[Family],
) -> Word {
    let letters: Vec<_> = families.iter().flat_map(|&f| lattice.letters(f)).collect();
    let len = rng.random_range(0..=max_len);
    let mut w = Vec::with_capacity(len);
    while w.len() < len {
        let g = letters[rng.random_range(0..letters.len())];
        if w.last() != Some(&g.inverse()) {
            w.push(g);
        }
    }
    Word(w)
}

fn random_element(rng: &mut impl Rng, lattice: &Lattice, max_len: usize) -> Result<GroupElement> {
    lattice.evaluate(&random_word(rng, lattice, max_len, &[Family::A, Family::B]))
}

fn random_nontrivial(
    rng: &mut impl Rng,
    lattice: &Lattice,
    max_len: usize,
) -> Result<GroupElement> {
    loop {
        let g = random_element(rng, lattice, max_len)?;
        if !g.is_identity() {
            return Ok(g);
        }
    }
}

/// The (3, 5) presentation document.
pub fn golden_presentation_json() -> Result<String> {
    Ok(Presentation::for_primes(3, 5)?.to_json())
}

/// The 8×8 periodic apartment for ⟨a1 a2⁻¹ a1², b3 b2⁻¹ b3⁻¹ b1⟩.
pub fn golden_apartment_svg() -> Result<String> {
    let pres = Presentation::for_primes(3, 5)?;
    let table = CornerTable::build(&pres)?;
    let alpha: Word = "a1,a2',a1,a1".parse()?;
    let beta: Word = "b3,b2',b3',b1".parse()?;
    let grid = tile_apartment(&pres, &table, &alpha, &beta, 8, 8)?;
    Diagram::from_grid(&grid).render(Format::Svg)
}

type Golden = (&'static str, fn() -> Result<String>);

pub const GOLDEN_FILES: [Golden; 2] = [
    ("presentation_3_5.json", golden_presentation_json),
    ("apartment_3_5.svg", golden_apartment_svg),
];

type Check = (&'static str, fn(&Ctx, &mut ChaCha8Rng) -> Outcome);

const CHECKS: &[Check] = &[
    ("quat.algebra", check_quat_algebra),
    ("quat.m_conjugation", check_m_conjugation),
    ("quat.theta", check_theta),
    ("quat.primitive", check_primitive),
    ("quat.commutation_criterion", check_commutation_criterion),
    ("numtheory.legendre", check_legendre),
    ("numtheory.hensel", check_hensel),
    ("numtheory.norm_equation", check_norm_equation),
    ("lattice.generator_counts", check_generator_counts),
    ("lattice.free_factors", check_free_factors),
    ("lattice.length_additivity", check_length_additivity),
    ("lattice.square_of_pure", check_square_of_pure),
    ("lattice.normal_form", check_normal_form),
    (
        "lattice.commutative_transitivity",
        check_commutative_transitivity,
    ),
    ("lattice.conjugation_lemma", check_conjugation_lemma),
    ("lattice.csa", check_csa),
    ("lattice.padic", check_padic),
    ("abelian.n_invariant", check_n_invariant),
    ("abelian.valuation_parity", check_valuation_parity),
    ("abelian.gcd_one_is_period", check_gcd_one_period),
    ("abelian.conjugation_stability", check_conjugation_stability),
    ("abelian.period_pair", check_period_pair),
    ("complex.corner_table", check_corner_table),
    ("complex.apartment", check_apartment),
    ("complex.minset", check_minset),
];

/// Run every check, then compare golden files when a directory is given.
pub fn run_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let ctx = Ctx {
        lattice: Lattice::new(cfg.params)?,
        cfg: cfg.clone(),
    };
    let mut out = Vec::new();
    for (k, (name, check)) in CHECKS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        let (status, detail) = match check(&ctx, &mut rng) {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        out.push(CheckResult {
            name,
            status,
            detail,
        });
    }
    out.extend(check_golden(cfg));
    Ok(out)
}

fn check_golden(cfg: &VerifyConfig) -> Vec<CheckResult> {
    GOLDEN_FILES
        .iter()
        .map(|(file, make)| {
            let name = if file.ends_with(".json") {
                "golden.presentation"
            } else {
                "golden.apartment_svg"
            };
            let Some(dir) = &cfg.golden_dir else {
                return CheckResult {
                    name,
                    status: Status::Skip,
                    detail: "no golden directory".into(),
                };
            };
            let path = dir.join(file);
            let (status, detail) = match (std::fs::read(&path), make()) {
                (Err(e), _) => (Status::Fail, format!("{}: {e}", path.display())),
                (_, Err(e)) => (Status::Fail, e.to_string()),
                (Ok(bytes), Ok(s)) if bytes == s.as_bytes() => (Status::Pass, String::new()),
                (Ok(_), Ok(_)) => (Status::Fail, format!("{} differs", path.display())),
            };
            CheckResult {
                name,
                status,
                detail,
            }
        })
        .collect()
}

fn check_quat_algebra(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..ctx.cfg.samples {
        let (x, y) = (random_quat(rng, 1_000_000), random_quat(rng, 1_000_000));
        let xy = &x * &y;
        ensure(xy.norm2() == x.norm2() * y.norm2(), || {
            format!("|xy|² for {x}, {y}")
        })?;
        ensure(xy.conj() == &y.conj() * &x.conj(), || {
            format!("conj for {x}, {y}")
        })?;
        ensure(xy.re() == (&y * &x).re(), || {
            format!("Re(xy) ≠ Re(yx) for {x}, {y}")
        })?;
        ensure((&x * &x.conj()).is_real(), || {
            format!("x x̄ not real for {x}")
        })?;
    }
    Ok(format!("{} pairs", ctx.cfg.samples))
}

fn check_m_conjugation(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..ctx.cfg.samples {
        let (x, y) = (random_quat(rng, 1_000_000), random_quat(rng, 1_000_000));
        let lhs = (&(&x * &y) * &x.conj()).m_value();
        let n = x.norm2();
        ensure(lhs == &n * &n * y.m_value(), || {
            format!("m(x y x̄) for {x}, {y}")
        })?;
    }
    Ok(format!("{} pairs", ctx.cfg.samples))
}

fn check_theta(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let count = ctx.cfg.samples / 5;
    for _ in 0..count {
        let (x, y) = (random_quat(rng, 50), random_quat(rng, 50));
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let (tx, ty, txy) = (
            x.theta().map_err(err)?,
            y.theta().map_err(err)?,
            (&x * &y).theta().map_err(err)?,
        );
        ensure(&tx * &ty == txy, || {
            format!("θ not multiplicative on {x}, {y}")
        })?;
        ensure(
            tx.is_orthogonal()
                && tx.det() == num_rational::BigRational::from_integer(BigInt::from(1)),
            || format!("θ({x}) not a rotation"),
        )?;
        let lambda = BigInt::from(rng.random_range(2..100i64));
        ensure(x.scale(&lambda).theta().map_err(err)? == tx, || {
            format!("θ(λx) ≠ θ(x) for {x}")
        })?;
    }
    Ok(format!("{count} pairs"))
}

fn check_primitive(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..ctx.cfg.samples {
        let x = random_quat(rng, 1000).scale(&BigInt::from(rng.random_range(1..30i64)));
        if x.is_zero() {
            continue;
        }
        let p = x.primitive().map_err(err)?;
        ensure(p.primitive().map_err(err)? == p, || {
            format!("primitive not idempotent on {x}")
        })?;
        ensure((-x.clone()).primitive().map_err(err)? == p, || {
            format!("primitive(−x) on {x}")
        })?;
    }
    Ok(format!("{} samples", ctx.cfg.samples))
}

fn check_commutation_criterion(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let mut commuting = 0;
    for i in 0..ctx.cfg.samples {
        let x = random_quat(rng, 1000);
        // every other sample shares x's axis, so both sides are exercised
        let y = if i % 2 == 0 {
            let k = BigInt::from(rng.random_range(-5..=5i64));
            let mut c = x.coords().clone();
            c[0] = BigInt::from(rng.random_range(-1000..=1000i64));
            for v in c.iter_mut().skip(1) {
                *v *= &k;
            }
            Quat::from_coords(c)
        } else {
            random_quat(rng, 1000)
        };
        if x.is_real() || y.is_real() {
            continue;
        }
        let by_product = &x * &y == &y * &x;
        let by_direction = x.direction().map_err(err)? == y.direction().map_err(err)?;
        ensure(by_product == by_direction, || {
            format!("criterion disagrees on {x}, {y}")
        })?;
        commuting += by_product as usize;
    }
    Ok(format!("{commuting} commuting of {}", ctx.cfg.samples))
}

fn check_legendre(_: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    for p in [3u64, 5, 7, 11, 13] {
        let squares: Vec<i64> = (1..p as i64).map(|r| r * r % p as i64).collect();
        for a in -50i64..=50 {
            let r = a.rem_euclid(p as i64);
            let expect = if r == 0 {
                0
            } else if squares.contains(&r) {
                1
            } else {
                -1
            };
            let got = legendre(a, p).map_err(err)?.value();
            ensure(got == expect, || {
                format!("({a}/{p}) = {got}, residues say {expect}")
            })?;
        }
        for n in 1i64..=100 {
            if n % p as i64 == 0 {
                continue;
            }
            let (minus, plus) = (
                legendre(-n, p).map_err(err)?.value(),
                legendre(n, p).map_err(err)?.value(),
            );
            let expect = if p % 4 == 1 { plus } else { -plus };
            ensure(minus == expect, || {
                format!("sign identity fails at n={n}, p={p}")
            })?;
        }
    }
    Ok(String::new())
}

fn check_hensel(_: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    for p in [3u64, 5, 7, 11, 13, 17] {
        let mut prev = hensel_lift_cd(p, 1).map_err(err)?;
        for k in 2..=10 {
            let cur = hensel_lift_cd(p, k).map_err(err)?;
            let m = cur.modulus();
            let f = &cur.c * &cur.c + &cur.d * &cur.d + BigInt::from(1);
            ensure(f.is_multiple_of(&m), || format!("c²+d²+1 ≢ 0 mod {p}^{k}"))?;
            let pm = prev.modulus();
            ensure(
                cur.c.mod_floor(&pm) == prev.c && cur.d.mod_floor(&pm) == prev.d,
                || format!("lift to {p}^{k} does not reduce to {p}^{}", k - 1),
            )?;
            prev = cur;
        }
    }
    Ok(String::new())
}

fn check_norm_equation(_: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    use crate::numtheory::solve_norm_equation;
    for n in [1u128, 2, 6, 14, 50, 126] {
        for q in [3u64, 5, 7] {
            let sols = solve_norm_equation(n, q, 6, None).map_err(err)?;
            let mut brute = Vec::new();
            for s in 1..=6u32 {
                let t = (q as i128).pow(s);
                let mut z = 1i128;
                while n as i128 * z * z <= t {
                    let rest = t - n as i128 * z * z;
                    let y = (rest as f64).sqrt().round() as i128;
                    for y in [y - 1, y, y + 1] {
                        if y >= 0 && y * y == rest && y.gcd(&z) == 1 {
                            brute.push((y, z, s));
                            if y != 0 {
                                brute.push((-y, z, s));
                            }
                        }
                    }
                    z += 1;
                }
            }
            for sol in &sols {
                ensure(
                    sol.y0 * sol.y0 + n as i128 * sol.z0 * sol.z0 == (q as i128).pow(sol.s),
                    || format!("{sol:?} does not solve n={n}"),
                )?;
            }
            let got: Vec<_> = sols.iter().map(|s| (s.y0, s.z0, s.s)).collect();
            brute.sort_by_key(|&(y, z, s)| (s, z, y < 0, y.abs()));
            brute.dedup();
            ensure(got == brute, || {
                format!("n={n}, q={q}: solver {got:?} vs brute {brute:?}")
            })?;
        }
    }
    Ok(String::new())
}

fn check_generator_counts(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let mut primes = vec![3u64, 5, 7, 11, 13, 17, 29, 37, 41];
    primes.extend([ctx.cfg.params.p(), ctx.cfg.params.l()]);
    for p in primes {
        let fam = enumerate_norm_family(p).map_err(err)?;
        ensure(fam.len() as u64 == p + 1, || {
            format!("{} elements of norm {p}", fam.len())
        })?;
    }
    Ok(String::new())
}

fn check_free_factors(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let mut total = 0usize;
    for family in [Family::A, Family::B] {
        let max = if family == Family::A { 6 } else { 4 };
        let letters = lat.letters(family);
        let mut stack: Vec<(Word, GroupElement)> = vec![(Word::empty(), lat.identity())];
        while let Some((w, e)) = stack.pop() {
            if w.len() == max {
                continue;
            }
            for &g in &letters {
                if w.letters().last() == Some(&g.inverse()) {
                    continue;
                }
                let next = e.multiply(&lat.generator(g).map_err(err)?).map_err(err)?;
                let mut nw = w.clone();
                nw.0.push(g);
                ensure(next.length() as usize == nw.len(), || {
                    format!("{nw} has length {}", next.length())
                })?;
                total += 1;
                stack.push((nw, next));
            }
        }
    }
    Ok(format!("{total} reduced pure words"))
}

fn pure_elements(lat: &Lattice, family: Family, max: u32) -> Result<Vec<GroupElement>> {
    Ok(lat
        .ball(max)?
        .into_iter()
        .map(|(_, e)| e)
        .filter(|e| e.exponent(family.other()) == 0)
        .collect())
}

fn check_length_additivity(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let alphas = pure_elements(lat, Family::A, 3).map_err(err)?;
    let betas = pure_elements(lat, Family::B, 3).map_err(err)?;
    for a in &alphas {
        for b in &betas {
            let ab = a.multiply(b).map_err(err)?;
            ensure(ab.length() == a.length() + b.length(), || {
                format!("ℓ({a}·{b})")
            })?;
        }
    }
    Ok(format!("{} pairs", alphas.len() * betas.len()))
}

fn check_square_of_pure(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let mut count = 0;
    for (family, max) in [(Family::A, 3), (Family::B, 2)] {
        let q = lat.params().prime(family);
        for g in pure_elements(lat, family, max).map_err(err)? {
            if g.is_identity() {
                continue;
            }
            let n = describe_centralizer(&g).map_err(err)?.n;
            let coprime = !n.is_multiple_of(&BigInt::from(q));
            let doubles = g.pow(2).length() == 2 * g.length();
            let residue = legendre(-n.clone(), q).map_err(err)? == LegendreValue::One;
            ensure(coprime == doubles && doubles == residue, || {
                format!("{g}: q∤n {coprime}, ℓ(γ²)=2ℓ(γ) {doubles}, (−n/q)=1 {residue}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} elements"))
}

fn check_normal_form(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    for _ in 0..ctx.cfg.samples {
        let g = random_element(rng, lat, 8).map_err(err)?;
        for order in [Order::BThenA, Order::AThenB] {
            let w = lat.normal_form(&g, order).map_err(err)?;
            ensure(lat.evaluate(&w).map_err(err)? == g, || {
                format!("normal form of {g} is {w}")
            })?;
            ensure(
                w.len() as u32 == g.length() && w.is_freely_reduced(),
                || format!("{w} for {g}"),
            )?;
        }
    }
    Ok(format!("{} words", ctx.cfg.samples))
}

/// An element of ⟨γ⟩ or, for period-eligible γ, of its rank-two centralizer.
fn random_commuting(
    rng: &mut ChaCha8Rng,
    g: &GroupElement,
    complement: Option<&GroupElement>,
) -> GroupElement {
    let mut out = g.pow(rng.random_range(-3..=3i64));
    if let Some(c) = complement {
        out = out
            .multiply(&c.pow(rng.random_range(-2..=2i64)))
            .expect("same lattice");
    }
    out
}

fn check_commutative_transitivity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let mut nontrivial = 0;
    for _ in 0..ctx.cfg.samples {
        let g2 = random_nontrivial(rng, lat, 4).map_err(err)?;
        let comp = if rng.random_bool(0.2) {
            find_commuting_complement(&g2, 6).map_err(err)?
        } else {
            None
        };
        let pick = |rng: &mut ChaCha8Rng| -> Result<GroupElement> {
            if rng.random_bool(0.7) {
                Ok(random_commuting(rng, &g2, comp.as_ref()))
            } else {
                random_element(rng, lat, 4)
            }
        };
        let (g1, g3) = (pick(rng).map_err(err)?, pick(rng).map_err(err)?);
        if g1.commutes(&g2) && g2.commutes(&g3) {
            nontrivial += 1;
            ensure(g1.commutes(&g3) && g1.commutes_by_product(&g3), || {
                format!("{g1} ~ {g2} ~ {g3} but {g1} ≁ {g3}")
            })?;
        }
    }
    Ok(format!("{nontrivial} chains"))
}

fn check_conjugation_lemma(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let mut both = [0usize; 2];
    for _ in 0..ctx.cfg.samples {
        let a = random_nontrivial(rng, lat, 4).map_err(err)?;
        let b = if rng.random_bool(0.5) {
            random_commuting(rng, &a, None)
        } else {
            random_element(rng, lat, 4).map_err(err)?
        };
        let lhs = b
            .multiply(&a)
            .and_then(|x| x.multiply(&b.invert()))
            .map_err(err)?
            .commutes(&a);
        let rhs = b.commutes(&a);
        ensure(lhs == rhs, || format!("a = {a}, b = {b}"))?;
        both[lhs as usize] += 1;
    }
    Ok(format!("{} commuting, {} not", both[1], both[0]))
}

fn check_csa(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let mut tested = 0;
    for _ in 0..ctx.cfg.samples {
        let a = random_nontrivial(rng, lat, 4).map_err(err)?;
        let g = random_element(rng, lat, 4).map_err(err)?;
        if g.commutes(&a) {
            continue;
        }
        tested += 1;
        for k in 1..=6 {
            let c = a.pow(k).conjugate_by(&g).map_err(err)?;
            ensure(!c.commutes(&a), || format!("g = {g}, a = {a}, k = {k}"))?;
        }
    }
    Ok(format!("{tested} pairs"))
}

fn check_padic(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let params = lat.params();
    let k = 8;
    let count = ctx.cfg.samples / 5;
    let mut cancelling = 0;
    for _ in 0..count {
        let g = random_element(rng, lat, 4).map_err(err)?;
        let h = random_element(rng, lat, 4).map_err(err)?;
        let gh = g.multiply(&h).map_err(err)?;
        let (eg, eh, egh) = (
            padic_embed(params, &g, k).map_err(err)?,
            padic_embed(params, &h, k).map_err(err)?,
            padic_embed(params, &gh, k).map_err(err)?,
        );
        for (q, mg, mh, mgh) in [
            (params.p(), &eg.p_side, &eh.p_side, &egh.p_side),
            (params.l(), &eg.l_side, &eh.l_side, &egh.l_side),
        ] {
            let det_ok = |m: &crate::lattice::PadicMatrix, e: &GroupElement| {
                m.det() == e.rep().norm2().mod_floor(&m.modulus)
            };
            ensure(det_ok(mg, &g) && det_ok(mgh, &gh), || {
                format!("det at {q} for {g}")
            })?;
            let prod = mg.mul(mh);
            if prod.content_valuation(q) > 0 {
                cancelling += 1;
            }
            ensure(prod.projectively_equal(mgh, q) == Some(true), || {
                format!("embed({g})·embed({h}) vs embed({gh}) at {q}")
            })?;
        }
    }
    Ok(format!("{count} pairs, {cancelling} with cancellation"))
}

fn check_n_invariant(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let count = ctx.cfg.samples / 2;
    for _ in 0..count {
        let g = random_nontrivial(rng, lat, 4).map_err(err)?;
        let comp = if rng.random_bool(0.1) {
            find_commuting_complement(&g, 6).map_err(err)?
        } else {
            None
        };
        let d = random_commuting(rng, &g, comp.as_ref());
        if d.is_identity() {
            continue;
        }
        let (dg, dd) = (
            describe_centralizer(&g).map_err(err)?,
            describe_centralizer(&d).map_err(err)?,
        );
        ensure(dg.dir == dd.dir && dg.n == dd.n, || {
            format!("n differs for {g} and {d}")
        })?;
    }
    Ok(format!("{count} pairs"))
}

fn check_valuation_parity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let count = ctx.cfg.samples / 2;
    for _ in 0..count {
        let g = random_nontrivial(rng, lat, 4).map_err(err)?;
        let c = random_element(rng, lat, 4).map_err(err)?;
        let conj = g.conjugate_by(&c).map_err(err)?;
        let (n1, n2) = (
            describe_centralizer(&g).map_err(err)?.n,
            describe_centralizer(&conj).map_err(err)?.n,
        );
        for q in [lat.params().p(), lat.params().l()] {
            ensure(valuation(&n1, q) % 2 == valuation(&n2, q) % 2, || {
                format!("v_{q}(n) parity changes under conjugation of {g} by {c}")
            })?;
        }
    }
    Ok(format!("{count} pairs"))
}

fn check_gcd_one_period(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let pl = BigInt::from(lat.params().p() * lat.params().l());
    let count = ctx.cfg.samples / 5;
    let mut seen = 0;
    for _ in 0..count {
        let g = random_nontrivial(rng, lat, 4).map_err(err)?;
        let d = describe_centralizer(&g).map_err(err)?;
        if d.purity != crate::abelian::Purity::Mixed || !d.n.gcd(&pl).is_one_value() {
            continue;
        }
        seen += 1;
        let v = classify(&g, ctx.cfg.bounds).map_err(err)?;
        ensure(v.kind == VerdictKind::Z2Period, || {
            format!("{g} classified {}", v.kind)
        })?;
    }
    Ok(format!("{seen} mixed elements"))
}

trait IsOne {
    fn is_one_value(&self) -> bool;
}

impl IsOne for BigInt {
    fn is_one_value(&self) -> bool {
        *self == BigInt::from(1)
    }
}

fn check_conjugation_stability(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let count = ctx.cfg.samples / 5;
    let rank2 = |k: VerdictKind| matches!(k, VerdictKind::Z2Period | VerdictKind::Z2Nonperiod);
    for _ in 0..count {
        let g = random_nontrivial(rng, lat, 3).map_err(err)?;
        let c = random_element(rng, lat, 2).map_err(err)?;
        let conj = g.conjugate_by(&c).map_err(err)?;
        let (v1, v2) = (
            classify(&g, ctx.cfg.bounds).map_err(err)?,
            classify(&conj, ctx.cfg.bounds).map_err(err)?,
        );
        let contradictory =
            |a: VerdictKind, b: VerdictKind| rank2(a) && b == VerdictKind::ZCertified;
        ensure(
            !contradictory(v1.kind, v2.kind) && !contradictory(v2.kind, v1.kind),
            || format!("{g}: {} but conjugate {conj}: {}", v1.kind, v2.kind),
        )?;
        if let Some(cert) = &v1.certificate {
            ensure(cert.check(&g).map_err(err)?, || {
                format!("certificate for {g} does not check")
            })?;
        }
        if v1.kind == VerdictKind::Z2Period {
            ensure(is_eligible(&v1), || {
                format!("{g}: period verdict without Legendre condition")
            })?;
        }
    }
    Ok(format!("{count} pairs"))
}

fn is_eligible(v: &crate::abelian::ClassificationVerdict) -> bool {
    crate::abelian::is_period_eligible(&v.descriptor)
}

fn check_period_pair(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let pair = find_period_pair(ctx.cfg.params, 12).map_err(err)?;
    let pair = pair.ok_or_else(|| "no period pair with r ≤ 12".to_string())?;
    ensure(pair.check().map_err(err)?, || {
        "period pair fails its invariants".into()
    })?;
    ensure(are_independent(&pair.x, &pair.y).map_err(err)?, || {
        "period pair is dependent".into()
    })?;
    Ok(format!("r = {}, n = {}", pair.r, pair.dir.n()))
}

fn check_corner_table(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let mut pairs = vec![(3u64, 5u64), (3, 7), (5, 7)];
    pairs.push(ctx.cfg.params.as_pair());
    for (p, l) in pairs {
        let pres = Presentation::for_primes(p, l).map_err(err)?;
        ensure(pres.squares().len() as u64 == (p + 1) * (l + 1) / 4, || {
            format!("square count for ({p},{l})")
        })?;
        let t = CornerTable::build(&pres).map_err(err)?;
        ensure(t.is_bijective(), || format!("corner maps for ({p},{l})"))?;
        for sq in pres.squares() {
            ensure(sq.holds_in(pres.lattice()).map_err(err)?, || {
                format!("{sq} fails")
            })?;
        }
    }
    Ok(String::new())
}

fn check_apartment(_: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let pres = Presentation::for_primes(3, 5).map_err(err)?;
    let lat = pres.lattice();
    let table = CornerTable::build(&pres).map_err(err)?;
    let alpha: Word = "a1,a2',a1,a1".parse().map_err(err)?;
    let beta: Word = "b3,b2',b3',b1".parse().map_err(err)?;
    let grid = tile_apartment(&pres, &table, &alpha, &beta, 12, 12).map_err(err)?;
    ensure(grid.check_relations(lat).map_err(err)?, || {
        "a tile fails its relation".into()
    })?;
    // bottom then right equals left then top, at every vertex
    for i in 0..=grid.width {
        for j in 0..=grid.height {
            let mut up: Vec<_> = grid.column(0)[..j].to_vec();
            up.extend((0..i).map(|x| grid.h[x][j]));
            let via_left = lat.evaluate(&Word(up)).map_err(err)?;
            ensure(grid.vertex(lat, i, j).map_err(err)? == via_left, || {
                format!("vertex ({i},{j})")
            })?;
        }
    }
    let x = lat.evaluate(&alpha).map_err(err)?;
    ensure(grid.vertex(lat, 4, 0).map_err(err)? == x, || {
        "α translation".into()
    })?;
    Ok(String::new())
}

fn check_minset(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let lat = &ctx.lattice;
    let count = ctx.cfg.samples / 50;
    for _ in 0..count {
        let g = random_nontrivial(rng, lat, 3).map_err(err)?;
        if g.pow(2).length() != 2 * g.length() {
            continue;
        }
        let m = minset_region(lat, &g, 1).map_err(err)?;
        ensure(m.displacement == g.length(), || {
            format!(
                "{g} moves O by {} but min is {}",
                g.length(),
                m.displacement
            )
        })?;
        ensure(m.vertices.iter().any(|(_, v)| v.is_identity()), || {
            format!("O not in min-set of {g}")
        })?;
    }
    Ok(format!("{count} elements"))
}
