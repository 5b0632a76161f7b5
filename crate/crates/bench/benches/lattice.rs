use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quatlat_bench::{lattice_3_5, sample_elements, word_stream, APARTMENT};
use quatlat_core::abelian::{classify, find_commuting_complement, find_period_pair, SearchBounds};
use quatlat_core::complex::{minset_region, tile_apartment, CornerTable};
use quatlat_core::lattice::padic_embed;
use quatlat_core::numtheory::solve_norm_equation;
use quatlat_core::{LatticeParams, Order, Presentation};

fn words(c: &mut Criterion) {
    let lat = lattice_3_5();
    let mut g = c.benchmark_group("word");
    for len in [4, 16, 64] {
        let ws = word_stream(&lat, len, 32);
        g.bench_with_input(BenchmarkId::new("evaluate", len), &ws, |b, ws| {
            b.iter(|| {
                ws.iter()
                    .map(|w| lat.evaluate(w).unwrap().length())
                    .sum::<u32>()
            })
        });
        let elems: Vec<_> = ws.iter().map(|w| lat.evaluate(w).unwrap()).collect();
        g.bench_with_input(BenchmarkId::new("normal_form", len), &elems, |b, es| {
            b.iter(|| {
                es.iter()
                    .map(|e| lat.normal_form(e, Order::BThenA).unwrap().len())
                    .sum::<usize>()
            })
        });
    }
    g.finish();
}

fn presentations(c: &mut Criterion) {
    let mut g = c.benchmark_group("presentation");
    for (p, l) in [(3, 5), (7, 11), (13, 17)] {
        g.bench_function(format!("derive_{p}_{l}"), |b| {
            b.iter(|| {
                Presentation::for_primes(black_box(p), black_box(l))
                    .unwrap()
                    .squares()
                    .len()
            })
        });
    }
    g.finish();
}

fn searches(c: &mut Criterion) {
    let lat = lattice_3_5();
    let elems = sample_elements(&lat);
    let mut g = c.benchmark_group("search");
    g.bench_function("norm_equation_n14_s12", |b| {
        b.iter(|| {
            solve_norm_equation(black_box(14), 3, 12, None)
                .unwrap()
                .len()
        })
    });
    for (name, e) in &elems {
        g.bench_with_input(BenchmarkId::new("classify", name), e, |b, e| {
            b.iter(|| classify(e, SearchBounds::default()).unwrap().kind)
        });
    }
    g.bench_function("complement_period", |b| {
        b.iter(|| {
            find_commuting_complement(&elems[2].1, 12)
                .unwrap()
                .is_some()
        })
    });
    for (p, l) in [(3, 5), (7, 11)] {
        let params = LatticeParams::new(p, l).unwrap();
        g.bench_function(format!("period_pair_{p}_{l}"), |b| {
            b.iter(|| find_period_pair(params, 12).unwrap().unwrap().r)
        });
    }
    g.finish();
}

fn complex(c: &mut Criterion) {
    let pres = Presentation::for_primes(3, 5).unwrap();
    let table = CornerTable::build(&pres).unwrap();
    let (alpha, beta) = (APARTMENT.0.parse().unwrap(), APARTMENT.1.parse().unwrap());
    let mut g = c.benchmark_group("complex");
    for n in [8, 32] {
        g.bench_function(format!("tile_{n}"), |b| {
            b.iter(|| {
                tile_apartment(&pres, &table, &alpha, &beta, n, n)
                    .unwrap()
                    .width
            })
        });
    }
    let lat = pres.lattice();
    let elems = sample_elements(lat);
    g.bench_function("minset_glide_r3", |b| {
        b.iter(|| minset_region(lat, &elems[1].1, 3).unwrap().vertices.len())
    });
    g.bench_function("padic_embed_k8", |b| {
        b.iter(|| padic_embed(lat.params(), &elems[4].1, 8).unwrap().k)
    });
    g.finish();
}

criterion_group!(benches, words, presentations, searches, complex);
criterion_main!(benches);
