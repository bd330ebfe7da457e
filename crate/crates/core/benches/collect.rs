//! Sequential against parallel execution on the hot paths.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use engel_core::nq::{nilpotent_quotient, random_element, NqOptions};
use engel_core::oracle::{enumerate, right_2_engel_set, DEFAULT_GUARD};
use engel_core::par::Execution;
use engel_core::pcp::consistency_violations;
use engel_core::verify::corpus;
use engel_core::words::parse_presentation;

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn quotient(src: &str, max_class: u32, execution: Execution) -> engel_core::nq::NqState {
    let p = parse_presentation(src).unwrap();
    let opts = NqOptions {
        max_class,
        execution,
        ..NqOptions::default()
    };
    nilpotent_quotient(&p, &opts).unwrap()
}

fn bench_nq(c: &mut Criterion) {
    let mut g = c.benchmark_group("nilpotent_quotient");
    g.sample_size(10);
    for mode in MODES {
        g.bench_with_input(BenchmarkId::new("B(2,4)", format!("{mode:?}")), &mode, |b, &m| {
            b.iter(|| quotient(corpus::B24, 32, m))
        });
        g.bench_with_input(BenchmarkId::new("N class 5", format!("{mode:?}")), &mode, |b, &m| {
            b.iter(|| quotient(corpus::N, 5, m))
        });
    }
    g.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let s = quotient(corpus::B24, 32, Execution::default());
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for mode in MODES {
        g.bench_with_input(BenchmarkId::new("enumerate B(2,4)", format!("{mode:?}")), &mode, |b, &m| {
            b.iter(|| enumerate(&s.pcp, DEFAULT_GUARD, m).unwrap())
        });
        let group = enumerate(&s.pcp, DEFAULT_GUARD, mode).unwrap();
        g.bench_with_input(BenchmarkId::new("R2 of B(2,4)", format!("{mode:?}")), &mode, |b, &m| {
            b.iter(|| right_2_engel_set(&group, m))
        });
    }
    g.finish();
}

fn bench_collect(c: &mut Criterion) {
    let s = quotient(corpus::N, 32, Execution::default());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let xs: Vec<_> = (0..64).map(|_| random_element(&s.pcp, &mut rng, 3)).collect();
    c.bench_function("collect: 64 products in N", |b| {
        b.iter(|| {
            for w in xs.windows(2) {
                black_box(s.pcp.multiply(&w[0], &w[1]).unwrap());
            }
        })
    });
    let mut g = c.benchmark_group("consistency");
    g.sample_size(10);
    for mode in MODES {
        g.bench_with_input(BenchmarkId::new("all overlaps of N", format!("{mode:?}")), &mode, |b, &m| {
            b.iter(|| consistency_violations(&s.pcp, true, m).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_nq, bench_oracle, bench_collect);
criterion_main!(benches);
