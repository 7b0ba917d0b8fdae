use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fhjam_bench::{awgn_transition, channel, codebook, received, small_grids};
use fhjam_core::minimax::{blahut_arimoto, minimax_estimate, MinimaxOptions};
use fhjam_core::{rng, waterfill, BlockMatrix, JamBudget};

fn bench_waterfill(c: &mut Criterion) {
    let sigma2: Vec<f64> = (1..=64).map(|k| 0.5 + f64::from(k % 7)).collect();
    c.bench_function("waterfill/64 bands", |b| b.iter(|| waterfill(black_box(&sigma2), 10.0)));
}

fn bench_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode");
    for &(n, m) in &[(16usize, 16usize), (32, 256), (64, 4096)] {
        let cb = codebook(n, m);
        let y = received(&cb);
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_m{m}")), &y, |b, y| {
            b.iter(|| cb.decode(black_box(y)))
        });
    }
    group.finish();
}

fn bench_transmit(c: &mut Criterion) {
    let ch = channel();
    let cb = codebook(64, 2);
    let x = cb.encode(0).unwrap();
    let jam = BlockMatrix::zeros(2, 64);
    let mut rng = rng::derive(3, &[]);
    c.bench_function("transmit_block/n64", |b| b.iter(|| ch.transmit_block(&x, &jam, &mut rng)));
}

fn bench_blahut(c: &mut Criterion) {
    let (w, cost) = awgn_transition();
    c.bench_function("blahut_arimoto/awgn 33x242", |b| {
        b.iter(|| blahut_arimoto(black_box(&w), Some((&cost, 3.0)), 1e-3))
    });
}

fn bench_minimax(c: &mut Criterion) {
    let ch = channel();
    let budget = JamBudget::new(1.0, 2).unwrap();
    let grids = small_grids();
    let opts = MinimaxOptions { iterations: 5, ..MinimaxOptions::default() };
    let mut group = c.benchmark_group("minimax");
    group.sample_size(10);
    group.bench_function("two bands, 5 rounds", |b| {
        b.iter(|| minimax_estimate(&ch, 2.0, &budget, &grids, &opts))
    });
    group.finish();
}

criterion_group!(benches, bench_waterfill, bench_decode, bench_transmit, bench_blahut, bench_minimax);
criterion_main!(benches);
