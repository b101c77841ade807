//! Criterion comparison of the rayon-parallel code paths against their
//! sequential reference implementations.
//!
//! Build with the default features for the parallel side; with
//! `--no-default-features` both sides run sequentially.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use birat_surf::cone::{enumerate_minus_one_classes, enumerate_minus_one_classes_seq};
use birat_surf::fibration::{zariski_check_batch, zariski_check_batch_seq, FibreMatrix};
use birat_surf::PointConfig;

fn random_fibre_matrix(rng: &mut StdRng, h: usize) -> FibreMatrix {
    // connected positive off-diagonal pattern: a path plus random chords,
    // scaled so that the diagonal forced by gram . weights = 0 is integral
    let weights: Vec<i64> = (0..h).map(|_| rng.random_range(1..=4)).collect();
    let mut coeff = vec![vec![0i64; h]; h];
    for i in 1..h {
        coeff[i - 1][i] = rng.random_range(1..=3);
        coeff[i][i - 1] = coeff[i - 1][i];
    }
    for i in 0..h {
        for j in (i + 2)..h {
            if rng.random_range(0..4) == 0 {
                coeff[i][j] = rng.random_range(1..=2);
                coeff[j][i] = coeff[i][j];
            }
        }
    }
    let mut gram = vec![vec![0i64; h]; h];
    for i in 0..h {
        for j in 0..h {
            if i != j {
                gram[i][j] = coeff[i][j] * weights[i] * weights[j];
            }
        }
    }
    for i in 0..h {
        let off: i64 = (0..h)
            .filter(|&j| j != i)
            .map(|j| gram[i][j] * weights[j])
            .sum();
        gram[i][i] = -off / weights[i];
    }
    FibreMatrix::new(gram, weights).expect("constructed matrix is valid")
}

fn bench_enumerate(c: &mut Criterion) {
    let cfg = PointConfig::proper_points(8);
    let mut group = c.benchmark_group("minus-one-enumeration-n8");
    group.bench_function("parallel", |b| {
        b.iter(|| enumerate_minus_one_classes(&cfg).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| enumerate_minus_one_classes_seq(&cfg).unwrap())
    });
    group.finish();
}

fn bench_zariski_batch(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let batch: Vec<FibreMatrix> = (0..256)
        .map(|_| random_fibre_matrix(&mut rng, 12))
        .collect();
    let mut group = c.benchmark_group("zariski-batch-256x12");
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || batch.clone(),
            zariski_check_batch,
            BatchSize::SmallInput,
        )
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || batch.clone(),
            zariski_check_batch_seq,
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_enumerate, bench_zariski_batch);
criterion_main!(benches);
