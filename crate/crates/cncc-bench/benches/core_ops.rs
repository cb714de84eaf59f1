use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cncc::{
    relay_bit_error, run_round, ChannelOverrides, GeneratorMatrix, SimConfig, SnrGeometry,
    Trellis, WeightEnumerator,
};

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_enumeration");
    for (name, gen, horizon) in [
        ("rate_2_3_h10", GeneratorMatrix::systematic_3_2_3(), 10u32),
        ("rate_1_2_h12", GeneratorMatrix::systematic_4_2_3(), 12),
    ] {
        let trellis = Trellis::build(&gen).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| WeightEnumerator::enumerate(black_box(&trellis), black_box(horizon)).unwrap())
        });
    }
    group.finish();
}

fn bench_round(c: &mut Criterion) {
    let cfg = SimConfig {
        generator: GeneratorMatrix::systematic_3_2_3(),
        antennas: 2,
        nakagami_m: 2,
        packet_len: 10,
        eta: 2.0,
        beta: 5.0,
        interleaver_depth: 100,
        master_seed: 1,
        overrides: ChannelOverrides::default(),
    };
    let trellis = Trellis::build(&cfg.generator).unwrap();
    let geometry = SnrGeometry::from_gamma_rd(10.0, cfg.eta, cfg.beta).unwrap();
    let mut round = 0u64;
    c.bench_function("protocol_round", |b| {
        b.iter(|| {
            round += 1;
            run_round(black_box(&cfg), &trellis, &geometry, 0, round)
        })
    });
}

fn bench_bound(c: &mut Criterion) {
    c.bench_function("relay_bit_error_m3_M3", |b| {
        b.iter(|| relay_bit_error(black_box(3), black_box(3), black_box(250.0)))
    });
}

criterion_group!(benches, bench_enumeration, bench_round, bench_bound);
criterion_main!(benches);
