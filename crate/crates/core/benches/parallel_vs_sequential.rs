//! Branch-enumeration verification of one construction over its basis and
//! random inputs, mapped in parallel and sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latticeplan::circuit::{channel_equals_unitary_mod_frame, enumerate_branches, StateVector};
use latticeplan::constructions::{
    build_autoccz, build_fowler_multiplexer_cz, Construction, CzChoice, Target, DEFAULT_SEED,
};
use latticeplan::par;

fn inputs(n: usize) -> Vec<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut v: Vec<StateVector> = (0..1 << n)
        .map(|i| StateVector::basis(n, i).unwrap())
        .collect();
    v.extend((0..20).map(|_| StateVector::random(n, &mut rng).unwrap()));
    v
}

fn check(c: &Construction, input: &StateVector) -> bool {
    let Target::Fixed(gates) = &c.target else {
        unreachable!("benchmarked constructions have fixed targets")
    };
    let branches = enumerate_branches(&c.circuit, input).unwrap();
    channel_equals_unitary_mod_frame(&branches, input, gates, &c.data_qubits).unwrap()
}

fn bench(crit: &mut Criterion) {
    let cases = [
        build_autoccz([0, 1, 2]).unwrap().1,
        build_fowler_multiplexer_cz(CzChoice::Apply).unwrap(),
    ];
    let mut group = crit.benchmark_group("verify");
    group.sample_size(10);
    for c in &cases {
        let xs = inputs(c.num_data_qubits());
        group.bench_with_input(BenchmarkId::new("parallel", &c.name), &xs, |b, xs| {
            b.iter(|| assert!(par::map(xs, |x| check(c, x)).into_iter().all(|ok| ok)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", &c.name), &xs, |b, xs| {
            b.iter(|| {
                assert!(par::map_sequential(xs, |x| check(c, x))
                    .into_iter()
                    .all(|ok| ok))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
