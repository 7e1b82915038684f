use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cmbasin::exec::Exec;
use cmbasin::intersect::{haar_integral_with, IntegralOptions};
use cmbasin::lattice::{make_datum, Mat2};
use cmbasin::levels::{subgroup_build, LevelSpec};
use cmbasin::padic::{int, pow_p, ExtKind, QuadExtDesc};

fn bench_integral(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_integral");
    group.sample_size(20);
    let cases = [
        ("p5_full_depth4", 5, LevelSpec::Full, 2, [1i64, 0], Some(4)),
        ("p3_principal1_s8", 3, LevelSpec::Principal(1), 8, [1, 0], None),
        ("p3_iwahori2_s6", 3, LevelSpec::Iwahori(2), 6, [1, 1], None),
    ];
    for (name, p, spec, s, row, uniform_depth) in cases {
        let ext = QuadExtDesc::standard(p, ExtKind::Unramified).unwrap();
        let d = make_datum(&Mat2::diag(int(1), pow_p(p, -s)), &ext).unwrap();
        let u = subgroup_build(&spec, p).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let opts = IntegralOptions { exec, uniform_depth, record_cells: false };
            group.bench_with_input(BenchmarkId::new(name, format!("{exec:?}")), &opts, |b, opts| {
                b.iter(|| haar_integral_with(&d, row, &u, opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_integral);
criterion_main!(benches);
