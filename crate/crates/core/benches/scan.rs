use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quadpart::exec::Exec;
use quadpart::theorems::{density_report, scan_dm};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut out = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("parallel", Exec::Parallel));
    out
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan_dm");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::new(name, "m=11,X=50"), &exec, |b, &exec| {
            b.iter(|| scan_dm(11, 50, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("density");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::new(name, "m=4,X=200"), &exec, |b, &exec| {
            b.iter(|| density_report(4, 200, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
