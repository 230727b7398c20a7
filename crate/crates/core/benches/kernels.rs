use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ncforms::exec;
use ncforms::frontend::suites::leibniz_witness;
use ncforms::frontend::{load_source, PresentationFile};
use ncforms::homconn::HomConnection;
use ncforms::integrals::image_rank;

fn connection(name: &str) -> HomConnection {
    let (_, text) = load_source(&format!("preset:{name}")).unwrap();
    PresentationFile::parse(&text).unwrap().connection().unwrap()
}

// Caches inside the presentation warm up on the first pass, so each mode gets
// its own fresh connection per sample.
fn modes(c: &mut Criterion) {
    let mut g = c.benchmark_group("sl2");
    g.sample_size(10);
    for (label, seq) in [("parallel", false), ("sequential", true)] {
        g.bench_with_input(BenchmarkId::new("image_rank_L5", label), &seq, |b, &seq| {
            exec::set_sequential(seq);
            b.iter_batched(|| connection("sl2-3d"), |conn| image_rank(&conn, 5, None).unwrap(), criterion::BatchSize::LargeInput);
        });
        g.bench_with_input(BenchmarkId::new("leibniz_200", label), &seq, |b, &seq| {
            exec::set_sequential(seq);
            b.iter_batched(
                || connection("sl2-3d"),
                |conn| leibniz_witness(&conn, 0, 200, 4).unwrap(),
                criterion::BatchSize::LargeInput,
            );
        });
    }
    exec::set_sequential(false);
    g.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);
