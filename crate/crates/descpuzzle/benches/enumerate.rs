use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use descpuzzle::permcore::Alphabet;
use descpuzzle::puzzlegrid::{enumerate_puzzles, Exec};
use descpuzzle::sepdesc::{boundary, sepdesc_catalog, SepTheory};
use descpuzzle::{EncodedPair, LabelString};

fn pair(lambda: &str, mu: &str, k: u8, d: u8) -> EncodedPair {
    let lambda = LabelString::parse(lambda, Alphabet::blank_then(k + 1, d)).unwrap();
    let mu = LabelString::parse(mu, Alphabet::then_blank(k)).unwrap();
    let n = lambda.len();
    EncodedPair { lambda, mu, k, d, m: 0, n }
}

fn bench(c: &mut Criterion) {
    let cases = [
        ("n7", pair("_3_43_4", "2_1___0", 2, 4)),
        ("n10", pair("_3_43_4444", "2_1___0___", 2, 4)),
    ];
    let mut g = c.benchmark_group("sepdesc_enumerate");
    g.sample_size(20);
    for theory in [SepTheory::H, SepTheory::KT] {
        for (name, p) in &cases {
            let (lab, l, m) = boundary(p);
            let cat = sepdesc_catalog(theory, lab.k, lab.d);
            for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
                let id = BenchmarkId::new(format!("{theory:?}/{label}"), name);
                g.bench_function(id, |b| b.iter(|| enumerate_puzzles(&cat, &l, &m, None, exec).unwrap().len()));
            }
        }
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
