use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use htm::{cover, point_to_id, simplify, to_ranges, CoverParams, Halfspace, Region, UnitVector};
use rand::{Rng, SeedableRng};

fn lookup(c: &mut Criterion) {
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let points: Vec<UnitVector> = (0..1024)
        .map(|_| UnitVector::from_lonlat_deg(rng.gen_range(0.0..360.0), rng.gen_range(-90.0..90.0)))
        .collect();
    let mut group = c.benchmark_group("point_to_id");
    for depth in [10, 20, 26] {
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| {
            b.iter(|| {
                for &p in &points {
                    black_box(point_to_id(p, d).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn cap(radius_deg: f64) -> Region {
    Region::from_convex(htm::Convex::new(vec![Halfspace::cap(
        UnitVector::from_lonlat_deg(185.0, 32.0),
        radius_deg.to_radians(),
    )]))
}

fn covers(c: &mut Criterion) {
    let mut group = c.benchmark_group("cover");
    for radius in [0.1, 1.0, 10.0] {
        let region = simplify(&cap(radius)).unwrap().region();
        let params = CoverParams {
            max_depth: 14,
            ..CoverParams::default()
        };
        group.bench_with_input(BenchmarkId::new("cap", radius), &region, |b, r| {
            b.iter(|| black_box(cover(r, &params).unwrap()))
        });
        let built = cover(&region, &params).unwrap();
        group.bench_with_input(BenchmarkId::new("to_ranges", radius), &built, |b, cv| {
            b.iter(|| black_box(to_ranges(cv, 64).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, lookup, covers);
criterion_main!(benches);
