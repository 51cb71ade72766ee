use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use fgver_core::analysis::{bar_set, tight_check, two_char_check, CompanionBundle};
use fgver_core::constructions::hexagon::{hexagon_lines, hexagon_project_even};
use fgver_core::constructions::singer::singer_cycle;
use fgver_core::covers::{check_cover_counts, is_dual_projective, is_dual_symplectic};
use fgver_core::fields::{ExtensionPair, FieldTable};
use fgver_core::polar::{build_embedding, make_polar, PolarKind};
use fgver_core::projective::GeometryContext;

fn fields(c: &mut Criterion) {
    c.bench_function("field table GF(256)", |b| b.iter(|| FieldTable::new(black_box(256)).unwrap()));
    c.bench_function("extension GF(16)/GF(4)", |b| b.iter(|| ExtensionPair::new(black_box(4)).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let ctx = GeometryContext::shared(4, Arc::new(FieldTable::new(2).unwrap()));
    c.bench_function("lines of PG(4,2)", |b| {
        b.iter(|| ctx.enumerate_subspaces(1).unwrap().count())
    });
    c.bench_function("t.i. lines of W(5,3)", |b| {
        let w = make_polar(PolarKind::Symplectic, 5, 3).unwrap();
        b.iter(|| w.ti_lines().len())
    });
}

fn covers(c: &mut Criterion) {
    let orbits = singer_cycle(4, 2).unwrap().line_orbits().unwrap();
    let l = orbits.last().unwrap();
    c.bench_function("cover counts Singer orbit PG(4,2)", |b| b.iter(|| check_cover_counts(l).unwrap()));
    c.bench_function("dual projective Singer orbit PG(4,2)", |b| {
        b.iter(|| is_dual_projective(l).unwrap())
    });

    let model = hexagon_lines(2).unwrap();
    let (hex, w) = hexagon_project_even(&model).unwrap();
    c.bench_function("dual symplectic hexagon W(5,2)", |b| {
        b.iter(|| is_dual_symplectic(&hex, &w).unwrap())
    });
}

fn point_sets(c: &mut Criterion) {
    let spread = &singer_cycle(3, 3).unwrap().line_orbits().unwrap()[0];
    let emb = build_embedding(3, 3).unwrap();
    let bar = bar_set(&emb, spread).unwrap();
    c.bench_function("two-character check PG(3,9)", |b| {
        b.iter(|| two_char_check(emb.big(), &bar, None))
    });

    let model = hexagon_lines(2).unwrap();
    let (hex, w) = hexagon_project_even(&model).unwrap();
    let bundle = CompanionBundle::new(w).unwrap();
    let bar = bar_set(&bundle.emb, &hex).unwrap();
    c.bench_function("tight check H(5,4)", |b| {
        b.iter(|| tight_check(&bundle.herm, &bar, None).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = fields, enumeration, covers, point_sets
}
criterion_main!(benches);
