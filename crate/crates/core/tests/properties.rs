use std::sync::Arc;

use fgver_core::covers::{cover_profile, LineSet};
use fgver_core::fields::{ExtensionPair, FieldTable};
use fgver_core::hist::Histogram;
use fgver_core::io::{parse_line_set, parse_point_set, write_line_set, write_point_set, FileKind};
use fgver_core::polar::{make_polar, PolarKind};
use fgver_core::projective::{theta, GeometryContext};
use fixedbitset::FixedBitSet;
use proptest::prelude::*;

const ORDERS: [usize; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 16];

fn field_and_elems() -> impl Strategy<Value = (usize, u8, u8, u8)> {
    proptest::sample::select(ORDERS.to_vec())
        .prop_flat_map(|q| (Just(q), 0..q as u8, 0..q as u8, 0..q as u8))
}

/// A field order and `k` random vectors of length `n` over it.
fn rows(n: usize, k: usize) -> impl Strategy<Value = (usize, Vec<u8>)> {
    proptest::sample::select(vec![2usize, 3, 4, 5])
        .prop_flat_map(move |q| (Just(q), proptest::collection::vec(0..q as u8, n * k)))
}

proptest! {
    #[test]
    fn field_axioms((q, a, b, c) in field_and_elems()) {
        let f = FieldTable::new(q).unwrap();
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            prop_assert_eq!(f.pow(a, q as u64 - 1), 1);
        }
    }

    #[test]
    fn frobenius_trace_and_norm_land_in_the_subfield(
        (q, a) in proptest::sample::select(vec![2usize, 3, 4, 5, 7, 8, 11, 16])
            .prop_flat_map(|q| (Just(q), 0..q * q))
    ) {
        let e = ExtensionPair::new(q).unwrap();
        let ef = e.ext();
        let a = a as u8;
        prop_assert_eq!(e.frob(e.frob(a)), a);
        prop_assert!(e.project(e.trace(a)).is_some());
        prop_assert!(e.project(e.norm(a)).is_some());
        prop_assert_eq!(e.norm(a), ef.mul(a, e.frob(a)));
        let b = ef.exp(7 % (q * q - 1));
        prop_assert_eq!(e.frob(ef.mul(a, b)), ef.mul(e.frob(a), e.frob(b)));
    }

    #[test]
    fn subspaces_are_canonical((q, v) in rows(5, 3)) {
        let ctx = GeometryContext::shared(4, Arc::new(FieldTable::new(q).unwrap()));
        let s = ctx.subspace(&v);
        prop_assert_eq!(&ctx.subspace(s.rows()), &s);
        let pts = ctx.points_of(&s);
        prop_assert_eq!(pts.len() as u64, theta(s.dim() as i64, q as u64).unwrap());
        prop_assert_eq!(&ctx.subspace_of_points(&pts), &s);
        let ann = ctx.annihilator(&s);
        let k = ctx.kernel(&ann);
        prop_assert_eq!(&k, &s);
    }

    #[test]
    fn span_and_meet_obey_the_dimension_formula((q, v) in rows(5, 4)) {
        let ctx = GeometryContext::shared(4, Arc::new(FieldTable::new(q).unwrap()));
        let a = ctx.subspace(&v[..10]);
        let b = ctx.subspace(&v[10..]);
        let join = ctx.span(&a, &b).unwrap();
        let meet = ctx.meet(&a, &b).unwrap();
        prop_assert_eq!(join.rank() + meet.rank(), a.rank() + b.rank());
        prop_assert!(join.contains_subspace(ctx.field(), &a));
        prop_assert!(a.contains_subspace(ctx.field(), &meet));
    }

    #[test]
    fn polar_perp_is_an_involution((q, v) in rows(4, 2)) {
        let w = make_polar(PolarKind::Symplectic, 3, q).unwrap();
        let s = w.ctx().subspace(&v);
        let p = w.perp(&s).unwrap();
        prop_assert_eq!(p.rank() + s.rank(), 4);
        prop_assert_eq!(&w.perp(&p).unwrap(), &s);
    }

    #[test]
    fn line_files_round_trip(picks in proptest::collection::btree_set(0usize..35, 1..20)) {
        let ctx = GeometryContext::shared(3, Arc::new(FieldTable::new(2).unwrap()));
        let all: Vec<_> = ctx.enumerate_subspaces(1).unwrap().collect();
        let l = LineSet::new(ctx.clone(), picks.iter().map(|&i| all[i].clone()).collect()).unwrap();
        let back = parse_line_set(&write_line_set(FileKind::Projective, &l)).unwrap();
        prop_assert_eq!(back.lines.lines(), l.lines());
        let p = cover_profile(&l).unwrap();
        prop_assert_eq!(p.multiplicities.total(), 15);
    }

    #[test]
    fn point_files_round_trip(picks in proptest::collection::btree_set(0usize..85, 0..40)) {
        let ctx = GeometryContext::shared(3, Arc::new(FieldTable::new(4).unwrap()));
        let mut pts = FixedBitSet::with_capacity(ctx.num_points());
        for p in picks {
            pts.insert(p);
        }
        let back = parse_point_set(&write_point_set(&ctx, &pts)).unwrap();
        prop_assert_eq!(back.points, pts);
    }

    #[test]
    fn histogram_merge_is_order_independent(
        a in proptest::collection::vec(0u64..6, 0..30),
        b in proptest::collection::vec(0u64..6, 0..30),
    ) {
        let h = |v: &[u64]| v.iter().copied().fold(Histogram::new(), |mut h, x| { h.add(x); h });
        let ab = h(&a).merge(h(&b));
        prop_assert_eq!(&ab, &h(&b).merge(h(&a)));
        prop_assert_eq!(ab.total(), (a.len() + b.len()) as u64);
        prop_assert_eq!(serde_json::to_string(&ab).unwrap(), serde_json::to_string(&h(&[a, b].concat())).unwrap());
    }
}
