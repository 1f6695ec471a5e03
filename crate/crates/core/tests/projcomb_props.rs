use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use cohomkit::linalg::{rank, Field, Matrix};
use cohomkit::projcomb::{
    apply_basis_change, collinear, hansen_witness, normal_form, normal_form_triangle, span_rank, sylvester_gallai_witness,
    triangle_classify, ClassifyOptions, Configuration, SgWitness, Triangle, TriangleKind, Vector,
};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn invertible(d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, d * d)
        .prop_map(move |v| (0..d).map(|r| (0..d).map(|c| rat(v[r * d + c])).collect()).collect::<Matrix>())
        .prop_filter("invertible", move |m| rank(Field::Rational, m) == d)
}

fn scalar() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=3).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn sorted(sets: [Vec<Vector>; 3]) -> [Vec<Vector>; 3] {
    sets.map(|mut s| {
        s.sort();
        s
    })
}

fn forms(d: usize) -> Vec<TriangleKind> {
    let e = |k: usize| -> Vector { (0..d).map(|j| rat((j == k) as i64)).collect() };
    vec![
        TriangleKind::Type1 { a: e(0), b: e(1) },
        TriangleKind::Type2 { a: e(0), b: e(1), c: vec![rat(0); d] },
        TriangleKind::Type2 { a: e(0), b: e(1), c: e(2) },
    ]
}

fn points(dim: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim + 1), n)
        .prop_map(|v| v.into_iter().filter(|p| p.iter().any(|&x| x != 0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn triangle_kind_is_invariant_under_gl_and_scaling(
        which in 0usize..3,
        m in invertible(4),
        s in prop::collection::vec(scalar(), 6),
    ) {
        let kind = &forms(4)[which];
        let t = normal_form_triangle(kind, 4).unwrap();
        let sizes: Vec<usize> = t.sets().iter().map(Vec::len).collect();
        let mut it = s.into_iter();
        let scalars: [Vec<BigRational>; 3] = std::array::from_fn(|k| (0..sizes[k]).map(|_| it.next().unwrap()).collect());
        let img = t.transform(&m).rescale(&scalars).unwrap();
        let cl = triangle_classify(&img, ClassifyOptions::default());
        prop_assert_eq!(cl.kind.name(), kind.name());
        prop_assert!(cl.m_bound_holds());
        let back = apply_basis_change(&img, &cl).unwrap();
        prop_assert_eq!(sorted(back), sorted(normal_form(&cl.kind, 4).unwrap()));
    }

    #[test]
    fn classification_commutes_with_basis_change(t in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 6), m in invertible(3)) {
        let refs: Vec<&[i64]> = t.iter().map(|v| v.as_slice()).collect();
        let Ok(tri) = Triangle::from_ints(&refs[0..2], &refs[2..4], &refs[4..6]) else { return Ok(()) };
        let a = triangle_classify(&tri, ClassifyOptions::default());
        let b = triangle_classify(&tri.transform(&m), ClassifyOptions::default());
        prop_assert_eq!(a.kind.name(), b.kind.name());
    }

    #[test]
    fn sg_witness_is_an_ordinary_line(pts in points(2, 3..=9)) {
        let Ok(cfg) = Configuration::from_ints(2, &pts) else { return Ok(()) };
        prop_assume!(cfg.len() >= 2);
        match sylvester_gallai_witness(&cfg).unwrap() {
            SgWitness::OrdinaryLine(p, q) => {
                prop_assert!(cfg.rank() == 3);
                for r in cfg.points() {
                    if r != &p && r != &q {
                        prop_assert!(!collinear(&p, &q, r));
                    }
                }
            }
            SgWitness::Collinear { rank } => prop_assert!(rank <= 2 && rank == cfg.rank()),
        }
    }

    #[test]
    fn hansen_witness_shape(pts in points(3, 4..=8)) {
        let Ok(cfg) = Configuration::from_ints(3, &pts) else { return Ok(()) };
        prop_assume!(cfg.spans());
        let h = hansen_witness(&cfg).unwrap();
        prop_assert_eq!(h.exceptional.dot(h.normal.coords()), 0);
        let sub: Vec<_> = h.subspace_points.iter().collect();
        prop_assert!(span_rank(&sub) < 3);
        let mut on: Vec<_> = h.subspace_points.clone();
        on.push(h.exceptional.clone());
        on.sort();
        let mut want: Vec<_> = cfg.points().iter().filter(|p| p.dot(h.normal.coords()) == 0).cloned().collect();
        want.sort();
        prop_assert_eq!(on, want);
    }

    #[test]
    fn configuration_json_round_trip(pts in points(2, 1..=6)) {
        let Ok(cfg) = Configuration::from_ints(2, &pts) else { return Ok(()) };
        prop_assert_eq!(Configuration::from_json_str(&cfg.to_json().to_string()).unwrap(), cfg);
    }
}
