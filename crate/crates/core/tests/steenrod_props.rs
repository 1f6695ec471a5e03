use proptest::prelude::*;

use cohomkit::steenrod::{
    descent_trace, frobenius_power, residue_inequality, sq, steenrod_power, verify_cartan, PrimeContext,
};
use cohomkit::symmfunc::{mult, Partition, SymFunc};

fn partition(max_weight: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=4, 0..=4)
        .prop_filter("weight bound", move |v| v.iter().sum::<u32>() <= max_weight)
        .prop_map(Partition::from_unsorted)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn degree_law_and_identity(p in prime(), mu in partition(6), i in 0u32..4) {
        let ctx = PrimeContext::chern(p).unwrap();
        let f = SymFunc::monomial(mu.clone());
        prop_assert_eq!(steenrod_power(ctx, 0, &f).unwrap(), f.reduce_mod(p).unwrap());
        let img = steenrod_power(ctx, i, &f).unwrap();
        if let Some(w) = img.homogeneous_weight() {
            prop_assert_eq!(w, mu.weight() + (p as u32 - 1) * i);
        }
        if i > mu.weight() {
            prop_assert!(img.is_zero());
        }
    }

    #[test]
    fn top_power_is_frobenius(p in prime(), mu in partition(5)) {
        let ctx = PrimeContext::chern(p).unwrap();
        let f = SymFunc::monomial(mu.clone());
        let top = steenrod_power(ctx, mu.weight(), &f).unwrap();
        prop_assert_eq!(&top, &frobenius_power(ctx, &f));
        let mut pth = SymFunc::one();
        for _ in 0..p {
            pth = mult(&pth, &f);
        }
        prop_assert_eq!(top, pth.reduce_mod(p).unwrap());
    }

    #[test]
    fn cartan(p in prime(), a in partition(3), b in partition(3), i in 0u32..7) {
        let ctx = PrimeContext::chern(p).unwrap();
        prop_assert!(verify_cartan(ctx, i, &SymFunc::monomial(a), &SymFunc::monomial(b)).unwrap());
    }

    #[test]
    fn cartan_on_degree_one_roots(a in partition(3), b in partition(3), i in 0u32..7) {
        let ctx = PrimeContext::stiefel_whitney();
        prop_assert!(verify_cartan(ctx, i, &SymFunc::monomial(a), &SymFunc::monomial(b)).unwrap());
    }

    #[test]
    fn odd_squares_vanish_on_chern_classes(mu in partition(8), j in 0u32..4) {
        let ctx = PrimeContext::chern(2).unwrap();
        prop_assert!(sq(ctx, 2 * j + 1, &SymFunc::monomial(mu)).unwrap().is_zero());
    }

    #[test]
    fn descent_rows_follow_the_closed_form(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), lambda in 2u32..200) {
        prop_assume!(lambda as u64 > p && !(lambda as u64).is_multiple_of(p));
        let t = descent_trace(p, lambda).unwrap();
        let half = ((p - 1) / 2) as u32;
        let a = t.witness_a.expect("witness below (p-1)/2");
        prop_assert!(a <= half && residue_inequality(p, lambda, a));
        prop_assert!((1..a).all(|b| !residue_inequality(p, lambda, b)));
        for r in &t.rows {
            prop_assert_eq!(r.a_j, (r.j * (p as u32 - 1)).div_ceil(lambda));
            prop_assert_eq!(r.deg_factor, r.a_j * lambda - r.j * (p as u32 - 1));
        }
        if lambda % 2 == 0 {
            prop_assert_eq!((half as u64 * lambda as u64) % (p - 1), 0);
        }
    }
}
