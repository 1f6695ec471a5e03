use num_bigint::BigInt;
use proptest::prelude::*;

use cohomkit::symmfunc::{
    elementary_to_monomial, monomial_to_elementary, mult, mult_monomial, parse_partition, parse_symfunc, product_oracle, Partition,
    SymFunc,
};

fn partition(max_weight: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=4, 0..=4)
        .prop_filter("weight bound", move |v| v.iter().sum::<u32>() <= max_weight)
        .prop_map(Partition::from_unsorted)
}

fn symfunc() -> impl Strategy<Value = SymFunc> {
    prop::collection::vec((partition(5), -5i64..=5), 0..4).prop_map(|terms| {
        let mut f = SymFunc::zero();
        for (p, c) in terms {
            f.add_term(p, BigInt::from(c));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_matches_variable_expansion(a in partition(6), b in partition(6)) {
        prop_assert_eq!(mult_monomial(&a, &b), product_oracle(&a, &b));
    }

    #[test]
    fn product_is_commutative_and_unital(f in symfunc(), g in symfunc()) {
        prop_assert_eq!(mult(&f, &g), mult(&g, &f));
        prop_assert_eq!(mult(&f, &SymFunc::one()), f);
    }

    #[test]
    fn product_is_associative(f in symfunc(), g in symfunc(), h in symfunc()) {
        prop_assume!(f.len() <= 2 && g.len() <= 2 && h.len() <= 2);
        prop_assert_eq!(mult(&mult(&f, &g), &h), mult(&f, &mult(&g, &h)));
    }

    #[test]
    fn product_distributes(f in symfunc(), g in symfunc(), h in symfunc()) {
        prop_assert_eq!(mult(&f, &g.add(&h)), mult(&f, &g).add(&mult(&f, &h)));
    }

    #[test]
    fn text_round_trip(f in symfunc()) {
        prop_assert_eq!(parse_symfunc(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn partition_round_trip(p in partition(12)) {
        prop_assume!(!p.is_empty());
        prop_assert_eq!(parse_partition(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(parse_partition(&p.to_power_notation()).unwrap(), p);
    }

    #[test]
    fn json_round_trip(f in symfunc()) {
        prop_assert_eq!(SymFunc::from_json_str(&f.to_json().to_string()).unwrap(), f);
    }

    #[test]
    fn reduction_is_a_ring_map(f in symfunc(), g in symfunc(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let lhs = mult(&f, &g).reduce_mod(p).unwrap();
        let rhs = mult(&f.reduce_mod(p).unwrap(), &g.reduce_mod(p).unwrap()).reduce_mod(p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chern_basis_round_trip(p in partition(7)) {
        let f = SymFunc::monomial(p);
        let c = monomial_to_elementary(&f).unwrap();
        prop_assert_eq!(elementary_to_monomial(&c), f);
    }
}
