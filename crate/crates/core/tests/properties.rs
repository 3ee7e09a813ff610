mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thompson_core::marked::{distance_from_sets, relations_up_to, Marking};
use thompson_core::{classify, dsl, Dyadic, NormalForm, PLMap, Word};

fn element() -> impl Strategy<Value = PLMap> {
    prop::collection::vec((0u32..4, any::<bool>()), 0..10).prop_map(|letters| {
        letters
            .into_iter()
            .fold(PLMap::identity(), |f, (n, inv)| f.compose(&if inv { x(n).invert() } else { x(n) }))
    })
}

fn dyadic_in_unit() -> impl Strategy<Value = Dyadic> {
    (1u32..8).prop_flat_map(|k| (0i64..=(1 << k)).prop_map(move |n| Dyadic::new(n, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(f in element(), g in element(), h in element()) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert!(f.compose(&f.invert()).is_identity());
        prop_assert_eq!(f.compose(&PLMap::identity()), f.clone());
        prop_assert_eq!(f.compose(&g).invert(), g.invert().compose(&f.invert()));
    }

    #[test]
    fn evaluation_follows_word_order(f in element(), g in element(), t in dyadic_in_unit()) {
        prop_assert_eq!(f.compose(&g).apply(&t), f.apply(&g.apply(&t)));
        prop_assert_eq!(f.invert().apply(&f.apply(&t)), t);
    }

    #[test]
    fn normal_form_round_trip(f in element()) {
        let nf = NormalForm::of(&f);
        prop_assert!(nf.is_valid());
        prop_assert_eq!(nf.to_map(), f.clone());
        prop_assert_eq!(nf.is_identity(), f.is_identity());
    }

    #[test]
    fn conjugate_support(f in element(), h in element()) {
        // supp(h^-1 f h) = h^-1(supp f)
        prop_assert_eq!(f.conjugate(&h).support(), h.invert().image(&f.support()));
    }

    #[test]
    fn defragmentation_recomposes(f in element()) {
        let parts = f.defragment();
        let product = parts.iter().fold(PLMap::identity(), |acc, p| acc.compose(p));
        prop_assert_eq!(product, f.clone());
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                prop_assert!(a.support().is_disjoint(&b.support()));
            }
        }
    }

    #[test]
    fn partition_maps_hit_their_targets(
        xs in prop::collection::btree_set(dyadic_in_unit(), 1..5),
        ys in prop::collection::btree_set(dyadic_in_unit(), 1..5),
    ) {
        let inner = |s: std::collections::BTreeSet<Dyadic>| -> Vec<Dyadic> {
            s.into_iter().filter(|d| *d > Dyadic::zero() && *d < Dyadic::one()).collect()
        };
        let (mut xs, mut ys) = (inner(xs), inner(ys));
        let n = xs.len().min(ys.len());
        xs.truncate(n);
        ys.truncate(n);
        for s in [&mut xs, &mut ys] {
            s.insert(0, Dyadic::zero());
            s.push(Dyadic::one());
        }
        let f = PLMap::partition_map(&xs, &ys).unwrap();
        for (a, b) in xs.iter().zip(&ys) {
            prop_assert_eq!(&f.apply(a), b);
        }
    }

    #[test]
    fn dsl_round_trip(seed in any::<u64>(), arity in 1u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, arity, 4);
        prop_assert_eq!(dsl::parse(&dsl::format(&w)).unwrap().with_arity(arity), w);
    }

    #[test]
    fn classification_is_conjugation_invariant(seed in any::<u64>(), k in -2i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 1, 3);
        prop_assume!(!w.canonical().0.is_constant());
        let a = classify(&w).unwrap();
        let b = classify(&w.conjugate_by(&Word::var(1).pow(k))).unwrap();
        let c = classify(&w.canonical().0).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(&a.oscillation_set, &c.oscillation_set);
        prop_assert_eq!(a.depth, c.depth);
    }

    #[test]
    fn substitution_is_a_homomorphism(seed in any::<u64>(), f in element(), g in element()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_word(&mut rng, 2, 3);
        let v = random_word(&mut rng, 2, 3);
        let args = [f, g];
        let lhs = u.times(&v).substitute(&args).unwrap();
        let rhs = u.substitute(&args).unwrap().compose(&v.substitute(&args).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relations_are_monotone(a in element(), b in element()) {
        let m = Marking::new(vec![a, b]).unwrap();
        let small = relations_up_to(&m, 4).unwrap();
        let big = relations_up_to(&m, 5).unwrap();
        prop_assert_eq!(big.truncate(4), small.clone());
        for r in small.iter() {
            let inv: Vec<i32> = r.iter().rev().map(|a| -a).collect();
            prop_assert!(small.contains(&inv));
        }
    }

    #[test]
    fn distance_is_symmetric_and_ultrametric(ms in prop::collection::vec((element(), element()), 3)) {
        let sets: Vec<_> = ms
            .into_iter()
            .map(|(a, b)| relations_up_to(&Marking::new(vec![a, b]).unwrap(), 4).unwrap())
            .collect();
        let d = |i: usize, j: usize| distance_from_sets(&sets[i], &sets[j]);
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2).radius >= d(0, 1).radius.min(d(1, 2).radius));
    }
}
