use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starlab::extension::cantor_pair;
use starlab::random::{random_function, random_set};
use starlab::{EpSet, EqpFunction};

fn function() -> impl Strategy<Value = EqpFunction> {
    any::<u64>().prop_map(|s| random_function(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn set() -> impl Strategy<Value = EpSet> {
    any::<u64>().prop_map(|s| random_set(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn sample_points(f: &EqpFunction, g: &EqpFunction) -> Vec<u64> {
    let end = f.threshold() + g.threshold() + 4 * f.modulus() * g.modulus() + 16;
    (0..end).chain([97, 1_000, 65_537, 1_000_003]).collect()
}

fn revalidates(f: &EqpFunction) -> bool {
    EqpFunction::new(
        f.prefix_values().to_vec(),
        f.modulus(),
        f.branches().to_vec(),
    )
    .is_ok_and(|g| &g == f)
}

proptest! {
    #[test]
    fn composition_is_pointwise(f in function(), g in function()) {
        let h = g.compose(&f);
        prop_assert!(revalidates(&h));
        for x in sample_points(&f, &g) {
            prop_assert_eq!(h.eval_u64(x), g.eval(&f.eval_u64(x)));
        }
    }

    #[test]
    fn equalizer_matches_brute_force(f in function(), g in function()) {
        let e = f.equalizer(&g);
        for x in 0..1000u64 {
            prop_assert_eq!(e.contains_u64(x), f.eval_u64(x) == g.eval_u64(x), "x = {}", x);
        }
    }

    #[test]
    fn preimage_matches_brute_force(f in function(), a in set()) {
        let p = f.preimage(&a);
        for x in 0..1000u64 {
            prop_assert_eq!(p.contains_u64(x), a.contains(&f.eval_u64(x)), "x = {}", x);
        }
    }

    #[test]
    fn comparison_partitions(f in function(), g in function()) {
        let c = f.compare(&g);
        prop_assert!(c.less.intersection(&c.equal).is_empty());
        prop_assert!(c.less.intersection(&c.greater).is_empty());
        prop_assert!(c.equal.intersection(&c.greater).is_empty());
        prop_assert!(c.less.union(&c.equal).union(&c.greater).is_all());
        for x in sample_points(&f, &g) {
            let (a, b) = (f.eval_u64(x), g.eval_u64(x));
            prop_assert_eq!(c.less.contains_u64(x), a < b);
            prop_assert_eq!(c.greater.contains_u64(x), a > b);
        }
    }

    #[test]
    fn constructions_stay_in_the_class(f in function(), g in function(), a in set()) {
        let chi = EqpFunction::characteristic(&a);
        let pair = f.pair(&g);
        let monus = f.monus(&g);
        for h in [&chi, &pair, &monus] {
            prop_assert!(revalidates(h));
        }
        for x in sample_points(&f, &g) {
            let (fx, gx) = (f.eval_u64(x), g.eval_u64(x));
            prop_assert_eq!(chi.eval_u64(x), BigInt::from(a.contains_u64(x) as u8));
            prop_assert_eq!(pair.eval_u64(x), cantor_pair(&fx, &gx));
            let diff = &fx - &gx;
            prop_assert_eq!(monus.eval_u64(x), diff.max(BigInt::from(0)));
        }
    }

    #[test]
    fn literals_round_trip(f in function()) {
        prop_assert_eq!(f.to_string().parse::<EqpFunction>().unwrap(), f);
    }
}
