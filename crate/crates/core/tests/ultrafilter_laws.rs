use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starlab::random::{random_function, random_set};
use starlab::{Coordinate, EpSet, EqpFunction, Equality, LazyOracle, UltrafilterHandle};

fn handle() -> impl Strategy<Value = UltrafilterHandle> {
    prop_oneof![
        (0u64..40).prop_map(UltrafilterHandle::principal),
        (-40i64..40).prop_map(UltrafilterHandle::integer_like),
        (any::<u64>(), any::<bool>()).prop_map(|(s, a)| UltrafilterHandle::lazy(s, a)),
    ]
}

fn function() -> impl Strategy<Value = EqpFunction> {
    any::<u64>().prop_map(|s| random_function(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn set() -> impl Strategy<Value = EpSet> {
    any::<u64>().prop_map(|s| random_set(&mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #[test]
    fn exactly_one_of_a_set_and_its_complement(u in handle(), a in set()) {
        prop_assert!(u.member(&a) != u.member(&a.complement()));
    }

    #[test]
    fn filter_laws(u in handle(), a in set(), b in set()) {
        prop_assert!(u.member(&EpSet::all()));
        prop_assert!(!u.member(&EpSet::empty()));
        let (ia, ib) = (u.member(&a), u.member(&b));
        prop_assert_eq!(u.member(&a.intersection(&b)), ia && ib);
        prop_assert_eq!(u.member(&a.union(&b)), ia || ib);
    }

    #[test]
    fn nonprincipal_handles_avoid_finite_sets(seed in any::<u64>(), c in -40i64..40, xs in proptest::collection::vec(0u64..200, 0..6)) {
        let finite = EpSet::finite(xs);
        prop_assert!(!UltrafilterHandle::integer_like(c).member(&finite));
        prop_assert!(!UltrafilterHandle::lazy(seed, true).member(&finite));
        prop_assert!(UltrafilterHandle::lazy(seed, true).member(&finite.complement()));
    }

    #[test]
    fn pushforward_is_functorial(u in handle(), f in function(), g in function(), a in set()) {
        let twice = u.pushforward(&f).pushforward(&g);
        let once = u.pushforward(&g.compose(&f));
        let by_preimage = u.member(&g.compose(&f).preimage(&a));
        prop_assert_eq!(twice.member(&a), by_preimage);
        prop_assert_eq!(once.member(&a), by_preimage);
    }

    #[test]
    fn distinctness_witnesses_separate(u in handle(), v in handle()) {
        if let Equality::Distinct { witness } = u.equal(&v, 200) {
            prop_assert!(u.member(&witness));
            prop_assert!(!v.member(&witness));
        }
    }

    #[test]
    fn oracle_log_is_coherent_and_replayable(seed in any::<u64>(), moduli in proptest::collection::vec(1u64..2000, 1..12)) {
        let o = LazyOracle::new(seed, true);
        let answers: Vec<u64> = moduli.iter().map(|&m| o.residue(m)).collect();
        for (m, r) in moduli.iter().zip(&answers) {
            prop_assert_eq!(o.residue(*m), *r);
        }
        let log = o.log();
        for c in &log {
            prop_assert_eq!(o.residue(c.prime_power), c.residue);
            for d in &log {
                if c.prime_power % d.prime_power == 0 {
                    prop_assert_eq!(c.residue % d.prime_power, d.residue);
                }
            }
        }
        for (m, r) in moduli.iter().zip(&answers) {
            for (n, s) in moduli.iter().zip(&answers) {
                if m % n == 0 {
                    prop_assert_eq!(r % n, *s);
                }
            }
        }
        let again = LazyOracle::new(seed, true);
        for &m in &moduli {
            again.residue(m);
        }
        prop_assert_eq!(again.log(), log);
    }

    #[test]
    fn tensor_projections_agree_with_the_factors(u in handle(), v in handle()) {
        let t = u.tensor(&v);
        let (p1, p2) = (t.projection(Coordinate::First), t.projection(Coordinate::Second));
        let mut probes: Vec<EpSet> = (0..20).map(EpSet::singleton).collect();
        for m in 1..=20 {
            probes.extend((0..m).map(|r| EpSet::periodic(m, [r])));
        }
        for a in &probes {
            prop_assert_eq!(p1.member(a), u.member(a), "{}", a);
            prop_assert_eq!(p2.member(a), v.member(a), "{}", a);
        }
    }
}
