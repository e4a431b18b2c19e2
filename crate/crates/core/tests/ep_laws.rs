use proptest::prelude::*;
use starlab::{Classification, EpSet, EqpFunction};

fn ep_set() -> impl Strategy<Value = EpSet> {
    (0u64..12, 1u64..13).prop_flat_map(|(threshold, modulus)| {
        (
            proptest::collection::vec(any::<bool>(), threshold as usize),
            proptest::collection::vec(any::<bool>(), modulus as usize),
        )
            .prop_map(move |(below, tail)| {
                let prefix = (0..threshold).filter(|&x| below[x as usize]);
                let residues = (0..modulus).filter(|&r| tail[r as usize]);
                EpSet::new(threshold, prefix, modulus, residues).unwrap()
            })
    })
}

fn window(sets: &[&EpSet]) -> u64 {
    sets.iter()
        .map(|s| s.threshold() + 4 * s.modulus())
        .max()
        .unwrap()
        * 2
        + 24
}

fn agree(a: &EpSet, b: &EpSet) -> bool {
    (0..a.decision_window(b)).all(|x| a.contains_u64(x) == b.contains_u64(x))
}

proptest! {
    #[test]
    fn boolean_laws(a in ep_set(), b in ep_set(), c in ep_set()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersection(&b), b.intersection(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.intersection(&b).intersection(&c), a.intersection(&b.intersection(&c)));
        prop_assert_eq!(
            a.intersection(&b.union(&c)),
            a.intersection(&b).union(&a.intersection(&c))
        );
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersection(&b.complement()));
        prop_assert_eq!(a.intersection(&b).complement(), a.complement().union(&b.complement()));
        prop_assert!(a.intersection(&a.complement()).is_empty());
        prop_assert!(a.union(&a.complement()).is_all());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.difference(&b), a.intersection(&b.complement()));
    }

    #[test]
    fn operations_are_pointwise(a in ep_set(), b in ep_set()) {
        let (u, i, d, c) = (a.union(&b), a.intersection(&b), a.difference(&b), a.complement());
        for x in 0..window(&[&a, &b]) {
            let (p, q) = (a.contains_u64(x), b.contains_u64(x));
            prop_assert_eq!(u.contains_u64(x), p || q);
            prop_assert_eq!(i.contains_u64(x), p && q);
            prop_assert_eq!(d.contains_u64(x), p && !q);
            prop_assert_eq!(c.contains_u64(x), !p);
        }
    }

    #[test]
    fn classification_matches_counting(a in ep_set()) {
        let n = window(&[&a]);
        let members: Vec<u64> = (0..n).filter(|&x| a.contains_u64(x)).collect();
        // Membership is periodic past the threshold, so the second half of
        // the window repeats the tail.
        let tail_start = a.threshold();
        let tail_all = (tail_start..n).all(|x| a.contains_u64(x));
        let tail_none = (tail_start..n).all(|x| !a.contains_u64(x));
        let expected = if members.is_empty() {
            Classification::Empty
        } else if tail_none {
            Classification::Finite(members.clone())
        } else if tail_all {
            Classification::Cofinite((0..n).filter(|&x| !a.contains_u64(x)).collect())
        } else {
            Classification::Proper
        };
        prop_assert_eq!(a.classify(), expected);
    }

    #[test]
    fn enumerator_lists_members_in_order(a in ep_set()) {
        prop_assume!(!a.is_finite());
        let e = EqpFunction::enumerate(&a).unwrap();
        let expected: Vec<u64> = a.iter().take(1000).collect();
        let got: Vec<u64> = (0..1000u64)
            .map(|n| e.eval_u64(n).try_into().unwrap())
            .collect();
        prop_assert!(got.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn canonical_form_decides_equality(a in ep_set(), b in ep_set()) {
        prop_assert_eq!(a == b, agree(&a, &b));
        let rebuilt = EpSet::new(
            a.threshold(),
            a.prefix_members().collect::<Vec<_>>(),
            a.modulus(),
            a.tail_residues().collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(&rebuilt, &a);
        // A redundant presentation: threshold pushed out, modulus doubled.
        let t = a.threshold() + 3;
        let m = a.modulus() * 2;
        let padded = EpSet::new(
            t,
            (0..t).filter(|&x| a.contains_u64(x)).collect::<Vec<_>>(),
            m,
            (0..m).filter(|&r| a.tail_contains_residue(r)).collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(padded, a);
    }

    #[test]
    fn notation_round_trips(a in ep_set()) {
        prop_assert_eq!(a.to_string().parse::<EpSet>().unwrap(), a);
    }
}
