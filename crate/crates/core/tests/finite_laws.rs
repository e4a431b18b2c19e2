use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starlab::random::random_set_bounded;
use starlab::{
    search_extensions, verify_candidate, Axiom, AxiomSet, FiniteStone, FiniteUniverse,
    StarMapCandidate, UltrafilterHandle,
};

fn all_subsets() -> Vec<AxiomSet> {
    AxiomSet::default().supersets()
}

/// Every candidate of a universe, in column-lexicographic order.
fn every_candidate(u: &FiniteUniverse) -> impl Iterator<Item = StarMapCandidate> + '_ {
    let vars = u.function_count() * u.extras();
    let total = (u.size() as u64).pow(vars as u32);
    (0..total).map(move |mut i| {
        let mut columns = vec![0u8; vars];
        for c in columns.iter_mut().rev() {
            *c = (i % u.size() as u64) as u8;
            i /= u.size() as u64;
        }
        StarMapCandidate { columns }
    })
}

#[test]
fn search_matches_brute_force_on_two_extras() {
    let u = FiniteUniverse::new(2, 2).unwrap();
    let verdicts: Vec<AxiomSet> = every_candidate(&u)
        .map(|c| verify_candidate(&u, &c).satisfied())
        .collect();
    assert_eq!(verdicts.len(), 65536);
    for required in all_subsets() {
        let m = search_extensions(2, 2, required, 10_000_000).unwrap();
        assert!(!m.budget_exhausted);
        for row in &m.rows {
            let expected = verdicts
                .iter()
                .filter(|s| row.axioms.is_subset(**s))
                .count() as u64;
            assert_eq!(row.models, expected, "{} within {}", row.axioms, required);
        }
    }
}

#[test]
fn comp_and_equ_models_are_collapses() {
    for (k, e) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)] {
        let m =
            search_extensions(k, e, AxiomSet::new([Axiom::Comp, Axiom::Equ]), 1_000_000).unwrap();
        assert!(!m.budget_exhausted);
        assert_eq!(m.rows[0].models, (k as u64).pow(e as u32), "k={k}, e={e}");
        let full = AxiomSet::new([Axiom::Comp, Axiom::Equ, Axiom::Dir]);
        assert_eq!(m.row(full).unwrap().models, 0, "k={k}, e={e}");
    }
}

#[test]
fn ind_fails_for_every_comp_equ_model_at_k2() {
    let u = FiniteUniverse::new(2, 1).unwrap();
    for c in every_candidate(&u) {
        let v = verify_candidate(&u, &c);
        assert!(v.extension_property && v.poss);
        assert_eq!(v.wequ, v.equ);
        if v.comp && v.equ {
            assert!(!v.ind && !v.dir);
        }
    }
}

fn axiom_set() -> impl Strategy<Value = AxiomSet> {
    proptest::sample::select(all_subsets())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn models_verify_and_counts_are_monotone(k in 2usize..4, e in 1usize..3, required in axiom_set()) {
        let m = search_extensions(k, e, required, 20_000).unwrap();
        let u = FiniteUniverse::new(k, e).unwrap();
        let head = m.rows[0].models;
        for row in &m.rows {
            prop_assert!(row.models <= head);
            for other in &m.rows {
                if row.axioms.is_subset(other.axioms) {
                    prop_assert!(other.models <= row.models);
                }
            }
            if let Some(table) = &row.first_model {
                let c = StarMapCandidate::from_table(&u, table).unwrap();
                prop_assert!(row.axioms.is_subset(verify_candidate(&u, &c).satisfied()));
            } else if !m.budget_exhausted {
                prop_assert_eq!(row.models, 0);
            }
        }
        let again = search_extensions(k, e, required, 20_000).unwrap();
        prop_assert_eq!(format!("{m:?}"), format!("{again:?}"));
    }

    #[test]
    fn stone_atoms_partition(seed in any::<u64>(), n in 1usize..5, handle_seed in any::<u64>(), c in -20i64..20, k in 0u64..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<_> = (0..n).map(|_| random_set_bounded(&mut rng, 6, 8)).collect();
        let s = FiniteStone::new(&gens);
        prop_assert!(s.atoms.len() <= 1 << n);
        for (i, a) in s.atoms.iter().enumerate() {
            prop_assert!(!a.is_empty());
            for b in &s.atoms[i + 1..] {
                prop_assert!(a.intersection(b).is_empty());
            }
        }
        let union = s.atoms.iter().fold(starlab::EpSet::empty(), |acc, a| acc.union(a));
        prop_assert!(union.is_all());
        for (i, g) in gens.iter().enumerate() {
            let rebuilt = s
                .generator_atoms(i)
                .iter()
                .fold(starlab::EpSet::empty(), |acc, &a| acc.union(&s.atoms[a]));
            prop_assert_eq!(&rebuilt, g);
        }
        for u in [
            UltrafilterHandle::principal(k),
            UltrafilterHandle::integer_like(c),
            UltrafilterHandle::lazy(handle_seed, true),
        ] {
            let hits = s.atoms.iter().filter(|a| u.member(a)).count();
            prop_assert_eq!(hits, 1);
            prop_assert!(u.member(&s.atoms[s.trace(&u)]));
        }
        prop_assert_eq!(s.trace(&UltrafilterHandle::principal(k)), s.atom_of(k));
    }
}
