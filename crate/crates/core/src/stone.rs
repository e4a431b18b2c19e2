//! The finite Stone space generated by a list of sets.

use serde::Serialize;

use crate::ep::EpSet;
use crate::ultrafilter::UltrafilterHandle;

/// Atoms of the Boolean algebra generated by `generators`.
///
/// Each atom is a nonempty intersection of generators and complements, so
/// the atoms partition ℕ and every ultrafilter contains exactly one.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiniteStone {
    pub generators: Vec<EpSet>,
    pub atoms: Vec<EpSet>,
    /// `signs[a][i]` is true when atom `a` lies inside generator `i`.
    pub signs: Vec<Vec<bool>>,
}

impl FiniteStone {
    pub fn new(generators: &[EpSet]) -> Self {
        let mut cells: Vec<(EpSet, Vec<bool>)> = vec![(EpSet::all(), Vec::new())];
        for g in generators {
            cells = cells
                .into_iter()
                .flat_map(|(atom, signs)| {
                    let inside = (atom.intersection(g), true);
                    let outside = (atom.difference(g), false);
                    [inside, outside].into_iter().filter_map(move |(part, s)| {
                        let mut signs = signs.clone();
                        signs.push(s);
                        (!part.is_empty()).then_some((part, signs))
                    })
                })
                .collect();
        }
        let (atoms, signs) = cells.into_iter().unzip();
        FiniteStone {
            generators: generators.to_vec(),
            atoms,
            signs,
        }
    }

    /// Indices of the atoms making up generator `i`.
    pub fn generator_atoms(&self, i: usize) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&a| self.signs[a][i])
            .collect()
    }

    /// The atom containing `n`.
    pub fn atom_of(&self, n: u64) -> usize {
        self.atoms
            .iter()
            .position(|a| a.contains_u64(n))
            .expect("atoms cover ℕ")
    }

    /// The unique atom belonging to the ultrafilter.
    pub fn trace(&self, u: &UltrafilterHandle) -> usize {
        self.atoms
            .iter()
            .position(|a| u.member(a))
            .expect("an ultrafilter contains one atom of a partition")
    }
}
