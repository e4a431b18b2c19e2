//! Orbits of an ultrafilter under pushforward by a list of maps.

use serde::Serialize;

use crate::eqp::EqpFunction;
use crate::ultrafilter::{Equality, UltrafilterHandle};

/// Cap on orbit size, whatever the depth budget.
pub const MAX_ORBIT: usize = 64;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitElement {
    pub handle: UltrafilterHandle,
    /// Generator indices applied to the root, first to last.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub verdict: Equality,
}

/// An orbit element both `i` and `j` are pushforwards of.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectedProbe {
    pub i: usize,
    pub j: usize,
    pub ancestor: usize,
    pub found: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitReport {
    pub elements: Vec<OrbitElement>,
    pub pairwise: Vec<PairVerdict>,
    pub directedness: Vec<DirectedProbe>,
    pub truncated: bool,
}

fn push_word(
    root: &UltrafilterHandle,
    generators: &[EqpFunction],
    word: &[usize],
) -> UltrafilterHandle {
    word.iter()
        .fold(root.clone(), |h, &g| h.pushforward(&generators[g]))
}

/// Breadth-first closure of `{U}` under the generators, to depth `budget`.
pub fn orbit_explore(
    root: &UltrafilterHandle,
    generators: &[EqpFunction],
    budget: usize,
    horizon: u64,
) -> OrbitReport {
    let mut elements = vec![OrbitElement {
        handle: root.clone(),
        word: Vec::new(),
    }];
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for _ in 0..budget {
        let mut next = Vec::new();
        for &e in &frontier {
            for (gi, g) in generators.iter().enumerate() {
                let h = elements[e].handle.pushforward(g);
                let known = elements
                    .iter()
                    .any(|x| x.handle.equal(&h, horizon).is_certified());
                if known {
                    continue;
                }
                if elements.len() >= MAX_ORBIT {
                    truncated = true;
                    continue;
                }
                let mut word = elements[e].word.clone();
                word.push(gi);
                elements.push(OrbitElement { handle: h, word });
                next.push(elements.len() - 1);
            }
        }
        frontier = next;
    }

    let mut pairwise = Vec::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            pairwise.push(PairVerdict {
                i,
                j,
                verdict: elements[i].handle.equal(&elements[j].handle, horizon),
            });
        }
    }

    let mut directedness = Vec::new();
    for p in pairwise.iter().take(16) {
        let (wi, wj) = (&elements[p.i].word, &elements[p.j].word);
        let common = wi.iter().zip(wj).take_while(|(a, b)| a == b).count();
        let ancestor = elements
            .iter()
            .position(|e| e.word == wi[..common])
            .unwrap_or(0);
        let base = &elements[ancestor].handle;
        let reach = |w: &[usize], target: &UltrafilterHandle| {
            push_word(base, generators, &w[common..])
                .equal(target, horizon)
                .is_certified()
        };
        directedness.push(DirectedProbe {
            i: p.i,
            j: p.j,
            ancestor,
            found: reach(wi, &elements[p.i].handle) && reach(wj, &elements[p.j].handle),
        });
    }

    OrbitReport {
        elements,
        pairwise,
        directedness,
        truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn successor_orbit() {
        let u = UltrafilterHandle::integer_like(0);
        let r = orbit_explore(&u, &[EqpFunction::affine(1, 1)], 5, 100);
        let names: Vec<String> = r.elements.iter().map(|e| e.handle.to_string()).collect();
        assert_eq!(
            names,
            (0..=5)
                .map(|k| format!("profinite:int:{k}"))
                .collect::<Vec<_>>()
        );
        assert!(r.pairwise.iter().all(|p| p.verdict.is_distinct()));
        assert!(r.directedness.iter().all(|d| d.found));
    }

    #[test]
    fn principal_square_orbit() {
        let sq = EqpFunction::polynomial(Poly::from_int_coeffs(&[0, 0, 1])).unwrap();
        let r = orbit_explore(&UltrafilterHandle::principal(3), &[sq], 3, 100);
        let names: Vec<String> = r.elements.iter().map(|e| e.handle.to_string()).collect();
        assert_eq!(
            names,
            [
                "principal:3",
                "principal:9",
                "principal:81",
                "principal:6561"
            ]
        );
    }

    #[test]
    fn no_generators() {
        let u = UltrafilterHandle::lazy(1, false);
        let r = orbit_explore(&u, &[], 4, 100);
        assert_eq!(r.elements.len(), 1);
        assert!(r.pairwise.is_empty());
    }
}
