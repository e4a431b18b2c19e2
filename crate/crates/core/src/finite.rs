//! Star-map candidates on finite universes.
//!
//! The base set is `X = {0, …, k-1}` and `*X = X ∪ {ξ1, …, ξe}`. A candidate
//! assigns to every `f : X → X` the values of `*f` at the extra points; on
//! `X` itself `*f` is `f`. There are `(k+e)^(e·k^k)` candidates.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound on `k`; `k^k` tables beyond this are out of reach.
pub const MAX_K: usize = 4;
pub const MAX_EXTRAS: usize = 2;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Comp,
    Equ,
    Wequ,
    Dir,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::Comp, Axiom::Equ, Axiom::Wequ, Axiom::Dir];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Comp => "comp",
            Axiom::Equ => "equ",
            Axiom::Wequ => "wequ",
            Axiom::Dir => "dir",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Axiom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "comp" => Ok(Axiom::Comp),
            "equ" => Ok(Axiom::Equ),
            "wequ" => Ok(Axiom::Wequ),
            "dir" => Ok(Axiom::Dir),
            other => Err(Error::UnknownSymbol(other.to_string())),
        }
    }
}

/// A set of axioms as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct AxiomSet(u8);

impl AxiomSet {
    pub fn new(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        AxiomSet(axioms.into_iter().fold(0, |m, a| m | a.bit()))
    }

    pub fn contains(self, a: Axiom) -> bool {
        self.0 & a.bit() != 0
    }

    pub fn is_subset(self, other: AxiomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn axioms(self) -> Vec<Axiom> {
        Axiom::ALL
            .into_iter()
            .filter(|&a| self.contains(a))
            .collect()
    }

    /// All supersets of `self`, smallest first.
    pub fn supersets(self) -> Vec<AxiomSet> {
        let mut out: Vec<AxiomSet> = (0u8..16)
            .map(AxiomSet)
            .filter(|s| self.is_subset(*s))
            .collect();
        out.sort_by_key(|s| (s.0.count_ones(), s.0));
        out
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.axioms().iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl Serialize for AxiomSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `X = {0..k}` plus `e` extra points, with the function table of `X^X`.
#[derive(Clone, Debug)]
pub struct FiniteUniverse {
    k: usize,
    e: usize,
    /// `functions[i][x]`, in lexicographic order of the value tuple.
    functions: Vec<Vec<u8>>,
    /// `compose[g][f]` is the index of `g ∘ f`.
    compose: Vec<Vec<usize>>,
    /// `chi[f][g]` is the index of the indicator of `{x : f(x) = g(x)}`.
    chi: Vec<Vec<usize>>,
}

impl FiniteUniverse {
    pub fn new(k: usize, e: usize) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidUniverse(format!(
                "k must be in 2..={MAX_K}, got {k}"
            )));
        }
        if !(1..=MAX_EXTRAS).contains(&e) {
            return Err(Error::InvalidUniverse(format!(
                "e must be in 1..={MAX_EXTRAS}, got {e}"
            )));
        }
        let count = k.pow(k as u32);
        let functions: Vec<Vec<u8>> = (0..count)
            .map(|mut i| {
                let mut f = vec![0u8; k];
                for x in (0..k).rev() {
                    f[x] = (i % k) as u8;
                    i /= k;
                }
                f
            })
            .collect();
        let index = |f: &[u8]| f.iter().fold(0usize, |acc, &v| acc * k + v as usize);
        let compose = functions
            .iter()
            .map(|g| {
                functions
                    .iter()
                    .map(|f| index(&f.iter().map(|&x| g[x as usize]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let chi = functions
            .iter()
            .map(|f| {
                functions
                    .iter()
                    .map(|g| index(&(0..k).map(|x| (f[x] == g[x]) as u8).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        Ok(FiniteUniverse {
            k,
            e,
            functions,
            compose,
            chi,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn extras(&self) -> usize {
        self.e
    }

    pub fn size(&self) -> usize {
        self.k + self.e
    }

    pub fn function_count(&self) -> usize {
        self.functions.len()
    }

    pub fn function(&self, i: usize) -> &[u8] {
        &self.functions[i]
    }

    pub fn index_of(&self, f: &[u8]) -> usize {
        f.iter().fold(0usize, |acc, &v| acc * self.k + v as usize)
    }

    pub fn point_name(&self, z: usize) -> String {
        if z < self.k {
            z.to_string()
        } else {
            format!("ξ{}", z - self.k + 1)
        }
    }

    pub fn is_bijective(&self, i: usize) -> bool {
        let mut seen = vec![false; self.k];
        for &v in &self.functions[i] {
            seen[v as usize] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// Candidates: `(k+e)^(e·k^k)`, saturating.
    pub fn candidate_count(&self) -> u128 {
        (self.size() as u128)
            .checked_pow((self.e * self.function_count()) as u32)
            .unwrap_or(u128::MAX)
    }

    fn var(&self, f: usize, extra: usize) -> usize {
        f * self.e + extra
    }

    /// The characteristic function of `A ⊆ X` given as a bit mask.
    fn indicator(&self, mask: usize) -> usize {
        self.index_of(
            &(0..self.k)
                .map(|x| ((mask >> x) & 1) as u8)
                .collect::<Vec<_>>(),
        )
    }
}

/// The extras columns of a star map.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StarMapCandidate {
    /// `columns[f·e + j] = *f(ξ_{j+1})`.
    pub columns: Vec<u8>,
}

impl StarMapCandidate {
    /// Builds a candidate from a rule `(f, extra point) ↦ *f(extra)`.
    pub fn from_rule(u: &FiniteUniverse, rule: impl Fn(&[u8], usize) -> usize) -> Self {
        let mut columns = vec![0u8; u.function_count() * u.e];
        for f in 0..u.function_count() {
            for j in 0..u.e {
                columns[u.var(f, j)] = rule(u.function(f), u.k + j) as u8;
            }
        }
        StarMapCandidate { columns }
    }

    pub fn star(&self, u: &FiniteUniverse, f: usize, z: usize) -> usize {
        if z < u.k {
            u.functions[f][z] as usize
        } else {
            self.columns[u.var(f, z - u.k)] as usize
        }
    }

    /// Table keyed by function graph, e.g. `"[0,1]"`, valued by the images of
    /// the extra points.
    pub fn table(&self, u: &FiniteUniverse) -> BTreeMap<String, Vec<String>> {
        (0..u.function_count())
            .map(|f| {
                let graph: Vec<String> = u.function(f).iter().map(|v| v.to_string()).collect();
                let vals = (0..u.e)
                    .map(|j| u.point_name(self.star(u, f, u.k + j)))
                    .collect();
                (format!("[{}]", graph.join(",")), vals)
            })
            .collect()
    }

    /// Inverse of [`StarMapCandidate::table`].
    pub fn from_table(u: &FiniteUniverse, table: &BTreeMap<String, Vec<String>>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidUniverse(msg);
        let names: Vec<String> = (0..u.size()).map(|z| u.point_name(z)).collect();
        let mut columns = vec![None; u.function_count() * u.e];
        for (graph, vals) in table {
            let f: Vec<u8> = graph
                .trim_matches(|c| c == '[' || c == ']')
                .split(',')
                .map(|v| v.trim().parse::<u8>().ok().filter(|&v| (v as usize) < u.k))
                .collect::<Option<_>>()
                .filter(|f: &Vec<u8>| f.len() == u.k)
                .ok_or_else(|| bad(format!("bad function graph `{graph}`")))?;
            if vals.len() != u.e {
                return Err(bad(format!("`{graph}` needs {} values", u.e)));
            }
            let fi = u.index_of(&f);
            for (j, v) in vals.iter().enumerate() {
                let z = names
                    .iter()
                    .position(|n| n == v)
                    .ok_or_else(|| bad(format!("unknown point `{v}`")))?;
                columns[u.var(fi, j)] = Some(z as u8);
            }
        }
        let columns = columns
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| bad("table does not cover every function".into()))?;
        Ok(StarMapCandidate { columns })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateVerdict {
    pub comp: bool,
    pub equ: bool,
    /// Equal to `equ`: on a finite base every map has finite range.
    pub wequ: bool,
    pub wequ_reduces_to_equ: bool,
    pub dir: bool,
    pub ind: bool,
    /// Always true on a finite universe.
    pub poss: bool,
    pub extension_property: bool,
}

impl CandidateVerdict {
    pub fn satisfied(&self) -> AxiomSet {
        AxiomSet::new(
            [
                (Axiom::Comp, self.comp),
                (Axiom::Equ, self.equ),
                (Axiom::Wequ, self.wequ),
                (Axiom::Dir, self.dir),
            ]
            .into_iter()
            .filter(|(_, ok)| *ok)
            .map(|(a, _)| a),
        )
    }
}

fn check_comp(u: &FiniteUniverse, c: &StarMapCandidate) -> bool {
    let n = u.function_count();
    (0..n).all(|f| {
        (0..n).all(|g| {
            (u.k..u.size()).all(|z| c.star(u, u.compose[g][f], z) == c.star(u, g, c.star(u, f, z)))
        })
    })
}

fn check_equ(u: &FiniteUniverse, c: &StarMapCandidate) -> bool {
    let n = u.function_count();
    (0..n).all(|f| {
        (0..n).all(|g| {
            (u.k..u.size()).all(|z| {
                let want = (c.star(u, f, z) == c.star(u, g, z)) as usize;
                c.star(u, u.chi[f][g], z) == want
            })
        })
    })
}

/// Points of the form `*p(ζ)`.
fn reachable(u: &FiniteUniverse, c: &StarMapCandidate, zeta: usize) -> Vec<bool> {
    let mut r = vec![false; u.size()];
    for p in 0..u.function_count() {
        r[c.star(u, p, zeta)] = true;
    }
    r
}

fn check_dir(u: &FiniteUniverse, c: &StarMapCandidate) -> bool {
    let reach: Vec<Vec<bool>> = (0..u.size()).map(|z| reachable(u, c, z)).collect();
    (0..u.size()).all(|xi| (0..u.size()).all(|eta| reach.iter().any(|r| r[xi] && r[eta])))
}

/// Distinct points are separated by `*A = {z : *χ_A(z) = 1}` for some `A ⊆ X`.
fn check_ind(u: &FiniteUniverse, c: &StarMapCandidate) -> bool {
    let masks: Vec<usize> = (0..1usize << u.k).map(|m| u.indicator(m)).collect();
    (0..u.size()).all(|z| {
        (z + 1..u.size()).all(|w| {
            masks
                .iter()
                .any(|&chi| (c.star(u, chi, z) == 1) != (c.star(u, chi, w) == 1))
        })
    })
}

pub fn verify_candidate(u: &FiniteUniverse, c: &StarMapCandidate) -> CandidateVerdict {
    let equ = check_equ(u, c);
    let extension_property = (0..u.function_count())
        .all(|f| (0..u.k).all(|x| c.star(u, f, x) == u.functions[f][x] as usize));
    CandidateVerdict {
        comp: check_comp(u, c),
        equ,
        wequ: equ,
        wequ_reduces_to_equ: true,
        dir: check_dir(u, c),
        ind: check_ind(u, c),
        poss: true,
        extension_property,
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MatrixRow {
    pub axioms: AxiomSet,
    /// Exact when the search completed, a lower bound otherwise.
    pub models: u64,
    pub first_model: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SatisfiabilityMatrix {
    pub k: usize,
    pub extras: usize,
    pub required: AxiomSet,
    pub candidates: String,
    /// Complete candidates reached that satisfy the required axioms.
    pub leaves: u64,
    pub nodes: u64,
    pub budget: u64,
    pub budget_exhausted: bool,
    pub rows: Vec<MatrixRow>,
}

impl SatisfiabilityMatrix {
    pub fn row(&self, axioms: AxiomSet) -> Option<&MatrixRow> {
        self.rows.iter().find(|r| r.axioms == axioms)
    }
}

struct Search<'a> {
    u: &'a FiniteUniverse,
    propagate_comp: bool,
    propagate_equ: bool,
    required: AxiomSet,
    budget: u64,
    nodes: u64,
    leaves: u64,
    exhausted: bool,
    rows: Vec<(AxiomSet, u64, Option<StarMapCandidate>)>,
}

impl Search<'_> {
    fn get(&self, cols: &[Option<u8>], f: usize, z: usize) -> Option<usize> {
        if z < self.u.k {
            Some(self.u.functions[f][z] as usize)
        } else {
            cols[self.u.var(f, z - self.u.k)].map(|v| v as usize)
        }
    }

    /// Applies forced assignments to a fixed point; `false` on conflict.
    fn propagate(&self, cols: &mut [Option<u8>]) -> bool {
        let u = self.u;
        let n = u.function_count();
        loop {
            let mut changed = false;
            for z in u.k..u.size() {
                for f in 0..n {
                    let Some(fz) = self.get(cols, f, z) else {
                        continue;
                    };
                    for g in 0..n {
                        let mut forced = Vec::with_capacity(2);
                        if self.propagate_comp {
                            if let Some(v) = self.get(cols, g, fz) {
                                forced.push((u.compose[g][f], v));
                            }
                        }
                        if self.propagate_equ {
                            if let Some(gz) = self.get(cols, g, z) {
                                forced.push((u.chi[f][g], (fz == gz) as usize));
                            }
                        }
                        for (h, v) in forced {
                            let slot = &mut cols[u.var(h, z - u.k)];
                            match *slot {
                                Some(w) if w as usize != v => return false,
                                Some(_) => {}
                                None => {
                                    *slot = Some(v as u8);
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, cols: &mut [Option<u8>]) {
        if self.exhausted {
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if !self.propagate(cols) {
            return;
        }
        let Some(var) = cols.iter().position(|c| c.is_none()) else {
            self.leaf(cols);
            return;
        };
        for v in 0..self.u.size() {
            let mut next = cols.to_vec();
            next[var] = Some(v as u8);
            self.run(&mut next);
            if self.exhausted {
                return;
            }
        }
    }

    fn leaf(&mut self, cols: &[Option<u8>]) {
        let c = StarMapCandidate {
            columns: cols.iter().map(|v| v.expect("complete")).collect(),
        };
        let sat = verify_candidate(self.u, &c).satisfied();
        if !self.required.is_subset(sat) {
            return;
        }
        self.leaves += 1;
        for row in &mut self.rows {
            if row.0.is_subset(sat) {
                row.1 += 1;
                if row.2.is_none() {
                    row.2 = Some(c.clone());
                }
            }
        }
    }
}

/// Depth-first search over all candidates satisfying `required`, counting
/// models of every axiom set containing `required`.
///
/// Visits at most `budget` search nodes; if that is not enough the matrix
/// is marked `budget_exhausted` and its counts are lower bounds.
pub fn search_extensions(
    k: usize,
    e: usize,
    required: AxiomSet,
    budget: u64,
) -> Result<SatisfiabilityMatrix> {
    let u = FiniteUniverse::new(k, e)?;
    let equ_like = required.contains(Axiom::Equ) || required.contains(Axiom::Wequ);
    let mut search = Search {
        u: &u,
        propagate_comp: required.contains(Axiom::Comp),
        propagate_equ: equ_like,
        required,
        budget,
        nodes: 0,
        leaves: 0,
        exhausted: false,
        rows: required
            .supersets()
            .into_iter()
            .map(|s| (s, 0, None))
            .collect(),
    };
    let mut cols = vec![None; u.function_count() * e];
    search.run(&mut cols);
    let rows = search
        .rows
        .iter()
        .map(|(s, n, m)| MatrixRow {
            axioms: *s,
            models: *n,
            first_model: m.as_ref().map(|c| c.table(&u)),
        })
        .collect();
    Ok(SatisfiabilityMatrix {
        k,
        extras: e,
        required,
        candidates: u.candidate_count().to_string(),
        leaves: search.leaves,
        nodes: search.nodes,
        budget,
        budget_exhausted: search.exhausted,
        rows,
    })
}
