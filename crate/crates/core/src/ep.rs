//! Eventually periodic subsets of the naturals.
//!
//! An [`EpSet`] is stored in canonical form: minimal modulus first, then
//! minimal threshold. Two sets are extensionally equal iff their canonical
//! forms are structurally equal, so `==` decides set equality.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EpSet {
    threshold: u64,
    prefix: BTreeSet<u64>,
    modulus: u64,
    residues: Vec<bool>,
}

/// Shape of a set, as needed by nonprincipality checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", content = "elements", rename_all = "snake_case")]
pub enum Classification {
    Empty,
    Finite(Vec<u64>),
    /// Carries the (finite) complement.
    Cofinite(Vec<u64>),
    Proper,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
    SymmetricDifference,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::Union => a || b,
            BoolOp::Intersect => a && b,
            BoolOp::Difference => a && !b,
            BoolOp::SymmetricDifference => a != b,
        }
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl EpSet {
    /// Builds a set from raw parts and canonicalizes it.
    pub fn new(
        threshold: u64,
        prefix_members: impl IntoIterator<Item = u64>,
        modulus: u64,
        tail_residues: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidSet("modulus must be positive".into()));
        }
        let prefix: BTreeSet<u64> = prefix_members.into_iter().collect();
        if let Some(&x) = prefix.iter().find(|&&x| x >= threshold) {
            return Err(Error::InvalidSet(format!(
                "prefix member {x} is not below the threshold {threshold}"
            )));
        }
        let mut residues = vec![false; modulus as usize];
        for r in tail_residues {
            if r >= modulus {
                return Err(Error::InvalidSet(format!(
                    "residue {r} is not below the modulus {modulus}"
                )));
            }
            residues[r as usize] = true;
        }
        Ok(EpSet {
            threshold,
            prefix,
            modulus,
            residues,
        }
        .canonical())
    }

    /// Builds from a membership predicate below `threshold` and a tail rule on
    /// residues mod `modulus`.
    pub(crate) fn from_fn(
        threshold: u64,
        modulus: u64,
        below: impl Fn(u64) -> bool,
        tail: impl Fn(u64) -> bool,
    ) -> Self {
        debug_assert!(modulus > 0);
        EpSet {
            threshold,
            prefix: (0..threshold).filter(|&x| below(x)).collect(),
            modulus,
            residues: (0..modulus).map(tail).collect(),
        }
        .canonical()
    }

    pub fn empty() -> Self {
        EpSet::periodic(1, [])
    }

    pub fn all() -> Self {
        EpSet::periodic(1, [0])
    }

    /// `{x : x mod modulus in residues}`; residues are reduced mod `modulus`.
    pub fn periodic(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let mut res = vec![false; modulus as usize];
        for r in residues {
            res[(r % modulus) as usize] = true;
        }
        EpSet {
            threshold: 0,
            prefix: BTreeSet::new(),
            modulus,
            residues: res,
        }
        .canonical()
    }

    pub fn evens() -> Self {
        EpSet::periodic(2, [0])
    }

    pub fn odds() -> Self {
        EpSet::periodic(2, [1])
    }

    /// Multiples of `k` (`k = 0` gives `{0}`).
    pub fn multiples(k: u64) -> Self {
        if k == 0 {
            return EpSet::finite([0]);
        }
        EpSet::periodic(k, [0])
    }

    /// `{x : x >= k}`.
    pub fn from_value(k: u64) -> Self {
        EpSet::from_fn(k, 1, |_| false, |_| true)
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        let prefix: BTreeSet<u64> = elements.into_iter().collect();
        let threshold = prefix.iter().next_back().map_or(0, |&m| m + 1);
        EpSet {
            threshold,
            prefix,
            modulus: 1,
            residues: vec![false],
        }
        .canonical()
    }

    pub fn singleton(k: u64) -> Self {
        EpSet::finite([k])
    }

    /// The complement of a finite set.
    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Self {
        EpSet::finite(excluded).complement()
    }

    fn canonical(mut self) -> Self {
        // minimal period of the tail indicator: it divides any period
        let m = self.modulus;
        for d in divisors(m) {
            if (0..m).all(|r| self.residues[r as usize] == self.residues[(r % d) as usize]) {
                self.residues.truncate(d as usize);
                self.modulus = d;
                break;
            }
        }
        while self.threshold > 0 {
            let x = self.threshold - 1;
            if self.prefix.contains(&x) == self.tail_rule(x) {
                self.prefix.remove(&x);
                self.threshold = x;
            } else {
                break;
            }
        }
        self
    }

    fn tail_rule(&self, x: u64) -> bool {
        self.residues[(x % self.modulus) as usize]
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn prefix_members(&self) -> impl Iterator<Item = u64> + '_ {
        self.prefix.iter().copied()
    }

    pub fn tail_residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(r, _)| r as u64)
    }

    /// Whether residue class `r` (mod the set's modulus) is in the tail.
    pub fn tail_contains_residue(&self, r: u64) -> bool {
        self.residues[(r % self.modulus) as usize]
    }

    pub fn contains_u64(&self, x: u64) -> bool {
        if x < self.threshold {
            self.prefix.contains(&x)
        } else {
            self.tail_rule(x)
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        match x.to_u64() {
            Some(v) => self.contains_u64(v),
            None => {
                if x.sign() == num_bigint::Sign::Minus {
                    return false;
                }
                let r = x.mod_floor(&BigInt::from(self.modulus));
                self.tail_rule(r.to_u64().expect("residue fits"))
            }
        }
    }

    pub fn boolean(&self, other: &EpSet, op: BoolOp) -> EpSet {
        let threshold = self.threshold.max(other.threshold);
        let modulus = lcm(self.modulus, other.modulus);
        EpSet::from_fn(
            threshold,
            modulus,
            |x| op.apply(self.contains_u64(x), other.contains_u64(x)),
            |r| op.apply(self.tail_rule(r), other.tail_rule(r)),
        )
    }

    pub fn union(&self, other: &EpSet) -> EpSet {
        self.boolean(other, BoolOp::Union)
    }

    pub fn intersection(&self, other: &EpSet) -> EpSet {
        self.boolean(other, BoolOp::Intersect)
    }

    pub fn difference(&self, other: &EpSet) -> EpSet {
        self.boolean(other, BoolOp::Difference)
    }

    pub fn complement(&self) -> EpSet {
        EpSet {
            threshold: self.threshold,
            prefix: (0..self.threshold)
                .filter(|x| !self.prefix.contains(x))
                .collect(),
            modulus: self.modulus,
            residues: self.residues.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == EpSet::empty()
    }

    pub fn is_all(&self) -> bool {
        *self == EpSet::all()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.iter().all(|b| !b)
    }

    pub fn is_subset(&self, other: &EpSet) -> bool {
        self.difference(other).is_empty()
    }

    /// The eventual part only: `{x : x mod m in tail residues}`.
    pub fn tail_part(&self) -> EpSet {
        EpSet::periodic(self.modulus, self.tail_residues())
    }

    pub fn classify(&self) -> Classification {
        if self.is_finite() {
            if self.prefix.is_empty() {
                Classification::Empty
            } else {
                Classification::Finite(self.prefix.iter().copied().collect())
            }
        } else if self.residues.iter().all(|&b| b) {
            Classification::Cofinite(
                (0..self.threshold)
                    .filter(|x| !self.prefix.contains(x))
                    .collect(),
            )
        } else {
            Classification::Proper
        }
    }

    /// Ascending iterator over the members (infinite unless the set is finite).
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let finite_end = if self.is_finite() {
            Some(self.threshold)
        } else {
            None
        };
        (0u64..)
            .take_while(move |&x| finite_end.is_none_or(|end| x < end))
            .filter(move |&x| self.contains_u64(x))
    }

    pub fn min_element(&self) -> Option<u64> {
        self.iter().next()
    }

    /// Two sets agreeing on `[0, window)` are equal.
    pub fn decision_window(&self, other: &EpSet) -> u64 {
        self.threshold + other.threshold + 2 * lcm(self.modulus, other.modulus)
    }

    fn exceptions(&self) -> Vec<(bool, u64)> {
        (0..self.threshold)
            .filter_map(|x| {
                let member = self.prefix.contains(&x);
                (member != self.tail_rule(x)).then_some((member, x))
            })
            .collect()
    }
}

fn join(xs: impl Iterator<Item = String>) -> String {
    xs.collect::<Vec<_>>().join(",")
}

impl fmt::Display for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.classify() {
            Classification::Empty => return f.write_str("empty"),
            Classification::Finite(xs) => {
                return write!(f, "finite {{{}}}", join(xs.iter().map(u64::to_string)))
            }
            Classification::Cofinite(xs) if xs.is_empty() => return f.write_str("all"),
            Classification::Cofinite(xs) => {
                return write!(f, "cofinite {{{}}}", join(xs.iter().map(u64::to_string)))
            }
            Classification::Proper => {}
        }
        let res = join(self.tail_residues().map(|r| r.to_string()));
        let exc = self.exceptions();
        if exc.is_empty() {
            write!(f, "{{{res} mod {}}}", self.modulus)
        } else {
            let exc = join(
                exc.iter()
                    .map(|(add, x)| format!("{}{x}", if *add { '+' } else { '-' })),
            );
            write!(f, "{{{res} mod {} | except {exc}}}", self.modulus)
        }
    }
}

impl Serialize for EpSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let evens = EpSet::new(0, [], 2, [0]).unwrap();
        assert!(evens.contains_u64(4));
        assert!(!evens.contains_u64(7));
        let s = EpSet::new(3, [1], 2, [0]).unwrap();
        assert!(s.contains_u64(1));
        assert!(!s.contains_u64(2));
        assert!(s.contains(&BigInt::from(10).pow(30)));
    }

    #[test]
    fn boolean_examples() {
        assert!(EpSet::evens().intersection(&EpSet::odds()).is_empty());
        assert!(EpSet::evens().union(&EpSet::odds()).is_all());
        let six = EpSet::evens().intersection(&EpSet::multiples(3));
        assert_eq!(six, EpSet::multiples(6));
        for x in 0..1000u64 {
            assert_eq!(six.contains_u64(x), x % 2 == 0 && x % 3 == 0);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(EpSet::empty().classify(), Classification::Empty);
        let s = EpSet::new(2, [0, 1], 1, []).unwrap();
        assert_eq!(s.classify(), Classification::Finite(vec![0, 1]));
        assert_eq!(EpSet::evens().classify(), Classification::Proper);
        assert_eq!(
            EpSet::cofinite([3, 5]).classify(),
            Classification::Cofinite(vec![3, 5])
        );
    }

    #[test]
    fn canonical_form_is_minimal() {
        let s = EpSet::new(10, [0, 2, 4, 6, 8], 4, [0, 2]).unwrap();
        assert_eq!(s, EpSet::evens());
        assert_eq!(s.modulus(), 2);
        assert_eq!(s.threshold(), 0);
        let t = EpSet::new(7, [], 6, [0]).unwrap(); // {12, 18, ...} minus nothing below 7
        assert_eq!(t.threshold(), 7);
        assert!(!t.contains_u64(6) && t.contains_u64(12));
    }

    #[test]
    fn invalid_parts_rejected() {
        assert!(EpSet::new(2, [3], 1, []).is_err());
        assert!(EpSet::new(0, [], 2, [2]).is_err());
        assert!(EpSet::new(0, [], 0, []).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(EpSet::evens().to_string(), "{0 mod 2}");
        assert_eq!(EpSet::finite([0, 1]).to_string(), "finite {0,1}");
        assert_eq!(EpSet::cofinite([2]).to_string(), "cofinite {2}");
        assert_eq!(EpSet::all().to_string(), "all");
        let s = EpSet::new(3, [1], 2, [0]).unwrap();
        assert_eq!(s.to_string(), "{0 mod 2 | except -0,+1,-2}");
    }
}
