//! Representable subsets of `N × N`.
//!
//! A [`Rep2Set`] is a Boolean combination of a few atom shapes. Every
//! horizontal section `A_n = {y : (n, y) ∈ A}` is an [`EpSet`], and the family
//! `n ↦ A_n` is eventually periodic once finite differences are ignored. That
//! is exactly what membership in a profinite ultrafilter can see.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::ep::{lcm, EpSet};
use crate::eqp::EqpFunction;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quasi::QuasiPoly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rep2Set {
    /// `{(x, y) : a·x + b·y ≡ r (mod m)}`.
    LinearCongruence {
        a: i64,
        b: i64,
        r: i64,
        m: u64,
    },
    /// `{(x, y) : x <= c}`.
    StripX(u64),
    /// `{(x, y) : y <= c}`.
    StripY(u64),
    Diagonal,
    /// `{(x, y) : y = p(x)}`.
    Graph(Poly),
    Product(EpSet, EpSet),
    Not(Box<Rep2Set>),
    And(Box<Rep2Set>, Box<Rep2Set>),
    Or(Box<Rep2Set>, Box<Rep2Set>),
}

/// Sections of a [`Rep2Set`] up to finite differences.
///
/// For `n >= threshold`, `A_n` and `tails[n % period]` differ in finitely
/// many points. Each tail is purely periodic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionFamily {
    pub threshold: u64,
    pub period: u64,
    pub tails: Vec<EpSet>,
}

impl SectionFamily {
    fn constant(threshold: u64, tail: EpSet) -> Self {
        SectionFamily {
            threshold,
            period: 1,
            tails: vec![tail],
        }
    }

    fn tail(&self, n: u64) -> &EpSet {
        &self.tails[(n % self.period) as usize]
    }

    fn zip(&self, other: &SectionFamily, op: impl Fn(&EpSet, &EpSet) -> EpSet) -> Self {
        let period = lcm(self.period, other.period);
        SectionFamily {
            threshold: self.threshold.max(other.threshold),
            period,
            tails: (0..period)
                .map(|i| op(self.tail(i), other.tail(i)))
                .collect(),
        }
    }
}

fn congruence_set(m: u64, hit: impl Fn(u64) -> bool) -> EpSet {
    EpSet::periodic(m, (0..m).filter(|&y| hit(y)))
}

fn residue(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

impl Rep2Set {
    pub fn linear_congruence(a: i64, b: i64, r: i64, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSet(
                "congruence modulus must be positive".into(),
            ));
        }
        Ok(Rep2Set::LinearCongruence { a, b, r, m })
    }

    /// The graph of an integer-valued polynomial.
    pub fn graph(p: Poly) -> Result<Self> {
        QuasiPoly::from_poly(p.clone()).check_integral()?;
        Ok(Rep2Set::Graph(p))
    }

    pub fn product(a: EpSet, b: EpSet) -> Self {
        Rep2Set::Product(a, b)
    }

    pub fn complement(self) -> Self {
        Rep2Set::Not(Box::new(self))
    }

    pub fn and(self, other: Rep2Set) -> Self {
        Rep2Set::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Rep2Set) -> Self {
        Rep2Set::Or(Box::new(self), Box::new(other))
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        match self {
            Rep2Set::LinearCongruence { a, b, r, m } => {
                let v = *a as i128 * x as i128 + *b as i128 * y as i128 - *r as i128;
                residue(v, *m) == 0
            }
            Rep2Set::StripX(c) => x <= *c,
            Rep2Set::StripY(c) => y <= *c,
            Rep2Set::Diagonal => x == y,
            Rep2Set::Graph(p) => p.eval_int(&BigInt::from(x)) == BigInt::from(y).into(),
            Rep2Set::Product(a, b) => a.contains_u64(x) && b.contains_u64(y),
            Rep2Set::Not(s) => !s.contains(x, y),
            Rep2Set::And(s, t) => s.contains(x, y) && t.contains(x, y),
            Rep2Set::Or(s, t) => s.contains(x, y) || t.contains(x, y),
        }
    }

    /// `A_n = {y : (n, y) ∈ A}`.
    pub fn section(&self, n: u64) -> EpSet {
        match self {
            Rep2Set::LinearCongruence { m, .. } => congruence_set(*m, |y| self.contains(n, y)),
            Rep2Set::StripX(c) => {
                if n <= *c {
                    EpSet::all()
                } else {
                    EpSet::empty()
                }
            }
            Rep2Set::StripY(c) => EpSet::finite(0..=*c),
            Rep2Set::Diagonal => EpSet::singleton(n),
            Rep2Set::Graph(p) => {
                let v = p.eval_int(&BigInt::from(n)).to_integer();
                match v.to_u64() {
                    Some(y) => EpSet::singleton(y),
                    None => EpSet::empty(),
                }
            }
            Rep2Set::Product(a, b) => {
                if a.contains_u64(n) {
                    b.clone()
                } else {
                    EpSet::empty()
                }
            }
            Rep2Set::Not(s) => s.section(n).complement(),
            Rep2Set::And(s, t) => s.section(n).intersection(&t.section(n)),
            Rep2Set::Or(s, t) => s.section(n).union(&t.section(n)),
        }
    }

    /// `{x : (x, k) ∈ A}`.
    pub fn column(&self, k: u64) -> EpSet {
        match self {
            Rep2Set::LinearCongruence { m, .. } => congruence_set(*m, |x| self.contains(x, k)),
            Rep2Set::StripX(c) => EpSet::finite(0..=*c),
            Rep2Set::StripY(c) => {
                if k <= *c {
                    EpSet::all()
                } else {
                    EpSet::empty()
                }
            }
            Rep2Set::Diagonal => EpSet::singleton(k),
            Rep2Set::Graph(p) => {
                QuasiPoly::from_poly(p - &Poly::from_bigint(&BigInt::from(k))).zero_set()
            }
            Rep2Set::Product(a, b) => {
                if b.contains_u64(k) {
                    a.clone()
                } else {
                    EpSet::empty()
                }
            }
            Rep2Set::Not(s) => s.column(k).complement(),
            Rep2Set::And(s, t) => s.column(k).intersection(&t.column(k)),
            Rep2Set::Or(s, t) => s.column(k).union(&t.column(k)),
        }
    }

    pub fn section_family(&self) -> SectionFamily {
        match self {
            Rep2Set::LinearCongruence { m, .. } => SectionFamily {
                threshold: 0,
                period: *m,
                tails: (0..*m).map(|n| self.section(n)).collect(),
            },
            Rep2Set::StripX(c) => SectionFamily::constant(c + 1, EpSet::empty()),
            Rep2Set::StripY(_) | Rep2Set::Diagonal | Rep2Set::Graph(_) => {
                SectionFamily::constant(0, EpSet::empty())
            }
            Rep2Set::Product(a, b) => {
                let tail_b = b.tail_part();
                SectionFamily {
                    threshold: a.threshold(),
                    period: a.modulus(),
                    tails: (0..a.modulus())
                        .map(|r| {
                            if a.tail_contains_residue(r) {
                                tail_b.clone()
                            } else {
                                EpSet::empty()
                            }
                        })
                        .collect(),
                }
            }
            Rep2Set::Not(s) => {
                let f = s.section_family();
                SectionFamily {
                    tails: f.tails.iter().map(|t| t.complement()).collect(),
                    ..f
                }
            }
            Rep2Set::And(s, t) => s
                .section_family()
                .zip(&t.section_family(), |a, b| a.intersection(b)),
            Rep2Set::Or(s, t) => s
                .section_family()
                .zip(&t.section_family(), |a, b| a.union(b)),
        }
    }

    /// `{x : (f(x), g(x)) ∈ A}`.
    pub fn along(&self, f: &EqpFunction, g: &EqpFunction) -> EpSet {
        match self {
            Rep2Set::LinearCongruence { a, b, r, m } => {
                let h =
                    QuasiPoly::scaled_sum(&[(BigInt::from(*a), &f.0), (BigInt::from(*b), &g.0)])
                        .sub(&QuasiPoly::constant(&BigInt::from(*r)));
                h.residue_set(*m, |v| v == 0)
            }
            Rep2Set::StripX(c) => f.0.at_least(&BigInt::from(c + 1)).complement(),
            Rep2Set::StripY(c) => g.0.at_least(&BigInt::from(c + 1)).complement(),
            Rep2Set::Diagonal => f.equalizer(g),
            Rep2Set::Graph(p) => {
                let pf = QuasiPoly::compose(&QuasiPoly::from_poly(p.clone()), &f.0);
                g.0.sub(&pf).zero_set()
            }
            Rep2Set::Product(a, b) => f.preimage(a).intersection(&g.preimage(b)),
            Rep2Set::Not(s) => s.along(f, g).complement(),
            Rep2Set::And(s, t) => s.along(f, g).intersection(&t.along(f, g)),
            Rep2Set::Or(s, t) => s.along(f, g).union(&t.along(f, g)),
        }
    }

    /// `{n : A_n ∈ V}` for an ultrafilter `V` that sees only tails, given
    /// the exceptional sections' verdicts through `member`.
    pub(crate) fn inner_set_by_tails(&self, member: impl Fn(&EpSet) -> bool) -> EpSet {
        let fam = self.section_family();
        let prefix: Vec<u64> = (0..fam.threshold)
            .filter(|&n| member(&self.section(n)))
            .collect();
        let residues: Vec<u64> = (0..fam.period)
            .filter(|&i| member(&fam.tails[i as usize]))
            .collect();
        EpSet::new(fam.threshold, prefix, fam.period, residues).expect("valid family")
    }
}

impl fmt::Display for Rep2Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rep2Set::LinearCongruence { a, b, r, m } => write!(f, "cong({a},{b},{r},{m})"),
            Rep2Set::StripX(c) => write!(f, "stripx({c})"),
            Rep2Set::StripY(c) => write!(f, "stripy({c})"),
            Rep2Set::Diagonal => write!(f, "diag"),
            Rep2Set::Graph(p) => write!(f, "graph({p})"),
            Rep2Set::Product(a, b) => write!(f, "prod({a}, {b})"),
            Rep2Set::Not(s) => write!(f, "!{}", Paren(s)),
            Rep2Set::And(s, t) => write!(f, "{} & {}", Paren(s), Paren(t)),
            Rep2Set::Or(s, t) => write!(f, "{} | {}", Paren(s), Paren(t)),
        }
    }
}

struct Paren<'a>(&'a Rep2Set);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Rep2Set::And(..) | Rep2Set::Or(..) => write!(f, "({})", self.0),
            s => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn section_examples() {
        assert_eq!(Rep2Set::Diagonal.section(5), EpSet::finite([5]));
        let c = Rep2Set::linear_congruence(1, 1, 0, 2).unwrap();
        assert_eq!(c.section(3), EpSet::odds());
        let p = Rep2Set::product(EpSet::evens(), EpSet::odds());
        assert_eq!(p.section(4), EpSet::odds());
        assert_eq!(p.section(5), EpSet::empty());
    }

    #[test]
    fn graph_column_and_along() {
        let g = Rep2Set::graph(Poly::from_int_coeffs(&[0, 0, 1])).unwrap();
        assert_eq!(g.column(9), EpSet::finite([3]));
        assert_eq!(g.section(4), EpSet::finite([16]));
        let id = EqpFunction::identity();
        let sq = EqpFunction::polynomial(Poly::from_int_coeffs(&[0, 0, 1])).unwrap();
        assert_eq!(g.along(&id, &sq), EpSet::all());
        assert_eq!(Rep2Set::Diagonal.along(&id, &sq), EpSet::finite([0, 1]));
    }

    fn arb_atom() -> impl Strategy<Value = Rep2Set> {
        prop_oneof![
            (-3i64..4, -3i64..4, -3i64..4, 1u64..7)
                .prop_map(|(a, b, r, m)| Rep2Set::linear_congruence(a, b, r, m).unwrap()),
            (0u64..6).prop_map(Rep2Set::StripX),
            (0u64..6).prop_map(Rep2Set::StripY),
            Just(Rep2Set::Diagonal),
            (0i64..3, 0i64..3)
                .prop_map(|(a, b)| Rep2Set::graph(Poly::from_int_coeffs(&[a, b])).unwrap()),
            (1u64..5, 0u64..5, 1u64..5, 0u64..5).prop_map(|(m, r, k, s)| Rep2Set::product(
                EpSet::periodic(m, [r % m]).union(&EpSet::singleton(r)),
                EpSet::periodic(k, [s % k]),
            )),
        ]
    }

    fn arb_rep2() -> impl Strategy<Value = Rep2Set> {
        arb_atom().prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Rep2Set::complement),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn sections_and_columns_match_points(a in arb_rep2()) {
            for n in 0..24u64 {
                let s = a.section(n);
                let c = a.column(n);
                for y in 0..24u64 {
                    prop_assert_eq!(s.contains_u64(y), a.contains(n, y));
                    prop_assert_eq!(c.contains_u64(y), a.contains(y, n));
                }
            }
        }

        #[test]
        fn family_tails_differ_finitely(a in arb_rep2()) {
            let fam = a.section_family();
            for n in fam.threshold..fam.threshold + 2 * fam.period + 3 {
                let diff = a.section(n).boolean(fam.tail(n), crate::ep::BoolOp::SymmetricDifference);
                prop_assert!(diff.is_finite(), "n = {}", n);
            }
        }

        #[test]
        fn along_matches_points(a in arb_rep2(), p in 0u64..3, q in 0u64..4, s in 0u64..3) {
            let f = EqpFunction::affine(p, q);
            let g = EqpFunction::polynomial(Poly::from_int_coeffs(&[s as i64, 0, 1])).unwrap();
            let set = a.along(&f, &g);
            for x in 0..40u64 {
                let (fx, gx) = (f.eval_u64(x).to_u64().unwrap(), g.eval_u64(x).to_u64().unwrap());
                prop_assert_eq!(set.contains_u64(x), a.contains(fx, gx));
            }
        }
    }
}
