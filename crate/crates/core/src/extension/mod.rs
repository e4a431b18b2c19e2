//! The fragment extension `*N`: maps in the decidable class, taken modulo an
//! ambient ultrafilter.
//!
//! A point `ξ = [f]` is an [`EqpFunction`] read modulo the ambient `U`:
//! `[f] = [g]` iff `{x : f(x) = g(x)} ∈ U`. Every star operation reduces to a
//! membership question for an eventually periodic set.

pub mod axioms;
pub mod formula;
pub mod orbit;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::ep::EpSet;
use crate::eqp::EqpFunction;
use crate::error::Result;
use crate::poly::{rat, MultiPoly};
use crate::rep2::Rep2Set;
use crate::ultrafilter::{Certificate, Equality, HReport, UltrafilterHandle};

pub const DEFAULT_HORIZON: u64 = 1000;

/// The ambient ultrafilter plus run settings.
#[derive(Clone, Debug)]
pub struct Context {
    pub ambient: UltrafilterHandle,
    pub horizon: u64,
    pub samples: usize,
    pub seed: u64,
}

/// A point of the extension, represented by a sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HyperNat {
    pub rep: EqpFunction,
}

impl HyperNat {
    pub fn new(rep: EqpFunction) -> Self {
        HyperNat { rep }
    }

    pub fn standard(k: u64) -> Self {
        HyperNat::new(EqpFunction::constant(k))
    }

    /// The diagonal point `[n ↦ n]`.
    pub fn diagonal() -> Self {
        HyperNat::new(EqpFunction::identity())
    }
}

impl fmt::Display for HyperNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

impl Serialize for HyperNat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Separability {
    SeparatedBy {
        witness: EpSet,
    },
    IndiscernibleCertified {
        certificate: Certificate,
    },
    UnknownUpTo {
        horizon: u64,
    },
    /// The two points are equal.
    SamePoint,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndiscernibilityReport {
    pub xi: HyperNat,
    pub eta: HyperNat,
    pub distinct: bool,
    pub separable: Separability,
    pub hausdorff: HReport,
}

/// Cantor unpairing component, computed with integer square roots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Tier2Map {
    CantorFirst,
    CantorSecond,
}

impl Tier2Map {
    pub fn apply(self, z: &BigInt) -> BigInt {
        let (a, b) = cantor_unpair(z);
        match self {
            Tier2Map::CantorFirst => a,
            Tier2Map::CantorSecond => b,
        }
    }
}

pub fn cantor_pair(a: &BigInt, b: &BigInt) -> BigInt {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

pub fn cantor_unpair(z: &BigInt) -> (BigInt, BigInt) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = &w - &b;
    (a, b)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DirWitness {
    pub zeta: HyperNat,
    pub p1: Tier2Map,
    pub p2: Tier2Map,
    /// The pairing identities hold as polynomial identities and `ζ` is the
    /// pointwise pairing of the two representatives.
    pub symbolic: bool,
    pub checked_up_to: u64,
    pub pointwise_failures: Vec<u64>,
}

impl DirWitness {
    pub fn verified(&self) -> bool {
        self.symbolic && self.pointwise_failures.is_empty()
    }
}

/// `T(s) <= π(a, b) < T(s + 1)` for `s = a + b`, `T` the triangular numbers.
fn pairing_identities_hold() -> bool {
    let a = MultiPoly::var(2, 0);
    let b = MultiPoly::var(2, 1);
    let half = num_rational::BigRational::new(BigInt::one(), BigInt::from(2));
    let tri = |s: &MultiPoly| s.mul(&s.add(&MultiPoly::constant(2, rat(1)))).scale(&half);
    let s = a.add(&b);
    let s1 = s.add(&MultiPoly::constant(2, rat(1)));
    let pi = MultiPoly::cantor_pairing();
    let lower = pi.sub(&tri(&s)).sub(&b);
    let upper = tri(&s1)
        .sub(&pi)
        .sub(&a)
        .sub(&MultiPoly::constant(2, rat(1)));
    lower.terms().next().is_none() && upper.terms().next().is_none()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Possibility {
    /// Running intersections, ending in the empty set.
    NoFip {
        chain: Vec<EpSet>,
    },
    StandardWitness {
        point: u64,
        memberships: Vec<bool>,
    },
    HyperWitness {
        point: HyperNat,
        memberships: Vec<bool>,
    },
}

impl Context {
    pub fn new(ambient: UltrafilterHandle) -> Self {
        Context {
            ambient,
            horizon: DEFAULT_HORIZON,
            samples: 1000,
            seed: 0,
        }
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn star_apply(&self, f: &EqpFunction, xi: &HyperNat) -> HyperNat {
        HyperNat::new(f.compose(&xi.rep))
    }

    pub fn star_member(&self, xi: &HyperNat, a: &EpSet) -> bool {
        self.ambient.member(&xi.rep.preimage(a))
    }

    pub fn hyper_equal(&self, xi: &HyperNat, eta: &HyperNat) -> bool {
        self.ambient.member(&xi.rep.equalizer(&eta.rep))
    }

    pub fn hyper_less_eq(&self, xi: &HyperNat, eta: &HyperNat) -> bool {
        self.ambient
            .member(&xi.rep.compare(&eta.rep).less_or_equal())
    }

    pub fn star_apply_k(&self, f: &MultiPoly, points: &[&HyperNat]) -> Result<HyperNat> {
        let reps: Vec<&EqpFunction> = points.iter().map(|p| &p.rep).collect();
        Ok(HyperNat::new(EqpFunction::poly_combine(f, &reps)?))
    }

    pub fn star_monus(&self, xi: &HyperNat, eta: &HyperNat) -> HyperNat {
        HyperNat::new(xi.rep.monus(&eta.rep))
    }

    pub fn star_rel2(&self, r: &Rep2Set, xi: &HyperNat, eta: &HyperNat) -> bool {
        self.ambient.member(&r.along(&xi.rep, &eta.rep))
    }

    /// `U_ξ = {A : ξ ∈ *A}`.
    pub fn u_point(&self, xi: &HyperNat) -> UltrafilterHandle {
        self.ambient.pushforward(&xi.rep)
    }

    /// The standard value of `ξ`, if it has one.
    pub fn standard_value(&self, xi: &HyperNat) -> Option<BigInt> {
        match self.u_point(xi) {
            UltrafilterHandle::Principal(k) => Some(k),
            _ => None,
        }
    }

    pub fn monad_compare(&self, xi: &HyperNat, eta: &HyperNat) -> IndiscernibilityReport {
        let hausdorff = self
            .ambient
            .hausdorff_check(&xi.rep, &eta.rep, self.horizon);
        let distinct = !hausdorff.equalizer_in_u;
        let separable = if !distinct {
            Separability::SamePoint
        } else {
            match &hausdorff.pushforwards {
                Equality::Distinct { witness } => Separability::SeparatedBy {
                    witness: witness.clone(),
                },
                Equality::EqualCertified { certificate } => Separability::IndiscernibleCertified {
                    certificate: certificate.clone(),
                },
                Equality::EqualUpTo { horizon } => Separability::UnknownUpTo { horizon: *horizon },
            }
        };
        IndiscernibilityReport {
            xi: xi.clone(),
            eta: eta.clone(),
            distinct,
            separable,
            hausdorff,
        }
    }

    /// A set whose extension contains `ξ` but not `η`.
    pub fn separate(&self, xi: &HyperNat, eta: &HyperNat) -> Option<EpSet> {
        match self.monad_compare(xi, eta).separable {
            Separability::SeparatedBy { witness } => Some(witness),
            _ => None,
        }
    }

    /// `ζ = [π(ξ, η)]` with the Cantor unpairing maps as projections,
    /// checked pointwise on `0..=check_up_to`.
    pub fn dir_witness(&self, xi: &HyperNat, eta: &HyperNat, check_up_to: u64) -> DirWitness {
        let zeta = HyperNat::new(xi.rep.pair(&eta.rep));
        let recomputed =
            EqpFunction::poly_combine(&MultiPoly::cantor_pairing(), &[&xi.rep, &eta.rep])
                .expect("pairing is natural-valued");
        let symbolic = pairing_identities_hold() && zeta.rep.equalizer(&recomputed).is_all();
        let pointwise_failures = (0..=check_up_to)
            .filter(|&n| {
                let z = zeta.rep.eval_u64(n);
                Tier2Map::CantorFirst.apply(&z) != xi.rep.eval_u64(n)
                    || Tier2Map::CantorSecond.apply(&z) != eta.rep.eval_u64(n)
            })
            .collect();
        DirWitness {
            zeta,
            p1: Tier2Map::CantorFirst,
            p2: Tier2Map::CantorSecond,
            symbolic,
            checked_up_to: check_up_to,
            pointwise_failures,
        }
    }

    pub fn poss_witness(&self, family: &[EpSet]) -> Possibility {
        let mut chain = Vec::with_capacity(family.len());
        let mut acc = EpSet::all();
        for a in family {
            acc = acc.intersection(a);
            chain.push(acc.clone());
        }
        if acc.is_empty() {
            return Possibility::NoFip { chain };
        }
        if acc.is_finite() {
            let point = acc.min_element().expect("nonempty");
            let memberships = family.iter().map(|a| a.contains_u64(point)).collect();
            return Possibility::StandardWitness { point, memberships };
        }
        let point = HyperNat::new(EqpFunction::enumerate(&acc).expect("infinite"));
        let memberships = family.iter().map(|a| self.star_member(&point, a)).collect();
        Possibility::HyperWitness { point, memberships }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn ctx0() -> Context {
        Context::new(UltrafilterHandle::integer_like(0))
    }

    fn poly(c: &[i64]) -> EqpFunction {
        EqpFunction::polynomial(Poly::from_int_coeffs(c)).unwrap()
    }

    #[test]
    fn star_apply_examples() {
        let c = ctx0();
        let id = HyperNat::diagonal();
        assert_eq!(c.star_apply(&poly(&[1, 1]), &id).rep, poly(&[1, 1]));
        let shifted = HyperNat::new(poly(&[1, 1]));
        assert_eq!(
            c.star_apply(&poly(&[0, 0, 1]), &shifted).rep,
            poly(&[1, 2, 1])
        );
        let five = c.star_apply(&EqpFunction::constant(5), &id);
        assert_eq!(c.standard_value(&five), Some(BigInt::from(5)));
    }

    #[test]
    fn star_member_examples() {
        let c = ctx0();
        assert!(c.star_member(&HyperNat::diagonal(), &EpSet::evens()));
        assert!(!c.star_member(&HyperNat::new(poly(&[1, 2])), &EpSet::evens()));
        assert!(c.star_member(&HyperNat::standard(4), &EpSet::evens()));
        assert!(!c.star_member(&HyperNat::standard(4), &EpSet::odds()));
    }

    #[test]
    fn multivariate_examples() {
        let c = ctx0();
        let plus = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1));
        let s = c
            .star_apply_k(&plus, &[&HyperNat::diagonal(), &HyperNat::standard(1)])
            .unwrap();
        assert_eq!(s.rep, poly(&[1, 1]));
        let xi = HyperNat::diagonal();
        assert!(c.star_rel2(&Rep2Set::Diagonal, &xi, &xi));
        assert!(!c.star_rel2(&Rep2Set::Diagonal, &xi, &HyperNat::new(poly(&[0, 0, 1]))));
    }

    #[test]
    fn u_point_examples() {
        let c = ctx0();
        assert_eq!(
            c.u_point(&HyperNat::diagonal()).to_string(),
            "profinite:int:0"
        );
        assert_eq!(c.u_point(&HyperNat::standard(5)).to_string(), "principal:5");
        assert_eq!(
            c.u_point(&HyperNat::new(poly(&[1, 2]))).to_string(),
            "profinite:int:1"
        );
    }

    #[test]
    fn monad_examples() {
        let c = ctx0();
        let id = HyperNat::diagonal();
        let r = c.monad_compare(&id, &HyperNat::new(poly(&[0, 0, 1])));
        assert!(r.distinct);
        assert!(matches!(
            r.separable,
            Separability::IndiscernibleCertified { .. }
        ));
        let r = c.monad_compare(&id, &HyperNat::new(poly(&[1, 1])));
        assert_eq!(
            r.separable,
            Separability::SeparatedBy {
                witness: EpSet::evens()
            }
        );
        assert!(!c.monad_compare(&id, &id).distinct);
    }

    #[test]
    fn dir_examples() {
        let c = ctx0();
        let w = c.dir_witness(&HyperNat::standard(0), &HyperNat::standard(0), 50);
        assert_eq!(w.zeta, HyperNat::standard(0));
        assert!(w.verified());
        let w = c.dir_witness(
            &HyperNat::diagonal(),
            &HyperNat::new(poly(&[0, 0, 1])),
            2000,
        );
        assert!(w.verified());
        assert_eq!(w.zeta.rep.eval_u64(2), BigInt::from(25));
    }

    #[test]
    fn unpairing_inverts_pairing() {
        for a in 0..60u32 {
            for b in 0..60u32 {
                let z = cantor_pair(&a.into(), &b.into());
                assert_eq!(cantor_unpair(&z), (a.into(), b.into()));
            }
        }
    }

    #[test]
    fn poss_examples() {
        let c = ctx0();
        let fam = [EpSet::evens(), EpSet::multiples(3), EpSet::from_value(10)];
        match c.poss_witness(&fam) {
            Possibility::HyperWitness { point, memberships } => {
                assert_eq!(point.rep, poly(&[12, 6]));
                assert!(memberships.iter().all(|&b| b));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            c.poss_witness(&[EpSet::evens(), EpSet::odds()]),
            Possibility::NoFip { .. }
        ));
        assert_eq!(
            c.poss_witness(&[EpSet::finite([5])]),
            Possibility::StandardWitness {
                point: 5,
                memberships: vec![true]
            }
        );
    }
}
