//! Ultrafilters on the algebra of eventually periodic sets.
//!
//! A principal handle is a point `k`. A profinite handle is a residue oracle
//! `ξ`; it contains `A` iff `ξ mod m_A` is a tail residue of `A`, so it holds
//! every cofinite set and no finite one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::ep::{lcm, EpSet};
use crate::eqp::EqpFunction;
use crate::error::{Error, Result};
use crate::oracle::{prime_powers_up_to, Commitment, ResidueOracle};
use crate::poly::Poly;
use crate::rep2::Rep2Set;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Coordinate {
    First,
    Second,
}

#[derive(Clone, Debug)]
pub enum UltrafilterHandle {
    Principal(BigInt),
    Profinite(ResidueOracle),
    /// Pushforward of a tensor product along a coordinate projection.
    Projection(Box<TensorHandle>, Coordinate),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Certificate {
    /// Both handles are the same principal point.
    SamePrincipal { point: String },
    /// Both handles are the same integer-like profinite point.
    SameInteger { value: String },
    /// Both handles apply the same polynomial to one lazy oracle.
    SameDerived { seed: u64, poly: String },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Equality {
    /// `witness` is in the first handle and not in the second.
    Distinct {
        witness: EpSet,
    },
    EqualCertified {
        certificate: Certificate,
    },
    /// Residues agree at every modulus up to the horizon.
    EqualUpTo {
        horizon: u64,
    },
}

impl Equality {
    pub fn is_distinct(&self) -> bool {
        matches!(self, Equality::Distinct { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Equality::EqualCertified { .. })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum HVerdict {
    Holds,
    Violated,
    Inconclusive,
    InternalInconsistency,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HReport {
    pub equalizer: EpSet,
    pub equalizer_in_u: bool,
    pub pushforwards: Equality,
    pub verdict: HVerdict,
    /// Prime committed by root avoidance for this query.
    pub avoidance_prime: Option<u64>,
}

impl UltrafilterHandle {
    pub fn principal(k: impl Into<BigInt>) -> Self {
        UltrafilterHandle::Principal(k.into())
    }

    pub fn integer_like(c: impl Into<BigInt>) -> Self {
        UltrafilterHandle::Profinite(ResidueOracle::integer(c))
    }

    pub fn lazy(seed: u64, avoid: bool) -> Self {
        UltrafilterHandle::Profinite(ResidueOracle::lazy(seed, avoid))
    }

    /// Replaces projections by the factor they provably equal.
    pub fn resolve(&self) -> UltrafilterHandle {
        match self {
            UltrafilterHandle::Projection(t, Coordinate::First) => t.left.resolve(),
            UltrafilterHandle::Projection(t, Coordinate::Second) => t.right.resolve(),
            h => h.clone(),
        }
    }

    pub fn is_principal(&self) -> bool {
        matches!(self.resolve(), UltrafilterHandle::Principal(_))
    }

    pub fn oracle(&self) -> Option<ResidueOracle> {
        match self.resolve() {
            UltrafilterHandle::Profinite(o) => Some(o),
            _ => None,
        }
    }

    /// The commitment log of the underlying lazy oracle, if any.
    pub fn log(&self) -> Vec<Commitment> {
        self.oracle().map(|o| o.log()).unwrap_or_default()
    }

    pub fn member(&self, a: &EpSet) -> bool {
        match self {
            UltrafilterHandle::Principal(k) => a.contains(k),
            UltrafilterHandle::Profinite(o) => a.tail_contains_residue(o.residue(a.modulus())),
            UltrafilterHandle::Projection(t, Coordinate::First) => {
                t.member(&Rep2Set::product(a.clone(), EpSet::all()))
            }
            UltrafilterHandle::Projection(t, Coordinate::Second) => {
                t.member(&Rep2Set::product(EpSet::all(), a.clone()))
            }
        }
    }

    /// Residue class `ξ mod m` selected by the handle.
    pub fn residue(&self, m: u64) -> u64 {
        match self.resolve() {
            UltrafilterHandle::Principal(k) => {
                num_integer::Integer::mod_floor(&k, &BigInt::from(m))
                    .to_u64()
                    .unwrap()
            }
            UltrafilterHandle::Profinite(o) => o.residue(m),
            UltrafilterHandle::Projection(..) => unreachable!("resolved"),
        }
    }

    /// The branch of `f` on the class this handle selects.
    pub fn large_branch<'a>(&self, f: &'a EqpFunction) -> &'a Poly {
        f.branch(self.residue(f.modulus()))
    }

    /// `{A : f⁻¹(A) ∈ U}`.
    pub fn pushforward(&self, f: &EqpFunction) -> UltrafilterHandle {
        match self.resolve() {
            UltrafilterHandle::Principal(k) => UltrafilterHandle::Principal(f.eval(&k)),
            UltrafilterHandle::Profinite(o) => {
                let p = self.large_branch(f);
                match p.constant_value() {
                    Some(c) => UltrafilterHandle::Principal(c.to_integer()),
                    None => UltrafilterHandle::Profinite(o.apply(p)),
                }
            }
            UltrafilterHandle::Projection(..) => unreachable!("resolved"),
        }
    }

    pub fn equal(&self, other: &UltrafilterHandle, horizon: u64) -> Equality {
        self.equal_with_hints(other, horizon, &[])
    }

    /// Decides equality, trying the `hints` moduli before the horizon scan.
    pub fn equal_with_hints(
        &self,
        other: &UltrafilterHandle,
        horizon: u64,
        hints: &[u64],
    ) -> Equality {
        use UltrafilterHandle::*;
        let (u, v) = (self.resolve(), other.resolve());
        match (&u, &v) {
            (Principal(a), Principal(b)) => {
                if a == b {
                    return Equality::EqualCertified {
                        certificate: Certificate::SamePrincipal {
                            point: a.to_string(),
                        },
                    };
                }
                return Equality::Distinct {
                    witness: singleton(a),
                };
            }
            (Principal(a), Profinite(_)) => {
                return Equality::Distinct {
                    witness: singleton(a),
                }
            }
            (Profinite(_), Principal(b)) => {
                return Equality::Distinct {
                    witness: singleton(b).complement(),
                }
            }
            _ => {}
        }
        let (Profinite(ou), Profinite(ov)) = (&u, &v) else {
            unreachable!("resolved")
        };
        match (ou, ov) {
            (ResidueOracle::IntegerLike(a), ResidueOracle::IntegerLike(b)) => {
                if a == b {
                    return Equality::EqualCertified {
                        certificate: Certificate::SameInteger {
                            value: a.to_string(),
                        },
                    };
                }
                let diff = a - b;
                let m = (2u64..)
                    .find(|&m| !num_integer::Integer::is_multiple_of(&diff, &BigInt::from(m)))
                    .unwrap();
                return Equality::Distinct {
                    witness: EpSet::periodic(m, [ou.residue(m)]),
                };
            }
            (
                ResidueOracle::Lazy { base: bu, poly: pu },
                ResidueOracle::Lazy { base: bv, poly: pv },
            ) if bu.same_state(bv) && pu == pv => {
                return Equality::EqualCertified {
                    certificate: Certificate::SameDerived {
                        seed: bu.seed(),
                        poly: pu.to_string(),
                    },
                };
            }
            _ => {}
        }
        let scan = hints.iter().copied().chain(prime_powers_up_to(horizon));
        for q in scan {
            let (ru, rv) = (ou.residue(q), ov.residue(q));
            if ru != rv {
                return Equality::Distinct {
                    witness: EpSet::periodic(q, [ru]),
                };
            }
        }
        Equality::EqualUpTo { horizon }
    }

    /// Checks condition (H) for `f`, `g` at this ultrafilter.
    pub fn hausdorff_check(&self, f: &EqpFunction, g: &EqpFunction, horizon: u64) -> HReport {
        let equalizer = f.equalizer(g);
        let equalizer_in_u = self.member(&equalizer);
        let mut avoidance_prime = None;
        if !equalizer_in_u {
            avoidance_prime = self.avoid(f, g);
        }
        let (pf, pg) = (self.pushforward(f), self.pushforward(g));
        let hints: Vec<u64> = avoidance_prime.into_iter().collect();
        let pushforwards = pf.equal_with_hints(&pg, horizon, &hints);
        let verdict = match (&pushforwards, equalizer_in_u) {
            (Equality::Distinct { .. }, true) => HVerdict::InternalInconsistency,
            (Equality::Distinct { .. }, false) => HVerdict::Holds,
            (Equality::EqualCertified { .. }, false) => HVerdict::Violated,
            (_, true) => HVerdict::Holds,
            (Equality::EqualUpTo { .. }, false) => HVerdict::Inconclusive,
        };
        HReport {
            equalizer,
            equalizer_in_u,
            pushforwards,
            verdict,
            avoidance_prime,
        }
    }

    /// Registers `P∘B − Q∘B` with an avoiding lazy oracle, where `P`, `Q`
    /// are the large branches of `f`, `g` and `B` the oracle's polynomial.
    pub(crate) fn avoid(&self, f: &EqpFunction, g: &EqpFunction) -> Option<u64> {
        let Some(ResidueOracle::Lazy { base, poly }) = self.oracle() else {
            return None;
        };
        if !base.avoidance() {
            return None;
        }
        let m = lcm(f.modulus(), g.modulus());
        let r = self.residue(m);
        let (p, q) = (f.branch(r % f.modulus()), g.branch(r % g.modulus()));
        if p.is_constant() || q.is_constant() || p == q {
            return None;
        }
        base.avoid_root(&(&p.compose(&poly) - &q.compose(&poly)))
    }

    pub fn tensor(&self, other: &UltrafilterHandle) -> TensorHandle {
        TensorHandle {
            left: self.clone(),
            right: other.clone(),
        }
    }
}

fn singleton(k: &BigInt) -> EpSet {
    EpSet::singleton(k.to_u64().expect("principal point fits in u64"))
}

impl fmt::Display for UltrafilterHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterHandle::Principal(k) => write!(f, "principal:{k}"),
            UltrafilterHandle::Profinite(o) => write!(f, "profinite:{o}"),
            UltrafilterHandle::Projection(t, c) => {
                let i = if *c == Coordinate::First { 1 } else { 2 };
                write!(f, "proj{i}({} x {})", t.left, t.right)
            }
        }
    }
}

impl Serialize for UltrafilterHandle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `principal:K`, `profinite:int:C` or
/// `profinite:lazy:seed=S[:avoid=on|off]`.
impl FromStr for UltrafilterHandle {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            offset: 0,
            message: format!("{msg} in oracle `{text}`"),
        };
        let parts: Vec<&str> = text.trim().split(':').collect();
        match parts.as_slice() {
            ["principal", k] => k
                .parse::<BigInt>()
                .ok()
                .filter(|k| k.sign() != num_bigint::Sign::Minus)
                .map(UltrafilterHandle::Principal)
                .ok_or_else(|| bad("expected a natural number")),
            ["profinite", "int", c] => c
                .parse::<BigInt>()
                .map(UltrafilterHandle::integer_like)
                .map_err(|_| bad("expected an integer")),
            ["profinite", "lazy", rest @ ..] => {
                let mut seed = 0u64;
                let mut avoid = true;
                for kv in rest {
                    match kv.split_once('=') {
                        Some(("seed", v)) => {
                            seed = v.parse().map_err(|_| bad("bad seed"))?;
                        }
                        Some(("avoid", "on")) => avoid = true,
                        Some(("avoid", "off")) => avoid = false,
                        _ => return Err(bad(&format!("unknown option `{kv}`"))),
                    }
                }
                Ok(UltrafilterHandle::lazy(seed, avoid))
            }
            _ => Err(bad("unknown form")),
        }
    }
}

/// `U ⊗ V`: `A ∈ U ⊗ V` iff `{n : A_n ∈ V} ∈ U`.
#[derive(Clone, Debug)]
pub struct TensorHandle {
    pub left: UltrafilterHandle,
    pub right: UltrafilterHandle,
}

impl TensorHandle {
    /// `{n : A_n ∈ V}`.
    pub fn inner_set(&self, a: &Rep2Set) -> EpSet {
        match self.right.resolve() {
            UltrafilterHandle::Principal(k) => {
                a.column(k.to_u64().expect("principal point fits in u64"))
            }
            v => a.inner_set_by_tails(|s| v.member(s)),
        }
    }

    pub fn member(&self, a: &Rep2Set) -> bool {
        self.left.member(&self.inner_set(a))
    }

    pub fn projection(&self, which: Coordinate) -> UltrafilterHandle {
        UltrafilterHandle::Projection(Box::new(self.clone()), which)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn square() -> EqpFunction {
        EqpFunction::polynomial(Poly::from_int_coeffs(&[0, 0, 1])).unwrap()
    }

    #[test]
    fn membership_rules() {
        let u = UltrafilterHandle::integer_like(0);
        assert!(u.member(&EpSet::evens()));
        assert!(!u.member(&EpSet::finite([0, 1])));
        assert!(UltrafilterHandle::principal(7).member(&EpSet::odds()));
    }

    #[test]
    fn pushforwards() {
        let u = UltrafilterHandle::integer_like(0);
        let sq = u.pushforward(&square());
        assert_eq!(sq.to_string(), "profinite:int:0");
        let shift = u.pushforward(&EqpFunction::affine(1, 3));
        assert_eq!(shift.to_string(), "profinite:int:3");
        let c = u.pushforward(&EqpFunction::constant(5));
        assert_eq!(c.to_string(), "principal:5");
    }

    #[test]
    fn equality_examples() {
        let p3 = UltrafilterHandle::principal(3);
        assert!(p3.equal(&p3.clone(), 10).is_certified());
        let u = UltrafilterHandle::integer_like(0);
        assert_eq!(
            u.equal(&UltrafilterHandle::principal(0), 10),
            Equality::Distinct {
                witness: EpSet::singleton(0).complement()
            }
        );
        let a = u.pushforward(&EqpFunction::identity());
        let b = u.pushforward(&square());
        assert!(a.equal(&b, 1000).is_certified());
    }

    #[test]
    fn hausdorff_examples() {
        let u = UltrafilterHandle::integer_like(0);
        let r = u.hausdorff_check(&EqpFunction::identity(), &square(), 100);
        assert_eq!(r.equalizer, EpSet::finite([0, 1]));
        assert!(!r.equalizer_in_u);
        assert_eq!(r.verdict, HVerdict::Violated);

        let f = EqpFunction::affine(3, 1);
        assert_eq!(u.hausdorff_check(&f, &f, 100).verdict, HVerdict::Holds);

        let lazy = UltrafilterHandle::lazy(42, true);
        let r = lazy.hausdorff_check(&EqpFunction::identity(), &square(), 100);
        assert_eq!(r.verdict, HVerdict::Holds);
        let q = r.avoidance_prime.unwrap();
        assert!(lazy
            .log()
            .iter()
            .any(|c| c.prime_power == q && c.residue > 1));
    }

    #[test]
    fn tensor_examples() {
        let u = UltrafilterHandle::integer_like(0);
        let t = u.tensor(&u);
        assert!(!t.member(&Rep2Set::Diagonal));
        assert!(t.member(&Rep2Set::linear_congruence(1, -1, 0, 2).unwrap()));
        assert!(t.member(&Rep2Set::product(EpSet::evens(), EpSet::multiples(3))));
        assert!(!t.member(&Rep2Set::product(EpSet::evens(), EpSet::odds())));
        let p1 = t.projection(Coordinate::First);
        for a in [
            EpSet::evens(),
            EpSet::odds(),
            EpSet::finite([0]),
            EpSet::multiples(5),
        ] {
            assert_eq!(p1.member(&a), u.member(&a));
        }
    }

    #[test]
    fn oracle_strings() {
        for s in [
            "principal:7",
            "profinite:int:-2",
            "profinite:lazy:seed=42:avoid=on",
        ] {
            assert_eq!(s.parse::<UltrafilterHandle>().unwrap().to_string(), s);
        }
        assert!("principal:-1".parse::<UltrafilterHandle>().is_err());
        assert!("profinite:lazy:speed=1"
            .parse::<UltrafilterHandle>()
            .is_err());
    }
}
