//! Eventually quasi-polynomial maps `N -> N`.
//!
//! An [`EqpFunction`] is given by a finite table of prefix values followed,
//! from the threshold on, by one integer-valued polynomial per residue class
//! of the branch modulus. The class is closed under composition, polynomial
//! combination (hence Cantor pairing) and truncated subtraction, and its
//! equalizers, order partitions and preimages of [`EpSet`]s are again
//! [`EpSet`]s, computed exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::ep::EpSet;
use crate::error::{Error, Result};
use crate::poly::{rat, MultiPoly, Poly};
use crate::quasi::QuasiPoly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EqpFunction(pub(crate) QuasiPoly);

/// Order partition of the naturals induced by two functions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Comparison {
    pub less: EpSet,
    pub equal: EpSet,
    pub greater: EpSet,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareVerdict {
    Less,
    Equal,
    Greater,
    Mixed,
}

impl Comparison {
    pub fn verdict(&self) -> CompareVerdict {
        if self.equal.is_all() {
            CompareVerdict::Equal
        } else if self.less.is_all() {
            CompareVerdict::Less
        } else if self.greater.is_all() {
            CompareVerdict::Greater
        } else {
            CompareVerdict::Mixed
        }
    }

    pub fn less_or_equal(&self) -> EpSet {
        self.less.union(&self.equal)
    }
}

impl EqpFunction {
    /// Builds `x < prefix.len() ↦ prefix[x]`, otherwise `branches[x mod m](x)`.
    pub fn new(prefix: Vec<BigInt>, modulus: u64, branches: Vec<Poly>) -> Result<Self> {
        if modulus == 0 || branches.len() as u64 != modulus {
            return Err(Error::InvalidFunction(format!(
                "expected {modulus} branches, got {}",
                branches.len()
            )));
        }
        if let Some(v) = prefix.iter().find(|v| v.is_negative()) {
            return Err(Error::NotNatValued(format!("prefix value {v}")));
        }
        let q = QuasiPoly {
            prefix,
            modulus,
            branches,
        };
        q.check_integral()?;
        EqpFunction::from_quasi(q.canonical())
    }

    pub(crate) fn from_quasi(q: QuasiPoly) -> Result<Self> {
        if !q.is_nonneg() {
            let neg = q.sign_sets().negative;
            return Err(Error::NotNatValued(format!("negative on {neg}")));
        }
        Ok(EqpFunction(q))
    }

    pub fn polynomial(p: Poly) -> Result<Self> {
        EqpFunction::new(Vec::new(), 1, vec![p])
    }

    pub fn identity() -> Self {
        EqpFunction(QuasiPoly::identity())
    }

    pub fn constant(c: u64) -> Self {
        EqpFunction(QuasiPoly::constant(&BigInt::from(c)))
    }

    pub fn constant_big(c: &BigInt) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::NotNatValued(format!("constant {c}")));
        }
        Ok(EqpFunction(QuasiPoly::constant(c)))
    }

    /// `n ↦ a·n + b` with natural `a`, `b`.
    pub fn affine(a: u64, b: u64) -> Self {
        EqpFunction(QuasiPoly::from_poly(Poly::affine(
            rat(a as i64),
            rat(b as i64),
        )))
    }

    pub fn threshold(&self) -> u64 {
        self.0.threshold()
    }

    pub fn prefix_values(&self) -> &[BigInt] {
        &self.0.prefix
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    pub fn branches(&self) -> &[Poly] {
        &self.0.branches
    }

    /// The polynomial used on residue class `r` beyond the threshold.
    pub fn branch(&self, r: u64) -> &Poly {
        self.0.branch(r)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.eval(x)
    }

    pub fn eval_u64(&self, x: u64) -> BigInt {
        self.0.eval_u64(x)
    }

    /// Some constant `c` with `f = c` everywhere.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.0.prefix.is_empty() && self.0.modulus == 1 {
            self.0.branches[0].constant_value().map(|c| c.to_integer())
        } else {
            None
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &EqpFunction) -> EqpFunction {
        EqpFunction(QuasiPoly::compose(&self.0, &inner.0))
    }

    /// `{x : self(x) = other(x)}`.
    pub fn equalizer(&self, other: &EqpFunction) -> EpSet {
        self.0.sub(&other.0).zero_set()
    }

    pub fn compare(&self, other: &EqpFunction) -> Comparison {
        let s = self.0.sub(&other.0).sign_sets();
        Comparison {
            less: s.negative,
            equal: s.zero,
            greater: s.positive,
        }
    }

    /// `{x : self(x) ∈ set}`.
    pub fn preimage(&self, set: &EpSet) -> EpSet {
        let m = set.modulus();
        let tail = self
            .0
            .at_least(&BigInt::from(set.threshold()))
            .intersection(&self.0.residue_set(m, |r| set.tail_contains_residue(r)));
        set.prefix_members().fold(tail, |acc, a| {
            let hit = self
                .0
                .sub(&QuasiPoly::constant(&BigInt::from(a)))
                .zero_set();
            acc.union(&hit)
        })
    }

    /// The 0/1-valued indicator of `set`.
    pub fn characteristic(set: &EpSet) -> EqpFunction {
        let one = BigInt::from(1);
        let zero = BigInt::zero();
        let prefix = (0..set.threshold())
            .map(|x| {
                if set.contains_u64(x) {
                    one.clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        let branches = (0..set.modulus())
            .map(|r| Poly::from_int(set.tail_contains_residue(r) as i64))
            .collect();
        EqpFunction(
            QuasiPoly {
                prefix,
                modulus: set.modulus(),
                branches,
            }
            .canonical(),
        )
    }

    /// Strictly increasing enumeration of an infinite set.
    pub fn enumerate(set: &EpSet) -> Result<EqpFunction> {
        if set.is_finite() {
            return Err(Error::FiniteSet);
        }
        let prefix: Vec<BigInt> = set.prefix_members().map(BigInt::from).collect();
        let j = prefix.len() as i64;
        let m = set.modulus();
        let start = set.threshold();
        let tail: Vec<u64> = (start..start + m)
            .filter(|&x| set.tail_contains_residue(x))
            .collect();
        let s = tail.len() as i64;
        let slope = BigRational::new(BigInt::from(m), BigInt::from(s));
        // n = j + q·s + i  ↦  tail[i] + q·m
        let branches = (0..s)
            .map(|c| {
                let i = (c - j).rem_euclid(s);
                let offset = rat(tail[i as usize] as i64) - &slope * rat(j + i);
                Poly::affine(slope.clone(), offset)
            })
            .collect();
        let q = QuasiPoly {
            prefix,
            modulus: s as u64,
            branches,
        };
        Ok(EqpFunction(q.canonical()))
    }

    /// `k`-ary integer-coefficient (or integer-valued) polynomial applied
    /// pointwise to `args`.
    pub fn poly_combine(f: &MultiPoly, args: &[&EqpFunction]) -> Result<EqpFunction> {
        if f.arity() != args.len() {
            return Err(Error::InvalidFunction(format!(
                "polynomial has arity {}, got {} arguments",
                f.arity(),
                args.len()
            )));
        }
        let inner: Vec<&QuasiPoly> = args.iter().map(|a| &a.0).collect();
        EqpFunction::from_quasi(QuasiPoly::combine(f, &inner)?)
    }

    /// Cantor coding `n ↦ π(self(n), other(n))`.
    pub fn pair(&self, other: &EqpFunction) -> EqpFunction {
        EqpFunction::poly_combine(&MultiPoly::cantor_pairing(), &[self, other])
            .expect("Cantor pairing of natural maps is natural-valued")
    }

    /// Truncated subtraction `max(self - other, 0)`.
    pub fn monus(&self, other: &EqpFunction) -> EqpFunction {
        EqpFunction(self.0.sub(&other.0).clamp_nonneg())
    }

    pub fn literal(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EqpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.0;
        if q.modulus == 1 {
            write!(f, "{}", q.branches[0])?;
        } else {
            let cases: Vec<String> = q
                .branches
                .iter()
                .enumerate()
                .map(|(r, p)| format!("{r} mod {} -> {p}", q.modulus))
                .collect();
            write!(f, "{{{}}}", cases.join("; "))?;
        }
        // prefix overrides: only points where the branch disagrees
        let overrides: Vec<String> = q
            .prefix
            .iter()
            .enumerate()
            .filter(|(x, v)| {
                let b = q.branch(*x as u64).eval_int(&BigInt::from(*x as u64));
                !(b.is_integer() && b.to_integer() == **v)
            })
            .map(|(x, v)| format!("{x}->{v}"))
            .collect();
        if !overrides.is_empty() {
            write!(f, " | {}", overrides.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for EqpFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
