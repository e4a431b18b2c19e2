//! Integer-valued eventually quasi-polynomial maps `N -> Z`.
//!
//! This is the signed workhorse behind [`crate::eqp::EqpFunction`]: pointwise
//! polynomial combination, composition, and the exact level sets (zeros,
//! signs, residues) that turn a map into an [`EpSet`].

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ep::{lcm, EpSet};
use crate::error::{Error, Result};
use crate::poly::{int_rat, MultiPoly, Poly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct QuasiPoly {
    pub(crate) prefix: Vec<BigInt>,
    pub(crate) modulus: u64,
    pub(crate) branches: Vec<Poly>,
}

/// Smallest `x >= from` with `x ≡ r (mod m)`.
pub(crate) fn class_start(r: u64, m: u64, from: u64) -> u64 {
    let base = from - from % m + r % m;
    if base >= from {
        base
    } else {
        base + m
    }
}

fn to_u64_bound(b: &BigInt) -> u64 {
    b.to_u64().expect("root bound exceeds u64")
}

pub(crate) struct SignSets {
    pub negative: EpSet,
    pub zero: EpSet,
    pub positive: EpSet,
}

impl QuasiPoly {
    pub(crate) fn from_poly(p: Poly) -> Self {
        QuasiPoly {
            prefix: Vec::new(),
            modulus: 1,
            branches: vec![p],
        }
    }

    pub(crate) fn constant(c: &BigInt) -> Self {
        QuasiPoly::from_poly(Poly::from_bigint(c))
    }

    pub(crate) fn threshold(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub(crate) fn branch(&self, r: u64) -> &Poly {
        &self.branches[(r % self.modulus) as usize]
    }

    pub(crate) fn eval_u64(&self, x: u64) -> BigInt {
        if x < self.threshold() {
            self.prefix[x as usize].clone()
        } else {
            let v = self.branch(x).eval_int(&BigInt::from(x));
            debug_assert!(v.is_integer(), "quasi-polynomial not integer-valued");
            v.to_integer()
        }
    }

    pub(crate) fn eval(&self, x: &BigInt) -> BigInt {
        if let Some(v) = x.to_u64() {
            return self.eval_u64(v);
        }
        let r = x.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap();
        self.branch(r).eval_int(x).to_integer()
    }

    /// Checks that every branch is integer-valued on its class beyond the
    /// threshold: an integer-valued polynomial on an arithmetic progression
    /// is detected by `deg + 1` consecutive progression points.
    pub(crate) fn check_integral(&self) -> Result<()> {
        let t = self.threshold();
        for r in 0..self.modulus {
            let p = self.branch(r);
            let d = p.degree().unwrap_or(0) as u64;
            let x0 = class_start(r, self.modulus, t);
            for j in 0..=d {
                let x = x0 + j * self.modulus;
                if !p.eval_int(&BigInt::from(x)).is_integer() {
                    return Err(Error::NotIntegerValued(format!(
                        "branch {p} at {x} (class {r} mod {})",
                        self.modulus
                    )));
                }
            }
        }
        Ok(())
    }

    /// Minimal modulus, then minimal threshold.
    pub(crate) fn canonical(mut self) -> Self {
        let m = self.modulus;
        let mut d = 1;
        while d < m {
            if m.is_multiple_of(d)
                && (0..m).all(|r| self.branches[r as usize] == self.branches[(r % d) as usize])
            {
                break;
            }
            d += 1;
        }
        if d < m {
            self.branches.truncate(d as usize);
            self.modulus = d;
        }
        while let Some(last) = self.prefix.last() {
            let x = self.prefix.len() as u64 - 1;
            let tail = self.branch(x).eval_int(&BigInt::from(x));
            if tail.is_integer() && tail.to_integer() == *last {
                self.prefix.pop();
            } else {
                break;
            }
        }
        self
    }

    /// Pointwise `f(args_1(x), ..., args_k(x))`.
    pub(crate) fn combine(f: &MultiPoly, args: &[&QuasiPoly]) -> Result<QuasiPoly> {
        assert_eq!(f.arity(), args.len());
        let modulus = args.iter().fold(1, |m, a| lcm(m, a.modulus));
        let threshold = args.iter().map(|a| a.threshold()).max().unwrap_or(0);
        let branches = (0..modulus)
            .map(|r| {
                let polys: Vec<&Poly> = args.iter().map(|a| a.branch(r)).collect();
                f.substitute(&polys)
            })
            .collect();
        let mut prefix = Vec::with_capacity(threshold as usize);
        for x in 0..threshold {
            let vals: Vec<BigInt> = args.iter().map(|a| a.eval_u64(x)).collect();
            let v = f.eval(&vals);
            if !v.is_integer() {
                return Err(Error::NotIntegerValued(format!("value {v} at {x}")));
            }
            prefix.push(v.to_integer());
        }
        let q = QuasiPoly {
            prefix,
            modulus,
            branches,
        };
        q.check_integral()?;
        Ok(q.canonical())
    }

    pub(crate) fn sub(&self, other: &QuasiPoly) -> QuasiPoly {
        let f = MultiPoly::var(2, 0).sub(&MultiPoly::var(2, 1));
        QuasiPoly::combine(&f, &[self, other]).expect("difference of integer maps is integral")
    }

    /// `outer ∘ inner`; `inner` must be natural-valued.
    pub(crate) fn compose(outer: &QuasiPoly, inner: &QuasiPoly) -> QuasiPoly {
        let tg = outer.threshold();
        let mut modulus = inner.modulus;
        let mut threshold = inner.threshold();
        for p in &inner.branches {
            if p.is_constant() {
                continue;
            }
            let den = p.denominator_lcm().to_u64().expect("denominator fits");
            modulus = lcm(modulus, den * outer.modulus);
            // beyond the root bound of p - tg, p exceeds the outer threshold
            let shifted = p - &Poly::from_int(tg as i64);
            threshold = threshold.max(to_u64_bound(&shifted.root_bound()) + 1);
        }
        let branches = (0..modulus)
            .map(|r| {
                let p = inner.branch(r);
                match p.constant_value() {
                    Some(c) => Poly::from_bigint(&outer.eval(&c.to_integer())),
                    None => {
                        let x = class_start(r, modulus, threshold);
                        let v = p.eval_int(&BigInt::from(x)).to_integer();
                        let s = v.mod_floor(&BigInt::from(outer.modulus)).to_u64().unwrap();
                        outer.branch(s).compose(p)
                    }
                }
            })
            .collect();
        let prefix = (0..threshold)
            .map(|x| outer.eval(&inner.eval_u64(x)))
            .collect();
        QuasiPoly {
            prefix,
            modulus,
            branches,
        }
        .canonical()
    }

    /// Threshold beyond which every branch has constant sign on its class.
    fn sign_cutoff(&self) -> u64 {
        self.branches
            .iter()
            .filter(|p| !p.is_constant())
            .map(|p| to_u64_bound(&p.root_bound()) + 1)
            .fold(self.threshold(), u64::max)
    }

    fn tail_sign(p: &Poly) -> Ordering {
        p.leading().cmp(&BigRational::zero())
    }

    pub(crate) fn zero_set(&self) -> EpSet {
        let cutoff = self.sign_cutoff();
        EpSet::from_fn(
            cutoff,
            self.modulus,
            |x| self.eval_u64(x).is_zero(),
            |r| self.branch(r).is_zero(),
        )
    }

    pub(crate) fn sign_sets(&self) -> SignSets {
        let cutoff = self.sign_cutoff();
        let values: Vec<Ordering> = (0..cutoff)
            .map(|x| self.eval_u64(x).cmp(&BigInt::zero()))
            .collect();
        let build = |want: Ordering| {
            EpSet::from_fn(
                cutoff,
                self.modulus,
                |x| values[x as usize] == want,
                |r| QuasiPoly::tail_sign(self.branch(r)) == want,
            )
        };
        SignSets {
            negative: build(Ordering::Less),
            zero: build(Ordering::Equal),
            positive: build(Ordering::Greater),
        }
    }

    /// `{x : self(x) >= c}`.
    pub(crate) fn at_least(&self, c: &BigInt) -> EpSet {
        let shifted = self.sub(&QuasiPoly::constant(c));
        let s = shifted.sign_sets();
        s.zero.union(&s.positive)
    }

    /// `{x : self(x) mod m in wanted}` with the residue taken in `[0, m)`.
    pub(crate) fn residue_set(&self, m: u64, wanted: impl Fn(u64) -> bool) -> EpSet {
        assert!(m > 0);
        let mut modulus = self.modulus;
        for p in &self.branches {
            let den = p.denominator_lcm().to_u64().expect("denominator fits");
            modulus = lcm(modulus, den * m);
        }
        let threshold = self.threshold();
        let big_m = BigInt::from(m);
        let residue = |x: u64| self.eval_u64(x).mod_floor(&big_m).to_u64().unwrap();
        EpSet::from_fn(
            threshold,
            modulus,
            |x| wanted(residue(x)),
            |r| wanted(residue(class_start(r, modulus, threshold))),
        )
    }

    /// Pointwise `max(self, 0)`.
    pub(crate) fn clamp_nonneg(&self) -> QuasiPoly {
        let cutoff = self.sign_cutoff();
        let prefix = (0..cutoff)
            .map(|x| {
                let v = self.eval_u64(x);
                if v.is_negative() {
                    BigInt::zero()
                } else {
                    v
                }
            })
            .collect();
        let branches = self
            .branches
            .iter()
            .map(|p| {
                if QuasiPoly::tail_sign(p) == Ordering::Less {
                    Poly::zero()
                } else {
                    p.clone()
                }
            })
            .collect();
        QuasiPoly {
            prefix,
            modulus: self.modulus,
            branches,
        }
        .canonical()
    }

    pub(crate) fn is_nonneg(&self) -> bool {
        self.sign_sets().negative.is_empty()
    }

    pub(crate) fn identity() -> Self {
        QuasiPoly::from_poly(Poly::var())
    }

    pub(crate) fn scaled_sum(terms: &[(BigInt, &QuasiPoly)]) -> QuasiPoly {
        let k = terms.len();
        let mut f = MultiPoly::zero(k);
        for (i, (c, _)) in terms.iter().enumerate() {
            f = f.add(&MultiPoly::var(k, i).scale(&int_rat(c)));
        }
        let args: Vec<&QuasiPoly> = terms.iter().map(|(_, q)| *q).collect();
        QuasiPoly::combine(&f, &args).expect("integer combination is integral")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> QuasiPoly {
        QuasiPoly::from_poly(Poly::from_int_coeffs(c))
    }

    #[test]
    fn class_start_basics() {
        assert_eq!(class_start(1, 3, 0), 1);
        assert_eq!(class_start(1, 3, 2), 4);
        assert_eq!(class_start(0, 3, 6), 6);
        assert_eq!(class_start(2, 5, 13), 17);
    }

    #[test]
    fn zero_set_of_quadratic() {
        // x^2 - 7x + 10 = (x-2)(x-5)
        let q = poly(&[10, -7, 1]);
        assert_eq!(q.zero_set(), EpSet::finite([2, 5]));
        let s = q.sign_sets();
        assert_eq!(s.negative, EpSet::finite([3, 4]));
        for x in 0..100u64 {
            let v = q.eval_u64(x);
            assert_eq!(s.positive.contains_u64(x), v.is_positive());
        }
    }

    #[test]
    fn residue_set_with_half_coefficients() {
        // x(x+1)/2 mod 2
        let half = BigRational::new(1.into(), 2.into());
        let q = QuasiPoly::from_poly(Poly::from_coeffs(vec![
            BigRational::zero(),
            half.clone(),
            half,
        ]));
        let odd = q.residue_set(2, |r| r == 1);
        for x in 0..200u64 {
            assert_eq!(odd.contains_u64(x), (x * (x + 1) / 2) % 2 == 1, "x={x}");
        }
    }

    #[test]
    fn clamp_truncates() {
        let q = poly(&[5, -1]); // 5 - x
        let c = q.clamp_nonneg();
        for x in 0..20u64 {
            assert_eq!(
                c.eval_u64(x),
                BigInt::from(5i64 - x as i64).max(BigInt::zero())
            );
        }
        assert!(c.is_nonneg());
        assert!(!q.is_nonneg());
    }

    #[test]
    fn compose_matches_pointwise() {
        let outer = QuasiPoly {
            prefix: vec![BigInt::from(7)],
            modulus: 2,
            branches: vec![
                Poly::from_int_coeffs(&[0, 3]),
                Poly::from_int_coeffs(&[1, 0, 1]),
            ],
        };
        let inner = poly(&[1, 1, 1]);
        let c = QuasiPoly::compose(&outer, &inner);
        for x in 0..300u64 {
            assert_eq!(c.eval_u64(x), outer.eval(&inner.eval_u64(x)));
        }
    }
}
