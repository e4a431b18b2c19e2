//! Exact polynomials with rational coefficients.
//!
//! [`Poly`] is univariate (the variable is printed as `n`), [`MultiPoly`] is
//! the k-ary version used to combine several functions pointwise.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Univariate polynomial, coefficients stored low degree first with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(rat(c))
    }

    pub fn from_bigint(c: &BigInt) -> Self {
        Poly::constant(int_rat(c))
    }

    /// The identity polynomial `n`.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `a*n + b`.
    pub fn affine(a: BigRational, b: BigRational) -> Self {
        Poly::from_coeffs(vec![b, a])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        // Horner over a common denominator keeps this on integers.
        let den = self.denominator_lcm();
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            let scaled = (c * int_rat(&den)).to_integer();
            acc = acc * x + scaled;
        }
        BigRational::new(acc, den)
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Least common multiple of the coefficient denominators (1 for zero).
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// An integer `B >= 0` such that every complex root has modulus at most
    /// `B` (Fujiwara's bound, rounded up). Beyond `B` the polynomial has the
    /// sign of its leading coefficient.
    pub fn root_bound(&self) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        let lead = self.leading().abs();
        let mut best = BigInt::zero();
        for i in 1..=d {
            let q = self.coeffs[d - i].abs() / &lead;
            if q.is_zero() {
                continue;
            }
            let c = q.ceil().to_integer();
            let mut r = c.nth_root(i as u32);
            if r.pow(i as u32) < c {
                r += 1;
            }
            if r > best {
                best = r;
            }
        }
        best * 2
    }

    /// Formats with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = if mag.is_integer() {
                if mag.is_one() && i > 0 {
                    String::new()
                } else {
                    mag.to_integer().to_string()
                }
            } else {
                format!("({}/{})", mag.numer(), mag.denom())
            };
            out.push_str(&coef);
            out.push_str(&mono);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("n"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Polynomial in `arity` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut exps = vec![0; arity];
        exps[i] = 1;
        let mut p = MultiPoly::zero(arity);
        p.terms.insert(exps, BigRational::one());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Cantor's pairing `(a+b)(a+b+1)/2 + b`.
    pub fn cantor_pairing() -> Self {
        let a = MultiPoly::var(2, 0);
        let b = MultiPoly::var(2, 1);
        let s = a.add(&b);
        let t = s.mul(&s.add(&MultiPoly::constant(2, BigRational::one())));
        t.scale(&BigRational::new(1.into(), 2.into())).add(&b)
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = out.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        out.retain(|_, c| !c.is_zero());
        MultiPoly {
            arity: self.arity,
            terms: out,
        }
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&rat(-1))
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: &BigRational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.arity);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = out.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        MultiPoly {
            arity: self.arity,
            terms: out,
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.arity, BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, args: &[BigInt]) -> BigRational {
        assert_eq!(args.len(), self.arity);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in args.iter().zip(e) {
                if k > 0 {
                    v *= int_rat(&x.pow(k));
                }
            }
            acc += v;
        }
        acc
    }

    /// Substitutes a univariate polynomial for each variable.
    pub fn substitute(&self, args: &[&Poly]) -> Poly {
        assert_eq!(args.len(), self.arity);
        let mut acc = Poly::zero();
        let mut pow_cache: Vec<Vec<Poly>> = vec![vec![Poly::one()]; self.arity];
        for (e, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                let cache = &mut pow_cache[i];
                while cache.len() <= k as usize {
                    let next = &cache[cache.len() - 1] * args[i];
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            acc = &acc + &term;
        }
        acc
    }
}
