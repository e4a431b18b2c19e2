//! Residue oracles: coherent systems `m ↦ r_m` describing a profinite integer.
//!
//! A lazy oracle fixes residues one prime power at a time, on demand, and
//! answers composite moduli by the Chinese remainder theorem. Every choice is
//! drawn from a seeded generator and appended to a commitment log, so a run is
//! reproducible from its seed and query order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::poly::Poly;

/// Number of fresh primes tried before avoidance gives up on a polynomial.
pub const DEFAULT_RETRY_BOUND: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Commitment {
    pub prime_power: u64,
    pub residue: u64,
}

/// Factorization of `m` into `(p, e)` pairs.
pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// Prime powers `q` with `2 <= q <= bound`, ascending.
pub fn prime_powers_up_to(bound: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (2..=bound).filter(|&q| factorize(q).len() == 1).collect();
    out.sort_unstable();
    out
}

/// Combines `x ≡ r_i (mod m_i)` for pairwise coprime moduli.
fn crt(parts: &[(u64, u64)]) -> u64 {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for &(r, q) in parts {
        let q = BigInt::from(q);
        let g = m.extended_gcd(&q);
        // x + m·k ≡ r (mod q)
        let k = ((BigInt::from(r) - &x) * g.x).mod_floor(&q);
        x += &m * k;
        m *= q;
    }
    x.mod_floor(&m).to_u64().expect("residue fits in u64")
}

#[derive(Debug)]
struct LazyState {
    seed: u64,
    avoid: bool,
    retry_bound: usize,
    rng: ChaCha8Rng,
    /// prime ↦ (exponent committed, residue mod p^exponent)
    levels: BTreeMap<u64, (u32, u64)>,
    log: Vec<Commitment>,
}

impl LazyState {
    fn commit_level(&mut self, p: u64, e: u32) -> u64 {
        let (mut k, mut r) = self.levels.get(&p).copied().unwrap_or((0, 0));
        while k < e {
            let digit = self.rng.gen_range(0..p);
            r += digit * p.pow(k);
            k += 1;
            self.log.push(Commitment {
                prime_power: p.pow(k),
                residue: r,
            });
        }
        self.levels.insert(p, (k, r));
        r % p.pow(e)
    }

    fn residue(&mut self, m: u64) -> u64 {
        assert!(m > 0, "modulus must be positive");
        let parts: Vec<(u64, u64)> = factorize(m)
            .into_iter()
            .map(|(p, e)| (self.commit_level(p, e), p.pow(e)))
            .collect();
        crt(&parts)
    }
}

/// A seeded, lazily committed profinite integer. Clones share state.
#[derive(Clone, Debug)]
pub struct LazyOracle(Arc<Mutex<LazyState>>);

impl LazyOracle {
    pub fn new(seed: u64, avoid: bool) -> Self {
        LazyOracle(Arc::new(Mutex::new(LazyState {
            seed,
            avoid,
            retry_bound: DEFAULT_RETRY_BOUND,
            rng: ChaCha8Rng::seed_from_u64(seed),
            levels: BTreeMap::new(),
            log: Vec::new(),
        })))
    }

    pub fn with_retry_bound(self, bound: usize) -> Self {
        self.lock().retry_bound = bound;
        self
    }

    fn lock(&self) -> MutexGuard<'_, LazyState> {
        self.0.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn seed(&self) -> u64 {
        self.lock().seed
    }

    pub fn avoidance(&self) -> bool {
        self.lock().avoid
    }

    pub fn same_state(&self, other: &LazyOracle) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn residue(&self, m: u64) -> u64 {
        self.lock().residue(m)
    }

    pub fn log(&self) -> Vec<Commitment> {
        self.lock().log.clone()
    }

    /// Commits a residue at a fresh prime `q` with `h(r_q) ≢ 0 (mod q)`.
    ///
    /// Returns the prime used, or `None` if `h` vanishes identically modulo
    /// every prime tried.
    pub fn avoid_root(&self, h: &Poly) -> Option<u64> {
        if h.is_zero() {
            return None;
        }
        let den = h.denominator_lcm();
        let scaled: Vec<BigInt> = h
            .scale(&den.clone().into())
            .coeffs()
            .iter()
            .map(|c| c.to_integer())
            .collect();
        let mut st = self.lock();
        let degree = h.degree().unwrap_or(0) as u64;
        let floor = st
            .levels
            .keys()
            .next_back()
            .copied()
            .unwrap_or(1)
            .max(degree);
        let mut q = floor + 1;
        for _ in 0..st.retry_bound {
            while !is_prime(q) || (&den % q).is_zero() {
                q += 1;
            }
            let big_q = BigInt::from(q);
            let non_roots: Vec<u64> = (0..q)
                .filter(|&t| {
                    let t = BigInt::from(t);
                    let v = scaled
                        .iter()
                        .rev()
                        .fold(BigInt::zero(), |acc, c| (acc * &t + c).mod_floor(&big_q));
                    !v.is_zero()
                })
                .collect();
            if !non_roots.is_empty() {
                let t = non_roots[st.rng.gen_range(0..non_roots.len())];
                st.levels.insert(q, (1, t));
                st.log.push(Commitment {
                    prime_power: q,
                    residue: t,
                });
                return Some(q);
            }
            q += 1;
        }
        None
    }
}

/// A coherent residue system, possibly transformed by a polynomial.
#[derive(Clone, Debug)]
pub enum ResidueOracle {
    /// `r_m = c mod m`.
    IntegerLike(BigInt),
    /// `r_m = P(ξ) mod m` for the lazily committed `ξ`.
    Lazy { base: LazyOracle, poly: Poly },
}

impl ResidueOracle {
    pub fn integer(c: impl Into<BigInt>) -> Self {
        ResidueOracle::IntegerLike(c.into())
    }

    pub fn lazy(seed: u64, avoid: bool) -> Self {
        ResidueOracle::Lazy {
            base: LazyOracle::new(seed, avoid),
            poly: Poly::var(),
        }
    }

    pub fn residue(&self, m: u64) -> u64 {
        match self {
            ResidueOracle::IntegerLike(c) => c.mod_floor(&BigInt::from(m)).to_u64().unwrap(),
            ResidueOracle::Lazy { base, poly } => {
                if *poly == Poly::var() {
                    return base.residue(m);
                }
                // D·P has integer coefficients and D | D·P(ξ)
                let den = poly.denominator_lcm();
                let dm = &den * BigInt::from(m);
                let t = base.residue(dm.to_u64().expect("modulus fits in u64"));
                let v = poly.scale(&den.clone().into()).eval_int(&BigInt::from(t));
                (v.to_integer().mod_floor(&dm) / den).to_u64().unwrap()
            }
        }
    }

    /// The oracle of `P(ξ)`, for `P` integer-valued on the class of `ξ`.
    pub fn apply(&self, p: &Poly) -> ResidueOracle {
        match self {
            ResidueOracle::IntegerLike(c) => ResidueOracle::IntegerLike(p.eval_int(c).to_integer()),
            ResidueOracle::Lazy { base, poly } => ResidueOracle::Lazy {
                base: base.clone(),
                poly: p.compose(poly),
            },
        }
    }

    pub fn lazy_base(&self) -> Option<&LazyOracle> {
        match self {
            ResidueOracle::Lazy { base, .. } => Some(base),
            ResidueOracle::IntegerLike(_) => None,
        }
    }

    pub fn log(&self) -> Vec<Commitment> {
        self.lazy_base().map(LazyOracle::log).unwrap_or_default()
    }
}

impl fmt::Display for ResidueOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueOracle::IntegerLike(c) => write!(f, "int:{c}"),
            ResidueOracle::Lazy { base, poly } => {
                let st = base.lock();
                let avoid = if st.avoid { "on" } else { "off" };
                if *poly == Poly::var() {
                    write!(f, "lazy:seed={}:avoid={avoid}", st.seed)
                } else {
                    write!(f, "lazy:seed={}:avoid={avoid}@({poly})", st.seed)
                }
            }
        }
    }
}
