//! Seeded generators for sets, functions, points and formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::ep::EpSet;
use crate::eqp::EqpFunction;
use crate::extension::formula::{Formula, RelOp, Signature, Term};
use crate::extension::HyperNat;
use crate::poly::{rat, Poly};

fn random_branch<R: Rng>(rng: &mut R) -> Poly {
    match rng.gen_range(0..6) {
        0 => Poly::from_int(rng.gen_range(0..12)),
        1 | 2 => Poly::from_int_coeffs(&[rng.gen_range(0..10), rng.gen_range(1..5)]),
        3 | 4 => Poly::from_int_coeffs(&[
            rng.gen_range(0..10),
            rng.gen_range(0..4),
            rng.gen_range(1..3),
        ]),
        // k·n(n+1)/2 + c
        _ => {
            let k = rng.gen_range(1..3);
            let half = BigRational::new(BigInt::from(k), BigInt::from(2));
            Poly::from_coeffs(vec![rat(rng.gen_range(0..6)), half.clone(), half])
        }
    }
}

pub fn random_function<R: Rng>(rng: &mut R) -> EqpFunction {
    let modulus = [1u64, 1, 1, 2, 2, 3][rng.gen_range(0..6)];
    let branches = (0..modulus).map(|_| random_branch(rng)).collect();
    let prefix_len = [0usize, 0, 0, 1, 2, 3][rng.gen_range(0..6)];
    let prefix = (0..prefix_len)
        .map(|_| BigInt::from(rng.gen_range(0..20)))
        .collect();
    EqpFunction::new(prefix, modulus, branches).expect("generated branches are natural-valued")
}

/// A random point, nonstandard with high probability.
pub fn random_point<R: Rng>(rng: &mut R) -> HyperNat {
    if rng.gen_ratio(1, 10) {
        return HyperNat::standard(rng.gen_range(0..20));
    }
    HyperNat::new(random_function(rng))
}

pub fn random_set<R: Rng>(rng: &mut R) -> EpSet {
    let threshold = rng.gen_range(0..10);
    let modulus = rng.gen_range(1..13);
    let prefix: Vec<u64> = (0..threshold).filter(|_| rng.gen_bool(0.5)).collect();
    let residues: Vec<u64> = (0..modulus).filter(|_| rng.gen_bool(0.5)).collect();
    EpSet::new(threshold, prefix, modulus, residues).expect("valid parts")
}

/// A random set with the given bounds on prefix length and modulus.
pub fn random_set_bounded<R: Rng>(rng: &mut R, max_threshold: u64, max_modulus: u64) -> EpSet {
    let threshold = rng.gen_range(0..=max_threshold);
    let modulus = rng.gen_range(1..=max_modulus);
    let prefix: Vec<u64> = (0..threshold).filter(|_| rng.gen_bool(0.5)).collect();
    let residues: Vec<u64> = (0..modulus).filter(|_| rng.gen_bool(0.5)).collect();
    EpSet::new(threshold, prefix, modulus, residues).expect("valid parts")
}

/// A signature with functions `f`, `g` and sets `A`, `B`.
pub fn random_signature<R: Rng>(rng: &mut R) -> Signature {
    Signature::default()
        .with_function("f", random_function(rng))
        .with_function("g", random_function(rng))
        .with_set("A", random_set(rng))
        .with_set("B", random_set(rng))
}

fn random_term<R: Rng>(rng: &mut R, sig: &Signature, depth: u32) -> Term {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return if rng.gen_bool(0.7) {
            Term::Var("x".into())
        } else {
            Term::Const(BigInt::from(rng.gen_range(0..6)))
        };
    }
    let sub = |rng: &mut R| Box::new(random_term(rng, sig, depth - 1));
    match rng.gen_range(0..5) {
        0 => {
            let names: Vec<&String> = sig.functions.keys().collect();
            let name = names[rng.gen_range(0..names.len())].clone();
            Term::Apply(name, sub(rng))
        }
        1 => Term::Add(sub(rng), sub(rng)),
        2 => Term::Sub(sub(rng), sub(rng)),
        3 => Term::Mul(sub(rng), sub(rng)),
        _ => Term::Pow(sub(rng), rng.gen_range(2..4)),
    }
}

fn random_atom<R: Rng>(rng: &mut R, sig: &Signature) -> Formula {
    if rng.gen_ratio(1, 3) {
        let names: Vec<&String> = sig.sets.keys().collect();
        let name = names[rng.gen_range(0..names.len())].clone();
        let set = sig.sets[&name].clone();
        return Formula::In(random_term(rng, sig, 2), name, set);
    }
    let op = [
        RelOp::Eq,
        RelOp::Ne,
        RelOp::Le,
        RelOp::Lt,
        RelOp::Ge,
        RelOp::Gt,
    ][rng.gen_range(0..6)];
    Formula::Rel(op, random_term(rng, sig, 2), random_term(rng, sig, 2))
}

/// A quantifier-free formula in the variable `x`.
pub fn random_formula<R: Rng>(rng: &mut R, sig: &Signature, depth: u32) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return random_atom(rng, sig);
    }
    let sub = |rng: &mut R| Box::new(random_formula(rng, sig, depth - 1));
    match rng.gen_range(0..4) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::And(sub(rng), sub(rng)),
        2 => Formula::Or(sub(rng), sub(rng)),
        _ => Formula::Implies(sub(rng), sub(rng)),
    }
}
