//! Quantifier-free formulas over the naturals and their transfer to `*N`.
//!
//! ```text
//! formula := disj [ "->" formula ]
//! disj    := conj { ("|" | "or") conj }
//! conj    := unary { ("&" | "and") unary }
//! unary   := ("!" | "not") unary | "(" formula ")" | "true" | "false" | atom
//! atom    := term ("=" | "!=" | "<=" | "<" | ">=" | ">") term
//!          | term "in" SET               SET is a declared name or set notation
//! term    := prod { ("+" | "-") prod }   "-" is truncated subtraction
//! prod    := power { ("*" | "·") power | power }
//! power   := base [ "^" INT ]
//! base    := INT | VAR | FUNC "(" term ")" | "(" term ")"
//! ```
//!
//! A formula is evaluated three ways: on standard naturals, at points of the
//! extension, and through its truth set, an eventually periodic set computed
//! by structural recursion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{Context, HyperNat};
use crate::ep::EpSet;
use crate::eqp::EqpFunction;
use crate::error::{Error, Result};
use crate::lexer::{Cursor, Tok};
use crate::notation;
use crate::poly::MultiPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    Var(String),
    Const(BigInt),
    Apply(String, Box<Term>),
    Add(Box<Term>, Box<Term>),
    /// Truncated subtraction.
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelOp {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

impl RelOp {
    fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
            RelOp::Le => "<=",
            RelOp::Lt => "<",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
        }
    }

    fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            RelOp::Eq => ord == Equal,
            RelOp::Ne => ord != Equal,
            RelOp::Le => ord != Greater,
            RelOp::Lt => ord == Less,
            RelOp::Ge => ord != Less,
            RelOp::Gt => ord == Greater,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    True,
    False,
    Rel(RelOp, Term, Term),
    /// Membership; the label is the declared name or the set's notation.
    In(Term, String, EpSet),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// Function and set symbols available to formulas.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub functions: BTreeMap<String, EqpFunction>,
    pub sets: BTreeMap<String, EpSet>,
}

impl Signature {
    pub fn with_function(mut self, name: &str, f: EqpFunction) -> Self {
        self.functions.insert(name.to_string(), f);
        self
    }

    pub fn with_set(mut self, name: &str, a: EpSet) -> Self {
        self.sets.insert(name.to_string(), a);
        self
    }

    fn function(&self, name: &str) -> Result<&EqpFunction> {
        self.functions
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

const KEYWORDS: &[&str] = &["in", "and", "or", "not", "true", "false"];

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut c = Cursor::new(text)?;
    let p = Parser { sig };
    let f = p.formula(&mut c)?;
    c.expect_end()?;
    Ok(f)
}

struct Parser<'a> {
    sig: &'a Signature,
}

impl Parser<'_> {
    fn formula(&self, c: &mut Cursor) -> Result<Formula> {
        let lhs = self.disj(c)?;
        if c.eat_sym("->") {
            let rhs = self.formula(c)?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&self, c: &mut Cursor) -> Result<Formula> {
        let mut acc = self.conj(c)?;
        while c.eat_sym("|") || c.eat_ident("or") {
            acc = Formula::Or(Box::new(acc), Box::new(self.conj(c)?));
        }
        Ok(acc)
    }

    fn conj(&self, c: &mut Cursor) -> Result<Formula> {
        let mut acc = self.unary(c)?;
        while c.eat_sym("&") || c.eat_ident("and") {
            acc = Formula::And(Box::new(acc), Box::new(self.unary(c)?));
        }
        Ok(acc)
    }

    fn unary(&self, c: &mut Cursor) -> Result<Formula> {
        if c.eat_sym("!") || c.eat_ident("not") {
            return Ok(Formula::Not(Box::new(self.unary(c)?)));
        }
        if c.eat_ident("true") {
            return Ok(Formula::True);
        }
        if c.eat_ident("false") {
            return Ok(Formula::False);
        }
        if c.is_sym("(") {
            let mark = c.mark();
            c.next();
            if let Ok(f) = self.formula(c) {
                if c.eat_sym(")") && Self::at_connective(c) {
                    return Ok(f);
                }
            }
            c.reset(mark);
        }
        self.atom(c)
    }

    fn at_connective(c: &Cursor) -> bool {
        c.at_end()
            || [")", "&", "|", "->"].iter().any(|s| c.is_sym(s))
            || c.is_ident("and")
            || c.is_ident("or")
    }

    fn atom(&self, c: &mut Cursor) -> Result<Formula> {
        let lhs = self.term(c)?;
        if c.eat_ident("in") {
            if let Some(Tok::Ident(name)) = c.peek().cloned() {
                if let Some(a) = self.sig.sets.get(&name) {
                    c.next();
                    return Ok(Formula::In(lhs, name, a.clone()));
                }
            }
            let a = notation::set(c)?;
            return Ok(Formula::In(lhs, a.to_string(), a));
        }
        let op = [
            ("=", RelOp::Eq),
            ("!=", RelOp::Ne),
            ("<=", RelOp::Le),
            ("<", RelOp::Lt),
            (">=", RelOp::Ge),
            (">", RelOp::Gt),
        ]
        .into_iter()
        .find(|(s, _)| c.eat_sym(s))
        .map(|(_, op)| op)
        .ok_or_else(|| c.error("expected a comparison or `in`"))?;
        let rhs = self.term(c)?;
        Ok(Formula::Rel(op, lhs, rhs))
    }

    fn term(&self, c: &mut Cursor) -> Result<Term> {
        let mut acc = self.prod(c)?;
        loop {
            if c.eat_sym("+") {
                acc = Term::Add(Box::new(acc), Box::new(self.prod(c)?));
            } else if c.eat_sym("-") {
                acc = Term::Sub(Box::new(acc), Box::new(self.prod(c)?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn prod(&self, c: &mut Cursor) -> Result<Term> {
        let mut acc = self.power(c)?;
        loop {
            let implicit = c.is_sym("(")
                || matches!(c.peek(), Some(Tok::Ident(w)) if !KEYWORDS.contains(&w.as_str()));
            if c.eat_sym("*") || c.eat_sym("·") || implicit {
                acc = Term::Mul(Box::new(acc), Box::new(self.power(c)?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&self, c: &mut Cursor) -> Result<Term> {
        let base = self.base(c)?;
        if c.eat_sym("^") {
            let e = c.expect_u64()?;
            let e = u32::try_from(e).map_err(|_| c.error("exponent too large"))?;
            return Ok(Term::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&self, c: &mut Cursor) -> Result<Term> {
        match c.peek().cloned() {
            Some(Tok::Int(v)) => {
                c.next();
                Ok(Term::Const(v))
            }
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                c.next();
                if c.eat_sym("(") {
                    self.sig.function(&name)?;
                    let arg = self.term(c)?;
                    c.expect_sym(")")?;
                    return Ok(Term::Apply(name, Box::new(arg)));
                }
                Ok(Term::Var(name))
            }
            Some(Tok::Sym("(")) => {
                c.next();
                let t = self.term(c)?;
                c.expect_sym(")")?;
                Ok(t)
            }
            _ => Err(c.error("expected a term")),
        }
    }
}

impl Term {
    fn is_compound(&self) -> bool {
        !matches!(self, Term::Var(_) | Term::Const(_) | Term::Apply(..))
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Apply(_, t) | Term::Pow(t, _) => t.collect_vars(out),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// The term as a function of `var`.
    pub fn as_function(&self, var: Option<&str>, sig: &Signature) -> Result<EqpFunction> {
        let bin = |a: &Term, b: &Term, f: MultiPoly| -> Result<EqpFunction> {
            let (fa, fb) = (a.as_function(var, sig)?, b.as_function(var, sig)?);
            EqpFunction::poly_combine(&f, &[&fa, &fb])
        };
        match self {
            Term::Var(v) if Some(v.as_str()) == var => Ok(EqpFunction::identity()),
            Term::Var(v) => Err(Error::UnboundVariable(v.clone())),
            Term::Const(k) => EqpFunction::constant_big(k),
            Term::Apply(f, t) => Ok(sig.function(f)?.compose(&t.as_function(var, sig)?)),
            Term::Add(a, b) => bin(a, b, MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1))),
            Term::Mul(a, b) => bin(a, b, MultiPoly::var(2, 0).mul(&MultiPoly::var(2, 1))),
            Term::Sub(a, b) => Ok(a.as_function(var, sig)?.monus(&b.as_function(var, sig)?)),
            Term::Pow(t, e) => EqpFunction::poly_combine(
                &MultiPoly::var(1, 0).pow(*e),
                &[&t.as_function(var, sig)?],
            ),
        }
    }

    pub fn eval_standard(&self, env: &BTreeMap<String, BigInt>, sig: &Signature) -> Result<BigInt> {
        Ok(match self {
            Term::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            Term::Const(k) => k.clone(),
            Term::Apply(f, t) => sig.function(f)?.eval(&t.eval_standard(env, sig)?),
            Term::Add(a, b) => a.eval_standard(env, sig)? + b.eval_standard(env, sig)?,
            Term::Mul(a, b) => a.eval_standard(env, sig)? * b.eval_standard(env, sig)?,
            Term::Sub(a, b) => {
                let d = a.eval_standard(env, sig)? - b.eval_standard(env, sig)?;
                if d.is_negative() {
                    BigInt::zero()
                } else {
                    d
                }
            }
            Term::Pow(t, e) => num_traits::pow(t.eval_standard(env, sig)?, *e as usize),
        })
    }

    pub fn eval_star(
        &self,
        env: &BTreeMap<String, HyperNat>,
        ctx: &Context,
        sig: &Signature,
    ) -> Result<HyperNat> {
        let pair = |a: &Term, b: &Term, f: MultiPoly| -> Result<HyperNat> {
            let (pa, pb) = (a.eval_star(env, ctx, sig)?, b.eval_star(env, ctx, sig)?);
            ctx.star_apply_k(&f, &[&pa, &pb])
        };
        match self {
            Term::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::Const(k) => Ok(HyperNat::new(EqpFunction::constant_big(k)?)),
            Term::Apply(f, t) => Ok(ctx.star_apply(sig.function(f)?, &t.eval_star(env, ctx, sig)?)),
            Term::Add(a, b) => pair(a, b, MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1))),
            Term::Mul(a, b) => pair(a, b, MultiPoly::var(2, 0).mul(&MultiPoly::var(2, 1))),
            Term::Sub(a, b) => {
                Ok(ctx.star_monus(&a.eval_star(env, ctx, sig)?, &b.eval_star(env, ctx, sig)?))
            }
            Term::Pow(t, e) => ctx.star_apply_k(
                &MultiPoly::var(1, 0).pow(*e),
                &[&t.eval_star(env, ctx, sig)?],
            ),
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::In(t, ..) => t.collect_vars(out),
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// The single free variable, if any.
    pub fn variable(&self) -> Result<Option<String>> {
        let vars = self.free_vars();
        if vars.len() > 1 {
            return Err(Error::TooManyVariables(vars.len()));
        }
        Ok(vars.into_iter().next())
    }

    /// `{x : φ(x)}`.
    pub fn truth_set(&self, sig: &Signature) -> Result<EpSet> {
        let var = self.variable()?;
        self.truth_set_in(var.as_deref(), sig)
    }

    fn truth_set_in(&self, var: Option<&str>, sig: &Signature) -> Result<EpSet> {
        Ok(match self {
            Formula::True => EpSet::all(),
            Formula::False => EpSet::empty(),
            Formula::Rel(op, a, b) => {
                let cmp = a.as_function(var, sig)?.compare(&b.as_function(var, sig)?);
                let (lt, eq, gt) = (cmp.less, cmp.equal, cmp.greater);
                match op {
                    RelOp::Eq => eq,
                    RelOp::Ne => lt.union(&gt),
                    RelOp::Le => lt.union(&eq),
                    RelOp::Lt => lt,
                    RelOp::Ge => gt.union(&eq),
                    RelOp::Gt => gt,
                }
            }
            Formula::In(t, _, a) => t.as_function(var, sig)?.preimage(a),
            Formula::Not(f) => f.truth_set_in(var, sig)?.complement(),
            Formula::And(a, b) => a
                .truth_set_in(var, sig)?
                .intersection(&b.truth_set_in(var, sig)?),
            Formula::Or(a, b) => a.truth_set_in(var, sig)?.union(&b.truth_set_in(var, sig)?),
            Formula::Implies(a, b) => a
                .truth_set_in(var, sig)?
                .complement()
                .union(&b.truth_set_in(var, sig)?),
        })
    }

    pub fn eval_standard(&self, env: &BTreeMap<String, BigInt>, sig: &Signature) -> Result<bool> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(op, a, b) => {
                op.holds(a.eval_standard(env, sig)?.cmp(&b.eval_standard(env, sig)?))
            }
            Formula::In(t, _, a) => a.contains(&t.eval_standard(env, sig)?),
            Formula::Not(f) => !f.eval_standard(env, sig)?,
            Formula::And(a, b) => a.eval_standard(env, sig)? & b.eval_standard(env, sig)?,
            Formula::Or(a, b) => a.eval_standard(env, sig)? | b.eval_standard(env, sig)?,
            Formula::Implies(a, b) => !a.eval_standard(env, sig)? | b.eval_standard(env, sig)?,
        })
    }

    pub fn eval_star(
        &self,
        env: &BTreeMap<String, HyperNat>,
        ctx: &Context,
        sig: &Signature,
    ) -> Result<bool> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(op, a, b) => {
                let (pa, pb) = (a.eval_star(env, ctx, sig)?, b.eval_star(env, ctx, sig)?);
                let le = ctx.hyper_less_eq(&pa, &pb);
                let ge = ctx.hyper_less_eq(&pb, &pa);
                let ord = match (le, ge) {
                    (true, true) => std::cmp::Ordering::Equal,
                    (true, false) => std::cmp::Ordering::Less,
                    _ => std::cmp::Ordering::Greater,
                };
                op.holds(ord)
            }
            Formula::In(t, _, a) => ctx.star_member(&t.eval_star(env, ctx, sig)?, a),
            Formula::Not(f) => !f.eval_star(env, ctx, sig)?,
            Formula::And(a, b) => a.eval_star(env, ctx, sig)? & b.eval_star(env, ctx, sig)?,
            Formula::Or(a, b) => a.eval_star(env, ctx, sig)? | b.eval_star(env, ctx, sig)?,
            Formula::Implies(a, b) => !a.eval_star(env, ctx, sig)? | b.eval_star(env, ctx, sig)?,
        })
    }

    fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..)
        )
    }
}

struct Wrapped<'a, T>(&'a T, bool);

impl<T: fmt::Display> fmt::Display for Wrapped<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn w(t: &Term) -> Wrapped<'_, Term> {
            Wrapped(t, t.is_compound())
        }
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(k) => write!(f, "{k}"),
            Term::Apply(g, t) => write!(f, "{g}({t})"),
            Term::Add(a, b) => write!(f, "{} + {}", w(a), w(b)),
            Term::Sub(a, b) => write!(f, "{} - {}", w(a), w(b)),
            Term::Mul(a, b) => write!(f, "{} * {}", w(a), w(b)),
            Term::Pow(t, e) => write!(f, "{}^{e}", w(t)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn w(g: &Formula) -> Wrapped<'_, Formula> {
            Wrapped(g, g.is_binary())
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Rel(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
            Formula::In(t, label, _) => write!(f, "{t} in {label}"),
            Formula::Not(g) => {
                let paren = g.is_binary() || matches!(**g, Formula::Rel(..) | Formula::In(..));
                write!(f, "!{}", Wrapped(&**g, paren))
            }
            Formula::And(a, b) => write!(f, "{} & {}", w(a), w(b)),
            Formula::Or(a, b) => write!(f, "{} | {}", w(a), w(b)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", w(a), w(b)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointCheck {
    pub point: HyperNat,
    pub star_value: bool,
    pub via_truth_set: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UniversalClosure {
    /// The standard side: the truth set is all of N.
    pub holds: bool,
    pub holds_at_points: bool,
    /// Least standard point falsifying the formula.
    pub counterexample: Option<u64>,
    pub counterexample_fails_standard: bool,
    pub counterexample_fails_star: bool,
    pub agrees: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    pub formula: String,
    pub variable: Option<String>,
    pub truth_set: EpSet,
    pub points: Vec<PointCheck>,
    /// Standard evaluation agrees with the truth set on `0..window`.
    pub window: u64,
    pub window_agrees: bool,
    pub los_agrees: bool,
    pub universal: UniversalClosure,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.los_agrees && self.window_agrees && self.universal.agrees
    }
}

/// Checks Łoś's theorem for `φ` at each point and the transfer of its
/// universal closure.
pub fn transfer_check(
    phi: &Formula,
    sig: &Signature,
    ctx: &Context,
    points: &[HyperNat],
) -> Result<TransferReport> {
    let variable = phi.variable()?;
    let truth_set = phi.truth_set(sig)?;
    let var = variable.clone().unwrap_or_else(|| "x".to_string());

    let star_at = |p: &HyperNat| -> Result<bool> {
        let env = BTreeMap::from([(var.clone(), p.clone())]);
        phi.eval_star(&env, ctx, sig)
    };
    let std_at = |k: u64| -> Result<bool> {
        let env = BTreeMap::from([(var.clone(), BigInt::from(k))]);
        phi.eval_standard(&env, sig)
    };

    let mut checks = Vec::with_capacity(points.len());
    for p in points {
        checks.push(PointCheck {
            point: p.clone(),
            star_value: star_at(p)?,
            via_truth_set: ctx.star_member(p, &truth_set),
        });
    }
    let los_agrees = checks.iter().all(|c| c.star_value == c.via_truth_set);

    let window = truth_set.threshold() + 2 * truth_set.modulus() + 8;
    let mut window_agrees = true;
    for k in 0..window {
        if std_at(k)? != truth_set.contains_u64(k) {
            window_agrees = false;
        }
    }

    let holds = truth_set.is_all();
    let holds_at_points = checks.iter().all(|c| c.star_value);
    let counterexample = truth_set.complement().min_element();
    let (mut fails_std, mut fails_star) = (false, false);
    if let Some(k) = counterexample {
        fails_std = !std_at(k)?;
        fails_star = !star_at(&HyperNat::standard(k))?;
    }
    let agrees = if holds {
        holds_at_points
    } else {
        fails_std && fails_star
    };
    Ok(TransferReport {
        formula: phi.to_string(),
        variable,
        truth_set,
        points: checks,
        window,
        window_agrees,
        los_agrees,
        universal: UniversalClosure {
            holds,
            holds_at_points,
            counterexample,
            counterexample_fails_standard: fails_std,
            counterexample_fails_star: fails_star,
            agrees,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::ultrafilter::UltrafilterHandle;

    fn ctx0() -> Context {
        Context::new(UltrafilterHandle::integer_like(0))
    }

    fn sig() -> Signature {
        Signature::default()
            .with_function(
                "f",
                EqpFunction::polynomial(Poly::from_int_coeffs(&[1, 2])).unwrap(),
            )
            .with_set("A", EpSet::multiples(3))
    }

    #[test]
    fn truth_set_examples() {
        let s = sig();
        assert!(parse_formula("x*0 = 0", &s)
            .unwrap()
            .truth_set(&s)
            .unwrap()
            .is_all());
        assert_eq!(
            parse_formula("x^2 = x", &s).unwrap().truth_set(&s).unwrap(),
            EpSet::finite([0, 1])
        );
        assert!(parse_formula("x in evens or x in odds", &s)
            .unwrap()
            .truth_set(&s)
            .unwrap()
            .is_all());
        assert_eq!(
            parse_formula("f(x) in A & x - 3 < 4", &s)
                .unwrap()
                .truth_set(&s)
                .unwrap(),
            EpSet::finite([1, 4])
        );
    }

    #[test]
    fn transfer_examples() {
        let s = sig();
        let ctx = ctx0();
        let pts = [HyperNat::diagonal(), HyperNat::standard(3)];
        let r = transfer_check(&parse_formula("x*0 = 0", &s).unwrap(), &s, &ctx, &pts).unwrap();
        assert!(r.passed() && r.universal.holds && r.universal.holds_at_points);

        let r = transfer_check(&parse_formula("x^2 = x", &s).unwrap(), &s, &ctx, &pts).unwrap();
        assert!(r.passed());
        assert!(!r.points[0].star_value);
        assert_eq!(r.universal.counterexample, Some(2));
    }

    #[test]
    fn parse_errors() {
        let s = sig();
        assert!(matches!(
            parse_formula("g(x) = 1", &s),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_formula("x = ", &s),
            Err(Error::Parse { .. })
        ));
        let two = parse_formula("x = y", &s).unwrap();
        assert_eq!(two.truth_set(&s), Err(Error::TooManyVariables(2)));
        let env = BTreeMap::new();
        assert!(matches!(
            parse_formula("x = 1", &s).unwrap().eval_standard(&env, &s),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        let s = sig();
        let a = parse_formula("(x + 1) * 2 = 2x + 2", &s).unwrap();
        assert!(a.truth_set(&s).unwrap().is_all());
        let b = parse_formula("(x = 1 | x = 2) -> x < 3", &s).unwrap();
        assert!(b.truth_set(&s).unwrap().is_all());
        let c = parse_formula("!(x in evens) & not x in A", &s).unwrap();
        assert_eq!(c.to_string(), "!(x in {0 mod 2}) & !(x in A)");
        assert_eq!(parse_formula(&c.to_string(), &s).unwrap(), c);
    }
}
