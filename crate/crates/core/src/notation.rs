//! Textual notations for sets and functions.
//!
//! Sets:
//!
//! ```text
//! set  := "empty" | "all" | "evens" | "odds"
//!       | "mult" INT            multiples of INT
//!       | "from" INT            {x : x >= INT}
//!       | "past" INT            {x : x > INT}
//!       | "finite" "{" ints "}" | "cofinite" "{" ints "}"
//!       | "{" ints "}"          a finite set
//!       | "{" ints "mod" INT [ "|" "except" exc ("," exc)* ] "}"
//! exc  := "+" INT | "-" INT     add or remove a point
//! ```
//!
//! Functions are polynomial expressions in `n`, optionally split by residue
//! class and followed by point overrides:
//!
//! ```text
//! func := body [ "|" INT "->" INT ("," INT "->" INT)* ]
//! body := expr | "{" INT "mod" INT "->" expr (";" INT "mod" INT "->" expr)* "}"
//! expr := polynomial in n with + - * · / ^ and parentheses; "3n" and "(1/2)n"
//!         are implicit products; division only by constants
//! ```
//!
//! `Display` on [`EpSet`] and [`EqpFunction`] prints in these notations.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ep::EpSet;
use crate::eqp::EqpFunction;
use crate::error::{Error, Result};
use crate::lexer::{Cursor, Tok};
use crate::poly::Poly;

pub fn parse_set(text: &str) -> Result<EpSet> {
    let mut c = Cursor::new(text)?;
    let s = set(&mut c)?;
    c.expect_end()?;
    Ok(s)
}

fn int_list(c: &mut Cursor) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    if matches!(c.peek(), Some(Tok::Int(_))) {
        out.push(c.expect_u64()?);
        while c.eat_sym(",") {
            out.push(c.expect_u64()?);
        }
    }
    Ok(out)
}

fn braced_ints(c: &mut Cursor) -> Result<Vec<u64>> {
    c.expect_sym("{")?;
    let xs = int_list(c)?;
    c.expect_sym("}")?;
    Ok(xs)
}

pub(crate) fn set(c: &mut Cursor) -> Result<EpSet> {
    if let Some(Tok::Ident(word)) = c.peek().cloned() {
        c.next();
        return match word.as_str() {
            "empty" => Ok(EpSet::empty()),
            "all" => Ok(EpSet::all()),
            "evens" => Ok(EpSet::evens()),
            "odds" => Ok(EpSet::odds()),
            "mult" => Ok(EpSet::multiples(c.expect_u64()?)),
            "from" => Ok(EpSet::from_value(c.expect_u64()?)),
            "past" => Ok(EpSet::from_value(c.expect_u64()? + 1)),
            "finite" => Ok(EpSet::finite(braced_ints(c)?)),
            "cofinite" => Ok(EpSet::cofinite(braced_ints(c)?)),
            other => Err(c.error(format!("unknown set `{other}`"))),
        };
    }
    c.expect_sym("{")?;
    let residues = int_list(c)?;
    if !c.eat_ident("mod") {
        c.expect_sym("}")?;
        return Ok(EpSet::finite(residues));
    }
    let m = c.expect_u64()?;
    if m == 0 {
        return Err(c.error("modulus must be positive"));
    }
    if let Some(r) = residues.iter().find(|&&r| r >= m) {
        return Err(c.error(format!("residue {r} is not below {m}")));
    }
    let mut s = EpSet::periodic(m, residues);
    if c.eat_sym("|") {
        if !c.eat_ident("except") {
            return Err(c.error("expected `except`"));
        }
        loop {
            let add = if c.eat_sym("+") {
                true
            } else if c.eat_sym("-") {
                false
            } else {
                return Err(c.error("expected `+` or `-`"));
            };
            let x = EpSet::singleton(c.expect_u64()?);
            s = if add { s.union(&x) } else { s.difference(&x) };
            if !c.eat_sym(",") {
                break;
            }
        }
    }
    c.expect_sym("}")?;
    Ok(s)
}

impl FromStr for EpSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_set(s)
    }
}

/// Parses a polynomial expression in `n`.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut c = Cursor::new(text)?;
    let p = poly_expr(&mut c)?;
    c.expect_end()?;
    Ok(p)
}

pub(crate) fn poly_expr(c: &mut Cursor) -> Result<Poly> {
    let mut acc = if c.eat_sym("-") {
        -&poly_term(c)?
    } else {
        poly_term(c)?
    };
    loop {
        if c.eat_sym("+") {
            acc = &acc + &poly_term(c)?;
        } else if c.eat_sym("-") {
            acc = &acc - &poly_term(c)?;
        } else {
            return Ok(acc);
        }
    }
}

fn poly_term(c: &mut Cursor) -> Result<Poly> {
    let mut acc = poly_power(c)?;
    loop {
        if c.eat_sym("*") || c.eat_sym("·") {
            acc = &acc * &poly_power(c)?;
        } else if c.is_sym("/") {
            let off = c.offset();
            c.next();
            let d = poly_power(c)?;
            match d.constant_value() {
                Some(v) if !v.is_zero() => {
                    acc = acc.scale(&(BigRational::from_integer(1.into()) / v))
                }
                _ => return Err(Error::parse(off, "division only by nonzero constants")),
            }
        } else if c.is_ident("n") || c.is_ident("id") || c.is_sym("(") {
            acc = &acc * &poly_power(c)?;
        } else {
            return Ok(acc);
        }
    }
}

fn poly_power(c: &mut Cursor) -> Result<Poly> {
    let base = poly_atom(c)?;
    if c.eat_sym("^") {
        let e = c.expect_u64()?;
        let e = u32::try_from(e).map_err(|_| c.error("exponent too large"))?;
        return Ok(base.pow(e));
    }
    Ok(base)
}

fn poly_atom(c: &mut Cursor) -> Result<Poly> {
    match c.peek().cloned() {
        Some(Tok::Int(v)) => {
            c.next();
            Ok(Poly::from_bigint(&v))
        }
        Some(Tok::Ident(w)) if w == "n" || w == "id" => {
            c.next();
            Ok(Poly::var())
        }
        Some(Tok::Sym("(")) => {
            c.next();
            let p = poly_expr(c)?;
            c.expect_sym(")")?;
            Ok(p)
        }
        Some(Tok::Sym("-")) => {
            c.next();
            Ok(-&poly_atom(c)?)
        }
        _ => Err(c.error("expected a number, `n` or `(`")),
    }
}

/// Parses a function literal (see the module docs).
pub fn parse_function(text: &str) -> Result<EqpFunction> {
    let mut c = Cursor::new(text)?;
    let (modulus, branches) = if c.is_sym("{") {
        c.next();
        let mut cases: BTreeMap<u64, Poly> = BTreeMap::new();
        let mut modulus = None;
        loop {
            let off = c.offset();
            let r = c.expect_u64()?;
            if !c.eat_ident("mod") {
                return Err(c.error("expected `mod`"));
            }
            let m = c.expect_u64()?;
            c.expect_sym("->")?;
            let p = poly_expr(&mut c)?;
            if *modulus.get_or_insert(m) != m {
                return Err(Error::parse(off, "all cases must use the same modulus"));
            }
            if m == 0 || r >= m {
                return Err(Error::parse(off, format!("bad residue class {r} mod {m}")));
            }
            if cases.insert(r, p).is_some() {
                return Err(Error::parse(off, format!("class {r} given twice")));
            }
            if !c.eat_sym(";") {
                break;
            }
        }
        c.expect_sym("}")?;
        let m = modulus.unwrap();
        if cases.len() as u64 != m {
            return Err(c.error(format!("expected {m} cases, one per residue class")));
        }
        (m, cases.into_values().collect::<Vec<_>>())
    } else {
        (1, vec![poly_expr(&mut c)?])
    };
    let mut overrides: BTreeMap<u64, BigInt> = BTreeMap::new();
    if c.eat_sym("|") {
        loop {
            let x = c.expect_u64()?;
            c.expect_sym("->")?;
            let v = c.expect_int()?;
            overrides.insert(x, v);
            if !c.eat_sym(",") {
                break;
            }
        }
    }
    c.expect_end()?;
    let threshold = overrides.keys().next_back().map_or(0, |&x| x + 1);
    let mut prefix = Vec::with_capacity(threshold as usize);
    for x in 0..threshold {
        let v = match overrides.get(&x) {
            Some(v) => v.clone(),
            None => {
                let b = branches[(x % modulus) as usize].eval_int(&BigInt::from(x));
                if !b.is_integer() {
                    return Err(Error::NotIntegerValued(format!("value {b} at {x}")));
                }
                b.to_integer()
            }
        };
        prefix.push(v);
    }
    EqpFunction::new(prefix, modulus, branches)
}

impl FromStr for EqpFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_function(s)
    }
}
