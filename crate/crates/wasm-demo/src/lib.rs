//! Browser bindings. Every entry point takes plain strings and numbers and
//! returns a JSON document; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use starlab::{
    search_extensions, Axiom, AxiomSet, Context, EpSet, EqpFunction, FiniteStone, HyperNat,
    UltrafilterHandle,
};
use wasm_bindgen::prelude::*;

type Outcome = Result<Value, String>;

fn finish(r: Outcome) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn oracle(text: &str) -> Result<UltrafilterHandle, String> {
    text.parse().map_err(|e| format!("oracle: {e}"))
}

fn function(label: &str, text: &str) -> Result<EqpFunction, String> {
    text.parse().map_err(|e| format!("{label}: {e}"))
}

fn sets(text: &str) -> Result<Vec<EpSet>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| format!("set `{s}`: {e}")))
        .collect()
}

/// Compares the points `[xi]` and `[eta]` under the oracle: separating set
/// or indiscernibility certificate, condition (H), and the first values of
/// both sequences for plotting.
#[wasm_bindgen]
pub fn explore_pair(oracle_text: &str, xi: &str, eta: &str, horizon: u32, plot_len: u32) -> String {
    finish((|| {
        let ctx = Context::new(oracle(oracle_text)?).with_horizon(horizon as u64);
        let (f, g) = (function("xi", xi)?, function("eta", eta)?);
        let report = ctx.monad_compare(&HyperNat::new(f.clone()), &HyperNat::new(g.clone()));
        let values = |h: &EqpFunction| -> Vec<String> {
            (0..plot_len as u64)
                .map(|n| h.eval_u64(n).to_string())
                .collect()
        };
        let equalizer = f.equalizer(&g);
        Ok(json!({
            "report": report,
            "equalizerMembers": (0..plot_len as u64).map(|n| equalizer.contains_u64(n)).collect::<Vec<_>>(),
            "xiValues": values(&f),
            "etaValues": values(&g),
            "commitmentLog": ctx.ambient.log(),
        }))
    })())
}

/// Atoms of the algebra generated by `;`-separated sets, the atom of each
/// `n < strip_len`, and the atom holding the oracle.
#[wasm_bindgen]
pub fn stone_atoms(generators: &str, oracle_text: &str, strip_len: u32) -> String {
    finish((|| {
        let gens = sets(generators)?;
        if gens.is_empty() {
            return Err("give at least one generator".into());
        }
        let u = oracle(oracle_text)?;
        let s = FiniteStone::new(&gens);
        Ok(json!({
            "atoms": s.atoms,
            "signs": s.signs,
            "strip": (0..strip_len as u64).map(|n| s.atom_of(n)).collect::<Vec<_>>(),
            "oracleAtom": s.trace(&u),
        }))
    })())
}

/// Satisfiability matrix for star maps on `{0..k} ∪ {ξ1..ξe}`.
#[wasm_bindgen]
pub fn finite_search(k: u32, e: u32, require: &str, budget: u32) -> String {
    finish((|| {
        let axioms = require
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<Axiom>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let m = search_extensions(k as usize, e as usize, AxiomSet::new(axioms), budget as u64)
            .map_err(|e| e.to_string())?;
        serde_json::to_value(m).map_err(|e| e.to_string())
    })())
}
