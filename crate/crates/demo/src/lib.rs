//! Browser bindings. Each entry point takes plain strings or numbers and
//! returns a JSON string, so the page needs no glue beyond `JSON.parse`.

use causal_ground::checkers::{check_determination, check_invariance};
use causal_ground::domino::{build_bounded_model, chain_family, ChainOptions, Scenario};
use causal_ground::scm::{encode_scm, random_scm, verify_scm_laws};
use causal_ground::ActionWord;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest chain the page may ask for.
pub const MAX_CHAIN: usize = 5;

/// Run a scenario file's contents under `word` (comma separated, rightmost first).
pub fn simulate_json(scenario: &str, word: &str) -> Result<Value, String> {
    let sc: Scenario = serde_json::from_str(scenario).map_err(|e| e.to_string())?;
    let (world, state, outcome) = sc.run(&ActionWord::parse(word)).map_err(|e| e.to_string())?;
    let statuses: serde_json::Map<String, Value> = world
        .census
        .iter()
        .zip(&outcome.0)
        .map(|(id, s)| (id.clone(), Value::String(s.to_string())))
        .collect();
    Ok(json!({
        "grid": [world.grid.width, world.grid.height],
        "state": world.state_label(&state),
        "outcome": statuses,
    }))
}

/// Adjacency mechanisms `d(i+1) <- d(i)` of an `n`-chain pushed east from
/// `d1`, with the generators that break each one.
pub fn chain_mechanisms_json(n: usize) -> Result<Value, String> {
    if !(2..=MAX_CHAIN).contains(&n) {
        return Err(format!("chain length must be 2 to {MAX_CHAIN}"));
    }
    let params = chain_family(n, &ChainOptions::default()).map_err(|e| e.to_string())?;
    let m = build_bounded_model(&params).map_err(|e| e.to_string())?.abstract_model;
    let ctx = ActionWord::new(["choose-push-d1-E", "init-chain"]);
    let mut out = Vec::new();
    for i in 1..n {
        let (pi, pj) = (format!("d{i}"), format!("d{}", i + 1));
        let vi = m.var_set(&[&pi]).map_err(|e| e.to_string())?;
        let vj = m.var_set(&[&pj]).map_err(|e| e.to_string())?;
        let d = check_determination(&m, &ctx, &vi, &vj).map_err(|e| e.to_string())?;
        let Some(f) = d.witness else {
            out.push(json!({ "target": pj, "parent": pi, "holds": false }));
            continue;
        };
        let mut broken_by = Vec::new();
        for g in m.generator_labels() {
            let r = check_invariance(&m, &ctx, &f, &vi, &vj, &ActionWord::single(g))
                .map_err(|e| e.to_string())?;
            if let Some(v) = r.counterexample {
                broken_by.push(json!({
                    "action": g,
                    "state": v.reached,
                    "observed": [v.observed_i, v.observed_j],
                    "predicted": v.predicted_j,
                }));
            }
        }
        let map: serde_json::Map<String, Value> = f
            .entries()
            .map(|(a, b)| (a.to_string(), Value::String(b.to_string())))
            .collect();
        out.push(json!({
            "target": pj,
            "parent": pi,
            "holds": true,
            "map": map,
            "generators": m.generators().len(),
            "broken_by": broken_by,
        }));
    }
    Ok(json!({ "states": m.states().len(), "mechanisms": out }))
}

/// Encode a seeded random SCM and check the five laws.
pub fn scm_laws_json(seed: u64, n_endo: usize) -> Result<Value, String> {
    if !(1..=4).contains(&n_endo) {
        return Err("between 1 and 4 endogenous variables".into());
    }
    let scm = random_scm(seed, n_endo, 2, 2).map_err(|e| e.to_string())?;
    let m = encode_scm(&scm).map_err(|e| e.to_string())?;
    let r = verify_scm_laws(&m, &scm).map_err(|e| e.to_string())?;
    let parents: serde_json::Map<String, Value> = scm
        .endogenous()
        .iter()
        .map(|v| {
            let ps: Vec<&str> = v.parents.iter().map(|&p| scm.endogenous()[p].id.as_str()).collect();
            (v.id.clone(), json!(ps))
        })
        .collect();
    Ok(json!({
        "seed": seed,
        "parents": parents,
        "states": m.states().len(),
        "generators": m.generators().len(),
        "checked": r.checked,
        "holds": r.holds(),
        "violations": r.violations,
    }))
}

fn finish(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(scenario: &str, word: &str) -> Result<String, JsError> {
    finish(simulate_json(scenario, word))
}

#[wasm_bindgen(js_name = chainMechanisms)]
pub fn chain_mechanisms(n: usize) -> Result<String, JsError> {
    finish(chain_mechanisms_json(n))
}

#[wasm_bindgen(js_name = scmLaws)]
pub fn scm_laws(seed: u32, n_endo: usize) -> Result<String, JsError> {
    finish(scm_laws_json(seed as u64, n_endo))
}
