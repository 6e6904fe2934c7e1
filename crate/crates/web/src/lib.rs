//! Browser bindings: solve a game, draw a random tree game, scan a family's nim values.
//!
//! Every export returns a JSON string. The `*_json` functions hold the logic and are
//! usable natively; the `#[wasm_bindgen]` wrappers only convert errors.

use dng_core::audit::{spectrum_scan, Discrepancy, Family, Solver, WinFilter};
use dng_core::closed_forms::{nim_extreme_formula, signature_tree, tree_formula, FormulaError};
use dng_core::game::{nim_game, Outcome};
use dng_core::geometry::BackendKind;
use dng_core::instance::Instance;
use dng_core::structure::{emit_dot, nim_quotient, solve_types, IntersectionLattice, StructureDiagram};
use dng_core::GameSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const MAX_RANDOM_TREE: usize = 14;
pub const MAX_SPECTRUM_N: usize = 8;
const SPECTRUM_BUDGET: u128 = 1 << 26;

#[wasm_bindgen]
pub fn analyze(instance: &str) -> Result<String, JsError> {
    analyze_json(instance).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random_tree(n: usize, seed: u32) -> Result<String, JsError> {
    random_tree_json(n, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(family: &str, max_n: usize) -> Result<String, JsError> {
    spectrum_json(family, max_n).map_err(|e| JsError::new(&e))
}

pub fn analyze_json(text: &str) -> Result<String, String> {
    let inst = Instance::parse(text).map_err(|e| e.to_string())?;
    let spec = inst.build().map_err(|e| e.to_string())?;
    let brute = nim_game(&spec).map_err(|e| e.to_string())?;
    let quotient = nim_quotient(&spec);
    let formula = formula_json(&spec, brute);
    let diagram = match IntersectionLattice::for_game(&spec).and_then(|l| solve_types(&l, &spec)) {
        Ok(d) => diagram_json(&d, &spec),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let out = json!({
        "instance": serde_json::from_str::<Value>(&inst.to_json()).expect("canonical JSON parses"),
        "brute": brute,
        "quotient": quotient,
        "outcome": match Outcome::from_nim(brute) {
            Outcome::N => "N",
            Outcome::P => "P",
        },
        "formula": formula,
        "diagram": diagram,
    });
    Ok(out.to_string())
}

fn formula_json(spec: &GameSpec, oracle: u32) -> Value {
    let tree = matches!(spec.geometry().kind(), BackendKind::TreeVertex | BackendKind::TreeEdge);
    let verdict = if tree { tree_formula(spec) } else { nim_extreme_formula(spec) };
    let signature = if tree {
        signature_tree(spec).ok().map(|(s, _)| s.to_string())
    } else {
        None
    };
    match verdict {
        Ok(v) => {
            let mut out = json!({
                "status": "ok",
                "case_id": v.case_id,
                "nim": v.predicted,
                "signature": signature,
            });
            if v.predicted != oracle {
                let class = Discrepancy::classify(out["case_id"].as_str().unwrap_or(""), Some(v.predicted), oracle);
                out["erratum"] = json!({ "class": class.name(), "note": class.describe() });
            }
            out
        }
        Err(FormulaError::TableGap { case_id, sig }) => {
            json!({ "status": "table_gap", "case_id": case_id, "signature": sig.to_string() })
        }
        Err(e) => json!({ "status": "not_applicable", "detail": e.to_string() }),
    }
}

/// Longest path from the Frattini class, used as a drawing layer.
fn layers(d: &StructureDiagram) -> Vec<usize> {
    let mut layer = vec![0usize; d.classes().len()];
    for _ in 0..layer.len() {
        for &(a, b) in d.edges() {
            if layer[b] < layer[a] + 1 {
                layer[b] = layer[a] + 1;
            }
        }
    }
    layer
}

fn diagram_json(d: &StructureDiagram, spec: &GameSpec) -> Value {
    let ground = spec.geometry().ground();
    let layer = layers(d);
    let classes: Vec<Value> = d
        .classes()
        .iter()
        .zip(d.types())
        .enumerate()
        .map(|(i, (&c, t))| {
            json!({
                "label": ground.format(c),
                "pty": t.pty,
                "nim0": t.nim0,
                "nim1": t.nim1,
                "terminal": d.is_terminal(i),
                "layer": layer[i],
            })
        })
        .collect();
    json!({
        "classes": classes,
        "edges": d.edges(),
        "frattini": d.frattini_index(),
        "dot": emit_dot(d, ground),
    })
}

/// A uniformly seeded random recursive tree on `1..=n` with a random nonempty winning set.
pub fn random_tree_json(n: usize, seed: u64) -> Result<String, String> {
    if !(1..=MAX_RANDOM_TREE).contains(&n) {
        return Err(format!("n must be between 1 and {MAX_RANDOM_TREE}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<[usize; 2]> = (2..=n).map(|v| [rng.gen_range(1..v), v]).collect();
    let mut winning: Vec<usize> = Vec::new();
    while winning.is_empty() {
        winning = (1..=n).filter(|_| rng.gen_bool(0.3)).collect();
    }
    let out = json!({
        "kind": "tree_vertex",
        "ground": (1..=n).collect::<Vec<_>>(),
        "data": { "edges": edges },
        "winning": winning,
    });
    Ok(out.to_string())
}

pub fn spectrum_json(family: &str, max_n: usize) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e: dng_core::audit::AuditError| e.to_string())?;
    if max_n > MAX_SPECTRUM_N {
        return Err(format!("max_n must be at most {MAX_SPECTRUM_N} in the browser"));
    }
    let s = spectrum_scan(family, max_n, Solver::Quotient, WinFilter::All, SPECTRUM_BUDGET).map_err(|e| e.to_string())?;
    serde_json::to_string(&s).map_err(|e| e.to_string())
}
