//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string so the page needs no generated types.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use bireg_core::analysis::{family_stats, is_hamiltonian, is_hypohamiltonian, petersen_family};
use bireg_core::bounds::{self, ProblemSpec};
use bireg_core::codec::encode_graph6;
use bireg_core::generator::{generate_with, GeneratorOptions};
use bireg_core::Graph;

/// Largest order the page may ask the generator for.
pub const DEMO_MAX_ORDER: usize = 26;

fn edges(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().map(|e| [e.lo(), e.hi()]).collect()
}

fn graph_json(g: &Graph, m: usize) -> Value {
    json!({
        "order": g.order(),
        "graph6": encode_graph6(g).unwrap_or_default(),
        "edges": edges(g),
        "high": (0..g.order()).filter(|&v| g.degree(v) == m).collect::<Vec<_>>(),
    })
}

pub fn bounds_value(r: usize, m: usize, g: usize, n: Option<u64>) -> Result<Value, String> {
    let spec = ProblemSpec::new(r, m, g).map_err(|e| e.to_string())?;
    let n = n.unwrap_or_else(|| bounds::bireg_moore_bound(r, m, g));
    let rep = bounds::report(&spec, n);
    Ok(json!({
        "moore": rep.moore,
        "biregMoore": rep.bireg_moore,
        "n": n,
        "distBounds": rep.dist_bounds.iter().map(|(d, b)| json!({"dmin": d, "bound": b})).collect::<Vec<_>>(),
        "minDistDegM": rep.min_dist_threshold.to_string(),
        "maxPlacement": rep.max_placement.map(|p| p.counts().to_vec()),
        "placements": rep.placements,
    }))
}

pub fn generate_value(r: usize, m: usize, g: usize, n: usize, keep: usize) -> Result<Value, String> {
    let spec = ProblemSpec::new(r, m, g).map_err(|e| e.to_string())?;
    if n > DEMO_MAX_ORDER {
        return Err(format!("the demo stops at order {DEMO_MAX_ORDER}"));
    }
    let mut graphs = Vec::new();
    let mut count = 0usize;
    let mut all = Vec::new();
    let stats = generate_with(&spec, n, &GeneratorOptions::default(), &mut |h| {
        count += 1;
        if graphs.len() < keep {
            graphs.push(graph_json(&h, m));
        }
        all.push(h);
    })
    .map_err(|e| e.to_string())?;
    let family = family_stats(&all, r, m).map_err(|e| e.to_string())?;
    Ok(json!({
        "count": count,
        "nodes": stats.nodes,
        "dmin": family.dmin.to_string(),
        "vmMin": family.vm_min,
        "vmMax": family.vm_max,
        "graphs": graphs,
    }))
}

pub fn family_value(m: usize) -> Result<Value, String> {
    let g = petersen_family(m).map_err(|e| e.to_string())?;
    let ham = is_hamiltonian(&g).map_err(|e| e.to_string())?;
    let hypo = is_hypohamiltonian(&g).map_err(|e| e.to_string())?;
    let mut v = graph_json(&g, m);
    v["girth"] = json!(g.girth().to_string());
    v["hamiltonian"] = json!(ham);
    v["hypohamiltonian"] = json!(hypo);
    Ok(v)
}

fn finish(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Lower bounds for `(r,m,g)`; `n = 0` means the bi-regular Moore bound.
#[wasm_bindgen]
pub fn bounds_report(r: usize, m: usize, g: usize, n: u32) -> Result<String, JsError> {
    finish(bounds_value(r, m, g, (n > 0).then_some(n as u64)))
}

/// Runs the generator and returns the count plus up to `keep` graphs.
#[wasm_bindgen]
pub fn generate_small(r: usize, m: usize, g: usize, n: usize, keep: usize) -> Result<String, JsError> {
    finish(generate_value(r, m, g, n, keep))
}

#[wasm_bindgen]
pub fn gp_family(m: usize) -> Result<String, JsError> {
    finish(family_value(m))
}
