//! Browser bindings: entropy brackets, the pentagon-plus-vertex explorer and
//! small guessing codes. Every export returns a JSON string.

use graph_entropy::bounds::{entropy_bracket, BracketOptions};
use graph_entropy::families::pentagon_plus_vertex;
use graph_entropy::format::parse_graph_auto;
use graph_entropy::guessing::max_guessing;
use graph_entropy::verify::wheel_value;
use graph_entropy::VertexSet;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Browser tab budget for the Shannon LP.
pub const WEB_SHANNON_CAP: usize = 8;
/// Largest `q^n` the guessing search will touch.
pub const WEB_WORD_CAP: u64 = 4096;

fn opts() -> BracketOptions {
    BracketOptions { shannon_cap: WEB_SHANNON_CAP, always_shannon: false }
}

pub fn bracket_json(input: &str) -> Result<Value, String> {
    let g = parse_graph_auto(input.trim()).map_err(|e| e.to_string())?;
    let b = entropy_bracket(&g, &opts()).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": g.n(),
        "directed": g.is_directed(),
        "bracket": b,
    }))
}

/// `mask` bit `i` joins the extra vertex to pentagon vertex `i`.
pub fn wheel_json(mask: u32) -> Result<Value, String> {
    if mask >= 32 {
        return Err(format!("mask {mask} is not a subset of the five pentagon vertices"));
    }
    let nbhd = VertexSet(mask as u64);
    let b = entropy_bracket(&pentagon_plus_vertex(nbhd), &opts()).map_err(|e| e.to_string())?;
    Ok(json!({
        "neighborhood": nbhd,
        "expected": wheel_value(nbhd),
        "bracket": b,
    }))
}

pub fn guess_json(input: &str, q: u32) -> Result<Value, String> {
    let g = parse_graph_auto(input.trim()).map_err(|e| e.to_string())?;
    let (value, code) = max_guessing(&g, q, WEB_WORD_CAP).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": g.n(),
        "value": value,
        "code": code.word_strings(),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bracket(input: &str) -> Result<String, JsValue> {
    to_js(bracket_json(input))
}

#[wasm_bindgen]
pub fn wheel(mask: u32) -> Result<String, JsValue> {
    to_js(wheel_json(mask))
}

#[wasm_bindgen]
pub fn guess(input: &str, q: u32) -> Result<String, JsValue> {
    to_js(guess_json(input, q))
}
