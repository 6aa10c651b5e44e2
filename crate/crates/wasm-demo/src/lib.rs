//! Browser demo over the scalar corner of `ncprob`.
//!
//! Every export takes plain strings, returns JSON text and reports errors as
//! a string. The functions in [`api`] are the same calls without the
//! bindings, so native tests exercise exactly what the page runs.

use wasm_bindgen::prelude::*;

pub mod api;

/// NC(n) with Kreweras complements and μ(π, 1ₙ).
#[wasm_bindgen]
pub fn nc_lattice(n: usize) -> Result<String, String> {
    api::nc_lattice(n).map(|v| v.to_string())
}

/// `direction` is "m2c" or "c2m"; `values` lists the first n terms.
#[wasm_bindgen]
pub fn transfer(direction: &str, values: &str) -> Result<String, String> {
    api::transfer(direction, values).map(|v| v.to_string())
}

/// Free additive ("add") or multiplicative ("mul") convolution of two
/// distributions given by moments or cumulants (`input`).
#[wasm_bindgen]
pub fn free_convolution(op: &str, input: &str, left: &str, right: &str) -> Result<String, String> {
    api::free_convolution(op, input, left, right).map(|v| v.to_string())
}

/// Distribution of pxp in the corner of a free projection with φ(p) = α.
#[wasm_bindgen]
pub fn free_compression(input: &str, values: &str, alpha: &str) -> Result<String, String> {
    api::free_compression(input, values, alpha).map(|v| v.to_string())
}
