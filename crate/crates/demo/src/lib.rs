//! Browser bindings.
//!
//! Each export takes and returns JSON text. The plain functions do the work
//! and are what the native tests call; the `#[wasm_bindgen]` wrappers only
//! turn their errors into JS exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use bcfw::boundaries::pair_boundaries;
use bcfw::chords::{diagram_to_oplus, diagram_to_walks, enumerate, to_permutation};
use bcfw::domino::sample_cell;
use bcfw::separation::separator;
use bcfw::ChordDiagram;

fn diagram(s: &str) -> Result<ChordDiagram, String> {
    ChordDiagram::parse(s).map_err(|e| e.to_string())
}

/// All diagrams with `k` chords on `n` markers, as a JSON array.
pub fn cells(n: usize, k: usize) -> Result<String, String> {
    if n < k + 4 {
        return Err(format!("k = {k} needs n >= {}", k + 4));
    }
    let v: Vec<Value> = enumerate(n, k).iter().map(|d| json!({"text": d.to_text(), "diagram": d.to_json()})).collect();
    Ok(Value::Array(v).to_string())
}

/// Every encoding of one diagram, plus a sample matrix of its cell.
pub fn describe(input: &str, seed: u64) -> Result<String, String> {
    let d = diagram(input)?;
    let p = to_permutation(&d);
    let w = diagram_to_walks(&d);
    let o = diagram_to_oplus(&d);
    Ok(json!({
        "text": d.to_text(),
        "permutation": {"domain": p.domain(), "images": p.images(), "cycles": p.cycle_string()},
        "walks": {"a_vertical": w.a_vertical, "b_vertical": w.b_vertical, "a_horizontal": w.a_horizontal()},
        "oplus": {"row_labels": o.row_labels, "column_labels": o.column_labels, "rows": o.row_strings()},
        "matrix": sample_cell(&d, seed).to_json(),
    })
    .to_string())
}

pub fn separate_pair(a: &str, b: &str) -> Result<String, String> {
    let s = separator(&diagram(a)?, &diagram(b)?).map_err(|e| e.to_string())?;
    Ok(s.to_json().to_string())
}

pub fn boundary_table(input: &str) -> Result<String, String> {
    let bs = pair_boundaries(&diagram(input)?).map_err(|e| e.to_string())?;
    Ok(Value::Array(bs.iter().map(|b| b.to_json()).collect()).to_string())
}

#[wasm_bindgen(js_name = cells)]
pub fn cells_js(n: usize, k: usize) -> Result<String, JsError> {
    cells(n, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = describe)]
pub fn describe_js(input: &str, seed: u64) -> Result<String, JsError> {
    describe(input, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = separate)]
pub fn separate_js(a: &str, b: &str) -> Result<String, JsError> {
    separate_pair(a, b).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = boundaries)]
pub fn boundaries_js(input: &str) -> Result<String, JsError> {
    boundary_table(input).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn cells_counts() {
        assert_eq!(parse(&cells(8, 2).unwrap()).as_array().unwrap().len(), 20);
        assert!(cells(5, 2).is_err());
    }

    #[test]
    fn describe_three_chords() {
        let v = parse(&describe("n=14; 1-11, 3-6, 8-10", 0).unwrap());
        assert_eq!(v["permutation"]["images"], json!([2, 11, 4, 6, 5, 7, 1, 9, 10, 12, 3, 14, 13, 8]));
        assert_eq!(v["oplus"]["rows"][0], "+O++OOOOOO+");
        assert_eq!(v["walks"]["a_horizontal"], json!([1, 5, 1, 0]));
        assert!(describe("n=6; 1-9", 0).is_err());
    }

    #[test]
    fn separate_and_boundaries() {
        let s = parse(&separate_pair("n=7; 1-3", "n=7; 2-4").unwrap());
        assert_eq!(s["sign_a"].as_i64().unwrap() * s["sign_b"].as_i64().unwrap(), -1);
        let b = parse(&boundary_table("n=7; 1-3, 3-5").unwrap());
        assert!(!b.as_array().unwrap().is_empty());
    }
}
