//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers or digit strings and returns a JSON string, so
//! the page needs no generated TypeScript types. The logic lives in ordinary Rust
//! functions (`*_doc`) that the native test suite exercises directly; the
//! `#[wasm_bindgen]` wrappers only convert errors into JS exceptions.

use std::collections::BTreeMap;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use regsub_core::census::CensusReport;
use regsub_core::permrep::{t_perm, Axis};
use regsub_core::{conj, Context, IdealBasis, RingElem};

/// Largest prime the page accepts; beyond it the p³-point permutations and
/// per-(p, k) enumerations are too slow for an interactive page.
pub const MAX_DEMO_P: u32 = 7;

/// Enumeration cap for the page: large configurations report "skipped" instead of freezing the tab.
pub const DEMO_ENUM_CAP: u64 = 200_000;

fn context(p: u32) -> Result<Context, String> {
    Context::with_max(p, MAX_DEMO_P).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Census and orbit report for one (p, k), in the same schema the CLI emits.
pub fn census_doc(p: u32, k: u32) -> Result<CensusReport, String> {
    let ctx = context(p)?;
    conj::full_report(ctx, k, DEMO_ENUM_CAP).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub in_ik: bool,
    pub in_ak: bool,
    pub in_bk: bool,
}

#[derive(Debug, Serialize)]
pub struct Staircase {
    pub p: u32,
    pub k: u32,
    pub dim_ik: usize,
    pub dim_ak: usize,
    pub dim_bk: usize,
    /// Row-major over (i, j): membership of the monomial a^i b^j.
    pub cells: Vec<Cell>,
}

/// Which monomials a^i b^j lie in I_k and in the kernels of multiplication by a and by b.
pub fn staircase_doc(p: u32, k: u32) -> Result<Staircase, String> {
    let ctx = context(p)?;
    regsub_core::census::check_k_range(ctx, k).map_err(|e| e.to_string())?;
    let ik = IdealBasis::ideal_ik(ctx, k);
    let ak = ik.mult_kernel(&RingElem::a(ctx));
    let bk = ik.mult_kernel(&RingElem::b(ctx));
    let (a, b) = (RingElem::a(ctx), RingElem::b(ctx));
    let n = ctx.n();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let m = &a.pow(i as u32) * &b.pow(j as u32);
            cells.push(Cell {
                i,
                j,
                in_ik: ik.contains(&m),
                in_ak: ak.contains(&m),
                in_bk: bk.contains(&m),
            });
        }
    }
    Ok(Staircase {
        p,
        k,
        dim_ik: ik.dim(),
        dim_ak: ak.dim(),
        dim_bk: bk.dim(),
        cells,
    })
}

#[derive(Debug, Serialize)]
pub struct PermInfo {
    pub p: u32,
    pub g: String,
    pub axis: &'static str,
    pub order: u64,
    /// Cycle length → number of cycles.
    pub cycle_type: BTreeMap<usize, usize>,
    pub order_is_p: bool,
}

/// Order and cycle type of t_{g,x} (or t_{g,y}) for a base-p digit string g.
pub fn t_perm_doc(p: u32, g_digits: &str, along_y: bool) -> Result<PermInfo, String> {
    let ctx = context(p)?;
    let g = RingElem::from_digits(ctx, g_digits.trim()).map_err(|e| e.to_string())?;
    let axis = if along_y { Axis::Y } else { Axis::X };
    let t = t_perm(&g, axis);
    let mut cycle_type = BTreeMap::new();
    for len in t.cycle_lengths() {
        *cycle_type.entry(len).or_insert(0) += 1;
    }
    let order = t.order();
    Ok(PermInfo {
        p,
        g: g.to_digits(),
        axis: if along_y { "y" } else { "x" },
        order,
        cycle_type,
        order_is_p: order == u64::from(p),
    })
}

#[wasm_bindgen]
pub fn census(p: u32, k: u32) -> Result<String, JsError> {
    census_doc(p, k).and_then(|r| to_json(&r)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn staircase(p: u32, k: u32) -> Result<String, JsError> {
    staircase_doc(p, k).and_then(|r| to_json(&r)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn t_perm_info(p: u32, g_digits: &str, along_y: bool) -> Result<String, JsError> {
    t_perm_doc(p, g_digits, along_y).and_then(|r| to_json(&r)).map_err(|e| JsError::new(&e))
}
