//! Fundamental class: normalization of `U_0`, the cocycle condition for the
//! `d = 1` class, its `Br` table against the series oracle and the golden
//! file, and the trace/`Â` pipeline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chains::WeylAlgebra;
use crate::fundamental::*;
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::harness::HarnessError;
use crate::scalars::{parse_rational, series_expand, Rational, SeriesName, TULaurent};
use crate::weyl::WeylShape;

/// Golden `Br(U)` table at `M = 4`.
pub const GOLDEN_M4: &str = include_str!("../../../golden/fundamental_M4.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub m: u32,
    pub c1_power: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub order: u32,
    pub entries: Vec<GoldenEntry>,
}

pub fn table_to_json(order: u32, t: &BTreeMap<(u32, u32), Rational>) -> GoldenTable {
    GoldenTable {
        order,
        entries: t.iter().map(|(&(m, c1_power), q)| GoldenEntry { m, c1_power, coeff: q.to_string() }).collect(),
    }
}

/// Parse a golden file into an exact table.
pub fn golden_table(text: &str) -> Result<(u32, BTreeMap<(u32, u32), Rational>), HarnessError> {
    let g: GoldenTable = serde_json::from_str(text).map_err(|e| HarnessError::Golden(e.to_string()))?;
    let mut out = BTreeMap::new();
    for e in g.entries {
        let q = parse_rational(&e.coeff).map_err(|e| HarnessError::Golden(e.to_string()))?;
        out.insert((e.m, e.c1_power), q);
    }
    Ok((g.order, out))
}

/// Truncation that keeps every product in `u_d1(M)` unclipped.
pub fn cap_for(order: u32) -> usize {
    2 * order as usize + 2
}

fn br_u0(d: usize) -> Check {
    let name = format!("fundamental.br_u0[d={d}]");
    let sh = WeylShape::new(d, 2 * d + 2, fundamental_window(2));
    let u = u0(sh);
    match br_generator(&WeylAlgebra::new(sh), &u) {
        Some((n, c)) => {
            let ok = n == d && c == TULaurent::one(sh.window);
            Check::from_bool(name, ok, json!({"generator": n, "coeff": c.to_string()}))
        }
        None => Check::fail(name, json!("Br(U0) is not a single generator")),
    }
}

fn cocycle(order: u32) -> Check {
    let name = format!("fundamental.cocycle_to_order[M={order}]");
    let cap = cap_for(order);
    let r = cocycle_residual(order, cap);
    let clipped = r.parts.values().any(|c| c.is_clipped());
    let nonzero: Vec<Value> = r.parts.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| json!({"c1": k.0, "theta": k.1, "terms": c.len()})).collect();
    Check::from_bool(name, !clipped && nonzero.is_empty(), json!({"cap": cap, "clipped": clipped, "nonzero_parts": nonzero}))
}

fn series_side(order: u32, out: &mut Vec<Check>, golden: Option<&str>) -> Result<(), HarnessError> {
    let cap = cap_for(order);
    let oracle = sinh_ratio_table(order);
    let name = format!("fundamental.br_u_matches_series[M={order}]");
    let table = match br_u_table(order, cap) {
        Ok(t) => t,
        Err(e) => {
            out.push(Check::fail(name, json!({"error": e.to_string()})));
            return Ok(());
        }
    };
    let witness = json!({"br_u": table_to_json(order, &table), "series": table_to_json(order, &oracle)});
    out.push(Check::from_bool(name, table == oracle, witness));
    if let Some(text) = golden {
        let (g_order, g) = golden_table(text)?;
        let name = format!("fundamental.br_u_golden[M={g_order}]");
        let ok = g_order == order && g == table;
        out.push(Check::from_bool(name, ok, json!({"golden": table_to_json(g_order, &g), "computed": table_to_json(order, &table)})));
    }
    Ok(())
}

/// `trace_density_0` of the lead pairing of `U` with `1` must be `1`.
fn trace_pairing(d: usize) -> Check {
    let name = format!("fundamental.pipeline_trace_pairing_unit[d={d}]");
    let sh = WeylShape::new(d, 2 * d + 2, fundamental_window(2));
    let v = trace_of_pairing_value(sh);
    Check::from_bool(name, v == TULaurent::one(sh.window), json!({"value": v.to_string(), "expected": "1"}))
}

/// `Â` coefficients through `z^4` recovered from the pipeline.
fn ahat_consistency() -> Check {
    let name = "fundamental.pipeline_ahat[d=1]";
    let order = 5;
    let series = series_expand(SeriesName::Ahat, 2 * order);
    let expected: Vec<Rational> = (0..order).map(|k| series.coeff(k)).collect();
    match ahat_from_pipeline(order, cap_for(order)) {
        Ok(got) => {
            let s = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
            Check::from_bool(name, got == expected, json!({"pipeline": s(&got), "series": s(&expected)}))
        }
        Err(e) => Check::fail(name, json!({"error": e.to_string()})),
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Check>, HarnessError> {
    let mut out = vec![br_u0(1), br_u0(2)];
    for m in 1..=cfg.order {
        out.push(cocycle(m));
    }
    let golden = match &cfg.golden {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| HarnessError::Golden(format!("{}: {e}", p.display())))?),
        None if cfg.order == 4 => Some(GOLDEN_M4.to_string()),
        None => None,
    };
    series_side(cfg.order, &mut out, golden.as_deref())?;
    out.push(trace_pairing(1));
    out.push(trace_pairing(2));
    out.push(ahat_consistency());
    Ok(out)
}
