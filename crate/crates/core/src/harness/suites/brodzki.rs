//! Boundary map `Br`: values on `eta`-powers, chain-map property, and
//! vanishing on the image of the insertion operator.

use serde_json::{json, Map, Value};

use super::sampler;
use crate::brodzki::*;
use crate::chains::*;
use crate::fundamental::{eta_weyl, iota_c1};
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::scalars::TULaurent;
use crate::weyl::WeylShape;

fn eta_powers(cfg: &SuiteConfig) -> Check {
    let k = DualNumbers::new(1, cfg.window);
    let one = TULaurent::one(cfg.window);
    let mut table = Map::new();
    let mut ok = true;
    for n in 0..=4 {
        let v = br(&k, &eta_power(&k, n + 1));
        ok &= v == one;
        table.insert(format!("n={n}"), Value::String(v.to_string()));
    }
    let value = if ok { json!(1) } else { Value::Object(table.clone()) };
    Check::from_bool("brodzki.br_eta_power", ok, json!({"value": value, "table": table}))
}

/// `Br((ub + delta) c) = 0` on `lambda`-normalized reduced chains.
fn chain_map<A: Splitting>(cfg: &SuiteConfig, alg: &A) -> Check {
    let name = format!("brodzki.chain_map[{}]", alg.tag());
    let mut s = sampler(cfg, &name);
    let basis = alg.basis_upto(1);
    let mut clipped = 0;
    for trial in 0..cfg.trials {
        let c = lambda_normalize(alg, &s.chain(alg, &basis, Reduction::Full, 1..=5, 3));
        let dc = lambda_normalize(alg, &dga_delta(alg, &c).plus(&hochschild_b(alg, &c).shift(0, 1)));
        if dc.is_clipped() {
            clipped += 1;
            continue;
        }
        let v = big_br(alg, &dc);
        if !v.is_zero() {
            return Check::fail(name, json!({"trial": trial, "input": chain_to_json(alg, &c), "image": chain_to_json(&GroundField::new(alg.window()), &v)}));
        }
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": clipped}))
}

fn vanishes_on_insertion(cfg: &SuiteConfig) -> Check {
    let name = "brodzki.vanishes_on_iota_x_d";
    let mut s = sampler(cfg, name);
    let alg = eta_weyl(cfg.window, 4);
    let basis = alg.basis_upto(1);
    let mut clipped = 0;
    for trial in 0..cfg.trials {
        let c = lambda_normalize(&alg, &s.chain(&alg, &basis, Reduction::Full, 1..=5, 3));
        let ic = lambda_normalize(&alg, &iota_c1(&alg, &c));
        if ic.is_clipped() {
            clipped += 1;
            continue;
        }
        let v = big_br(&alg, &ic);
        if !v.is_zero() {
            return Check::fail(name, json!({"trial": trial, "input": chain_to_json(&alg, &c), "image": chain_to_json(&GroundField::new(alg.window()), &v)}));
        }
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": clipped}))
}

pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    vec![
        eta_powers(cfg),
        chain_map(cfg, &DualNumbers::new(1, cfg.window)),
        chain_map(cfg, &WithEta::new(WeylAlgebra::new(WeylShape::new(1, 4, cfg.window)), 1)),
        vanishes_on_insertion(cfg),
    ]
}
