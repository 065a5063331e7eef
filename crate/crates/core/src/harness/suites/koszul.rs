//! Koszul complex of `W_d`, its maps to Hochschild chains and forms, and the
//! normalization of the fundamental cycle.

use serde_json::json;

use super::sampler;
use crate::chains::*;
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::sample::Sampler;
use crate::weyl::WeylShape;

fn shape(cfg: &SuiteConfig, d: usize) -> WeylShape {
    WeylShape::new(d, 6, cfg.window)
}

fn random_koszul(s: &mut Sampler, sh: WeylShape) -> KoszulElement {
    let n = 2 * sh.d;
    let mut out = KoszulElement::zero(sh);
    for _ in 0..s.range(1, 3) {
        let q = s.range(0, n);
        let mut idx: Vec<u8> = (0..n as u8).collect();
        while idx.len() > q {
            let i = s.range(0, idx.len() - 1);
            idx.remove(i);
        }
        out = out.plus(&KoszulElement::new(&s.weyl(sh, 3, (0, 1), 3), &idx));
    }
    out
}

fn koszul_check<F>(cfg: &SuiteConfig, id: &str, d: usize, f: F) -> Check
where
    F: Fn(&KoszulElement) -> Result<(), String>,
{
    let name = format!("koszul.{id}[d={d}]");
    let mut s = sampler(cfg, &name);
    let sh = shape(cfg, d);
    for trial in 0..cfg.trials {
        let k = random_koszul(&mut s, sh);
        if let Err(w) = f(&k) {
            return Check::fail(name, json!({"trial": trial, "input": format!("{:?}", k.terms), "residual": w}));
        }
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": 0}))
}

fn phi_maps_to_one(cfg: &SuiteConfig, d: usize) -> Check {
    let name = format!("koszul.phi_maps_to_one[d={d}]");
    let sh = shape(cfg, d);
    let phi = phi_cycle(sh);
    let alg = WeylAlgebra::new(sh);
    let cycle = hochschild_b(&alg, &phi).is_zero();
    // Koszul projection then the map to forms; `trace_density_0` further
    // applies `I^{-1}`, which rescales degree 0 by `t^d`.
    let image = koszul_to_derham(&hochschild_to_koszul(sh, &phi));
    let one = FormalDeRham::one(d, sh.window);
    let scaled = trace_density_0(sh, &phi) == one.shift(d as i32, 0);
    Check::from_bool(
        name,
        cycle && image == one && scaled,
        json!({"is_cycle": cycle, "image_is_one": image == one, "trace_density_is_t_pow_d": scaled}),
    )
}

fn hkr_kills_boundaries(cfg: &SuiteConfig, d: usize) -> Check {
    let name = format!("koszul.hkr_kills_boundaries[d={d}]");
    let mut s = sampler(cfg, &name);
    let alg = SymbolAlgebra::new(WeylShape::new(d, 6, cfg.window));
    let basis = alg.basis_upto(2);
    for trial in 0..cfg.trials {
        let c = s.chain(&alg, &basis, Reduction::Normalized, 1..=3, 3);
        let img = hkr(&alg, &hochschild_b(&alg, &c));
        if !img.is_zero() {
            return Check::fail(name, json!({"trial": trial, "input": chain_to_json(&alg, &c), "image": format!("{:?}", img.terms)}));
        }
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": 0}))
}

pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=2 {
        out.push(koszul_check(cfg, "partial_squared", d, |k| {
            let r = koszul_partial(&koszul_partial(k));
            if r.is_zero() { Ok(()) } else { Err(format!("{:?}", r.terms)) }
        }));
        out.push(koszul_check(cfg, "to_hochschild_chain_map", d, |k| {
            let alg = WeylAlgebra::new(k.shape);
            let lhs = hochschild_b(&alg, &koszul_to_hochschild(k));
            let rhs = koszul_to_hochschild(&koszul_partial(k));
            if lhs == rhs { Ok(()) } else { Err(format!("{:?}", lhs.minus(&rhs).words)) }
        }));
        out.push(koszul_check(cfg, "hochschild_round_trip", d, |k| {
            let back = hochschild_to_koszul(k.shape, &koszul_to_hochschild(k));
            if back == *k { Ok(()) } else { Err(format!("{:?}", back.terms)) }
        }));
        out.push(koszul_check(cfg, "to_derham_chain_map", d, |k| {
            let lhs = koszul_to_derham(&koszul_partial(k));
            let rhs = t_d_dr(&koszul_to_derham(k));
            if lhs == rhs { Ok(()) } else { Err(format!("{:?}", lhs.minus(&rhs).terms)) }
        }));
        out.push(phi_maps_to_one(cfg, d));
        out.push(hkr_kills_boundaries(cfg, d));
    }
    out
}
