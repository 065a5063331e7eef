//! Moyal product: associativity, commutators in `tW`, canonical relations.

use serde_json::json;

use super::sampler;
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::scalars::TULaurent;
use crate::weyl::{commutator, moyal_mul, WeylElement, WeylShape};

/// Degree-2 samples in `W_d` with cap 6 keep every triple product unclipped.
fn shape(cfg: &SuiteConfig, d: usize) -> WeylShape {
    WeylShape::new(d, 6, cfg.window)
}

fn associativity(cfg: &SuiteConfig, d: usize) -> Check {
    let name = format!("weyl.associativity[d={d}]");
    let mut s = sampler(cfg, &name);
    let sh = shape(cfg, d);
    for trial in 0..cfg.trials {
        let f = s.weyl(sh, 2, (0, 1), 3);
        let g = s.weyl(sh, 2, (0, 1), 3);
        let h = s.weyl(sh, 2, (-1, 1), 3);
        let left = moyal_mul(&moyal_mul(&f, &g).expect("shape"), &h).expect("shape");
        let right = moyal_mul(&f, &moyal_mul(&g, &h).expect("shape")).expect("shape");
        if left.is_clipped() || right.is_clipped() || left != right {
            return Check::fail(
                name,
                json!({"trial": trial, "f": f.to_json(), "g": g.to_json(), "h": h.to_json(),
                       "left": left.to_json(), "right": right.to_json()}),
            );
        }
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": 0}))
}

/// Lowest `t`-power of an element.
fn min_t(f: &WeylElement) -> Option<i32> {
    f.terms().iter().filter_map(|(_, c)| c.min_t()).min()
}

fn commutator_in_tw(cfg: &SuiteConfig, d: usize) -> Check {
    let name = format!("weyl.commutator_in_tW[d={d}]");
    let mut s = sampler(cfg, &name);
    let sh = shape(cfg, d);
    for trial in 0..cfg.trials {
        let f = s.weyl(sh, 3, (0, 0), 3);
        let g = s.weyl(sh, 3, (0, 0), 3);
        let c = commutator(&f, &g).expect("shape");
        if c.is_clipped() || min_t(&c).is_some_and(|k| k < 1) {
            return Check::fail(name, json!({"trial": trial, "f": f.to_json(), "g": g.to_json(), "commutator": c.to_json()}));
        }
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": 0}))
}

/// `[x_i, xi_j] = delta_ij t`, `[x_i, x_j] = [xi_i, xi_j] = 0`.
fn canonical_relations(cfg: &SuiteConfig, d: usize) -> Check {
    let name = format!("weyl.canonical_relations[d={d}]");
    let sh = shape(cfg, d);
    let t = WeylElement::scalar(sh, TULaurent::monomial(sh.window, crate::scalars::int(1), 1, 0));
    for i in 0..d {
        for j in 0..d {
            let expect = if i == j { t.clone() } else { WeylElement::zero(sh) };
            let checks = [
                (commutator(&WeylElement::x(sh, i), &WeylElement::xi(sh, j)), expect),
                (commutator(&WeylElement::x(sh, i), &WeylElement::x(sh, j)), WeylElement::zero(sh)),
                (commutator(&WeylElement::xi(sh, i), &WeylElement::xi(sh, j)), WeylElement::zero(sh)),
            ];
            for (got, want) in checks {
                let got = got.expect("shape");
                if got != want {
                    return Check::fail(name, json!({"i": i, "j": j, "got": got.to_json(), "expected": want.to_json()}));
                }
            }
        }
    }
    Check::pass(name, json!({"x_xi": "t"}))
}

pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=2 {
        out.push(associativity(cfg, d));
        out.push(commutator_in_tw(cfg, d));
        out.push(canonical_relations(cfg, d));
    }
    out
}
