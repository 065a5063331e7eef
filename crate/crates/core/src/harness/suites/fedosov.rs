//! Fedosov recursion on the formal polydisk.

use serde_json::json;

use super::sampler;
use crate::fedosov::*;
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::sample::Sampler;
use crate::scalars::rat;
use crate::weyl::{moyal_mul, Monomial};

fn shape(d: usize, depth: usize) -> FedosovShape {
    FedosovShape::new(d, depth).expect("positive depth")
}

/// Random `degree`-form with small base monomials and fiber degree
/// `<= max_fiber_deg`.
pub(crate) fn random_form(s: &mut Sampler, sh: FedosovShape, degree: usize, max_fiber_deg: usize) -> FormalForm {
    let n = 2 * sh.d;
    let mut out = FormalForm::zero(sh, degree);
    for _ in 0..s.range(1, 4) {
        let mut dz: Vec<u8> = (0..n as u8).collect();
        while dz.len() > degree {
            let i = s.range(0, dz.len() - 1);
            dz.remove(i);
        }
        let mut base = vec![0u8; n];
        for _ in 0..s.range(0, 2) {
            base[s.range(0, n - 1)] += 1;
        }
        let w = s.weyl(sh.weyl(), max_fiber_deg, (0, 1), 3);
        out = out.plus(&FormalForm::term(sh, &dz, Monomial(base), w)).expect("same shape");
    }
    out
}

/// A closed target with `t^{-1}`, `t^0` and `t^1` parts, exact and
/// non-exact pieces.
pub fn sample_theta(sh: FedosovShape) -> FormalForm {
    let n = 2 * sh.d;
    let mono = |idx: &[(usize, u8)]| {
        let mut e = vec![0u8; n];
        for &(i, k) in idx {
            e[i] = k;
        }
        Monomial(e)
    };
    let one = mono(&[]);
    let beta = FormalForm::scalar_term(sh, &[1], mono(&[(0, 2), (1, 1)]), 0, rat(1, 1));
    let parts = [
        de_rham(&beta),
        FormalForm::scalar_term(sh, &[0, sh.d as u8], one.clone(), -1, rat(3, 1)),
        FormalForm::scalar_term(sh, &[0, 1], one, 1, rat(-1, 2)),
        de_rham(&FormalForm::scalar_term(sh, &[0], mono(&[(1, 2)]), -1, rat(1, 1))),
    ];
    parts.iter().fold(FormalForm::zero(sh, 2), |acc, p| acc.plus(p).expect("same shape"))
}

fn homotopy_identity(cfg: &SuiteConfig) -> Check {
    let name = "fedosov.homotopy_identity";
    let mut s = sampler(cfg, name);
    for trial in 0..cfg.trials {
        let d = 1 + trial % 2;
        let sh = shape(d, 4);
        let q = s.range(0, 2 * d);
        let w = random_form(&mut s, sh, q, 4);
        let mut lhs = koszul_homotopy(&koszul_delta(&w));
        if q > 0 {
            lhs = lhs.plus(&koszul_delta(&koszul_homotopy(&w))).expect("same degree");
        }
        let rhs = w.minus(&harmonic_part(&w)).expect("same degree");
        if lhs != rhs {
            return Check::fail(name, json!({"trial": trial, "input": w.to_json()}));
        }
    }
    Check::pass(name, json!({"trials": cfg.trials}))
}

/// At every depth the curvature residual left by truncation has weight
/// above the depth, and the recursion's residual weights increase.
fn residual_filtration() -> Check {
    let name = "fedosov.residual_filtration";
    let mut rows = Vec::new();
    let mut ok = true;
    for depth in 1..=6usize {
        let sh = shape(1, depth);
        let res = (|| -> Result<(i64, Vec<Option<i64>>), FedosovError> {
            let a = fedosov_recursion(&sample_theta(sh))?;
            let wide = shape(1, depth + 3);
            let b = ConnectionData::from_lift(wide, &a.lift().rebased(wide)?)?;
            let residual = curvature_of_lift(&b).nonscalar_part();
            Ok((residual.min_weight().unwrap_or(i64::MAX), a.residual_weights.clone()))
        })();
        match res {
            Ok((w, weights)) => {
                let finite: Vec<i64> = weights.iter().flatten().copied().collect();
                let increasing = finite.windows(2).all(|p| p[1] > p[0]) && weights.last() == Some(&None);
                let good = w > depth as i64 && increasing;
                ok &= good;
                rows.push(json!({"depth": depth, "residual_weight": w, "recursion_weights": weights, "ok": good}));
            }
            Err(e) => {
                ok = false;
                rows.push(json!({"depth": depth, "error": e.to_string()}));
            }
        }
    }
    Check::from_bool(name, ok, json!(rows))
}

/// `theta = 0` yields the tautological connection, and the product of
/// horizontal sections is the Moyal product.
fn zero_target_moyal() -> Check {
    let name = "fedosov.zero_target_moyal";
    let mut rows = Vec::new();
    let mut ok = true;
    for (d, depth) in [(1, 6), (2, 4)] {
        let sh = shape(d, depth);
        let res = (|| -> Result<bool, FedosovError> {
            let a = fedosov_recursion(&FormalForm::zero(sh, 2))?;
            let tautological = a.lift() == tautological_form(sh) && extract_theta(&a)?.is_zero();
            let n = 2 * d;
            let mut fm = vec![0u8; n];
            fm[0] = 2;
            fm[n - 1] = 1;
            let mut gm = vec![0u8; n];
            gm[d] = 2;
            gm[0] = 1;
            let f = base_function(sh, &[(Monomial(fm), 0, rat(1, 1)), (Monomial(vec![0; n]), 0, rat(3, 2))]);
            let g = base_function(sh, &[(Monomial(gm), 0, rat(-2, 1))]);
            let ws = sh.weyl();
            let prod = base_as_weyl(&kernel_product(&a, &f, &g)?, ws)?;
            let moyal = moyal_mul(&base_as_weyl(&f, ws)?, &base_as_weyl(&g, ws)?)?;
            Ok(tautological && agree_to_weight(&prod, &moyal, sh.limit()))
        })();
        let good = matches!(res, Ok(true));
        ok &= good;
        rows.push(json!({"d": d, "depth": depth, "ok": good, "error": res.err().map(|e| e.to_string())}));
    }
    Check::from_bool(name, ok, json!(rows))
}

fn theta_round_trip() -> Check {
    let name = "fedosov.theta_round_trip";
    let mut rows = Vec::new();
    let mut ok = true;
    for (d, depth) in [(1, 6), (2, 3)] {
        let sh = shape(d, depth);
        let theta = sample_theta(sh);
        let res = fedosov_recursion(&theta).and_then(|a| Ok(a.is_fedosov() && extract_theta(&a)? == theta));
        let good = matches!(res, Ok(true));
        ok &= good;
        rows.push(json!({"d": d, "depth": depth, "theta": theta.to_scalar_table().ok(), "ok": good}));
    }
    Check::from_bool(name, ok, json!(rows))
}

fn gauge_invariance(cfg: &SuiteConfig) -> Check {
    let name = "fedosov.gauge_preserves_theta";
    let mut s = sampler(cfg, name);
    let mut cases = 0;
    for (d, depth) in [(1, 5), (2, 3)] {
        let sh = shape(d, depth);
        let res = (|| -> Result<Option<FormalForm>, FedosovError> {
            let a = fedosov_recursion(&sample_theta(sh))?;
            let theta = extract_theta(&a)?;
            for _ in 0..4 {
                let raw = random_form(&mut s, sh, 0, 3);
                let x = raw.minus(&raw.truncated(0))?;
                if x.is_zero() {
                    continue;
                }
                let b = gauge_transform(&x, &a)?;
                if !b.is_fedosov() || extract_theta(&b)? != theta {
                    return Ok(Some(x));
                }
                cases += 1;
            }
            Ok(None)
        })();
        match res {
            Ok(None) => {}
            Ok(Some(x)) => return Check::fail(name, json!({"d": d, "generator": x.to_json()})),
            Err(e) => return Check::fail(name, json!({"d": d, "error": e.to_string()})),
        }
    }
    Check::pass(name, json!({"cases": cases}))
}

pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    vec![homotopy_identity(cfg), residual_filtration(), zero_target_moyal(), theta_round_trip(), gauge_invariance(cfg)]
}
