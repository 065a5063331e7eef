//! Chevalley-Eilenberg operators and the Chern-Weil construction on the
//! three reference algebras.

use rand::seq::SliceRandom;
use serde_json::json;

use super::sampler;
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::liecw::gca::GcaElement;
use crate::liecw::*;
use crate::sample::Sampler;
use crate::scalars::{int, rat, sign_pow};

fn unit(i: usize) -> Vector {
    std::iter::once((i, int(1))).collect()
}

fn instances() -> Vec<FinDGLA> {
    vec![
        d1_tilde(2).with_epsilon().expect("extension is valid"),
        sp2_semidirect(),
        der_w1_truncated(2),
    ]
}

/// Combination `sum_k q_k op(k, c)` over a basis expansion.
fn expand<F>(ce: &CeComplex<'_, FiniteModule>, v: &Vector, c: &Cochain<Vector>, op: F) -> Cochain<Vector>
where
    F: Fn(usize, &Cochain<Vector>) -> Cochain<Vector>,
{
    let mut r = ce.zero();
    for (k, q) in v {
        ce.add_scaled(&mut r, &op(*k, c), q);
    }
    r
}

/// Cochains of arity `<= 2` on basis generators with basis values.
fn basis_cochains(ce: &CeComplex<'_, FiniteModule>) -> Vec<Cochain<Vector>> {
    let n = ce.g.dim() as u16;
    let mut out = Vec::new();
    for mi in 0..ce.module.dim() {
        let m = unit(mi);
        out.push(ce.constant(&m));
        for i in 0..n {
            out.push(ce.monomial(&[i], &m));
            let j = (i + 1 + mi as u16) % n;
            if j != i {
                out.push(ce.monomial(&[i, j], &m));
            }
        }
    }
    out
}

/// At most `count` basis cochains, chosen by the sampler.
fn sample_cochains(ce: &CeComplex<'_, FiniteModule>, s: &mut Sampler, count: usize) -> Vec<Cochain<Vector>> {
    let mut basis = basis_cochains(ce);
    basis.shuffle(s.rng());
    basis.truncate(count);
    basis
}

/// `d^2 = 0`, `[i_x, i_y] = 0`, `[L_x, i_y] = i_[x,y]`, `[L_x, L_y] = L_[x,y]`,
/// `[d, i_x] = (-1)^|x| L_x + i_dx`, `[d, L_x] = L_dx`.
fn cartan(cfg: &SuiteConfig, g: &FinDGLA) -> Check {
    let name = format!("liecw.cartan_relations[{}]", g.name);
    let mut s = sampler(cfg, &name);
    let mut count = 0usize;
    for m in [FiniteModule::trivial(g), FiniteModule::adjoint(g)] {
        let ce = CeComplex::new(g, m);
        for c in sample_cochains(&ce, &mut s, 40) {
            let fail = |rel: &str, x: usize, y: usize| Check::fail(name.clone(), json!({"relation": rel, "x": x, "y": y, "cochain": format!("{:?}", c.terms)}));
            if !ce.differential(&ce.differential(&c)).is_zero() {
                return fail("d^2", 0, 0);
            }
            for x in 0..g.dim() {
                let dx = g.degrees[x];
                let lhs = operator_commutator(&ce, |z| ce.differential(z), 1, |z| ce.contraction(x, z), dx - 1, &c);
                let mut rhs = ce.lie_derivative(x, &c);
                if sign_pow(i64::from(dx)) < 0 {
                    rhs = ce.minus(&ce.zero(), &rhs);
                }
                ce.add_scaled(&mut rhs, &expand(&ce, g.differential_basis(x), &c, |k, z| ce.contraction(k, z)), &int(1));
                if lhs != rhs {
                    return fail("[d,i_x]", x, x);
                }
                let dl = operator_commutator(&ce, |z| ce.differential(z), 1, |z| ce.lie_derivative(x, z), dx, &c);
                if dl != expand(&ce, g.differential_basis(x), &c, |k, z| ce.lie_derivative(k, z)) {
                    return fail("[d,L_x]", x, x);
                }
                for y in 0..g.dim() {
                    let dy = g.degrees[y];
                    let ii = operator_commutator(&ce, |z| ce.contraction(x, z), dx - 1, |z| ce.contraction(y, z), dy - 1, &c);
                    if !ii.is_zero() {
                        return fail("[i_x,i_y]", x, y);
                    }
                    let li = operator_commutator(&ce, |z| ce.lie_derivative(x, z), dx, |z| ce.contraction(y, z), dy - 1, &c);
                    if li != expand(&ce, g.bracket_basis(x, y), &c, |k, z| ce.contraction(k, z)) {
                        return fail("[L_x,i_y]", x, y);
                    }
                    let ll = operator_commutator(&ce, |z| ce.lie_derivative(x, z), dx, |z| ce.lie_derivative(y, z), dy, &c);
                    if ll != expand(&ce, g.bracket_basis(x, y), &c, |k, z| ce.lie_derivative(k, z)) {
                        return fail("[L_x,L_y]", x, y);
                    }
                    count += 1;
                }
            }
        }
    }
    Check::pass(name, json!({"cases": count}))
}

/// The connection form restricts to the identity on the subalgebra and is
/// equivariant; the curvature is horizontal, equivariant and satisfies
/// Bianchi.
fn curvature(g: &FinDGLA) -> Check {
    let name = format!("liecw.connection_curvature[{}]", g.name);
    let cw = ChernWeil::new(g);
    let a = cw.connection();
    let r = cw.curvature();
    let h = g.h_indices();
    let mut bad = Vec::new();
    for (p, &hi) in h.iter().enumerate() {
        if cw.valued.evaluate(&a, &[hi]) != unit(p) {
            bad.push(format!("A(h_{p})"));
        }
        if !cw.valued.contraction(hi, &r).is_zero() {
            bad.push(format!("i_h{p} R"));
        }
        for (form, label) in [(&a, "A"), (&r, "R")] {
            let mut e = cw.valued.lie_derivative(hi, form);
            cw.valued.add_scaled(&mut e, &cw.act_on_values(p, form), &int(1));
            if !e.is_zero() {
                bad.push(format!("equivariance {label} h_{p}"));
            }
        }
    }
    let mut bianchi = cw.valued.differential(&r);
    cw.valued.add_scaled(&mut bianchi, &cw.bracket_product(&a, &r), &int(1));
    if !bianchi.is_zero() {
        bad.push("bianchi".into());
    }
    Check::from_bool(name, bad.is_empty(), json!({"failures": bad, "curvature_zero": r.is_zero()}))
}

/// Images of basic Weil elements are closed relative cochains, and the
/// Chern-Weil map intertwines `d`, `i` and `L`.
fn chern_weil(g: &FinDGLA) -> Vec<Check> {
    let cw = ChernWeil::new(g);
    let w = match cw.weil() {
        Ok(w) => w,
        Err(e) => return vec![Check::fail(format!("liecw.chern_weil[{}]", g.name), json!(e.to_string()))],
    };
    let mut basic = w.basic_part(2);
    basic.extend(w.basic_part(4));
    let mut bad = Vec::new();
    let mut nonzero = 0;
    for b in &basic {
        let c = cw.cw_map(b);
        if !c.is_zero() {
            nonzero += 1;
        }
        if !cw.d(&c).is_zero() || !cw.scalar.is_relative(&gca_to_cochain(&c)) {
            bad.push(format!("{:?}", b.terms));
        }
    }
    let basic_check = Check::from_bool(
        format!("liecw.chern_cochains_basic_cocycles[{}]", g.name),
        bad.is_empty(),
        json!({"basic": basic.len(), "nonzero_images": nonzero, "failures": bad}),
    );
    let n = w.dim();
    let mut samples: Vec<GcaElement> = (0..n).flat_map(|k| [w.a(k), w.r(k)]).collect();
    for i in 0..n {
        samples.push(w.gca.monomial(&[i as u16, (n + (i + 1) % n) as u16], 0));
    }
    let h = g.h_indices();
    let mut bad = Vec::new();
    for x in &samples {
        if cw.cw_map(&w.differential(x)) != cw.d(&cw.cw_map(x)) {
            bad.push(format!("d {:?}", x.terms));
        }
        let img = gca_to_cochain(&cw.cw_map(x));
        for (b, &hb) in h.iter().enumerate() {
            if gca_to_cochain(&cw.cw_map(&w.contraction(b, x))) != cw.scalar.contraction(hb, &img) {
                bad.push(format!("i_{b} {:?}", x.terms));
            }
            if gca_to_cochain(&cw.cw_map(&w.lie_derivative(b, x))) != cw.scalar.lie_derivative(hb, &img) {
                bad.push(format!("L_{b} {:?}", x.terms));
            }
        }
    }
    let morphism =
        Check::from_bool(format!("liecw.chern_weil_morphism[{}]", g.name), bad.is_empty(), json!({"samples": samples.len(), "failures": bad}));
    vec![basic_check, morphism]
}

/// Chern-Weil with coefficients in the cochain module: `phi_l` is a chain
/// map and `d(CW(x) phi_l) = CW(dx) phi_l ± CW(x) phi_dl`.
fn with_coefficients(g: &FinDGLA) -> Check {
    let name = format!("liecw.chern_weil_with_coefficients[{}]", g.name);
    let module = match FiniteModule::cochains_of(g) {
        Ok(m) => m,
        Err(e) => return Check::fail(name, json!(e.to_string())),
    };
    let ce = CeComplex::new(g, module);
    let cw = ChernWeil::new(g);
    let w = match cw.weil() {
        Ok(w) => w,
        Err(e) => return Check::fail(name, json!(e.to_string())),
    };
    let m = &ce.module;
    let n = w.dim();
    let mut words = vec![GcaElement::one()];
    words.extend((0..n).flat_map(|k| [w.a(k), w.r(k)]));
    let mut bad = Vec::new();
    let mut cases = 0;
    for li in (0..m.dim()).step_by((m.dim() / 6).max(1)) {
        let l = unit(li);
        for x in &words {
            let Some(deg) = w.gca.degree(x, &[0]) else { continue };
            let run = || -> Result<bool, LieError> {
                let out = cw_with_coefficients(&cw, &ce, x, &l)?;
                let mut expect = cw_with_coefficients(&cw, &ce, &w.differential(x), &l)?;
                let second = cw_with_coefficients(&cw, &ce, x, &m.differential(&l))?;
                ce.add_scaled(&mut expect, &second, &int(sign_pow(i64::from(deg))));
                Ok(ce.differential(&out) == expect)
            };
            match run() {
                Ok(true) => cases += 1,
                Ok(false) => bad.push(json!({"l": li, "w": format!("{:?}", x.terms)})),
                Err(e) => bad.push(json!({"l": li, "error": e.to_string()})),
            }
        }
    }
    Check::from_bool(name, bad.is_empty(), json!({"cases": cases, "failures": bad}))
}

/// Changing the complement changes `c_P` by an exact relative cochain,
/// certified by solving `d beta = c_P - c_P'`.
fn complement_independence() -> Check {
    let name = "liecw.chern_cochain_complement_independence";
    let g = der_w1_truncated(2);
    let Some(central) = g.h_indices().iter().position(|&i| g.labels[i] == "t^0 x^0 xi^0") else {
        return Check::fail(name, json!("central element not found"));
    };
    let mut coeffs = vec![int(0); g.h_indices().len()];
    coeffs[central] = int(1);
    let p = SymmetricForm::linear(&coeffs);
    let cw1 = ChernWeil::new(&g);
    let mut rows = Vec::new();
    let mut ok = true;
    for (lambda, mu) in [(rat(1, 3), rat(5, 2)), (rat(-2, 1), rat(1, 7))] {
        let res = (|| -> Result<(bool, String), LieError> {
            let g2 = der_w1_shifted_complement(&g, lambda.clone(), mu.clone())?;
            let cw2 = ChernWeil::new(&g2);
            let diff = cw1.chern_cochain(&p)?.minus(&cw2.chern_cochain(&p)?);
            let beta = solve_exact(&cw1.relative_cochains(1), |x| cw1.d(x), &diff)?;
            let shown: Vec<String> = beta.terms.iter().map(|((g, c), q)| format!("{q} {g:?}/{c}")).collect();
            Ok((cw1.d(&beta) == diff && !diff.is_zero(), shown.join(" + ")))
        })();
        match res {
            Ok((good, beta)) => {
                ok &= good;
                rows.push(json!({"lambda": lambda.to_string(), "mu": mu.to_string(), "beta": beta}));
            }
            Err(e) => {
                ok = false;
                rows.push(json!({"lambda": lambda.to_string(), "mu": mu.to_string(), "error": e.to_string()}));
            }
        }
    }
    Check::from_bool(name, ok, json!(rows))
}

pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for g in instances() {
        out.push(cartan(cfg, &g));
        out.push(curvature(&g));
    }
    let plain: [FinDGLA; 3] = [d1_tilde(2), sp2_semidirect(), der_w1_truncated(2)];
    for g in &plain {
        out.extend(chern_weil(g));
    }
    out.push(with_coefficients(&plain[1]));
    out.push(complement_independence());
    out
}
