//! Differential identities on Hochschild and cyclic chains, and acyclicity
//! of the cyclic complex of `k[eta]`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::sampler;
use crate::chains::*;
use crate::harness::config::SuiteConfig;
use crate::harness::report::Check;
use crate::linalg::{rank, SparseVec};
use crate::weyl::WeylShape;

type ChainOp<A> = fn(&A, &Chain<<A as GradedAlgebra>::Basis>) -> Chain<<A as GradedAlgebra>::Basis>;

/// Sample chains until `trials` residuals have been judged, requiring
/// `op(c)` to vanish. Clipped residuals are counted and resampled; a check
/// that cannot collect enough unclipped samples is a skip.
pub(crate) fn identity_check<A, F>(
    cfg: &SuiteConfig,
    name: &str,
    alg: &A,
    reduction: Reduction,
    lens: std::ops::RangeInclusive<usize>,
    op: F,
) -> Check
where
    A: GradedAlgebra,
    F: Fn(&Chain<A::Basis>) -> Chain<A::Basis>,
{
    let mut s = sampler(cfg, name);
    let basis = alg.basis_upto(2);
    let mut clipped = 0;
    let mut judged = 0;
    for trial in 0..10 * cfg.trials {
        if judged == cfg.trials {
            break;
        }
        let c = s.chain(alg, &basis, reduction, lens.clone(), 3);
        let r = op(&c);
        if r.is_clipped() {
            clipped += 1;
            continue;
        }
        judged += 1;
        if !r.is_zero() {
            return Check::fail(
                name,
                json!({"trial": trial, "input": chain_to_json(alg, &c), "residual": chain_to_json(alg, &r)}),
            );
        }
    }
    if judged < cfg.trials {
        return Check::skip(name, "too many samples left the truncation window");
    }
    Check::pass(name, json!({"trials": cfg.trials, "clipped": clipped}))
}

fn b_squared<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    hochschild_b(alg, &hochschild_b(alg, c))
}

fn connes_squared<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    connes_b(alg, &connes_b(alg, c))
}

fn b_connes_anticommute<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    hochschild_b(alg, &connes_b(alg, c)).plus(&connes_b(alg, &hochschild_b(alg, c)))
}

fn total_squared<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let d = |x: &Chain<A::Basis>| hochschild_b(alg, x).plus(&dga_delta(alg, x));
    d(&d(c))
}

fn ntb_first<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let l = hochschild_b(alg, &c.minus(&tau(alg, c)));
    let bp = b_prime(alg, c);
    l.minus(&bp.minus(&tau(alg, &bp)))
}

fn ntb_second<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    b_prime(alg, &n_op(alg, c)).minus(&n_op(alg, &hochschild_b(alg, c)))
}

/// The identity checks for one algebra. `B` and `B^2 = 0` live on the
/// normalized complex; the `ntb` relations are stated on unnormalized chains.
pub(crate) fn algebra_checks<A: GradedAlgebra>(cfg: &SuiteConfig, alg: &A, out: &mut Vec<Check>) {
    let tag = alg.tag();
    let table: [(&str, Reduction, ChainOp<A>); 7] = [
        ("b_squared", Reduction::None, b_squared::<A>),
        ("b_squared_normalized", Reduction::Normalized, b_squared::<A>),
        ("connes_b_squared", Reduction::Normalized, connes_squared::<A>),
        ("b_connes_anticommute", Reduction::Normalized, b_connes_anticommute::<A>),
        ("total_differential_squared", Reduction::Normalized, total_squared::<A>),
        ("ntb_b_tau", Reduction::None, ntb_first::<A>),
        ("ntb_b_prime_n", Reduction::None, ntb_second::<A>),
    ];
    for (id, red, op) in table {
        let name = format!("complexes.{id}[{tag}]");
        out.push(identity_check(cfg, &name, alg, red, 1..=4, |c| op(alg, c)));
    }
}

/// `lambda`-classes of words over `{1, eta}` of total degree `n`.
fn lambda_basis(alg: &DualNumbers, n: usize) -> Vec<Vec<EtaBasis>> {
    let mut out = std::collections::BTreeSet::new();
    // a word of length p + 1 with e etas has degree p + e
    for len in 1..=n + 1 {
        let etas = n + 1 - len;
        if etas > len {
            continue;
        }
        for mask in 0u32..(1 << len) {
            if mask.count_ones() as usize != etas {
                continue;
            }
            let w: Vec<EtaBasis> = (0..len).map(|i| if mask >> i & 1 == 1 { EtaBasis::Eta } else { EtaBasis::One }).collect();
            if let Some((rep, _)) = lambda_representative(alg, &w) {
                out.insert(rep);
            }
        }
    }
    out.into_iter().collect()
}

/// Matrix of `b + delta` from degree `n` to degree `n - 1` in the bases
/// above, with exact rational entries.
fn lambda_matrix(alg: &DualNumbers, src: &[Vec<EtaBasis>], dst: &[Vec<EtaBasis>]) -> Option<Vec<SparseVec>> {
    let index: BTreeMap<&Vec<EtaBasis>, usize> = dst.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut cols = Vec::with_capacity(src.len());
    for w in src {
        let c = word_chain(alg, Reduction::None, w.clone(), crate::scalars::TULaurent::one(alg.window()));
        let img = lambda_normalize(alg, &hochschild_b(alg, &c).plus(&dga_delta(alg, &c)));
        let mut col = SparseVec::new();
        for (word, k) in img.iter() {
            let q = k.as_constant()?;
            col.insert(*index.get(&word.0)?, q);
        }
        cols.push(col);
    }
    Some(cols)
}

/// Ranks of `b + delta` on `C^lambda(k[eta])`, `deg eta = 1`, and the
/// resulting homology dimensions in degrees `0..=max_deg`.
pub fn lambda_homology_k_eta(max_deg: usize) -> Option<Vec<(usize, usize, usize)>> {
    let alg = DualNumbers::new(1, crate::scalars::Window::standard());
    let bases: Vec<_> = (0..=max_deg + 1).map(|n| lambda_basis(&alg, n)).collect();
    let mut ranks = vec![0usize; max_deg + 2];
    for n in 1..=max_deg + 1 {
        ranks[n] = rank(&lambda_matrix(&alg, &bases[n], &bases[n - 1])?);
    }
    Some((0..=max_deg).map(|n| (bases[n].len(), ranks[n], bases[n].len() - ranks[n] - ranks[n + 1])).collect())
}

fn lambda_acyclicity(out: &mut Vec<Check>) {
    let name = "complexes.lambda_acyclic_k_eta";
    match lambda_homology_k_eta(6) {
        None => out.push(Check::fail(name, json!("differential left the basis"))),
        Some(rows) => {
            let ok = rows.iter().all(|r| r.2 == 0);
            let table: Vec<Value> =
                rows.iter().enumerate().map(|(n, r)| json!({"degree": n, "dim": r.0, "rank_out": r.1, "homology": r.2})).collect();
            out.push(Check::from_bool(name, ok, Value::Array(table)));
        }
    }
}

pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    let w = cfg.window;
    let mut out = Vec::new();
    for d in 1..=2 {
        algebra_checks(cfg, &WeylAlgebra::new(WeylShape::new(d, cfg.cap.min(5), w)), &mut out);
    }
    algebra_checks(cfg, &SymbolAlgebra::new(WeylShape::new(cfg.d, cfg.cap.min(5), w)), &mut out);
    algebra_checks(cfg, &DualNumbers::new(1, w), &mut out);
    algebra_checks(cfg, &DualNumbers::new(-1, w), &mut out);
    algebra_checks(cfg, &MatrixAlgebra::new(w), &mut out);
    algebra_checks(cfg, &WithEta::new(WeylAlgebra::new(WeylShape::new(1, 3, w)), 1), &mut out);
    lambda_acyclicity(&mut out);
    out
}
