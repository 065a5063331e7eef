//! Concrete Lie algebras and the plain-text structure-constants format.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::{Echelon, SparseVec};
use crate::scalars::{int, parse_rational, Rational};
use crate::weyl::{moyal_monomials, Monomial};

use super::{axpy, FinDGLA, LieError, Vector};

/// `c_1`-direction plus central part `t^{-1}, 1, ..., t^{k-2}` of
/// the diagonal extension; abelian, subalgebra = everything.
pub fn d1_tilde(central: usize) -> FinDGLA {
    let mut labels = vec!["h".to_string()];
    labels.extend((0..central).map(|k| format!("t^{}", k as i64 - 1)));
    let n = labels.len();
    FinDGLA::new("d1~", labels, vec![0; n], vec![vec![Vector::new(); n]; n], vec![Vector::new(); n], vec![true; n])
        .expect("abelian algebra is valid")
}

/// `sp(2) ⋉ V` with `V` the standard representation; subalgebra `sp(2)`.
pub fn sp2_semidirect() -> FinDGLA {
    let table = "\
name: sp2xV
basis: e f h p q
sub: e f h
[h,e] = 2*e
[h,f] = -2*f
[e,f] = h
[h,p] = p
[h,q] = -1*q
[e,q] = p
[f,p] = q
";
    parse_dgla(table).expect("built-in table is valid")
}

/// A basis vector `t^{c-1} x^a xi^b` of the Lie algebra `(1/t) W_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct DerBasis {
    a: u8,
    b: u8,
    c: u8,
}

impl DerBasis {
    fn weight(&self) -> i32 {
        i32::from(self.a) + i32::from(self.b) + 2 * i32::from(self.c) - 2
    }

    fn label(&self) -> String {
        let t = i32::from(self.c) - 1;
        format!("t^{t} x^{} xi^{}", self.a, self.b)
    }
}

/// Nonnegative-weight part of `(1/t) W_1` modulo weights above `depth`,
/// where `x, xi` have weight 1 and `t` weight 2 (shifted by `-2`). The
/// subalgebra is the weight-0 part `sp(2) ⊕ k`.
pub fn der_w1_truncated(depth: i32) -> FinDGLA {
    let mut basis = Vec::new();
    for c in 0..=(depth / 2 + 1) as u8 {
        for deg in 0..=(depth + 2) as u8 {
            for a in 0..=deg {
                let e = DerBasis { a, b: deg - a, c };
                if (0..=depth).contains(&e.weight()) {
                    basis.push(e);
                }
            }
        }
    }
    basis.sort_by_key(|e| (e.weight(), e.c, e.a + e.b, e.b));
    let index: BTreeMap<DerBasis, usize> = basis.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let n = basis.len();
    let mut bracket = vec![vec![Vector::new(); n]; n];
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let mx = Monomial(vec![x.a, x.b]);
            let my = Monomial(vec![y.a, y.b]);
            let mut v = Vector::new();
            for (sign, (p, q)) in [(1, (&mx, &my)), (-1, (&my, &mx))] {
                for (m, tp, coeff) in moyal_monomials(p, q) {
                    // t^{cx-1} t^{cy-1} t^{tp} m = t^{c-1} m
                    let c = i32::from(x.c) + i32::from(y.c) - 1 + tp;
                    let e = DerBasis { a: m.0[0], b: m.0[1], c: c as u8 };
                    if e.weight() > depth {
                        continue;
                    }
                    let k = index[&e];
                    axpy(&mut v, &(coeff * int(sign)), &std::iter::once((k, int(1))).collect());
                }
            }
            bracket[i][j] = v;
        }
    }
    let labels = basis.iter().map(DerBasis::label).collect();
    let h_mask = basis.iter().map(|e| e.weight() == 0).collect();
    FinDGLA::new(&format!("Der(W1)/F{depth}"), labels, vec![0; n], bracket, vec![Vector::new(); n], h_mask)
        .expect("truncated algebra is valid")
}

/// Alternative `h`-stable complement for [`der_w1_truncated`]: each
/// quadratic `x^a xi^b` becomes `x^a xi^b + lambda t^{-1} x^a xi^b` and `t`
/// becomes `t + mu`.
pub fn der_w1_shifted_complement(g: &FinDGLA, lambda: Rational, mu: Rational) -> Result<FinDGLA, LieError> {
    let find = |label: &str| g.labels.iter().position(|l| l == label).filter(|&k| g.h_mask[k]);
    let mut comp = vec![Vector::new(); g.dim()];
    for i in g.v_indices() {
        let l = &g.labels[i];
        let target = if l == "t^1 x^0 xi^0" {
            find("t^0 x^0 xi^0").map(|k| (k, mu.clone()))
        } else if let Some(rest) = l.strip_prefix("t^0 ") {
            find(&format!("t^-1 {rest}")).map(|k| (k, lambda.clone()))
        } else {
            None
        };
        if let Some((k, c)) = target {
            comp[i].insert(k, c);
        }
    }
    g.with_complement(comp)
}

/// Square matrix over the rationals, `m[row][col]`.
pub type Matrix = Vec<Vec<Rational>>;

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j] - &b[i][k] * &a[k][j]).sum())
                .collect()
        })
        .collect()
}

fn flatten(m: &Matrix) -> SparseVec {
    let n = m.len();
    let mut v = SparseVec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, q) in row.iter().enumerate() {
            if !q.is_zero() {
                v.insert(i * n + j, q.clone());
            }
        }
    }
    v
}

/// Lie algebra spanned by linearly independent matrices under the commutator.
pub fn matrix_lie_algebra(name: &str, labels: Vec<String>, mats: &[Matrix], h_mask: Vec<bool>) -> Result<FinDGLA, LieError> {
    let mut span = Echelon::new();
    for m in mats {
        if !span.insert(&flatten(m)) {
            return Err(LieError::Parse("matrices are linearly dependent".to_string()));
        }
    }
    let n = mats.len();
    let mut bracket = vec![vec![Vector::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = flatten(&commutator(&mats[i], &mats[j]));
            bracket[i][j] = span.solve(&c).ok_or_else(|| LieError::Parse(format!("[{}, {}] leaves the span", labels[i], labels[j])))?;
        }
    }
    FinDGLA::new(name, labels, vec![0; n], bracket, vec![Vector::new(); n], h_mask)
}

fn elementary(n: usize, entries: &[(usize, usize, i64)]) -> Matrix {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for &(i, j, q) in entries {
        m[i][j] = int(q);
    }
    m
}

/// `sl(3)` with the subalgebra `s(gl(2) ⊕ gl(1))` of block-diagonal matrices.
pub fn sl3_block_pair() -> FinDGLA {
    let e = |i: usize, j: usize| elementary(3, &[(i, j, 1)]);
    let labels = ["E12", "E21", "H1", "H2", "E13", "E23", "E31", "E32"].map(str::to_string).to_vec();
    let mats = vec![
        e(0, 1),
        e(1, 0),
        elementary(3, &[(0, 0, 1), (1, 1, -1)]),
        elementary(3, &[(1, 1, 1), (2, 2, -1)]),
        e(0, 2),
        e(1, 2),
        e(2, 0),
        e(2, 1),
    ];
    let h_mask = (0..8).map(|i| i < 4).collect();
    matrix_lie_algebra("sl3/s(gl2+gl1)", labels, &mats, h_mask).expect("sl(3) is closed")
}

/// `sl(2) ⊗ k[s]/(s^order)` with the subalgebra `sl(2) ⊗ 1`.
pub fn sl2_truncated_current(order: usize) -> FinDGLA {
    let sl2 = [("e", elementary(2, &[(0, 1, 1)])), ("f", elementary(2, &[(1, 0, 1)])), ("h", elementary(2, &[(0, 0, 1), (1, 1, -1)]))];
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for k in 0..order {
        let shift: Matrix = (0..order).map(|i| (0..order).map(|j| if j == i + k { int(1) } else { int(0) }).collect()).collect();
        for (l, x) in &sl2 {
            labels.push(if k == 0 { l.to_string() } else { format!("s^{k}{l}") });
            let n = 2 * order;
            let kron = (0..n).map(|r| (0..n).map(|c| &x[r / order][c / order] * &shift[r % order][c % order]).collect()).collect();
            mats.push(kron);
        }
    }
    let h_mask = (0..labels.len()).map(|i| i < 3).collect();
    matrix_lie_algebra(&format!("sl2[s]/s^{order}"), labels, &mats, h_mask).expect("current algebra is closed")
}

/// Complement of [`sl2_truncated_current`] spanned by `s^k X + shifts[k-1] X`.
pub fn current_shifted_complement(g: &FinDGLA, shifts: &[Rational]) -> Result<FinDGLA, LieError> {
    let comp = (0..g.dim())
        .map(|i| match i.checked_sub(3).and_then(|j| shifts.get(j / 3)) {
            Some(c) if !c.is_zero() => std::iter::once((i % 3, c.clone())).collect(),
            _ => Vector::new(),
        })
        .collect();
    g.with_complement(comp)
}

/// Parse a structure-constants table:
///
/// ```text
/// name: <name>
/// basis: <label>[:<degree>] ...
/// sub: <label> ...
/// [<a>,<b>] = <coef>*<label> + ...
/// d <a> = <coef>*<label> + ...
/// ```
///
/// Unlisted brackets are zero; `[b,a]` is filled in by graded antisymmetry.
pub fn parse_dgla(text: &str) -> Result<FinDGLA, LieError> {
    let bad = |m: &str| LieError::Parse(m.to_string());
    let mut name = "g".to_string();
    let mut labels: Vec<String> = Vec::new();
    let mut degrees: Vec<i32> = Vec::new();
    let mut sub: Vec<String> = Vec::new();
    let mut brackets: Vec<(String, String, String)> = Vec::new();
    let mut diffs: Vec<(String, String)> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(v) = line.strip_prefix("name:") {
            name = v.trim().to_string();
        } else if let Some(v) = line.strip_prefix("basis:") {
            for tok in v.split_whitespace() {
                let (l, d) = match tok.split_once(':') {
                    Some((l, d)) => (l, d.parse::<i32>().map_err(|_| bad(tok))?),
                    None => (tok, 0),
                };
                labels.push(l.to_string());
                degrees.push(d);
            }
        } else if let Some(v) = line.strip_prefix("sub:") {
            sub = v.split_whitespace().map(str::to_string).collect();
        } else if let Some(v) = line.strip_prefix('[') {
            let (lhs, rhs) = v.split_once('=').ok_or_else(|| bad(line))?;
            let inner = lhs.trim().strip_suffix(']').ok_or_else(|| bad(line))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| bad(line))?;
            brackets.push((a.trim().to_string(), b.trim().to_string(), rhs.trim().to_string()));
        } else if let Some(v) = line.strip_prefix("d ") {
            let (lhs, rhs) = v.split_once('=').ok_or_else(|| bad(line))?;
            diffs.push((lhs.trim().to_string(), rhs.trim().to_string()));
        } else {
            return Err(bad(line));
        }
    }
    let pos = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| LieError::Parse(format!("unknown label {l}")));
    let parse_comb = |s: &str| -> Result<Vector, LieError> {
        let mut v = Vector::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() || term == "0" {
                continue;
            }
            let (c, l) = match term.split_once('*') {
                Some((c, l)) => (parse_rational(c.trim()).map_err(|_| bad(term))?, l.trim()),
                None => (int(1), term),
            };
            axpy(&mut v, &c, &std::iter::once((pos(l)?, int(1))).collect());
        }
        Ok(v)
    };
    let n = labels.len();
    let mut bracket = vec![vec![Vector::new(); n]; n];
    for (a, b, rhs) in &brackets {
        let (i, j) = (pos(a)?, pos(b)?);
        let v = parse_comb(rhs)?;
        let s = -crate::scalars::sign_pow(i64::from(degrees[i] * degrees[j]));
        bracket[j][i] = v.iter().map(|(k, c)| (*k, c * int(s))).collect();
        bracket[i][j] = v;
    }
    let mut differential = vec![Vector::new(); n];
    for (a, rhs) in &diffs {
        differential[pos(a)?] = parse_comb(rhs)?;
    }
    let mut h_mask = vec![false; n];
    for l in &sub {
        h_mask[pos(l)?] = true;
    }
    FinDGLA::new(&name, labels, degrees, bracket, differential, h_mask)
}
