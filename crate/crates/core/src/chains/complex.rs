//! Hochschild and cyclic operators on tensor words.
//!
//! Signs follow the shifted grading: entry `a_i` carries weight
//! `e_i = deg(a_i) + 1`, and `eps_i = e_0 + ... + e_{i-1}`.

use serde::Serialize;

use crate::conventions::CHAIN_DELTA_SIGN;
use crate::lincomb::LinComb;
use crate::scalars::{rat, sign_pow, TULaurent, TULaurentJson, Window};

use super::algebra::GradedAlgebra;

/// Which slots of a word are taken modulo scalar multiples of the unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reduction {
    /// No slot is reduced (used for chains over the ground field).
    None,
    /// Slots `1..=p` are reduced: the normalized Hochschild complex.
    Normalized,
    /// Every slot is reduced: the reduced cyclic complex.
    Full,
}

/// A tensor word `a_0 ⊗ ... ⊗ a_p` of basis elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word<B>(pub Vec<B>);

impl<B> Word<B> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Linear combination of words with a fixed slot reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<B: Ord + Clone> {
    pub reduction: Reduction,
    pub words: LinComb<Word<B>>,
}

impl<B: Ord + Clone> Chain<B> {
    pub fn zero(window: Window, reduction: Reduction) -> Self {
        Chain { reduction, words: LinComb::zero(window) }
    }

    pub fn window(&self) -> Window {
        self.words.window()
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_zero()
    }

    pub fn is_clipped(&self) -> bool {
        self.words.is_clipped()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word<B>, &TULaurent)> {
        self.words.iter()
    }

    pub fn coeff(&self, w: &Word<B>) -> TULaurent {
        self.words.coeff(w)
    }

    pub fn plus(&self, other: &Self) -> Self {
        Chain { reduction: self.reduction, words: self.words.plus(&other.words) }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Chain { reduction: self.reduction, words: self.words.minus(&other.words) }
    }

    pub fn scale(&self, c: &TULaurent) -> Self {
        Chain { reduction: self.reduction, words: self.words.scale(c) }
    }

    pub fn scale_q(&self, c: &crate::scalars::Rational) -> Self {
        Chain { reduction: self.reduction, words: self.words.scale_q(c) }
    }

    /// Multiply by `t^i u^j`; multiplication by `u` is the Bott operator.
    pub fn shift(&self, i: i32, j: i32) -> Self {
        Chain { reduction: self.reduction, words: self.words.shift(i, j) }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.words.add_assign(&other.words);
    }

    pub fn at_u_one(&self) -> Self {
        Chain { reduction: self.reduction, words: self.words.at_u_one() }
    }

    /// Keep only words of the given length.
    pub fn of_length(&self, n: usize) -> Self {
        Chain { reduction: self.reduction, words: self.words.filter(|w| w.len() == n) }
    }
}

/// Whether slot `i` is reduced under `r`.
fn slot_reduced(r: Reduction, i: usize) -> bool {
    match r {
        Reduction::None => false,
        Reduction::Normalized => i > 0,
        Reduction::Full => true,
    }
}

/// Add `c * word` to `out` unless a reduced slot holds the unit.
pub fn push_word<A: GradedAlgebra>(
    alg: &A,
    out: &mut LinComb<Word<A::Basis>>,
    reduction: Reduction,
    word: Vec<A::Basis>,
    c: &TULaurent,
) {
    if word.iter().enumerate().any(|(i, b)| slot_reduced(reduction, i) && alg.is_unit(b)) {
        return;
    }
    out.add_term(Word(word), c);
}

/// Chain from a single word with coefficient `c`.
pub fn word_chain<A: GradedAlgebra>(alg: &A, reduction: Reduction, word: Vec<A::Basis>, c: TULaurent) -> Chain<A::Basis> {
    let mut out = Chain::zero(alg.window(), reduction);
    push_word(alg, &mut out.words, reduction, word, &c);
    out
}

/// Multilinear expansion of a tensor of algebra elements into a chain.
pub fn tensor_chain<A: GradedAlgebra>(alg: &A, reduction: Reduction, entries: &[LinComb<A::Basis>]) -> Chain<A::Basis> {
    let w = alg.window();
    let mut acc: Vec<(Vec<A::Basis>, TULaurent)> = vec![(Vec::new(), TULaurent::one(w))];
    let mut clipped = false;
    for e in entries {
        clipped |= e.is_clipped();
        let mut next = Vec::new();
        for (word, c) in &acc {
            for (b, cb) in e.iter() {
                let mut v = word.clone();
                v.push(b.clone());
                next.push((v, c * cb));
            }
        }
        acc = next;
    }
    let mut out = Chain::zero(w, reduction);
    if clipped {
        out.words.mark_clipped();
    }
    for (word, c) in acc {
        push_word(alg, &mut out.words, reduction, word, &c);
    }
    out
}

/// Shifted weights `e_i = deg(a_i) + 1`.
pub fn weights<A: GradedAlgebra>(alg: &A, w: &[A::Basis]) -> Vec<i64> {
    w.iter().map(|b| i64::from(alg.degree(b)) + 1).collect()
}

/// Total degree `sum e_i - 1` of a word.
pub fn word_degree<A: GradedAlgebra>(alg: &A, w: &[A::Basis]) -> i64 {
    weights(alg, w).iter().sum::<i64>() - 1
}

/// Degree of a homogeneous chain, counting `u` with degree `-2`.
pub fn chain_degree<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Option<i64> {
    let mut deg = None;
    for (w, coeff) in c.iter() {
        let base = word_degree(alg, &w.0);
        for (&(_, j), _) in coeff.terms() {
            let total = base - 2 * i64::from(j);
            match deg {
                None => deg = Some(total),
                Some(d) if d != total => return None,
                _ => {}
            }
        }
    }
    deg
}

fn apply_linear<A, F>(alg: &A, c: &Chain<A::Basis>, reduction: Reduction, mut f: F) -> Chain<A::Basis>
where
    A: GradedAlgebra,
    F: FnMut(&[A::Basis], &mut Vec<(Vec<A::Basis>, TULaurent)>),
{
    let mut out = Chain::zero(alg.window(), reduction);
    if c.is_clipped() {
        out.words.mark_clipped();
    }
    let mut buf = Vec::new();
    for (w, coeff) in c.iter() {
        buf.clear();
        f(&w.0, &mut buf);
        for (word, k) in buf.drain(..) {
            push_word(alg, &mut out.words, reduction, word, &(&k * coeff));
        }
    }
    out
}

/// `tau` on a word: `(-1)^{e_p eps_p} a_p ⊗ a_0 ⊗ ... ⊗ a_{p-1}`.
pub fn tau_word<A: GradedAlgebra>(alg: &A, w: &[A::Basis]) -> (Vec<A::Basis>, i64) {
    let e = weights(alg, w);
    let p = w.len() - 1;
    let eps: i64 = e[..p].iter().sum();
    let mut out = Vec::with_capacity(w.len());
    out.push(w[p].clone());
    out.extend_from_slice(&w[..p]);
    (out, sign_pow(e[p] * eps))
}

/// Merge slots `i, i+1` with sign `(-1)^{eps_i + deg a_i}`.
fn merge_into<A: GradedAlgebra>(alg: &A, w: &[A::Basis], i: usize, sign: i64, out: &mut Vec<(Vec<A::Basis>, TULaurent)>) -> bool {
    let e = weights(alg, w);
    let eps: i64 = e[..i].iter().sum();
    let s = sign * sign_pow(eps + i64::from(alg.degree(&w[i])));
    let prod = alg.multiply(&w[i], &w[i + 1]);
    for (b, c) in prod.iter() {
        let mut v = Vec::with_capacity(w.len() - 1);
        v.extend_from_slice(&w[..i]);
        v.push(b.clone());
        v.extend_from_slice(&w[i + 2..]);
        out.push((v, c.scale(&rat(s, 1))));
    }
    prod.is_clipped()
}

fn mark(out: &mut Chain<impl Ord + Clone>, clipped: bool) {
    if clipped {
        out.words.mark_clipped();
    }
}

/// `b'`: the inner merges only.
pub fn b_prime<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let mut clipped = false;
    let mut out = apply_linear(alg, c, c.reduction, |w, buf| {
        for i in 0..w.len().saturating_sub(1) {
            clipped |= merge_into(alg, w, i, 1, buf);
        }
    });
    mark(&mut out, clipped);
    out
}

/// Hochschild boundary `b = b' + (merge of a_p a_0 after tau)`.
pub fn hochschild_b<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let mut clipped = false;
    let mut out = apply_linear(alg, c, c.reduction, |w, buf| {
        if w.len() < 2 {
            return;
        }
        for i in 0..w.len() - 1 {
            clipped |= merge_into(alg, w, i, 1, buf);
        }
        let (tw, s) = tau_word(alg, w);
        clipped |= merge_into(alg, &tw, 0, s, buf);
    });
    mark(&mut out, clipped);
    out
}

/// Cyclic operator `tau`.
pub fn tau<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let one = TULaurent::one(alg.window());
    apply_linear(alg, c, c.reduction, |w, buf| {
        let (tw, s) = tau_word(alg, w);
        buf.push((tw, one.scale(&rat(s, 1))));
    })
}

/// Norm operator `N = sum_{k=0}^{p} tau^k`.
pub fn n_op<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let one = TULaurent::one(alg.window());
    apply_linear(alg, c, c.reduction, |w, buf| {
        let mut cur = w.to_vec();
        let mut sign = 1;
        for _ in 0..w.len() {
            buf.push((cur.clone(), one.scale(&rat(sign, 1))));
            let (next, s) = tau_word(alg, &cur);
            cur = next;
            sign *= s;
        }
    })
}

/// Connes' operator
/// `B(a_0..a_p) = sum_i (-1)^{eps_i (eps_{p+1} - eps_i)} 1 ⊗ a_i ⊗ .. ⊗ a_{i-1}`.
pub fn connes_b<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let one = TULaurent::one(alg.window());
    apply_linear(alg, c, c.reduction, |w, buf| {
        let e = weights(alg, w);
        let total: i64 = e.iter().sum();
        let mut eps = 0;
        for i in 0..w.len() {
            let s = sign_pow(eps * (total - eps));
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(alg.unit());
            v.extend_from_slice(&w[i..]);
            v.extend_from_slice(&w[..i]);
            buf.push((v, one.scale(&rat(s, 1))));
            eps += e[i];
        }
    })
}

/// Chain-level extension of the algebra differential:
/// `sum_i CHAIN_DELTA_SIGN (-1)^{eps_i} a_0 ⊗ .. ⊗ delta(a_i) ⊗ .. ⊗ a_p`.
pub fn dga_delta<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    apply_linear(alg, c, c.reduction, |w, buf| {
        let e = weights(alg, w);
        let mut eps = 0;
        for i in 0..w.len() {
            let s = CHAIN_DELTA_SIGN * sign_pow(eps);
            for (b, k) in alg.differential(&w[i]).iter() {
                let mut v = w.to_vec();
                v[i] = b.clone();
                buf.push((v, k.scale(&rat(s, 1))));
            }
            eps += e[i];
        }
    })
}

/// `b + u B` on chains with `u` in the coefficients.
pub fn negative_cyclic_differential<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    hochschild_b(alg, c).plus(&connes_b(alg, c).shift(0, 1))
}

/// Canonical representative modulo the image of `id - tau`.
///
/// Each word is replaced by the smallest word in its rotation orbit, with
/// the sign picked up on the way; a word equal to minus one of its own
/// rotations represents zero.
pub fn lambda_normalize<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let one = TULaurent::one(alg.window());
    apply_linear(alg, c, c.reduction, |w, buf| {
        if let Some((rep, s)) = lambda_representative(alg, w) {
            buf.push((rep, one.scale(&rat(s, 1))));
        }
    })
}

/// Minimal rotation with sign, or `None` if the class is zero.
pub fn lambda_representative<A: GradedAlgebra>(alg: &A, w: &[A::Basis]) -> Option<(Vec<A::Basis>, i64)> {
    let mut best = w.to_vec();
    let mut best_sign = 1;
    let mut cur = w.to_vec();
    let mut sign = 1;
    for _ in 1..w.len() {
        let (next, s) = tau_word(alg, &cur);
        cur = next;
        sign *= s;
        if cur == w {
            if sign == -1 {
                return None;
            }
            break;
        }
        if cur < best {
            best = cur.clone();
            best_sign = sign;
        }
    }
    Some((best, best_sign))
}

/// JSON form `{algebra, degree, words:[{entries, coeff}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainJson {
    pub algebra: String,
    pub degree: Option<i64>,
    pub words: Vec<WordJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordJson {
    pub entries: Vec<String>,
    pub coeff: TULaurentJson,
}

pub fn chain_to_json<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> ChainJson {
    ChainJson {
        algebra: alg.tag(),
        degree: chain_degree(alg, c),
        words: c
            .iter()
            .map(|(w, k)| WordJson { entries: w.0.iter().map(|b| format!("{b:?}")).collect(), coeff: k.to_json() })
            .collect(),
    }
}
