//! External shuffle product, the explicit pairing components, and the
//! insertion operator.

use thiserror::Error;

use crate::lincomb::LinComb;
use crate::scalars::{factorial, int, rat, sign_pow, TULaurent};

use super::algebra::{GradedAlgebra, TensorAlgebra};
use super::complex::{push_word, tau, weights, Chain, Reduction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("input chain is not fixed by the cyclic operator")]
    NotCyclicInvariant,
}

/// Shuffle product of two words into `A ⊗ B`, entries `a ↦ a ⊗ 1`,
/// `b ↦ 1 ⊗ b`, with Koszul signs in the shifted weights.
pub fn shuffle_words<A: GradedAlgebra, B: GradedAlgebra>(
    alg: &TensorAlgebra<A, B>,
    x: &Chain<A::Basis>,
    y: &Chain<B::Basis>,
) -> Chain<(A::Basis, B::Basis)> {
    let w = alg.window();
    let mut out = Chain::zero(w, Reduction::Full);
    if x.is_clipped() || y.is_clipped() {
        out.words.mark_clipped();
    }
    let ua = alg.left.unit();
    let ub = alg.right.unit();
    for (wx, cx) in x.iter() {
        let ex = weights(&alg.left, &wx.0);
        for (wy, cy) in y.iter() {
            let ey = weights(&alg.right, &wy.0);
            let coeff = cx * cy;
            let (p, q) = (wx.len(), wy.len());
            // Enumerate positions of the x-entries as increasing index sets.
            let mut stack: Vec<(Vec<(A::Basis, B::Basis)>, usize, usize, i64)> = vec![(Vec::with_capacity(p + q), 0, 0, 1)];
            while let Some((word, i, j, s)) = stack.pop() {
                if i == p && j == q {
                    push_word(alg, &mut out.words, Reduction::Full, word, &coeff.scale(&int(s)));
                    continue;
                }
                if i < p {
                    // x_i lands after y_0..y_{j-1}, which started to its right.
                    let passed: i64 = ey[..j].iter().sum();
                    let mut v = word.clone();
                    v.push((wx.0[i].clone(), ub.clone()));
                    stack.push((v, i + 1, j, s * sign_pow(ex[i] * passed)));
                }
                if j < q {
                    let mut v = word;
                    v.push((ua.clone(), wy.0[j].clone()));
                    stack.push((v, i, j + 1, s));
                }
            }
        }
    }
    out
}

/// Shuffle product on the `Ker(id - tau)` model of reduced cyclic chains.
pub fn shuffle_external<A: GradedAlgebra, B: GradedAlgebra>(
    alg: &TensorAlgebra<A, B>,
    x: &Chain<A::Basis>,
    y: &Chain<B::Basis>,
) -> Result<Chain<(A::Basis, B::Basis)>, ChainError> {
    if tau(&alg.left, x) != *x || tau(&alg.right, y) != *y {
        return Err(ChainError::NotCyclicInvariant);
    }
    Ok(shuffle_words(alg, x, y))
}

/// `[x, a]` in the algebra.
fn commutator<A: GradedAlgebra>(alg: &A, x: &LinComb<A::Basis>, a: &A::Basis) -> LinComb<A::Basis> {
    let ea = LinComb::basis(alg.window(), a.clone());
    alg.mul(x, &ea).minus(&alg.mul(&ea, x))
}

/// Leading pairing component
/// `(1/p!) sum_{i=1}^p (-1)^{i(p-1)} a_0 [x_{i+1}, a_1] ... [x_i, a_p] ⊗ a_{p+1} ⊗ ... ⊗ a_N`
/// for an ungraded algebra. Words with `N < p` contribute zero.
pub fn pairing_lead<A: GradedAlgebra>(alg: &A, x: &[LinComb<A::Basis>], a: &Chain<A::Basis>) -> Chain<A::Basis> {
    let w = alg.window();
    let p = x.len();
    let mut out = Chain::zero(w, Reduction::Normalized);
    let scale = factorial(p as u32).recip();
    for (word, coeff) in a.iter() {
        if word.len() < p + 1 {
            continue;
        }
        for i in 1..=p {
            let s = sign_pow((i * (p.saturating_sub(1))) as i64);
            let mut head = LinComb::basis(w, word.0[0].clone());
            for k in 1..=p {
                let xi = &x[(i + k - 1) % p];
                head = alg.mul(&head, &commutator(alg, xi, &word.0[k]));
            }
            let tail = &word.0[p + 1..];
            let c = coeff.scale(&(int(s) * &scale));
            for (h, hc) in head.iter() {
                let mut v = vec![h.clone()];
                v.extend_from_slice(tail);
                push_word(alg, &mut out.words, Reduction::Normalized, v, &(hc * &c));
            }
        }
    }
    out
}

/// `(x_1 ⊗ ... ⊗ x_p) • 1 = sum_{i=1}^p (-1)^{i(p-1)} 1 ⊗ x_{i+1} ⊗ ... ⊗ x_i`;
/// the empty word gives `1`.
pub fn pairing_on_unit<A: GradedAlgebra>(alg: &A, x: &[A::Basis]) -> Chain<A::Basis> {
    let w = alg.window();
    let p = x.len();
    let mut out = Chain::zero(w, Reduction::Normalized);
    if p == 0 {
        push_word(alg, &mut out.words, Reduction::Normalized, vec![alg.unit()], &TULaurent::one(w));
        return out;
    }
    for i in 1..=p {
        let s = sign_pow((i * (p - 1)) as i64);
        let mut v = vec![alg.unit()];
        v.extend((0..p).map(|k| x[(i + k) % p].clone()));
        push_word(alg, &mut out.words, Reduction::Normalized, v, &TULaurent::constant(w, rat(s, 1)));
    }
    out
}

/// Linear extension of [`pairing_on_unit`] to chains.
pub fn pairing_on_unit_chain<A: GradedAlgebra>(alg: &A, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let mut out = Chain::zero(alg.window(), Reduction::Normalized);
    for (word, coeff) in c.iter() {
        out.add_assign(&pairing_on_unit(alg, &word.0).scale(coeff));
    }
    out
}

/// Insertion operator
/// `ι_Φ(a_0 ⊗ ... ⊗ a_p) = (u^{-1}/t) sum_{i=0}^p (-1)^{(e_0+...+e_i) e_Φ} a_0 ⊗ .. ⊗ a_i ⊗ Φ ⊗ .. ⊗ a_p`
/// with `e = deg + 1`, applied termwise to the basis expansion of `Φ`.
pub fn iota_phi<A: GradedAlgebra>(alg: &A, phi: &LinComb<A::Basis>, c: &Chain<A::Basis>) -> Chain<A::Basis> {
    let mut out = Chain::zero(alg.window(), c.reduction);
    for (word, coeff) in c.iter() {
        let e = weights(alg, &word.0);
        for (f, fc) in phi.iter() {
            let ef = i64::from(alg.degree(f)) + 1;
            let mut eps = 0;
            for i in 0..word.len() {
                eps += e[i];
                let mut v = word.0[..=i].to_vec();
                v.push(f.clone());
                v.extend_from_slice(&word.0[i + 1..]);
                let k = (fc * coeff).scale(&int(sign_pow(eps * ef))).shift(-1, -1);
                push_word(alg, &mut out.words, c.reduction, v, &k);
            }
        }
    }
    out
}
