//! Boundary map from reduced cyclic chains to cyclic chains of the ground
//! field, built from a unital splitting `j`.

use crate::chains::{
    weights, word_degree, Chain, DualNumbers, EtaBasis, GradedAlgebra, GroundField, Reduction, TensorAlgebra, WeylAlgebra, WithEta,
};
use crate::lincomb::LinComb;
use crate::scalars::{factorial, int, sign_pow, TULaurent};
use crate::weyl::Monomial;

/// An algebra with a linear functional `j` satisfying `j(1) = 1`.
pub trait Splitting: GradedAlgebra {
    fn j_basis(&self, b: &Self::Basis) -> TULaurent;

    fn j(&self, x: &LinComb<Self::Basis>) -> TULaurent {
        let mut out = TULaurent::zero(self.window());
        for (b, c) in x.iter() {
            out += &(&self.j_basis(b) * c);
        }
        out
    }
}

/// Coefficient of the monomial `1`.
impl Splitting for WeylAlgebra {
    fn j_basis(&self, b: &Monomial) -> TULaurent {
        if b.is_one() {
            TULaurent::one(self.window())
        } else {
            TULaurent::zero(self.window())
        }
    }
}

impl Splitting for DualNumbers {
    fn j_basis(&self, b: &EtaBasis) -> TULaurent {
        match b {
            EtaBasis::One => TULaurent::one(self.window()),
            EtaBasis::Eta => TULaurent::zero(self.window()),
        }
    }
}

/// `j(a eta^e) = j(a)` for `e = 0` and `0` otherwise.
impl<A: Splitting> Splitting for WithEta<A> {
    fn j_basis(&self, b: &Self::Basis) -> TULaurent {
        if b.1 {
            TULaurent::zero(self.window())
        } else {
            self.inner.j_basis(&b.0)
        }
    }
}

/// `j(a ⊗ b) = j(a) j(b)`.
impl<A: Splitting, B: Splitting> Splitting for TensorAlgebra<A, B> {
    fn j_basis(&self, b: &Self::Basis) -> TULaurent {
        &self.left.j_basis(&b.0) * &self.right.j_basis(&b.1)
    }
}

/// `rho(a) = j(delta a)`, `rho(a_1, a_2) = u (j(a_1) j(a_2) - j(a_1 a_2))`,
/// zero on longer blocks.
pub fn rho<A: Splitting>(alg: &A, block: &[A::Basis]) -> TULaurent {
    match block {
        [a] => alg.j(&alg.differential(a)),
        [a, b] => {
            let prod = alg.j(&alg.multiply(a, b));
            (&(&alg.j_basis(a) * &alg.j_basis(b)) - &prod).shift(0, 1)
        }
        _ => TULaurent::zero(alg.window()),
    }
}

/// Sum over decompositions of `w` into consecutive blocks of size 1 and 2 of
/// the product of `rho` values.
fn block_sum<A: Splitting>(alg: &A, w: &[A::Basis]) -> TULaurent {
    let n = w.len();
    let one = TULaurent::one(alg.window());
    // acc[k] = sum over decompositions of w[..k].
    let mut acc = vec![TULaurent::zero(alg.window()); n + 1];
    acc[0] = one;
    for k in 1..=n {
        let mut v = &acc[k - 1] * &rho(alg, &w[k - 1..k]);
        if k >= 2 {
            v += &(&acc[k - 2] * &rho(alg, &w[k - 2..k]));
        }
        acc[k] = v;
    }
    acc[n].clone()
}

/// Value of `br` on one word: zero unless the degree is `2n + 1`, then
/// `(1/(n+1)!) sum_i (-1)^{eps_i (E - eps_i)} (rho ⊗ ... ⊗ rho)(a_i ⊗ .. ⊗ a_{i-1})`.
pub fn br_word<A: Splitting>(alg: &A, w: &[A::Basis]) -> TULaurent {
    let deg = word_degree(alg, w);
    if deg < 1 || deg % 2 == 0 {
        return TULaurent::zero(alg.window());
    }
    let n = ((deg - 1) / 2) as u32;
    let e = weights(alg, w);
    let total: i64 = e.iter().sum();
    let mut out = TULaurent::zero(alg.window());
    let mut eps = 0;
    let mut rotated = Vec::with_capacity(w.len());
    for i in 0..w.len() {
        rotated.clear();
        rotated.extend_from_slice(&w[i..]);
        rotated.extend_from_slice(&w[..i]);
        let s = sign_pow(eps * (total - eps));
        out += &block_sum(alg, &rotated).scale(&int(s));
        eps += e[i];
    }
    out.scale(&factorial(n + 1).recip())
}

/// `br` on a chain, as a series in `t`, `u`; words of even degree give 0.
pub fn br<A: Splitting>(alg: &A, c: &Chain<A::Basis>) -> TULaurent {
    let mut out = TULaurent::zero(alg.window());
    for (w, coeff) in c.iter() {
        out += &(&br_word(alg, &w.0) * coeff);
    }
    out
}

/// `br` restricted to words of degree `2n + 1`.
pub fn br_degree<A: Splitting>(alg: &A, c: &Chain<A::Basis>, n: u32) -> TULaurent {
    let mut out = TULaurent::zero(alg.window());
    for (w, coeff) in c.iter() {
        if word_degree(alg, &w.0) == 2 * i64::from(n) + 1 {
            out += &(&br_word(alg, &w.0) * coeff);
        }
    }
    out
}

/// `eta^(n) = (n-1)! eta^{⊗n}` for `n >= 1`, over `k[eta]`.
pub fn eta_power(alg: &DualNumbers, n: usize) -> Chain<EtaBasis> {
    assert!(n >= 1, "eta_power needs n >= 1");
    let c = TULaurent::constant(alg.window(), factorial(n as u32 - 1));
    crate::chains::word_chain(alg, Reduction::Full, vec![EtaBasis::Eta; n], c)
}

/// `1^(n) = (n-1)! n! 1^{⊗(2n-1)}` for `n >= 1`, over the ground field.
pub fn one_power(k: &GroundField, n: usize) -> Chain<()> {
    assert!(n >= 1, "one_power needs n >= 1");
    let c = TULaurent::constant(k.window(), factorial(n as u32 - 1) * factorial(n as u32));
    crate::chains::word_chain(k, Reduction::None, vec![(); 2 * n - 1], c)
}

/// `Br(c) = sum_n br_{2n+1}(c) 1^(n+1)`, a chain over the ground field.
pub fn big_br<A: Splitting>(alg: &A, c: &Chain<A::Basis>) -> Chain<()> {
    let k = GroundField::new(alg.window());
    let mut out = Chain::zero(alg.window(), Reduction::None);
    let mut degrees: Vec<i64> = c.iter().map(|(w, _)| word_degree(alg, &w.0)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for deg in degrees {
        if deg < 1 || deg % 2 == 0 {
            continue;
        }
        let n = ((deg - 1) / 2) as u32;
        let v = br_degree(alg, c, n);
        if !v.is_zero() {
            out.add_assign(&one_power(&k, n as usize + 1).scale(&v));
        }
    }
    out
}

/// Scalar `s` with `Br(c) = s 1^(n+1)` when `c` has a single odd degree.
pub fn br_coefficient_of_generator(c: &Chain<()>) -> Option<(usize, TULaurent)> {
    let mut found = None;
    for (w, coeff) in c.iter() {
        if found.is_some() {
            return None;
        }
        let n = w.len().div_ceil(2);
        let norm = factorial(n as u32 - 1) * factorial(n as u32);
        found = Some((n, coeff.scale(&norm.recip())));
    }
    found
}
