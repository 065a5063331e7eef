//! Free graded-commutative algebras with a graded coefficient space.
//!
//! An element is a finite sum of `g_1 ... g_k ⊗ m` with generators in
//! nondecreasing order (odd generators at most once) and `m` a basis vector
//! of the coefficient space.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalars::{int, sign_pow, Rational};

/// Sorted multiset of generator indices.
pub type Gens = Vec<u16>;

/// `(generators, coefficient index)`.
pub type Key = (Gens, u32);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GcaElement {
    pub terms: BTreeMap<Key, Rational>,
}

impl GcaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 ⊗ m_c`.
    pub fn coefficient(c: u32) -> Self {
        Self::term(Vec::new(), c, int(1))
    }

    /// Scalar `1`.
    pub fn one() -> Self {
        Self::coefficient(0)
    }

    pub fn term(gens: Gens, c: u32, q: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(gens, c, q);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, gens: Gens, c: u32, q: Rational) {
        if q.is_zero() {
            return;
        }
        let key = (gens, c);
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, q: &Rational) {
        for ((g, c), v) in &other.terms {
            self.add_term(g.clone(), *c, v * q);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &int(1));
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, q);
        out
    }

    /// Terms whose generator multiset has exactly `k` entries.
    pub fn arity_part(&self, k: usize) -> Self {
        let terms = self.terms.iter().filter(|((g, _), _)| g.len() == k).map(|(a, b)| (a.clone(), b.clone())).collect();
        GcaElement { terms }
    }

    /// Scalar coefficient of `1 ⊗ m_c`.
    pub fn constant(&self, c: u32) -> Rational {
        self.terms.get(&(Vec::new(), c)).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Generator degrees of a free graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gca {
    pub degrees: Vec<i32>,
}

impl Gca {
    pub fn new(degrees: Vec<i32>) -> Self {
        Gca { degrees }
    }

    pub fn gen_degree(&self, g: u16) -> i32 {
        self.degrees[g as usize]
    }

    pub fn gens_degree(&self, g: &[u16]) -> i32 {
        g.iter().map(|&x| self.gen_degree(x)).sum()
    }

    /// Total degree of a homogeneous element (`None` if empty or mixed).
    pub fn degree(&self, x: &GcaElement, coeff_degrees: &[i32]) -> Option<i32> {
        let mut it = x.terms.keys().map(|(g, c)| self.gens_degree(g) + coeff_degrees[*c as usize]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Sort a generator word into normal form with its Koszul sign; `None`
    /// when an odd generator repeats.
    pub fn normalize(&self, word: &[u16]) -> Option<(Gens, i64)> {
        let mut w = word.to_vec();
        let mut sign = 1;
        for i in 1..w.len() {
            let mut j = i;
            while j > 0 && w[j - 1] > w[j] {
                if self.gen_degree(w[j - 1]) % 2 != 0 && self.gen_degree(w[j]) % 2 != 0 {
                    sign = -sign;
                }
                w.swap(j - 1, j);
                j -= 1;
            }
        }
        for pair in w.windows(2) {
            if pair[0] == pair[1] && self.gen_degree(pair[0]) % 2 != 0 {
                return None;
            }
        }
        Some((w, sign))
    }

    /// The monomial `g_1 ... g_k ⊗ m_c` from an unsorted word.
    pub fn monomial(&self, word: &[u16], c: u32) -> GcaElement {
        match self.normalize(word) {
            Some((g, s)) => GcaElement::term(g, c, int(s)),
            None => GcaElement::zero(),
        }
    }

    /// Generator `g` as a scalar element.
    pub fn generator(&self, g: u16) -> GcaElement {
        GcaElement::term(vec![g], 0, int(1))
    }

    /// `(α ⊗ a)(β ⊗ b) = (-1)^{|a||β|} αβ ⊗ combine(a, b)`.
    pub fn product<F>(&self, x: &GcaElement, x_coeff_deg: &[i32], y: &GcaElement, combine: F) -> GcaElement
    where
        F: Fn(u32, u32) -> Vec<(u32, Rational)>,
    {
        let mut out = GcaElement::zero();
        for ((ga, ca), qa) in &x.terms {
            for ((gb, cb), qb) in &y.terms {
                let mut word = ga.clone();
                word.extend_from_slice(gb);
                let Some((g, s)) = self.normalize(&word) else { continue };
                let s = s * sign_pow(i64::from(x_coeff_deg[*ca as usize] * self.gens_degree(gb)));
                let q = qa * qb * int(s);
                for (c, k) in combine(*ca, *cb) {
                    out.add_term(g.clone(), c, &q * k);
                }
            }
        }
        out
    }

    /// Product of a scalar element with any element.
    pub fn scalar_mul(&self, scalar: &GcaElement, y: &GcaElement) -> GcaElement {
        self.product(scalar, &[0], y, |_, b| vec![(b, int(1))])
    }

    /// Graded derivation of degree `deg`, given on generators (scalar values)
    /// and on coefficient basis vectors.
    pub fn derivation<G, C>(&self, x: &GcaElement, deg: i32, on_gen: G, on_coeff: C) -> GcaElement
    where
        G: Fn(u16) -> GcaElement,
        C: Fn(u32) -> GcaElement,
    {
        let mut out = GcaElement::zero();
        for ((g, c), q) in &x.terms {
            let mut passed = 0;
            for i in 0..g.len() {
                let s = sign_pow(i64::from(deg * passed));
                let image = on_gen(g[i]);
                for ((gd, cd), qd) in &image.terms {
                    debug_assert_eq!(*cd, 0, "generator images are scalar");
                    let mut word = g[..i].to_vec();
                    word.extend_from_slice(gd);
                    word.extend_from_slice(&g[i + 1..]);
                    if let Some((w, s2)) = self.normalize(&word) {
                        out.add_term(w, *c, q * qd * int(s * s2));
                    }
                }
                passed += self.gen_degree(g[i]);
            }
            let s = sign_pow(i64::from(deg * passed));
            let image = on_coeff(*c);
            for ((gd, cd), qd) in &image.terms {
                let mut word = g.clone();
                word.extend_from_slice(gd);
                if let Some((w, s2)) = self.normalize(&word) {
                    out.add_term(w, *cd, q * qd * int(s * s2));
                }
            }
        }
        out
    }

    /// All normal-form generator words of total degree `deg` built from the
    /// positive-degree generators in `allowed`, with at most `max_len` factors.
    pub fn words_of_degree(&self, allowed: &[u16], deg: i32, max_len: usize) -> Vec<Gens> {
        let mut out = Vec::new();
        let mut stack: Vec<(Gens, usize, i32)> = vec![(Vec::new(), 0, 0)];
        while let Some((w, start, d)) = stack.pop() {
            if d == deg {
                out.push(w.clone());
            }
            if w.len() == max_len {
                continue;
            }
            for (pos, &g) in allowed.iter().enumerate().skip(start) {
                let gd = self.gen_degree(g);
                if gd <= 0 || d + gd > deg {
                    continue;
                }
                let odd = gd % 2 != 0;
                let mut v = w.clone();
                v.push(g);
                let next = if odd { pos + 1 } else { pos };
                stack.push((v, next, d + gd));
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Graded commutator `[P, Q] = PQ - (-1)^{|P||Q|} QP` of two operators.
pub fn graded_commutator<P, Q>(p: P, dp: i32, q: Q, dq: i32, x: &GcaElement) -> GcaElement
where
    P: Fn(&GcaElement) -> GcaElement,
    Q: Fn(&GcaElement) -> GcaElement,
{
    let a = p(&q(x));
    let b = q(&p(x));
    a.minus(&b.scale(&int(sign_pow(i64::from(dp * dq)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_generators_anticommute() {
        let g = Gca::new(vec![1, 1, 2]);
        assert_eq!(g.monomial(&[1, 0], 0), g.monomial(&[0, 1], 0).scale(&int(-1)));
        assert!(g.monomial(&[0, 0], 0).is_zero());
        assert_eq!(g.monomial(&[2, 0, 2], 0), g.monomial(&[0, 2, 2], 0));
    }

    #[test]
    fn derivation_obeys_leibniz() {
        let g = Gca::new(vec![1, 1, 2]);
        // D(g0) = g2, D(g1) = g0 g1, D(g2) = 0; degree +1.
        let d = |x: &GcaElement| {
            g.derivation(x, 1, |k| match k {
                0 => g.generator(2),
                1 => g.monomial(&[0, 1], 0),
                _ => GcaElement::zero(),
            }, |_| GcaElement::zero())
        };
        let a = g.generator(0);
        let b = g.monomial(&[1, 2], 0);
        let ab = g.scalar_mul(&a, &b);
        let lhs = d(&ab);
        let rhs = g.scalar_mul(&d(&a), &b).minus(&g.scalar_mul(&a, &d(&b)));
        assert_eq!(lhs, rhs);
    }
}
