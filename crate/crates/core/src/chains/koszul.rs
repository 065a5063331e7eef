//! Koszul complex of the Weyl algebra, formal de Rham forms, and the maps
//! between them and the Hochschild complex.

use serde::Serialize;

use crate::lincomb::LinComb;
use crate::scalars::{factorial, int, rat, sign_pow, Rational, TULaurent, Window};
use crate::weyl::{moyal_monomials, poisson_pairing, Monomial, WeylElement, WeylShape};

use super::algebra::{GradedAlgebra, SymbolAlgebra, WeylAlgebra};
use super::complex::{push_word, Chain, Reduction, Word};

/// Strictly increasing coordinate indices `i_1 < ... < i_q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Wedge(pub Vec<u8>);

impl Wedge {
    pub fn empty() -> Self {
        Wedge(Vec::new())
    }

    /// All indices `0..n`.
    pub fn full(n: usize) -> Self {
        Wedge((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sort arbitrary indices, returning the sign of the sort, or `None` on a
    /// repeated index.
    pub fn sorted(indices: &[u8]) -> Option<(Wedge, i64)> {
        let mut v = indices.to_vec();
        let mut sign = 1;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        Some((Wedge(v), sign))
    }

    /// Remove the entry at `pos`.
    pub fn without(&self, pos: usize) -> Wedge {
        let mut v = self.0.clone();
        v.remove(pos);
        Wedge(v)
    }
}

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // Insert n-1 at position k: sign changes by (-1)^{(n-1)-k}.
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push((q, s * sign_pow((n - 1 - k) as i64)));
        }
    }
    out
}

/// Element of `W ⊗ Λ V*`: monomial coefficient times a wedge of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulElement {
    pub shape: WeylShape,
    pub terms: LinComb<(Monomial, Wedge)>,
}

impl KoszulElement {
    pub fn zero(shape: WeylShape) -> Self {
        KoszulElement { shape, terms: LinComb::zero(shape.window) }
    }

    /// `f ⊗ z_{i_1} ∧ ... ∧ z_{i_q}` for unsorted indices.
    pub fn new(f: &WeylElement, indices: &[u8]) -> Self {
        let shape = f.shape();
        let mut out = Self::zero(shape);
        if let Some((wedge, s)) = Wedge::sorted(indices) {
            for (m, c) in f.terms().iter() {
                out.terms.add_term((m.clone(), wedge.clone()), &c.scale(&int(s)));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Self {
        KoszulElement { shape: self.shape, terms: self.terms.plus(&other.terms) }
    }
}

fn monomial_commutator(shape: WeylShape, a: &Monomial, b: &Monomial) -> LinComb<Monomial> {
    let mut out = LinComb::zero(shape.window);
    for (m, n, c) in moyal_monomials(a, b) {
        out.add_term(m, &TULaurent::monomial(shape.window, c, n, 0));
    }
    for (m, n, c) in moyal_monomials(b, a) {
        out.add_term(m, &TULaurent::monomial(shape.window, -c, n, 0));
    }
    out
}

/// `∂(f ⊗ v_1 ∧ ... ∧ v_q) = sum_i (-1)^{i+1} [f, v_i] ⊗ ... v̂_i ...`.
pub fn koszul_partial(k: &KoszulElement) -> KoszulElement {
    let shape = k.shape;
    let mut out = KoszulElement::zero(shape);
    for ((m, wedge), c) in k.terms.iter() {
        for (pos, &v) in wedge.0.iter().enumerate() {
            let s = sign_pow(pos as i64);
            let comm = monomial_commutator(shape, m, &Monomial::var(shape.d, v as usize));
            let rest = wedge.without(pos);
            for (m2, c2) in comm.iter() {
                out.terms.add_term((m2.clone(), rest.clone()), &(c * c2).scale(&int(s)));
            }
        }
    }
    out
}

/// `f ⊗ v_1 ∧ ... ∧ v_q ↦ sum_σ sgn(σ) f ⊗ v_σ(1) ⊗ ... ⊗ v_σ(q)`.
pub fn koszul_to_hochschild(k: &KoszulElement) -> Chain<Monomial> {
    let alg = WeylAlgebra::new(k.shape);
    let mut out = Chain::zero(k.shape.window, Reduction::Normalized);
    for ((m, wedge), c) in k.terms.iter() {
        for (perm, s) in permutations(wedge.len()) {
            let mut word = Vec::with_capacity(wedge.len() + 1);
            word.push(m.clone());
            word.extend(perm.iter().map(|&i| Monomial::var(k.shape.d, wedge.0[i] as usize)));
            push_word(&alg, &mut out.words, Reduction::Normalized, word, &c.scale(&int(s)));
        }
    }
    out
}

/// Projection of normalized Hochschild chains onto the Koszul complex:
/// `a_0 ⊗ v_1 ⊗ ... ⊗ v_q ↦ (1/q!) a_0 ⊗ v_1 ∧ ... ∧ v_q` when every
/// `v_i` is a coordinate, and zero otherwise.
pub fn hochschild_to_koszul(shape: WeylShape, c: &Chain<Monomial>) -> KoszulElement {
    let mut out = KoszulElement::zero(shape);
    for (w, coeff) in c.iter() {
        let idx: Option<Vec<u8>> = w.0[1..].iter().map(|m| m.as_var().map(|i| i as u8)).collect();
        let Some(idx) = idx else { continue };
        let Some((wedge, s)) = Wedge::sorted(&idx) else { continue };
        let q = idx.len() as u32;
        let factor = int(s) / factorial(q);
        out.terms.add_term((w.0[0].clone(), wedge), &coeff.scale(&factor));
    }
    out
}

/// Form `sum f_{m,T} z^m dz_T` on the formal polydisk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDeRham {
    pub d: usize,
    pub terms: LinComb<(Monomial, Wedge)>,
}

impl FormalDeRham {
    pub fn zero(d: usize, window: Window) -> Self {
        FormalDeRham { d, terms: LinComb::zero(window) }
    }

    /// The function `1` in degree 0.
    pub fn one(d: usize, window: Window) -> Self {
        Self::function(d, Monomial::one(d), TULaurent::one(window))
    }

    pub fn function(d: usize, m: Monomial, c: TULaurent) -> Self {
        let mut out = Self::zero(d, c.window());
        out.terms.add_term((m, Wedge::empty()), &c);
        out
    }

    /// `c z^m dz_{i_1} ∧ ... ∧ dz_{i_k}` for unsorted indices.
    pub fn term(d: usize, m: Monomial, indices: &[u8], c: TULaurent) -> Self {
        let mut out = Self::zero(d, c.window());
        if let Some((w, s)) = Wedge::sorted(indices) {
            out.terms.add_term((m, w), &c.scale(&int(s)));
        }
        out
    }

    pub fn window(&self) -> Window {
        self.terms.window()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Self {
        FormalDeRham { d: self.d, terms: self.terms.plus(&other.terms) }
    }

    pub fn minus(&self, other: &Self) -> Self {
        FormalDeRham { d: self.d, terms: self.terms.minus(&other.terms) }
    }

    pub fn shift(&self, i: i32, j: i32) -> Self {
        FormalDeRham { d: self.d, terms: self.terms.shift(i, j) }
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        FormalDeRham { d: self.d, terms: self.terms.scale_q(c) }
    }

    /// Degree-`i` component.
    pub fn component(&self, i: usize) -> Self {
        FormalDeRham { d: self.d, terms: self.terms.filter(|(_, w)| w.len() == i) }
    }

    /// Wedge `dz_idx ∧ self`.
    fn dz_wedge(&self, idx: u8) -> Self {
        let mut out = Self::zero(self.d, self.window());
        for ((m, w), c) in self.terms.iter() {
            let mut v = vec![idx];
            v.extend_from_slice(&w.0);
            if let Some((nw, s)) = Wedge::sorted(&v) {
                out.terms.add_term((m.clone(), nw), &c.scale(&int(s)));
            }
        }
        out
    }

    /// Exterior product `self ∧ other` with commutative coefficients.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.d, self.window());
        for ((m1, w1), c1) in self.terms.iter() {
            for ((m2, w2), c2) in other.terms.iter() {
                let mut v = w1.0.clone();
                v.extend_from_slice(&w2.0);
                if let Some((nw, s)) = Wedge::sorted(&v) {
                    out.terms.add_term((m1.times(m2), nw), &(c1 * c2).scale(&int(s)));
                }
            }
        }
        out
    }

    /// Partial derivative of the coefficients along coordinate `b`.
    fn partial(&self, b: usize) -> Self {
        let mut out = Self::zero(self.d, self.window());
        for ((m, w), c) in self.terms.iter() {
            let e = m.0[b];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[b] -= 1;
            out.terms.add_term((m2, w.clone()), &c.scale(&int(i64::from(e))));
        }
        out
    }

    /// Interior product with `∂/∂z_b`.
    fn contract(&self, b: u8) -> Self {
        let mut out = Self::zero(self.d, self.window());
        for ((m, w), c) in self.terms.iter() {
            if let Some(pos) = w.0.iter().position(|&i| i == b) {
                out.terms.add_term((m.clone(), w.without(pos)), &c.scale(&int(sign_pow(pos as i64))));
            }
        }
        out
    }

    /// Interior product with the constant field `sum_b coeffs[b] ∂/∂z_b`.
    pub fn interior(&self, coeffs: &[Rational]) -> Self {
        let mut out = Self::zero(self.d, self.window());
        for (b, c) in coeffs.iter().enumerate() {
            if !num_traits::Zero::is_zero(c) {
                out.terms.add_scaled_q(&self.contract(b as u8).terms, c);
            }
        }
        out
    }
}

/// Exterior derivative.
pub fn d_dr(w: &FormalDeRham) -> FormalDeRham {
    let mut out = FormalDeRham::zero(w.d, w.window());
    for b in 0..2 * w.d {
        out = out.plus(&w.partial(b).dz_wedge(b as u8));
    }
    out
}

/// `t d_DR`.
pub fn t_d_dr(w: &FormalDeRham) -> FormalDeRham {
    d_dr(w).shift(1, 0)
}

/// `u d_DR`.
pub fn u_d_dr(w: &FormalDeRham) -> FormalDeRham {
    d_dr(w).shift(0, 1)
}

fn graded_scale(w: &FormalDeRham, t_or_u: bool, sign: i32) -> FormalDeRham {
    let mut out = FormalDeRham::zero(w.d, w.window());
    for ((m, wedge), c) in w.terms.iter() {
        let e = sign * (wedge.len() as i32 - w.d as i32);
        let c2 = if t_or_u { c.shift(e, 0) } else { c.shift(0, e) };
        out.terms.add_term((m.clone(), wedge.clone()), &c2);
    }
    out
}

/// Multiply the degree-`i` part by `t^{i-d}`.
pub fn op_i(w: &FormalDeRham) -> FormalDeRham {
    graded_scale(w, true, 1)
}

/// Multiply the degree-`i` part by `u^{i-d}`.
pub fn op_j(w: &FormalDeRham) -> FormalDeRham {
    graded_scale(w, false, 1)
}

/// Inverse of [`op_i`].
pub fn op_i_inv(w: &FormalDeRham) -> FormalDeRham {
    graded_scale(w, true, -1)
}

/// Inverse of [`op_j`].
pub fn op_j_inv(w: &FormalDeRham) -> FormalDeRham {
    graded_scale(w, false, -1)
}

/// Hamiltonian field of the coordinate `z_a`: the constant field `X` with
/// `X(f) = (1/t)[f, z_a]`.
pub fn coordinate_field(d: usize, a: usize) -> Vec<Rational> {
    (0..2 * d).map(|b| int(poisson_pairing(d, b, a))).collect()
}

/// `omega^d` for `omega = sum_i dx_i ∧ dxi_i`.
pub fn symplectic_volume(d: usize, window: Window) -> FormalDeRham {
    let mut omega = FormalDeRham::zero(d, window);
    for i in 0..d {
        omega = omega.plus(&FormalDeRham::term(d, Monomial::one(d), &[i as u8, (d + i) as u8], TULaurent::one(window)));
    }
    let mut vol = FormalDeRham::one(d, window);
    for _ in 0..d {
        vol = vol.wedge(&omega);
    }
    vol
}

/// Constant making the full wedge `x_1 ∧ .. ∧ x_d ∧ xi_1 ∧ .. ∧ xi_d` map to 1.
fn derham_normalization(d: usize, window: Window) -> Rational {
    let mut form = symplectic_volume(d, window);
    for a in (0..2 * d).rev() {
        form = form.interior(&coordinate_field(d, a));
    }
    let c = form.terms.coeff(&(Monomial::one(d), Wedge::empty()));
    c.as_constant().expect("volume contraction is a constant").recip()
}

/// `f ⊗ v_1 ∧ ... ∧ v_q ↦ n_d f ι_{X_1} ... ι_{X_q} (omega^d)`.
pub fn koszul_to_derham(k: &KoszulElement) -> FormalDeRham {
    let d = k.shape.d;
    let w = k.shape.window;
    let vol = symplectic_volume(d, w);
    let norm = derham_normalization(d, w);
    let mut out = FormalDeRham::zero(d, w);
    for ((m, wedge), c) in k.terms.iter() {
        let mut form = vol.clone();
        for &a in wedge.0.iter().rev() {
            form = form.interior(&coordinate_field(d, a as usize));
        }
        for ((m2, w2), c2) in form.terms.iter() {
            out.terms.add_term((m.times(m2), w2.clone()), &(c * c2).scale(&norm));
        }
    }
    out
}

/// Degree-zero trace density: project to the Koszul complex, map to forms,
/// then pass from `(Ω, t d)` to `(Ω, d)` by the inverse of [`op_i`].
pub fn trace_density_0(shape: WeylShape, c: &Chain<Monomial>) -> FormalDeRham {
    op_i_inv(&koszul_to_derham(&hochschild_to_koszul(shape, c)))
}

/// Periodic version: additionally pass from `(Ω, u d)` to `(Ω, d)`.
pub fn periodic_trace_density(shape: WeylShape, c: &Chain<Monomial>) -> FormalDeRham {
    op_j_inv(&trace_density_0(shape, c))
}

/// `f_0 ⊗ ... ⊗ f_p ↦ (1/p!) f_0 df_1 ∧ ... ∧ df_p`.
pub fn hkr(alg: &SymbolAlgebra, c: &Chain<Monomial>) -> FormalDeRham {
    let d = alg.shape.d;
    let w = alg.window();
    let mut out = FormalDeRham::zero(d, w);
    for (word, coeff) in c.iter() {
        let mut form = FormalDeRham::function(d, word.0[0].clone(), coeff.clone());
        for m in &word.0[1..] {
            form = form.wedge(&d_dr(&FormalDeRham::function(d, m.clone(), TULaurent::one(w))));
        }
        let p = (word.len() - 1) as u32;
        out = out.plus(&form.scale_q(&factorial(p).recip()));
    }
    out
}

/// Derivation `(1/t) ad(h)` applied to every slot of a chain over `W`.
pub fn chain_lie_derivative(alg: &WeylAlgebra, h: &WeylElement, c: &Chain<Monomial>) -> Chain<Monomial> {
    let shape = alg.shape;
    let mut out = Chain::zero(shape.window, c.reduction);
    for (word, coeff) in c.iter() {
        for i in 0..word.len() {
            for (hm, hc) in h.terms().iter() {
                let comm = monomial_commutator(shape, hm, &word.0[i]).shift(-1, 0);
                for (m, k) in comm.iter() {
                    let mut v = word.0.clone();
                    v[i] = m.clone();
                    push_word(alg, &mut out.words, c.reduction, v, &(&(k * hc) * coeff));
                }
            }
        }
    }
    out
}

/// Lie derivative along the linear field `D = (1/t) ad(h)`, `h` quadratic.
pub fn form_lie_derivative(h: &WeylElement, w: &FormalDeRham) -> FormalDeRham {
    let shape = h.shape();
    let d = shape.d;
    let apply = |m: &Monomial| -> LinComb<Monomial> {
        let mut out = LinComb::zero(shape.window);
        for (hm, hc) in h.terms().iter() {
            out.add_scaled(&monomial_commutator(shape, hm, m).shift(-1, 0), hc);
        }
        out
    };
    let mut out = FormalDeRham::zero(d, w.window());
    for ((m, wedge), c) in w.terms.iter() {
        for (m2, k) in apply(m).iter() {
            out.terms.add_term((m2.clone(), wedge.clone()), &(k * c));
        }
        for (pos, &idx) in wedge.0.iter().enumerate() {
            for (m2, k) in apply(&Monomial::var(d, idx as usize)).iter() {
                let Some(b) = m2.as_var() else { continue };
                let mut v = wedge.0.clone();
                v[pos] = b as u8;
                if let Some((nw, s)) = Wedge::sorted(&v) {
                    out.terms.add_term((m.clone(), nw), &(k * c).scale(&int(s)));
                }
            }
        }
    }
    out
}

/// Same derivation on the Koszul complex: on the coefficient and on each
/// wedge factor.
pub fn koszul_lie_derivative(h: &WeylElement, k: &KoszulElement) -> KoszulElement {
    let shape = k.shape;
    let d = shape.d;
    let apply = |m: &Monomial| -> LinComb<Monomial> {
        let mut out = LinComb::zero(shape.window);
        for (hm, hc) in h.terms().iter() {
            out.add_scaled(&monomial_commutator(shape, hm, m).shift(-1, 0), hc);
        }
        out
    };
    let mut out = KoszulElement::zero(shape);
    for ((m, wedge), c) in k.terms.iter() {
        for (m2, kk) in apply(m).iter() {
            out.terms.add_term((m2.clone(), wedge.clone()), &(kk * c));
        }
        for (pos, &idx) in wedge.0.iter().enumerate() {
            for (m2, kk) in apply(&Monomial::var(d, idx as usize)).iter() {
                let Some(b) = m2.as_var() else { continue };
                let mut v = wedge.0.clone();
                v[pos] = b as u8;
                if let Some((nw, s)) = Wedge::sorted(&v) {
                    out.terms.add_term((m.clone(), nw), &(kk * c).scale(&int(s)));
                }
            }
        }
    }
    out
}

/// The cycle `Alt(1 ⊗ z_{i_1} ⊗ ... ⊗ z_{i_n})` for the given coordinate order.
pub fn alt_cycle(shape: WeylShape, order: &[usize]) -> Chain<Monomial> {
    let alg = WeylAlgebra::new(shape);
    let mut out = Chain::zero(shape.window, Reduction::Normalized);
    for (perm, s) in permutations(order.len()) {
        let mut word = vec![Monomial::one(shape.d)];
        word.extend(perm.iter().map(|&i| Monomial::var(shape.d, order[i])));
        push_word(&alg, &mut out.words, Reduction::Normalized, word, &TULaurent::constant(shape.window, rat(s, 1)));
    }
    out
}

/// `Φ = Alt(1 ⊗ x_1 ⊗ ... ⊗ x_d ⊗ xi_1 ⊗ ... ⊗ xi_d)`.
pub fn phi_cycle(shape: WeylShape) -> Chain<Monomial> {
    alt_cycle(shape, &(0..2 * shape.d).collect::<Vec<_>>())
}

/// Word with entries given as monomials (helper for tests and the CLI).
pub fn monomial_word(entries: &[Monomial]) -> Word<Monomial> {
    Word(entries.to_vec())
}
