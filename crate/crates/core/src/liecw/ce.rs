//! Cochains of a DGLA with values in a module, the Chevalley-Eilenberg
//! differential and the contraction / Lie derivative operators.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::Zero;

use crate::scalars::{int, sign_pow, Rational};

use super::gca::{Gca, GcaElement, Gens};
use super::{axpy, FinDGLA, LieError, Vector};

/// A DG module over a [`FinDGLA`], optionally homotopically constant
/// (equipped with contractions `ι_X` of degree `|X| - 1`).
pub trait GModule {
    type Elem: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, m: &Self::Elem) -> bool;
    fn add_scaled(&self, acc: &mut Self::Elem, m: &Self::Elem, q: &Rational);
    /// Decomposition into homogeneous components `(degree, part)`.
    fn homogeneous_parts(&self, m: &Self::Elem) -> Vec<(i32, Self::Elem)>;
    fn differential(&self, m: &Self::Elem) -> Self::Elem;
    /// Action of the basis vector `x` of the Lie algebra.
    fn action(&self, x: usize, m: &Self::Elem) -> Self::Elem;
    /// Contraction by the basis vector `x`; `None` if the module has none.
    fn contraction(&self, x: usize, m: &Self::Elem) -> Option<Self::Elem>;
}

/// Module with a finite homogeneous basis, given by matrices (columns are
/// images of basis vectors).
#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    action: Vec<Vec<Vector>>,
    differential: Vec<Vector>,
    contraction: Option<Vec<Vec<Vector>>>,
}

fn apply(columns: &[Vector], v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (k, c) in v {
        axpy(&mut out, c, &columns[*k]);
    }
    out
}

impl FiniteModule {
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<i32>,
        action: Vec<Vec<Vector>>,
        differential: Vec<Vector>,
        contraction: Option<Vec<Vec<Vector>>>,
    ) -> Self {
        FiniteModule { labels, degrees, action, differential, contraction }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `labels.len()`-dimensional module in degree 0 with zero action and zero
    /// contractions (values of vector-valued cochains).
    pub fn trivial_with_basis(g: &FinDGLA, labels: Vec<String>) -> Self {
        let n = labels.len();
        let zero = vec![vec![Vector::new(); n]; g.dim()];
        FiniteModule::new(labels, vec![0; n], zero.clone(), vec![Vector::new(); n], Some(zero))
    }

    /// The ground field with trivial action.
    pub fn trivial(g: &FinDGLA) -> Self {
        Self::trivial_with_basis(g, vec!["1".to_string()])
    }

    /// The adjoint representation (no contractions).
    pub fn adjoint(g: &FinDGLA) -> Self {
        let n = g.dim();
        let action = (0..n).map(|x| (0..n).map(|j| g.bracket_basis(x, j).clone()).collect()).collect();
        let differential = (0..n).map(|j| g.differential_basis(j).clone()).collect();
        FiniteModule::new(g.labels.clone(), g.degrees.clone(), action, differential, None)
    }

    /// Scalar cochains `C^•(g)` of an ungraded Lie algebra, as a homotopically
    /// constant module with `L_X`, `ι_X` from the Cartan calculus.
    pub fn cochains_of(g: &FinDGLA) -> Result<Self, LieError> {
        if !g.is_ungraded() {
            return Err(LieError::Graded);
        }
        let ce = CeComplex::new(g, FiniteModule::trivial(g));
        let n = g.dim();
        let words: Vec<Gens> = (0..1u32 << n)
            .map(|mask| (0..n as u16).filter(|&i| mask & (1 << i) != 0).collect())
            .collect();
        let index: BTreeMap<Gens, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let to_vec = |c: &Cochain<Vector>| -> Vector {
            let mut v = Vector::new();
            for (w, m) in &c.terms {
                if let Some(q) = m.get(&0) {
                    axpy(&mut v, q, &std::iter::once((index[w], int(1))).collect());
                }
            }
            v
        };
        let basis: Vec<Cochain<Vector>> = words.iter().map(|w| ce.monomial(w, &std::iter::once((0, int(1))).collect())).collect();
        let differential = basis.iter().map(|c| to_vec(&ce.differential(c))).collect();
        let action = (0..n).map(|x| basis.iter().map(|c| to_vec(&ce.lie_derivative(x, c))).collect()).collect();
        let contraction = (0..n).map(|x| basis.iter().map(|c| to_vec(&ce.contraction(x, c))).collect()).collect();
        let labels = words.iter().map(|w| format!("{w:?}")).collect();
        let degrees = words.iter().map(|w| w.len() as i32).collect();
        Ok(FiniteModule::new(labels, degrees, action, differential, Some(contraction)))
    }
}

impl GModule for FiniteModule {
    type Elem = Vector;

    fn zero(&self) -> Vector {
        Vector::new()
    }

    fn is_zero(&self, m: &Vector) -> bool {
        m.is_empty()
    }

    fn add_scaled(&self, acc: &mut Vector, m: &Vector, q: &Rational) {
        axpy(acc, q, m);
    }

    fn homogeneous_parts(&self, m: &Vector) -> Vec<(i32, Vector)> {
        let mut parts: BTreeMap<i32, Vector> = BTreeMap::new();
        for (k, c) in m {
            parts.entry(self.degrees[*k]).or_default().insert(*k, c.clone());
        }
        parts.into_iter().collect()
    }

    fn differential(&self, m: &Vector) -> Vector {
        apply(&self.differential, m)
    }

    fn action(&self, x: usize, m: &Vector) -> Vector {
        apply(&self.action[x], m)
    }

    fn contraction(&self, x: usize, m: &Vector) -> Option<Vector> {
        self.contraction.as_ref().map(|c| apply(&c[x], m))
    }
}

/// A cochain: sum of `θ^{i_1} ... θ^{i_k} ⊗ m` with the generator word in
/// normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<E> {
    pub terms: BTreeMap<Gens, E>,
}

impl<E> Default for Cochain<E> {
    fn default() -> Self {
        Cochain { terms: BTreeMap::new() }
    }
}

impl<E> Cochain<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Part with exactly `p` generators.
    pub fn arity_part(&self, p: usize) -> Self
    where
        E: Clone,
    {
        Cochain { terms: self.terms.iter().filter(|(w, _)| w.len() == p).map(|(w, m)| (w.clone(), m.clone())).collect() }
    }
}

/// Signs in the Chevalley-Eilenberg differential, as exponents of `-1`
/// affine in the degrees involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CeSigns {
    /// `dθ^k ∋ -(-1)^{s + a|e_i|} D^k_i θ^i`
    pub linear: (i64, i64),
    /// `dθ^k ∋ -½ (-1)^{s + a|e_i| + b|e_j| + c|e_i||e_j|} c^k_{ij} θ^i θ^j`
    pub quadratic: (i64, i64, i64, i64),
    /// `d(1 ⊗ m) ∋ (-1)^{s + a|e_i| + b|m| + c|e_i||m|} θ^i ⊗ e_i·m`
    pub action: (i64, i64, i64, i64),
}

/// The unique choice (up to rescaling odd generators) making `d² = 0` and
/// the Cartan relations hold on `g[eps]` and `g[eps][eps]`, normalized so
/// that ordinary Lie algebras get the standard formulas and `R(X eps) = X`.
pub(crate) const CE_SIGNS: CeSigns = CeSigns { linear: (0, 1), quadratic: (0, 1, 0, 1), action: (0, 1, 0, 0) };

/// `C^•(g, M)` with its differential and Cartan operators.
pub struct CeComplex<'a, M: GModule> {
    pub g: &'a FinDGLA,
    pub module: M,
    pub gca: Gca,
    signs: CeSigns,
    generator_differentials: Vec<GcaElement>,
}

impl<'a, M: GModule> CeComplex<'a, M> {
    pub fn new(g: &'a FinDGLA, module: M) -> Self {
        let signs = CE_SIGNS;
        let gca = Gca::new(g.degrees.iter().map(|d| 1 - d).collect());
        let mut ce = CeComplex { g, module, gca, signs, generator_differentials: Vec::new() };
        ce.generator_differentials = (0..g.dim() as u16).map(|k| ce.differential_of_generator(k)).collect();
        ce
    }

    pub fn zero(&self) -> Cochain<M::Elem> {
        Cochain::default()
    }

    pub fn add_term(&self, c: &mut Cochain<M::Elem>, w: Gens, m: &M::Elem, q: &Rational) {
        if q.is_zero() || self.module.is_zero(m) {
            return;
        }
        let e = c.terms.entry(w.clone()).or_insert_with(|| self.module.zero());
        self.module.add_scaled(e, m, q);
        if self.module.is_zero(e) {
            c.terms.remove(&w);
        }
    }

    pub fn add_scaled(&self, acc: &mut Cochain<M::Elem>, c: &Cochain<M::Elem>, q: &Rational) {
        for (w, m) in &c.terms {
            self.add_term(acc, w.clone(), m, q);
        }
    }

    pub fn minus(&self, a: &Cochain<M::Elem>, b: &Cochain<M::Elem>) -> Cochain<M::Elem> {
        let mut out = a.clone();
        self.add_scaled(&mut out, b, &int(-1));
        out
    }

    /// `θ^{word} ⊗ m` for an unsorted word.
    pub fn monomial(&self, word: &[u16], m: &M::Elem) -> Cochain<M::Elem> {
        let mut out = self.zero();
        if let Some((w, s)) = self.gca.normalize(word) {
            self.add_term(&mut out, w, m, &int(s));
        }
        out
    }

    /// Constant cochain `1 ⊗ m`.
    pub fn constant(&self, m: &M::Elem) -> Cochain<M::Elem> {
        self.monomial(&[], m)
    }

    /// `α · c` for a scalar cochain `α`.
    pub fn scalar_times(&self, alpha: &GcaElement, c: &Cochain<M::Elem>) -> Cochain<M::Elem> {
        let mut out = self.zero();
        for ((ga, _), qa) in &alpha.terms {
            for (gb, m) in &c.terms {
                let mut word = ga.clone();
                word.extend_from_slice(gb);
                if let Some((w, s)) = self.gca.normalize(&word) {
                    self.add_term(&mut out, w, m, &(qa * int(s)));
                }
            }
        }
        out
    }

    /// Apply a derivation on the generator part only.
    fn word_derivation<G>(&self, c: &Cochain<M::Elem>, deg: i32, on_gen: G) -> Cochain<M::Elem>
    where
        G: Fn(u16) -> GcaElement,
    {
        let mut out = self.zero();
        for (w, m) in &c.terms {
            let image = self.gca.derivation(&GcaElement::term(w.clone(), 0, int(1)), deg, &on_gen, |_| GcaElement::zero());
            for ((g, _), q) in &image.terms {
                self.add_term(&mut out, g.clone(), m, q);
            }
        }
        out
    }

    /// `dθ^k` as a scalar cochain.
    pub fn differential_of_generator(&self, k: u16) -> GcaElement {
        let g = self.g;
        let (ls, la) = self.signs.linear;
        let (qs, qa, qb, qc) = self.signs.quadratic;
        let k = k as usize;
        let mut out = GcaElement::zero();
        let deg = |i: usize| i64::from(g.degrees[i]);
        for i in 0..g.dim() {
            if let Some(dk) = g.differential_basis(i).get(&k) {
                let s = -sign_pow(ls + la * deg(i));
                out.add_scaled(&self.gca.monomial(&[i as u16], 0), &(dk * int(s)));
            }
            for j in 0..g.dim() {
                if let Some(ck) = g.bracket_basis(i, j).get(&k) {
                    let s = -sign_pow(qs + qa * deg(i) + qb * deg(j) + qc * deg(i) * deg(j));
                    out.add_scaled(&self.gca.monomial(&[i as u16, j as u16], 0), &(ck * Rational::new(s.into(), 2.into())));
                }
            }
        }
        out
    }

    /// The total differential: Chevalley-Eilenberg part plus the internal
    /// differentials of the algebra and of the module.
    pub fn differential(&self, c: &Cochain<M::Elem>) -> Cochain<M::Elem> {
        let mut out = self.word_derivation(c, 1, |k| self.generator_differentials[k as usize].clone());
        let (as_, aa, ab, ac) = self.signs.action;
        for (w, m) in &c.terms {
            let sw = sign_pow(i64::from(self.gca.gens_degree(w)));
            let mut word_part = self.zero();
            self.add_term(&mut word_part, Vec::new(), &self.module.differential(m), &int(1));
            for (dm, part) in self.module.homogeneous_parts(m) {
                for i in 0..self.g.dim() {
                    let di = i64::from(self.g.degrees[i]);
                    let s = sign_pow(as_ + aa * di + ab * i64::from(dm) + ac * di * i64::from(dm));
                    let acted = self.module.action(i, &part);
                    self.add_term(&mut word_part, vec![i as u16], &acted, &int(s));
                }
            }
            let mut prefixed = self.zero();
            for (v, x) in &word_part.terms {
                let mut word = w.clone();
                word.extend_from_slice(v);
                if let Some((nw, s)) = self.gca.normalize(&word) {
                    self.add_term(&mut prefixed, nw, x, &int(s));
                }
            }
            self.add_scaled(&mut out, &prefixed, &int(sw));
        }
        out
    }

    /// Degree of the contraction by basis vector `x`.
    pub fn contraction_degree(&self, x: usize) -> i32 {
        self.g.degrees[x] - 1
    }

    /// Contraction `ι_X` on the cochain variables (`θ^j ↦ δ_{jX}`).
    pub fn contraction(&self, x: usize, c: &Cochain<M::Elem>) -> Cochain<M::Elem> {
        self.word_derivation(c, self.contraction_degree(x), |k| {
            if k as usize == x {
                GcaElement::one()
            } else {
                GcaElement::zero()
            }
        })
    }

    /// Lie derivative, `L_X = (-1)^{|X|}([d, ι_X] - ι_{dX})`.
    pub fn lie_derivative(&self, x: usize, c: &Cochain<M::Elem>) -> Cochain<M::Elem> {
        let dx = self.contraction_degree(x);
        let a = self.differential(&self.contraction(x, c));
        let b = self.contraction(x, &self.differential(c));
        let mut out = a;
        self.add_scaled(&mut out, &b, &int(-sign_pow(i64::from(dx))));
        for (k, q) in self.g.differential_basis(x) {
            self.add_scaled(&mut out, &self.contraction(*k, c), &-q);
        }
        if self.g.degrees[x] % 2 != 0 {
            out = out.terms.into_iter().fold(self.zero(), |mut acc, (w, m)| {
                self.add_term(&mut acc, w, &m, &int(-1));
                acc
            });
        }
        out
    }

    /// `c(X_1, ..., X_p) = ι_{X_p} ... ι_{X_1} c`, the arity-0 value.
    pub fn evaluate(&self, c: &Cochain<M::Elem>, args: &[usize]) -> M::Elem {
        let mut cur = c.clone();
        for &x in args {
            cur = self.contraction(x, &cur);
        }
        cur.terms.get(&Vec::new()).cloned().unwrap_or_else(|| self.module.zero())
    }

    /// Relative cochains: `ι_h c = 0` and `L_h c = 0` for every subalgebra
    /// basis vector `h`.
    pub fn is_relative(&self, c: &Cochain<M::Elem>) -> bool {
        self.g.h_indices().into_iter().all(|h| self.contraction(h, c).is_zero() && self.lie_derivative(h, c).is_zero())
    }

    /// Normal-form words of total generator degree `deg` using at most
    /// `max_len` generators, over generators of positive degree.
    pub fn words(&self, deg: i32, max_len: usize) -> Vec<Gens> {
        let all: Vec<u16> = (0..self.g.dim() as u16).collect();
        self.gca.words_of_degree(&all, deg, max_len)
    }
}

/// Graded commutator of two cochain operators.
pub fn operator_commutator<E, P, Q, M>(
    ce: &CeComplex<'_, M>,
    p: P,
    dp: i32,
    q: Q,
    dq: i32,
    c: &Cochain<E>,
) -> Cochain<E>
where
    M: GModule<Elem = E>,
    E: Clone + PartialEq + Debug,
    P: Fn(&Cochain<E>) -> Cochain<E>,
    Q: Fn(&Cochain<E>) -> Cochain<E>,
{
    let mut out = p(&q(c));
    ce.add_scaled(&mut out, &q(&p(c)), &int(-sign_pow(i64::from(dp * dq))));
    out
}
