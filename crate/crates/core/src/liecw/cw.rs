//! Connection and curvature cochains, Chern-Weil cochains `c_P`, the Weil
//! algebra and the Chern-Weil map with coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::{nullspace, Echelon, SparseVec};
use crate::scalars::{factorial, int, Rational};

use super::ce::{Cochain, CeComplex, FiniteModule, GModule};
use super::gca::{Gca, GcaElement, Key};
use super::{FinDGLA, LieError, Vector};

/// Cochains with values in a finite module, viewed as elements of the free
/// graded-commutative algebra (coefficient index = module basis index).
pub fn cochain_to_gca(c: &Cochain<Vector>) -> GcaElement {
    let mut out = GcaElement::zero();
    for (w, m) in &c.terms {
        for (k, q) in m {
            out.add_term(w.clone(), *k as u32, q.clone());
        }
    }
    out
}

pub fn gca_to_cochain(x: &GcaElement) -> Cochain<Vector> {
    let mut out = Cochain::<Vector>::default();
    for ((w, k), q) in &x.terms {
        out.terms.entry(w.clone()).or_default().insert(*k as usize, q.clone());
    }
    out
}

/// Assigns consecutive indices to monomial keys for linear algebra.
#[derive(Default)]
struct Interner {
    index: BTreeMap<Key, usize>,
}

impl Interner {
    fn vector(&mut self, x: &GcaElement, offset: usize, stride: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for (k, q) in &x.terms {
            let n = self.index.len();
            let i = *self.index.entry(k.clone()).or_insert(n);
            v.insert(offset + stride * i, q.clone());
        }
        v
    }
}

fn combine(candidates: &[GcaElement], coeffs: &SparseVec) -> GcaElement {
    let mut out = GcaElement::zero();
    for (i, q) in coeffs {
        out.add_scaled(&candidates[*i], q);
    }
    out
}

/// Basis of the common kernel of `ops` on the span of `candidates`.
pub fn basic_filter(candidates: &[GcaElement], ops: &[&dyn Fn(&GcaElement) -> GcaElement]) -> Vec<GcaElement> {
    let mut interner = Interner::default();
    let stride = ops.len().max(1);
    let columns: Vec<SparseVec> = candidates
        .iter()
        .map(|c| {
            let mut v = SparseVec::new();
            for (o, op) in ops.iter().enumerate() {
                v.extend(interner.vector(&op(c), o, stride));
            }
            v
        })
        .collect();
    nullspace(&columns).iter().map(|k| combine(candidates, k)).collect()
}

/// Some `β` in the span of `candidates` with `d β = target`.
pub fn solve_exact<D>(candidates: &[GcaElement], d: D, target: &GcaElement) -> Result<GcaElement, LieError>
where
    D: Fn(&GcaElement) -> GcaElement,
{
    let mut interner = Interner::default();
    let mut e = Echelon::new();
    for c in candidates {
        e.insert(&interner.vector(&d(c), 0, 1));
    }
    let before = interner.index.len();
    let t = interner.vector(target, 0, 1);
    if interner.index.len() > before {
        return Err(LieError::NotExact);
    }
    e.solve(&t).map(|x| combine(candidates, &x)).ok_or(LieError::NotExact)
}

/// A symmetric multilinear form on the subalgebra, indexed by positions in
/// [`FinDGLA::h_indices`]; values are stored on sorted index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricForm {
    pub arity: usize,
    values: BTreeMap<Vec<usize>, Rational>,
}

impl SymmetricForm {
    /// The constant `1` (arity 0).
    pub fn unit() -> Self {
        SymmetricForm { arity: 0, values: std::iter::once((Vec::new(), Rational::one())).collect() }
    }

    pub fn linear(coeffs: &[Rational]) -> Self {
        let values = coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (vec![i], c.clone())).collect();
        SymmetricForm { arity: 1, values }
    }

    /// From values on sorted index tuples.
    pub fn from_sorted(arity: usize, values: BTreeMap<Vec<usize>, Rational>) -> Self {
        SymmetricForm { arity, values }
    }

    pub fn value(&self, args: &[usize]) -> Rational {
        let mut k = args.to_vec();
        k.sort_unstable();
        self.values.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `P(X_1, ..., X_m) = (1/m!) Σ_σ tr(ρ(X_σ1) ... ρ(X_σm)) / m!` for a
    /// representation of the subalgebra given by matrices (`mats[a][row][col]`).
    pub fn trace_power(mats: &[Vec<Vec<Rational>>], m: usize) -> Self {
        let n = mats.len();
        let mut values = BTreeMap::new();
        for key in multisets(n, m) {
            let mut total = Rational::zero();
            for perm in permutations(&key) {
                total += trace_product(mats, &perm);
            }
            let norm = factorial(m as u32) * factorial(m as u32);
            let v = total / norm;
            if !v.is_zero() {
                values.insert(key, v);
            }
        }
        SymmetricForm { arity: m, values }
    }

    /// Invariance `Σ_k P(.., [h, X_k], ..) = 0` on all basis tuples.
    pub fn check_invariant(&self, g: &FinDGLA) -> Result<(), LieError> {
        let h = g.h_indices();
        let n = h.len();
        for (p, &hb) in h.iter().enumerate() {
            for key in multisets(n, self.arity) {
                let mut total = Rational::zero();
                for k in 0..key.len() {
                    let br = g.project_to_h(g.bracket_basis(hb, h[key[k]]));
                    for (c, q) in &br {
                        let mut args = key.clone();
                        args[k] = *c;
                        total += q * self.value(&args);
                    }
                }
                if !total.is_zero() {
                    return Err(LieError::NotInvariant(g.labels[h[p]].clone()));
                }
            }
        }
        Ok(())
    }
}

fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let start = v.last().copied().unwrap_or(0);
                (start..n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn trace_product(mats: &[Vec<Vec<Rational>>], seq: &[usize]) -> Rational {
    let dim = mats.first().map_or(0, Vec::len);
    let mut acc: Vec<Vec<Rational>> = (0..dim).map(|i| (0..dim).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
    for &a in seq {
        let m = &mats[a];
        acc = (0..dim)
            .map(|i| (0..dim).map(|j| (0..dim).map(|k| &acc[i][k] * &m[k][j]).sum()).collect())
            .collect();
    }
    (0..dim).map(|i| acc[i][i].clone()).sum()
}

/// Matrices of the subalgebra acting on the complement `V` (in the basis
/// `e_v + complement[v]`), `mats[a][row][col]`.
pub fn complement_representation(g: &FinDGLA) -> Vec<Vec<Vec<Rational>>> {
    let v = g.v_indices();
    g.h_indices()
        .iter()
        .map(|&h| {
            let mut m = vec![vec![int(0); v.len()]; v.len()];
            for (col, &vi) in v.iter().enumerate() {
                let img = g.bracket(&g.basis_vector(h), &g.complement_vector(vi));
                for (row, &vr) in v.iter().enumerate() {
                    if let Some(q) = img.get(&vr) {
                        m[row][col] = q.clone();
                    }
                }
            }
            m
        })
        .collect()
}

/// Connection, curvature and Chern-Weil data of a DGLA with a chosen
/// subalgebra and complement.
pub struct ChernWeil<'a> {
    pub g: &'a FinDGLA,
    /// Cochains with values in the subalgebra (trivial action on values).
    pub valued: CeComplex<'a, FiniteModule>,
    /// Scalar cochains.
    pub scalar: CeComplex<'a, FiniteModule>,
    h: Vec<usize>,
}

impl<'a> ChernWeil<'a> {
    pub fn new(g: &'a FinDGLA) -> Self {
        let h = g.h_indices();
        let labels = h.iter().map(|&i| g.labels[i].clone()).collect();
        ChernWeil {
            g,
            valued: CeComplex::new(g, FiniteModule::trivial_with_basis(g, labels)),
            scalar: CeComplex::new(g, FiniteModule::trivial(g)),
            h,
        }
    }

    pub fn h_dim(&self) -> usize {
        self.h.len()
    }

    fn h_degree(&self, a: usize) -> i32 {
        self.g.degrees[self.h[a]]
    }

    /// `[h_a, h_b]` in subalgebra coordinates.
    pub fn h_bracket(&self, a: usize, b: usize) -> Vector {
        self.g.project_to_h(self.g.bracket_basis(self.h[a], self.h[b]))
    }

    /// `A = Σ_i θ^i ⊗ pr_h(e_i)`.
    pub fn connection(&self) -> Cochain<Vector> {
        let mut out = self.valued.zero();
        for i in 0..self.g.dim() {
            let p = self.g.project_to_h(&self.g.basis_vector(i));
            self.valued.add_term(&mut out, vec![i as u16], &p, &int(1));
        }
        out
    }

    /// `(α ⊗ a)(β ⊗ b) = (-1)^{|a||β|} αβ ⊗ [a, b]`.
    pub fn bracket_product(&self, x: &Cochain<Vector>, y: &Cochain<Vector>) -> Cochain<Vector> {
        let deg: Vec<i32> = (0..self.h_dim()).map(|a| self.h_degree(a)).collect();
        let out = self.valued.gca.product(&cochain_to_gca(x), &deg, &cochain_to_gca(y), |a, b| {
            self.h_bracket(a as usize, b as usize).into_iter().map(|(k, q)| (k as u32, q)).collect()
        });
        gca_to_cochain(&out)
    }

    /// `[h_a, c]` acting on the values of a subalgebra-valued cochain.
    pub fn act_on_values(&self, a: usize, c: &Cochain<Vector>) -> Cochain<Vector> {
        let mut out = self.valued.zero();
        for (w, m) in &c.terms {
            let mut v = Vector::new();
            for (b, q) in m {
                super::axpy(&mut v, q, &self.h_bracket(a, *b));
            }
            self.valued.add_term(&mut out, w.clone(), &v, &int(1));
        }
        out
    }

    /// `R = dA + ½[A, A]`; on ungraded algebras `R(X, Y) = [AX, AY] - A[X, Y]`.
    pub fn curvature(&self) -> Cochain<Vector> {
        let a = self.connection();
        let mut out = self.valued.differential(&a);
        self.valued.add_scaled(&mut out, &self.bracket_product(&a, &a), &Rational::new(1.into(), 2.into()));
        out
    }

    /// The scalar cochain `c^a` of a subalgebra-valued cochain.
    pub fn component(&self, c: &Cochain<Vector>, a: usize) -> GcaElement {
        let mut out = GcaElement::zero();
        for (w, m) in &c.terms {
            if let Some(q) = m.get(&a) {
                out.add_term(w.clone(), 0, q.clone());
            }
        }
        out
    }

    /// `c_P = P(R, ..., R)` as a scalar cochain.
    pub fn chern_cochain(&self, p: &SymmetricForm) -> Result<GcaElement, LieError> {
        p.check_invariant(self.g)?;
        let r = self.curvature();
        let comps: Vec<GcaElement> = (0..self.h_dim()).map(|a| self.component(&r, a)).collect();
        let gca = &self.scalar.gca;
        let mut out = GcaElement::zero();
        for key in multisets(self.h_dim(), p.arity) {
            let v = p.value(&key);
            if v.is_zero() {
                continue;
            }
            let mut prod = GcaElement::one();
            let mut mult: BTreeMap<usize, u32> = BTreeMap::new();
            for &a in &key {
                prod = gca.scalar_mul(&prod, &comps[a]);
                *mult.entry(a).or_default() += 1;
            }
            let count = mult.values().fold(factorial(p.arity as u32), |acc, &k| acc / factorial(k));
            out.add_scaled(&prod, &(v * count));
        }
        Ok(out)
    }

    pub fn weil(&self) -> Result<WeilAlgebra, LieError> {
        if self.h.iter().any(|&i| self.g.degrees[i] != 0) {
            return Err(LieError::Graded);
        }
        let n = self.h_dim();
        let structure = (0..n).map(|a| (0..n).map(|b| self.h_bracket(a, b)).collect()).collect();
        Ok(WeilAlgebra::new(structure))
    }

    /// The Chern-Weil map `W(h) → C^•(g)`, `A^a ↦ A^a`, `R^a ↦ R^a`.
    pub fn cw_map(&self, w: &GcaElement) -> GcaElement {
        let a = self.connection();
        let r = self.curvature();
        let n = self.h_dim();
        let images: Vec<GcaElement> =
            (0..n).map(|k| self.component(&a, k)).chain((0..n).map(|k| self.component(&r, k))).collect();
        let gca = &self.scalar.gca;
        let mut out = GcaElement::zero();
        for ((word, _), q) in &w.terms {
            let mut prod = GcaElement::one();
            for &x in word {
                prod = gca.scalar_mul(&prod, &images[x as usize]);
            }
            out.add_scaled(&prod, q);
        }
        out
    }

    /// Relative scalar cochains of the given degree.
    pub fn relative_cochains(&self, degree: i32) -> Vec<GcaElement> {
        let ce = &self.scalar;
        let words = ce.words(degree, degree.max(0) as usize);
        let cands: Vec<GcaElement> = words.into_iter().map(|w| GcaElement::term(w, 0, int(1))).collect();
        let ops: Vec<Box<dyn Fn(&GcaElement) -> GcaElement + '_>> = self
            .h
            .iter()
            .flat_map(|&h| {
                let i: Box<dyn Fn(&GcaElement) -> GcaElement> =
                    Box::new(move |x: &GcaElement| cochain_to_gca(&ce.contraction(h, &gca_to_cochain(x))));
                let l: Box<dyn Fn(&GcaElement) -> GcaElement> =
                    Box::new(move |x: &GcaElement| cochain_to_gca(&ce.lie_derivative(h, &gca_to_cochain(x))));
                [i, l]
            })
            .collect();
        let refs: Vec<&dyn Fn(&GcaElement) -> GcaElement> = ops.iter().map(|b| b.as_ref()).collect();
        basic_filter(&cands, &refs)
    }

    /// Scalar cochain differential on the algebra representation.
    pub fn d(&self, x: &GcaElement) -> GcaElement {
        cochain_to_gca(&self.scalar.differential(&gca_to_cochain(x)))
    }
}

/// `φ_l = Σ_{i_1 < ... < i_p} θ^{i_1} ... θ^{i_p} ⊗ ι_{i_p} ... ι_{i_1} l`
/// for a homotopically constant module over an ungraded Lie algebra.
pub fn phi_l<M: GModule>(ce: &CeComplex<'_, M>, l: &M::Elem) -> Result<Cochain<M::Elem>, LieError> {
    if !ce.g.is_ungraded() {
        return Err(LieError::Graded);
    }
    let mut out = ce.zero();
    let mut stack: Vec<(Vec<u16>, M::Elem)> = vec![(Vec::new(), l.clone())];
    while let Some((word, m)) = stack.pop() {
        ce.add_term(&mut out, word.clone(), &m, &int(1));
        let start = word.last().map_or(0, |&i| i as usize + 1);
        for i in start..ce.g.dim() {
            let next = ce.module.contraction(i, &m).ok_or(LieError::NoContraction)?;
            if !ce.module.is_zero(&next) {
                let mut w = word.clone();
                w.push(i as u16);
                stack.push((w, next));
            }
        }
    }
    Ok(out)
}

/// `CW(w) · φ_l`, the Chern-Weil map with coefficients.
pub fn cw_with_coefficients<M: GModule>(
    cw: &ChernWeil<'_>,
    ce: &CeComplex<'_, M>,
    w: &GcaElement,
    l: &M::Elem,
) -> Result<Cochain<M::Elem>, LieError> {
    let phi = phi_l(ce, l)?;
    Ok(ce.scalar_times(&cw.cw_map(w), &phi))
}

/// The Weil algebra of an ungraded Lie algebra with `n` basis vectors:
/// generators `A^a` (degree 1, index `a`) and `R^a` (degree 2, index `n+a`).
#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    pub gca: Gca,
    structure: Vec<Vec<Vector>>,
    generator_differentials: Vec<GcaElement>,
}

impl WeilAlgebra {
    /// `structure[b][c] = [h_b, h_c]`.
    pub fn new(structure: Vec<Vec<Vector>>) -> Self {
        let n = structure.len();
        let gca = Gca::new([vec![1; n], vec![2; n]].concat());
        let mut w = WeilAlgebra { gca, structure, generator_differentials: Vec::new() };
        w.generator_differentials = (0..2 * n).map(|k| w.differential_of_generator(k)).collect();
        w
    }

    pub fn dim(&self) -> usize {
        self.structure.len()
    }

    pub fn a(&self, k: usize) -> GcaElement {
        self.gca.generator(k as u16)
    }

    pub fn r(&self, k: usize) -> GcaElement {
        self.gca.generator((self.dim() + k) as u16)
    }

    /// `∂A = R - ½[A, A]`, `∂R = -[A, R]`.
    fn differential_of_generator(&self, k: usize) -> GcaElement {
        let n = self.dim();
        let (a, is_r) = if k < n { (k, false) } else { (k - n, true) };
        let mut out = if is_r { GcaElement::zero() } else { self.r(a) };
        for b in 0..n {
            for c in 0..n {
                if let Some(q) = self.structure[b][c].get(&a) {
                    if is_r {
                        out.add_scaled(&self.gca.monomial(&[b as u16, (n + c) as u16], 0), &-q);
                    } else {
                        out.add_scaled(&self.gca.monomial(&[b as u16, c as u16], 0), &(-q * Rational::new(1.into(), 2.into())));
                    }
                }
            }
        }
        out
    }

    pub fn differential(&self, x: &GcaElement) -> GcaElement {
        self.gca.derivation(x, 1, |k| self.generator_differentials[k as usize].clone(), |_| GcaElement::zero())
    }

    /// `ι_{h_b}`: `A^a ↦ δ_{ab}`, `R ↦ 0`.
    pub fn contraction(&self, b: usize, x: &GcaElement) -> GcaElement {
        self.gca.derivation(x, -1, |k| if k as usize == b { GcaElement::one() } else { GcaElement::zero() }, |_| GcaElement::zero())
    }

    /// `L_{h_b} = [∂, ι_{h_b}]`.
    pub fn lie_derivative(&self, b: usize, x: &GcaElement) -> GcaElement {
        self.differential(&self.contraction(b, x)).plus(&self.contraction(b, &self.differential(x)))
    }

    /// Normal-form monomials of the given degree.
    pub fn monomials(&self, degree: i32) -> Vec<GcaElement> {
        let all: Vec<u16> = (0..2 * self.dim() as u16).collect();
        self.gca.words_of_degree(&all, degree, degree.max(0) as usize).into_iter().map(|w| GcaElement::term(w, 0, int(1))).collect()
    }

    /// Basic elements of the given degree.
    pub fn basic_part(&self, degree: i32) -> Vec<GcaElement> {
        let ops: Vec<Box<dyn Fn(&GcaElement) -> GcaElement + '_>> = (0..self.dim())
            .flat_map(|b| {
                let i: Box<dyn Fn(&GcaElement) -> GcaElement> = Box::new(move |x: &GcaElement| self.contraction(b, x));
                let l: Box<dyn Fn(&GcaElement) -> GcaElement> = Box::new(move |x: &GcaElement| self.lie_derivative(b, x));
                [i, l]
            })
            .collect();
        let refs: Vec<&dyn Fn(&GcaElement) -> GcaElement> = ops.iter().map(|b| b.as_ref()).collect();
        basic_filter(&self.monomials(degree), &refs)
    }
}
