//! Graded algebras presented by a basis, and the instances used throughout.

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::lincomb::LinComb;
use crate::scalars::{rat, sign_pow, TULaurent, Window};
use crate::weyl::{moyal_monomials, Monomial, WeylShape};

/// A graded algebra over `Q((t))` given on a basis containing the unit.
///
/// Products and differentials of basis elements are linear combinations of
/// basis elements; truncation marks the result as clipped.
pub trait GradedAlgebra: Sync {
    type Basis: Clone + Ord + Hash + Debug + Send + Sync + Serialize;

    /// Short name used in reports.
    fn tag(&self) -> String;
    fn window(&self) -> Window;
    fn degree(&self, b: &Self::Basis) -> i32;
    fn unit(&self) -> Self::Basis;
    fn multiply(&self, a: &Self::Basis, b: &Self::Basis) -> LinComb<Self::Basis>;

    fn differential(&self, _a: &Self::Basis) -> LinComb<Self::Basis> {
        LinComb::zero(self.window())
    }

    /// Basis elements up to a size bound (meaning is instance specific).
    fn basis_upto(&self, bound: usize) -> Vec<Self::Basis>;

    fn is_unit(&self, b: &Self::Basis) -> bool {
        *b == self.unit()
    }

    /// Product of two elements.
    fn mul(&self, x: &LinComb<Self::Basis>, y: &LinComb<Self::Basis>) -> LinComb<Self::Basis> {
        let mut out = LinComb::zero(self.window());
        if x.is_clipped() || y.is_clipped() {
            out.mark_clipped();
        }
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.multiply(a, b), &(ca * cb));
            }
        }
        out
    }

    /// Differential of an element.
    fn delta(&self, x: &LinComb<Self::Basis>) -> LinComb<Self::Basis> {
        x.map_linear(|a| self.differential(a))
    }

    /// Element with the unit component removed.
    fn reduce(&self, x: &LinComb<Self::Basis>) -> LinComb<Self::Basis> {
        let one = self.unit();
        x.filter(|b| *b != one)
    }

    fn one(&self) -> LinComb<Self::Basis> {
        LinComb::basis(self.window(), self.unit())
    }
}

/// Truncated Weyl algebra: degree 0, zero differential.
#[derive(Clone, Copy, Debug)]
pub struct WeylAlgebra {
    pub shape: WeylShape,
}

impl WeylAlgebra {
    pub fn new(shape: WeylShape) -> Self {
        WeylAlgebra { shape }
    }
}

fn monomials_upto(d: usize, max_degree: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(d)];
    let mut frontier = vec![Monomial::one(d)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            // Only raise coordinates at or after the last nonzero one, so each
            // monomial is produced once.
            let start = m.0.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..2 * d {
                let mut e = m.0.clone();
                e[i] += 1;
                next.push(Monomial(e));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl GradedAlgebra for WeylAlgebra {
    type Basis = Monomial;

    fn tag(&self) -> String {
        format!("W(d={},cap={})", self.shape.d, self.shape.cap)
    }

    fn window(&self) -> Window {
        self.shape.window
    }

    fn degree(&self, _b: &Monomial) -> i32 {
        0
    }

    fn unit(&self) -> Monomial {
        Monomial::one(self.shape.d)
    }

    fn multiply(&self, a: &Monomial, b: &Monomial) -> LinComb<Monomial> {
        let w = self.shape.window;
        let mut out = LinComb::zero(w);
        for (m, n, c) in moyal_monomials(a, b) {
            let coeff = TULaurent::monomial(w, c, n, 0);
            if m.degree() > self.shape.cap {
                if !coeff.is_zero() {
                    out.mark_clipped();
                }
                continue;
            }
            out.add_term(m, &coeff);
        }
        out
    }

    fn basis_upto(&self, bound: usize) -> Vec<Monomial> {
        monomials_upto(self.shape.d, bound.min(self.shape.cap))
    }
}

/// Commutative algebra of symbols (`t`-free power series, truncated).
#[derive(Clone, Copy, Debug)]
pub struct SymbolAlgebra {
    pub shape: WeylShape,
}

impl SymbolAlgebra {
    pub fn new(shape: WeylShape) -> Self {
        SymbolAlgebra { shape }
    }
}

impl GradedAlgebra for SymbolAlgebra {
    type Basis = Monomial;

    fn tag(&self) -> String {
        format!("O(d={},cap={})", self.shape.d, self.shape.cap)
    }

    fn window(&self) -> Window {
        self.shape.window
    }

    fn degree(&self, _b: &Monomial) -> i32 {
        0
    }

    fn unit(&self) -> Monomial {
        Monomial::one(self.shape.d)
    }

    fn multiply(&self, a: &Monomial, b: &Monomial) -> LinComb<Monomial> {
        let m = a.times(b);
        let mut out = LinComb::zero(self.shape.window);
        if m.degree() > self.shape.cap {
            out.mark_clipped();
            return out;
        }
        out.add_term(m, &TULaurent::one(self.shape.window));
        out
    }

    fn basis_upto(&self, bound: usize) -> Vec<Monomial> {
        monomials_upto(self.shape.d, bound.min(self.shape.cap))
    }
}

/// Basis of `k[eta]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EtaBasis {
    One,
    Eta,
}

/// `k[eta]` with `eta^2 = 0`, `delta(eta) = 1` and a chosen degree of `eta`.
#[derive(Clone, Copy, Debug)]
pub struct DualNumbers {
    pub eta_degree: i32,
    pub window: Window,
}

impl DualNumbers {
    pub fn new(eta_degree: i32, window: Window) -> Self {
        DualNumbers { eta_degree, window }
    }
}

impl GradedAlgebra for DualNumbers {
    type Basis = EtaBasis;

    fn tag(&self) -> String {
        format!("k[eta](deg={})", self.eta_degree)
    }

    fn window(&self) -> Window {
        self.window
    }

    fn degree(&self, b: &EtaBasis) -> i32 {
        match b {
            EtaBasis::One => 0,
            EtaBasis::Eta => self.eta_degree,
        }
    }

    fn unit(&self) -> EtaBasis {
        EtaBasis::One
    }

    fn multiply(&self, a: &EtaBasis, b: &EtaBasis) -> LinComb<EtaBasis> {
        match (a, b) {
            (EtaBasis::Eta, EtaBasis::Eta) => LinComb::zero(self.window),
            (EtaBasis::One, x) | (x, EtaBasis::One) => LinComb::basis(self.window, *x),
        }
    }

    fn differential(&self, a: &EtaBasis) -> LinComb<EtaBasis> {
        match a {
            EtaBasis::Eta => LinComb::basis(self.window, EtaBasis::One),
            EtaBasis::One => LinComb::zero(self.window),
        }
    }

    fn basis_upto(&self, _bound: usize) -> Vec<EtaBasis> {
        vec![EtaBasis::One, EtaBasis::Eta]
    }
}

/// `A[eta] = A ⊗ k[eta]` with `delta(a eta) = delta(a) eta + (-1)^{|a|} a`.
#[derive(Clone, Copy, Debug)]
pub struct WithEta<A> {
    pub inner: A,
    pub eta_degree: i32,
}

impl<A: GradedAlgebra> WithEta<A> {
    pub fn new(inner: A, eta_degree: i32) -> Self {
        WithEta { inner, eta_degree }
    }

    /// `a` without `eta`.
    pub fn plain(&self, a: A::Basis) -> (A::Basis, bool) {
        (a, false)
    }

    /// `a eta`.
    pub fn with_eta(&self, a: A::Basis) -> (A::Basis, bool) {
        (a, true)
    }

    /// Embed an element of `A` with or without a factor `eta`.
    pub fn embed(&self, x: &LinComb<A::Basis>, eta: bool) -> LinComb<(A::Basis, bool)> {
        x.map_linear(|a| LinComb::basis(self.window(), (a.clone(), eta)))
    }
}

impl<A: GradedAlgebra> GradedAlgebra for WithEta<A> {
    type Basis = (A::Basis, bool);

    fn tag(&self) -> String {
        format!("{}[eta](deg={})", self.inner.tag(), self.eta_degree)
    }

    fn window(&self) -> Window {
        self.inner.window()
    }

    fn degree(&self, b: &Self::Basis) -> i32 {
        self.inner.degree(&b.0) + if b.1 { self.eta_degree } else { 0 }
    }

    fn unit(&self) -> Self::Basis {
        (self.inner.unit(), false)
    }

    fn multiply(&self, a: &Self::Basis, b: &Self::Basis) -> LinComb<Self::Basis> {
        if a.1 && b.1 {
            return LinComb::zero(self.window());
        }
        // Moving eta (from a) past b.
        let sign = if a.1 { sign_pow(i64::from(self.eta_degree * self.inner.degree(&b.0))) } else { 1 };
        let eta = a.1 || b.1;
        self.inner
            .multiply(&a.0, &b.0)
            .map_linear(|p| LinComb::scalar_term(self.window(), (p.clone(), eta), rat(sign, 1)))
    }

    fn differential(&self, a: &Self::Basis) -> LinComb<Self::Basis> {
        let w = self.window();
        let mut out = self.inner.differential(&a.0).map_linear(|p| LinComb::basis(w, (p.clone(), a.1)));
        if a.1 {
            let sign = sign_pow(i64::from(self.inner.degree(&a.0)));
            out.add_term((a.0.clone(), false), &TULaurent::constant(w, rat(sign, 1)));
        }
        out
    }

    fn basis_upto(&self, bound: usize) -> Vec<Self::Basis> {
        let inner = self.inner.basis_upto(bound);
        let mut out: Vec<_> = inner.iter().cloned().map(|b| (b, false)).collect();
        out.extend(inner.into_iter().map(|b| (b, true)));
        out
    }
}

/// Graded tensor product `A ⊗ B`.
#[derive(Clone, Copy, Debug)]
pub struct TensorAlgebra<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: GradedAlgebra, B: GradedAlgebra> TensorAlgebra<A, B> {
    pub fn new(left: A, right: B) -> Self {
        TensorAlgebra { left, right }
    }
}

impl<A: GradedAlgebra, B: GradedAlgebra> GradedAlgebra for TensorAlgebra<A, B> {
    type Basis = (A::Basis, B::Basis);

    fn tag(&self) -> String {
        format!("({})⊗({})", self.left.tag(), self.right.tag())
    }

    fn window(&self) -> Window {
        self.left.window()
    }

    fn degree(&self, b: &Self::Basis) -> i32 {
        self.left.degree(&b.0) + self.right.degree(&b.1)
    }

    fn unit(&self) -> Self::Basis {
        (self.left.unit(), self.right.unit())
    }

    fn multiply(&self, a: &Self::Basis, b: &Self::Basis) -> LinComb<Self::Basis> {
        let w = self.window();
        let sign = sign_pow(i64::from(self.right.degree(&a.1) * self.left.degree(&b.0)));
        let l = self.left.multiply(&a.0, &b.0);
        let r = self.right.multiply(&a.1, &b.1);
        let mut out = LinComb::zero(w);
        if l.is_clipped() || r.is_clipped() {
            out.mark_clipped();
        }
        for (x, cx) in l.iter() {
            for (y, cy) in r.iter() {
                out.add_term((x.clone(), y.clone()), &(cx * cy).scale(&rat(sign, 1)));
            }
        }
        out
    }

    fn differential(&self, a: &Self::Basis) -> LinComb<Self::Basis> {
        let w = self.window();
        let mut out = self.left.differential(&a.0).map_linear(|x| LinComb::basis(w, (x.clone(), a.1.clone())));
        let sign = sign_pow(i64::from(self.left.degree(&a.0)));
        let right = self.right.differential(&a.1).map_linear(|y| LinComb::basis(w, (a.0.clone(), y.clone())));
        out.add_scaled_q(&right, &rat(sign, 1));
        out
    }

    fn basis_upto(&self, bound: usize) -> Vec<Self::Basis> {
        let rs = self.right.basis_upto(bound);
        let mut out = Vec::new();
        for a in self.left.basis_upto(bound) {
            for b in &rs {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }
}

/// `2 x 2` matrices over `Q`, basis of matrix units `E_{ij}`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixAlgebra {
    pub window: Window,
}

/// Matrix unit index, or the identity matrix used as the algebra unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MatrixBasis {
    /// The identity matrix `E_00 + E_11`.
    Id,
    /// `E_00 - E_11`.
    H,
    /// `E_01`.
    Upper,
    /// `E_10`.
    Lower,
}

impl MatrixAlgebra {
    pub fn new(window: Window) -> Self {
        MatrixAlgebra { window }
    }
}

impl GradedAlgebra for MatrixAlgebra {
    type Basis = MatrixBasis;

    fn tag(&self) -> String {
        "M2(Q)".to_string()
    }

    fn window(&self) -> Window {
        self.window
    }

    fn degree(&self, _b: &MatrixBasis) -> i32 {
        0
    }

    fn unit(&self) -> MatrixBasis {
        MatrixBasis::Id
    }

    fn multiply(&self, a: &MatrixBasis, b: &MatrixBasis) -> LinComb<MatrixBasis> {
        use MatrixBasis::*;
        let w = self.window;
        let one = |k| LinComb::basis(w, k);
        let neg = |k| LinComb::scalar_term(w, k, rat(-1, 1));
        match (a, b) {
            (Id, x) | (x, Id) => one(*x),
            (H, H) => one(Id),
            (H, Upper) => one(Upper),
            (Upper, H) => neg(Upper),
            (H, Lower) => neg(Lower),
            (Lower, H) => one(Lower),
            (Upper, Upper) | (Lower, Lower) => LinComb::zero(w),
            // E01 E10 = E00 = (Id + H)/2, E10 E01 = E11 = (Id - H)/2
            (Upper, Lower) => {
                let mut out = LinComb::scalar_term(w, Id, rat(1, 2));
                out.add_term(H, &TULaurent::constant(w, rat(1, 2)));
                out
            }
            (Lower, Upper) => {
                let mut out = LinComb::scalar_term(w, Id, rat(1, 2));
                out.add_term(H, &TULaurent::constant(w, rat(-1, 2)));
                out
            }
        }
    }

    fn basis_upto(&self, _bound: usize) -> Vec<MatrixBasis> {
        vec![MatrixBasis::Id, MatrixBasis::H, MatrixBasis::Upper, MatrixBasis::Lower]
    }
}

/// The ground field as an algebra: a single basis element.
#[derive(Clone, Copy, Debug)]
pub struct GroundField {
    pub window: Window,
}

impl GroundField {
    pub fn new(window: Window) -> Self {
        GroundField { window }
    }
}

impl GradedAlgebra for GroundField {
    type Basis = ();

    fn tag(&self) -> String {
        "k".to_string()
    }

    fn window(&self) -> Window {
        self.window
    }

    fn degree(&self, _b: &()) -> i32 {
        0
    }

    fn unit(&self) {}

    fn multiply(&self, _a: &(), _b: &()) -> LinComb<()> {
        LinComb::basis(self.window, ())
    }

    fn basis_upto(&self, _bound: usize) -> Vec<()> {
        vec![()]
    }
}
