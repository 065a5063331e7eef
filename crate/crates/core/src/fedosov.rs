//! Fedosov connections on the formal polydisk.
//!
//! Forms are sums `dz_I z^a w(y, t)` with base coordinates `z_0..z_{2d-1}`,
//! fiber coordinates `y` of the Weyl algebra (same index layout as
//! [`crate::weyl`]) and fiber coefficients [`WeylElement`]s. A lift is a
//! `(1/t)W`-valued 1-form `Ã`; the connection on sections is
//! `∇s = ds + [Ã, s]`.
//!
//! The fiber weight of `y^m t^k` is `|m| + 2k`. All truncations are by fiber
//! weight and derive from the depth `N`: lifts keep weight `<= N + 1`,
//! curvatures and sections keep weight `<= N`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conventions::MOYAL_SIGN;
use crate::lincomb::LinComb;
use crate::scalars::{factorial, int, parse_rational, rat, Rational, ScalarError, TULaurent, Window};
use crate::weyl::{moyal_mul, Monomial, WeylElement, WeylError, WeylJson, WeylShape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FedosovError {
    #[error("target 2-form is not closed")]
    NotClosed,
    #[error("expected a fiber-constant form")]
    NotScalar,
    #[error("expected form degree {expected}, got {got}")]
    Degree { expected: usize, got: usize },
    #[error("form shapes differ")]
    ShapeMismatch,
    #[error("coefficient t^{0} is below t^-1")]
    PoleOrder(i32),
    #[error("gauge generator has fiber weight {0}, below F_-1")]
    NotInF1(i64),
    #[error("normalization needs fiber weight >= 2 and fiber degree >= 2")]
    Normalization,
    #[error("depth must be at least 1")]
    Depth,
    #[error("connections differ below F_-1 or in curvature at weight {0}")]
    NotGaugeEquivalent(i64),
    #[error("malformed form table: {0}")]
    Table(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Half-dimension and truncation depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FedosovShape {
    pub d: usize,
    pub depth: usize,
}

impl FedosovShape {
    pub fn new(d: usize, depth: usize) -> Result<Self, FedosovError> {
        if depth == 0 {
            return Err(FedosovError::Depth);
        }
        Ok(FedosovShape { d, depth })
    }

    /// Fiber algebra wide enough that no product of truncated operands clips.
    pub fn weyl(&self) -> WeylShape {
        let n = self.depth as i32;
        let window = Window { t_min: -3, t_max: 2 * n + 8, u_min: 0, u_max: 0 };
        WeylShape::new(self.d, 2 * self.depth + 8, window)
    }

    /// Largest fiber weight kept in lifts and gauge generators.
    pub fn lift_limit(&self) -> i64 {
        self.depth as i64 + 1
    }

    /// Largest fiber weight kept in curvatures and sections.
    pub fn limit(&self) -> i64 {
        self.depth as i64
    }
}

/// Index of a term: sorted differential indices and a base monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormKey {
    pub dz: Vec<u8>,
    pub base: Monomial,
}

/// A homogeneous form on the formal polydisk with Weyl fiber coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalForm {
    shape: FedosovShape,
    degree: usize,
    terms: BTreeMap<FormKey, WeylElement>,
}

fn fiber_sum(a: &WeylElement, b: &WeylElement) -> WeylElement {
    WeylElement::from_lincomb(a.shape(), a.terms().plus(b.terms()))
}

fn weight(m: &Monomial, t: i32) -> i64 {
    m.degree() as i64 + 2 * i64::from(t)
}

fn fiber_truncate(w: &WeylElement, limit: i64) -> WeylElement {
    let window = w.shape().window;
    let mut out = LinComb::zero(window);
    for (m, c) in w.terms().iter() {
        let kept = TULaurent::from_terms(
            window,
            c.terms().filter(|(&(t, _), _)| weight(m, t) <= limit).map(|(&(t, u), q)| (t, u, q.clone())),
        );
        out.add_term(m.clone(), &kept);
    }
    if w.is_clipped() {
        out.mark_clipped();
    }
    WeylElement::from_lincomb(w.shape(), out)
}

fn fiber_min_weight(w: &WeylElement) -> Option<i64> {
    w.terms().iter().flat_map(|(m, c)| c.terms().map(move |(&(t, _), _)| weight(m, t))).min()
}

/// `∂ w / ∂ y_k`.
fn fiber_derivative(w: &WeylElement, k: usize) -> WeylElement {
    let mut out = WeylElement::zero(w.shape());
    for (m, c) in w.terms().iter() {
        let e = m.0[k];
        if e == 0 {
            continue;
        }
        let mut m2 = m.clone();
        m2.0[k] -= 1;
        out.add_term(m2, &c.scale(&int(i64::from(e))));
    }
    out
}

/// `y_k w` (commutative).
fn fiber_times_var(w: &WeylElement, k: usize) -> WeylElement {
    let mut out = WeylElement::zero(w.shape());
    for (m, c) in w.terms().iter() {
        let mut m2 = m.clone();
        m2.0[k] += 1;
        out.add_term(m2, c);
    }
    out
}

/// Sign of `dz_i ∧ dz_I` relative to the sorted index set, or `None` if `i ∈ I`.
fn insert_sign(i: u8, set: &[u8]) -> Option<(i64, Vec<u8>)> {
    match set.binary_search(&i) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = set.to_vec();
            out.insert(pos, i);
            Some((if pos % 2 == 0 { 1 } else { -1 }, out))
        }
    }
}

/// Sign of `dz_I ∧ dz_J` relative to the sorted union, or `None` if they meet.
fn merge_sign(a: &[u8], b: &[u8]) -> Option<(i64, Vec<u8>)> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut out: Vec<u8> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, out))
}

/// Contraction `ι_{∂/∂z_i}` on a sorted index set: sign and remaining indices.
fn contract_sign(i: u8, set: &[u8]) -> Option<(i64, Vec<u8>)> {
    let pos = set.iter().position(|&j| j == i)?;
    let mut out = set.to_vec();
    out.remove(pos);
    Some((if pos % 2 == 0 { 1 } else { -1 }, out))
}

impl FormalForm {
    pub fn zero(shape: FedosovShape, degree: usize) -> Self {
        FormalForm { shape, degree, terms: BTreeMap::new() }
    }

    /// `c t^k dz_I z^base` with a fiber-constant coefficient.
    pub fn scalar_term(shape: FedosovShape, dz: &[u8], base: Monomial, t: i32, c: Rational) -> Self {
        let ws = shape.weyl();
        let w = WeylElement::scalar(ws, TULaurent::monomial(ws.window, c, t, 0));
        Self::term(shape, dz, base, w)
    }

    /// `dz_I z^base w`, reordering `dz` into normal form.
    pub fn term(shape: FedosovShape, dz: &[u8], base: Monomial, w: WeylElement) -> Self {
        let mut out = Self::zero(shape, dz.len());
        let mut set: Vec<u8> = Vec::new();
        let mut sign = 1;
        for &i in dz.iter().rev() {
            match insert_sign(i, &set) {
                Some((s, next)) => {
                    sign *= s;
                    set = next;
                }
                None => return out,
            }
        }
        out.add(FormKey { dz: set, base }, &w.scale_q(&int(sign)));
        out
    }

    /// The section `w` constant along the base.
    pub fn fiber(shape: FedosovShape, w: WeylElement) -> Self {
        Self::term(shape, &[], Monomial::one(shape.d), w)
    }

    pub fn shape(&self) -> FedosovShape {
        self.shape
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &WeylElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_clipped(&self) -> bool {
        self.terms.values().any(WeylElement::is_clipped)
    }

    fn add(&mut self, key: FormKey, w: &WeylElement) {
        if w.is_zero() && !w.is_clipped() {
            return;
        }
        let entry = match self.terms.remove(&key) {
            Some(old) => fiber_sum(&old, w),
            None => w.clone(),
        };
        if !entry.is_zero() || entry.is_clipped() {
            self.terms.insert(key, entry);
        }
    }

    fn check(&self, other: &Self) -> Result<(), FedosovError> {
        if self.shape != other.shape {
            return Err(FedosovError::ShapeMismatch);
        }
        if self.degree != other.degree {
            return Err(FedosovError::Degree { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self, FedosovError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, w) in &other.terms {
            out.add(k.clone(), w);
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self, FedosovError> {
        self.plus(&other.neg())
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.shape, self.degree);
        for (k, w) in &self.terms {
            out.add(k.clone(), &w.scale_q(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale_q(&rat(-1, 1))
    }

    fn map_fibers<F: Fn(&WeylElement) -> WeylElement>(&self, f: F) -> Self {
        let mut out = Self::zero(self.shape, self.degree);
        for (k, w) in &self.terms {
            out.add(k.clone(), &f(w));
        }
        out
    }

    /// The same form over another shape with the same `d`; coefficients
    /// outside the new window are dropped.
    pub fn rebased(&self, to: FedosovShape) -> Result<Self, FedosovError> {
        if to.d != self.shape.d {
            return Err(FedosovError::ShapeMismatch);
        }
        let ws = to.weyl();
        let mut out = Self::zero(to, self.degree);
        for (k, w) in &self.terms {
            let mut l = LinComb::zero(ws.window);
            for (m, c) in w.terms().iter() {
                let mut c2 = TULaurent::zero(ws.window);
                for (&(t, u), q) in c.terms() {
                    c2.add_term(t, u, q.clone());
                }
                l.add_term(m.clone(), &c2);
            }
            out.add(k.clone(), &WeylElement::from_lincomb(ws, l));
        }
        Ok(out)
    }

    /// Drop fiber components of weight above `limit`.
    pub fn truncated(&self, limit: i64) -> Self {
        self.map_fibers(|w| fiber_truncate(w, limit))
    }

    /// Smallest fiber weight present, `None` for zero.
    pub fn min_weight(&self) -> Option<i64> {
        self.terms.values().filter_map(fiber_min_weight).min()
    }

    /// Whether every fiber coefficient is a constant in `y`.
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|w| w.terms().keys().all(Monomial::is_one))
    }

    /// Fiber-constant part.
    pub fn scalar_part(&self) -> Self {
        self.map_fibers(|w| WeylElement::scalar(w.shape(), w.constant_term()))
    }

    /// Part with positive fiber degree.
    pub fn nonscalar_part(&self) -> Self {
        self.map_fibers(WeylElement::without_constant)
    }

    /// Part of a given fiber polynomial degree.
    pub fn fiber_degree_part(&self, k: usize) -> Self {
        self.map_fibers(|w| w.homogeneous_part(k))
    }

    /// Coefficient of `t^k`.
    pub fn t_component(&self, k: i32) -> Self {
        self.map_fibers(|w| {
            let mut l = LinComb::zero(w.shape().window);
            for (m, c) in w.terms().iter() {
                l.add_term(m.clone(), &c.t_component(k));
            }
            WeylElement::from_lincomb(w.shape(), l)
        })
    }

    /// Terms `t^k` with `k` in the given range.
    pub fn t_range(&self, lo: i32, hi: i32) -> Self {
        let mut out = Self::zero(self.shape, self.degree);
        for k in lo..=hi {
            out = out.plus(&self.t_component(k)).expect("same shape");
        }
        out
    }

    /// Smallest `t`-exponent present.
    pub fn min_t(&self) -> Option<i32> {
        self.terms.values().flat_map(|w| w.terms().iter().filter_map(|(_, c)| c.min_t())).min()
    }

    /// Serialized terms for reports.
    pub fn to_json(&self) -> FormalFormJson {
        FormalFormJson {
            d: self.shape.d,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, w)| FormalTermJson { dz: k.dz.clone(), z: k.base.0.clone(), fiber: w.to_json() })
                .collect(),
        }
    }

    /// Table of scalar terms `coeff t^t dz_I z^z`.
    pub fn to_scalar_table(&self) -> Result<ScalarFormJson, FedosovError> {
        if !self.is_scalar() {
            return Err(FedosovError::NotScalar);
        }
        let mut terms = Vec::new();
        for (k, w) in &self.terms {
            for (&(t, _), c) in w.constant_term().terms() {
                terms.push(ScalarTermJson { dz: k.dz.clone(), z: k.base.0.clone(), t, coeff: c.to_string() });
            }
        }
        Ok(ScalarFormJson { d: self.shape.d, degree: self.degree, terms })
    }

    /// Parse a scalar form table at the given depth.
    pub fn from_scalar_table(table: &ScalarFormJson, depth: usize) -> Result<Self, FedosovError> {
        let shape = FedosovShape::new(table.d, depth)?;
        let mut out = Self::zero(shape, table.degree);
        for term in &table.terms {
            if term.dz.len() != table.degree {
                return Err(FedosovError::Degree { expected: table.degree, got: term.dz.len() });
            }
            if term.z.len() != 2 * table.d || term.dz.iter().any(|&i| i as usize >= 2 * table.d) {
                return Err(FedosovError::Table(format!("index out of range in {term:?}")));
            }
            let c = parse_rational(&term.coeff)?;
            out = out.plus(&Self::scalar_term(shape, &term.dz, Monomial(term.z.clone()), term.t, c))?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormalFormJson {
    pub d: usize,
    pub degree: usize,
    pub terms: Vec<FormalTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormalTermJson {
    pub dz: Vec<u8>,
    pub z: Vec<u8>,
    pub fiber: WeylJson,
}

/// A scalar form as a table of `coeff · t^t · dz_I · z^z` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarFormJson {
    pub d: usize,
    pub degree: usize,
    pub terms: Vec<ScalarTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarTermJson {
    pub dz: Vec<u8>,
    pub z: Vec<u8>,
    pub t: i32,
    pub coeff: String,
}

/// Wedge product with the fiberwise Moyal product, truncated at `limit`.
pub fn wedge(a: &FormalForm, b: &FormalForm, limit: i64) -> Result<FormalForm, FedosovError> {
    if a.shape != b.shape {
        return Err(FedosovError::ShapeMismatch);
    }
    let mut out = FormalForm::zero(a.shape, a.degree + b.degree);
    for (ka, wa) in &a.terms {
        for (kb, wb) in &b.terms {
            let Some((sign, dz)) = merge_sign(&ka.dz, &kb.dz) else { continue };
            let prod = fiber_truncate(&moyal_mul(wa, wb)?, limit);
            out.add(FormKey { dz, base: ka.base.times(&kb.base) }, &prod.scale_q(&int(sign)));
        }
    }
    Ok(out)
}

/// Graded commutator `ab - (-1)^{|a||b|} ba`.
pub fn graded_commutator(a: &FormalForm, b: &FormalForm, limit: i64) -> Result<FormalForm, FedosovError> {
    let ab = wedge(a, b, limit)?;
    let ba = wedge(b, a, limit)?;
    if (a.degree * b.degree).is_multiple_of(2) {
        ab.minus(&ba)
    } else {
        ab.plus(&ba)
    }
}

/// Base de Rham differential `Σ dz_i ∂/∂z_i`.
pub fn de_rham(w: &FormalForm) -> FormalForm {
    let mut out = FormalForm::zero(w.shape, w.degree + 1);
    for (k, f) in &w.terms {
        for i in 0..k.base.0.len() {
            let e = k.base.0[i];
            if e == 0 {
                continue;
            }
            let Some((sign, dz)) = insert_sign(i as u8, &k.dz) else { continue };
            let mut base = k.base.clone();
            base.0[i] -= 1;
            out.add(FormKey { dz, base }, &f.scale_q(&int(sign * i64::from(e))));
        }
    }
    out
}

/// Homotopy for [`de_rham`]: `Σ z_i ι_{∂/∂z_i}` divided by base degree plus form degree.
pub fn de_rham_homotopy(w: &FormalForm) -> FormalForm {
    let mut out = FormalForm::zero(w.shape, w.degree.saturating_sub(1));
    if w.degree == 0 {
        return out;
    }
    for (k, f) in &w.terms {
        let total = (k.base.degree() + k.dz.len()) as i64;
        for &i in &k.dz {
            let (sign, dz) = contract_sign(i, &k.dz).expect("index present");
            let mut base = k.base.clone();
            base.0[i as usize] += 1;
            out.add(FormKey { dz, base }, &f.scale_q(&rat(sign, total)));
        }
    }
    out
}

/// Koszul differential `δ = Σ dz_i ∂/∂y_i`.
pub fn koszul_delta(w: &FormalForm) -> FormalForm {
    let mut out = FormalForm::zero(w.shape, w.degree + 1);
    for (k, f) in &w.terms {
        for i in 0..2 * w.shape.d {
            let Some((sign, dz)) = insert_sign(i as u8, &k.dz) else { continue };
            let df = fiber_derivative(f, i);
            out.add(FormKey { dz, base: k.base.clone() }, &df.scale_q(&int(sign)));
        }
    }
    out
}

/// `δ* = Σ y_i ι_{∂/∂z_i}`, the adjoint of the Koszul differential.
pub fn koszul_adjoint(w: &FormalForm) -> FormalForm {
    let mut out = FormalForm::zero(w.shape, w.degree.saturating_sub(1));
    if w.degree == 0 {
        return out;
    }
    for (k, f) in &w.terms {
        for &i in &k.dz {
            let (sign, dz) = contract_sign(i, &k.dz).expect("index present");
            let yf = fiber_times_var(f, i as usize);
            out.add(FormKey { dz, base: k.base.clone() }, &yf.scale_q(&int(sign)));
        }
    }
    out
}

/// Contracting homotopy: `δ*` divided by fiber degree plus form degree on
/// each component, so that `δh + hδ = id - π` with `π` the part of fiber
/// degree and form degree zero.
pub fn koszul_homotopy(w: &FormalForm) -> FormalForm {
    let mut out = FormalForm::zero(w.shape, w.degree.saturating_sub(1));
    if w.degree == 0 {
        return out;
    }
    for (k, f) in &w.terms {
        let q = k.dz.len();
        let mut by_degree: BTreeMap<usize, LinComb<Monomial>> = BTreeMap::new();
        for (m, c) in f.terms().iter() {
            by_degree.entry(m.degree()).or_insert_with(|| LinComb::zero(c.window())).add_term(m.clone(), c);
        }
        for (p, part) in by_degree {
            let part = WeylElement::from_lincomb(f.shape(), part);
            let single = FormalForm { shape: w.shape, degree: w.degree, terms: [(k.clone(), part)].into() };
            let scaled = koszul_adjoint(&single).scale_q(&rat(1, (p + q) as i64));
            out = out.plus(&scaled).expect("same shape");
        }
    }
    out
}

/// Part of fiber degree zero and form degree zero.
pub fn harmonic_part(w: &FormalForm) -> FormalForm {
    if w.degree > 0 {
        return FormalForm::zero(w.shape, w.degree);
    }
    w.scalar_part()
}

/// `A_{-1} = Σ dz_j a_j` with `[a_j, f] = ∂f/∂y_j`, so that `[A_{-1}, s] = δs`.
pub fn tautological_form(shape: FedosovShape) -> FormalForm {
    let ws = shape.weyl();
    let d = shape.d;
    let mut out = FormalForm::zero(shape, 1);
    for i in 0..d {
        let s = rat(MOYAL_SIGN, 1);
        let a_x = WeylElement::xi(ws, i).shift_t(-1).scale_q(&-s.clone());
        let a_xi = WeylElement::x(ws, i).shift_t(-1).scale_q(&s);
        out = out.plus(&FormalForm::term(shape, &[i as u8], Monomial::one(d), a_x)).expect("same shape");
        out = out.plus(&FormalForm::term(shape, &[(d + i) as u8], Monomial::one(d), a_xi)).expect("same shape");
    }
    out
}

/// `ω = Σ dz_{x_i} ∧ dz_{ξ_i}`.
pub fn symplectic_form(shape: FedosovShape) -> FormalForm {
    let mut out = FormalForm::zero(shape, 2);
    for i in 0..shape.d {
        let term = FormalForm::scalar_term(shape, &[i as u8, (shape.d + i) as u8], Monomial::one(shape.d), 0, rat(1, 1));
        out = out.plus(&term).expect("same shape");
    }
    out
}

/// Curvature of the tautological form alone: `ω/t` times the Moyal sign.
pub fn tautological_curvature(shape: FedosovShape) -> FormalForm {
    symplectic_form(shape).map_fibers(|w| w.shift_t(-1).scale_q(&rat(MOYAL_SIGN, 1)))
}

/// A lift split by role. All parts are 1-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionData {
    pub shape: FedosovShape,
    /// The tautological form.
    pub a_minus1: FormalForm,
    /// Fiber-quadratic `t^-1` part (values in `sp`).
    pub a_0: FormalForm,
    /// Remaining non-central part, fiber weight `>= 1`.
    pub higher: FormalForm,
    /// Fiber-constant part.
    pub central_lift: FormalForm,
    /// Smallest fiber weight of the curvature residual after each recursion
    /// step, `None` once it vanishes within the truncation.
    pub residual_weights: Vec<Option<i64>>,
}

impl ConnectionData {
    /// The full lift `Ã`.
    pub fn lift(&self) -> FormalForm {
        [&self.a_0, &self.higher, &self.central_lift]
            .into_iter()
            .fold(self.a_minus1.clone(), |acc, p| acc.plus(p).expect("same shape"))
    }

    /// The lift without the tautological part.
    fn perturbation(&self) -> FormalForm {
        self.lift().minus(&self.a_minus1).expect("same shape")
    }

    /// Split a lift into its parts. The tautological part is taken from the
    /// fiber-linear `t^-1` terms.
    pub fn from_lift(shape: FedosovShape, lift: &FormalForm) -> Result<Self, FedosovError> {
        if lift.degree != 1 {
            return Err(FedosovError::Degree { expected: 1, got: lift.degree });
        }
        let central = lift.scalar_part();
        let a_minus1 = lift.fiber_degree_part(1).t_component(-1);
        let a_0 = lift.fiber_degree_part(2).t_component(-1);
        let higher = lift.minus(&central)?.minus(&a_minus1)?.minus(&a_0)?;
        Ok(ConnectionData { shape, a_minus1, a_0, higher, central_lift: central, residual_weights: Vec::new() })
    }

    /// The structural conditions: tautological part equal to
    /// [`tautological_form`], `A_0` fiber-quadratic in `t^-1`, the rest in
    /// weight `>= 1` or central.
    pub fn is_fedosov(&self) -> bool {
        self.a_minus1 == tautological_form(self.shape)
            && self.a_0 == self.a_0.fiber_degree_part(2).t_component(-1)
            && self.higher.min_weight().is_none_or(|w| w >= 1)
            && self.central_lift.is_scalar()
    }

    pub fn is_clipped(&self) -> bool {
        [&self.a_minus1, &self.a_0, &self.higher, &self.central_lift].iter().any(|p| p.is_clipped())
    }
}

fn check_target(theta: &FormalForm) -> Result<(), FedosovError> {
    if theta.degree != 2 {
        return Err(FedosovError::Degree { expected: 2, got: theta.degree });
    }
    if !theta.is_scalar() {
        return Err(FedosovError::NotScalar);
    }
    if let Some(k) = theta.min_t() {
        if k < -1 {
            return Err(FedosovError::PoleOrder(k));
        }
    }
    if !de_rham(theta).is_zero() {
        return Err(FedosovError::NotClosed);
    }
    Ok(())
}

/// Lift with curvature `ω/t + θ` modulo fiber weight `> N`.
///
/// The `t^-1` part of `θ` enters as a central lift `K(θ_{-1})` with `K`
/// the de Rham homotopy; the rest is solved in `F_-1` by iterating
/// `r = δμ + h(θ - dr - r r)`.
pub fn fedosov_recursion(theta: &FormalForm) -> Result<ConnectionData, FedosovError> {
    fedosov_recursion_normalized(theta, &FormalForm::zero(theta.shape, 0))
}

/// [`fedosov_recursion`] with normalization `h r = μ` for a 0-form `μ` of
/// fiber weight `>= 2` and fiber degree `>= 2`.
pub fn fedosov_recursion_normalized(theta: &FormalForm, mu: &FormalForm) -> Result<ConnectionData, FedosovError> {
    check_target(theta)?;
    let shape = theta.shape;
    if mu.degree != 0 {
        return Err(FedosovError::Degree { expected: 0, got: mu.degree });
    }
    if let Some(w) = mu.min_weight() {
        if w < 2 || !mu.fiber_degree_part(0).is_zero() || !mu.fiber_degree_part(1).is_zero() {
            return Err(FedosovError::Normalization);
        }
    }
    let limit = shape.lift_limit();
    let polar = theta.t_component(-1);
    let regular = theta.minus(&polar)?;
    let central = de_rham_homotopy(&polar);
    let seed = koszul_delta(mu).truncated(limit);
    let mut r = FormalForm::zero(shape, 1);
    let mut residual_weights = Vec::new();
    loop {
        let rr = wedge(&r, &r, limit)?;
        let curv = de_rham(&r).plus(&koszul_delta(&r))?.plus(&rr)?;
        let residual = regular.minus(&curv)?.truncated(shape.limit());
        let w = residual.min_weight();
        residual_weights.push(w);
        if w.is_none() {
            break;
        }
        let rhs = regular.minus(&de_rham(&r))?.minus(&rr)?;
        r = seed.plus(&koszul_homotopy(&rhs))?.truncated(limit);
        if residual_weights.len() > shape.depth + 3 {
            break;
        }
    }
    let a_minus1 = tautological_form(shape);
    let mut out = ConnectionData::from_lift(shape, &a_minus1.plus(&r)?.plus(&central)?)?;
    out.residual_weights = residual_weights;
    Ok(out)
}

/// `dÃ + ½[Ã, Ã]` modulo fiber weight `> N`.
pub fn curvature_of_lift(a: &ConnectionData) -> FormalForm {
    let lift = a.lift();
    let limit = a.shape.limit();
    let sq = wedge(&lift, &lift, limit).expect("same shape");
    de_rham(&lift).plus(&sq).expect("same shape").truncated(limit)
}

/// The curvature with the tautological constant `ω/t` removed.
pub fn extract_theta(a: &ConnectionData) -> Result<FormalForm, FedosovError> {
    let curv = curvature_of_lift(a);
    if !curv.is_scalar() {
        return Err(FedosovError::NotScalar);
    }
    curv.minus(&tautological_curvature(a.shape))
}

/// `exp(ad X)(d + Ã)`: the lift `e^{ad X} Ã - Σ_k (ad X)^k dX / (k+1)!`.
pub fn gauge_transform(x: &FormalForm, a: &ConnectionData) -> Result<ConnectionData, FedosovError> {
    if x.degree != 0 {
        return Err(FedosovError::Degree { expected: 0, got: x.degree });
    }
    if x.shape != a.shape {
        return Err(FedosovError::ShapeMismatch);
    }
    if let Some(w) = x.min_weight() {
        if w < 1 {
            return Err(FedosovError::NotInF1(w));
        }
    }
    let limit = a.shape.lift_limit();
    let x = x.truncated(limit + 1);
    let mut out = a.lift();
    let mut term = a.lift();
    let mut k = 1u32;
    loop {
        term = graded_commutator(&x, &term, limit)?.scale_q(&rat(1, i64::from(k)));
        if term.is_zero() {
            break;
        }
        out = out.plus(&term)?;
        k += 1;
    }
    let mut term = de_rham(&x).truncated(limit);
    let mut k = 0u32;
    while !term.is_zero() {
        out = out.minus(&term.scale_q(&(Rational::one() / factorial(k + 1))))?;
        term = graded_commutator(&x, &term, limit)?;
        k += 1;
    }
    let mut b = ConnectionData::from_lift(a.shape, &out.truncated(limit))?;
    b.residual_weights = a.residual_weights.clone();
    Ok(b)
}

/// Generators `X_n` with `exp(ad X_k)…exp(ad X_1)(d + A) = d + B` modulo
/// central terms and fiber weight `> N + 1`, one per filtration level.
pub fn gauge_equivalence(a: &ConnectionData, b: &ConnectionData) -> Result<Vec<FormalForm>, FedosovError> {
    if a.shape != b.shape {
        return Err(FedosovError::ShapeMismatch);
    }
    let target = b.lift().nonscalar_part();
    let mut current = a.clone();
    let mut steps = Vec::new();
    loop {
        let diff = target.minus(&current.lift().nonscalar_part())?;
        let Some(n) = diff.min_weight() else { return Ok(steps) };
        if n < 1 {
            return Err(FedosovError::NotGaugeEquivalent(n));
        }
        let lowest = diff.truncated(n);
        if !koszul_delta(&lowest).is_zero() {
            return Err(FedosovError::NotGaugeEquivalent(n));
        }
        let x = koszul_homotopy(&lowest).neg();
        current = gauge_transform(&x, &current)?;
        steps.push(x);
    }
}

/// The horizontal section with `π s = f` for a 0-form `f` of fiber degree
/// zero: the fixed point of `s = f - h(ds + [Ã - A_{-1}, s])`.
pub fn horizontal_section(a: &ConnectionData, f: &FormalForm) -> Result<FormalForm, FedosovError> {
    if f.degree != 0 {
        return Err(FedosovError::Degree { expected: 0, got: f.degree });
    }
    if !f.is_scalar() {
        return Err(FedosovError::NotScalar);
    }
    let limit = a.shape.limit();
    let pert = a.perturbation();
    let mut s = f.truncated(limit);
    for _ in 0..=limit + 1 {
        let rhs = de_rham(&s).plus(&graded_commutator(&pert, &s, limit)?)?;
        let next = f.minus(&koszul_homotopy(&rhs))?.truncated(limit);
        if next == s {
            break;
        }
        s = next;
    }
    Ok(s)
}

/// `∇s` modulo fiber weight `> N - 1`, the range where it is determined by
/// a section known to weight `N`.
pub fn covariant_derivative(a: &ConnectionData, s: &FormalForm) -> Result<FormalForm, FedosovError> {
    let limit = a.shape.limit();
    let lift = a.lift();
    Ok(de_rham(s).plus(&graded_commutator(&lift, s, limit)?)?.truncated(limit - 1))
}

/// Product of base functions through horizontal sections: `π(s_f s_g)`.
pub fn kernel_product(a: &ConnectionData, f: &FormalForm, g: &FormalForm) -> Result<FormalForm, FedosovError> {
    let sf = horizontal_section(a, f)?;
    let sg = horizontal_section(a, g)?;
    Ok(harmonic_part(&wedge(&sf, &sg, a.shape.limit())?))
}

/// A base polynomial `Σ c z^m` with rational coefficients as a scalar 0-form.
pub fn base_function(shape: FedosovShape, terms: &[(Monomial, i32, Rational)]) -> FormalForm {
    terms.iter().fold(FormalForm::zero(shape, 0), |acc, (m, t, c)| {
        acc.plus(&FormalForm::scalar_term(shape, &[], m.clone(), *t, c.clone())).expect("same shape")
    })
}

/// Reinterpret a scalar 0-form as a Weyl element in the base coordinates.
pub fn base_as_weyl(f: &FormalForm, shape: WeylShape) -> Result<WeylElement, FedosovError> {
    if f.degree != 0 || !f.is_scalar() {
        return Err(FedosovError::NotScalar);
    }
    let mut out = WeylElement::zero(shape);
    for (k, w) in &f.terms {
        let mut c = TULaurent::zero(shape.window);
        for (&(t, u), q) in w.constant_term().terms() {
            c.add_term(t, u, q.clone());
        }
        out.add_term(k.base.clone(), &c);
    }
    Ok(out)
}

/// Whether every `t^k` coefficient with `2k <= limit` agrees.
pub fn agree_to_weight(a: &WeylElement, b: &WeylElement, limit: i64) -> bool {
    let diff = WeylElement::from_lincomb(a.shape(), a.terms().minus(b.terms()));
    let agree = diff.terms().iter().all(|(_, c)| c.terms().all(|(&(t, _), q)| q.is_zero() || 2 * i64::from(t) > limit));
    agree
}
