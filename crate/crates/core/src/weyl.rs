//! Truncated Weyl algebra with the Moyal product.
//!
//! Coordinates are indexed `0..2d`: index `i < d` is `x_{i+1}`, index
//! `d + i` is `xi_{i+1}`. Elements are polynomials in these coordinates
//! with [`TULaurent`] coefficients, truncated above a total degree `cap`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conventions::MOYAL_SIGN;
use crate::lincomb::LinComb;
use crate::scalars::{factorial, falling, int, rat, Rational, ScalarError, TULaurent, TULaurentJson, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(WeylShape, WeylShape),
    #[error("expected a homogeneous t-free quadratic")]
    NotQuadratic,
    #[error("window does not contain t^0")]
    NoConstantSlot,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Exponent vector of a monomial in the `2d` coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(d: usize) -> Self {
        Monomial(vec![0; 2 * d])
    }

    /// The coordinate with the given index.
    pub fn var(d: usize, idx: usize) -> Self {
        let mut e = vec![0; 2 * d];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn d(&self) -> usize {
        self.0.len() / 2
    }

    /// Commutative product.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Index of the coordinate if this is a single coordinate.
    pub fn as_var(&self) -> Option<usize> {
        if self.degree() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let d = self.d();
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            let name = if i < d { format!("x{}", i + 1) } else { format!("ξ{}", i - d + 1) };
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Half-dimension, degree cap and coefficient window of a Weyl algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylShape {
    pub d: usize,
    pub cap: usize,
    pub window: Window,
}

impl WeylShape {
    pub fn new(d: usize, cap: usize, window: Window) -> Self {
        WeylShape { d, cap, window }
    }
}

/// Terms of the Moyal product of two monomials: `(monomial, t-power, coefficient)`.
///
/// Expands `exp((t/2) s sum_i (d_{x_i} ⊗ d_{xi_i} - d_{xi_i} ⊗ d_{x_i}))`
/// coordinate pair by coordinate pair.
pub fn moyal_monomials(a: &Monomial, b: &Monomial) -> Vec<(Monomial, i32, Rational)> {
    let d = a.d();
    let mut acc: Vec<(Vec<u8>, i32, Rational)> = vec![(vec![0; 2 * d], 0, rat(1, 1))];
    for i in 0..d {
        let (ax, axi) = (a.0[i] as u32, a.0[d + i] as u32);
        let (bx, bxi) = (b.0[i] as u32, b.0[d + i] as u32);
        let mut opts = Vec::new();
        for k in 0..=ax.min(bxi) {
            for l in 0..=axi.min(bx) {
                let mut c = int(falling(ax, k) * falling(bxi, k) * falling(axi, l) * falling(bx, l));
                c /= factorial(k) * factorial(l);
                c *= rat(MOYAL_SIGN.pow(k + l), 1 << (k + l));
                if l % 2 == 1 {
                    c = -c;
                }
                opts.push(((ax + bx - k - l) as u8, (axi + bxi - k - l) as u8, (k + l) as i32, c));
            }
        }
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for (e, n, c) in &acc {
            for (ex, exi, m, c2) in &opts {
                let mut v = e.clone();
                v[i] = *ex;
                v[d + i] = *exi;
                next.push((v, n + m, c * c2));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(e, n, c)| (Monomial(e), n, c)).collect()
}

/// An element of the truncated Weyl algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    shape: WeylShape,
    terms: LinComb<Monomial>,
}

impl WeylElement {
    pub fn zero(shape: WeylShape) -> Self {
        WeylElement { shape, terms: LinComb::zero(shape.window) }
    }

    pub fn one(shape: WeylShape) -> Self {
        Self::monomial(shape, Monomial::one(shape.d), TULaurent::one(shape.window))
    }

    pub fn scalar(shape: WeylShape, c: TULaurent) -> Self {
        Self::monomial(shape, Monomial::one(shape.d), c)
    }

    /// `c m`, clipped if `m` exceeds the cap.
    pub fn monomial(shape: WeylShape, m: Monomial, c: TULaurent) -> Self {
        let mut out = Self::zero(shape);
        out.add_term(m, &c);
        out
    }

    /// The coordinate with index `idx` (see module docs).
    pub fn var(shape: WeylShape, idx: usize) -> Self {
        Self::monomial(shape, Monomial::var(shape.d, idx), TULaurent::one(shape.window))
    }

    /// `x_{i+1}`.
    pub fn x(shape: WeylShape, i: usize) -> Self {
        Self::var(shape, i)
    }

    /// `xi_{i+1}`.
    pub fn xi(shape: WeylShape, i: usize) -> Self {
        Self::var(shape, shape.d + i)
    }

    /// `t^i` as a central element.
    pub fn t_power(shape: WeylShape, i: i32) -> Self {
        Self::scalar(shape, TULaurent::monomial(shape.window, rat(1, 1), i, 0))
    }

    pub fn from_lincomb(shape: WeylShape, terms: LinComb<Monomial>) -> Self {
        let mut out = Self::zero(shape);
        if terms.is_clipped() {
            out.terms.mark_clipped();
        }
        for (m, c) in terms.iter() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn shape(&self) -> WeylShape {
        self.shape
    }

    pub fn d(&self) -> usize {
        self.shape.d
    }

    pub fn cap(&self) -> usize {
        self.shape.cap
    }

    pub fn terms(&self) -> &LinComb<Monomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn is_clipped(&self) -> bool {
        self.terms.is_clipped()
    }

    pub fn coeff(&self, m: &Monomial) -> TULaurent {
        self.terms.coeff(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: &TULaurent) {
        if m.degree() > self.shape.cap {
            if !c.is_zero() {
                self.terms.mark_clipped();
            }
            return;
        }
        self.terms.add_term(m, c);
    }

    fn check(&self, other: &Self) -> Result<(), WeylError> {
        if self.shape != other.shape {
            return Err(WeylError::ShapeMismatch(self.shape, other.shape));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        Ok(WeylElement { shape: self.shape, terms: self.terms.plus(&other.terms) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        Ok(WeylElement { shape: self.shape, terms: self.terms.minus(&other.terms) })
    }

    pub fn scale(&self, c: &TULaurent) -> Self {
        WeylElement { shape: self.shape, terms: self.terms.scale(c) }
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        WeylElement { shape: self.shape, terms: self.terms.scale_q(c) }
    }

    /// Multiply by `t^i`.
    pub fn shift_t(&self, i: i32) -> Self {
        WeylElement { shape: self.shape, terms: self.terms.shift(i, 0) }
    }

    /// Part of polynomial degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        WeylElement { shape: self.shape, terms: self.terms.filter(|m| m.degree() == k) }
    }

    /// Coefficient of the monomial `1`.
    pub fn constant_term(&self) -> TULaurent {
        self.coeff(&Monomial::one(self.shape.d))
    }

    /// Drop the coefficient of the monomial `1`.
    pub fn without_constant(&self) -> Self {
        WeylElement { shape: self.shape, terms: self.terms.filter(|m| !m.is_one()) }
    }

    pub fn to_json(&self) -> WeylJson {
        WeylJson {
            d: self.shape.d,
            cap: self.shape.cap,
            terms: self.terms.iter().map(|(m, c)| WeylTermJson { alpha: m.0.clone(), coeff: c.to_json() }).collect(),
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})·{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylJson {
    pub d: usize,
    pub cap: usize,
    pub terms: Vec<WeylTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylTermJson {
    pub alpha: Vec<u8>,
    pub coeff: TULaurentJson,
}

/// `f * g`.
pub fn moyal_mul(f: &WeylElement, g: &WeylElement) -> Result<WeylElement, WeylError> {
    f.check(g)?;
    let mut out = WeylElement::zero(f.shape);
    if f.is_clipped() || g.is_clipped() {
        out.terms.mark_clipped();
    }
    for (a, ca) in f.terms.iter() {
        for (b, cb) in g.terms.iter() {
            let cab = ca * cb;
            for (m, n, c) in moyal_monomials(a, b) {
                out.add_term(m, &cab.shift(n, 0).scale(&c));
            }
        }
    }
    Ok(out)
}

/// `f * g - g * f`.
pub fn commutator(f: &WeylElement, g: &WeylElement) -> Result<WeylElement, WeylError> {
    moyal_mul(f, g)?.sub(&moyal_mul(g, f)?)
}

/// Pointwise commutative product of symbols.
pub fn commutative_mul(f: &WeylElement, g: &WeylElement) -> Result<WeylElement, WeylError> {
    f.check(g)?;
    let mut out = WeylElement::zero(f.shape);
    for (a, ca) in f.terms.iter() {
        for (b, cb) in g.terms.iter() {
            out.add_term(a.times(b), &(ca * cb));
        }
    }
    Ok(out)
}

/// Largest `p` with `f` in `F_{-p}`: the minimum of polynomial degree plus
/// twice the `t`-exponent. `None` for zero.
pub fn filtration_order(f: &WeylElement) -> Option<i64> {
    f.terms
        .iter()
        .flat_map(|(m, c)| c.terms().map(move |(&(i, _), _)| m.degree() as i64 + 2 * i64::from(i)))
        .min()
}

/// Reduction modulo `t`: keep the `t^0` part.
pub fn symbol(f: &WeylElement) -> Result<WeylElement, WeylError> {
    let w = f.shape.window;
    if !(w.t_min..=w.t_max).contains(&0) {
        return Err(WeylError::NoConstantSlot);
    }
    let mut out = WeylElement::zero(f.shape);
    for (m, c) in f.terms.iter() {
        out.add_term(m.clone(), &c.t_component(0));
    }
    Ok(out)
}

/// The derivation `(1/t) ad(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylDerivation {
    generator: WeylElement,
    normalized: bool,
}

impl WeylDerivation {
    /// Derivation with the constant-free representative of `g`.
    pub fn new(g: &WeylElement) -> Self {
        WeylDerivation { generator: g.without_constant(), normalized: true }
    }

    /// Keep the generator as given, including its constant term.
    pub fn raw(g: &WeylElement) -> Self {
        WeylDerivation { generator: g.clone(), normalized: g.constant_term().is_zero() }
    }

    pub fn generator(&self) -> &WeylElement {
        &self.generator
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn normalize(&self) -> Self {
        Self::new(&self.generator)
    }

    /// `[D1, D2] = (1/t) ad((1/t)[g1, g2])`.
    pub fn bracket(&self, other: &Self) -> Result<Self, WeylError> {
        Ok(Self::new(&commutator(&self.generator, &other.generator)?.shift_t(-1)))
    }
}

/// `(1/t)(g * f - f * g)`.
pub fn derivation_apply(dv: &WeylDerivation, f: &WeylElement) -> Result<WeylElement, WeylError> {
    Ok(commutator(&dv.generator, f)?.shift_t(-1))
}

/// Matrix `M` with `M[r][c]` the coefficient of coordinate `r` in `D(z_c)`
/// for `D = (1/t) ad(q)`.
pub fn sp_matrix_of_quadratic(q: &WeylElement) -> Result<Vec<Vec<TULaurent>>, WeylError> {
    let shape = q.shape;
    let t_free = q.terms.iter().all(|(m, c)| m.degree() == 2 && c.terms().all(|(&(i, _), _)| i == 0));
    if !t_free {
        return Err(WeylError::NotQuadratic);
    }
    let n = 2 * shape.d;
    let dv = WeylDerivation::new(q);
    let mut mat = vec![vec![TULaurent::zero(shape.window); n]; n];
    for c in 0..n {
        let image = derivation_apply(&dv, &WeylElement::var(shape, c))?;
        for (m, coeff) in image.terms.iter() {
            let r = m.as_var().ok_or(WeylError::NotQuadratic)?;
            mat[r][c] = coeff.clone();
        }
    }
    Ok(mat)
}

/// Poisson pairing `pi(z_a, z_b)`, the coefficient with
/// `z_a * z_b - z_b * z_a = pi(a, b) t`.
pub fn poisson_pairing(d: usize, a: usize, b: usize) -> i64 {
    if a < d && b == a + d {
        MOYAL_SIGN
    } else if b < d && a == b + d {
        -MOYAL_SIGN
    } else {
        0
    }
}

/// Whether `M` preserves the Poisson pairing infinitesimally:
/// `pi(M u, v) + pi(u, M v) = 0` on coordinate vectors.
pub fn is_symplectic_matrix(d: usize, m: &[Vec<TULaurent>]) -> bool {
    let n = 2 * d;
    let win = m[0][0].window();
    for a in 0..n {
        for b in 0..n {
            let mut acc = TULaurent::zero(win);
            for r in 0..n {
                let p1 = poisson_pairing(d, r, b);
                if p1 != 0 {
                    acc += &m[r][a].scale(&int(p1));
                }
                let p2 = poisson_pairing(d, a, r);
                if p2 != 0 {
                    acc += &m[r][b].scale(&int(p2));
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// `[X,Y]~ - [X~,Y~]` for the constant-free lift `X~ = g/t`; equals
/// `-(1/t)` times the constant term of `(1/t)[g_X, g_Y]`.
pub fn central_cocycle_theta(x: &WeylDerivation, y: &WeylDerivation) -> Result<TULaurent, WeylError> {
    let h = commutator(&x.generator, &y.generator)?.shift_t(-1);
    Ok(-&h.constant_term().shift(-1, 0))
}

/// Reassemble a `2d x 2d` matrix of rationals from `sp_matrix_of_quadratic`
/// when all entries are constants.
pub fn constant_matrix(m: &[Vec<TULaurent>]) -> Option<Vec<Vec<Rational>>> {
    m.iter().map(|row| row.iter().map(TULaurent::as_constant).collect()).collect()
}

/// Whether all entries vanish.
pub fn is_zero_matrix(m: &[Vec<TULaurent>]) -> bool {
    m.iter().all(|row| row.iter().all(TULaurent::is_zero))
}

/// Strictly triangular in some coordinate order means nilpotent; this
/// checks `M^n = 0` directly.
pub fn is_nilpotent(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut p = m.to_vec();
    for _ in 1..n {
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    next[i][j] += &p[i][k] * &m[k][j];
                }
            }
        }
        p = next;
    }
    p.iter().all(|row| row.iter().all(Zero::is_zero))
}
