//! Exact rationals, truncated Laurent series in `t` and `u`, and the named
//! characteristic power series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number. `BigRational` keeps itself reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Build `n/d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build an integer [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Falling factorial `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    (n - k + 1..=n).map(i64::from).product()
}

/// `(-1)^k` as `i64`.
pub fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("window mismatch: {0:?} vs {1:?}")]
    WindowMismatch(Window, Window),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("unknown series name `{0}`")]
    UnknownSeries(String),
    #[error("malformed rational `{0}`")]
    BadRational(String),
}

/// Exponent box for `t` and `u`. Every series operation clips to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub t_min: i32,
    pub t_max: i32,
    pub u_min: i32,
    pub u_max: i32,
}

impl Window {
    pub fn new(t_min: i32, t_max: i32, u_min: i32, u_max: i32) -> Result<Self, ScalarError> {
        if t_min > t_max || u_min > u_max {
            return Err(ScalarError::InvalidWindow(format!(
                "t[{t_min},{t_max}] u[{u_min},{u_max}]"
            )));
        }
        Ok(Window { t_min, t_max, u_min, u_max })
    }

    /// A window that is wide enough for every identity checked in this crate.
    pub fn standard() -> Self {
        Window { t_min: -12, t_max: 12, u_min: -12, u_max: 12 }
    }

    pub fn contains(&self, t: i32, u: i32) -> bool {
        (self.t_min..=self.t_max).contains(&t) && (self.u_min..=self.u_max).contains(&u)
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::standard()
    }
}

/// Sparse series `sum c_{ij} t^i u^j` restricted to a [`Window`].
///
/// Equality ignores the clip flag: two values are equal when they have the
/// same window and the same stored terms.
#[derive(Clone, Debug)]
pub struct TULaurent {
    window: Window,
    terms: BTreeMap<(i32, i32), Rational>,
    clipped: bool,
}

impl PartialEq for TULaurent {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.terms == other.terms
    }
}

impl Eq for TULaurent {}

impl TULaurent {
    pub fn zero(window: Window) -> Self {
        TULaurent { window, terms: BTreeMap::new(), clipped: false }
    }

    pub fn one(window: Window) -> Self {
        Self::monomial(window, rat(1, 1), 0, 0)
    }

    pub fn constant(window: Window, c: Rational) -> Self {
        Self::monomial(window, c, 0, 0)
    }

    /// `c t^i u^j`, clipped if outside the window.
    pub fn monomial(window: Window, c: Rational, i: i32, j: i32) -> Self {
        let mut out = Self::zero(window);
        out.add_term(i, j, c);
        out
    }

    /// Build from `(t, u, coefficient)` triples; repeated exponents add up.
    pub fn from_terms<I>(window: Window, terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, i32, Rational)>,
    {
        let mut out = Self::zero(window);
        for (i, j, c) in terms {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_clipped(&self) -> bool {
        self.clipped
    }

    pub fn mark_clipped(&mut self) {
        self.clipped = true;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i32, j: i32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest `t` exponent present.
    pub fn min_t(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min()
    }

    /// Coefficient of `t^0 u^0` if the value is a pure constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        if !self.window.contains(i, j) {
            self.clipped = true;
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.window != other.window {
            return Err(ScalarError::WindowMismatch(self.window, other.window));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = self.clone();
        out.clipped |= other.clipped;
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = Self::zero(self.window);
        out.clipped = self.clipped || other.clipped;
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.window);
        out.clipped = self.clipped;
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(*k, v * c);
        }
        out
    }

    /// Multiply by `t^di u^dj`.
    pub fn shift(&self, di: i32, dj: i32) -> Self {
        let mut out = Self::zero(self.window);
        out.clipped = self.clipped;
        for (&(i, j), c) in &self.terms {
            out.add_term(i + di, j + dj, c.clone());
        }
        out
    }

    /// Keep only terms with the given `u` exponent.
    pub fn u_component(&self, j: i32) -> Self {
        let mut out = Self::zero(self.window);
        for (&(i, jj), c) in &self.terms {
            if jj == j {
                out.terms.insert((i, jj), c.clone());
            }
        }
        out
    }

    /// Keep only terms with the given `t` exponent.
    pub fn t_component(&self, i: i32) -> Self {
        let mut out = Self::zero(self.window);
        for (&(ii, j), c) in &self.terms {
            if ii == i {
                out.terms.insert((ii, j), c.clone());
            }
        }
        out
    }

    /// Substitute `u = 1`, returning a series in `t` only.
    pub fn at_u_one(&self) -> Self {
        let mut out = Self::zero(self.window);
        for (&(i, _), c) in &self.terms {
            out.add_term(i, 0, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> TULaurentJson {
        TULaurentJson {
            window: self.window,
            terms: self
                .terms
                .iter()
                .map(|(&(t, u), c)| TermJson { t, u, num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &TULaurentJson) -> Result<Self, ScalarError> {
        let mut out = Self::zero(j.window);
        for term in &j.terms {
            let num: BigInt = term.num.parse().map_err(|_| ScalarError::BadRational(term.num.clone()))?;
            let den: BigInt = term.den.parse().map_err(|_| ScalarError::BadRational(term.den.clone()))?;
            if den.is_zero() {
                return Err(ScalarError::BadRational(format!("{}/{}", term.num, term.den)));
            }
            out.add_term(term.t, term.u, Rational::new(num, den));
        }
        Ok(out)
    }
}

/// JSON form `{window, terms: [{t, u, num, den}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TULaurentJson {
    pub window: Window,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub t: i32,
    pub u: i32,
    pub num: String,
    pub den: String,
}

impl fmt::Display for TULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let unit_coeff = a.is_one();
            if !unit_coeff || (i == 0 && j == 0) {
                write!(f, "{a}")?;
            }
            for (sym, e) in [("t", i), ("u", j)] {
                if e == 0 {
                    continue;
                }
                if !unit_coeff {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "{sym}")?;
                } else {
                    write!(f, "{sym}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add<&TULaurent> for &TULaurent {
    type Output = TULaurent;
    /// Panics on window mismatch; use [`TULaurent::checked_add`] to handle it.
    fn add(self, rhs: &TULaurent) -> TULaurent {
        self.checked_add(rhs).expect("TULaurent window mismatch")
    }
}

impl Sub<&TULaurent> for &TULaurent {
    type Output = TULaurent;
    fn sub(self, rhs: &TULaurent) -> TULaurent {
        self.checked_add(&-rhs).expect("TULaurent window mismatch")
    }
}

impl Mul<&TULaurent> for &TULaurent {
    type Output = TULaurent;
    /// Panics on window mismatch; use [`TULaurent::checked_mul`] to handle it.
    fn mul(self, rhs: &TULaurent) -> TULaurent {
        self.checked_mul(rhs).expect("TULaurent window mismatch")
    }
}

impl Neg for &TULaurent {
    type Output = TULaurent;
    fn neg(self) -> TULaurent {
        self.scale(&rat(-1, 1))
    }
}

impl AddAssign<&TULaurent> for TULaurent {
    fn add_assign(&mut self, rhs: &TULaurent) {
        assert_eq!(self.window, rhs.window, "TULaurent window mismatch");
        self.clipped |= rhs.clipped;
        for (&(i, j), c) in &rhs.terms {
            self.add_term(i, j, c.clone());
        }
    }
}

/// The named characteristic series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesName {
    /// `z / (e^{z/2} - e^{-z/2})`
    Ahat,
    /// `(e^{z/2} - e^{-z/2}) / z`
    SinhRatio,
    /// `e^z`
    Exp,
    /// `SinhRatio(z) * e^{-theta}` with `theta` a second formal symbol.
    AhatInvEthetaFactor,
}

impl std::str::FromStr for SeriesName {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AHAT" => Ok(SeriesName::Ahat),
            "SINH_RATIO" => Ok(SeriesName::SinhRatio),
            "EXP" => Ok(SeriesName::Exp),
            "AHAT_INV_ETHETA_FACTOR" => Ok(SeriesName::AhatInvEthetaFactor),
            _ => Err(ScalarError::UnknownSeries(s.to_string())),
        }
    }
}

/// Power series in `z` and an auxiliary symbol `theta`, truncated at total
/// degree `order`. Univariate series only use `theta^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub order: u32,
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl Series {
    /// Coefficient of `z^i theta^j`.
    pub fn coeff2(&self, i: u32, j: u32) -> Rational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `z^i`.
    pub fn coeff(&self, i: u32) -> Rational {
        self.coeff2(i, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.coeffs.iter()
    }

    fn from_univariate(order: u32, c: &[Rational]) -> Self {
        let coeffs = c
            .iter()
            .enumerate()
            .take(order as usize + 1)
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| ((i as u32, 0), v.clone()))
            .collect();
        Series { order, coeffs }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let mut coeffs: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (&(i1, j1), a) in &self.coeffs {
            for (&(i2, j2), b) in &other.coeffs {
                if i1 + i2 + j1 + j2 > order {
                    continue;
                }
                *coeffs.entry((i1 + i2, j1 + j2)).or_insert_with(Rational::zero) += a * b;
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Series { order, coeffs }
    }

    /// `z -> -z`.
    pub fn negate_arg(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(i, j), c)| ((i, j), if i % 2 == 1 { -c } else { c.clone() }))
            .collect();
        Series { order: self.order, coeffs }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }
}

fn exp_coeffs(order: u32, scale: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut term = rat(1, 1);
    for k in 0..=order {
        out.push(term.clone());
        term = term * scale / int(i64::from(k) + 1);
    }
    out
}

/// Reciprocal of a univariate series with nonzero constant term.
pub fn reciprocal(a: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    let inv0 = a[0].recip();
    for k in 0..n {
        let mut acc = if k == 0 { rat(1, 1) } else { Rational::zero() };
        for i in 1..=k {
            acc -= &a[i] * &out[k - i];
        }
        out.push(acc * &inv0);
    }
    out
}

fn sinh_ratio_coeffs(order: u32) -> Vec<Rational> {
    let plus = exp_coeffs(order + 1, &rat(1, 2));
    let minus = exp_coeffs(order + 1, &rat(-1, 2));
    (1..=order as usize + 1).map(|k| &plus[k] - &minus[k]).collect()
}

/// Expand a named series to the given total order.
pub fn series_expand(name: SeriesName, order: u32) -> Series {
    match name {
        SeriesName::Exp => Series::from_univariate(order, &exp_coeffs(order, &rat(1, 1))),
        SeriesName::SinhRatio => Series::from_univariate(order, &sinh_ratio_coeffs(order)),
        SeriesName::Ahat => Series::from_univariate(order, &reciprocal(&sinh_ratio_coeffs(order))),
        SeriesName::AhatInvEthetaFactor => {
            let s = Series::from_univariate(order, &sinh_ratio_coeffs(order));
            let e = exp_coeffs(order, &rat(-1, 1));
            let coeffs = e
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| ((0, j as u32), v.clone()))
                .collect();
            s.mul(&Series { order, coeffs })
        }
    }
}

/// Parse `p/q` or `p` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::BadRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion used only for display.
pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Window {
        Window::new(-3, 3, -3, 3).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = TULaurent::monomial(w(), rat(1, 1), -1, 0);
        let b = TULaurent::monomial(w(), rat(-1, 1), -1, 0);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn disjoint_support_sum() {
        let a = TULaurent::from_terms(w(), [(0, 0, rat(1, 1)), (1, 0, rat(1, 1))]);
        let b = TULaurent::monomial(w(), rat(1, 1), 0, -1);
        let s = &a + &b;
        assert_eq!(s.len(), 3);
        assert_eq!(s.coeff(0, -1), rat(1, 1));
    }

    #[test]
    fn sum_inside_narrow_window_is_not_clipped() {
        let win = Window::new(0, 1, 0, 0).unwrap();
        let a = TULaurent::monomial(win, rat(1, 1), 1, 0);
        let s = &a + &a;
        assert_eq!(s.coeff(1, 0), rat(2, 1));
        assert!(!s.is_clipped());
    }

    #[test]
    fn inverse_powers_multiply_to_one() {
        let t = TULaurent::monomial(w(), rat(1, 1), 1, 0);
        let ti = TULaurent::monomial(w(), rat(1, 1), -1, 0);
        assert_eq!(&t * &ti, TULaurent::one(w()));
        let u = TULaurent::monomial(w(), rat(1, 1), 0, 1);
        let ui = TULaurent::monomial(w(), rat(1, 1), 0, -1);
        assert_eq!(&u * &ui, TULaurent::one(w()));
    }

    #[test]
    fn square_in_window_and_clip_flag() {
        let win = Window::new(0, 2, 0, 0).unwrap();
        let a = TULaurent::from_terms(win, [(0, 0, rat(1, 1)), (1, 0, rat(1, 2))]);
        let sq = &a * &a;
        assert_eq!(sq, TULaurent::from_terms(win, [(0, 0, rat(1, 1)), (1, 0, rat(1, 1)), (2, 0, rat(1, 4))]));
        assert!(!sq.is_clipped());
        let cube = &sq * &a;
        assert!(cube.is_clipped());
    }

    #[test]
    fn window_mismatch_is_an_error() {
        let a = TULaurent::one(w());
        let b = TULaurent::one(Window::new(0, 1, 0, 1).unwrap());
        assert!(matches!(a.checked_add(&b), Err(ScalarError::WindowMismatch(..))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = TULaurent::from_terms(w(), [(-1, 2, rat(-3, 4)), (0, 0, rat(5, 1))]);
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back = TULaurent::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn unknown_series_name() {
        assert!("COSH".parse::<SeriesName>().is_err());
        assert_eq!("ahat".parse::<SeriesName>().unwrap(), SeriesName::Ahat);
    }
}
