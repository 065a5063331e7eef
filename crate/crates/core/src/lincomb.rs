//! Sparse linear combinations of ordered keys with [`TULaurent`] coefficients.

use std::collections::BTreeMap;

use crate::scalars::{rat, Rational, TULaurent, Window};

/// A finite sum `sum_k c_k [k]`. Zero coefficients are never stored.
///
/// `clipped` records that some contribution was dropped by a truncation
/// (window or degree cap) while building the value.
#[derive(Clone, Debug)]
pub struct LinComb<K: Ord + Clone> {
    window: Window,
    terms: BTreeMap<K, TULaurent>,
    clipped: bool,
}

impl<K: Ord + Clone> PartialEq for LinComb<K> {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.terms == other.terms
    }
}

impl<K: Ord + Clone> Eq for LinComb<K> {}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(window: Window) -> Self {
        LinComb { window, terms: BTreeMap::new(), clipped: false }
    }

    pub fn single(window: Window, key: K, coeff: TULaurent) -> Self {
        let mut out = Self::zero(window);
        out.add_term(key, &coeff);
        out
    }

    /// `key` with coefficient 1.
    pub fn basis(window: Window, key: K) -> Self {
        Self::single(window, key, TULaurent::one(window))
    }

    /// `c key` with a rational coefficient.
    pub fn scalar_term(window: Window, key: K, c: Rational) -> Self {
        Self::single(window, key, TULaurent::constant(window, c))
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_clipped(&self) -> bool {
        self.clipped || self.terms.values().any(TULaurent::is_clipped)
    }

    pub fn mark_clipped(&mut self) {
        self.clipped = true;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &TULaurent)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &K) -> TULaurent {
        self.terms.get(key).cloned().unwrap_or_else(|| TULaurent::zero(self.window))
    }

    pub fn add_term(&mut self, key: K, coeff: &TULaurent) {
        if coeff.is_clipped() {
            self.clipped = true;
        }
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &TULaurent) {
        self.clipped |= other.clipped;
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add_scaled_q(&mut self, other: &Self, c: &Rational) {
        self.clipped |= other.clipped;
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &v.scale(c));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled_q(other, &rat(1, 1));
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.add_scaled_q(other, &rat(-1, 1));
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn scale(&self, c: &TULaurent) -> Self {
        let mut out = Self::zero(self.window);
        out.add_scaled(self, c);
        out
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.window);
        out.add_scaled_q(self, c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale_q(&rat(-1, 1))
    }

    /// Multiply every coefficient by `t^di u^dj`.
    pub fn shift(&self, di: i32, dj: i32) -> Self {
        let mut out = Self::zero(self.window);
        out.clipped = self.clipped;
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.shift(di, dj));
        }
        out
    }

    /// Apply a linear map given on keys.
    pub fn map_linear<L: Ord + Clone, F>(&self, mut f: F) -> LinComb<L>
    where
        F: FnMut(&K) -> LinComb<L>,
    {
        let mut out = LinComb::zero(self.window);
        out.clipped = self.clipped;
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    /// Keep the terms whose key satisfies `pred`.
    pub fn filter<F: FnMut(&K) -> bool>(&self, mut pred: F) -> Self {
        let mut out = Self::zero(self.window);
        out.clipped = self.clipped;
        for (k, v) in &self.terms {
            if pred(k) {
                out.terms.insert(k.clone(), v.clone());
            }
        }
        out
    }

    /// Substitute `u = 1` in every coefficient.
    pub fn at_u_one(&self) -> Self {
        let mut out = Self::zero(self.window);
        out.clipped = self.clipped;
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.at_u_one());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, TULaurent)> for LinComb<K> {
    /// Panics on an empty iterator since the window cannot be inferred.
    fn from_iter<I: IntoIterator<Item = (K, TULaurent)>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let window = it.peek().map(|(_, c)| c.window()).expect("empty iterator has no window");
        let mut out = Self::zero(window);
        for (k, c) in it {
            out.add_term(k, &c);
        }
        out
    }
}
