//! Finite-dimensional differential graded Lie algebras, their cochain
//! complexes with Cartan calculus, and Chern-Weil constructions.

mod ce;
mod cw;
pub mod gca;
mod instances;

pub use ce::*;
pub use cw::*;
pub use instances::*;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::scalars::{int, sign_pow, Rational};

/// Sparse vector over a basis index.
pub type Vector = BTreeMap<usize, Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("bracket is not graded antisymmetric on ({0}, {1})")]
    Antisymmetry(String, String),
    #[error("Jacobi identity fails on ({0}, {1}, {2})")]
    Jacobi(String, String, String),
    #[error("bracket does not respect degrees on ({0}, {1})")]
    BracketDegree(String, String),
    #[error("differential is not a degree +1 derivation on ({0}, {1})")]
    Derivation(String, String),
    #[error("differential does not square to zero on {0}")]
    DifferentialSquare(String),
    #[error("differential has wrong degree on {0}")]
    DifferentialDegree(String),
    #[error("subalgebra is not closed under the bracket")]
    SubalgebraNotClosed,
    #[error("complement is not stable under the subalgebra")]
    ComplementNotStable,
    #[error("subalgebra and complement do not span the algebra")]
    NotComplementary,
    #[error("polynomial is not invariant under {0}")]
    NotInvariant(String),
    #[error("module has no contraction operators")]
    NoContraction,
    #[error("operation requires an ungraded Lie algebra")]
    Graded,
    #[error("malformed structure-constants table: {0}")]
    Parse(String),
    #[error("coboundary equation has no solution")]
    NotExact,
}

pub(crate) fn axpy(y: &mut Vector, a: &Rational, x: &Vector) {
    for (k, v) in x {
        let e = y.entry(*k).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

/// A finite-dimensional DGLA with a chosen subalgebra `h` and an
/// `h`-stable complement `V`, both spanned by basis vectors after a change
/// of basis encoded in `complement`.
#[derive(Clone, Debug)]
pub struct FinDGLA {
    pub name: String,
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    bracket: Vec<Vec<Vector>>,
    differential: Vec<Vector>,
    /// `true` for basis vectors of the subalgebra.
    pub h_mask: Vec<bool>,
    /// Basis of `V`: each non-subalgebra basis vector `e_i` is replaced by
    /// `e_i + complement[i]` with `complement[i]` in the subalgebra.
    pub complement: Vec<Vector>,
}

impl FinDGLA {
    /// Validate and build. `bracket[i][j]` is `[e_i, e_j]`.
    pub fn new(
        name: &str,
        labels: Vec<String>,
        degrees: Vec<i32>,
        bracket: Vec<Vec<Vector>>,
        differential: Vec<Vector>,
        h_mask: Vec<bool>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        let g = FinDGLA {
            name: name.to_string(),
            labels,
            degrees,
            bracket,
            differential,
            h_mask,
            complement: vec![Vector::new(); n],
        };
        g.validate()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_ungraded(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0) && self.differential.iter().all(|v| v.is_empty())
    }

    pub fn h_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.h_mask[i]).collect()
    }

    pub fn v_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.h_mask[i]).collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &Vector {
        &self.bracket[i][j]
    }

    pub fn differential_basis(&self, i: usize) -> &Vector {
        &self.differential[i]
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in x {
            for (j, b) in y {
                axpy(&mut out, &(a * b), &self.bracket[*i][*j]);
            }
        }
        out
    }

    pub fn apply_differential(&self, x: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in x {
            axpy(&mut out, a, &self.differential[*i]);
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        std::iter::once((i, int(1))).collect()
    }

    fn degree_of(&self, x: &Vector) -> Option<i32> {
        let mut it = x.keys().map(|&i| self.degrees[i]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn validate(&self) -> Result<(), LieError> {
        let n = self.dim();
        let l = |i: usize| self.labels[i].clone();
        for i in 0..n {
            let dx = self.apply_differential(&self.basis_vector(i));
            if let Some(d) = self.degree_of(&dx) {
                if d != self.degrees[i] + 1 {
                    return Err(LieError::DifferentialDegree(l(i)));
                }
            }
            if !self.apply_differential(&dx).is_empty() {
                return Err(LieError::DifferentialSquare(l(i)));
            }
            for j in 0..n {
                let ij = &self.bracket[i][j];
                if let Some(d) = self.degree_of(ij) {
                    if d != self.degrees[i] + self.degrees[j] {
                        return Err(LieError::BracketDegree(l(i), l(j)));
                    }
                }
                let mut sum = ij.clone();
                let s = sign_pow(i64::from(self.degrees[i] * self.degrees[j]));
                axpy(&mut sum, &int(s), &self.bracket[j][i]);
                if !sum.is_empty() {
                    return Err(LieError::Antisymmetry(l(i), l(j)));
                }
                // d[a, b] = [da, b] + (-1)^{|a|} [a, db]
                let lhs = self.apply_differential(ij);
                let mut rhs = self.bracket(&self.differential[i], &self.basis_vector(j));
                let t = self.bracket(&self.basis_vector(i), &self.differential[j]);
                axpy(&mut rhs, &int(sign_pow(i64::from(self.degrees[i]))), &t);
                let mut diff = lhs;
                axpy(&mut diff, &int(-1), &rhs);
                if !diff.is_empty() {
                    return Err(LieError::Derivation(l(i), l(j)));
                }
            }
        }
        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
        for a in 0..n {
            for b in 0..n {
                let ab = &self.bracket[a][b];
                for c in 0..n {
                    let ec = self.basis_vector(c);
                    let lhs = self.bracket(&self.basis_vector(a), &self.bracket[b][c]);
                    let mut rhs = self.bracket(ab, &ec);
                    let t = self.bracket(&self.basis_vector(b), &self.bracket[a][c]);
                    axpy(&mut rhs, &int(sign_pow(i64::from(self.degrees[a] * self.degrees[b]))), &t);
                    let mut diff = lhs;
                    axpy(&mut diff, &int(-1), &rhs);
                    if !diff.is_empty() {
                        return Err(LieError::Jacobi(l(a), l(b), l(c)));
                    }
                }
            }
        }
        let h = self.h_indices();
        for &i in &h {
            for &j in &h {
                if self.bracket[i][j].keys().any(|&k| !self.h_mask[k]) {
                    return Err(LieError::SubalgebraNotClosed);
                }
            }
        }
        self.check_complement()
    }

    /// `e_i + complement[i]` for `i` outside the subalgebra.
    pub fn complement_vector(&self, i: usize) -> Vector {
        let mut v = self.basis_vector(i);
        axpy(&mut v, &int(1), &self.complement[i]);
        v
    }

    fn check_complement(&self) -> Result<(), LieError> {
        for i in self.v_indices() {
            if self.complement[i].keys().any(|&k| !self.h_mask[k]) {
                return Err(LieError::NotComplementary);
            }
        }
        // [h, v'] must be a combination of the v' vectors: its subalgebra
        // part must equal sum_k c_k complement[k] where c_k are its V-coordinates.
        for h in self.h_indices() {
            for v in self.v_indices() {
                let w = self.bracket(&self.basis_vector(h), &self.complement_vector(v));
                let mut expect = Vector::new();
                for (k, c) in &w {
                    if !self.h_mask[*k] {
                        axpy(&mut expect, c, &self.complement_vector(*k));
                    }
                }
                if expect != w {
                    return Err(LieError::ComplementNotStable);
                }
            }
        }
        Ok(())
    }

    /// Same algebra with a different `h`-stable complement.
    pub fn with_complement(&self, complement: Vec<Vector>) -> Result<Self, LieError> {
        let mut g = self.clone();
        g.complement = complement;
        g.check_complement()?;
        Ok(g)
    }

    /// Projection onto the subalgebra along the complement, as coordinates
    /// in the subalgebra basis (indexed by position in [`Self::h_indices`]).
    pub fn project_to_h(&self, x: &Vector) -> Vector {
        let h = self.h_indices();
        let pos: BTreeMap<usize, usize> = h.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut full = Vector::new();
        for (k, c) in x {
            if self.h_mask[*k] {
                axpy(&mut full, c, &self.basis_vector(*k));
            } else {
                // x = sum c_k e_k = sum c_k (e_k + comp_k) - sum c_k comp_k
                axpy(&mut full, &-c, &self.complement[*k]);
            }
        }
        full.into_iter().map(|(k, c)| (pos[&k], c)).collect()
    }

    /// `g[eps] = g ⊗ k[eps]`, `eps` of degree `-1`, `d(X eps) = X`
    /// (plus the induced differential). The subalgebra is the copy of `g`.
    pub fn with_epsilon(&self) -> Result<Self, LieError> {
        let n = self.dim();
        let mut labels = self.labels.clone();
        labels.extend(self.labels.iter().map(|l| format!("{l}.eps")));
        let mut degrees = self.degrees.clone();
        degrees.extend(self.degrees.iter().map(|d| d - 1));
        let shift = |v: &Vector| -> Vector { v.iter().map(|(k, c)| (k + n, c.clone())).collect() };
        let mut bracket = vec![vec![Vector::new(); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                bracket[i][j] = self.bracket[i][j].clone();
                // [X, Y eps] = [X, Y] eps ; [X eps, Y] = (-1)^{|Y|} [X, Y] eps
                bracket[i][j + n] = shift(&self.bracket[i][j]);
                let s = sign_pow(i64::from(self.degrees[j]));
                bracket[i + n][j] = shift(&self.bracket[i][j]).into_iter().map(|(k, c)| (k, c * int(s))).collect();
            }
        }
        let mut differential = self.differential.clone();
        for i in 0..n {
            // d(X eps) = dX eps + (-1)^{|X|} X
            let mut v = shift(&self.differential[i]);
            axpy(&mut v, &int(sign_pow(i64::from(self.degrees[i]))), &self.basis_vector(i));
            differential.push(v);
        }
        let mut h_mask = vec![true; n];
        h_mask.extend(std::iter::repeat_n(false, n));
        FinDGLA::new(&format!("{}[eps]", self.name), labels, degrees, bracket, differential, h_mask)
    }
}
