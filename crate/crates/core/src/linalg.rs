//! Exact Gaussian elimination over the rationals for sparse column data.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalars::Rational;

/// Sparse vector indexed by row.
pub type SparseVec = BTreeMap<usize, Rational>;

/// Row echelon basis built incrementally from sparse vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// Pivot row -> reduced vector with leading entry 1 at the pivot.
    rows: BTreeMap<usize, SparseVec>,
    /// For each stored pivot, the combination of inserted vectors producing it.
    provenance: BTreeMap<usize, SparseVec>,
    inserted: usize,
}

fn axpy(y: &mut SparseVec, a: &Rational, x: &SparseVec) {
    for (k, v) in x {
        let e = y.entry(*k).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the stored pivots; returns the remainder and the
    /// combination of inserted vectors that was subtracted.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut used = SparseVec::new();
        loop {
            let pivot = v.keys().find(|k| self.rows.contains_key(k)).copied();
            let Some(p) = pivot else { break };
            let a = v[&p].clone();
            axpy(&mut v, &-&a, &self.rows[&p]);
            axpy(&mut used, &a, &self.provenance[&p]);
        }
        (v, used)
    }

    /// Insert `v`; returns `true` if it increased the rank.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, used) = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else { return false };
        let inv = lead.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        let mut prov = SparseVec::new();
        prov.insert(idx, Rational::from_integer(1.into()));
        axpy(&mut prov, &-Rational::from_integer(1.into()), &used);
        for x in prov.values_mut() {
            *x *= &inv;
        }
        // Keep stored rows reduced at the new pivot.
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let c = self.rows[&k].get(&p).cloned();
            if let Some(c) = c {
                let row_p = r.clone();
                axpy(self.rows.get_mut(&k).expect("row"), &-&c, &row_p);
                let prov_p = prov.clone();
                axpy(self.provenance.get_mut(&k).expect("prov"), &-&c, &prov_p);
            }
        }
        self.rows.insert(p, std::mem::take(&mut r));
        self.provenance.insert(p, prov);
        true
    }

    /// Coefficients `x` with `sum x_i v_i = target` over the inserted vectors,
    /// or `None` if `target` is outside their span.
    pub fn solve(&self, target: &SparseVec) -> Option<SparseVec> {
        let (r, used) = self.reduce(target);
        if r.is_empty() {
            Some(used)
        } else {
            None
        }
    }
}

/// Rank of a list of sparse columns.
pub fn rank(columns: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c);
    }
    e.rank()
}

/// Basis of the null space of the map `i ↦ columns[i]`, as sparse vectors
/// over the column index.
pub fn nullspace(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, c) in columns.iter().enumerate() {
        let before = e.clone();
        if !e.insert(c) {
            let coeffs = before.solve(c).expect("dependent column lies in span");
            let mut v = SparseVec::new();
            v.insert(i, Rational::from_integer(1.into()));
            axpy(&mut v, &-Rational::from_integer(1.into()), &coeffs);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, v)| (k, int(v))).collect()
    }

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let cols = vec![sv(&[(0, 1), (1, 2)]), sv(&[(0, 2), (1, 4)]), sv(&[(1, 1)])];
        assert_eq!(rank(&cols), 2);
        let k = nullspace(&cols);
        assert_eq!(k, vec![sv(&[(0, -2), (1, 1)])]);
    }

    #[test]
    fn solve_reports_membership() {
        let mut e = Echelon::new();
        e.insert(&sv(&[(0, 1), (2, 1)]));
        e.insert(&sv(&[(1, 3)]));
        let x = e.solve(&sv(&[(0, 2), (1, 3), (2, 2)])).unwrap();
        assert_eq!(x, sv(&[(0, 2), (1, 1)]));
        assert!(e.solve(&sv(&[(2, 1)])).is_none());
    }
}
