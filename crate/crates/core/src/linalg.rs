//! Sparse Gaussian elimination over a [`Scalar`] field.
//!
//! Rows are inserted one at a time and reduced against the current pivots by
//! their leading column, so the stored rows always form an echelon basis of
//! the row space seen so far. The null space is read off a reduced copy.

use crate::arith::Scalar;

/// Sparse vector: `(column, value)` pairs sorted by column, no stored zeros.
pub type SparseRow<S> = Vec<(usize, S)>;

/// Incremental row-echelon form.
#[derive(Debug, Clone)]
pub struct Echelon<S> {
    ncols: usize,
    tol: f64,
    pivots: Vec<Option<SparseRow<S>>>,
    rank: usize,
    smallest_pivot: Option<f64>,
}

impl<S: Scalar> Echelon<S> {
    /// `tol` is the absolute threshold below which float entries count as
    /// zero. It is ignored by exact scalars.
    pub fn new(ncols: usize, tol: f64) -> Self {
        Echelon { ncols, tol, pivots: vec![None; ncols], rank: 0, smallest_pivot: None }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Magnitude of the smallest leading entry ever accepted as a pivot,
    /// measured before normalisation.
    pub fn smallest_pivot(&self) -> Option<f64> {
        self.smallest_pivot
    }

    /// Reduce `row` against the pivots and keep it if it is independent.
    /// Returns `true` when the rank grew.
    pub fn insert(&mut self, row: SparseRow<S>) -> bool {
        let row = self.reduce(prune(row, self.tol));
        let Some((lead_col, lead)) = row.first().cloned() else {
            return false;
        };
        let mag = lead.magnitude();
        self.smallest_pivot = Some(self.smallest_pivot.map_or(mag, |m| m.min(mag)));
        let inv = S::one() / lead;
        let normalised: SparseRow<S> = row
            .into_iter()
            .map(|(c, v)| if c == lead_col { (c, S::one()) } else { (c, v * inv.clone()) })
            .collect();
        self.pivots[lead_col] = Some(normalised);
        self.rank += 1;
        true
    }

    fn reduce(&self, mut row: SparseRow<S>) -> SparseRow<S> {
        while let Some((col, lead)) = row.first().cloned() {
            match &self.pivots[col] {
                Some(pivot) => row = axpy(&row, &(-lead), pivot, self.tol),
                None => break,
            }
        }
        row
    }

    /// Basis of `{x : row·x = 0 for every inserted row}`, one vector per
    /// free column, in increasing free-column order.
    pub fn nullspace_basis(&self) -> Vec<SparseRow<S>> {
        let reduced = self.reduced_rows();
        let mut by_free: Vec<Option<SparseRow<S>>> = vec![None; self.ncols];
        for (col, slot) in by_free.iter_mut().enumerate() {
            if reduced[col].is_none() {
                *slot = Some(Vec::new());
            }
        }
        for (pivot_col, row) in reduced.iter().enumerate() {
            let Some(row) = row else { continue };
            for (c, v) in row {
                if *c == pivot_col {
                    continue;
                }
                if let Some(vec) = by_free[*c].as_mut() {
                    vec.push((pivot_col, -v.clone()));
                }
            }
        }
        by_free
            .into_iter()
            .enumerate()
            .filter_map(|(free, v)| {
                v.map(|mut v| {
                    v.push((free, S::one()));
                    v.sort_by_key(|(c, _)| *c);
                    v
                })
            })
            .collect()
    }

    /// Reduced row-echelon form: every pivot column is zero outside its own row.
    fn reduced_rows(&self) -> Vec<Option<SparseRow<S>>> {
        let mut out: Vec<Option<SparseRow<S>>> = vec![None; self.ncols];
        for col in (0..self.ncols).rev() {
            let Some(row) = &self.pivots[col] else { continue };
            let mut row = row.clone();
            let later: Vec<(usize, S)> =
                row.iter().filter(|(c, _)| *c > col && out[*c].is_some()).cloned().collect();
            // Rows in `out` touch no pivot column but their own, so these
            // subtractions never disturb each other's coefficients.
            for (c, v) in later {
                let pivot = out[c].as_ref().expect("checked above");
                row = axpy(&row, &(-v), pivot, self.tol);
            }
            out[col] = Some(row);
        }
        out
    }
}

/// `a + factor * b`, dropping negligible entries.
pub fn axpy<S: Scalar>(a: &[(usize, S)], factor: &S, b: &[(usize, S)], tol: f64) -> SparseRow<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    while ia < a.len() || ib < b.len() {
        let take_a = ib >= b.len() || (ia < a.len() && a[ia].0 < b[ib].0);
        let take_b = ia >= a.len() || (ib < b.len() && b[ib].0 < a[ia].0);
        let (col, val) = if take_a {
            ia += 1;
            (a[ia - 1].0, a[ia - 1].1.clone())
        } else if take_b {
            ib += 1;
            (b[ib - 1].0, factor.clone() * b[ib - 1].1.clone())
        } else {
            ia += 1;
            ib += 1;
            (a[ia - 1].0, a[ia - 1].1.clone() + factor.clone() * b[ib - 1].1.clone())
        };
        if !val.is_negligible(tol) {
            out.push((col, val));
        }
    }
    out
}

/// Sort by column, merge duplicate columns, drop negligible entries.
pub fn prune<S: Scalar>(mut row: SparseRow<S>, tol: f64) -> SparseRow<S> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow<S> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.clone() + v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_negligible(tol));
    out
}

/// `Σ row[c] · x[c]` for sparse `row` and `x`.
pub fn sparse_dot<S: Scalar>(row: &[(usize, S)], x: &[(usize, S)]) -> S {
    let mut acc = S::zero();
    let (mut i, mut j) = (0, 0);
    while i < row.len() && j < x.len() {
        match row[i].0.cmp(&x[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc + row[i].1.clone() * x[j].1.clone();
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Rank of a list of sparse rows.
pub fn rank<S: Scalar>(rows: impl IntoIterator<Item = SparseRow<S>>, ncols: usize, tol: f64) -> usize {
    let mut ech = Echelon::new(ncols, tol);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}
