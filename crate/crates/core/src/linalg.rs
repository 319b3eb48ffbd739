//! Exact linear algebra over the rationals.
//!
//! Everything here is built on [`RowEchelon`], an incrementally maintained
//! reduced row echelon form with sparse rows. Pivots are always the leading
//! column of their row, so the stored form is the unique RREF of the span and
//! two spans are equal exactly when their echelon forms are.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, WeilError};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| WeilError::BadRational(s.into()))?;
            let d: BigInt = d.trim().parse().map_err(|_| WeilError::BadRational(s.into()))?;
            if d.is_zero() {
                return Err(WeilError::BadRational(s.into()));
            }
            Q::new(n, d)
        }
        None => Q::from_integer(t.parse().map_err(|_| WeilError::BadRational(s.into()))?),
    };
    Ok(parsed)
}

pub fn zeros(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Sorted sparse row.
pub type SparseRow = Vec<(usize, Q)>;

pub fn to_sparse(v: &[Q]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn sparse_get(row: &SparseRow, col: usize) -> Option<&Q> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// `a - c * b` for sorted sparse rows.
fn sparse_sub_scaled(a: &SparseRow, c: &Q, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form of a span of vectors in `Q^ncols`.
///
/// Equality compares spans: reduced rows are unique per pivot column.
#[derive(Clone)]
pub struct RowEchelon {
    ncols: usize,
    /// Each row starts with `(pivot, 1)`; no row has an entry in another row's pivot column.
    rows: Vec<SparseRow>,
    pivot_row: Vec<Option<usize>>,
}

impl PartialEq for RowEchelon {
    fn eq(&self, other: &Self) -> bool {
        self.ncols == other.ncols
            && self.rows.len() == other.rows.len()
            && self.pivot_row.iter().enumerate().all(|(c, r)| match (r, other.pivot_row[c]) {
                (None, None) => true,
                (Some(a), Some(b)) => self.rows[*a] == other.rows[b],
                _ => false,
            })
    }
}

impl Eq for RowEchelon {}

impl fmt::Debug for RowEchelon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RowEchelon")
            .field("ncols", &self.ncols)
            .field("rank", &self.rows.len())
            .field("pivots", &self.pivots())
            .finish()
    }
}

impl RowEchelon {
    pub fn new(ncols: usize) -> Self {
        RowEchelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn from_vectors<'a, I>(ncols: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<Q>>,
    {
        let mut e = RowEchelon::new(ncols);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r[0].0).collect();
        p.sort_unstable();
        p
    }

    fn reduce_sparse(&self, row: &SparseRow) -> SparseRow {
        let coeffs: Vec<(usize, Q)> = row
            .iter()
            .filter_map(|(c, v)| self.pivot_row[*c].map(|r| (r, v.clone())))
            .collect();
        let mut out = row.clone();
        for (r, v) in coeffs {
            out = sparse_sub_scaled(&out, &v, &self.rows[r]);
        }
        out
    }

    /// Inserts a sparse row; returns `true` when it enlarged the span.
    pub fn insert_sparse(&mut self, row: SparseRow) -> bool {
        assert!(row.iter().all(|(c, _)| *c < self.ncols), "column out of range");
        let mut red = self.reduce_sparse(&row);
        if red.is_empty() {
            return false;
        }
        let (pivot, lead) = red[0].clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, v) in red.iter_mut() {
                *v *= &inv;
            }
        }
        for r in self.rows.iter_mut() {
            if let Some(c) = sparse_get(r, pivot).cloned() {
                *r = sparse_sub_scaled(r, &c, &red);
            }
        }
        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(red);
        true
    }

    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        self.insert_sparse(to_sparse(v))
    }

    /// Remainder of `v` after elimination against the pivots; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let red = self.reduce_sparse(&to_sparse(v));
        let mut out = zeros(self.ncols);
        for (c, x) in red {
            out[c] = x;
        }
        out
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce_sparse(&to_sparse(v)).is_empty()
    }

    pub fn contains_all(&self, other: &RowEchelon) -> bool {
        other.rows.iter().all(|r| self.reduce_sparse(r).is_empty())
    }

    /// Basis rows as dense vectors, ordered by pivot column.
    pub fn basis(&self) -> Vec<Vec<Q>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.rows[i][0].0);
        idx.into_iter()
            .map(|i| {
                let mut v = zeros(self.ncols);
                for (c, x) in &self.rows[i] {
                    v[*c] = x.clone();
                }
                v
            })
            .collect()
    }

    /// Coordinates of `v` with respect to [`RowEchelon::basis`], if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots().into_iter().map(|p| v[p].clone()).collect())
    }

    /// Canonical basis of `{x : row . x = 0 for every row}`; one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| self.pivot_row[*c].is_none())
            .collect();
        let mut out = Vec::with_capacity(free.len());
        for f in free {
            let mut x = zeros(self.ncols);
            x[f] = Q::one();
            for r in &self.rows {
                if let Some(v) = sparse_get(r, f) {
                    x[r[0].0] = -v.clone();
                }
            }
            out.push(x);
        }
        out
    }

    pub fn sum(&self, other: &RowEchelon) -> RowEchelon {
        let mut e = self.clone();
        for r in &other.rows {
            e.insert_sparse(r.clone());
        }
        e
    }

    pub fn intersection(&self, other: &RowEchelon) -> RowEchelon {
        // x = sum a_i u_i lies in `other` iff it is orthogonal to other's annihilator.
        let perp = other.nullspace();
        let basis = self.basis();
        let mut constraints = RowEchelon::new(basis.len());
        for z in &perp {
            let row: Vec<Q> = basis.iter().map(|u| dot(u, z)).collect();
            constraints.insert(&row);
        }
        let mut out = RowEchelon::new(self.ncols);
        for a in constraints.nullspace() {
            let mut x = zeros(self.ncols);
            for (ai, u) in a.iter().zip(&basis) {
                axpy(&mut x, ai, u);
            }
            out.insert(&x);
        }
        out
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: zeros(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_columns(columns: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        let mut out = zeros(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let cols: Vec<Vec<Q>> = (0..other.cols).map(|j| self.apply(&other.column(j))).collect();
        Matrix::from_columns(&cols, self.rows)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add_vec(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub_vec(&self.data, &other.data),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale_vec(c, &self.data),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(&self.row_vectors(), self.cols)
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    /// Flattened entries, row-major.
    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn from_entries(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rank(&self) -> usize {
        RowEchelon::from_vectors(self.cols, &self.row_vectors()).rank()
    }

    /// Basis of the kernel `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        RowEchelon::from_vectors(self.cols, &self.row_vectors()).nullspace()
    }

    pub fn image(&self) -> RowEchelon {
        RowEchelon::from_vectors(self.rows, &self.columns())
    }

    /// Gauss-Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Q>> = self.row_vectors();
        let mut inv: Vec<Vec<Q>> = Matrix::identity(n).row_vectors();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            inv.swap(col, p);
            let f = a[col][col].recip();
            a[col] = scale_vec(&f, &a[col]);
            inv[col] = scale_vec(&f, &inv[col]);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let c = a[r][col].clone();
                    let (ar, ac) = (a[r].clone(), a[col].clone());
                    a[r] = sub_vec(&ar, &scale_vec(&c, &ac));
                    let (ir, ic) = (inv[r].clone(), inv[col].clone());
                    inv[r] = sub_vec(&ir, &scale_vec(&c, &ic));
                }
            }
        }
        Some(Matrix::from_rows(inv, n))
    }

    /// Some solution of `Mx = b`, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut e = RowEchelon::new(self.cols + 1);
        for i in 0..self.rows {
            let mut r = self.row(i);
            r.push(b[i].clone());
            e.insert(&r);
        }
        if e.pivots().contains(&self.cols) {
            return None;
        }
        let mut x = zeros(self.cols);
        for row in e.basis() {
            let p = row.iter().position(|v| !v.is_zero()).unwrap();
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }
}

/// Compact rendering for diagnostics.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_q("3/6").unwrap(), q_frac(1, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn echelon_is_canonical() {
        let a = RowEchelon::from_vectors(3, &[v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let b = RowEchelon::from_vectors(3, &[v(&[1, 3, 4]), v(&[2, 4, 6])]);
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&v(&[1, 1, 2])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn nullspace_annihilates_rows() {
        let rows = vec![v(&[1, 2, 0, 1]), v(&[0, 0, 1, 3])];
        let e = RowEchelon::from_vectors(4, &rows);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in &rows {
                assert!(dot(r, x).is_zero());
            }
        }
    }

    #[test]
    fn intersection_of_planes() {
        let a = RowEchelon::from_vectors(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = RowEchelon::from_vectors(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i, RowEchelon::from_vectors(3, &[v(&[0, 1, 0])]));
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_rows(vec![v(&[2, 1]), v(&[1, 1])], 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.solve(&v(&[3, 2])).unwrap(), v(&[1, 1]));
        let s = Matrix::from_rows(vec![v(&[1, 1]), v(&[1, 1])], 2);
        assert!(s.inverse().is_none());
        assert!(s.solve(&v(&[1, 2])).is_none());
    }
}
