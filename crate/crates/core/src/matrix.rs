//! Dense exact matrices and Gauss-Jordan elimination.
//!
//! A `rows x cols` matrix is the linear map `K^cols -> K^rows`, `x |-> M x`.
//! Zero-sized matrices are ordinary values (`K^0 = {0}`).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rref`]: `transform * input == rref`.
#[derive(Clone, Debug)]
pub struct RrefResult {
    pub rref: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Invertible, `rows x rows`.
    pub transform: Matrix,
}

/// `input == p_inv * [I_r 0; 0 0] * q_inv` with `p * p_inv == I` and `q * q_inv == I`.
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub p: Matrix,
    pub p_inv: Matrix,
    pub q: Matrix,
    pub q_inv: Matrix,
    pub rank: usize,
}

impl CanonicalDecomposition {
    /// The `rows x cols` block `[I_r 0; 0 0]`.
    pub fn middle(&self) -> Matrix {
        Matrix::rank_block(self.p.field, self.p.rows, self.q.rows, self.rank)
    }

    pub fn reconstruct(&self) -> Matrix {
        self.p_inv
            .mul(&self.middle())
            .and_then(|m| m.mul(&self.q_inv))
            .expect("shapes agree by construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    Add,
    HStack,
    VStack,
    DirectSum,
}

pub fn mat_arith(a: &Matrix, b: &Matrix, op: MatOp) -> Result<Matrix> {
    match op {
        MatOp::Mul => a.mul(b),
        MatOp::Add => a.add(b),
        MatOp::HStack => a.hstack(b),
        MatOp::VStack => a.vstack(b),
        MatOp::DirectSum => a.direct_sum(b),
    }
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::rank_block(field, n, n, n)
    }

    /// `[I_r 0; 0 0]` of the given shape.
    pub fn rank_block(field: FieldSpec, rows: usize, cols: usize, r: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..r.min(rows).min(cols) {
            m.set(i, i, field.one());
        }
        m
    }

    /// Row-major entries.
    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidPresentation(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for s in &data {
            field.check(s)?;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// `cols` is explicit so that matrices without rows keep their width.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidPresentation(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_vec(field, n, cols, data)
    }

    /// Panics if `values.len() != rows * cols`.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count for {rows}x{cols}");
        Matrix {
            field,
            rows,
            cols,
            data: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    /// Entries drawn independently with [`FieldSpec::random`].
    pub fn random<R: Rng + ?Sized>(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: (0..rows * cols).map(|_| field.random(rng)).collect(),
        }
    }

    /// A product of random elementary row operations; invertible by construction.
    pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Self {
        let mut m = Matrix::identity(field, n);
        if n == 0 {
            return m;
        }
        for _ in 0..3 * n + 2 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            match rng.gen_range(0..3) {
                0 => m.swap_rows(i, j),
                1 => m.scale_row(i, &field.random_nonzero(rng)),
                _ if i != j => m.sub_row_multiple(i, j, &field.random(rng)),
                _ => {}
            }
        }
        m
    }

    /// `random_invertible * [I_r 0; 0 0] * random_invertible`, so exactly rank `r`.
    pub fn random_with_rank<R: Rng + ?Sized>(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        r: usize,
        rng: &mut R,
    ) -> Self {
        let left = Self::random_invertible(field, rows, rng);
        let right = Self::random_invertible(field, cols, rng);
        left.mul(&Self::rank_block(field, rows, cols, r))
            .and_then(|m| m.mul(&right))
            .expect("shapes agree")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of {:?}",
            self.shape()
        );
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of {:?}",
            self.shape()
        );
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    fn shape_error(&self, op: &'static str, other: &Matrix) -> Error {
        Error::ShapeMismatch {
            op,
            lhs: self.shape(),
            rhs: other.shape(),
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(self.shape_error("mul", rhs));
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with("add", rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with("sub", rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        op: &'static str,
        rhs: &Matrix,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.shape() != rhs.shape() {
            return Err(self.shape_error(op, rhs));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|a| a * c)
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(self.shape_error("hstack", rhs));
        }
        let mut data = Vec::with_capacity(self.data.len() + rhs.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + rhs.cols,
            data,
        })
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.cols {
            return Err(self.shape_error("vstack", rhs));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block diagonal `[self 0; 0 rhs]`.
    pub fn direct_sum(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        let mut out = Matrix::zeros(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out.set(self.rows + i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn col_range(&self, range: std::ops::Range<usize>) -> Matrix {
        self.select_cols(&range.collect::<Vec<_>>())
    }

    pub fn row_range(&self, range: std::ops::Range<usize>) -> Matrix {
        self.select_rows(&range.collect::<Vec<_>>())
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_cols(&[j])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.field, self.rows)
    }

    /// Gauss-Jordan elimination in place, pivoting on the first nonzero entry
    /// of each column. Row operations are mirrored onto `track` when given.
    fn eliminate(&mut self, mut track: Option<&mut Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(i) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if i != r {
                self.swap_rows(i, r);
                if let Some(t) = track.as_deref_mut() {
                    t.swap_rows(i, r);
                }
            }
            let inv = self.get(r, c).inverse().expect("pivot is nonzero");
            self.scale_row(r, &inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(r, &inv);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                self.sub_row_multiple(i, r, &f);
                if let Some(t) = track.as_deref_mut() {
                    t.sub_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = &self.data[idx] * c;
        }
    }

    /// row[dst] -= f * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, f: &Scalar) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let d = dst * self.cols + j;
            self.data[d] = &self.data[d] - &(f * s);
        }
    }

    pub fn rref(&self) -> RrefResult {
        let mut rref = self.clone();
        let mut transform = Matrix::identity(self.field, self.rows);
        let pivot_cols = rref.eliminate(Some(&mut transform));
        RrefResult {
            rref,
            rank: pivot_cols.len(),
            pivot_cols,
            transform,
        }
    }

    /// The nonzero rows of the RREF: the canonical basis of the row space.
    pub fn row_basis(&self) -> Matrix {
        let mut m = self.clone();
        let rank = m.eliminate(None).len();
        m.rows = rank;
        m.data.truncate(rank * m.cols);
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(None).len()
    }

    /// Columns form a basis of `ker self`.
    pub fn kernel_basis(&self) -> Matrix {
        let mut e = self.clone();
        let pivots = e.eliminate(None);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, j, -e.get(i, f));
            }
        }
        k
    }

    /// The pivot columns of `self`: a basis of `im self`.
    pub fn image_basis(&self) -> Matrix {
        let mut e = self.clone();
        let pivots = e.eliminate(None);
        self.select_cols(&pivots)
    }

    /// `im other ⊆ im self`.
    pub fn column_span_contains(&self, other: &Matrix) -> Result<bool> {
        let joint = self.hstack(other)?;
        Ok(joint.rank() == self.rank())
    }

    /// A particular solution of `self * X = rhs` (free variables zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(self.shape_error("solve", rhs));
        }
        let RrefResult {
            rank,
            pivot_cols,
            transform,
            ..
        } = self.rref();
        let c = transform.mul(rhs)?;
        if (rank..c.rows).any(|i| c.row(i).iter().any(|s| !s.is_zero())) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &p) in pivot_cols.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, c.get(i, j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn canonical_decomposition(&self) -> CanonicalDecomposition {
        let field = self.field;
        let RrefResult {
            rref,
            rank,
            pivot_cols,
            transform,
        } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let order: Vec<usize> = pivot_cols.iter().chain(&free).copied().collect();

        // rref * perm = [I F; 0 0] = D * [I F; 0 I]
        let perm = Matrix::identity(field, self.cols).select_cols(&order);
        let mut upper = Matrix::identity(field, self.cols);
        let mut upper_inv = Matrix::identity(field, self.cols);
        for i in 0..rank {
            for (k, &f) in free.iter().enumerate() {
                upper.set(i, rank + k, rref.get(i, f).clone());
                upper_inv.set(i, rank + k, -rref.get(i, f));
            }
        }
        let q_inv = upper.mul(&perm.transpose()).expect("square");
        let q = perm.mul(&upper_inv).expect("square");
        let p_inv = transform.rref().transform;
        CanonicalDecomposition {
            p: transform,
            p_inv,
            q,
            q_inv,
            rank,
        }
    }

    fn pseudo_inverse_from(&self, dec: &CanonicalDecomposition) -> Matrix {
        let mid = dec.middle().transpose();
        dec.q
            .mul(&mid)
            .and_then(|m| m.mul(&dec.p))
            .expect("shapes agree by construction")
    }

    /// `L` with `L * self == I_cols`; present iff `self` is injective.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let dec = self.canonical_decomposition();
        (dec.rank == self.cols).then(|| self.pseudo_inverse_from(&dec))
    }

    /// `R` with `self * R == I_rows`; present iff `self` is surjective.
    pub fn right_inverse(&self) -> Option<Matrix> {
        let dec = self.canonical_decomposition();
        (dec.rank == self.rows).then(|| self.pseudo_inverse_from(&dec))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let dec = self.canonical_decomposition();
        (dec.rank == self.rows && dec.rank == self.cols).then(|| self.pseudo_inverse_from(&dec))
    }

    /// Rows as strings, for serialization.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.row_vecs()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "({}x{} empty)", self.rows, self.cols);
        }
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }
    const QQ: FieldSpec = FieldSpec::QQ;

    fn check_rref(m: &Matrix) -> RrefResult {
        let res = m.rref();
        assert_eq!(res.transform.mul(m).unwrap(), res.rref);
        assert!(res.transform.inverse().is_some());
        assert_eq!(res.rank, res.pivot_cols.len());
        assert!(res.pivot_cols.windows(2).all(|w| w[0] < w[1]));
        for (i, &p) in res.pivot_cols.iter().enumerate() {
            for k in 0..m.rows() {
                let e = res.rref.get(k, p);
                assert!(if k == i { e.is_one() } else { e.is_zero() });
            }
        }
        for i in res.rank..m.rows() {
            assert!(res.rref.row(i).iter().all(Scalar::is_zero));
        }
        res
    }

    #[test]
    fn rref_examples() {
        let res = check_rref(&Matrix::identity(QQ, 3));
        assert_eq!(res.rref, Matrix::identity(QQ, 3));
        assert_eq!(res.transform, Matrix::identity(QQ, 3));
        assert_eq!(res.rank, 3);

        let res = check_rref(&Matrix::zeros(QQ, 2, 2));
        assert_eq!(res.rank, 0);
        assert!(res.rref.is_zero());

        let res = check_rref(&Matrix::from_i64(gf(2), 2, 2, &[1, 1, 1, 1]));
        assert_eq!(res.rank, 1);
        assert_eq!(res.pivot_cols, vec![0]);
        assert_eq!(res.rref, Matrix::from_i64(gf(2), 2, 2, &[1, 1, 0, 0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(QQ, 2).kernel_basis().shape(), (2, 0));

        let m = Matrix::from_i64(QQ, 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        assert!(m.mul(&k).unwrap().is_zero());
        assert_eq!(k, Matrix::from_i64(QQ, 2, 1, &[-1, 1]));

        let k = Matrix::zeros(QQ, 2, 2).kernel_basis();
        assert_eq!(k.cols(), 2);
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn image_examples() {
        assert_eq!(Matrix::identity(QQ, 2).image_basis().rank(), 2);
        let m = Matrix::from_i64(QQ, 2, 2, &[1, 0, 0, 0]);
        let im = m.image_basis();
        assert_eq!(im, Matrix::from_i64(QQ, 2, 1, &[1, 0]));
        let empty = Matrix::zeros(QQ, 0, 3).image_basis();
        assert_eq!(empty.shape(), (0, 0));
    }

    fn check_canonical(m: &Matrix) -> CanonicalDecomposition {
        let dec = m.canonical_decomposition();
        assert!(dec.p.mul(&dec.p_inv).unwrap().is_identity());
        assert!(dec.q.mul(&dec.q_inv).unwrap().is_identity());
        assert_eq!(&dec.reconstruct(), m);
        assert_eq!(dec.rank, m.rank());
        dec
    }

    #[test]
    fn canonical_examples() {
        for n in 0..4 {
            let dec = check_canonical(&Matrix::identity(QQ, n));
            assert!(dec.p.is_identity() && dec.q.is_identity());
            assert_eq!(dec.rank, n);
        }
        assert_eq!(check_canonical(&Matrix::zeros(QQ, 2, 3)).rank, 0);
        assert_eq!(
            check_canonical(&Matrix::from_i64(QQ, 2, 2, &[2, 4, 1, 2])).rank,
            1
        );
        assert_eq!(check_canonical(&Matrix::zeros(QQ, 0, 2)).rank, 0);
        assert_eq!(check_canonical(&Matrix::zeros(QQ, 2, 0)).rank, 0);
    }

    #[test]
    fn inverse_examples() {
        let i3 = Matrix::identity(QQ, 3);
        assert_eq!(i3.inverse().unwrap(), i3);

        let tall = Matrix::from_i64(QQ, 2, 1, &[1, 0]);
        let l = tall.left_inverse().unwrap();
        assert!(l.mul(&tall).unwrap().is_identity());
        assert!(tall.right_inverse().is_none());

        let wide = Matrix::from_i64(gf(2), 1, 2, &[1, 1]);
        let r = wide.right_inverse().unwrap();
        assert!(wide.mul(&r).unwrap().is_identity());
        assert!(wide.left_inverse().is_none());
        assert!(wide.inverse().is_none());

        // K^0 -> K^0 is invertible; K^0 -> K^1 is injective only.
        assert!(Matrix::zeros(QQ, 0, 0).inverse().is_some());
        let z = Matrix::zeros(QQ, 1, 0);
        assert!(z.left_inverse().is_some());
        assert!(z.right_inverse().is_none());
    }

    #[test]
    fn arithmetic_examples() {
        let m = Matrix::from_i64(QQ, 2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(Matrix::identity(QQ, 2).mul(&m).unwrap(), m);
        let ds = mat_arith(
            &Matrix::identity(QQ, 1),
            &Matrix::identity(QQ, 2),
            MatOp::DirectSum,
        );
        assert_eq!(ds.unwrap(), Matrix::identity(QQ, 3));
        let h = mat_arith(
            &Matrix::from_i64(QQ, 1, 1, &[1]),
            &Matrix::from_i64(QQ, 1, 1, &[2]),
            MatOp::HStack,
        );
        assert_eq!(h.unwrap(), Matrix::from_i64(QQ, 1, 2, &[1, 2]));
        let v = mat_arith(
            &Matrix::from_i64(QQ, 1, 1, &[1]),
            &Matrix::from_i64(QQ, 1, 1, &[2]),
            MatOp::VStack,
        );
        assert_eq!(v.unwrap(), Matrix::from_i64(QQ, 2, 1, &[1, 2]));
        assert_eq!(
            mat_arith(&m, &m, MatOp::Add).unwrap(),
            m.scale(&QQ.from_i64(2))
        );
    }

    #[test]
    fn shape_and_field_errors() {
        let a = Matrix::zeros(QQ, 2, 3);
        assert!(matches!(
            a.mul(&a),
            Err(Error::ShapeMismatch { op: "mul", .. })
        ));
        assert!(matches!(
            a.hstack(&Matrix::zeros(QQ, 3, 1)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            a.vstack(&Matrix::zeros(QQ, 1, 1)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            a.add(&Matrix::zeros(gf(2), 2, 3)),
            Err(Error::FieldMismatch(..))
        ));
        assert!(Matrix::from_rows(QQ, 2, vec![vec![QQ.one()]]).is_err());
        assert!(Matrix::from_vec(QQ, 1, 1, vec![gf(3).one()]).is_err());
    }

    #[test]
    fn solve_returns_particular_solution() {
        let a = Matrix::from_i64(QQ, 2, 3, &[1, 2, 0, 0, 0, 1]);
        let b = Matrix::from_i64(QQ, 2, 1, &[5, 7]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, Matrix::from_i64(QQ, 3, 1, &[5, 0, 7]));
        let singular = Matrix::from_i64(QQ, 2, 1, &[1, 1]);
        assert!(singular
            .solve(&Matrix::from_i64(QQ, 2, 1, &[1, 0]))
            .unwrap()
            .is_none());
    }

    fn arb_matrix(field: FieldSpec, max: usize) -> impl Strategy<Value = Matrix> {
        let p = field.modulus().unwrap_or(7) as i64;
        (0..=max, 0..=max).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-p..p, r * c)
                .prop_map(move |v| Matrix::from_i64(field, r, c, &v))
        })
    }

    fn any_matrix() -> impl Strategy<Value = Matrix> {
        prop_oneof![
            arb_matrix(QQ, 5),
            arb_matrix(gf(2), 5),
            arb_matrix(gf(5), 5)
        ]
    }

    proptest! {
        #[test]
        fn rref_contract_and_idempotence(m in any_matrix()) {
            let res = check_rref(&m);
            prop_assert_eq!(res.rref.rref().rref, res.rref);
        }

        #[test]
        fn row_rank_equals_column_rank(m in any_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn canonical_reconstruction(m in any_matrix()) {
            check_canonical(&m);
        }

        #[test]
        fn kernel_and_image_contracts(m in any_matrix()) {
            let k = m.kernel_basis();
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
            prop_assert_eq!(k.cols(), m.cols() - m.rank());
            let im = m.image_basis();
            prop_assert_eq!(im.rank(), im.cols());
            prop_assert_eq!(im.cols(), m.rank());
            prop_assert!(im.column_span_contains(&m).unwrap());
        }

        #[test]
        fn one_sided_inverses_match_ranks(m in any_matrix()) {
            let l = m.left_inverse();
            prop_assert_eq!(l.is_some(), m.kernel_basis().cols() == 0);
            if let Some(l) = l {
                prop_assert!(l.mul(&m).unwrap().is_identity());
            }
            let r = m.right_inverse();
            prop_assert_eq!(r.is_some(), m.rank() == m.rows());
            if let Some(r) = r {
                prop_assert!(m.mul(&r).unwrap().is_identity());
            }
        }
    }
}
