//! Linear relations `R ⊆ K^m × K^n` and their algebra.
//!
//! A relation is stored as the reduced row-echelon basis of the subspace
//! `R ⊆ K^(m+n)`; each basis row is a vector `(x | y)` with the left block
//! first. The representation is canonical, so `==` is subspace equality.
//! Subspaces `V ⊆ K^n` are relations with left arity 0.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRelation {
    m: usize,
    n: usize,
    basis: Matrix,
}

/// The special relations used to build the others: graphs of the maps
/// `x ↦ x`, `(x, y) ↦ (y, x)`, `0 : K^0 → K^n`, `(x, y) ↦ x + y`,
/// `x ↦ (x, x)` and `x ↦ 0 : K^n → K^0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Identity(usize),
    Twist(usize, usize),
    Zero(usize),
    Sum(usize),
    Copy(usize),
    Discard(usize),
}

impl Generator {
    /// The matrix whose graph the generator is.
    pub fn matrix(self, field: FieldSpec) -> Matrix {
        match self {
            Generator::Identity(n) => Matrix::identity(field, n),
            Generator::Twist(m, n) => {
                let mut t = Matrix::zeros(field, n + m, m + n);
                for i in 0..n {
                    t.set(i, m + i, field.one());
                }
                for i in 0..m {
                    t.set(n + i, i, field.one());
                }
                t
            }
            Generator::Zero(n) => Matrix::zeros(field, n, 0),
            Generator::Sum(n) => {
                let id = Matrix::identity(field, n);
                id.hstack(&id).expect("same height")
            }
            Generator::Copy(n) => {
                let id = Matrix::identity(field, n);
                id.vstack(&id).expect("same width")
            }
            Generator::Discard(n) => Matrix::zeros(field, 0, n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PropertyReport {
    pub total: bool,
    pub deterministic: bool,
    pub injective: bool,
    pub surjective: bool,
    pub is_map: bool,
    pub is_bijective: bool,
}

impl PropertyReport {
    pub fn new(total: bool, deterministic: bool, injective: bool, surjective: bool) -> Self {
        PropertyReport {
            total,
            deterministic,
            injective,
            surjective,
            is_map: total && deterministic,
            is_bijective: total && deterministic && injective && surjective,
        }
    }

    /// The report of the opposite relation.
    pub fn mirrored(&self) -> Self {
        PropertyReport::new(
            self.surjective,
            self.injective,
            self.deterministic,
            self.total,
        )
    }

    /// `[TOT, DET, INJ, SUR]`.
    pub fn as_array(&self) -> [bool; 4] {
        [
            self.total,
            self.deterministic,
            self.injective,
            self.surjective,
        ]
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = ["TOT", "DET", "INJ", "SUR"]
            .into_iter()
            .zip(self.as_array())
            .filter_map(|(n, b)| b.then_some(n))
            .collect();
        if names.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", names.join(" "))
        }
    }
}

/// Row basis of the intersection of two row spaces: `(α, β)` ranges over
/// `ker [Aᵀ | -Bᵀ]` and `αA` sweeps `rowspace A ∩ rowspace B`.
pub(crate) fn intersect_rows(a: &Matrix, b: &Matrix) -> Matrix {
    let stacked = a
        .transpose()
        .hstack(&b.transpose().neg())
        .expect("same width");
    let k = stacked.kernel_basis();
    let alpha = k.row_range(0..a.rows());
    alpha.transpose().mul(a).expect("shapes agree").row_basis()
}

impl LinearRelation {
    fn canonical(m: usize, n: usize, rows: &Matrix) -> Self {
        debug_assert_eq!(rows.cols(), m + n);
        LinearRelation {
            m,
            n,
            basis: rows.row_basis(),
        }
    }

    /// The relation spanned by the rows `(x | y)` of `rows`.
    pub fn from_subspace_basis(
        field: FieldSpec,
        m: usize,
        n: usize,
        rows: &Matrix,
    ) -> Result<Self> {
        if rows.field() != field {
            return Err(Error::FieldMismatch(field, rows.field()));
        }
        if rows.cols() != m + n {
            return Err(Error::ShapeMismatch {
                op: "from_subspace_basis",
                lhs: (m, n),
                rhs: rows.shape(),
            });
        }
        Ok(Self::canonical(m, n, rows))
    }

    /// The subspace of `K^(rows)` spanned by the columns of `cols`, as a `0 × rows` relation.
    pub fn column_span(cols: &Matrix) -> Self {
        Self::canonical(0, cols.rows(), &cols.transpose())
    }

    pub fn zero(field: FieldSpec, m: usize, n: usize) -> Self {
        Self::canonical(m, n, &Matrix::zeros(field, 0, m + n))
    }

    pub fn full(field: FieldSpec, m: usize, n: usize) -> Self {
        Self::canonical(m, n, &Matrix::identity(field, m + n))
    }

    /// `Gr(a) = {(x, a x)}` for `a : K^cols → K^rows`.
    pub fn graph_of_map(a: &Matrix) -> Self {
        let rows = Matrix::identity(a.field(), a.cols())
            .hstack(&a.transpose())
            .expect("same height");
        Self::canonical(a.cols(), a.rows(), &rows)
    }

    /// `{(x, y) : a x = b y}`.
    pub fn from_cospan(a: &Matrix, b: &Matrix) -> Result<Self> {
        if a.rows() != b.rows() || a.field() != b.field() {
            return Err(Error::ShapeMismatch {
                op: "from_cospan",
                lhs: a.shape(),
                rhs: b.shape(),
            });
        }
        let k = a.hstack(&b.neg())?.kernel_basis();
        Ok(Self::canonical(a.cols(), b.cols(), &k.transpose()))
    }

    /// `{(c z, d z) : z}`.
    pub fn from_span(c: &Matrix, d: &Matrix) -> Result<Self> {
        if c.cols() != d.cols() || c.field() != d.field() {
            return Err(Error::ShapeMismatch {
                op: "from_span",
                lhs: c.shape(),
                rhs: d.shape(),
            });
        }
        let rows = c.transpose().hstack(&d.transpose())?;
        Ok(Self::canonical(c.rows(), d.rows(), &rows))
    }

    pub fn generator(field: FieldSpec, g: Generator) -> Self {
        Self::graph_of_map(&g.matrix(field))
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::generator(field, Generator::Identity(n))
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn left_arity(&self) -> usize {
        self.m
    }

    pub fn right_arity(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// RREF basis rows `(x | y)`.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Basis vectors as columns; for a subspace (`m = 0`) these span `V ⊆ K^n`.
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    pub fn left_part(&self) -> Matrix {
        self.basis.col_range(0..self.m)
    }

    pub fn right_part(&self) -> Matrix {
        self.basis.col_range(self.m..self.m + self.n)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.m + self.n
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Membership of `(x, y)`.
    pub fn contains(&self, x: &[Scalar], y: &[Scalar]) -> Result<bool> {
        if x.len() != self.m || y.len() != self.n {
            return Err(Error::ArityMismatch {
                op: "contains",
                lhs: self.arity(),
                rhs: (x.len(), y.len()),
            });
        }
        let mut v: Vec<Scalar> = x.to_vec();
        v.extend_from_slice(y);
        let row = Matrix::from_vec(self.field(), 1, self.m + self.n, v)?;
        self.basis.vstack(&row).map(|s| s.rank() == self.dim())
    }

    fn check_arity(&self, op: &'static str, other: &LinearRelation) -> Result<()> {
        if self.arity() != other.arity() || self.field() != other.field() {
            return Err(Error::ArityMismatch {
                op,
                lhs: self.arity(),
                rhs: other.arity(),
            });
        }
        Ok(())
    }

    /// `{(y, x) : (x, y) ∈ R}`.
    pub fn opposite(&self) -> Self {
        let rows = self
            .right_part()
            .hstack(&self.left_part())
            .expect("same height");
        Self::canonical(self.n, self.m, &rows)
    }

    /// `R ; S = {(x, z) : ∃ y, (x, y) ∈ R ∧ (y, z) ∈ S}`.
    ///
    /// `R × K^n` and `K^m × S` are intersected inside `K^m × K^k × K^n` and
    /// the middle block is projected away.
    pub fn compose(&self, s: &LinearRelation) -> Result<Self> {
        if self.n != s.m || self.field() != s.field() {
            return Err(Error::ArityMismatch {
                op: "compose",
                lhs: self.arity(),
                rhs: s.arity(),
            });
        }
        let field = self.field();
        let (m, k, n) = (self.m, self.n, s.n);
        // R × K^n and K^m × S inside K^(m+k+n)
        let lifted_r = self
            .basis
            .hstack(&Matrix::zeros(field, self.dim(), n))?
            .vstack(&Matrix::zeros(field, n, m + k).hstack(&Matrix::identity(field, n))?)?;
        let lifted_s = Matrix::zeros(field, s.dim(), m)
            .hstack(&s.basis)?
            .vstack(&Matrix::identity(field, m).hstack(&Matrix::zeros(field, m, k + n))?)?;
        let common = intersect_rows(&lifted_r, &lifted_s);
        let outer: Vec<usize> = (0..m).chain(m + k..m + k + n).collect();
        Ok(Self::canonical(m, n, &common.select_cols(&outer)))
    }

    /// `R × S = {((x, w), (y, z)) : (x, y) ∈ R, (w, z) ∈ S}`.
    pub fn direct_product(&self, s: &LinearRelation) -> Result<Self> {
        if self.field() != s.field() {
            return Err(Error::FieldMismatch(self.field(), s.field()));
        }
        let field = self.field();
        let width = self.m + s.m + self.n + s.n;
        let mut rows = Matrix::zeros(field, self.dim() + s.dim(), width);
        for i in 0..self.dim() {
            for j in 0..self.m {
                rows.set(i, j, self.basis.get(i, j).clone());
            }
            for j in 0..self.n {
                rows.set(i, self.m + s.m + j, self.basis.get(i, self.m + j).clone());
            }
        }
        for i in 0..s.dim() {
            let r = self.dim() + i;
            for j in 0..s.m {
                rows.set(r, self.m + j, s.basis.get(i, j).clone());
            }
            for j in 0..s.n {
                rows.set(
                    r,
                    self.m + s.m + self.n + j,
                    s.basis.get(i, s.m + j).clone(),
                );
            }
        }
        Ok(Self::canonical(self.m + s.m, self.n + s.n, &rows))
    }

    /// `s ⊆ self`.
    pub fn includes(&self, s: &LinearRelation) -> Result<bool> {
        self.check_arity("includes", s)?;
        Ok(self.basis.vstack(&s.basis)?.rank() == self.dim())
    }

    /// Intersection.
    pub fn meet(&self, s: &LinearRelation) -> Result<Self> {
        self.check_arity("meet", s)?;
        Ok(Self::canonical(
            self.m,
            self.n,
            &intersect_rows(&self.basis, &s.basis),
        ))
    }

    /// Sum.
    pub fn join(&self, s: &LinearRelation) -> Result<Self> {
        self.check_arity("join", s)?;
        Ok(Self::canonical(
            self.m,
            self.n,
            &self.basis.vstack(&s.basis)?,
        ))
    }

    fn zero_source(&self, n: usize) -> Self {
        Self::generator(self.field(), Generator::Zero(n))
    }

    fn full_source(&self, n: usize) -> Self {
        Self::generator(self.field(), Generator::Discard(n)).opposite()
    }

    /// `{x : (x, 0) ∈ R}` as a subspace of `K^m`.
    pub fn kernel(&self) -> Self {
        self.zero_source(self.n)
            .compose(&self.opposite())
            .expect("arities agree")
    }

    /// `{y : ∃ x, (x, y) ∈ R}` as a subspace of `K^n`.
    pub fn image(&self) -> Self {
        self.full_source(self.m)
            .compose(self)
            .expect("arities agree")
    }

    /// `{x : ∃ y, (x, y) ∈ R}` as a subspace of `K^m`.
    pub fn domain(&self) -> Self {
        self.full_source(self.n)
            .compose(&self.opposite())
            .expect("arities agree")
    }

    /// `{y : (0, y) ∈ R}` as a subspace of `K^n`.
    pub fn indeterminacy(&self) -> Self {
        self.zero_source(self.m)
            .compose(self)
            .expect("arities agree")
    }

    /// Only the nontrivial inclusion of each property is tested: `K^m ⊆ dom`,
    /// `indet ⊆ 0`, `ker ⊆ 0`, `K^n ⊆ im`.
    pub fn properties(&self) -> PropertyReport {
        PropertyReport::new(
            self.domain().is_full(),
            self.indeterminacy().is_zero(),
            self.kernel().is_zero(),
            self.image().is_full(),
        )
    }
}

impl fmt::Display for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} -> {} relation of dimension {} over {}",
            self.m,
            self.n,
            self.dim(),
            self.field()
        )?;
        write!(f, "{}", self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const QQ: FieldSpec = FieldSpec::QQ;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn rel(field: FieldSpec, m: usize, n: usize, rows: usize, v: &[i64]) -> LinearRelation {
        LinearRelation::from_subspace_basis(field, m, n, &Matrix::from_i64(field, rows, m + n, v))
            .unwrap()
    }

    fn vecs(field: FieldSpec, len: usize) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    field.elements().unwrap().map(move |s| {
                        let mut w = v.clone();
                        w.push(s);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Elements of `r` over a finite field, by testing every pair.
    fn members(r: &LinearRelation) -> Vec<(Vec<u64>, Vec<u64>)> {
        let f = r.field();
        let mut out = vec![];
        for x in vecs(f, r.left_arity()) {
            for y in vecs(f, r.right_arity()) {
                if r.contains(&x, &y).unwrap() {
                    let res =
                        |v: &[Scalar]| v.iter().map(|s| s.residue().unwrap()).collect::<Vec<_>>();
                    out.push((res(&x), res(&y)));
                }
            }
        }
        out
    }

    #[test]
    fn from_subspace_basis_examples() {
        assert_eq!(rel(QQ, 1, 1, 0, &[]), LinearRelation::zero(QQ, 1, 1));
        assert_eq!(rel(QQ, 1, 1, 1, &[1, 1]), LinearRelation::identity(QQ, 1));
        let r = rel(QQ, 1, 1, 2, &[1, 0, 1, 0]);
        assert_eq!(r.dim(), 1);
        assert_eq!(r, LinearRelation::graph_of_map(&Matrix::zeros(QQ, 1, 1)));
        let bad = LinearRelation::from_subspace_basis(QQ, 1, 1, &Matrix::zeros(QQ, 1, 3));
        assert!(matches!(bad, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn graph_examples() {
        let id = LinearRelation::graph_of_map(&Matrix::identity(QQ, 2));
        assert_eq!(
            id.basis(),
            &Matrix::from_i64(QQ, 2, 4, &[1, 0, 1, 0, 0, 1, 0, 1])
        );
        let z = LinearRelation::graph_of_map(&Matrix::zeros(QQ, 1, 1));
        assert_eq!(z.basis(), &Matrix::from_i64(QQ, 1, 2, &[1, 0]));

        let g = LinearRelation::graph_of_map(&Matrix::from_i64(gf(2), 1, 2, &[1, 1]));
        assert_eq!(g.arity(), (2, 1));
        assert_eq!(g.dim(), 2);
        let expect = vec![
            (vec![0, 0], vec![0]),
            (vec![0, 1], vec![1]),
            (vec![1, 0], vec![1]),
            (vec![1, 1], vec![0]),
        ];
        assert_eq!(members(&g), expect);
    }

    #[test]
    fn cospan_examples() {
        let i2 = Matrix::identity(QQ, 2);
        assert_eq!(
            LinearRelation::from_cospan(&i2, &i2).unwrap(),
            LinearRelation::identity(QQ, 2)
        );
        let proj = Matrix::from_i64(QQ, 2, 2, &[1, 0, 0, 0]);
        assert_eq!(
            LinearRelation::from_cospan(&proj, &i2).unwrap(),
            LinearRelation::graph_of_map(&proj)
        );

        let f = gf(2);
        let a = Matrix::from_i64(f, 1, 2, &[1, 1]);
        let r = LinearRelation::from_cospan(&a, &a).unwrap();
        assert_eq!(r.dim(), 3);
        let m = members(&r);
        assert_eq!(m.len(), 8);
        assert!(m
            .iter()
            .all(|(x, y)| (x[0] + x[1]) % 2 == (y[0] + y[1]) % 2));

        let bad = LinearRelation::from_cospan(&a, &Matrix::identity(f, 2));
        assert!(matches!(bad, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn span_examples() {
        let i3 = Matrix::identity(QQ, 3);
        assert_eq!(
            LinearRelation::from_span(&i3, &i3).unwrap(),
            LinearRelation::identity(QQ, 3)
        );
        let r =
            LinearRelation::from_span(&Matrix::identity(QQ, 1), &Matrix::zeros(QQ, 1, 1)).unwrap();
        assert_eq!(r, rel(QQ, 1, 1, 1, &[1, 0]));
        let r = LinearRelation::from_span(
            &Matrix::from_i64(QQ, 2, 1, &[1, 0]),
            &Matrix::from_i64(QQ, 1, 1, &[1]),
        )
        .unwrap();
        assert_eq!(r, rel(QQ, 2, 1, 1, &[1, 0, 1]));
        let bad = LinearRelation::from_span(&Matrix::identity(QQ, 1), &Matrix::identity(QQ, 2));
        assert!(bad.is_err());
    }

    #[test]
    fn generator_examples() {
        let f = gf(2);
        assert_eq!(
            LinearRelation::generator(f, Generator::Identity(2)),
            LinearRelation::graph_of_map(&Matrix::identity(f, 2))
        );
        let sum = LinearRelation::generator(f, Generator::Sum(1));
        assert_eq!(sum.arity(), (2, 1));
        assert_eq!(sum.dim(), 2);
        assert!(members(&sum).iter().all(|(x, y)| (x[0] + x[1]) % 2 == y[0]));
        let discard = LinearRelation::generator(f, Generator::Discard(1));
        assert_eq!((discard.arity(), discard.dim()), ((1, 0), 1));

        let copy = LinearRelation::generator(f, Generator::Copy(2));
        assert_eq!(copy.arity(), (2, 4));
        assert!(copy
            .contains(
                &[f.one(), f.zero()],
                &[f.one(), f.zero(), f.one(), f.zero()]
            )
            .unwrap());
        let tw = LinearRelation::generator(QQ, Generator::Twist(1, 2));
        assert_eq!(tw.arity(), (3, 3));
        let (a, b, c) = (QQ.from_i64(1), QQ.from_i64(2), QQ.from_i64(3));
        assert!(tw
            .contains(&[a.clone(), b.clone(), c.clone()], &[b, c, a])
            .unwrap());
        let zero = LinearRelation::generator(QQ, Generator::Zero(3));
        assert_eq!((zero.arity(), zero.dim()), ((0, 3), 0));
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(
            LinearRelation::identity(QQ, 2).opposite(),
            LinearRelation::identity(QQ, 2)
        );
        let g = LinearRelation::graph_of_map(&Matrix::from_i64(QQ, 2, 1, &[1, 0]));
        assert_eq!(g.opposite(), rel(QQ, 2, 1, 1, &[1, 0, 1]));
    }

    #[test]
    fn compose_examples() {
        let f = gf(2);
        let copy = LinearRelation::generator(f, Generator::Copy(1));
        let sum = LinearRelation::generator(f, Generator::Sum(1));
        assert_eq!(
            copy.compose(&sum).unwrap(),
            LinearRelation::graph_of_map(&Matrix::zeros(f, 1, 1))
        );
        // over QQ the same diagram is doubling
        let copy = LinearRelation::generator(QQ, Generator::Copy(1));
        let sum = LinearRelation::generator(QQ, Generator::Sum(1));
        assert_eq!(
            copy.compose(&sum).unwrap(),
            LinearRelation::graph_of_map(&Matrix::from_i64(QQ, 1, 1, &[2]))
        );
        let bad = copy.compose(&copy);
        assert!(matches!(
            bad,
            Err(Error::ArityMismatch { op: "compose", .. })
        ));
    }

    #[test]
    fn product_examples() {
        assert_eq!(
            LinearRelation::identity(QQ, 2)
                .direct_product(&LinearRelation::identity(QQ, 1))
                .unwrap(),
            LinearRelation::identity(QQ, 3)
        );
        let unit = LinearRelation::full(QQ, 0, 0);
        let r = rel(QQ, 1, 2, 1, &[1, 2, 3]);
        assert_eq!(unit.direct_product(&r).unwrap(), r);
        assert_eq!(r.direct_product(&unit).unwrap(), r);

        let f = gf(2);
        let p = rel(f, 1, 1, 1, &[1, 0])
            .direct_product(&rel(f, 1, 1, 1, &[0, 1]))
            .unwrap();
        assert_eq!(p.dim(), 2);
        let m = members(&p);
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|(x, y)| x[1] == 0 && y[0] == 0));
    }

    #[test]
    fn lattice_examples() {
        let r = rel(QQ, 1, 1, 1, &[2, 3]);
        assert!(r.includes(&r).unwrap());
        assert!(LinearRelation::full(QQ, 1, 1).includes(&r).unwrap());
        for f in [QQ, gf(2), gf(5)] {
            assert!(!LinearRelation::zero(f, 1, 1)
                .includes(&LinearRelation::identity(f, 1))
                .unwrap());
        }
        assert_eq!(r.meet(&r).unwrap(), r);
        assert_eq!(r.join(&r).unwrap(), r);

        let e1 = LinearRelation::column_span(&Matrix::from_i64(QQ, 2, 1, &[1, 0]));
        let e2 = LinearRelation::column_span(&Matrix::from_i64(QQ, 2, 1, &[0, 1]));
        assert!(e1.meet(&e2).unwrap().is_zero());
        assert!(e1.join(&e2).unwrap().is_full());
        assert!(r.meet(&e1).is_err());
    }

    #[test]
    fn subspace_examples_by_enumeration() {
        for n in 0..3 {
            let id = LinearRelation::identity(QQ, n);
            assert!(id.kernel().is_zero() && id.indeterminacy().is_zero());
            assert!(id.image().is_full() && id.domain().is_full());
        }
        let full = LinearRelation::full(gf(2), 1, 1);
        assert!(full.kernel().is_full() && full.image().is_full());
        assert!(full.domain().is_full() && full.indeterminacy().is_full());
        assert_eq!(
            full.properties(),
            PropertyReport::new(true, false, false, true)
        );

        let g = LinearRelation::graph_of_map(&Matrix::from_i64(QQ, 2, 2, &[1, 0, 0, 0]));
        assert_eq!(
            g.kernel(),
            LinearRelation::column_span(&Matrix::from_i64(QQ, 2, 1, &[0, 1]))
        );
        assert_eq!(
            g.image(),
            LinearRelation::column_span(&Matrix::from_i64(QQ, 2, 1, &[1, 0]))
        );
        assert_eq!(g.kernel().arity(), (0, 2));
    }

    #[test]
    fn property_examples() {
        for n in 0..4 {
            assert!(LinearRelation::identity(gf(3), n).properties().is_bijective);
        }
        let d = LinearRelation::generator(QQ, Generator::Discard(1)).properties();
        assert_eq!(d, PropertyReport::new(true, true, false, true));
        assert_eq!(d.to_string(), "TOT DET SUR");
        let z = LinearRelation::zero(QQ, 1, 1).properties();
        assert_eq!(z, PropertyReport::new(false, true, true, false));
        assert!(!z.is_map);
        assert_eq!(
            PropertyReport::new(false, false, false, false).to_string(),
            "none"
        );
    }

    // ---- laws on random relations ----

    fn arb_rows(field: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        let p = field.modulus().unwrap_or(7) as i64;
        proptest::collection::vec(-p..p, rows * cols)
            .prop_map(move |v| Matrix::from_i64(field, rows, cols, &v))
    }

    fn arb_rel(field: FieldSpec, m: usize, n: usize) -> impl Strategy<Value = LinearRelation> {
        (0..=m + n).prop_flat_map(move |d| {
            arb_rows(field, d, m + n).prop_map(move |rows| {
                LinearRelation::from_subspace_basis(field, m, n, &rows).unwrap()
            })
        })
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![Just(QQ), Just(gf(2)), Just(gf(3))]
    }

    fn arb_triple() -> impl Strategy<Value = (LinearRelation, LinearRelation, LinearRelation)> {
        (arb_field(), 0..4usize, 0..4usize, 0..4usize, 0..4usize)
            .prop_flat_map(|(f, a, b, c, d)| (arb_rel(f, a, b), arb_rel(f, b, c), arb_rel(f, c, d)))
    }

    proptest! {
        #[test]
        fn canonical_under_change_of_generators(
            (r, mix) in (arb_field(), 0..4usize, 0..4usize)
                .prop_flat_map(|(f, m, n)| (arb_rel(f, m, n), arb_rows(f, 8, 6)))
        ) {
            // any family of combinations spanning the same space gives the same value
            let d = r.dim();
            let mix = mix.row_range(0..d + 2).col_range(0..d);
            let extra = mix.mul(r.basis()).unwrap();
            let both = r.basis().vstack(&extra).unwrap();
            let again = LinearRelation::from_subspace_basis(r.field(), r.left_arity(), r.right_arity(), &both).unwrap();
            prop_assert_eq!(&again, &r);
        }

        #[test]
        fn opposite_is_involution(r in (arb_field(), 0..4usize, 0..4usize).prop_flat_map(|(f, m, n)| arb_rel(f, m, n))) {
            prop_assert_eq!(r.opposite().opposite(), r.clone());
            prop_assert_eq!(r.opposite().properties(), r.properties().mirrored());
        }

        #[test]
        fn associativity_and_contravariance((a, b, c) in arb_triple()) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(
                a.compose(&b).unwrap().opposite(),
                b.opposite().compose(&a.opposite()).unwrap()
            );
            prop_assert_eq!(a.compose(&LinearRelation::identity(a.field(), a.right_arity())).unwrap(), a.clone());
        }

        #[test]
        fn interchange((a, b, c, d) in (arb_field(), 0..3usize, 0..3usize, 0..3usize, 0..3usize, 0..3usize, 0..3usize)
            .prop_flat_map(|(f, p, q, r, s, t, u)| (arb_rel(f, p, q), arb_rel(f, q, r), arb_rel(f, s, t), arb_rel(f, t, u))))
        {
            let lhs = a.compose(&b).unwrap().direct_product(&c.compose(&d).unwrap()).unwrap();
            let rhs = a.direct_product(&c).unwrap().compose(&b.direct_product(&d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn composition_is_monotone((a, s, t) in (arb_field(), 0..4usize, 0..4usize, 0..4usize)
            .prop_flat_map(|(f, m, k, n)| (arb_rel(f, m, k), arb_rel(f, k, n), arb_rel(f, k, n))))
        {
            let small = s.meet(&t).unwrap();
            prop_assert!(a.compose(&s).unwrap().includes(&a.compose(&small).unwrap()).unwrap());
            let flipped = s.opposite();
            let sub = small.opposite();
            prop_assert!(flipped.compose(&a.opposite()).unwrap().includes(&sub.compose(&a.opposite()).unwrap()).unwrap());
        }

        #[test]
        fn modular_dimension_law((r, s) in (arb_field(), 0..4usize, 0..4usize)
            .prop_flat_map(|(f, m, n)| (arb_rel(f, m, n), arb_rel(f, m, n))))
        {
            let meet = r.meet(&s).unwrap();
            let join = r.join(&s).unwrap();
            prop_assert_eq!(join.dim() + meet.dim(), r.dim() + s.dim());
            prop_assert!(r.includes(&meet).unwrap() && s.includes(&meet).unwrap());
            prop_assert!(join.includes(&r).unwrap() && join.includes(&s).unwrap());
        }

        #[test]
        fn graphs_are_maps((a, b) in (arb_field(), 0..4usize, 0..4usize, 0..4usize)
            .prop_flat_map(|(f, m, k, n)| (arb_rows(f, k, m), arb_rows(f, n, k))))
        {
            let ga = LinearRelation::graph_of_map(&a);
            prop_assert!(ga.properties().is_map);
            let id = Matrix::identity(a.field(), a.rows());
            prop_assert_eq!(LinearRelation::from_cospan(&a, &id).unwrap(), ga.clone());
            let gb = LinearRelation::graph_of_map(&b);
            prop_assert_eq!(ga.compose(&gb).unwrap(), LinearRelation::graph_of_map(&b.mul(&a).unwrap()));
            // a span with an identity leg is also a graph
            let idm = Matrix::identity(a.field(), a.cols());
            prop_assert_eq!(LinearRelation::from_span(&idm, &a).unwrap(), ga);
        }
    }
}
