//! Simultaneous decomposition of two matrices with a common codomain.
//!
//! For `A: K^m → K^k` and `B: K^n → K^k` the cospan decomposition of
//! `{Ax = By}` yields `P`, `Q` and selectors `D1`, `D2` presenting the wire
//! relation as a cospan. A single injective `H` then links both:
//! `A = H·D1·P` and `B = H·D2·Q`.

use crate::decompose::{cospan_decompose, WireShape};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::relation::LinearRelation;

#[derive(Clone, Debug)]
pub struct PairDecomposition {
    pub p: Matrix,
    pub q: Matrix,
    pub d1: Matrix,
    pub d2: Matrix,
    pub h: Matrix,
    pub shape: WireShape,
}

impl PairDecomposition {
    /// `j = r + kT + kS`, the width of `H`.
    pub fn j(&self) -> usize {
        self.d1.rows()
    }

    /// Both factorizations hold exactly.
    pub fn reconstructs(&self, a: &Matrix, b: &Matrix) -> bool {
        let lhs = self.h.mul(&self.d1).and_then(|x| x.mul(&self.p));
        let rhs = self.h.mul(&self.d2).and_then(|x| x.mul(&self.q));
        lhs.is_ok_and(|x| x == *a) && rhs.is_ok_and(|x| x == *b)
    }

    pub fn h_injective(&self) -> bool {
        self.h.rank() == self.h.cols()
    }

    pub fn h_surjective(&self) -> bool {
        self.h.rank() == self.h.rows()
    }

    /// Dimension of `{X : X·[D1·P | D2·Q] = 0}`; zero means `H` is unique.
    pub fn solution_freedom(&self) -> usize {
        let stacked = self
            .d1
            .mul(&self.p)
            .and_then(|x| x.hstack(&self.d2.mul(&self.q)?))
            .expect("shapes agree by construction");
        stacked.rows() - stacked.rank()
    }

    /// Every structural postcondition.
    pub fn verify(&self, a: &Matrix, b: &Matrix) -> bool {
        self.reconstructs(a, b)
            && self.h_injective()
            && self.solution_freedom() == 0
            && LinearRelation::from_cospan(&self.d1, &self.d2).is_ok_and(|w| {
                w == crate::decompose::canonical_wire_relation(a.field(), self.shape)
            })
    }
}

/// Selectors `(u,v,t) ↦ (u,t,0)` and `(u,s,w) ↦ (u,0,s)`.
pub fn selectors(field: FieldSpec, shape: WireShape) -> (Matrix, Matrix) {
    let WireShape {
        r, k_i, k_s, k_t, ..
    } = shape;
    let j = r + k_t + k_s;
    let mut d1 = Matrix::zeros(field, j, shape.m());
    let mut d2 = Matrix::zeros(field, j, shape.n());
    for i in 0..r {
        d1.set(i, i, field.one());
        d2.set(i, i, field.one());
    }
    for i in 0..k_t {
        d1.set(r + i, r + k_i + i, field.one());
    }
    for i in 0..k_s {
        d2.set(r + k_t + i, r + i, field.one());
    }
    (d1, d2)
}

fn check_pair(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch {
            op,
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    Ok(())
}

/// `H` with `H·d1 = a` and `H·d2 = b` for a jointly surjective presentation
/// `(d1, d2)`. `None` when no such `H` exists.
///
/// Only exercised with the selectors produced by [`pair_decompose`].
pub fn link_map(a: &Matrix, b: &Matrix, d1: &Matrix, d2: &Matrix) -> Result<Option<Matrix>> {
    check_pair("link_map", a, b)?;
    check_pair("link_map", d1, d2)?;
    if a.cols() != d1.cols() || b.cols() != d2.cols() {
        return Err(Error::ShapeMismatch {
            op: "link_map",
            lhs: a.shape(),
            rhs: d1.shape(),
        });
    }
    let stacked = d1.hstack(d2)?;
    if stacked.rank() != stacked.rows() {
        return Err(Error::InvalidPresentation(
            "selectors are not jointly surjective".into(),
        ));
    }
    let target = a.hstack(b)?;
    Ok(stacked
        .transpose()
        .solve(&target.transpose())?
        .map(|x| x.transpose()))
}

pub fn pair_decompose(a: &Matrix, b: &Matrix) -> Result<PairDecomposition> {
    check_pair("pair_decompose", a, b)?;
    let field = a.field();
    let dec = cospan_decompose(&LinearRelation::from_cospan(a, b)?);
    let (d1, d2) = selectors(field, dec.shape);
    let h = link_map(a, b, &d1.mul(&dec.p)?, &d2.mul(&dec.q)?)?
        .unwrap_or_else(|| panic!("no linking map for\nA =\n{a}\nB =\n{b}"));
    Ok(PairDecomposition {
        p: dec.p,
        q: dec.q,
        d1,
        d2,
        h,
        shape: dec.shape,
    })
}

/// Column bases of the subspaces generated by `im A` and `im B`.
#[derive(Clone, Debug)]
pub struct SubspaceReport {
    pub field: FieldSpec,
    pub im_a: Matrix,
    pub im_b: Matrix,
    pub intersection: Matrix,
    pub sum: Matrix,
    pub complement_of_a: Matrix,
    pub complement_of_b: Matrix,
    pub complement_of_intersection: Matrix,
}

impl SubspaceReport {
    pub fn entries(&self) -> [(&'static str, &Matrix); 7] {
        [
            ("im_a", &self.im_a),
            ("im_b", &self.im_b),
            ("intersection", &self.intersection),
            ("sum", &self.sum),
            ("complement_of_a", &self.complement_of_a),
            ("complement_of_b", &self.complement_of_b),
            (
                "complement_of_intersection",
                &self.complement_of_intersection,
            ),
        ]
    }
}

/// Slices the columns of `H` as `(r | kT | kS)`.
pub fn subspace_report(a: &Matrix, b: &Matrix) -> Result<SubspaceReport> {
    let pd = pair_decompose(a, b)?;
    let WireShape { r, k_t, k_s, .. } = pd.shape;
    let h = &pd.h;
    let cols = |blocks: &[std::ops::Range<usize>]| {
        let idx: Vec<usize> = blocks.iter().flat_map(|b| b.clone()).collect();
        h.select_cols(&idx)
    };
    let (bu, bt, bs) = (0..r, r..r + k_t, r + k_t..r + k_t + k_s);
    Ok(SubspaceReport {
        field: a.field(),
        im_a: cols(&[bu.clone(), bt.clone()]),
        im_b: cols(&[bu.clone(), bs.clone()]),
        intersection: cols(std::slice::from_ref(&bu)),
        sum: h.clone(),
        complement_of_a: cols(std::slice::from_ref(&bs)),
        complement_of_b: cols(std::slice::from_ref(&bt)),
        complement_of_intersection: cols(&[bt, bs]),
    })
}

/// Sum and intersection of the column spaces by row-reducing `[[Aᵀ, Aᵀ], [Bᵀ, 0]]`.
pub fn zassenhaus(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
    check_pair("zassenhaus", a, b)?;
    let field = a.field();
    let k = a.rows();
    let at = a.transpose();
    let block = at
        .hstack(&at)?
        .vstack(&b.transpose().hstack(&Matrix::zeros(field, b.cols(), k))?)?;
    let reduced = block.row_basis();
    let left = reduced.col_range(0..k);
    let right = reduced.col_range(k..2 * k);
    let (mut sum, mut meet) = (vec![], vec![]);
    for i in 0..reduced.rows() {
        if left.row(i).iter().any(|s| !s.is_zero()) {
            sum.push(i);
        } else {
            meet.push(i);
        }
    }
    Ok((
        left.select_rows(&sum).transpose(),
        right.select_rows(&meet).transpose(),
    ))
}
