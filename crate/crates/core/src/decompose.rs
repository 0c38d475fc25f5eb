//! Cospan decomposition of a linear relation.
//!
//! Every relation `R ⊆ K^m × K^n` is, up to invertible base changes `P` on the
//! left and `Q` on the right, a wire relation
//!
//! ```text
//! W = {((u, v, 0), (u, 0, w))},   u ∈ K^r, v ∈ K^kI, w ∈ K^kD
//! ```
//!
//! with left coordinates `(u, v, t)` and right coordinates `(u, s, w)`. The
//! five numbers `(r, kI, kS, kT, kD)` are invariants of `R`, and the vanishing
//! of `kT`, `kD`, `kI`, `kS` is exactly totality, determinism, injectivity and
//! surjectivity. The convention here is `(x, y) ∈ R ⇔ (P x, Q y) ∈ W`.

use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::relation::{LinearRelation, PropertyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WireShape {
    /// Through-wires.
    pub r: usize,
    /// Kernel dimension.
    pub k_i: usize,
    /// Surjectivity defect.
    pub k_s: usize,
    /// Totality defect.
    pub k_t: usize,
    /// Indeterminacy dimension.
    pub k_d: usize,
}

impl WireShape {
    pub fn new(r: usize, k_i: usize, k_s: usize, k_t: usize, k_d: usize) -> Self {
        WireShape {
            r,
            k_i,
            k_s,
            k_t,
            k_d,
        }
    }

    /// Left arity `r + kI + kT`.
    pub fn m(&self) -> usize {
        self.r + self.k_i + self.k_t
    }

    /// Right arity `r + kS + kD`.
    pub fn n(&self) -> usize {
        self.r + self.k_s + self.k_d
    }

    /// `dim W = r + kI + kD`.
    pub fn dim(&self) -> usize {
        self.r + self.k_i + self.k_d
    }

    pub fn properties(&self) -> PropertyReport {
        PropertyReport::new(self.k_t == 0, self.k_d == 0, self.k_i == 0, self.k_s == 0)
    }

    /// `r` followed by the nonzero defects, e.g. `r=1 kI=1 kD=1`.
    pub fn compact(&self) -> String {
        let mut out = format!("r={}", self.r);
        for (name, v) in [
            ("kI", self.k_i),
            ("kS", self.k_s),
            ("kT", self.k_t),
            ("kD", self.k_d),
        ] {
            if v != 0 {
                out.push_str(&format!(" {name}={v}"));
            }
        }
        out
    }
}

impl fmt::Display for WireShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} kI={} kS={} kT={} kD={}",
            self.r, self.k_i, self.k_s, self.k_t, self.k_d
        )
    }
}

/// `W(shape)` in the coordinate order `(u, v, t | u, s, w)`.
pub fn canonical_wire_relation(field: FieldSpec, shape: WireShape) -> LinearRelation {
    let (m, n) = (shape.m(), shape.n());
    let mut rows = Matrix::zeros(field, shape.dim(), m + n);
    for i in 0..shape.r {
        rows.set(i, i, field.one());
        rows.set(i, m + i, field.one());
    }
    for j in 0..shape.k_i {
        rows.set(shape.r + j, shape.r + j, field.one());
    }
    for l in 0..shape.k_d {
        rows.set(
            shape.r + shape.k_i + l,
            m + shape.r + shape.k_s + l,
            field.one(),
        );
    }
    LinearRelation::from_subspace_basis(field, m, n, &rows).expect("width is m + n")
}

#[derive(Clone, Debug)]
pub struct CospanDecomposition {
    pub p: Matrix,
    pub p_inv: Matrix,
    pub q: Matrix,
    pub q_inv: Matrix,
    pub shape: WireShape,
}

impl CospanDecomposition {
    /// `{(x, y) : (P x, Q y) ∈ W}`.
    pub fn rebuild(&self) -> LinearRelation {
        let field = self.p.field();
        let w = canonical_wire_relation(field, self.shape);
        let back = LinearRelation::graph_of_map(&self.q).opposite();
        LinearRelation::graph_of_map(&self.p)
            .compose(&w)
            .and_then(|x| x.compose(&back))
            .expect("arities agree by construction")
    }

    /// Invertibility of the base changes, shape bookkeeping and reconstruction.
    pub fn verify(&self, r: &LinearRelation) -> bool {
        let s = self.shape;
        self.p.mul(&self.p_inv).is_ok_and(|m| m.is_identity())
            && self.q.mul(&self.q_inv).is_ok_and(|m| m.is_identity())
            && (s.m(), s.n()) == r.arity()
            && s.dim() == r.dim()
            && self.rebuild() == *r
    }
}

/// New columns extending `current` to a basis of the span of `current` and `ambient`.
fn extend_basis(current: &Matrix, ambient: &Matrix, rng: &mut Option<&mut dyn RngCore>) -> Matrix {
    let field = current.field();
    let mut acc = current.clone();
    let mut added = Matrix::zeros(field, current.rows(), 0);
    let target = acc.hstack(ambient).expect("same height").rank();
    let mut rank = acc.rank();
    if let Some(rng) = rng.as_deref_mut() {
        let mut attempts = 0;
        while rank < target && attempts < 8 * target + 8 {
            attempts += 1;
            let coeffs = Matrix::random(field, ambient.cols(), 1, rng);
            let candidate = ambient.mul(&coeffs).expect("shapes agree");
            let grown = acc.hstack(&candidate).expect("same height");
            if grown.rank() > rank {
                acc = grown;
                added = added.hstack(&candidate).expect("same height");
                rank += 1;
            }
        }
    }
    for j in 0..ambient.cols() {
        if rank == target {
            break;
        }
        let candidate = ambient.column(j);
        let grown = acc.hstack(&candidate).expect("same height");
        if grown.rank() > rank {
            acc = grown;
            added = added.hstack(&candidate).expect("same height");
            rank += 1;
        }
    }
    added
}

/// `block * G + others * M` for random invertible `G` and random `M`: another
/// basis of the same block modulo `others`.
fn remix(block: Matrix, others: &Matrix, rng: &mut Option<&mut dyn RngCore>) -> Matrix {
    let Some(rng) = rng.as_deref_mut() else {
        return block;
    };
    let field = block.field();
    let g = Matrix::random_invertible(field, block.cols(), rng);
    let shift = Matrix::random(field, others.cols(), block.cols(), rng);
    block
        .mul(&g)
        .and_then(|b| b.add(&others.mul(&shift)?))
        .expect("shapes agree")
}

fn inconsistent(what: &str, r: &LinearRelation) -> ! {
    panic!("cospan decomposition invariant failed ({what}) for\n{r}")
}

fn decompose_impl(r: &LinearRelation, mut rng: Option<&mut dyn RngCore>) -> CospanDecomposition {
    let field = r.field();
    let (m, n) = r.arity();

    // left side: kernel ⊆ domain ⊆ K^m
    let kernel = r.kernel().basis_columns();
    let domain = r.domain().basis_columns();
    let v_block = remix(kernel, &Matrix::zeros(field, m, 0), &mut rng);
    let u_block = extend_basis(&v_block, &domain, &mut rng);
    let u_block = remix(u_block, &v_block, &mut rng);
    let uv = u_block.hstack(&v_block).expect("same height");
    let t_block = extend_basis(&uv, &Matrix::identity(field, m), &mut rng);
    let t_block = remix(t_block, &uv, &mut rng);
    let p_inv = uv.hstack(&t_block).expect("same height");
    let p = p_inv
        .inverse()
        .unwrap_or_else(|| inconsistent("P invertible", r));

    // partners y_i with (u_i, y_i) ∈ R
    let xs = r.left_part().transpose();
    let ys = r.right_part().transpose();
    let coeffs = xs
        .solve(&u_block)
        .expect("shapes agree")
        .unwrap_or_else(|| inconsistent("u-block inside domain", r));
    let y_block = ys.mul(&coeffs).expect("shapes agree");

    // right side: indeterminacy ⊆ image ⊆ K^n
    let w_block = remix(
        r.indeterminacy().basis_columns(),
        &Matrix::zeros(field, n, 0),
        &mut rng,
    );
    let y_block = remix_shift(y_block, &w_block, &mut rng);
    let yw = y_block.hstack(&w_block).expect("same height");
    if yw.rank() != yw.cols() {
        inconsistent("partners independent modulo indeterminacy", r);
    }
    let s_block = extend_basis(&yw, &Matrix::identity(field, n), &mut rng);
    let s_block = remix(s_block, &yw, &mut rng);
    let q_inv = y_block
        .hstack(&s_block)
        .and_then(|x| x.hstack(&w_block))
        .expect("same height");
    let q = q_inv
        .inverse()
        .unwrap_or_else(|| inconsistent("Q invertible", r));

    let shape = WireShape::new(
        u_block.cols(),
        v_block.cols(),
        s_block.cols(),
        t_block.cols(),
        w_block.cols(),
    );
    if shape.r + shape.k_d != r.image().dim() || shape.dim() != r.dim() {
        inconsistent("dimension bookkeeping", r);
    }
    CospanDecomposition {
        p,
        p_inv,
        q,
        q_inv,
        shape,
    }
}

/// Partners may move by indeterminacy vectors without leaving `R`.
fn remix_shift(block: Matrix, w: &Matrix, rng: &mut Option<&mut dyn RngCore>) -> Matrix {
    let Some(rng) = rng.as_deref_mut() else {
        return block;
    };
    let shift = Matrix::random(block.field(), w.cols(), block.cols(), rng);
    block
        .add(&w.mul(&shift).expect("shapes agree"))
        .expect("same shape")
}

/// Deterministic decomposition: bases are completed with standard basis vectors.
pub fn cospan_decompose(r: &LinearRelation) -> CospanDecomposition {
    decompose_impl(r, None)
}

/// Same contract as [`cospan_decompose`], with every basis choice randomized.
pub fn cospan_decompose_with(r: &LinearRelation, rng: &mut dyn RngCore) -> CospanDecomposition {
    decompose_impl(r, Some(rng))
}

/// Fundamental properties read off the wire shape.
pub fn classify(r: &LinearRelation) -> PropertyReport {
    cospan_decompose(r).shape.properties()
}

fn check_cospan_shapes(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.rows() != b.rows() || a.field() != b.field() {
        return Err(Error::ShapeMismatch {
            op,
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    Ok(())
}

/// `S` with `B S = A`, i.e. `Gr(S) ⊆ {Ax = By}`; present iff the cospan is total.
pub fn total_witness(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    check_cospan_shapes("total_witness", a, b)?;
    if !b.column_span_contains(a)? {
        return Ok(None);
    }
    b.solve(a)
}

/// `S` with `A S = B`, i.e. `Gr(S)ᵒᵖ ⊆ {Ax = By}`; present iff the cospan is surjective.
pub fn sur_witness(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    check_cospan_shapes("sur_witness", a, b)?;
    total_witness(b, a)
}

/// `S` with `{Ax = By} ⊆ Gr(S)`; present iff the cospan is deterministic (`ker B = 0`).
pub fn det_witness(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    check_cospan_shapes("det_witness", a, b)?;
    if b.kernel_basis().cols() != 0 {
        return Ok(None);
    }
    let r = LinearRelation::from_cospan(a, b)?;
    // S x_i = y_i on every basis row (x_i | y_i)
    let sol = r.left_part().solve(&r.right_part())?;
    Ok(sol.map(|z| z.transpose()))
}

/// `S` with `{Ax = By} ⊆ Gr(S)ᵒᵖ`; present iff the cospan is injective (`ker A = 0`).
pub fn inj_witness(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    check_cospan_shapes("inj_witness", a, b)?;
    det_witness(b, a)
}

/// The equivalent forms of one fundamental property of a cospan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyRows {
    /// Direct predicate on the relation.
    pub predicate: bool,
    /// The matching wire count vanishes.
    pub shape: bool,
    /// The witness map exists.
    pub witness: bool,
    /// Image/kernel form on the cospan legs.
    pub inclusion: bool,
}

impl PropertyRows {
    pub fn agree(&self) -> bool {
        let v = self.predicate;
        self.shape == v && self.witness == v && self.inclusion == v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CospanDict {
    pub total: PropertyRows,
    pub deterministic: PropertyRows,
    pub injective: PropertyRows,
    pub surjective: PropertyRows,
}

impl CospanDict {
    pub fn rows(&self) -> [(&'static str, PropertyRows); 4] {
        [
            ("TOT", self.total),
            ("DET", self.deterministic),
            ("INJ", self.injective),
            ("SUR", self.surjective),
        ]
    }
}

/// Evaluates every implemented characterization of each property of
/// `{Ax = By}`; any disagreement is reported as [`Error::Inconsistent`].
pub fn cospan_dict_rows(a: &Matrix, b: &Matrix) -> Result<CospanDict> {
    check_cospan_shapes("cospan_dict_rows", a, b)?;
    let r = LinearRelation::from_cospan(a, b)?;
    let direct = r.properties();
    let shape = cospan_decompose(&r).shape.properties();
    let dict = CospanDict {
        total: PropertyRows {
            predicate: direct.total,
            shape: shape.total,
            witness: total_witness(a, b)?.is_some(),
            inclusion: b.column_span_contains(a)?,
        },
        deterministic: PropertyRows {
            predicate: direct.deterministic,
            shape: shape.deterministic,
            witness: det_witness(a, b)?.is_some(),
            inclusion: b.kernel_basis().cols() == 0,
        },
        injective: PropertyRows {
            predicate: direct.injective,
            shape: shape.injective,
            witness: inj_witness(a, b)?.is_some(),
            inclusion: a.kernel_basis().cols() == 0,
        },
        surjective: PropertyRows {
            predicate: direct.surjective,
            shape: shape.surjective,
            witness: sur_witness(a, b)?.is_some(),
            inclusion: a.column_span_contains(b)?,
        },
    };
    if let Some((name, rows)) = dict.rows().into_iter().find(|(_, rows)| !rows.agree()) {
        return Err(Error::Inconsistent(format!(
            "{name} characterizations disagree: {rows:?}"
        )));
    }
    Ok(dict)
}
