//! Executable checks of the structure theory, plus the instance generators
//! and exhaustive enumerators that drive them.
//!
//! Every checker returns `Err(Counterexample)` on a violated statement. The
//! statements are theorems, so a counterexample always means a bug here.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompose::{
    classify, cospan_decompose, cospan_decompose_with, cospan_dict_rows, det_witness, inj_witness,
    sur_witness, total_witness, CospanDecomposition,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::pair::{pair_decompose, subspace_report, zassenhaus};
use crate::relation::LinearRelation;

/// A falsified statement together with the data that falsified it.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub theorem: &'static str,
    pub detail: String,
    pub field: FieldSpec,
    pub matrices: Vec<(String, Matrix)>,
    pub relations: Vec<(String, LinearRelation)>,
    /// `(seed, stream)` of the random trial, when there was one.
    pub origin: Option<(u64, u64)>,
}

impl Counterexample {
    pub fn new(theorem: &'static str, field: FieldSpec, detail: impl Into<String>) -> Self {
        Counterexample {
            theorem,
            detail: detail.into(),
            field,
            matrices: vec![],
            relations: vec![],
            origin: None,
        }
    }

    pub fn matrix(mut self, name: &str, m: &Matrix) -> Self {
        self.matrices.push((name.to_owned(), m.clone()));
        self
    }

    pub fn relation(mut self, name: &str, r: &LinearRelation) -> Self {
        self.relations.push((name.to_owned(), r.clone()));
        self
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] over {}: {}", self.theorem, self.field, self.detail)?;
        if let Some((seed, stream)) = self.origin {
            write!(f, " (seed {seed}, trial {stream})")?;
        }
        for (name, m) in &self.matrices {
            write!(f, "\n{name} =\n{m}")?;
        }
        for (name, r) in &self.relations {
            write!(f, "\n{name} =\n{r}")?;
        }
        Ok(())
    }
}

pub type Verdict = std::result::Result<(), Box<Counterexample>>;

macro_rules! ensure {
    ($cond:expr, $ce:expr) => {
        if !$cond {
            return Err(Box::new($ce));
        }
    };
}

// ---------------------------------------------------------------------------
// instances

/// Seeded stream of random instances.
#[derive(Clone, Debug)]
pub struct InstanceGen {
    pub field: FieldSpec,
    pub max_dim: usize,
    pub seed: u64,
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(field: FieldSpec, max_dim: usize, seed: u64) -> Self {
        Self::with_stream(field, max_dim, seed, 0)
    }

    /// Independent stream `stream` under the same seed; one per trial.
    pub fn with_stream(field: FieldSpec, max_dim: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        InstanceGen {
            field,
            max_dim,
            seed,
            rng,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn dim(&mut self) -> usize {
        self.rng.gen_range(0..=self.max_dim)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::random(self.field, rows, cols, &mut self.rng)
    }

    /// Rank drawn uniformly from `0..=min(rows, cols)`.
    pub fn matrix_with_random_rank(&mut self, rows: usize, cols: usize) -> Matrix {
        let r = self.rng.gen_range(0..=rows.min(cols));
        Matrix::random_with_rank(self.field, rows, cols, r, &mut self.rng)
    }

    pub fn invertible(&mut self, n: usize) -> Matrix {
        Matrix::random_invertible(self.field, n, &mut self.rng)
    }

    /// Span of a random number of random rows, so every dimension occurs.
    pub fn relation(&mut self, m: usize, n: usize) -> LinearRelation {
        let d = self.rng.gen_range(0..=m + n);
        let rows = self.matrix_with_random_rank(d, m + n);
        LinearRelation::from_subspace_basis(self.field, m, n, &rows).expect("width is m + n")
    }

    pub fn any_relation(&mut self) -> LinearRelation {
        let (m, n) = (self.dim(), self.dim());
        self.relation(m, n)
    }

    /// Pair sharing a codomain of random dimension.
    pub fn pair(&mut self) -> (Matrix, Matrix) {
        let (k, m, n) = (self.dim(), self.dim(), self.dim());
        (
            self.matrix_with_random_rank(k, m),
            self.matrix_with_random_rank(k, n),
        )
    }
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

/// Largest ambient space the enumerators will list.
const MAX_POINTS: u64 = 32;

fn enumeration_bound(field: FieldSpec, dim: usize, limit: u64) -> Result<u64> {
    let p = field.modulus().ok_or(Error::NotFinite(field))?;
    match p.checked_pow(dim as u32) {
        Some(size) if size <= limit => Ok(p),
        _ => Err(Error::EnumerationTooLarge { field, dim }),
    }
}

/// Every subspace of `K^(m+n)` as a relation, each exactly once, by listing
/// every reduced row echelon matrix. Requires `|K|^(m+n) <= 32`.
pub fn enumerate_relations(field: FieldSpec, m: usize, n: usize) -> Result<Vec<LinearRelation>> {
    let p = enumeration_bound(field, m + n, MAX_POINTS)?;
    let width = m + n;
    let mut out = vec![];
    for pivots in subsets(width) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| {
                ((c + 1)..width)
                    .filter(|j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        for values in tuples(p, free.len()) {
            let mut rows = Matrix::zeros(field, pivots.len(), width);
            for (i, &c) in pivots.iter().enumerate() {
                rows.set(i, c, field.one());
            }
            for (&(i, j), &v) in free.iter().zip(&values) {
                rows.set(i, j, field.from_i64(v as i64));
            }
            out.push(LinearRelation::from_subspace_basis(field, m, n, &rows)?);
        }
    }
    Ok(out)
}

/// Every `rows × cols` matrix over a finite field, up to 4096 of them.
pub fn enumerate_matrices(field: FieldSpec, rows: usize, cols: usize) -> Result<Vec<Matrix>> {
    let p = enumeration_bound(field, rows * cols, 4096)?;
    Ok(tuples(p, rows * cols)
        .map(|v| {
            let v: Vec<i64> = v.into_iter().map(|x| x as i64).collect();
            Matrix::from_i64(field, rows, cols, &v)
        })
        .collect())
}

/// Increasing index sets of `0..n`.
fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

fn tuples(p: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(len as u32);
    (0..total).map(move |mut code| {
        (0..len)
            .map(|_| {
                let d = code % p;
                code /= p;
                d
            })
            .collect()
    })
}

/// Relations as explicit sets of pairs, with every operation computed from its
/// set-theoretic definition. Independent of the row-reduction code.
pub mod oracle {
    use std::collections::BTreeSet;

    use super::tuples;
    use crate::relation::{LinearRelation, PropertyReport};

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct SetRelation {
        pub p: u64,
        pub m: usize,
        pub n: usize,
        /// Points `x ‖ y` as residues.
        pub points: BTreeSet<Vec<u64>>,
    }

    fn add(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    fn scale(p: u64, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| x * c % p).collect()
    }

    impl SetRelation {
        /// All linear combinations of the stored basis rows.
        pub fn of(r: &LinearRelation) -> Self {
            let p = r.field().modulus().expect("finite field");
            let (m, n) = r.arity();
            let rows: Vec<Vec<u64>> = r
                .basis()
                .row_vecs()
                .map(|row| row.iter().map(|s| s.residue().unwrap()).collect())
                .collect();
            let points = tuples(p, rows.len())
                .map(|coeffs| {
                    coeffs
                        .iter()
                        .zip(&rows)
                        .fold(vec![0; m + n], |acc, (&c, row)| {
                            add(p, &acc, &scale(p, c, row))
                        })
                })
                .collect();
            SetRelation { p, m, n, points }
        }

        fn split<'a>(&self, pt: &'a [u64]) -> (&'a [u64], &'a [u64]) {
            pt.split_at(self.m)
        }

        pub fn opposite(&self) -> Self {
            let points = self
                .points
                .iter()
                .map(|pt| {
                    let (x, y) = self.split(pt);
                    [y, x].concat()
                })
                .collect();
            SetRelation {
                p: self.p,
                m: self.n,
                n: self.m,
                points,
            }
        }

        /// `{(x, z) : ∃y. (x, y) ∈ self ∧ (y, z) ∈ s}`.
        pub fn compose(&self, s: &SetRelation) -> Self {
            let mut points = BTreeSet::new();
            for a in &self.points {
                let (x, y) = self.split(a);
                for b in &s.points {
                    let (y2, z) = s.split(b);
                    if y == y2 {
                        points.insert([x, z].concat());
                    }
                }
            }
            SetRelation {
                p: self.p,
                m: self.m,
                n: s.n,
                points,
            }
        }

        pub fn meet(&self, s: &SetRelation) -> Self {
            SetRelation {
                points: self.points.intersection(&s.points).cloned().collect(),
                ..self.clone()
            }
        }

        /// Smallest set containing both that is closed under sums and scalings.
        pub fn join(&self, s: &SetRelation) -> Self {
            let mut points: BTreeSet<Vec<u64>> = self.points.union(&s.points).cloned().collect();
            loop {
                let mut fresh = BTreeSet::new();
                for a in &points {
                    for c in 1..self.p {
                        let sa = scale(self.p, c, a);
                        for b in &points {
                            let v = add(self.p, &sa, b);
                            if !points.contains(&v) {
                                fresh.insert(v);
                            }
                        }
                    }
                }
                if fresh.is_empty() {
                    break;
                }
                points.extend(fresh);
            }
            SetRelation {
                points,
                ..self.clone()
            }
        }

        /// The four properties straight from their quantified definitions.
        pub fn properties(&self) -> PropertyReport {
            let lefts: BTreeSet<&[u64]> = self.points.iter().map(|pt| self.split(pt).0).collect();
            let rights: BTreeSet<&[u64]> = self.points.iter().map(|pt| self.split(pt).1).collect();
            let total = tuples(self.p, self.m).all(|x| lefts.contains(x.as_slice()));
            let surjective = tuples(self.p, self.n).all(|y| rights.contains(y.as_slice()));
            let functional = |swap: bool| {
                let mut seen = std::collections::BTreeMap::new();
                self.points.iter().all(|pt| {
                    let (x, y) = self.split(pt);
                    let (key, val) = if swap { (y, x) } else { (x, y) };
                    *seen.entry(key).or_insert(val) == val
                })
            };
            PropertyReport::new(total, functional(false), functional(true), surjective)
        }
    }
}

// ---------------------------------------------------------------------------
// checkers

/// Opposite and properties of `r`; meet and join when `s` has the same
/// arity; composition when `s` is composable after `r`.
pub fn check_oracle(r: &LinearRelation, s: &LinearRelation) -> Verdict {
    use oracle::SetRelation;
    let field = r.field();
    let ce = |what: &str| {
        Counterexample::new(
            "oracle",
            field,
            format!("{what} disagrees with set semantics"),
        )
        .relation("R", r)
        .relation("S", s)
    };
    let (sr, ss) = (SetRelation::of(r), SetRelation::of(s));
    ensure!(
        sr.points.len() as u64 == sr.p.pow(r.dim() as u32),
        ce("dimension")
    );
    ensure!(
        SetRelation::of(&r.opposite()) == sr.opposite(),
        ce("opposite")
    );
    ensure!(r.properties() == sr.properties(), ce("properties"));
    if r.arity() == s.arity() {
        let meet = r.meet(s).map_err(|_| ce("meet"))?;
        let join = r.join(s).map_err(|_| ce("join"))?;
        ensure!(SetRelation::of(&meet) == sr.meet(&ss), ce("meet"));
        ensure!(SetRelation::of(&join) == sr.join(&ss), ce("join"));
        ensure!(
            r.includes(s).unwrap() == ss.points.is_subset(&sr.points),
            ce("inclusion")
        );
    }
    if r.right_arity() == s.left_arity() {
        let c = r.compose(s).map_err(|_| ce("compose"))?;
        ensure!(SetRelation::of(&c) == sr.compose(&ss), ce("compose"));
    }
    Ok(())
}

/// Reconstruction, invertibility, shape bookkeeping and shape classification.
pub fn check_decomposition(r: &LinearRelation, rng: Option<&mut dyn rand::RngCore>) -> Verdict {
    let d = match rng {
        Some(rng) => cospan_decompose_with(r, rng),
        None => cospan_decompose(r),
    };
    check_decomposition_result(r, &d)
}

fn check_decomposition_result(r: &LinearRelation, d: &CospanDecomposition) -> Verdict {
    let field = r.field();
    let ce = |what: &str| {
        Counterexample::new("decomposition", field, what.to_owned())
            .relation("R", r)
            .matrix("P", &d.p)
            .matrix("Q", &d.q)
    };
    let s = d.shape;
    let (m, n) = r.arity();
    ensure!(
        d.p.mul(&d.p_inv).is_ok_and(|x| x.is_identity()),
        ce("P is not invertible")
    );
    ensure!(
        d.q.mul(&d.q_inv).is_ok_and(|x| x.is_identity()),
        ce("Q is not invertible")
    );
    ensure!(s.m() == m && s.n() == n, ce("shape arities"));
    ensure!(s.dim() == r.dim(), ce("dim R != r + kI + kD"));
    ensure!(d.rebuild() == *r, ce("reconstruction"));
    ensure!(s.k_t == m - r.domain().dim(), ce("kT"));
    ensure!(s.k_i == r.kernel().dim(), ce("kI"));
    ensure!(s.k_s == n - r.image().dim(), ce("kS"));
    ensure!(s.k_d == r.indeterminacy().dim(), ce("kD"));
    ensure!(classify(r) == r.properties(), ce("classification by shape"));
    ensure!(
        s.properties() == r.properties(),
        ce("classification by shape")
    );
    Ok(())
}

/// The six implications between the properties and the arities.
pub fn check_poset(r: &LinearRelation) -> Verdict {
    let p = r.properties();
    let (m, n) = r.arity();
    let (tot, det, inj, sur) = (p.total, p.deterministic, p.injective, p.surjective);
    let cases = [
        ("TOT INJ SUR m>=n => DET", tot && inj && sur && m >= n, det),
        ("DET INJ SUR m<=n => TOT", det && inj && sur && m <= n, tot),
        ("DET TOT INJ m>=n => SUR", det && tot && inj && m >= n, sur),
        ("DET TOT SUR m<=n => INJ", det && tot && sur && m <= n, inj),
        ("TOT INJ => m<=n", tot && inj, m <= n),
        ("DET SUR => m>=n", det && sur, m >= n),
    ];
    for (name, hyp, concl) in cases {
        ensure!(
            !hyp || concl,
            Counterexample::new("poset", r.field(), name).relation("R", r)
        );
    }
    Ok(())
}

/// A total injective cospan `{Ax = By}` has `m <= n`.
pub fn check_pigeonhole(a: &Matrix, b: &Matrix) -> Verdict {
    let r = cospan(a, b)?;
    let p = r.properties();
    ensure!(
        !(p.total && p.injective) || a.cols() <= b.cols(),
        Counterexample::new("pigeonhole", a.field(), "TOT and INJ with m > n")
            .matrix("A", a)
            .matrix("B", b)
    );
    Ok(())
}

fn cospan(a: &Matrix, b: &Matrix) -> std::result::Result<LinearRelation, Box<Counterexample>> {
    LinearRelation::from_cospan(a, b).map_err(|e| {
        Box::new(
            Counterexample::new("input", a.field(), e.to_string())
                .matrix("A", a)
                .matrix("B", b),
        )
    })
}

/// `A` injective with `im A ⊆ im B` iff `{Ax = By}` is total and injective.
pub fn check_exchange_equivalence(a: &Matrix, b: &Matrix) -> Verdict {
    let lhs = a.kernel_basis().cols() == 0 && b.column_span_contains(a).unwrap_or(false);
    let p = cospan(a, b)?.properties();
    let rhs = p.total && p.injective;
    ensure!(
        lhs == rhs,
        Counterexample::new(
            "exchange",
            a.field(),
            format!("matrix side {lhs}, relation side {rhs}")
        )
        .matrix("A", a)
        .matrix("B", b)
    );
    Ok(())
}

/// All characterizations of each property agree, and every returned witness
/// satisfies its defining equation.
pub fn check_cospan_dict(a: &Matrix, b: &Matrix) -> Verdict {
    let field = a.field();
    let ce = |what: String| {
        Counterexample::new("cospan_dict", field, what)
            .matrix("A", a)
            .matrix("B", b)
    };
    cospan_dict_rows(a, b).map_err(|e| ce(e.to_string()))?;
    let r = cospan(a, b)?;
    let err = |e: Error| ce(e.to_string());
    if let Some(s) = total_witness(a, b).map_err(err)? {
        ensure!(b.mul(&s).is_ok_and(|x| x == *a), ce("B S != A".into()));
        let g = LinearRelation::graph_of_map(&s);
        ensure!(
            r.includes(&g).unwrap(),
            ce("graph of total witness not inside".into())
        );
    }
    if let Some(s) = sur_witness(a, b).map_err(err)? {
        ensure!(a.mul(&s).is_ok_and(|x| x == *b), ce("A S != B".into()));
        let g = LinearRelation::graph_of_map(&s).opposite();
        ensure!(
            r.includes(&g).unwrap(),
            ce("opposite graph of sur witness not inside".into())
        );
    }
    if let Some(s) = det_witness(a, b).map_err(err)? {
        let g = LinearRelation::graph_of_map(&s);
        ensure!(
            g.includes(&r).unwrap(),
            ce("relation not inside graph of det witness".into())
        );
    }
    if let Some(s) = inj_witness(a, b).map_err(err)? {
        let g = LinearRelation::graph_of_map(&s).opposite();
        ensure!(
            g.includes(&r).unwrap(),
            ce("relation not inside opposite graph of inj witness".into())
        );
    }
    Ok(())
}

/// One-sided inverses against ranks and relation properties; for square
/// matrices all the invertibility statements coincide.
pub fn check_imt(a: &Matrix) -> Verdict {
    let field = a.field();
    let ce = |what: &str| Counterexample::new("imt", field, what.to_owned()).matrix("A", a);
    let (k, m) = a.shape();
    let props = LinearRelation::graph_of_map(a).properties();
    let injective = a.kernel_basis().cols() == 0;
    let surjective = a.image_basis().cols() == k;
    ensure!(
        injective == props.injective && injective == (a.rank() == m),
        ce("injectivity")
    );
    ensure!(
        surjective == props.surjective && surjective == (a.rank() == k),
        ce("surjectivity")
    );

    let left = a.left_inverse();
    let right = a.right_inverse();
    ensure!(left.is_some() == injective, ce("left inverse existence"));
    ensure!(right.is_some() == surjective, ce("right inverse existence"));
    if let Some(l) = &left {
        ensure!(l.mul(a).is_ok_and(|x| x.is_identity()), ce("L A != I"));
    }
    if let Some(r) = &right {
        ensure!(a.mul(r).is_ok_and(|x| x.is_identity()), ce("A R != I"));
    }
    if k == m {
        let inv = a.inverse();
        ensure!(
            injective == surjective,
            ce("square: injective != surjective")
        );
        ensure!(inv.is_some() == injective, ce("square: inverse existence"));
        ensure!(
            props.as_array().iter().all(|&x| x) == inv.is_some(),
            ce("square: bijective graph")
        );
        if let Some(inv) = inv {
            ensure!(
                inv.mul(a).is_ok_and(|x| x.is_identity()),
                ce("inverse roundtrip")
            );
            ensure!(
                a.mul(&inv).is_ok_and(|x| x.is_identity()),
                ce("inverse roundtrip")
            );
            ensure!(
                left.as_ref() == Some(&inv),
                ce("left inverse differs from inverse")
            );
            ensure!(
                right.as_ref() == Some(&inv),
                ce("right inverse differs from inverse")
            );
        }
    }
    Ok(())
}

/// Inverse laws for whichever sides apply: with `L A = I`, when `r`, `s` end
/// in the domain of `A`; with `A R = I`, when they start in its codomain.
pub fn check_props_inverse_laws(a: &Matrix, r: &LinearRelation, s: &LinearRelation) -> Verdict {
    let field = a.field();
    let ce = |what: &str| {
        Counterexample::new("inverse_laws", field, what.to_owned())
            .matrix("A", a)
            .relation("R", r)
            .relation("S", s)
    };
    let ga = LinearRelation::graph_of_map(a);
    let same = r == s;
    if let (Some(l), true) = (
        a.left_inverse(),
        r.right_arity() == a.cols() && s.arity() == r.arity(),
    ) {
        let gl = LinearRelation::graph_of_map(&l);
        ensure!(
            gl.opposite().includes(&ga).unwrap(),
            ce("graph(A) not inside opposite graph(L)")
        );
        let ra = r.compose(&ga).unwrap();
        let sa = s.compose(&ga).unwrap();
        ensure!(ra.compose(&gl).unwrap() == *r, ce("solve-back with L"));
        ensure!((ra == sa) == same, ce("cancellation on the right"));
    }
    if let (Some(rinv), true) = (
        a.right_inverse(),
        r.left_arity() == a.rows() && s.arity() == r.arity(),
    ) {
        let gr = LinearRelation::graph_of_map(&rinv);
        ensure!(
            ga.includes(&gr.opposite()).unwrap(),
            ce("opposite graph(R) not inside graph(A)")
        );
        let ar = ga.compose(r).unwrap();
        let as_ = ga.compose(s).unwrap();
        ensure!(
            gr.compose(&ar).unwrap() == *r,
            ce("solve-back with right inverse")
        );
        ensure!((ar == as_) == same, ce("cancellation on the left"));
    }
    Ok(())
}

/// Both factorizations, injectivity and uniqueness of `H`, and the rank
/// criterion for its surjectivity.
pub fn check_pair(a: &Matrix, b: &Matrix) -> Verdict {
    let field = a.field();
    let ce = |what: String| {
        Counterexample::new("pair", field, what)
            .matrix("A", a)
            .matrix("B", b)
    };
    let pd = pair_decompose(a, b).map_err(|e| ce(e.to_string()))?;
    let ce = |what: &str| ce(what.to_owned()).matrix("H", &pd.h);
    ensure!(pd.reconstructs(a, b), ce("A != H D1 P or B != H D2 Q"));
    ensure!(pd.h_injective(), ce("H not injective"));
    ensure!(pd.solution_freedom() == 0, ce("H not unique"));
    let full = a.hstack(b).unwrap().rank() == a.rows();
    ensure!(
        pd.h_surjective() == full,
        ce("H surjective != rank[A|B] = k")
    );
    let w = crate::decompose::canonical_wire_relation(field, pd.shape);
    ensure!(
        LinearRelation::from_cospan(&pd.d1, &pd.d2).is_ok_and(|x| x == w),
        ce("selectors do not present W")
    );
    Ok(())
}

/// The seven subspaces read from `H` against joins, meets and Zassenhaus.
pub fn check_subspaces(a: &Matrix, b: &Matrix) -> Verdict {
    let field = a.field();
    let ce = |what: String| {
        Counterexample::new("subspaces", field, what)
            .matrix("A", a)
            .matrix("B", b)
    };
    let rep = subspace_report(a, b).map_err(|e| ce(e.to_string()))?;
    let ce = |what: &str| ce(what.to_owned());
    let span = LinearRelation::column_span;
    for (name, basis) in rep.entries() {
        ensure!(
            basis.rank() == basis.cols(),
            ce(&format!("{name} has dependent columns"))
        );
    }
    let (ia, ib) = (span(&rep.im_a), span(&rep.im_b));
    let (meet, sum) = (span(&rep.intersection), span(&rep.sum));
    ensure!(ia == span(a) && ib == span(b), ce("images"));
    ensure!(ia.meet(&ib).unwrap() == meet, ce("intersection"));
    ensure!(ia.join(&ib).unwrap() == sum, ce("sum"));
    for (name, x, c) in [
        ("complement of A", &ia, &rep.complement_of_a),
        ("complement of B", &ib, &rep.complement_of_b),
        (
            "complement of intersection",
            &meet,
            &rep.complement_of_intersection,
        ),
    ] {
        let c = span(c);
        ensure!(
            x.join(&c).unwrap() == sum,
            ce(&format!("{name}: join is not the sum"))
        );
        ensure!(
            x.meet(&c).unwrap().is_zero(),
            ce(&format!("{name}: meet is not zero"))
        );
    }
    ensure!(
        sum.dim() + meet.dim() == ia.dim() + ib.dim(),
        ce("Grassmann identity")
    );
    let (zs, zi) = zassenhaus(a, b).map_err(|e| ce(&e.to_string()))?;
    ensure!(span(&zs) == sum, ce("Zassenhaus sum"));
    ensure!(span(&zi) == meet, ce("Zassenhaus intersection"));
    Ok(())
}

/// Relations for [`check_algebraic_laws`]: `r ; s ; t` composable, `c ; d`
/// composable, and `sub ⊆ r`.
#[derive(Clone, Debug)]
pub struct LawInstance {
    pub r: LinearRelation,
    pub s: LinearRelation,
    pub t: LinearRelation,
    pub c: LinearRelation,
    pub d: LinearRelation,
    pub sub: LinearRelation,
}

impl LawInstance {
    fn relations(&self) -> [(&'static str, &LinearRelation); 6] {
        [
            ("R", &self.r),
            ("S", &self.s),
            ("T", &self.t),
            ("C", &self.c),
            ("D", &self.d),
            ("R0", &self.sub),
        ]
    }
}

/// Associativity, interchange, contravariance of the opposite and
/// monotonicity of composition.
pub fn check_algebraic_laws(x: &LawInstance) -> Verdict {
    let ce = |what: &str| {
        x.relations().into_iter().fold(
            Counterexample::new("algebra", x.r.field(), what.to_owned()),
            |ce, (n, r)| ce.relation(n, r),
        )
    };
    let fail = |what: &'static str| move |_| ce(what);
    let (r, s, t) = (&x.r, &x.s, &x.t);
    let rs = r.compose(s).map_err(fail("arity"))?;
    let st = s.compose(t).map_err(fail("arity"))?;
    ensure!(
        rs.compose(t).unwrap() == r.compose(&st).unwrap(),
        ce("associativity")
    );

    let cd = x.c.compose(&x.d).map_err(fail("arity"))?;
    let lhs = rs.direct_product(&cd).unwrap();
    let rhs = r
        .direct_product(&x.c)
        .unwrap()
        .compose(&s.direct_product(&x.d).unwrap())
        .unwrap();
    ensure!(lhs == rhs, ce("interchange"));

    ensure!(
        rs.opposite() == s.opposite().compose(&r.opposite()).unwrap(),
        ce("contravariance")
    );
    ensure!(rs.opposite().opposite() == rs, ce("involution"));

    ensure!(r.includes(&x.sub).unwrap(), ce("instance: R0 not inside R"));
    ensure!(
        rs.includes(&x.sub.compose(s).unwrap()).unwrap(),
        ce("monotonicity")
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// suites

/// Checker families reported by the suites, in report order.
pub const THEOREMS: [&str; 11] = [
    "oracle",
    "decomposition",
    "poset",
    "pigeonhole",
    "exchange",
    "cospan_dict",
    "imt",
    "inverse_laws",
    "pair",
    "subspaces",
    "algebra",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Base number of random trials per family; the expensive families use half.
    pub trials: usize,
    /// Exhaustive suite only.
    pub quick: bool,
    /// Corrupt decompositions before checking them, to prove the harness can fail.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0x5eed,
            trials: 1000,
            quick: false,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TheoremCount {
    pub name: &'static str,
    pub exhaustive: usize,
    pub random: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub counts: Vec<TheoremCount>,
    /// At most a few per family.
    pub counterexamples: Vec<Counterexample>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counts.iter().all(|c| c.failures == 0)
    }

    fn entry(&mut self, name: &'static str) -> &mut TheoremCount {
        if let Some(i) = self.counts.iter().position(|c| c.name == name) {
            return &mut self.counts[i];
        }
        self.counts.push(TheoremCount {
            name,
            ..Default::default()
        });
        self.counts.last_mut().unwrap()
    }

    fn record(&mut self, name: &'static str, exhaustive: bool, verdicts: Vec<Verdict>) {
        let total = verdicts.len();
        let failures: Vec<Counterexample> = verdicts
            .into_iter()
            .filter_map(|v| v.err().map(|b| *b))
            .collect();
        let e = self.entry(name);
        if exhaustive {
            e.exhaustive += total;
        } else {
            e.random += total;
        }
        e.failures += failures.len();
        self.counterexamples.extend(failures.into_iter().take(3));
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.counts {
            let status = if c.failures == 0 {
                "ok".to_owned()
            } else {
                format!("FAILED {}", c.failures)
            };
            writeln!(
                f,
                "{:<14} exhaustive {:>7}  random {:>6}  {status}",
                c.name, c.exhaustive, c.random
            )?;
        }
        write!(
            f,
            "{} in {:.2?}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed
        )
    }
}

fn corrupt(mut d: CospanDecomposition) -> CospanDecomposition {
    d.shape.k_i += 1;
    d
}

fn decomposition_verdict(
    r: &LinearRelation,
    rng: Option<&mut dyn rand::RngCore>,
    fault: bool,
) -> Verdict {
    let d = match rng {
        Some(rng) => cospan_decompose_with(r, rng),
        None => cospan_decompose(r),
    };
    check_decomposition_result(r, &if fault { corrupt(d) } else { d })
}

/// GF(2) relations with `m + n <= max_total`.
pub fn exhaustive_relations(max_total: usize) -> Vec<LinearRelation> {
    let f = FieldSpec::prime(2).unwrap();
    (0..=max_total)
        .flat_map(|t| (0..=t).map(move |m| (m, t - m)))
        .flat_map(|(m, n)| enumerate_relations(f, m, n).unwrap())
        .collect()
}

/// GF(2) pairs `(A, B)` with `A: K^m → K^k`, `B: K^n → K^k`, all of `k, m, n <= max`.
pub fn exhaustive_pairs(max: usize) -> Vec<(Matrix, Matrix)> {
    let f = FieldSpec::prime(2).unwrap();
    let mut out = vec![];
    for k in 0..=max {
        for m in 0..=max {
            for n in 0..=max {
                for a in enumerate_matrices(f, k, m).unwrap() {
                    for b in enumerate_matrices(f, k, n).unwrap() {
                        out.push((a.clone(), b));
                    }
                }
            }
        }
    }
    out
}

/// Pairs `(R, S)` from `rels` that share an arity or compose.
pub fn oracle_pairs(rels: &[LinearRelation]) -> Vec<(&LinearRelation, &LinearRelation)> {
    rels.iter()
        .flat_map(|r| rels.iter().map(move |s| (r, s)))
        .filter(|(r, s)| r.arity() == s.arity() || r.right_arity() == s.left_arity())
        .collect()
}

pub fn run_exhaustive(cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let mut rep = SuiteReport::default();
    let f2 = FieldSpec::prime(2).unwrap();
    let rels = exhaustive_relations(4);

    let v = oracle_pairs(&rels)
        .into_par_iter()
        .map(|(r, s)| check_oracle(r, s))
        .collect();
    rep.record("oracle", true, v);
    let v = rels
        .par_iter()
        .map(|r| decomposition_verdict(r, None, cfg.inject_fault))
        .collect();
    rep.record("decomposition", true, v);
    rep.record("poset", true, rels.par_iter().map(check_poset).collect());

    let pairs = exhaustive_pairs(2);
    rep.record(
        "pigeonhole",
        true,
        pairs
            .par_iter()
            .map(|(a, b)| check_pigeonhole(a, b))
            .collect(),
    );
    rep.record(
        "exchange",
        true,
        pairs
            .par_iter()
            .map(|(a, b)| check_exchange_equivalence(a, b))
            .collect(),
    );
    rep.record(
        "cospan_dict",
        true,
        pairs
            .par_iter()
            .map(|(a, b)| check_cospan_dict(a, b))
            .collect(),
    );
    rep.record(
        "pair",
        true,
        pairs.par_iter().map(|(a, b)| check_pair(a, b)).collect(),
    );
    rep.record(
        "subspaces",
        true,
        pairs
            .par_iter()
            .map(|(a, b)| check_subspaces(a, b))
            .collect(),
    );

    let squares: Vec<Matrix> = (0..=3)
        .flat_map(|n| enumerate_matrices(f2, n, n).unwrap())
        .collect();
    let rect: Vec<Matrix> = [(1, 2), (2, 1), (2, 3), (3, 2)]
        .into_iter()
        .flat_map(|(r, c)| enumerate_matrices(f2, r, c).unwrap())
        .collect();
    rep.record(
        "imt",
        true,
        squares.par_iter().chain(&rect).map(check_imt).collect(),
    );

    // A: K^c → K^k against relations ending in K^c, and starting in K^k
    let mut laws = vec![];
    for k in 0..=2 {
        for c in 0..=2 {
            let mats = enumerate_matrices(f2, k, c).unwrap();
            let ending = enumerate_relations(f2, 1, c).unwrap();
            let starting = enumerate_relations(f2, k, 1).unwrap();
            for a in &mats {
                for rels in [&ending, &starting] {
                    for r in rels.iter() {
                        for s in rels.iter() {
                            laws.push((a.clone(), r.clone(), s.clone()));
                        }
                    }
                }
            }
        }
    }
    let v = laws
        .par_iter()
        .map(|(a, r, s)| check_props_inverse_laws(a, r, s))
        .collect();
    rep.record("inverse_laws", true, v);

    let unit = enumerate_relations(f2, 1, 1).unwrap();
    let mut inst = vec![];
    for r in &unit {
        for s in &unit {
            for t in &unit {
                for c in &unit {
                    for d in &unit {
                        inst.push(LawInstance {
                            r: r.clone(),
                            s: s.clone(),
                            t: t.clone(),
                            c: c.clone(),
                            d: d.clone(),
                            sub: r.meet(c).unwrap(),
                        });
                    }
                }
            }
        }
    }
    rep.record(
        "algebra",
        true,
        inst.par_iter().map(check_algebraic_laws).collect(),
    );
    rep.elapsed = start.elapsed();
    rep
}

/// Runs `trials` independent trials of `check`, each on its own stream.
fn trials<F>(
    seed: u64,
    family: u64,
    n: usize,
    field: FieldSpec,
    max_dim: usize,
    check: F,
) -> Vec<Verdict>
where
    F: Fn(&mut InstanceGen) -> Verdict + Sync,
{
    let seed = seed.wrapping_add(family.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut g = InstanceGen::with_stream(field, max_dim, seed, i);
            check(&mut g).map_err(|mut ce| {
                ce.origin = Some((seed, i));
                ce
            })
        })
        .collect()
}

pub fn run_random(cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let mut rep = SuiteReport::default();
    let n = cfg.trials;
    let half = n.div_ceil(2);
    let gf = |p| FieldSpec::prime(p).unwrap();
    let fields = [gf(5), FieldSpec::QQ];
    let seed = cfg.seed;

    // set semantics only exists over finite fields; small arities keep it cheap
    let v = trials(seed, 1, n, gf(3), 2, |g| {
        let (m, k) = (g.dim(), g.dim());
        let n = g.rng().gen_range(0..=3 - m.max(k).min(3));
        let r = g.relation(m, n);
        let s = if g.rng().gen_bool(0.5) {
            g.relation(m, n)
        } else {
            g.relation(n, k.min(3 - n))
        };
        check_oracle(&r, &s)
    });
    rep.record("oracle", false, v);

    for (fi, &field) in fields.iter().enumerate() {
        let fam = 10 * (fi as u64 + 1);
        let fault = cfg.inject_fault;
        let v = trials(seed, fam + 1, n, field, 6, |g| {
            let r = g.any_relation();
            let mut rng = g.rng().clone();
            decomposition_verdict(&r, Some(&mut rng), fault)
        });
        rep.record("decomposition", false, v);
        rep.record(
            "poset",
            false,
            trials(seed, fam + 2, n, field, 6, |g| {
                check_poset(&g.any_relation())
            }),
        );
        let pair_check = |check: fn(&Matrix, &Matrix) -> Verdict| {
            move |g: &mut InstanceGen| {
                let (a, b) = g.pair();
                check(&a, &b)
            }
        };
        rep.record(
            "pigeonhole",
            false,
            trials(seed, fam + 3, n, field, 5, pair_check(check_pigeonhole)),
        );
        rep.record(
            "exchange",
            false,
            trials(
                seed,
                fam + 4,
                n,
                field,
                5,
                pair_check(check_exchange_equivalence),
            ),
        );
        rep.record(
            "cospan_dict",
            false,
            trials(seed, fam + 5, n, field, 5, pair_check(check_cospan_dict)),
        );
        rep.record(
            "pair",
            false,
            trials(seed, fam + 6, half, field, 6, pair_check(check_pair)),
        );
        rep.record(
            "subspaces",
            false,
            trials(seed, fam + 7, half, field, 6, pair_check(check_subspaces)),
        );
        let v = trials(seed, fam + 9, n, field, 4, |g| {
            let (k, c, j) = (g.dim(), g.dim(), g.dim());
            let a = g.matrix_with_random_rank(k, c);
            let (r, s) = if g.rng().gen_bool(0.5) {
                (g.relation(j, c), g.relation(j, c))
            } else {
                (g.relation(k, j), g.relation(k, j))
            };
            check_props_inverse_laws(&a, &r, &s)
        });
        rep.record("inverse_laws", false, v);
        rep.record(
            "algebra",
            false,
            trials(seed, fam + 10, n, field, 3, |g| {
                check_algebraic_laws(&law_instance(g))
            }),
        );
    }
    for (fi, field) in [gf(7), FieldSpec::QQ].into_iter().enumerate() {
        let v = trials(seed, 100 + fi as u64, half, field, 6, |g| {
            let (k, m) = (g.dim(), g.dim());
            let a = if g.rng().gen_bool(0.5) {
                g.matrix_with_random_rank(k, k)
            } else {
                g.matrix_with_random_rank(k, m)
            };
            check_imt(&a)
        });
        rep.record("imt", false, v);
    }
    rep.elapsed = start.elapsed();
    rep
}

/// Random composable triple plus an interchange partner and a subrelation.
pub fn law_instance(g: &mut InstanceGen) -> LawInstance {
    let dims: Vec<usize> = (0..6).map(|_| g.dim()).collect();
    let r = g.relation(dims[0], dims[1]);
    let s = g.relation(dims[1], dims[2]);
    let t = g.relation(dims[2], dims[3]);
    let c = g.relation(dims[4], dims[5]);
    let d = g.relation(dims[5], dims[0]);
    let sub = r.meet(&g.relation(dims[0], dims[1])).unwrap();
    LawInstance { r, s, t, c, d, sub }
}

/// Exhaustive suite, then the random one unless `quick`.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let mut rep = run_exhaustive(cfg);
    if !cfg.quick {
        let random = run_random(cfg);
        for c in random.counts {
            let e = rep.entry(c.name);
            e.random += c.random;
            e.failures += c.failures;
        }
        rep.counterexamples.extend(random.counterexamples);
    }
    rep.counts
        .sort_by_key(|c| THEOREMS.iter().position(|n| *n == c.name));
    rep.elapsed = start.elapsed();
    rep
}
