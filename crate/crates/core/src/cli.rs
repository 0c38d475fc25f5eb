//! Command-line front end.
//!
//! Input is one JSON document:
//!
//! ```json
//! {
//!   "field": "GF(2)",
//!   "matrices": { "A": [["1", "1"]], "E": {"rows": 0, "cols": 2, "entries": []} },
//!   "relations": { "R": {"kind": "cospan", "of": ["A", "A"]} }
//! }
//! ```
//!
//! Relation kinds are `cospan` (`{Ax = By}`), `span` (`{(Cz, Dz)}`), `graph`
//! and `subspace` (rows of one matrix spanning the relation, the first `left`
//! coordinates on the left). A bare matrix name also denotes its graph.
//! Unknown top-level keys are ignored, so `--json` reports parse back.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::decompose::{cospan_decompose, WireShape};
use crate::error::Error;
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::pair::{pair_decompose, subspace_report, zassenhaus};
use crate::relation::{LinearRelation, PropertyReport};
use crate::theorems::{self, Counterexample, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "linrel",
    version,
    about = "Exact linear relations: classification, decompositions, subspaces"
)]
pub struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fundamental properties, directly and from the wire shape.
    Classify { file: PathBuf, relation: String },
    /// Cospan decomposition of a relation, or pair decomposition of a cospan.
    Decompose {
        file: PathBuf,
        relation: String,
        #[arg(long, value_enum, default_value_t = Mode::Cospan)]
        mode: Mode,
    },
    /// Subspaces generated by the column spaces of two matrices.
    Subspaces { file: PathBuf, a: String, b: String },
    /// One-sided and two-sided inverses of a matrix.
    Inverse { file: PathBuf, matrix: String },
    /// Exhaustive and randomized verification suites.
    Selftest {
        /// Exhaustive GF(2) suite only.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteConfig::default().trials)]
        trials: usize,
        /// Where counterexample documents are written.
        #[arg(long)]
        repro_dir: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cospan,
    Pair,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

// ---------------------------------------------------------------------------
// documents

#[derive(Deserialize)]
struct RawDocument {
    field: String,
    #[serde(default)]
    matrices: BTreeMap<String, RawMatrix>,
    #[serde(default)]
    relations: BTreeMap<String, RawRelation>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMatrix {
    Rows(Vec<Vec<Value>>),
    Shaped {
        rows: usize,
        cols: usize,
        entries: Vec<Vec<Value>>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    kind: RelationKind,
    of: Vec<String>,
    #[serde(default)]
    left: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Cospan,
    Span,
    Graph,
    Subspace,
}

#[derive(Clone, Debug)]
pub struct RelationSpec {
    pub kind: RelationKind,
    pub of: Vec<String>,
    pub left: usize,
}

/// A parsed and validated input document.
#[derive(Clone, Debug)]
pub struct Document {
    pub field: FieldSpec,
    pub matrices: BTreeMap<String, Matrix>,
    pub relations: BTreeMap<String, RelationSpec>,
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Some(n.to_string()),
        _ => None,
    }
}

fn parse_matrix(field: FieldSpec, name: &str, raw: &RawMatrix) -> Result<Matrix, Error> {
    let (entries, shape) = match raw {
        RawMatrix::Rows(rows) => (rows, None),
        RawMatrix::Shaped {
            rows,
            cols,
            entries,
        } => (entries, Some((*rows, *cols))),
    };
    let cols = match (shape, entries.first()) {
        (Some((_, c)), _) => c,
        (None, Some(row)) => row.len(),
        (None, None) => 0,
    };
    let mut parsed = Vec::with_capacity(entries.len());
    for (i, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::parse(
                "matrix",
                &format!("matrices.{name}[{i}]"),
                format!("row has {} entries, expected {cols}", row.len()),
            ));
        }
        let mut out = Vec::with_capacity(cols);
        for (j, v) in row.iter().enumerate() {
            let at = format!("matrices.{name}[{i}][{j}]");
            let text = scalar_text(v)
                .ok_or_else(|| Error::parse("scalar", &at, "expected a string or integer"))?;
            let s = field.parse_scalar(&text).map_err(|e| match e {
                Error::Parse { reason, .. } => {
                    Error::parse("scalar", &at, format!("{text:?}: {reason}"))
                }
                other => Error::parse("scalar", &at, other.to_string()),
            })?;
            out.push(s);
        }
        parsed.push(out);
    }
    if let Some((r, _)) = shape {
        if r != parsed.len() && !(parsed.is_empty() && (r == 0 || cols == 0)) {
            return Err(Error::parse(
                "matrix",
                &format!("matrices.{name}"),
                format!("declared {r} rows, found {}", parsed.len()),
            ));
        }
        if parsed.is_empty() {
            return Ok(Matrix::zeros(field, r, cols));
        }
    }
    Matrix::from_rows(field, cols, parsed)
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let raw: RawDocument = serde_json::from_str(text)
            .map_err(|e| Error::parse("document", "input", e.to_string()))?;
        let field: FieldSpec = raw.field.parse()?;
        let mut matrices = BTreeMap::new();
        for (name, m) in &raw.matrices {
            matrices.insert(name.clone(), parse_matrix(field, name, m)?);
        }
        let mut relations = BTreeMap::new();
        for (name, r) in raw.relations {
            let expected = match r.kind {
                RelationKind::Graph | RelationKind::Subspace => 1,
                RelationKind::Cospan | RelationKind::Span => 2,
            };
            if r.of.len() != expected {
                return Err(Error::parse(
                    "relation",
                    &format!("relations.{name}.of"),
                    format!("{:?} takes {expected} matrices", r.kind),
                ));
            }
            for m in &r.of {
                if !matrices.contains_key(m) {
                    return Err(Error::parse(
                        "relation",
                        &format!("relations.{name}.of"),
                        format!("unknown matrix {m:?}"),
                    ));
                }
            }
            if r.left.is_some() && r.kind != RelationKind::Subspace {
                return Err(Error::parse(
                    "relation",
                    &format!("relations.{name}.left"),
                    "only subspaces take `left`",
                ));
            }
            let spec = RelationSpec {
                kind: r.kind,
                of: r.of,
                left: r.left.unwrap_or(0),
            };
            relations.insert(name, spec);
        }
        let doc = Document {
            field,
            matrices,
            relations,
        };
        for name in doc.relations.keys() {
            doc.relation(name)?;
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse("document", &path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn matrix(&self, name: &str) -> Result<&Matrix, Error> {
        self.matrices
            .get(name)
            .ok_or_else(|| Error::parse("matrix", name, "no such matrix"))
    }

    /// Named relation, or the graph of a named matrix.
    pub fn relation(&self, name: &str) -> Result<LinearRelation, Error> {
        let Some(spec) = self.relations.get(name) else {
            return match self.matrices.get(name) {
                Some(m) => Ok(LinearRelation::graph_of_map(m)),
                None => Err(Error::parse("relation", name, "no such relation or matrix")),
            };
        };
        let m = |i: usize| &self.matrices[&spec.of[i]];
        match spec.kind {
            RelationKind::Cospan => LinearRelation::from_cospan(m(0), m(1)),
            RelationKind::Span => LinearRelation::from_span(m(0), m(1)),
            RelationKind::Graph => Ok(LinearRelation::graph_of_map(m(0))),
            RelationKind::Subspace => {
                let rows = m(0);
                if spec.left > rows.cols() {
                    return Err(Error::parse(
                        "relation",
                        name,
                        format!("left = {} exceeds width {}", spec.left, rows.cols()),
                    ));
                }
                LinearRelation::from_subspace_basis(
                    self.field,
                    spec.left,
                    rows.cols() - spec.left,
                    rows,
                )
            }
        }
    }
}

pub fn matrix_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = m
        .to_string_rows()
        .into_iter()
        .map(|r| Value::Array(r.into_iter().map(Value::String).collect()))
        .collect();
    if m.rows() == 0 || m.cols() == 0 {
        json!({"rows": m.rows(), "cols": m.cols(), "entries": rows})
    } else {
        Value::Array(rows)
    }
}

/// Builder for output documents that parse back as input.
struct DocWriter {
    field: FieldSpec,
    matrices: Map<String, Value>,
    relations: Map<String, Value>,
}

impl DocWriter {
    fn new(field: FieldSpec) -> Self {
        DocWriter {
            field,
            matrices: Map::new(),
            relations: Map::new(),
        }
    }

    fn matrix(&mut self, name: &str, m: &Matrix) -> &mut Self {
        self.matrices.insert(name.to_owned(), matrix_json(m));
        self
    }

    fn relation(&mut self, name: &str, r: &LinearRelation) -> &mut Self {
        let basis = format!("{name}_basis");
        self.matrix(&basis, r.basis());
        self.relations.insert(
            name.to_owned(),
            json!({"kind": "subspace", "of": [basis], "left": r.left_arity()}),
        );
        self
    }

    fn finish(&self, key: &str, report: Value) -> Value {
        let mut doc = Map::new();
        doc.insert("field".into(), Value::String(self.field.to_string()));
        doc.insert("matrices".into(), Value::Object(self.matrices.clone()));
        if !self.relations.is_empty() {
            doc.insert("relations".into(), Value::Object(self.relations.clone()));
        }
        doc.insert(key.into(), report);
        Value::Object(doc)
    }
}

fn shape_json(s: &WireShape) -> Value {
    json!({"r": s.r, "k_i": s.k_i, "k_s": s.k_s, "k_t": s.k_t, "k_d": s.k_d})
}

fn props_json(p: &PropertyReport) -> Value {
    json!({"total": p.total, "deterministic": p.deterministic, "injective": p.injective, "surjective": p.surjective})
}

fn status(ok: bool) -> &'static str {
    if ok {
        "VERIFIED"
    } else {
        "FAILED"
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    )
}

fn block(out: &mut dyn Write, name: &str, m: &Matrix) -> std::io::Result<()> {
    writeln!(out, "{name} =\n{m}")
}

fn io(e: std::io::Error) -> Failure {
    Failure::Input(format!("write failed: {e}"))
}

// ---------------------------------------------------------------------------
// commands

fn cmd_classify(doc: &Document, name: &str, json_out: bool, out: &mut dyn Write) -> Outcome {
    let r = doc.relation(name)?;
    let direct = r.properties();
    let shape = cospan_decompose(&r).shape;
    let by_shape = shape.properties();
    let agree = direct == by_shape;
    let summary = format!("{direct}; shape {}", shape.compact());
    if json_out {
        let v = json!({
            "field": doc.field.to_string(),
            "relation": name,
            "arity": [r.left_arity(), r.right_arity()],
            "dim": r.dim(),
            "direct": props_json(&direct),
            "by_shape": props_json(&by_shape),
            "shape": shape_json(&shape),
            "agree": agree,
            "summary": summary,
        });
        emit(out, &v).map_err(io)?;
    } else {
        let (m, n) = r.arity();
        (|| {
            writeln!(
                out,
                "{name}: K^{m} -> K^{n} over {}, dim {}",
                doc.field,
                r.dim()
            )?;
            writeln!(out, "direct    {direct}")?;
            writeln!(out, "by shape  {by_shape}")?;
            writeln!(out, "{summary}")
        })()
        .map_err(io)?;
    }
    if agree {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Verification(format!(
            "{name}: direct {direct} vs shape {by_shape}"
        )))
    }
}

fn cmd_decompose(
    doc: &Document,
    name: &str,
    mode: Mode,
    json_out: bool,
    out: &mut dyn Write,
) -> Outcome {
    let r = doc.relation(name)?;
    match mode {
        Mode::Cospan => {
            let d = cospan_decompose(&r);
            let ok = d.verify(&r);
            if json_out {
                let mut w = DocWriter::new(doc.field);
                w.relation(name, &r)
                    .matrix("P", &d.p)
                    .matrix("P_inv", &d.p_inv)
                    .matrix("Q", &d.q)
                    .matrix("Q_inv", &d.q_inv);
                let report = json!({
                    "mode": "cospan",
                    "relation": name,
                    "shape": shape_json(&d.shape),
                    "status": status(ok),
                });
                emit(out, &w.finish("decomposition", report)).map_err(io)?;
            } else {
                (|| {
                    writeln!(out, "{name}: shape {}", d.shape)?;
                    block(out, "P", &d.p)?;
                    block(out, "P^-1", &d.p_inv)?;
                    block(out, "Q", &d.q)?;
                    block(out, "Q^-1", &d.q_inv)?;
                    writeln!(out, "{}", status(ok))
                })()
                .map_err(io)?;
            }
            verified(ok, name)
        }
        Mode::Pair => {
            let spec = doc
                .relations
                .get(name)
                .filter(|s| s.kind == RelationKind::Cospan)
                .ok_or_else(|| {
                    Failure::Input(format!("{name}: pair mode needs a relation of kind cospan"))
                })?;
            let (a, b) = (doc.matrix(&spec.of[0])?, doc.matrix(&spec.of[1])?);
            let pd = pair_decompose(a, b)?;
            let ok = pd.verify(a, b);
            if json_out {
                let mut w = DocWriter::new(doc.field);
                w.matrix("A", a)
                    .matrix("B", b)
                    .matrix("P", &pd.p)
                    .matrix("Q", &pd.q)
                    .matrix("D1", &pd.d1)
                    .matrix("D2", &pd.d2)
                    .matrix("H", &pd.h);
                w.relations
                    .insert(name.to_owned(), json!({"kind": "cospan", "of": ["A", "B"]}));
                let report = json!({
                    "mode": "pair",
                    "relation": name,
                    "shape": shape_json(&pd.shape),
                    "h_injective": pd.h_injective(),
                    "h_surjective": pd.h_surjective(),
                    "status": status(ok),
                });
                emit(out, &w.finish("decomposition", report)).map_err(io)?;
            } else {
                (|| {
                    writeln!(
                        out,
                        "{name}: shape {}, H is {}x{}",
                        pd.shape,
                        pd.h.rows(),
                        pd.h.cols()
                    )?;
                    block(out, "P", &pd.p)?;
                    block(out, "Q", &pd.q)?;
                    block(out, "D1", &pd.d1)?;
                    block(out, "D2", &pd.d2)?;
                    block(out, "H", &pd.h)?;
                    writeln!(
                        out,
                        "H injective: {}, surjective: {}",
                        pd.h_injective(),
                        pd.h_surjective()
                    )?;
                    writeln!(out, "{}", status(ok))
                })()
                .map_err(io)?;
            }
            verified(ok, name)
        }
    }
}

fn verified(ok: bool, name: &str) -> Outcome {
    if ok {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Verification(format!(
            "{name}: decomposition failed to verify"
        )))
    }
}

fn cmd_subspaces(
    doc: &Document,
    a_name: &str,
    b_name: &str,
    json_out: bool,
    out: &mut dyn Write,
) -> Outcome {
    let (a, b) = (doc.matrix(a_name)?, doc.matrix(b_name)?);
    let rep = subspace_report(a, b)?;
    let (zs, zi) = zassenhaus(a, b)?;
    let span = LinearRelation::column_span;
    let agree = span(&zs) == span(&rep.sum) && span(&zi) == span(&rep.intersection);
    let verdict = if agree { "AGREE" } else { "DISAGREE" };
    if json_out {
        let mut w = DocWriter::new(doc.field);
        w.matrix(a_name, a).matrix(b_name, b);
        for (name, m) in rep.entries() {
            w.matrix(name, m);
        }
        let dims: Map<String, Value> = rep
            .entries()
            .iter()
            .map(|(n, m)| (n.to_string(), json!(m.cols())))
            .collect();
        let report = json!({"a": a_name, "b": b_name, "dims": dims, "zassenhaus": verdict});
        emit(out, &w.finish("subspaces", report)).map_err(io)?;
    } else {
        (|| {
            writeln!(out, "{a_name}, {b_name} in K^{}", a.rows())?;
            for (name, m) in rep.entries() {
                writeln!(out, "{name} (dim {}) =\n{m}", m.cols())?;
            }
            writeln!(out, "zassenhaus {verdict}")
        })()
        .map_err(io)?;
    }
    if agree {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Verification(
            "subspace report disagrees with Zassenhaus".into(),
        ))
    }
}

fn cmd_inverse(doc: &Document, name: &str, json_out: bool, out: &mut dyn Write) -> Outcome {
    let a = doc.matrix(name)?;
    let ok = theorems::check_imt(a).is_ok();
    let (k, m) = a.shape();
    let rank = a.rank();
    let found = [
        ("left_inverse", a.left_inverse()),
        ("right_inverse", a.right_inverse()),
        ("inverse", a.inverse()),
    ];
    if json_out {
        let mut w = DocWriter::new(doc.field);
        w.matrix(name, a);
        for (n, inv) in &found {
            if let Some(inv) = inv {
                w.matrix(n, inv);
            }
        }
        let report = json!({
            "matrix": name,
            "rank": rank,
            "injective": rank == m,
            "surjective": rank == k,
            "status": status(ok),
        });
        emit(out, &w.finish("inverse", report)).map_err(io)?;
    } else {
        (|| {
            writeln!(out, "{name}: {k}x{m} over {}, rank {rank}", doc.field)?;
            writeln!(out, "injective {}, surjective {}", rank == m, rank == k)?;
            for (n, inv) in &found {
                match inv {
                    Some(inv) => block(out, n, inv)?,
                    None => writeln!(out, "{n}: none")?,
                }
            }
            writeln!(out, "{}", status(ok))
        })()
        .map_err(io)?;
    }
    if ok {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Verification(format!(
            "{name}: inverse statements disagree"
        )))
    }
}

/// Reproduction document for a counterexample.
pub fn counterexample_json(ce: &Counterexample) -> Value {
    let mut w = DocWriter::new(ce.field);
    for (name, m) in &ce.matrices {
        w.matrix(name, m);
    }
    for (name, r) in &ce.relations {
        w.relation(name, r);
    }
    let (seed, trial) = ce.origin.unzip();
    w.finish(
        "counterexample",
        json!({"theorem": ce.theorem, "detail": ce.detail, "seed": seed, "trial": trial}),
    )
}

fn cmd_selftest(
    cfg: SuiteConfig,
    repro_dir: Option<PathBuf>,
    json_out: bool,
    out: &mut dyn Write,
) -> Outcome {
    let rep = theorems::run_suite(&cfg);
    let mut written = vec![];
    if !rep.passed() {
        let dir = repro_dir.unwrap_or_else(|| std::env::temp_dir().join("linrel-repro"));
        std::fs::create_dir_all(&dir)
            .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (i, ce) in rep.counterexamples.iter().enumerate() {
            let path = dir.join(format!("{}-{i}.json", ce.theorem));
            let text =
                serde_json::to_string_pretty(&counterexample_json(ce)).expect("values serialize");
            std::fs::write(&path, text + "\n")
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            written.push(path);
        }
    }
    if json_out {
        let counts: Vec<Value> = rep
            .counts
            .iter()
            .map(|c| json!({"theorem": c.name, "exhaustive": c.exhaustive, "random": c.random, "failures": c.failures}))
            .collect();
        let v = json!({
            "passed": rep.passed(),
            "seed": cfg.seed,
            "trials": cfg.trials,
            "quick": cfg.quick,
            "counts": counts,
            "elapsed_ms": rep.elapsed.as_millis() as u64,
            "repro": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        });
        emit(out, &v).map_err(io)?;
    } else {
        (|| {
            writeln!(out, "{rep}")?;
            if let Some(ce) = rep.counterexamples.first() {
                writeln!(out, "first counterexample:\n{ce}")?;
            }
            for p in &written {
                writeln!(out, "wrote {}", p.display())?;
            }
            Ok(())
        })()
        .map_err(io)?;
    }
    if rep.passed() {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Verification(format!(
            "{} counterexamples",
            rep.counterexamples.len()
        )))
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let json_out = cli.json;
    let outcome = match cli.command {
        Command::Classify { file, relation } => Document::read(&file)
            .map_err(Failure::from)
            .and_then(|d| cmd_classify(&d, &relation, json_out, out)),
        Command::Decompose {
            file,
            relation,
            mode,
        } => Document::read(&file)
            .map_err(Failure::from)
            .and_then(|d| cmd_decompose(&d, &relation, mode, json_out, out)),
        Command::Subspaces { file, a, b } => Document::read(&file)
            .map_err(Failure::from)
            .and_then(|d| cmd_subspaces(&d, &a, &b, json_out, out)),
        Command::Inverse { file, matrix } => Document::read(&file)
            .map_err(Failure::from)
            .and_then(|d| cmd_inverse(&d, &matrix, json_out, out)),
        Command::Selftest {
            quick,
            seed,
            trials,
            repro_dir,
            inject_fault,
        } => {
            let cfg = SuiteConfig {
                seed,
                trials,
                quick,
                inject_fault,
            };
            cmd_selftest(cfg, repro_dir, json_out, out)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_FAILED
        }
    }
}
