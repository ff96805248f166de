//! Exact decision procedure for orthogonality-preserving measurements.
//!
//! For the cut `X`, a POVM element `E` acting on the other two parties
//! preserves orthogonality iff `⟨φ| I_X ⊗ E |ψ⟩ = 0` for every ordered pair of
//! distinct states. In the entries `a_{uv}` of `E` this is one homogeneous
//! linear equation per pair:
//!
//! ```text
//! Σ_{u,v} ( Σ_x conj(φ(x,u)) ψ(x,v) ) a_{uv} = 0
//! ```
//!
//! The identity always solves the system of an orthogonal set. When the
//! solution space is one-dimensional every orthogonality-preserving `E` is a
//! multiple of the identity, so only trivial measurements exist. When it is
//! larger, the space is closed under `E ↦ E†` (the pair `(ψ,φ)` gives the
//! conjugate equation), so it holds a Hermitian `H` not proportional to the
//! identity, and `I ± εH` for small `ε > 0` is a nontrivial
//! orthogonality-preserving POVM. Positivity therefore never has to be
//! imposed and the question reduces to a rank computation.
//!
//! The `1/sqrt(w)` normalisations are dropped from the exact rows, which
//! keeps every coefficient a Gaussian integer when all weights divide 4.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{format_rational, Arithmetic, ArithmeticMode, GaussRational, Scalar, FLOAT_TOLERANCE};
use crate::graphs::Vertex;
use crate::linalg::{prune, sparse_dot, Echelon, SparseRow};
use crate::state_model::{
    check_mutual_orthogonality_with, Amplitudes, ModelError, Partition, StateSet, StateVector,
};

/// Systems with more unknowns are refused unless explicitly allowed.
pub const UNKNOWN_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("set is not orthogonal ({count} non-orthogonal pairs, first: states {first:?})")]
    NotOrthogonal { count: usize, first: (usize, usize) },
    #[error("{unknowns} unknowns exceed the limit of {limit}; pass the override to run anyway")]
    TooLarge { unknowns: usize, limit: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleOptions {
    pub arithmetic: Arithmetic,
    /// Lift the [`UNKNOWN_LIMIT`] guard.
    pub allow_large: bool,
    /// Build the system even if the set is not orthogonal. Diagnostic only:
    /// the identity is then no longer a solution.
    pub skip_orthogonality_check: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintRows {
    Exact(Vec<SparseRow<GaussRational>>),
    Float(Vec<SparseRow<Complex64>>),
}

/// `⟨φ| I ⊗ E |ψ⟩ = 0` for every ordered pair of distinct states, with
/// unknown `a_{uv}` at column `index(u) * N + index(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    partition: Partition,
    pair_dims: (usize, usize),
    rows: ConstraintRows,
}

impl ConstraintSystem {
    pub fn partition(&self) -> Partition {
        self.partition
    }

    pub fn pair_dims(&self) -> (usize, usize) {
        self.pair_dims
    }

    /// Side of `E`.
    pub fn side(&self) -> usize {
        self.pair_dims.0 * self.pair_dims.1
    }

    pub fn unknown_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn row_count(&self) -> usize {
        match &self.rows {
            ConstraintRows::Exact(r) => r.len(),
            ConstraintRows::Float(r) => r.len(),
        }
    }

    pub fn rows(&self) -> &ConstraintRows {
        &self.rows
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self.rows {
            ConstraintRows::Exact(_) => ArithmeticMode::Exact,
            ConstraintRows::Float(_) => ArithmeticMode::Float,
        }
    }

    fn vertex_index(&self, v: Vertex) -> usize {
        v.0 * self.pair_dims.1 + v.1
    }

    fn vertex(&self, idx: usize) -> Vertex {
        (idx / self.pair_dims.1, idx % self.pair_dims.1)
    }

    pub fn unknown_index(&self, row: Vertex, col: Vertex) -> usize {
        self.vertex_index(row) * self.side() + self.vertex_index(col)
    }

    /// `(u, v)` for the unknown `a_{uv}`.
    pub fn unknown(&self, index: usize) -> (Vertex, Vertex) {
        (self.vertex(index / self.side()), self.vertex(index % self.side()))
    }

    /// Plain-text sparse triplets, one `row unknown re im` line per nonzero
    /// coefficient, preceded by `#` header lines.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        let (a, b) = self.pair_dims;
        writeln!(out, "# ghzcert constraint system")?;
        writeln!(out, "# partition {}", self.partition)?;
        writeln!(out, "# pair-dims {a} {b}")?;
        writeln!(out, "# unknowns {}", self.unknown_count())?;
        writeln!(out, "# rows {}", self.row_count())?;
        writeln!(out, "# arithmetic {}", mode_name(self.mode()))?;
        writeln!(out, "# unknown a_(u,v) has index u*{n}+v; pair (p,q) has index p*{b}+q", n = self.side())?;
        writeln!(out, "# row unknown re im")?;
        match &self.rows {
            ConstraintRows::Exact(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    for (c, v) in row {
                        writeln!(out, "{r} {c} {} {}", format_rational(&v.re), format_rational(&v.im))?;
                    }
                }
            }
            ConstraintRows::Float(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    for (c, v) in row {
                        writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im)?;
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn mode_name(mode: ArithmeticMode) -> &'static str {
    match mode {
        ArithmeticMode::Exact => "exact",
        ArithmeticMode::Float => "float",
    }
}

/// Terms `(cut coordinate, pair index, coefficient)` of one state.
type Terms<S> = Vec<(usize, usize, S)>;

pub fn build_constraints(set: &StateSet, p: Partition) -> Result<ConstraintSystem, OracleError> {
    build_constraints_with(set, p, &OracleOptions::default())
}

pub fn build_constraints_with(
    set: &StateSet,
    p: Partition,
    opts: &OracleOptions,
) -> Result<ConstraintSystem, OracleError> {
    let dims = set.dims();
    let pair_dims = p.pair_dims(&dims);
    let side = pair_dims.0 * pair_dims.1;
    let unknowns = side * side;
    if unknowns > UNKNOWN_LIMIT && !opts.allow_large {
        return Err(OracleError::TooLarge { unknowns, limit: UNKNOWN_LIMIT });
    }
    let mode = set.resolve_mode(opts.arithmetic)?;
    if !opts.skip_orthogonality_check {
        let bad = check_mutual_orthogonality_with(set, opts.arithmetic)?;
        if let Some(first) = bad.first() {
            return Err(OracleError::NotOrthogonal { count: bad.len(), first: *first });
        }
    }
    let states = set.expand(mode)?;
    let index = |ket: &crate::state_model::Ket| {
        let (a, b) = p.project(ket);
        a * pair_dims.1 + b
    };
    let rows = match mode {
        ArithmeticMode::Exact => {
            let terms: Vec<Terms<GaussRational>> = states
                .iter()
                .map(|s| match s.amplitudes() {
                    Amplitudes::Exact { coeffs, .. } => {
                        coeffs.iter().map(|(k, c)| (p.cut_coord(k), index(k), c.clone())).collect()
                    }
                    Amplitudes::Float(_) => unreachable!("exact expansion"),
                })
                .collect();
            ConstraintRows::Exact(pair_rows(&terms, side, 0.0))
        }
        ArithmeticMode::Float => {
            let terms: Vec<Terms<Complex64>> = states
                .iter()
                .map(|s: &StateVector| {
                    s.to_float().iter().map(|(k, c)| (p.cut_coord(k), index(k), *c)).collect()
                })
                .collect();
            ConstraintRows::Float(pair_rows(&terms, side, 0.0))
        }
    };
    Ok(ConstraintSystem { partition: p, pair_dims, rows })
}

fn pair_rows<S: Scalar>(terms: &[Terms<S>], side: usize, tol: f64) -> Vec<SparseRow<S>> {
    let by_cut: Vec<BTreeMap<usize, Vec<(usize, S)>>> = terms
        .iter()
        .map(|t| {
            let mut m: BTreeMap<usize, Vec<(usize, S)>> = BTreeMap::new();
            for (x, v, c) in t {
                m.entry(*x).or_default().push((*v, c.clone()));
            }
            m
        })
        .collect();
    let mut rows = Vec::with_capacity(terms.len() * terms.len().saturating_sub(1));
    for (a, phi) in terms.iter().enumerate() {
        for (b, psi) in by_cut.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut row = Vec::new();
            for (x, u, cphi) in phi {
                if let Some(matches) = psi.get(x) {
                    for (v, cpsi) in matches {
                        row.push((u * side + v, cphi.conj() * cpsi.clone()));
                    }
                }
            }
            rows.push(prune(row, tol));
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub enum NullspaceBasis {
    Exact(Vec<SparseRow<GaussRational>>),
    Float(Vec<SparseRow<Complex64>>),
}

/// Solution space of a [`ConstraintSystem`] over complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct NullspaceResult {
    pub partition: Partition,
    pub dimension: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub contains_identity: bool,
    /// Every basis element's conjugate transpose also solves the system.
    pub dagger_closed: bool,
    /// Every basis element has zero off-diagonal entries.
    pub diagonal_basis: bool,
    pub mode: ArithmeticMode,
    /// Absolute pivot threshold, float mode only.
    pub tolerance: Option<f64>,
    /// Float mode: a pivot came within 10× of the threshold.
    pub unstable: bool,
    pub basis: NullspaceBasis,
    side: usize,
}

impl NullspaceResult {
    /// Basis element `n` as a dense `side × side` matrix in float form.
    pub fn basis_matrix(&self, n: usize) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); self.side]; self.side];
        let mut put = |c: usize, v: Complex64| m[c / self.side][c % self.side] = v;
        match &self.basis {
            NullspaceBasis::Exact(b) => {
                for (c, v) in &b[n] {
                    put(*c, crate::arith::to_complex64(v));
                }
            }
            NullspaceBasis::Float(b) => {
                for (c, v) in &b[n] {
                    put(*c, *v);
                }
            }
        }
        m
    }
}

pub fn nullspace(cs: &ConstraintSystem) -> NullspaceResult {
    match &cs.rows {
        ConstraintRows::Exact(rows) => {
            let (basis, summary) = solve(rows, cs.side(), 0.0);
            summary.finish(cs, None, NullspaceBasis::Exact(basis))
        }
        ConstraintRows::Float(rows) => {
            let max = rows.iter().flat_map(|r| r.iter().map(|(_, v)| v.norm())).fold(0.0, f64::max);
            let tol = FLOAT_TOLERANCE * if max > 0.0 { max } else { 1.0 };
            let (basis, summary) = solve(rows, cs.side(), tol);
            summary.finish(cs, Some(tol), NullspaceBasis::Float(basis))
        }
    }
}

struct Summary {
    rank: usize,
    dimension: usize,
    contains_identity: bool,
    dagger_closed: bool,
    diagonal_basis: bool,
    unstable: bool,
}

impl Summary {
    fn finish(self, cs: &ConstraintSystem, tolerance: Option<f64>, basis: NullspaceBasis) -> NullspaceResult {
        NullspaceResult {
            partition: cs.partition,
            dimension: self.dimension,
            unknowns: cs.unknown_count(),
            rank: self.rank,
            contains_identity: self.contains_identity,
            dagger_closed: self.dagger_closed,
            diagonal_basis: self.diagonal_basis,
            mode: cs.mode(),
            tolerance,
            unstable: self.unstable,
            basis,
            side: cs.side(),
        }
    }
}

fn solve<S: Scalar>(rows: &[SparseRow<S>], side: usize, tol: f64) -> (Vec<SparseRow<S>>, Summary) {
    let n = side * side;
    let mut ech = Echelon::new(n, tol);
    for r in rows {
        if !r.is_empty() {
            ech.insert(r.clone());
        }
    }
    let basis = ech.nullspace_basis();
    // The residual of a float solution scales with the row norm; allow a
    // generous multiple of the pivot threshold.
    let residual_tol = if S::MODE == ArithmeticMode::Float { tol * 1e3 } else { 0.0 };
    let identity: SparseRow<S> = (0..side).map(|u| (u * side + u, S::one())).collect();
    let contains_identity = rows.iter().all(|r| sparse_dot(r, &identity).is_negligible(residual_tol));
    let dagger_closed = basis.iter().all(|b| {
        let mut dagger: SparseRow<S> =
            b.iter().map(|(c, v)| ((c % side) * side + c / side, v.conj())).collect();
        dagger.sort_by_key(|(c, _)| *c);
        rows.iter().all(|r| sparse_dot(r, &dagger).is_negligible(residual_tol))
    });
    let diagonal_basis =
        basis.iter().all(|b| b.iter().all(|(c, v)| c / side == c % side || v.is_negligible(tol)));
    let unstable = S::MODE == ArithmeticMode::Float && ech.smallest_pivot().is_some_and(|p| p < 10.0 * tol);
    let summary = Summary {
        rank: ech.rank(),
        dimension: basis.len(),
        contains_identity,
        dagger_closed,
        diagonal_basis,
        unstable,
    };
    (basis, summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleOutcome {
    /// Every orthogonality-preserving `E` is proportional to the identity.
    TrivialOnly,
    NontrivialExists,
}

impl OracleOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleOutcome::TrivialOnly => "trivial-only",
            OracleOutcome::NontrivialExists => "nontrivial-exists",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub partition: Partition,
    pub dimension: usize,
    pub unknowns: usize,
    pub rows: usize,
    pub outcome: OracleOutcome,
    pub contains_identity: bool,
    pub dagger_closed: bool,
    pub diagonal_basis: bool,
    pub arithmetic: ArithmeticMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub unstable: bool,
}

impl OracleVerdict {
    fn from_result(cs: &ConstraintSystem, ns: &NullspaceResult) -> Self {
        OracleVerdict {
            partition: ns.partition,
            dimension: ns.dimension,
            unknowns: ns.unknowns,
            rows: cs.row_count(),
            outcome: if ns.dimension == 1 && ns.contains_identity {
                OracleOutcome::TrivialOnly
            } else {
                OracleOutcome::NontrivialExists
            },
            contains_identity: ns.contains_identity,
            dagger_closed: ns.dagger_closed,
            diagonal_basis: ns.diagonal_basis,
            arithmetic: ns.mode,
            tolerance: ns.tolerance,
            unstable: ns.unstable,
        }
    }
}

/// Verdict for an already built system.
pub fn decide(cs: &ConstraintSystem) -> OracleVerdict {
    OracleVerdict::from_result(cs, &nullspace(cs))
}

pub fn oracle_verdict(
    set: &StateSet,
    p: Partition,
    opts: &OracleOptions,
) -> Result<OracleVerdict, OracleError> {
    Ok(decide(&build_constraints_with(set, p, opts)?))
}

/// Verdicts for A|BC, B|CA and C|AB, computed concurrently.
pub fn oracle_all(set: &StateSet, opts: &OracleOptions) -> Result<[OracleVerdict; 3], OracleError> {
    let results: Vec<Result<OracleVerdict, OracleError>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            Partition::ALL.into_iter().map(|p| scope.spawn(move || oracle_verdict(set, p, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("oracle thread panicked")).collect()
    });
    let mut out = Vec::with_capacity(3);
    for r in results {
        out.push(r?);
    }
    Ok(out.try_into().expect("three partitions"))
}

/// Strongest nonlocality: trivial-only on every partition.
pub fn all_trivial(verdicts: &[OracleVerdict]) -> bool {
    verdicts.iter().all(|v| v.outcome == OracleOutcome::TrivialOnly)
}
