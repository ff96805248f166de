//! Verdicts on strongest nonlocality with auditable certificates.
//!
//! Two routes are combined. The graph route checks the structural
//! hypotheses (coordinately different tuples, orthogonality, a plane
//! witness) and then connectivity of the three partition graphs; for sets of
//! weight-2 tuples connectivity is equivalent to strongest nonlocality, for
//! higher weights it is only sufficient. The oracle route decides the
//! property directly and takes precedence whenever it ran.

use serde::{Deserialize, Serialize};

use crate::arith::{Arithmetic, ArithmeticMode};
use crate::graphs::{build_graph, build_path_graph, connected_components};
use crate::oracle::{all_trivial, oracle_all, OracleOptions, OracleVerdict};
use crate::state_model::{
    check_genuine_entanglement, check_mutual_orthogonality, check_plane_containing, check_special_set,
    Partition, StateSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StrongestNonlocal,
    NotStrongestNonlocal,
    Inconclusive,
    HypothesesViolated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::StrongestNonlocal => "strongest-nonlocal",
            Verdict::NotStrongestNonlocal => "not-strongest-nonlocal",
            Verdict::Inconclusive => "inconclusive",
            Verdict::HypothesesViolated => "hypotheses-violated",
        }
    }

    fn is_definite(self) -> bool {
        matches!(self, Verdict::StrongestNonlocal | Verdict::NotStrongestNonlocal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    SpecialSet,
    MutualOrthogonality,
    PlaneContaining,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRef {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRef {
    pub state: usize,
    pub tuple: usize,
    pub row: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglementCensus {
    pub states: usize,
    pub genuinely_entangled: usize,
    pub failing: Vec<StateRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub special_set_passed: bool,
    pub special_set_offenders: Vec<TupleRef>,
    pub orthogonal: bool,
    pub orthogonality_violations: usize,
    /// First few offending state pairs.
    pub orthogonality_examples: Vec<(usize, usize)>,
    pub plane_witness: Option<[usize; 3]>,
    pub entanglement: EntanglementCensus,
    /// Hypotheses that failed, in a fixed order.
    pub failed: Vec<Hypothesis>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }

    /// Orthogonal and every state genuinely entangled.
    pub fn is_oges(&self) -> bool {
        self.orthogonal && self.entanglement.failing.is_empty()
    }
}

const EXAMPLE_LIMIT: usize = 20;

pub fn check_hypotheses(set: &StateSet) -> HypothesisReport {
    let label = |t: usize| set.tuples()[t].label().map(str::to_owned);
    let special = check_special_set(set);
    let violations = check_mutual_orthogonality(set);
    let witness = check_plane_containing(set);

    let mode = set.resolve_mode(Arithmetic::Auto).expect("auto always resolves");
    let states = set.expand(mode).expect("a valid set always expands");
    let origins = set.state_origins();
    let failing: Vec<StateRef> = states
        .iter()
        .zip(&origins)
        .enumerate()
        .filter(|(_, (s, _))| !check_genuine_entanglement(s).unwrap_or(false))
        .map(|(state, (_, o))| StateRef { state, tuple: o.tuple, row: o.row, label: label(o.tuple) })
        .collect();

    let mut failed = Vec::new();
    if !special.passed() {
        failed.push(Hypothesis::SpecialSet);
    }
    if !violations.is_empty() {
        failed.push(Hypothesis::MutualOrthogonality);
    }
    if witness.is_none() {
        failed.push(Hypothesis::PlaneContaining);
    }
    HypothesisReport {
        special_set_passed: special.passed(),
        special_set_offenders: special
            .offenders
            .iter()
            .map(|&index| TupleRef { index, label: label(index) })
            .collect(),
        orthogonal: violations.is_empty(),
        orthogonality_violations: violations.len(),
        orthogonality_examples: violations.iter().take(EXAMPLE_LIMIT).copied().collect(),
        plane_witness: witness.map(|k| k.as_array()),
        entanglement: EntanglementCensus {
            states: states.len(),
            genuinely_entangled: states.len() - failing.len(),
            failing,
        },
        failed,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionConnectivity {
    pub partition: Partition,
    pub vertices: usize,
    pub full_edges: usize,
    pub full_components: usize,
    pub full_connected: bool,
    pub path_edges: usize,
    pub path_components: usize,
    pub path_connected: bool,
}

/// Which graph criterion produced the graph verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Weight-2 sets: connected on every cut iff strongest nonlocal.
    WeightTwoEquivalence,
    /// Any weights: connected on every cut implies strongest nonlocal.
    HighWeightSufficiency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphAnalysis {
    pub partitions: Vec<PartitionConnectivity>,
    pub criterion: Option<Criterion>,
    pub verdict: Verdict,
}

impl GraphAnalysis {
    pub fn all_connected(&self) -> bool {
        self.partitions.iter().all(|p| p.full_connected)
    }
}

pub fn analyse_connectivity(set: &StateSet, p: Partition) -> PartitionConnectivity {
    let full = build_graph(set, p);
    let path = build_path_graph(set, p);
    let full_components = connected_components(&full).count();
    let path_components = connected_components(&path).count();
    PartitionConnectivity {
        partition: p,
        vertices: full.vertex_count(),
        full_edges: full.edge_count(),
        full_components,
        full_connected: full_components <= 1,
        path_edges: path.edge_count(),
        path_components,
        path_connected: path_components <= 1,
    }
}

fn analyse_graphs(set: &StateSet, hypotheses: &HypothesisReport) -> GraphAnalysis {
    let partitions: Vec<_> = Partition::ALL.into_iter().map(|p| analyse_connectivity(set, p)).collect();
    let connected = partitions.iter().all(|p| p.full_connected);
    let (criterion, verdict) = if !hypotheses.passed() {
        (None, Verdict::HypothesesViolated)
    } else if set.all_weight_two() {
        let v = if connected { Verdict::StrongestNonlocal } else { Verdict::NotStrongestNonlocal };
        (Some(Criterion::WeightTwoEquivalence), v)
    } else {
        let v = if connected { Verdict::StrongestNonlocal } else { Verdict::Inconclusive };
        (Some(Criterion::HighWeightSufficiency), v)
    };
    GraphAnalysis { partitions, criterion, verdict }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdicts: Vec<OracleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// Whether the oracle matches a definite graph verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees_with_graphs: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Graph criterion; the oracle only runs when it cannot decide.
    #[default]
    Graph,
    /// Oracle only.
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CertifyOptions {
    pub method: Method,
    pub oracle: OracleOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub dims: [usize; 3],
    pub tuples: usize,
    pub states: usize,
    pub max_weight: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub arithmetic: ArithmeticMode,
    pub hypotheses: HypothesisReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<GraphAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub verdict: Verdict,
    pub reason: String,
}

/// Graph route only.
pub fn certify_via_graphs(set: &StateSet) -> CertReport {
    let hypotheses = check_hypotheses(set);
    let graphs = analyse_graphs(set, &hypotheses);
    let verdict = graphs.verdict;
    let reason = graph_reason(&graphs, &hypotheses);
    assemble(set, hypotheses, Some(graphs), None, verdict, reason, Arithmetic::Auto)
}

/// Graph route, plus the oracle when `use_oracle` is set or the graphs
/// cannot decide.
pub fn certify(set: &StateSet, use_oracle: bool) -> CertReport {
    let method = if use_oracle { Method::Both } else { Method::Graph };
    certify_with(set, &CertifyOptions { method, ..Default::default() })
}

pub fn certify_with(set: &StateSet, opts: &CertifyOptions) -> CertReport {
    let hypotheses = check_hypotheses(set);
    let graphs = (opts.method != Method::Oracle).then(|| analyse_graphs(set, &hypotheses));
    let graph_verdict = graphs.as_ref().map(|g| g.verdict);
    let run_oracle = opts.method != Method::Graph || graph_verdict.is_some_and(|v| !v.is_definite());

    let oracle = run_oracle.then(|| match oracle_all(set, &opts.oracle) {
        Ok(verdicts) => {
            let v = if all_trivial(&verdicts) {
                Verdict::StrongestNonlocal
            } else {
                Verdict::NotStrongestNonlocal
            };
            OracleReport {
                verdicts: verdicts.to_vec(),
                error: None,
                verdict: Some(v),
                agrees_with_graphs: graph_verdict.filter(|g| g.is_definite()).map(|g| g == v),
            }
        }
        Err(e) => OracleReport {
            verdicts: Vec::new(),
            error: Some(e.to_string()),
            verdict: None,
            agrees_with_graphs: None,
        },
    });

    let (verdict, reason) = match (&oracle, &graphs) {
        (Some(OracleReport { verdict: Some(v), verdicts, .. }), _) => {
            let dims: Vec<String> = verdicts
                .iter()
                .map(|o| format!("{}: dim={} {}", o.partition.letter(), o.dimension, o.outcome.as_str()))
                .collect();
            (*v, format!("oracle nullspace dimensions ({})", dims.join(", ")))
        }
        (Some(OracleReport { error: Some(e), .. }), Some(g)) if g.verdict.is_definite() => {
            (g.verdict, format!("{}; oracle did not run: {e}", graph_reason(g, &hypotheses)))
        }
        (Some(OracleReport { error: Some(e), .. }), Some(g)) if g.verdict == Verdict::HypothesesViolated => {
            (g.verdict, format!("{}; oracle did not run: {e}", graph_reason(g, &hypotheses)))
        }
        (Some(OracleReport { error: Some(e), .. }), _) => {
            (Verdict::Inconclusive, format!("oracle did not run: {e}"))
        }
        (_, Some(g)) => (g.verdict, graph_reason(g, &hypotheses)),
        _ => unreachable!("oracle reports carry a verdict or an error"),
    };
    assemble(set, hypotheses, graphs, oracle, verdict, reason, opts.oracle.arithmetic)
}

fn graph_reason(g: &GraphAnalysis, h: &HypothesisReport) -> String {
    if !h.passed() {
        let names: Vec<&str> = h
            .failed
            .iter()
            .map(|f| match f {
                Hypothesis::SpecialSet => "special-set",
                Hypothesis::MutualOrthogonality => "mutual-orthogonality",
                Hypothesis::PlaneContaining => "plane-containing",
            })
            .collect();
        return format!("failed hypotheses: {}", names.join(", "));
    }
    let comps: Vec<String> = g
        .partitions
        .iter()
        .map(|p| format!("{}: {} component(s)", p.partition.letter(), p.full_components))
        .collect();
    let rule = match g.criterion {
        Some(Criterion::WeightTwoEquivalence) => "weight-2 equivalence",
        Some(Criterion::HighWeightSufficiency) => "high-weight sufficiency",
        None => "none",
    };
    format!("graph criterion ({rule}): {}", comps.join(", "))
}

fn assemble(
    set: &StateSet,
    hypotheses: HypothesisReport,
    graphs: Option<GraphAnalysis>,
    oracle: Option<OracleReport>,
    verdict: Verdict,
    reason: String,
    arithmetic: Arithmetic,
) -> CertReport {
    let arithmetic = oracle
        .as_ref()
        .and_then(|o| o.verdicts.first().map(|v| v.arithmetic))
        .or_else(|| set.resolve_mode(arithmetic).ok())
        .unwrap_or(ArithmeticMode::Float);
    CertReport {
        dims: set.dims().as_array(),
        tuples: set.tuples().len(),
        states: set.state_count(),
        max_weight: set.weights().max().unwrap_or(0),
        input_sha256: None,
        arithmetic,
        hypotheses,
        graphs,
        oracle,
        verdict,
        reason,
    }
}
