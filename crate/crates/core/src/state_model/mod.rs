//! Tripartite GHZ-like state sets and the validators the certification
//! criteria depend on.

mod checks;
mod document;
mod vector;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Arithmetic, ArithmeticMode};

pub use checks::{
    check_mutual_orthogonality, check_mutual_orthogonality_with, check_plane_containing, check_special_set,
    coordinate_set, SpecialSetCheck,
};
pub use document::{parse_state_set, write_state_set, DocumentError};
pub use vector::{
    check_genuine_entanglement, expand_tuple, expand_tuple_with, inner_product, schmidt_rank, Amplitudes,
    Overlap, StateVector,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("local dimensions must all be at least 2, got ({0}, {1}, {2})")]
    InvalidDims(usize, usize, usize),
    #[error("ket {ket} is out of bounds for dims {dims}")]
    KetOutOfBounds { ket: Ket, dims: SystemDims },
    #[error("a GHZ-like tuple needs weight at least 2, got {0}")]
    WeightTooSmall(usize),
    #[error("ket {0} appears twice in one tuple")]
    RepeatedKet(Ket),
    #[error("kets {first} and {second} are not coordinately different")]
    NotCoordinatelyDifferent { first: Ket, second: Ket },
    #[error("tuple #{tuple}: {source}")]
    InTuple {
        tuple: usize,
        #[source]
        source: Box<ModelError>,
    },
    #[error("state dims {0} and {1} differ")]
    DimensionMismatch(SystemDims, SystemDims),
    #[error("state is not normalised (squared norm {0})")]
    Unnormalized(f64),
    #[error("exact arithmetic needs weights dividing 4, found weight {0}")]
    ExactUnavailable(usize),
}

/// Local dimensions of parties A, B and C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemDims {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
}

impl SystemDims {
    pub fn new(d1: usize, d2: usize, d3: usize) -> Result<Self, ModelError> {
        if d1 < 2 || d2 < 2 || d3 < 2 {
            return Err(ModelError::InvalidDims(d1, d2, d3));
        }
        Ok(SystemDims { d1, d2, d3 })
    }

    pub fn cube(d: usize) -> Result<Self, ModelError> {
        Self::new(d, d, d)
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.d1, self.d2, self.d3]
    }

    pub fn contains(&self, ket: &Ket) -> bool {
        ket.i < self.d1 && ket.j < self.d2 && ket.k < self.d3
    }

    pub fn total(&self) -> usize {
        self.d1 * self.d2 * self.d3
    }
}

impl fmt::Display for SystemDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.d1, self.d2, self.d3)
    }
}

/// Computational basis ket `|i⟩_A |j⟩_B |k⟩_C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Ket {
    pub const fn new(i: usize, j: usize, k: usize) -> Self {
        Ket { i, j, k }
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }
}

impl From<(usize, usize, usize)> for Ket {
    fn from((i, j, k): (usize, usize, usize)) -> Self {
        Ket { i, j, k }
    }
}

impl fmt::Display for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// The three bipartitions, named by the party that is cut off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Partition {
    /// A|BC
    A,
    /// B|CA
    B,
    /// C|AB
    C,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::A, Partition::B, Partition::C];

    /// Coordinate of the cut party.
    pub fn cut_coord(self, ket: &Ket) -> usize {
        match self {
            Partition::A => ket.i,
            Partition::B => ket.j,
            Partition::C => ket.k,
        }
    }

    /// Projection onto the two remaining parties: A → (j,k), B → (k,i), C → (i,j).
    pub fn project(self, ket: &Ket) -> (usize, usize) {
        match self {
            Partition::A => (ket.j, ket.k),
            Partition::B => (ket.k, ket.i),
            Partition::C => (ket.i, ket.j),
        }
    }

    /// Inverse of [`Partition::project`].
    pub fn lift(self, cut: usize, (a, b): (usize, usize)) -> Ket {
        match self {
            Partition::A => Ket::new(cut, a, b),
            Partition::B => Ket::new(b, cut, a),
            Partition::C => Ket::new(a, b, cut),
        }
    }

    pub fn cut_dim(self, dims: &SystemDims) -> usize {
        match self {
            Partition::A => dims.d1,
            Partition::B => dims.d2,
            Partition::C => dims.d3,
        }
    }

    /// Ranges of the two coordinates of a projected pair.
    pub fn pair_dims(self, dims: &SystemDims) -> (usize, usize) {
        match self {
            Partition::A => (dims.d2, dims.d3),
            Partition::B => (dims.d3, dims.d1),
            Partition::C => (dims.d1, dims.d2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Partition::A => "A|BC",
            Partition::B => "B|CA",
            Partition::C => "C|AB",
        }
    }

    pub fn letter(self) -> char {
        match self {
            Partition::A => 'A',
            Partition::B => 'B',
            Partition::C => 'C',
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Partition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" | "A|BC" => Ok(Partition::A),
            "B" | "b" | "B|CA" => Ok(Partition::B),
            "C" | "c" | "C|AB" => Ok(Partition::C),
            other => Err(format!("unknown partition `{other}`")),
        }
    }
}

/// `w` computational kets expanded with the rows of the `w`-point Fourier
/// matrix: `|χ_n⟩ = w^{-1/2} Σ_m ω^{mn} |ket_m⟩`, `ω = exp(2πi/w)`.
///
/// Construction only enforces weight ≥ 2 and distinct kets; coordinate
/// distinctness is a separate check so that sets which violate it can
/// still be loaded and diagnosed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GhzTuple {
    kets: Vec<Ket>,
    label: Option<String>,
}

impl GhzTuple {
    pub fn new(kets: Vec<Ket>) -> Result<Self, ModelError> {
        if kets.len() < 2 {
            return Err(ModelError::WeightTooSmall(kets.len()));
        }
        for (a, ka) in kets.iter().enumerate() {
            if kets[..a].contains(ka) {
                return Err(ModelError::RepeatedKet(*ka));
            }
        }
        Ok(GhzTuple { kets, label: None })
    }

    pub fn labelled(kets: Vec<Ket>, label: impl Into<String>) -> Result<Self, ModelError> {
        let mut t = Self::new(kets)?;
        t.label = Some(label.into());
        Ok(t)
    }

    pub fn weight(&self) -> usize {
        self.kets.len()
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// First pair of kets sharing a coordinate, if any.
    pub fn coordinate_collision(&self) -> Option<(Ket, Ket)> {
        for (a, ka) in self.kets.iter().enumerate() {
            for kb in &self.kets[a + 1..] {
                if ka.i == kb.i || ka.j == kb.j || ka.k == kb.k {
                    return Some((*ka, *kb));
                }
            }
        }
        None
    }

    pub fn is_coordinately_different(&self) -> bool {
        self.coordinate_collision().is_none()
    }
}

/// Where an expanded state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateOrigin {
    pub tuple: usize,
    /// Fourier row `n`.
    pub row: usize,
}

/// A finite list of GHZ-like tuples over fixed local dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    dims: SystemDims,
    tuples: Vec<GhzTuple>,
}

impl StateSet {
    pub fn new(dims: SystemDims, tuples: Vec<GhzTuple>) -> Result<Self, ModelError> {
        for (idx, t) in tuples.iter().enumerate() {
            if let Some(bad) = t.kets.iter().find(|k| !dims.contains(k)) {
                return Err(ModelError::InTuple {
                    tuple: idx,
                    source: Box::new(ModelError::KetOutOfBounds { ket: *bad, dims }),
                });
            }
        }
        Ok(StateSet { dims, tuples })
    }

    pub fn empty(dims: SystemDims) -> Self {
        StateSet { dims, tuples: Vec::new() }
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn tuples(&self) -> &[GhzTuple] {
        &self.tuples
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Total number of expanded states.
    pub fn state_count(&self) -> usize {
        self.tuples.iter().map(GhzTuple::weight).sum()
    }

    pub fn weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.tuples.iter().map(GhzTuple::weight)
    }

    pub fn all_weight_two(&self) -> bool {
        self.weights().all(|w| w == 2)
    }

    /// Arithmetic mode for this set, or an error when exact was forced but
    /// is unavailable.
    pub fn resolve_mode(&self, arithmetic: Arithmetic) -> Result<ArithmeticMode, ModelError> {
        arithmetic.resolve(self.weights()).ok_or_else(|| {
            let w = self.weights().find(|w| !crate::arith::weight_is_exact(*w)).unwrap_or(0);
            ModelError::ExactUnavailable(w)
        })
    }

    /// Origins of the expanded states, in expansion order.
    pub fn state_origins(&self) -> Vec<StateOrigin> {
        self.tuples
            .iter()
            .enumerate()
            .flat_map(|(tuple, t)| (0..t.weight()).map(move |row| StateOrigin { tuple, row }))
            .collect()
    }

    /// Every expanded state, tuple by tuple. Coordinate distinctness is not
    /// required here.
    pub fn expand(&self, mode: ArithmeticMode) -> Result<Vec<StateVector>, ModelError> {
        let mut out = Vec::with_capacity(self.state_count());
        for (idx, t) in self.tuples.iter().enumerate() {
            let states = vector::expand_relaxed(t, self.dims, mode)
                .map_err(|e| ModelError::InTuple { tuple: idx, source: Box::new(e) })?;
            out.extend(states);
        }
        Ok(out)
    }

    /// Copy keeping only the tuples for which `keep` returns true.
    pub fn filter_tuples(&self, mut keep: impl FnMut(&GhzTuple) -> bool) -> StateSet {
        StateSet { dims: self.dims, tuples: self.tuples.iter().filter(|t| keep(t)).cloned().collect() }
    }

    /// Copy without the tuples whose label starts with any of `prefixes`.
    pub fn without_labels(&self, prefixes: &[&str]) -> StateSet {
        self.filter_tuples(|t| !t.label().is_some_and(|l| prefixes.iter().any(|p| l.starts_with(p))))
    }

    pub fn push(&mut self, tuple: GhzTuple) -> Result<(), ModelError> {
        if let Some(bad) = tuple.kets.iter().find(|k| !self.dims.contains(k)) {
            return Err(ModelError::KetOutOfBounds { ket: *bad, dims: self.dims });
        }
        self.tuples.push(tuple);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_reject_qubit_free_parties() {
        assert!(SystemDims::new(1, 3, 3).is_err());
        assert!(SystemDims::new(2, 2, 2).is_ok());
    }

    #[test]
    fn projections_and_lift_round_trip() {
        let ket = Ket::new(1, 2, 3);
        for p in Partition::ALL {
            assert_eq!(p.lift(p.cut_coord(&ket), p.project(&ket)), ket);
        }
        assert_eq!(Partition::B.project(&ket), (3, 1));
    }

    #[test]
    fn tuple_structure() {
        assert!(matches!(GhzTuple::new(vec![Ket::new(0, 0, 0)]), Err(ModelError::WeightTooSmall(1))));
        assert!(matches!(
            GhzTuple::new(vec![Ket::new(0, 0, 0), Ket::new(0, 0, 0)]),
            Err(ModelError::RepeatedKet(_))
        ));
        let t = GhzTuple::new(vec![Ket::new(3, 3, 3), Ket::new(2, 3, 3)]).unwrap();
        assert!(!t.is_coordinately_different());
        let t = GhzTuple::new(vec![Ket::new(0, 0, 0), Ket::new(1, 1, 1)]).unwrap();
        assert!(t.is_coordinately_different());
    }

    #[test]
    fn set_rejects_out_of_bounds() {
        let dims = SystemDims::cube(3).unwrap();
        let t = GhzTuple::new(vec![Ket::new(5, 0, 0), Ket::new(1, 1, 1)]).unwrap();
        let err = StateSet::new(dims, vec![t]).unwrap_err();
        assert!(matches!(err, ModelError::InTuple { tuple: 0, .. }));
    }
}
