use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{inner_product, Ket, ModelError, StateSet};
use crate::arith::{Arithmetic, FLOAT_TOLERANCE};

/// Pairs `(a, b)`, `a < b`, of expanded-state indices that are not orthogonal.
/// Empty means the set is orthogonal.
pub fn check_mutual_orthogonality(set: &StateSet) -> Vec<(usize, usize)> {
    check_mutual_orthogonality_with(set, Arithmetic::Auto).expect("auto arithmetic always resolves")
}

pub fn check_mutual_orthogonality_with(
    set: &StateSet,
    arithmetic: Arithmetic,
) -> Result<Vec<(usize, usize)>, ModelError> {
    let mode = set.resolve_mode(arithmetic)?;
    let states = set.expand(mode)?;

    // States with disjoint supports are orthogonal, so only pairs sharing a
    // ket need an inner product.
    let mut by_ket: BTreeMap<Ket, Vec<usize>> = BTreeMap::new();
    for (idx, s) in states.iter().enumerate() {
        for ket in s.support() {
            by_ket.entry(ket).or_default().push(idx);
        }
    }
    let mut candidates = BTreeSet::new();
    for owners in by_ket.values() {
        for (n, &a) in owners.iter().enumerate() {
            for &b in &owners[n + 1..] {
                candidates.insert((a.min(b), a.max(b)));
            }
        }
    }
    Ok(candidates
        .into_iter()
        .filter(|&(a, b)| !inner_product(&states[a], &states[b]).expect("same dims").is_zero(FLOAT_TOLERANCE))
        .collect())
}

/// Every ket appearing in any tuple.
pub fn coordinate_set(set: &StateSet) -> BTreeSet<Ket> {
    set.tuples().iter().flat_map(|t| t.kets().iter().copied()).collect()
}

/// Smallest `(i0, j0, k0)` whose three coordinate planes all lie in the
/// coordinate set, or `None`.
pub fn check_plane_containing(set: &StateSet) -> Option<Ket> {
    let coords = coordinate_set(set);
    let dims = set.dims();
    let i0 = (0..dims.d1)
        .find(|&i| (0..dims.d2).all(|j| (0..dims.d3).all(|k| coords.contains(&Ket::new(i, j, k)))))?;
    let j0 = (0..dims.d2)
        .find(|&j| (0..dims.d1).all(|i| (0..dims.d3).all(|k| coords.contains(&Ket::new(i, j, k)))))?;
    let k0 = (0..dims.d3)
        .find(|&k| (0..dims.d1).all(|i| (0..dims.d2).all(|j| coords.contains(&Ket::new(i, j, k)))))?;
    Some(Ket::new(i0, j0, k0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialSetCheck {
    /// Indices of tuples that are not coordinately different.
    pub offenders: Vec<usize>,
}

impl SpecialSetCheck {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// Passes iff every tuple is coordinately different.
pub fn check_special_set(set: &StateSet) -> SpecialSetCheck {
    SpecialSetCheck {
        offenders: set
            .tuples()
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_coordinately_different())
            .map(|(idx, _)| idx)
            .collect(),
    }
}
