//! Generators for the known strongly nonlocal GHZ-like sets.
//!
//! Tuples are emitted family by family (`S1`, `S2`, ...), row-major over the
//! family's `(i, j)` index, and labelled accordingly so that ablations can
//! drop whole families by label prefix.

use thiserror::Error;

use crate::state_model::{GhzTuple, Ket, StateSet, SystemDims};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("the odd family needs an odd d >= 3, got {0}")]
    OddFamily(usize),
    #[error("the even family needs an even d >= 4, got {0}")]
    EvenFamily(usize),
    #[error("unknown construction `{0}` (expected c333, c345, odd, even or c444w4)")]
    UnknownName(String),
    #[error("construction `{0}` needs a value for d")]
    MissingD(&'static str),
}

/// Named construction, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    C333,
    C345,
    Odd(usize),
    Even(usize),
    C444Weight4,
}

impl Construction {
    pub fn from_name(name: &str, d: Option<usize>) -> Result<Self, ConstructionError> {
        match name {
            "c333" => Ok(Construction::C333),
            "c345" => Ok(Construction::C345),
            "c444w4" => Ok(Construction::C444Weight4),
            "odd" => d.map(Construction::Odd).ok_or(ConstructionError::MissingD("odd")),
            "even" => d.map(Construction::Even).ok_or(ConstructionError::MissingD("even")),
            other => Err(ConstructionError::UnknownName(other.to_owned())),
        }
    }

    pub fn build(self) -> Result<StateSet, ConstructionError> {
        match self {
            Construction::C333 => Ok(c333()),
            Construction::C345 => Ok(c345()),
            Construction::Odd(d) => odd_d(d),
            Construction::Even(d) => even_d(d),
            Construction::C444Weight4 => Ok(c444_weight4()),
        }
    }
}

fn pair(a: (usize, usize, usize), b: (usize, usize, usize), label: String) -> GhzTuple {
    GhzTuple::labelled(vec![Ket::from(a), Ket::from(b)], label).expect("generator kets are distinct")
}

/// The three "face" families shared by every box construction in
/// `d1 × d2 × d3`, with `a = d1-1`, `b = d2-1`, `c = d3-1`:
///
/// * `S1 = |0, i, j+1⟩ ± |a, i+1, j⟩` for `(i, j) ∈ Z_b × Z_c`
/// * `S2 = |i+1, 0, j⟩ ± |i, b, j+1⟩` for `(i, j) ∈ Z_a × Z_c`
/// * `S3 = |i, j+1, 0⟩ ± |i+1, j, c⟩` for `(i, j) ∈ Z_a × Z_b`
fn face_families(dims: SystemDims) -> Vec<GhzTuple> {
    let (a, b, c) = (dims.d1 - 1, dims.d2 - 1, dims.d3 - 1);
    let mut tuples = Vec::new();
    for i in 0..b {
        for j in 0..c {
            tuples.push(pair((0, i, j + 1), (a, i + 1, j), format!("S1(i={i},j={j})")));
        }
    }
    for i in 0..a {
        for j in 0..c {
            tuples.push(pair((i + 1, 0, j), (i, b, j + 1), format!("S2(i={i},j={j})")));
        }
    }
    for i in 0..a {
        for j in 0..b {
            tuples.push(pair((i, j + 1, 0), (i + 1, j, c), format!("S3(i={i},j={j})")));
        }
    }
    tuples
}

/// Corner pair `|000⟩ ± |a b c⟩`.
fn corner(dims: SystemDims) -> GhzTuple {
    pair((0, 0, 0), (dims.d1 - 1, dims.d2 - 1, dims.d3 - 1), "S4".into())
}

fn box_set(dims: SystemDims) -> StateSet {
    let mut tuples = face_families(dims);
    tuples.push(corner(dims));
    StateSet::new(dims, tuples).expect("generator kets are in bounds")
}

/// 26 states in `C^3 ⊗ C^3 ⊗ C^3`.
pub fn c333() -> StateSet {
    box_set(SystemDims::cube(3).expect("valid"))
}

/// 54 states in `C^3 ⊗ C^4 ⊗ C^5`.
pub fn c345() -> StateSet {
    box_set(SystemDims::new(3, 4, 5).expect("valid"))
}

/// `d^3 - (d-2)^3` states in `(C^d)^{⊗3}` for odd `d >= 3`.
pub fn odd_d(d: usize) -> Result<StateSet, ConstructionError> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(ConstructionError::OddFamily(d));
    }
    Ok(box_set(SystemDims::cube(d).expect("d >= 3")))
}

/// `d^3 - (d-2)^3 + 2` states in `(C^d)^{⊗3}` for even `d >= 4`.
///
/// `S4 = |000⟩ ± |232⟩` and `S5 = |d-1,d-1,d-1⟩ ± |233⟩` are kept exactly as
/// published. At `d = 4` they share kets with `S2` and `S5` is not
/// coordinately different; the validators report this.
pub fn even_d(d: usize) -> Result<StateSet, ConstructionError> {
    if d < 4 || d % 2 == 1 {
        return Err(ConstructionError::EvenFamily(d));
    }
    let dims = SystemDims::cube(d).expect("d >= 4");
    let top = d - 1;
    let mut tuples = face_families(dims);
    tuples.push(pair((0, 0, 0), (2, 3, 2), "S4".into()));
    tuples.push(pair((top, top, top), (2, 3, 3), "S5".into()));
    Ok(StateSet::new(dims, tuples).expect("generator kets are in bounds"))
}

/// Rows `B1..B16`: each a coordinately-different quadruple in `Z_4^3`.
const WEIGHT4_TABLE: [[[usize; 3]; 4]; 16] = [
    [[0, 0, 0], [1, 2, 1], [2, 1, 2], [3, 3, 3]],
    [[0, 0, 3], [1, 1, 1], [2, 2, 2], [3, 3, 0]],
    [[0, 3, 0], [1, 1, 2], [2, 2, 1], [3, 0, 3]],
    [[0, 3, 3], [1, 2, 2], [2, 1, 1], [3, 0, 0]],
    [[0, 0, 1], [1, 1, 3], [2, 3, 0], [3, 2, 2]],
    [[0, 0, 2], [1, 2, 3], [2, 1, 0], [3, 3, 1]],
    [[0, 1, 1], [1, 0, 3], [2, 2, 0], [3, 3, 2]],
    [[0, 1, 2], [1, 3, 0], [2, 0, 3], [3, 2, 1]],
    [[0, 1, 3], [1, 3, 2], [2, 0, 1], [3, 2, 0]],
    [[0, 2, 1], [1, 3, 3], [2, 0, 0], [3, 1, 2]],
    [[0, 2, 2], [1, 0, 1], [2, 3, 3], [3, 1, 0]],
    [[0, 2, 3], [1, 0, 0], [2, 3, 2], [3, 1, 1]],
    [[0, 1, 0], [1, 3, 1], [2, 2, 3], [3, 0, 2]],
    [[0, 2, 0], [1, 0, 2], [2, 3, 1], [3, 1, 3]],
    [[0, 3, 1], [1, 1, 0], [2, 0, 2], [3, 2, 3]],
    [[0, 3, 2], [1, 2, 0], [2, 1, 3], [3, 0, 1]],
];

/// Weight-4 basis of `C^4 ⊗ C^4 ⊗ C^4`: 16 tuples, 64 states.
pub fn c444_weight4() -> StateSet {
    let tuples = WEIGHT4_TABLE
        .iter()
        .enumerate()
        .map(|(n, row)| {
            let kets = row.iter().map(|&[i, j, k]| Ket::new(i, j, k)).collect();
            GhzTuple::labelled(kets, format!("B{}", n + 1)).expect("table kets are distinct")
        })
        .collect();
    StateSet::new(SystemDims::cube(4).expect("valid"), tuples).expect("table kets are in bounds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_model::{check_special_set, coordinate_set};

    #[test]
    fn parity_preconditions() {
        assert_eq!(odd_d(4), Err(ConstructionError::OddFamily(4)));
        assert_eq!(odd_d(1), Err(ConstructionError::OddFamily(1)));
        assert_eq!(even_d(5), Err(ConstructionError::EvenFamily(5)));
        assert_eq!(even_d(2), Err(ConstructionError::EvenFamily(2)));
    }

    #[test]
    fn odd_three_is_c333() {
        assert_eq!(odd_d(3).unwrap(), c333());
    }

    #[test]
    fn c333_contains_listed_pairs() {
        let s = c333();
        assert_eq!(s.tuples().len(), 13);
        assert_eq!(s.tuples()[0].kets(), &[Ket::new(0, 0, 1), Ket::new(2, 1, 0)]);
        assert!(s.tuples().iter().any(|t| t.kets() == [Ket::new(1, 0, 0), Ket::new(0, 2, 1)]));
        assert_eq!(s.tuples()[12].kets(), &[Ket::new(0, 0, 0), Ket::new(2, 2, 2)]);
    }

    #[test]
    fn c345_family_sizes() {
        let s = c345();
        let count = |p: &str| s.tuples().iter().filter(|t| t.label().unwrap().starts_with(p)).count();
        assert_eq!((count("S1"), count("S2"), count("S3"), count("S4")), (12, 8, 6, 1));
        assert!(coordinate_set(&s).contains(&Ket::new(2, 3, 4)));
    }

    #[test]
    fn table_row_one() {
        let s = c444_weight4();
        assert_eq!(
            s.tuples()[0].kets(),
            &[Ket::new(0, 0, 0), Ket::new(1, 2, 1), Ket::new(2, 1, 2), Ket::new(3, 3, 3)]
        );
        assert!(check_special_set(&s).passed());
    }

    #[test]
    fn named_constructions() {
        assert_eq!(Construction::from_name("odd", Some(5)).unwrap().build().unwrap().state_count(), 98);
        assert!(Construction::from_name("even", None).is_err());
        assert!(Construction::from_name("c999", None).is_err());
        assert!(Construction::from_name("even", Some(5)).unwrap().build().is_err());
    }
}
