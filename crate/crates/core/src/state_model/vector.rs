use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::{GhzTuple, Ket, ModelError, Partition, SystemDims};
use crate::arith::{
    exact_root_of_unity, float_root_of_unity, rational, to_complex64, weight_is_exact, ArithmeticMode,
    GaussRational, Scalar, FLOAT_TOLERANCE,
};
use crate::linalg::{self, SparseRow};

/// Sparse amplitudes over computational kets.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    /// Amplitude of `ket` is `coeffs[ket] / sqrt(scale)`.
    Exact {
        coeffs: BTreeMap<Ket, GaussRational>,
        scale: u64,
    },
    Float(BTreeMap<Ket, Complex64>),
}

/// A pure tripartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: SystemDims,
    amps: Amplitudes,
}

impl StateVector {
    pub fn exact(
        dims: SystemDims,
        coeffs: BTreeMap<Ket, GaussRational>,
        scale: u64,
    ) -> Result<Self, ModelError> {
        check_bounds(dims, coeffs.keys())?;
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(StateVector { dims, amps: Amplitudes::Exact { coeffs, scale: scale.max(1) } })
    }

    pub fn float(dims: SystemDims, amps: BTreeMap<Ket, Complex64>) -> Result<Self, ModelError> {
        check_bounds(dims, amps.keys())?;
        Ok(StateVector { dims, amps: Amplitudes::Float(amps) })
    }

    /// The product state `|ket⟩`.
    pub fn basis(dims: SystemDims, ket: Ket) -> Result<Self, ModelError> {
        Self::exact(dims, BTreeMap::from([(ket, rational(1).into())]), 1)
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self.amps {
            Amplitudes::Exact { .. } => ArithmeticMode::Exact,
            Amplitudes::Float(_) => ArithmeticMode::Float,
        }
    }

    pub fn support(&self) -> Vec<Ket> {
        match &self.amps {
            Amplitudes::Exact { coeffs, .. } => coeffs.keys().copied().collect(),
            Amplitudes::Float(a) => a.keys().copied().collect(),
        }
    }

    /// Amplitudes as doubles, including the `1/sqrt(scale)` factor.
    pub fn to_float(&self) -> BTreeMap<Ket, Complex64> {
        match &self.amps {
            Amplitudes::Exact { coeffs, scale } => {
                let s = (*scale as f64).sqrt();
                coeffs.iter().map(|(k, c)| (*k, to_complex64(c) / s)).collect()
            }
            Amplitudes::Float(a) => a.clone(),
        }
    }

    /// `⟨self|self⟩`.
    pub fn norm_squared(&self) -> Overlap {
        inner_product(self, self).expect("same dims")
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_squared().is_one(FLOAT_TOLERANCE)
    }
}

fn check_bounds<'a>(dims: SystemDims, kets: impl Iterator<Item = &'a Ket>) -> Result<(), ModelError> {
    for k in kets {
        if !dims.contains(k) {
            return Err(ModelError::KetOutOfBounds { ket: *k, dims });
        }
    }
    Ok(())
}

/// Value of an inner product.
#[derive(Debug, Clone, PartialEq)]
pub enum Overlap {
    /// `numerator / sqrt(scale)`.
    Exact {
        numerator: GaussRational,
        scale: u64,
    },
    Float(Complex64),
}

impl Overlap {
    pub fn is_zero(&self, tol: f64) -> bool {
        match self {
            Overlap::Exact { numerator, .. } => numerator.is_zero(),
            Overlap::Float(z) => z.norm() <= tol,
        }
    }

    pub fn is_one(&self, tol: f64) -> bool {
        match self {
            Overlap::Exact { numerator, scale } => {
                numerator.im.is_zero()
                    && numerator.re.is_positive()
                    && &numerator.re * &numerator.re == rational(*scale as i64)
            }
            Overlap::Float(z) => (z - Complex64::new(1.0, 0.0)).norm() <= tol,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Overlap::Exact { numerator, scale } => to_complex64(numerator) / (*scale as f64).sqrt(),
            Overlap::Float(z) => *z,
        }
    }
}

/// `⟨a|b⟩ = Σ conj(a(ket)) b(ket)`; exact when both sides are exact.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Overlap, ModelError> {
    if a.dims != b.dims {
        return Err(ModelError::DimensionMismatch(a.dims, b.dims));
    }
    match (&a.amps, &b.amps) {
        (Amplitudes::Exact { coeffs: ca, scale: sa }, Amplitudes::Exact { coeffs: cb, scale: sb }) => {
            let mut acc = <GaussRational as num_traits::Zero>::zero();
            for (ket, x) in ca {
                if let Some(y) = cb.get(ket) {
                    acc += x.conj() * y.clone();
                }
            }
            Ok(Overlap::Exact { numerator: acc, scale: sa * sb })
        }
        _ => {
            let fa = a.to_float();
            let fb = b.to_float();
            let acc = fa.iter().filter_map(|(ket, x)| fb.get(ket).map(|y| x.conj() * y)).sum();
            Ok(Overlap::Float(acc))
        }
    }
}

/// Expand a coordinately-different tuple into its `w` Fourier states.
/// Exact when the weight divides 4, float otherwise.
pub fn expand_tuple(t: &GhzTuple, dims: SystemDims) -> Result<Vec<StateVector>, ModelError> {
    let mode = if weight_is_exact(t.weight()) { ArithmeticMode::Exact } else { ArithmeticMode::Float };
    expand_tuple_with(t, dims, mode)
}

pub fn expand_tuple_with(
    t: &GhzTuple,
    dims: SystemDims,
    mode: ArithmeticMode,
) -> Result<Vec<StateVector>, ModelError> {
    if let Some((first, second)) = t.coordinate_collision() {
        return Err(ModelError::NotCoordinatelyDifferent { first, second });
    }
    expand_relaxed(t, dims, mode)
}

/// Expansion that only needs distinct, in-bounds kets.
pub(super) fn expand_relaxed(
    t: &GhzTuple,
    dims: SystemDims,
    mode: ArithmeticMode,
) -> Result<Vec<StateVector>, ModelError> {
    check_bounds(dims, t.kets().iter())?;
    let w = t.weight();
    match mode {
        ArithmeticMode::Exact => {
            if !weight_is_exact(w) {
                return Err(ModelError::ExactUnavailable(w));
            }
            (0..w)
                .map(|n| {
                    let coeffs = t
                        .kets()
                        .iter()
                        .enumerate()
                        .map(|(m, ket)| (*ket, exact_root_of_unity(m * n, w)))
                        .collect();
                    StateVector::exact(dims, coeffs, w as u64)
                })
                .collect()
        }
        ArithmeticMode::Float => {
            let norm = (w as f64).sqrt();
            (0..w)
                .map(|n| {
                    let amps = t
                        .kets()
                        .iter()
                        .enumerate()
                        .map(|(m, ket)| (*ket, float_root_of_unity(m * n, w) / norm))
                        .collect();
                    StateVector::float(dims, amps)
                })
                .collect()
        }
    }
}

/// Rank of the amplitude matrix reshaped as (cut party) × (other two).
pub fn schmidt_rank(s: &StateVector, p: Partition) -> usize {
    let dims = s.dims();
    let (_, b) = p.pair_dims(&dims);
    let ncols = dims.total() / p.cut_dim(&dims);
    match s.amplitudes() {
        Amplitudes::Exact { coeffs, .. } => {
            let rows = group_rows(coeffs.iter().map(|(k, v)| (*k, v.clone())), p, b);
            linalg::rank(rows, ncols, 0.0)
        }
        Amplitudes::Float(amps) => {
            let max = amps.values().map(|z| z.norm()).fold(0.0, f64::max);
            let rows = group_rows(amps.iter().map(|(k, v)| (*k, *v)), p, b);
            linalg::rank(rows, ncols, FLOAT_TOLERANCE * max.max(f64::MIN_POSITIVE))
        }
    }
}

fn group_rows<S: Scalar>(
    entries: impl Iterator<Item = (Ket, S)>,
    p: Partition,
    b: usize,
) -> Vec<SparseRow<S>> {
    let mut rows: BTreeMap<usize, SparseRow<S>> = BTreeMap::new();
    for (ket, v) in entries {
        let (y, z) = p.project(&ket);
        rows.entry(p.cut_coord(&ket)).or_default().push((y * b + z, v));
    }
    rows.into_values().collect()
}

/// Entangled across every bipartition, i.e. Schmidt rank ≥ 2 for each cut.
pub fn check_genuine_entanglement(s: &StateVector) -> Result<bool, ModelError> {
    let norm = s.norm_squared();
    if !norm.is_one(FLOAT_TOLERANCE) {
        return Err(ModelError::Unnormalized(norm.to_complex64().re));
    }
    Ok(Partition::ALL.into_iter().all(|p| schmidt_rank(s, p) >= 2))
}
