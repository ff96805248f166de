//! JSON state-set documents:
//!
//! ```text
//! {"dims": [3, 3, 3],
//!  "tuples": [{"weight": 2, "kets": [[0,0,1],[2,1,0]], "label": "S1(i=0,j=0)"}, ...]}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GhzTuple, Ket, ModelError, StateSet, SystemDims};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid dims: {0}")]
    Dims(ModelError),
    #[error("{at}: declares weight {weight} but lists {kets} kets")]
    Arity { at: String, weight: usize, kets: usize },
    #[error("{at}: ket #{ket_index} {ket} is out of bounds for dims {dims}")]
    OutOfBounds { at: String, ket_index: usize, ket: Ket, dims: SystemDims },
    #[error("{at}: {source}")]
    Tuple { at: String, source: ModelError },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    dims: [usize; 3],
    tuples: Vec<TupleDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleDoc {
    weight: usize,
    kets: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

fn tuple_position(index: usize, label: Option<&str>) -> String {
    match label {
        Some(l) => format!("tuple #{index} ({l})"),
        None => format!("tuple #{index}"),
    }
}

pub fn parse_state_set(text: &str) -> Result<StateSet, DocumentError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let [d1, d2, d3] = doc.dims;
    let dims = SystemDims::new(d1, d2, d3).map_err(DocumentError::Dims)?;
    let mut tuples = Vec::with_capacity(doc.tuples.len());
    for (index, t) in doc.tuples.into_iter().enumerate() {
        let at = tuple_position(index, t.label.as_deref());
        if t.weight != t.kets.len() {
            return Err(DocumentError::Arity { at, weight: t.weight, kets: t.kets.len() });
        }
        let kets: Vec<Ket> = t.kets.iter().map(|&[i, j, k]| Ket::new(i, j, k)).collect();
        if let Some((ket_index, ket)) = kets.iter().enumerate().find(|(_, k)| !dims.contains(k)) {
            return Err(DocumentError::OutOfBounds { at, ket_index, ket: *ket, dims });
        }
        let tuple = match t.label {
            Some(l) => GhzTuple::labelled(kets, l),
            None => GhzTuple::new(kets),
        }
        .map_err(|source| DocumentError::Tuple { at, source })?;
        tuples.push(tuple);
    }
    StateSet::new(dims, tuples).map_err(|source| DocumentError::Tuple { at: "set".into(), source })
}

/// One tuple per line; deterministic output.
pub fn write_state_set(set: &StateSet) -> String {
    let dims = set.dims().as_array();
    let mut out = format!("{{\n  \"dims\": [{}, {}, {}],\n  \"tuples\": [", dims[0], dims[1], dims[2]);
    for (n, t) in set.tuples().iter().enumerate() {
        let doc = TupleDoc {
            weight: t.weight(),
            kets: t.kets().iter().map(Ket::as_array).collect(),
            label: t.label().map(str::to_owned),
        };
        out.push_str(if n == 0 { "\n    " } else { ",\n    " });
        out.push_str(&serde_json::to_string(&doc).expect("plain data serialises"));
    }
    if !set.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}
