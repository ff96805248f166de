//! Test-side oracles, written independently of the library's algorithms:
//! dense float states, dense Gaussian elimination and BFS components.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::TAU;

use ghzcert::constructions::c444_weight4;
use ghzcert::oracle::oracle_verdict;
use ghzcert::state_model::{expand_tuple, inner_product, parse_state_set, write_state_set};
use ghzcert::{
    build_graph, build_path_graph, connected_components, is_connected, GhzTuple, Ket, OracleOptions,
    Partition, StateSet, SystemDims,
};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Dense = Vec<Complex64>;

/// Expanded states as dense vectors indexed `i*d2*d3 + j*d3 + k`.
pub fn dense_states(set: &StateSet) -> Vec<Dense> {
    let [d1, d2, d3] = set.dims().as_array();
    let mut out = Vec::new();
    for t in set.tuples() {
        let w = t.weight();
        for n in 0..w {
            let mut v = vec![Complex64::new(0.0, 0.0); d1 * d2 * d3];
            for (m, k) in t.kets().iter().enumerate() {
                let phase = TAU * ((m * n) % w) as f64 / w as f64;
                v[k.i * d2 * d3 + k.j * d3 + k.k] += Complex64::from_polar(1.0 / (w as f64).sqrt(), phase);
            }
            out.push(v);
        }
    }
    out
}

pub fn dense_inner(a: &Dense, b: &Dense) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// State as a `cut × pair` matrix for the given partition.
fn reshape(v: &Dense, dims: [usize; 3], p: Partition) -> Vec<Vec<Complex64>> {
    let [d1, d2, d3] = dims;
    let (cut, pairs) = match p {
        Partition::A => (d1, d2 * d3),
        Partition::B => (d2, d3 * d1),
        Partition::C => (d3, d1 * d2),
    };
    let mut m = vec![vec![Complex64::new(0.0, 0.0); pairs]; cut];
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d3 {
                let (x, u) = match p {
                    Partition::A => (i, j * d3 + k),
                    Partition::B => (j, k * d1 + i),
                    Partition::C => (k, i * d2 + j),
                };
                m[x][u] = v[i * d2 * d3 + j * d3 + k];
            }
        }
    }
    m
}

/// Rank of dense complex rows by elimination with partial pivoting.
pub fn dense_rank(rows: impl IntoIterator<Item = Dense>, ncols: usize, rel_tol: f64) -> usize {
    let rows: Vec<Dense> = rows.into_iter().collect();
    let scale = rows.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = rel_tol * scale.max(1.0);
    let mut basis: Vec<(usize, Dense)> = Vec::new();
    for mut r in rows {
        for (pc, b) in &basis {
            let f = r[*pc];
            if f.norm() > 0.0 {
                for c in 0..ncols {
                    r[c] -= f * b[c];
                }
            }
        }
        let (pc, best) = r.iter().enumerate().map(|(c, z)| (c, z.norm())).fold((0, 0.0), |acc, x| {
            if x.1 > acc.1 {
                x
            } else {
                acc
            }
        });
        if best > tol {
            let inv = r[pc].inv();
            for z in r.iter_mut() {
                *z *= inv;
            }
            // Keep earlier basis rows reduced against the new pivot.
            for (_, b) in basis.iter_mut() {
                let f = b[pc];
                if f.norm() > 0.0 {
                    for c in 0..ncols {
                        b[c] -= f * r[c];
                    }
                }
            }
            basis.push((pc, r));
        }
        if basis.len() == ncols {
            break;
        }
    }
    basis.len()
}

/// Dimension of `{E : <φ|I⊗E|ψ> = 0 for all distinct φ, ψ}` by brute force.
pub fn dense_nullity(set: &StateSet, p: Partition) -> usize {
    let dims = set.dims().as_array();
    let mats: Vec<_> = dense_states(set).iter().map(|v| reshape(v, dims, p)).collect();
    let n = mats.first().map_or(0, |m| m[0].len());
    let mut rows = Vec::new();
    for (a, ma) in mats.iter().enumerate() {
        for (b, mb) in mats.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut row = vec![Complex64::new(0.0, 0.0); n * n];
            for (xa, xb) in ma.iter().zip(mb) {
                for u in 0..n {
                    if xa[u].norm() == 0.0 {
                        continue;
                    }
                    for v in 0..n {
                        row[u * n + v] += xa[u].conj() * xb[v];
                    }
                }
            }
            rows.push(row);
        }
    }
    n * n - dense_rank(rows, n * n, 1e-9)
}

/// Components of the projection graph by BFS over an adjacency list.
pub fn bfs_components(set: &StateSet, p: Partition, path: bool) -> (usize, usize) {
    let project = |k: &Ket| match p {
        Partition::A => (k.j, k.k),
        Partition::B => (k.k, k.i),
        Partition::C => (k.i, k.j),
    };
    let [d1, d2, d3] = set.dims().as_array();
    let shape = match p {
        Partition::A => (d2, d3),
        Partition::B => (d3, d1),
        Partition::C => (d1, d2),
    };
    let mut adj: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>> = BTreeMap::new();
    for a in 0..shape.0 {
        for b in 0..shape.1 {
            adj.insert((a, b), BTreeSet::new());
        }
    }
    let mut edges = BTreeSet::new();
    for t in set.tuples() {
        let mut vs: Vec<_> = t.kets().iter().map(project).collect();
        let mut pairs = Vec::new();
        if path {
            vs.sort();
            pairs.extend(vs.windows(2).map(|w| (w[0], w[1])));
        } else {
            for x in 0..vs.len() {
                for y in x + 1..vs.len() {
                    pairs.push((vs[x], vs[y]));
                }
            }
        }
        for (u, v) in pairs {
            if u != v {
                adj.get_mut(&u).unwrap().insert(v);
                adj.get_mut(&v).unwrap().insert(u);
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut comps = 0;
    for &start in adj.keys() {
        if !seen.insert(start) {
            continue;
        }
        comps += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    (edges.len(), comps)
}

// Generators.

/// A coordinately different tuple of weight `w`: each party's coordinates
/// are the first `w` entries of an independent shuffle.
fn arb_tuple(dims: SystemDims, w: usize) -> impl Strategy<Value = GhzTuple> {
    let shuffled = |d: usize| Just((0..d).collect::<Vec<_>>()).prop_shuffle();
    (shuffled(dims.d1), shuffled(dims.d2), shuffled(dims.d3)).prop_map(move |(a, b, c)| {
        GhzTuple::new((0..w).map(|m| Ket::new(a[m], b[m], c[m])).collect()).unwrap()
    })
}

fn arb_dims() -> impl Strategy<Value = SystemDims> {
    (2usize..=4, 2usize..=4, 2usize..=4).prop_map(|(a, b, c)| SystemDims::new(a, b, c).unwrap())
}

/// Tuples with pairwise disjoint supports, hence an orthogonal set.
pub fn arb_disjoint_set() -> impl Strategy<Value = StateSet> {
    arb_dims().prop_flat_map(|dims| {
        let wmax = dims.d1.min(dims.d2).min(dims.d3).min(3);
        let tuple = (2..=wmax).prop_flat_map(move |w| arb_tuple(dims, w));
        prop::collection::vec(tuple, 1..6).prop_map(move |cands| {
            let mut used = BTreeSet::new();
            let mut set = StateSet::empty(dims);
            for t in cands {
                if t.kets().iter().all(|k| !used.contains(k)) {
                    used.extend(t.kets().iter().copied());
                    set.push(t).unwrap();
                }
            }
            set
        })
    })
}

/// Nonempty sub-selection of the weight-4 table, orthogonal with shared kets.
pub fn arb_table_subset() -> impl Strategy<Value = StateSet> {
    let table = c444_weight4();
    let n = table.tuples().len();
    prop::sample::subsequence((0..n).collect::<Vec<_>>(), 1..4).prop_map(move |keep| {
        let mut set = StateSet::empty(table.dims());
        for i in keep {
            set.push(table.tuples()[i].clone()).unwrap();
        }
        set
    })
}

pub fn arb_orthogonal_set() -> impl Strategy<Value = StateSet> {
    prop_oneof![3 => arb_disjoint_set(), 1 => arb_table_subset()]
}

/// A single tuple with its dims, up to weight 4.
pub fn arb_dims_tuple() -> impl Strategy<Value = (SystemDims, GhzTuple)> {
    arb_dims().prop_flat_map(|dims| {
        let wmax = dims.d1.min(dims.d2).min(dims.d3);
        (Just(dims), (2..=wmax).prop_flat_map(move |w| arb_tuple(dims, w)))
    })
}

// Properties, shared by the property suite and the acceptance run.

pub fn prop_identity_in_nullspace(set: StateSet) -> Result<(), TestCaseError> {
    for p in Partition::ALL {
        let v = oracle_verdict(&set, p, &OracleOptions::default())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(v.contains_identity, "{p}: identity missing");
        prop_assert!(v.dagger_closed, "{p}: basis not closed under adjoint");
        prop_assert!(v.dimension >= 1);
    }
    Ok(())
}

pub fn prop_path_subgraph(set: StateSet) -> Result<(), TestCaseError> {
    for p in Partition::ALL {
        let full = build_graph(&set, p);
        let path = build_path_graph(&set, p);
        prop_assert!(path.is_subgraph_of(&full));
        if is_connected(&path) {
            prop_assert!(is_connected(&full));
        }
        prop_assert_eq!(connected_components(&path).count(), connected_components(&full).count());
    }
    Ok(())
}

pub fn prop_round_trip(set: StateSet) -> Result<(), TestCaseError> {
    let text = write_state_set(&set);
    let back = parse_state_set(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, &set);
    prop_assert_eq!(write_state_set(&back), text);
    Ok(())
}

pub fn prop_expansion_orthonormal((dims, t): (SystemDims, GhzTuple)) -> Result<(), TestCaseError> {
    let states = expand_tuple(&t, dims).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(states.len(), t.weight());
    for (a, sa) in states.iter().enumerate() {
        for (b, sb) in states.iter().enumerate() {
            let ip = inner_product(sa, sb).unwrap();
            if a == b {
                prop_assert!(ip.is_one(1e-12), "<{a}|{a}> = {:?}", ip);
            } else {
                prop_assert!(ip.is_zero(1e-12), "<{a}|{b}> = {:?}", ip);
            }
        }
    }
    Ok(())
}

/// Adding a tuple only adds constraints.
pub fn prop_monotone(set: StateSet) -> Result<(), TestCaseError> {
    let n = set.tuples().len();
    let smaller = {
        let mut s = StateSet::empty(set.dims());
        for t in &set.tuples()[..n - 1] {
            s.push(t.clone()).unwrap();
        }
        s
    };
    if smaller.is_empty() {
        return Ok(());
    }
    for p in Partition::ALL {
        let big = oracle_verdict(&set, p, &OracleOptions::default()).unwrap();
        let small = oracle_verdict(&smaller, p, &OracleOptions::default()).unwrap();
        prop_assert!(big.dimension <= small.dimension, "{p}: {} > {}", big.dimension, small.dimension);
    }
    Ok(())
}
