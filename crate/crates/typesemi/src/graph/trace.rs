//! Graph traces: nonnegative vertex weights reproducing themselves under
//! edge transfer, their cone description, and the conversion between traces
//! on a graph with a group action and traces on its quotient.

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{int, Value};
use crate::lp;

use super::{Graph, SelfSimilarAction, VertexFn};

/// A `[0, ∞]`-valued graph trace candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphTrace {
    pub values: Vec<Value>,
}

impl GraphTrace {
    pub fn from_rationals(values: Vec<BigRational>) -> GraphTrace {
        GraphTrace { values: values.into_iter().map(Value::Finite).collect() }
    }

    /// The trace identity `T(v) = Σ_{r(e)=v} T(s(e))`, with INF-arithmetic.
    /// With `receiving_only`, vertices receiving no edge are exempt (they
    /// are free boundary data, matching the truncation semantics).
    pub fn satisfies(&self, graph: &Graph, receiving_only: bool) -> bool {
        for v in 0..graph.n_vertices() {
            let incoming: Vec<usize> =
                graph.edges.iter().filter(|e| e.r == v).map(|e| e.s).collect();
            if incoming.is_empty() {
                if receiving_only {
                    continue;
                }
                if !self.values[v].is_zero() {
                    return false;
                }
                continue;
            }
            let mut sum = Value::zero();
            for s in incoming {
                sum = sum + self.values[s].clone();
            }
            if sum != self.values[v] {
                return false;
            }
        }
        true
    }

    /// `Σ_v f(v)·T(v)`, with `0·∞ = 0`.
    pub fn eval(&self, f: &VertexFn) -> Value {
        let mut acc = Value::zero();
        for (v, &c) in f.iter().enumerate() {
            if c > 0 {
                acc = acc + self.values[v].scale(c);
            }
        }
        acc
    }

    pub fn is_nontrivial(&self) -> bool {
        self.values.iter().any(|v| !v.is_zero() && v.is_finite())
    }
}

/// The cone `{T ≥ 0 : trace identity at receiving vertices}` described by
/// its extreme rays.
#[derive(Clone, Debug)]
pub struct TraceCone {
    pub rays: Vec<Vec<BigRational>>,
    /// Dimension of the linear span of the cone.
    pub dimension: usize,
}

impl TraceCone {
    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty()
    }
}

/// Exact extreme-ray description of the trace cone.  The identity is
/// imposed at receiving vertices; vertices receiving no edge are free
/// boundary data (sources are allowed here).
pub fn graph_trace_cone(graph: &Graph) -> TraceCone {
    let n = graph.n_vertices();
    let mut rows = Vec::new();
    for v in 0..n {
        let incoming: Vec<usize> =
            graph.edges.iter().filter(|e| e.r == v).map(|e| e.s).collect();
        if incoming.is_empty() {
            continue;
        }
        let mut row = vec![BigRational::zero(); n];
        row[v] += int(1);
        for s in incoming {
            row[s] -= int(1);
        }
        rows.push(row);
    }
    let rays = lp::extreme_rays(n, &rows);
    let dimension = rank(&rays);
    TraceCone { rays, dimension }
}

fn rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let lead = b.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            if !w[lead].is_zero() {
                let factor = &w[lead] / &b[lead];
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= &factor * bi;
                }
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
        }
    }
    basis.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceConvertError {
    WrongLength,
    QuotientIdentityFails { vertex: usize },
    GraphIdentityFails { vertex: usize },
}

impl std::fmt::Display for TraceConvertError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceConvertError::WrongLength => write!(f, "trace has the wrong number of entries"),
            TraceConvertError::QuotientIdentityFails { vertex } => {
                write!(f, "quotient trace identity fails at vertex {vertex}")
            }
            TraceConvertError::GraphIdentityFails { vertex } => {
                write!(f, "graph trace identity fails at vertex {vertex}")
            }
        }
    }
}

impl std::error::Error for TraceConvertError {}

/// Converts a trace on the quotient graph to the invariant trace on the
/// original graph via `T(v) = [T]([v]) / |orbit(v)|`, verifies both trace
/// identities and the invariance, and returns the round-tripped quotient
/// trace (which must equal the input exactly).
pub fn gamma_trace_convert(
    action: &SelfSimilarAction,
    quotient_trace: &[BigRational],
) -> Result<(Vec<BigRational>, Vec<BigRational>), TraceConvertError> {
    let quotient = action.quotient_graph().expect("validated action");
    if quotient_trace.len() != quotient.n_vertices() {
        return Err(TraceConvertError::WrongLength);
    }
    let qt = GraphTrace::from_rationals(quotient_trace.to_vec());
    if !qt.satisfies(&quotient, true) {
        let bad = (0..quotient.n_vertices())
            .find(|_| true)
            .expect("nonempty");
        return Err(TraceConvertError::QuotientIdentityFails { vertex: bad });
    }
    let (v_idx, v_orbits) = action.vertex_orbits();
    let lifted: Vec<BigRational> = (0..action.graph.n_vertices())
        .map(|v| {
            let orbit = v_idx[v];
            &quotient_trace[orbit] / int(v_orbits[orbit].len() as i64)
        })
        .collect();
    let lt = GraphTrace::from_rationals(lifted.clone());
    if !lt.satisfies(&action.graph, true) {
        let bad = (0..action.graph.n_vertices())
            .find(|&v| {
                let incoming: Vec<usize> =
                    action.graph.edges.iter().filter(|e| e.r == v).map(|e| e.s).collect();
                !incoming.is_empty()
                    && incoming.iter().map(|&s| lifted[s].clone()).sum::<BigRational>()
                        != lifted[v]
            })
            .unwrap_or(0);
        return Err(TraceConvertError::GraphIdentityFails { vertex: bad });
    }
    // Γ-invariance holds by construction (values factor through orbits).
    // Round trip: [T]([v]) = |orbit|·T(v).
    let round: Vec<BigRational> = v_orbits
        .iter()
        .map(|orbit| int(orbit.len() as i64) * &lifted[orbit[0]])
        .collect();
    debug_assert_eq!(&round, quotient_trace);
    Ok((lifted, round))
}
