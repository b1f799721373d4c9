//! Comparison relations on vertex functions: the transfer-equivalence
//! search, the dynamical preorder over a self-similar action, and the
//! presentation export.
//!
//! The preorder decision works on the quotient graph: group translates are
//! absorbed by passing to orbits, and the remaining moves — replacing a unit
//! vertex mass by its transfer image, the reverse replacement, and adding a
//! unit — generate exactly the exported presentation's preorder, which keeps
//! the two engines cross-checkable.

use std::collections::{BTreeSet, HashMap};

use crate::arith::Value;
use crate::monoid::{BudgetReport, Element, MonoidPresentation, RelationKind, SearchBudget};

use super::trace::{graph_trace_cone, GraphTrace};
use super::{theta, Graph, SelfSimilarAction, VertexFn};

/// Outcome of the transfer-equivalence search `Θᵖ(f) = Θ^q(g)`.
#[derive(Clone, Debug)]
pub enum ThetaOutcome {
    /// Witness exponents `(p, q)` with the common image.
    Equivalent { p: u32, q: u32, common: VertexFn },
    /// A trace separates the two functions exactly.
    Separated { trace: GraphTrace },
    Unknown,
}

impl ThetaOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, ThetaOutcome::Equivalent { .. })
    }
}

/// Searches `p, q ≤ n_max` for `Θᵖ(f) = Θ^q(g)`; refutes with a separating
/// trace (traces are transfer-invariant, so different values refute all
/// exponent pairs at once).
pub fn sim_theta(graph: &Graph, f: &VertexFn, g: &VertexFn, budget: &SearchBudget) -> ThetaOutcome {
    let n = budget.n_max;
    let mut f_images = Vec::with_capacity(n as usize + 1);
    let mut g_images = Vec::with_capacity(n as usize + 1);
    f_images.push(f.clone());
    g_images.push(g.clone());
    for _ in 0..n {
        let next_f = theta(graph, f_images.last().unwrap());
        let next_g = theta(graph, g_images.last().unwrap());
        f_images.push(next_f);
        g_images.push(next_g);
    }
    for (p, fi) in f_images.iter().enumerate() {
        for (q, gi) in g_images.iter().enumerate() {
            if fi == gi {
                return ThetaOutcome::Equivalent { p: p as u32, q: q as u32, common: fi.clone() };
            }
        }
    }
    let cone = graph_trace_cone(graph);
    for ray in &cone.rays {
        let trace = GraphTrace::from_rationals(ray.clone());
        if trace.eval(f) != trace.eval(g) {
            return ThetaOutcome::Separated { trace };
        }
    }
    ThetaOutcome::Unknown
}

/// One rewrite step on quotient vertex functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphStep {
    /// Replace a unit at `vertex` by its transfer image.
    Expand { vertex: usize },
    /// Replace a full transfer image by a unit at `vertex`.
    Contract { vertex: usize },
    /// Add a unit at `vertex` (order axiom).
    Add { vertex: usize },
}

/// A replayable derivation over the quotient graph.
#[derive(Clone, Debug)]
pub struct GraphDerivation {
    pub start: VertexFn,
    pub steps: Vec<GraphStep>,
    pub end: VertexFn,
}

/// Replays a graph derivation against the quotient graph.
pub fn replay_graph_derivation(graph: &Graph, d: &GraphDerivation) -> Result<(), String> {
    let mut cur = d.start.clone();
    let receiving: Vec<bool> = (0..graph.n_vertices()).map(|v| graph.in_degree(v) > 0).collect();
    for (i, step) in d.steps.iter().enumerate() {
        match *step {
            GraphStep::Expand { vertex } => {
                if !receiving[vertex] || cur[vertex] == 0 {
                    return Err(format!("step {i}: expand does not apply"));
                }
                cur[vertex] -= 1;
                let unit = unit_fn(graph.n_vertices(), vertex);
                for (c, t) in cur.iter_mut().zip(theta(graph, &unit)) {
                    *c += t;
                }
            }
            GraphStep::Contract { vertex } => {
                if !receiving[vertex] {
                    return Err(format!("step {i}: contract at a non-receiving vertex"));
                }
                let unit = unit_fn(graph.n_vertices(), vertex);
                let image = theta(graph, &unit);
                for (c, t) in cur.iter_mut().zip(&image) {
                    if *c < *t {
                        return Err(format!("step {i}: contract pattern missing"));
                    }
                    *c -= *t;
                }
                cur[vertex] += 1;
            }
            GraphStep::Add { vertex } => {
                cur[vertex] += 1;
            }
        }
    }
    if cur == d.end {
        Ok(())
    } else {
        Err("derivation ends at the wrong function".into())
    }
}

fn unit_fn(n: usize, v: usize) -> VertexFn {
    let mut f = vec![0u64; n];
    f[v] = 1;
    f
}

#[derive(Clone, Debug)]
pub enum PrecsimOutcome {
    Proved { derivation: GraphDerivation },
    /// A separating trace on the quotient graph: a genuine `[0, ∞]`-valued
    /// trace strictly larger at the pushforward of `f`.
    Refuted { trace: GraphTrace },
    Unknown { report: BudgetReport },
}

impl PrecsimOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, PrecsimOutcome::Proved { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, PrecsimOutcome::Refuted { .. })
    }
}

/// Decides the dynamical preorder `f ≼ g` for a self-similar action.
///
/// Both functions push forward to the quotient graph, where the bounded
/// rewrite search runs; refutation produces a separating trace, either a
/// finite one from the trace cone or the `{0, ∞}`-valued trace of the
/// forced-finite vertex set.
pub fn precsim_graph(
    action: &SelfSimilarAction,
    f: &VertexFn,
    g: &VertexFn,
    budget: &SearchBudget,
) -> Result<PrecsimOutcome, super::action::ActionError> {
    let quotient = action.quotient_graph()?;
    let fq = action.pushforward(f);
    let gq = action.pushforward(g);
    Ok(precsim_quotient(&quotient, &fq, &gq, budget))
}

/// The quotient-side decision (use directly for a plain graph).
pub fn precsim_quotient(
    graph: &Graph,
    f: &VertexFn,
    g: &VertexFn,
    budget: &SearchBudget,
) -> PrecsimOutcome {
    let (found, report) = graph_search(graph, f, g, budget);
    if let Some(derivation) = found {
        return PrecsimOutcome::Proved { derivation };
    }
    // Refutation by a separating [0, ∞]-trace.  Vertices outside the
    // forced-finite closure of g carry ∞; that alone refutes when f touches
    // them, and otherwise the refutation reduces to the finite trace cone of
    // the closure-induced subgraph (complete relative to traces).
    let closure = vertex_ideal_closure(graph, g);
    if f.iter().enumerate().any(|(v, &c)| c > 0 && !closure[v]) {
        let trace = GraphTrace {
            values: (0..graph.n_vertices())
                .map(|v| if closure[v] { Value::zero() } else { Value::Infinite })
                .collect(),
        };
        debug_assert!(trace.satisfies(graph, true));
        return PrecsimOutcome::Refuted { trace };
    }
    let kept: Vec<usize> = (0..graph.n_vertices()).filter(|&v| closure[v]).collect();
    let sub = induced_subgraph(graph, &closure);
    let cone = graph_trace_cone(&sub);
    for ray in &cone.rays {
        let mut values = vec![Value::Infinite; graph.n_vertices()];
        for (i, &v) in kept.iter().enumerate() {
            values[v] = Value::Finite(ray[i].clone());
        }
        let trace = GraphTrace { values };
        debug_assert!(trace.satisfies(graph, true));
        if trace.eval(f).cmp_value(&trace.eval(g)) == std::cmp::Ordering::Greater {
            return PrecsimOutcome::Refuted { trace };
        }
    }
    PrecsimOutcome::Unknown { report }
}

/// Subgraph induced by a vertex subset; the closure property guarantees
/// every kept receiving vertex keeps all its feeders.
fn induced_subgraph(graph: &Graph, keep: &[bool]) -> Graph {
    let kept: Vec<usize> = (0..graph.n_vertices()).filter(|&v| keep[v]).collect();
    let new_index: HashMap<usize, usize> =
        kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut sub = Graph {
        vertices: kept.iter().map(|&v| graph.vertices[v].clone()).collect(),
        edges: Vec::new(),
    };
    for e in &graph.edges {
        if keep[e.s] && keep[e.r] {
            sub.add_edge(e.name.clone(), new_index[&e.s], new_index[&e.r]);
        }
    }
    sub
}

/// Least vertex set containing the support of `g`, closed under both
/// directions of the transfer relation `1_v == Θ(1_v)` (at receiving
/// vertices): if all sources feeding `v` are in, `v` is in, and conversely.
fn vertex_ideal_closure(graph: &Graph, g: &VertexFn) -> Vec<bool> {
    let n = graph.n_vertices();
    let mut in_f: Vec<bool> = (0..n).map(|v| g[v] > 0).collect();
    let receiving: Vec<bool> = (0..n).map(|v| graph.in_degree(v) > 0).collect();
    loop {
        let mut changed = false;
        for v in 0..n {
            if !receiving[v] {
                continue;
            }
            let feeders: Vec<usize> =
                graph.edges.iter().filter(|e| e.r == v).map(|e| e.s).collect();
            if in_f[v] {
                for &s in &feeders {
                    if !in_f[s] {
                        in_f[s] = true;
                        changed = true;
                    }
                }
            } else if feeders.iter().all(|&s| in_f[s]) {
                in_f[v] = true;
                changed = true;
            }
        }
        if !changed {
            return in_f;
        }
    }
}

/// Deterministic bounded search over quotient vertex functions.
fn graph_search(
    graph: &Graph,
    start: &VertexFn,
    goal: &VertexFn,
    budget: &SearchBudget,
) -> (Option<GraphDerivation>, BudgetReport) {
    let n = graph.n_vertices();
    let receiving: Vec<bool> = (0..n).map(|v| graph.in_degree(v) > 0).collect();
    let images: Vec<VertexFn> = (0..n).map(|v| theta(graph, &unit_fn(n, v))).collect();
    let mut report = BudgetReport::default();
    let mut parents: HashMap<VertexFn, Option<(VertexFn, GraphStep)>> = HashMap::new();
    let mut frontier: BTreeSet<(u64, VertexFn)> = BTreeSet::new();
    parents.insert(start.clone(), None);
    frontier.insert((start.iter().sum(), start.clone()));
    if start == goal {
        return (
            Some(GraphDerivation { start: start.clone(), steps: Vec::new(), end: goal.clone() }),
            report,
        );
    }
    while let Some((_, cur)) = frontier.pop_first() {
        if report.nodes_expanded >= budget.node_cap {
            report.node_cap_hit = true;
            return (None, report);
        }
        report.nodes_expanded += 1;
        let mut successors: Vec<(VertexFn, GraphStep)> = Vec::new();
        for v in 0..n {
            if receiving[v] && cur[v] > 0 {
                let mut next = cur.clone();
                next[v] -= 1;
                for (c, t) in next.iter_mut().zip(&images[v]) {
                    *c += t;
                }
                successors.push((next, GraphStep::Expand { vertex: v }));
            }
            if receiving[v] && images[v].iter().zip(&cur).all(|(t, c)| t <= c) {
                let mut next = cur.clone();
                for (c, t) in next.iter_mut().zip(&images[v]) {
                    *c -= t;
                }
                next[v] += 1;
                successors.push((next, GraphStep::Contract { vertex: v }));
            }
            let mut next = cur.clone();
            next[v] += 1;
            successors.push((next, GraphStep::Add { vertex: v }));
        }
        for (next, step) in successors {
            if next.iter().any(|&c| c > budget.coeff_cap) {
                report.coeff_cap_hit = true;
                continue;
            }
            if parents.contains_key(&next) {
                continue;
            }
            parents.insert(next.clone(), Some((cur.clone(), step)));
            if &next == goal {
                let mut steps = Vec::new();
                let mut walker = next.clone();
                while &walker != start {
                    let Some(Some((prev, step))) = parents.get(&walker) else { break };
                    steps.push(step.clone());
                    walker = prev.clone();
                }
                steps.reverse();
                return (
                    Some(GraphDerivation { start: start.clone(), steps, end: goal.clone() }),
                    report,
                );
            }
            frontier.insert((next.iter().sum(), next));
        }
    }
    report.exhausted = true;
    (None, report)
}

/// Exports the quotient-graph presentation: one generator per quotient
/// vertex, one equality `[w] == Σ_{r(e)=[w]} [s(e)]` per receiving vertex.
pub fn export_graph_presentation(
    action: &SelfSimilarAction,
) -> Result<(MonoidPresentation, Graph), super::action::ActionError> {
    let quotient = action.quotient_graph()?;
    let p = presentation_of_graph(&quotient);
    Ok((p, quotient))
}

/// The transfer presentation of a plain graph (receiving vertices only; for
/// graphs without sources that is every vertex).
pub fn presentation_of_graph(graph: &Graph) -> MonoidPresentation {
    let names: Vec<String> = graph.vertices.clone();
    let mut p = MonoidPresentation::new(names).expect("vertex names are unique");
    let n = graph.n_vertices();
    for v in 0..n {
        if graph.in_degree(v) == 0 {
            continue;
        }
        let image = theta(graph, &unit_fn(n, v));
        let rhs = Element { coeffs: image.clone() };
        p.relate(Element::unit(n, v), rhs, RelationKind::Eq);
    }
    p
}

/// Converts a vertex function to an element of the exported presentation.
pub fn element_of(f: &VertexFn) -> Element {
    Element { coeffs: f.clone() }
}
