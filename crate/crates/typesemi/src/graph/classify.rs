//! The dichotomy classifier: purely infinite versus stably finite, at the
//! combinatorial level.
//!
//! The classifier decides the combinatorial hypotheses only — cofinality of
//! the quotient graph (the minimality surrogate) and the entrance condition
//! on its cycles (the topological-freeness surrogate).  Operator-algebraic
//! simplicity itself is *not* decided; reports say so explicitly.

use super::action::ActionError;
use super::layered::{layered_trace_enclosure, LayeredError, LayeredGraph, TraceEnclosure};
use super::trace::graph_trace_cone;
use super::{cycles_with_entrance, is_cofinal, CycleInfo, Graph, GraphError, SelfSimilarAction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DichotomyVerdict {
    PurelyInfinite,
    StablyFinite,
    NotApplicable,
}

impl std::fmt::Display for DichotomyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DichotomyVerdict::PurelyInfinite => write!(f, "PURELY_INFINITE"),
            DichotomyVerdict::StablyFinite => write!(f, "STABLY_FINITE"),
            DichotomyVerdict::NotApplicable => write!(f, "NOT_APPLICABLE"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum DichotomyWitness {
    CycleWithEntrance(CycleInfo),
    /// A nontrivial exact trace ray on the quotient (finite graphs).
    TraceRay(Vec<num_rational::BigRational>),
    /// Nested interval enclosure of the level-1 trace (layered graphs).
    Enclosure(TraceEnclosure),
    FailedPrecondition(String),
}

#[derive(Clone, Debug)]
pub struct DichotomyReport {
    /// The quotient graph the classification ran on (the graph itself for a
    /// trivial action; the depth-truncation for layered inputs).
    pub quotient: Graph,
    /// `Ok(())` when cofinal, `Err((component vertex, unreaching vertex))`
    /// otherwise.  `None` for layered inputs (checked at the infinite level
    /// by construction, not at the truncation, whose boundary has sources).
    pub cofinal: Option<Result<(), (usize, usize)>>,
    pub cycles: Vec<CycleInfo>,
    pub verdict: DichotomyVerdict,
    pub witness: DichotomyWitness,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum ClassifyError {
    Graph(GraphError),
    Action(ActionError),
    Layered(LayeredError),
}

impl std::fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassifyError::Graph(e) => write!(f, "{e}"),
            ClassifyError::Action(e) => write!(f, "{e}"),
            ClassifyError::Layered(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ClassifyError {}

const CYCLE_CAP: usize = 10_000;

/// Classifies a finite graph (trivial action).
pub fn classify_graph(graph: &Graph) -> Result<DichotomyReport, ClassifyError> {
    if !graph.has_no_sources() {
        return Err(ClassifyError::Graph(GraphError::HasSources(graph.sources())));
    }
    let cofinal = is_cofinal(graph).map_err(ClassifyError::Graph)?;
    let cycles = cycles_with_entrance(graph, CYCLE_CAP).map_err(ClassifyError::Graph)?;
    let mut notes = vec![
        "combinatorial level only: operator-algebraic simplicity is not decided".into(),
    ];
    let (verdict, witness) = if let Err((component, vertex)) = cofinal {
        (
            DichotomyVerdict::NotApplicable,
            DichotomyWitness::FailedPrecondition(format!(
                "not cofinal: vertex `{}` cannot reach the cycle component of `{}`",
                graph.vertices[vertex], graph.vertices[component]
            )),
        )
    } else if let Some(bad) = cycles.iter().find(|c| !c.has_entrance) {
        notes.push(
            "a cycle without an entrance makes every vertex class equivalent: the type \
             semigroup is the natural numbers and carries a finite faithful state"
                .into(),
        );
        (
            DichotomyVerdict::NotApplicable,
            DichotomyWitness::FailedPrecondition(format!(
                "cycle without entrance through `{}`",
                graph.vertices[bad.vertices[0]]
            )),
        )
    } else if !cycles.is_empty() {
        (DichotomyVerdict::PurelyInfinite, DichotomyWitness::CycleWithEntrance(cycles[0].clone()))
    } else {
        // Finite graphs without sources always contain a cycle; this branch
        // is reachable only through future input kinds, kept for totality.
        let cone = graph_trace_cone(graph);
        match cone.rays.first() {
            Some(ray) => {
                (DichotomyVerdict::StablyFinite, DichotomyWitness::TraceRay(ray.clone()))
            }
            None => (
                DichotomyVerdict::NotApplicable,
                DichotomyWitness::FailedPrecondition("acyclic but no trace".into()),
            ),
        }
    };
    Ok(DichotomyReport { quotient: graph.clone(), cofinal: Some(cofinal), cycles, verdict, witness, notes })
}

/// Classifies a self-similar action through its quotient graph.
pub fn classify_action(action: &SelfSimilarAction) -> Result<DichotomyReport, ClassifyError> {
    let quotient = action.quotient_graph().map_err(ClassifyError::Action)?;
    classify_graph(&quotient)
}

/// Classifies a layered (depth-truncated) graph: always acyclic, so the
/// verdict is stably finite exactly when a trace within the modeled depth
/// exists, witnessed by the interval enclosure.
pub fn classify_layered(
    layered: &LayeredGraph,
    depth: usize,
) -> Result<DichotomyReport, ClassifyError> {
    layered.validate().map_err(ClassifyError::Layered)?;
    let truncation = layered.truncate(depth).map_err(ClassifyError::Layered)?;
    let cycles = cycles_with_entrance(&truncation, CYCLE_CAP).map_err(ClassifyError::Graph)?;
    let mut notes = vec![
        "combinatorial level only: operator-algebraic simplicity is not decided".into(),
        "layered input: cofinality concerns the infinite graph and is not checked at the \
         truncation (whose boundary level receives nothing)"
            .into(),
    ];
    debug_assert!(cycles.is_empty(), "layered graphs are acyclic by level discipline");
    if let Err(e) = layered.interior_no_sources() {
        notes.push(format!("warning: {e}"));
    }
    let enclosure = layered_trace_enclosure(layered, depth).map_err(ClassifyError::Layered)?;
    let (verdict, witness) = match enclosure.infeasible_at {
        None => (DichotomyVerdict::StablyFinite, DichotomyWitness::Enclosure(enclosure)),
        Some(level) => (
            DichotomyVerdict::NotApplicable,
            DichotomyWitness::FailedPrecondition(format!(
                "no trace within the modeled depth: infeasible at level {level}"
            )),
        ),
    };
    Ok(DichotomyReport { quotient: truncation, cofinal: None, cycles, verdict, witness, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::action::tests::swap_two_loops;
    use crate::graph::tests::loops;
    use crate::graph::{drunken_graph, Group};

    #[test]
    fn multi_loop_vertex_is_purely_infinite() {
        let report = classify_graph(&loops(2)).unwrap();
        assert_eq!(report.verdict, DichotomyVerdict::PurelyInfinite);
        assert!(matches!(report.witness, DichotomyWitness::CycleWithEntrance(_)));
    }

    #[test]
    fn ladder_is_stably_finite_with_enclosure() {
        let g = drunken_graph(6);
        let report = classify_layered(&g, 6).unwrap();
        assert_eq!(report.verdict, DichotomyVerdict::StablyFinite);
        match report.witness {
            DichotomyWitness::Enclosure(enc) => {
                assert!(enc.nested);
                assert!(enc.infeasible_at.is_none());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lone_cycle_is_not_applicable() {
        // A simple 3-cycle has no entrance.
        let mut g = Graph::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        g.add_edge("e1", 0, 1);
        g.add_edge("e2", 1, 2);
        g.add_edge("e3", 2, 0);
        let report = classify_graph(&g).unwrap();
        assert_eq!(report.verdict, DichotomyVerdict::NotApplicable);
        match &report.witness {
            DichotomyWitness::FailedPrecondition(msg) => {
                assert!(msg.contains("cycle without entrance"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(report.notes.iter().any(|n| n.contains("natural numbers")));
    }

    #[test]
    fn swapped_loops_quotient_to_a_lone_loop() {
        let action = swap_two_loops();
        let report = classify_action(&action).unwrap();
        assert_eq!(report.verdict, DichotomyVerdict::NotApplicable);
        assert_eq!(report.quotient.n_vertices(), 1);
        assert_eq!(report.quotient.edges.len(), 1);
    }

    #[test]
    fn component_swap_quotients_to_multi_loop() {
        // Two disjoint 2-loop components swapped freely by ℤ/2.
        let mut g = Graph::new(vec!["v1".into(), "v2".into()]).unwrap();
        g.add_edge("a1", 0, 0);
        g.add_edge("a2", 0, 0);
        g.add_edge("b1", 1, 1);
        g.add_edge("b2", 1, 1);
        let action = SelfSimilarAction {
            group: Group::z2(),
            graph: g,
            vertex_action: vec![vec![0, 1], vec![1, 0]],
            edge_action: vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]],
            cocycle: vec![vec![0; 4], vec![1; 4]],
        };
        action.validate().unwrap();
        let report = classify_action(&action).unwrap();
        assert_eq!(report.quotient.n_vertices(), 1);
        assert_eq!(report.quotient.edges.len(), 2);
        assert_eq!(report.verdict, DichotomyVerdict::PurelyInfinite);
    }

    #[test]
    fn non_cofinal_graph_is_not_applicable() {
        let mut g = Graph::new(vec!["u".into(), "w".into()]).unwrap();
        g.add_edge("a", 0, 0);
        g.add_edge("b", 1, 1);
        let report = classify_graph(&g).unwrap();
        assert_eq!(report.verdict, DichotomyVerdict::NotApplicable);
        match &report.witness {
            DichotomyWitness::FailedPrecondition(msg) => assert!(msg.contains("not cofinal")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
