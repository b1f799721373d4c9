//! Layered graphs: depth-truncated views of infinite graphs organized in
//! levels, their trace enclosures by exact polyhedral projection, and the
//! golden-ratio ladder with its exact ℚ(φ) trace.
//!
//! Edges run from level `n+1` or level `n` into level `n`.  Vertices of the
//! deepest modeled level are free boundary data; the trace identity is
//! imposed only at vertices whose incoming edges are fully modeled.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{fibonacci, int, Golden};
use crate::lp;
use crate::monoid::{Element, MonoidPresentation, RelationKind};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayeredVertex {
    /// 1-based level.
    pub level: usize,
    pub idx: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredEdge {
    pub from: LayeredVertex,
    pub to: LayeredVertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayeredError {
    BadLevel { from: usize, to: usize },
    VertexOutOfRange { level: usize, idx: usize },
    IntraLevelCycle { level: usize },
    DuplicateName(String),
    /// An interior vertex receives no edge from the next level.
    InteriorSource { level: usize, idx: usize },
    DepthOutOfRange { depth: usize, max: usize },
}

impl std::fmt::Display for LayeredError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LayeredError::BadLevel { from, to } => {
                write!(f, "edge must run from level {to} or {} into level {to}, got {from}", to + 1)
            }
            LayeredError::VertexOutOfRange { level, idx } => {
                write!(f, "no vertex {idx} at level {level}")
            }
            LayeredError::IntraLevelCycle { level } => {
                write!(f, "level {level} has a cycle among its own vertices")
            }
            LayeredError::DuplicateName(n) => write!(f, "duplicate vertex name `{n}`"),
            LayeredError::InteriorSource { level, idx } => {
                write!(f, "interior vertex {idx} at level {level} receives nothing from level {}", level + 1)
            }
            LayeredError::DepthOutOfRange { depth, max } => {
                write!(f, "depth {depth} exceeds the modeled {max} levels")
            }
        }
    }
}

impl std::error::Error for LayeredError {}

/// A finite stack of levels with downward edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGraph {
    pub levels: Vec<Vec<String>>,
    pub edges: Vec<LayeredEdge>,
}

impl LayeredGraph {
    pub fn validate(&self) -> Result<(), LayeredError> {
        let mut names = std::collections::HashSet::new();
        for level in &self.levels {
            for n in level {
                if !names.insert(n.clone()) {
                    return Err(LayeredError::DuplicateName(n.clone()));
                }
            }
        }
        for e in &self.edges {
            for v in [&e.from, &e.to] {
                if v.level == 0
                    || v.level > self.levels.len()
                    || v.idx >= self.levels[v.level - 1].len()
                {
                    return Err(LayeredError::VertexOutOfRange { level: v.level, idx: v.idx });
                }
            }
            if e.from.level != e.to.level && e.from.level != e.to.level + 1 {
                return Err(LayeredError::BadLevel { from: e.from.level, to: e.to.level });
            }
        }
        // Intra-level edges must be acyclic (level by level).
        for (li, level) in self.levels.iter().enumerate() {
            let l = li + 1;
            let n = level.len();
            let mut adj = vec![Vec::new(); n];
            for e in &self.edges {
                if e.from.level == l && e.to.level == l {
                    adj[e.from.idx].push(e.to.idx);
                }
            }
            if has_cycle(&adj) {
                return Err(LayeredError::IntraLevelCycle { level: l });
            }
        }
        Ok(())
    }

    /// Every vertex above the deepest level must receive at least one edge
    /// from the level below it.
    pub fn interior_no_sources(&self) -> Result<(), LayeredError> {
        for (li, level) in self.levels.iter().enumerate() {
            let l = li + 1;
            if l == self.levels.len() {
                break;
            }
            for idx in 0..level.len() {
                let fed = self.edges.iter().any(|e| {
                    e.to == LayeredVertex { level: l, idx } && e.from.level == l + 1
                });
                if !fed {
                    return Err(LayeredError::InteriorSource { level: l, idx });
                }
            }
        }
        Ok(())
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// Global index of a vertex in level-major order within a depth-`d`
    /// truncation.
    fn offset(&self, depth: usize) -> Vec<usize> {
        let mut offsets = vec![0usize; depth + 1];
        for l in 1..=depth {
            offsets[l] = offsets[l - 1] + self.levels[l - 1].len();
        }
        offsets
    }

    /// The depth-`d` truncation as a plain graph (level-major vertex order).
    pub fn truncate(&self, depth: usize) -> Result<super::Graph, LayeredError> {
        if depth == 0 || depth > self.levels.len() {
            return Err(LayeredError::DepthOutOfRange { depth, max: self.levels.len() });
        }
        let offsets = self.offset(depth);
        let mut names = Vec::new();
        for level in &self.levels[..depth] {
            names.extend(level.iter().cloned());
        }
        let mut g = super::Graph::new(names).expect("validated names");
        for (i, e) in self.edges.iter().enumerate() {
            if e.from.level <= depth && e.to.level <= depth {
                g.add_edge(
                    format!("e{i}"),
                    offsets[e.from.level - 1] + e.from.idx,
                    offsets[e.to.level - 1] + e.to.idx,
                );
            }
        }
        Ok(g)
    }

    /// The transfer presentation of the depth-`d` truncation: identities at
    /// the vertices of levels `1..d-1` (the deepest level is free boundary).
    pub fn presentation(&self, depth: usize) -> Result<MonoidPresentation, LayeredError> {
        let graph = self.truncate(depth)?;
        let offsets = self.offset(depth);
        let interior = offsets[depth - 1]; // vertices below this index are interior
        let n = graph.n_vertices();
        let mut p = MonoidPresentation::new(graph.vertices.clone()).expect("unique names");
        for v in 0..interior {
            let image = super::theta(&graph, &{
                let mut u = vec![0u64; n];
                u[v] = 1;
                u
            });
            p.relate(Element::unit(n, v), Element { coeffs: image }, RelationKind::Eq);
        }
        Ok(p)
    }
}

fn has_cycle(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let mut state = vec![0u8; n]; // 0 unseen, 1 active, 2 done
    fn visit(v: usize, adj: &[Vec<usize>], state: &mut Vec<u8>) -> bool {
        state[v] = 1;
        for &w in &adj[v] {
            if state[w] == 1 || (state[w] == 0 && visit(w, adj, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    (0..n).any(|v| state[v] == 0 && visit(v, adj, &mut state))
}

/// One depth of the enclosure: per level-1 vertex, exact bounds for its
/// trace value under the normalization "first level-1 vertex = 1".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnclosureStep {
    pub depth: usize,
    /// `(lo, hi)` per level-1 vertex; `None` means unbounded above.
    pub intervals: Vec<(Option<BigRational>, Option<BigRational>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEnclosure {
    pub level1_names: Vec<String>,
    pub steps: Vec<EnclosureStep>,
    /// Set when the normalized system became infeasible at this depth ("no
    /// trace within depth").
    pub infeasible_at: Option<usize>,
    /// Verified: each step's intervals contain the next step's.
    pub nested: bool,
}

/// Nested polyhedral enclosures of the level-1 trace values: for each depth
/// `2..=depth`, the trace identities of the fully modeled levels are
/// projected (exact elimination) onto the level-1 coordinates, normalized by
/// "first level-1 vertex = 1".
pub fn layered_trace_enclosure(
    layered: &LayeredGraph,
    depth: usize,
) -> Result<TraceEnclosure, LayeredError> {
    layered.validate()?;
    if depth == 0 || depth > layered.levels.len() {
        return Err(LayeredError::DepthOutOfRange { depth, max: layered.levels.len() });
    }
    let level1 = layered.levels[0].len();
    let mut steps = Vec::new();
    let mut infeasible_at = None;
    for d in 2..=depth {
        let sys = truncated_system(layered, d);
        if lp::feasible_point(&sys).is_err() {
            infeasible_at = Some(d);
            break;
        }
        let mut intervals = Vec::with_capacity(level1);
        for j in 0..level1 {
            let (lo, hi) = lp::project_interval(&sys, j)
                .unwrap_or((None, None));
            intervals.push((lo, hi));
        }
        steps.push(EnclosureStep { depth: d, intervals });
    }
    let nested = steps.windows(2).all(|w| {
        w[0].intervals.iter().zip(&w[1].intervals).all(|((lo0, hi0), (lo1, hi1))| {
            let lo_ok = match (lo0, lo1) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a <= b,
            };
            let hi_ok = match (hi0, hi1) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a >= b,
            };
            lo_ok && hi_ok
        })
    });
    Ok(TraceEnclosure {
        level1_names: layered.levels[0].clone(),
        steps,
        infeasible_at,
        nested,
    })
}

fn truncated_system(layered: &LayeredGraph, depth: usize) -> lp::System {
    let offsets = layered.offset(depth);
    let n_vars = offsets[depth];
    let interior = offsets[depth - 1];
    let mut sys = lp::System::new(n_vars);
    for v in 0..interior {
        let mut row = vec![BigRational::zero(); n_vars];
        row[v] += BigRational::one();
        for e in &layered.edges {
            if e.to.level > depth || e.from.level > depth {
                continue;
            }
            let to = offsets[e.to.level - 1] + e.to.idx;
            if to == v {
                let from = offsets[e.from.level - 1] + e.from.idx;
                row[from] -= BigRational::one();
            }
        }
        sys.push(lp::Constraint::eq(row, BigRational::zero()));
    }
    // Normalization: first level-1 vertex = 1.
    let mut norm = vec![BigRational::zero(); n_vars];
    norm[0] = BigRational::one();
    sys.push(lp::Constraint::eq(norm, BigRational::one()));
    sys
}

/// The golden-ratio ladder to the given depth: two vertices per level, with
/// `a`-vertices feeding both level-down vertices and the same-level `b`.
pub fn drunken_graph(depth: usize) -> LayeredGraph {
    assert!(depth >= 1);
    let levels: Vec<Vec<String>> =
        (1..=depth).map(|n| vec![format!("a{n}"), format!("b{n}")]).collect();
    let mut edges = Vec::new();
    for n in 1..=depth {
        // a_n -> b_n (same level).
        edges.push(LayeredEdge {
            from: LayeredVertex { level: n, idx: 0 },
            to: LayeredVertex { level: n, idx: 1 },
        });
        if n < depth {
            // a_{n+1} -> a_n, b_{n+1} -> a_n, b_{n+1} -> b_n.
            edges.push(LayeredEdge {
                from: LayeredVertex { level: n + 1, idx: 0 },
                to: LayeredVertex { level: n, idx: 0 },
            });
            edges.push(LayeredEdge {
                from: LayeredVertex { level: n + 1, idx: 1 },
                to: LayeredVertex { level: n, idx: 0 },
            });
            edges.push(LayeredEdge {
                from: LayeredVertex { level: n + 1, idx: 1 },
                to: LayeredVertex { level: n, idx: 1 },
            });
        }
    }
    let g = LayeredGraph { levels, edges };
    debug_assert!(g.validate().is_ok() && g.interior_no_sources().is_ok());
    g
}

/// The exact ℚ(φ) trace of the ladder with `a₁ = φ⁻¹`.
#[derive(Clone, Debug)]
pub struct DrunkenTrace {
    pub depth: usize,
    pub a: Vec<Golden>,
    pub b: Vec<Golden>,
    /// Tail sums `S_k = Σ_{2 ≤ n ≤ k} (a_n + b_n)`: the total mass strictly
    /// below level 1, which increases to `a₁·φ = 1` exactly (the full-graph
    /// total including level 1 is `a₁·φ³`).  Indexed so that
    /// `partial_sums[k-1] = S_k`, with `S_1 = 0`.
    pub partial_sums: Vec<Golden>,
}

impl DrunkenTrace {
    /// Trace identity at every interior vertex, exactly.
    pub fn identities_hold(&self) -> bool {
        (0..self.depth - 1).all(|i| {
            // a_n = a_{n+1} + b_{n+1} and b_n = a_n + b_{n+1}.
            self.a[i] == self.a[i + 1].clone() + self.b[i + 1].clone()
                && self.b[i] == self.a[i].clone() + self.b[i + 1].clone()
        })
    }

    pub fn strictly_positive(&self) -> bool {
        self.a.iter().chain(&self.b).all(|v| v.signum() == 1)
    }

    /// The closed forms `a_{n+1} = F_{2n+1}·a₁ − F_{2n}·b₁` and
    /// `b_{n+1} = F_{2n−1}·b₁ − F_{2n}·a₁`, exactly.
    pub fn fibonacci_forms_hold(&self) -> bool {
        let a1 = &self.a[0];
        let b1 = &self.b[0];
        (1..self.depth).all(|n| {
            let fib = |k: usize| Golden::from_rational(BigRational::from(fibonacci(k)));
            self.a[n] == fib(2 * n + 1) * a1.clone() - fib(2 * n) * b1.clone()
                && self.b[n] == fib(2 * n - 1) * b1.clone() - fib(2 * n) * a1.clone()
        })
    }
}

pub fn drunken_trace(depth: usize) -> DrunkenTrace {
    assert!(depth >= 1);
    let a1 = Golden::phi_inv();
    let b1 = Golden::one();
    let mut a = vec![a1];
    let mut b = vec![b1];
    for n in 1..depth {
        let an = a[n - 1].clone();
        let bn = b[n - 1].clone();
        // b_{n+1} = b_n − a_n, a_{n+1} = 2·a_n − b_n.
        b.push(bn.clone() - an.clone());
        a.push(Golden::from_rational(int(2)) * an - bn);
    }
    let mut partial_sums = Vec::with_capacity(depth);
    let mut acc = Golden::zero();
    partial_sums.push(acc.clone());
    for n in 1..depth {
        acc = acc + a[n].clone() + b[n].clone();
        partial_sums.push(acc.clone());
    }
    DrunkenTrace { depth, a, b, partial_sums }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn ladder_shape() {
        let g = drunken_graph(3);
        assert_eq!(g.n_levels(), 3);
        let flat = g.truncate(3).unwrap();
        assert_eq!(flat.n_vertices(), 6);
        // b1 receives a1 and b2; a1 receives a2 and b2.
        assert_eq!(flat.in_degree(1), 2);
        assert_eq!(flat.in_degree(0), 2);
        // The truncation is acyclic.
        assert!(crate::graph::cycles_with_entrance(&flat, 10).unwrap().is_empty());
    }

    #[test]
    fn first_recurrence_step() {
        // a₂ = 2a₁ − b₁ and b₂ = b₁ − a₁ in ℚ(φ).
        let t = drunken_trace(2);
        let a1 = Golden::phi_inv();
        let b1 = Golden::one();
        assert_eq!(t.a[1], Golden::from_rational(int(2)) * a1.clone() - b1.clone());
        assert_eq!(t.b[1], b1 - a1);
        assert!(t.identities_hold());
        assert!(t.strictly_positive());
        assert!(t.fibonacci_forms_hold());
    }

    #[test]
    fn interval_chain_brackets_the_ratio() {
        // With a₁ = 1 the enclosure brackets b₁ between F_{2n}/F_{2n−1} and
        // F_{2n+1}/F_{2n}; at depth 2 that is [1, 2].
        let g = drunken_graph(4);
        let enc = layered_trace_enclosure(&g, 4).unwrap();
        assert!(enc.nested);
        assert!(enc.infeasible_at.is_none());
        let first = &enc.steps[0];
        assert_eq!(first.depth, 2);
        assert_eq!(first.intervals[0], (Some(int(1)), Some(int(1))));
        assert_eq!(first.intervals[1], (Some(int(1)), Some(int(2))));
        // Depth 3: [F4/F3, F5/F4] = [3/2, 5/3].
        let second = &enc.steps[1];
        assert_eq!(second.intervals[1], (Some(rat(3, 2)), Some(rat(5, 3))));
    }

    #[test]
    fn constant_ladder_is_degenerate() {
        // One vertex per level, a single chain of edges: T is constant.
        let levels: Vec<Vec<String>> = (1..=3).map(|n| vec![format!("v{n}")]).collect();
        let edges: Vec<LayeredEdge> = (1..3)
            .map(|n| LayeredEdge {
                from: LayeredVertex { level: n + 1, idx: 0 },
                to: LayeredVertex { level: n, idx: 0 },
            })
            .collect();
        let g = LayeredGraph { levels, edges };
        g.validate().unwrap();
        let enc = layered_trace_enclosure(&g, 3).unwrap();
        for step in &enc.steps {
            assert_eq!(step.intervals[0], (Some(int(1)), Some(int(1))));
        }
    }

    #[test]
    fn zero_forced_truncation_reports_infeasible_level() {
        // Level 2's vertex receives nothing from level 3 (an interior
        // source): at depth 3 its identity forces 0, killing the
        // normalization.
        let levels: Vec<Vec<String>> =
            vec![vec!["u".into()], vec!["x".into()], vec!["y".into()]];
        let edges = vec![LayeredEdge {
            from: LayeredVertex { level: 2, idx: 0 },
            to: LayeredVertex { level: 1, idx: 0 },
        }];
        let g = LayeredGraph { levels, edges };
        g.validate().unwrap();
        assert!(g.interior_no_sources().is_err());
        let enc = layered_trace_enclosure(&g, 3).unwrap();
        assert_eq!(enc.infeasible_at, Some(3));
        assert_eq!(enc.steps.len(), 1); // depth 2 was still feasible
    }

    #[test]
    fn tail_sums_increase_towards_one() {
        let t = drunken_trace(10);
        let one = Golden::one();
        for w in t.partial_sums.windows(2) {
            assert!(w[0] < w[1]);
        }
        for s in &t.partial_sums[1..] {
            assert!(*s > Golden::zero());
            assert!(*s < one);
        }
        // The gap to 1 shrinks below the coarse bound φ^{-2k+4}.
        let gap = one - t.partial_sums.last().unwrap().clone();
        assert_eq!(gap.signum(), 1);
    }

    #[test]
    fn exported_presentation_keeps_boundary_free() {
        let g = drunken_graph(3);
        let p = g.presentation(3).unwrap();
        // Interior vertices: levels 1 and 2 → four relations.
        assert_eq!(p.relations.len(), 4);
        assert_eq!(p.generators.len(), 6);
    }
}
