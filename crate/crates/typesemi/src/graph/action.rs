//! Self-similar group actions on directed graphs: a finite group acting by
//! graph automorphisms with a restriction cocycle, and the quotient graph.

use std::fmt;

use super::{Graph, GraphError};

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub elements: Vec<String>,
    /// `mul[g][h]` is the index of `g·h`.
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionError {
    Group(String),
    NotAPermutation { group_element: usize, what: &'static str },
    NotAnAction { law: String },
    NotAutomorphism { law: String },
    CocycleLaw { law: String },
    Graph(GraphError),
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::Group(s) => write!(f, "invalid group table: {s}"),
            ActionError::NotAPermutation { group_element, what } => {
                write!(f, "group element {group_element} does not permute the {what}")
            }
            ActionError::NotAnAction { law } => write!(f, "action law fails: {law}"),
            ActionError::NotAutomorphism { law } => {
                write!(f, "graph automorphism law fails: {law}")
            }
            ActionError::CocycleLaw { law } => write!(f, "cocycle law fails: {law}"),
            ActionError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ActionError {}

impl Group {
    pub fn new(elements: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        let n = elements.len();
        if n == 0 {
            return Err(ActionError::Group("empty element list".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(ActionError::Group("multiplication table is not n x n".into()));
        }
        if mul.iter().flatten().any(|&v| v >= n) {
            return Err(ActionError::Group("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| ActionError::Group("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(ActionError::Group(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| mul[a][b] == identity) {
                return Err(ActionError::Group(format!("element {a} has no inverse")));
            }
        }
        Ok(Group { elements, mul, identity })
    }

    /// The trivial group.
    pub fn trivial() -> Group {
        Group { elements: vec!["e".into()], mul: vec![vec![0]], identity: 0 }
    }

    /// The two-element group.
    pub fn z2() -> Group {
        Group::new(vec!["e".into(), "s".into()], vec![vec![0, 1], vec![1, 0]]).expect("valid")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// A self-similar action: the group permutes vertices and edges compatibly,
/// and the restriction cocycle rewrites group elements along edges.
#[derive(Clone, Debug)]
pub struct SelfSimilarAction {
    pub group: Group,
    pub graph: Graph,
    /// `vertex_action[g][v]` = `g·v`.
    pub vertex_action: Vec<Vec<usize>>,
    /// `edge_action[g][e]` = `g·e`.
    pub edge_action: Vec<Vec<usize>>,
    /// `cocycle[g][e]` = `g|_e`.
    pub cocycle: Vec<Vec<usize>>,
}

impl SelfSimilarAction {
    /// The trivial action of the trivial group on a graph.
    pub fn trivial(graph: Graph) -> SelfSimilarAction {
        let nv = graph.n_vertices();
        let ne = graph.edges.len();
        SelfSimilarAction {
            group: Group::trivial(),
            vertex_action: vec![(0..nv).collect()],
            edge_action: vec![(0..ne).collect()],
            cocycle: vec![vec![0; ne]],
            graph,
        }
    }

    /// Validates the permutation, action, automorphism, and cocycle laws.
    /// Violations name the law instance.
    pub fn validate(&self) -> Result<(), ActionError> {
        let n = self.group.order();
        let nv = self.graph.n_vertices();
        let ne = self.graph.edges.len();
        if self.vertex_action.len() != n || self.edge_action.len() != n || self.cocycle.len() != n
        {
            return Err(ActionError::Group("action tables have the wrong length".into()));
        }
        for g in 0..n {
            if !is_permutation(&self.vertex_action[g], nv) {
                return Err(ActionError::NotAPermutation { group_element: g, what: "vertices" });
            }
            if !is_permutation(&self.edge_action[g], ne) {
                return Err(ActionError::NotAPermutation { group_element: g, what: "edges" });
            }
            if self.cocycle[g].len() != ne || self.cocycle[g].iter().any(|&h| h >= n) {
                return Err(ActionError::Group("cocycle table out of range".into()));
            }
        }
        let e_id = self.group.identity;
        for v in 0..nv {
            if self.vertex_action[e_id][v] != v {
                return Err(ActionError::NotAnAction { law: format!("1·{v} = {v}") });
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul[g][h];
                for v in 0..nv {
                    if self.vertex_action[gh][v] != self.vertex_action[g][self.vertex_action[h][v]]
                    {
                        return Err(ActionError::NotAnAction {
                            law: format!("(g h)·v = g·(h·v) at g={g}, h={h}, v={v}"),
                        });
                    }
                }
                for e in 0..ne {
                    if self.edge_action[gh][e] != self.edge_action[g][self.edge_action[h][e]] {
                        return Err(ActionError::NotAnAction {
                            law: format!("(g h)·e = g·(h·e) at g={g}, h={h}, e={e}"),
                        });
                    }
                }
            }
        }
        for g in 0..n {
            for (e, edge) in self.graph.edges.iter().enumerate() {
                let ge = &self.graph.edges[self.edge_action[g][e]];
                if ge.r != self.vertex_action[g][edge.r] {
                    return Err(ActionError::NotAutomorphism {
                        law: format!("r(g·e) = g·r(e) at g={g}, e={e}"),
                    });
                }
                if ge.s != self.vertex_action[g][edge.s] {
                    return Err(ActionError::NotAutomorphism {
                        law: format!("s(g·e) = g·s(e) at g={g}, e={e}"),
                    });
                }
            }
        }
        // (g h)|_e = g|_{h·e} · h|_e  and  g|_e · s(e) = g · s(e).
        for g in 0..n {
            for h in 0..n {
                for e in 0..ne {
                    let gh = self.group.mul[g][h];
                    let lhs = self.cocycle[gh][e];
                    let rhs = self.group.mul[self.cocycle[g][self.edge_action[h][e]]]
                        [self.cocycle[h][e]];
                    if lhs != rhs {
                        return Err(ActionError::CocycleLaw {
                            law: format!("(gh)|_e = g|_{{he}} h|_e at g={g}, h={h}, e={e}"),
                        });
                    }
                }
            }
        }
        for g in 0..n {
            for (e, edge) in self.graph.edges.iter().enumerate() {
                let via_restriction = self.vertex_action[self.cocycle[g][e]][edge.s];
                let direct = self.vertex_action[g][edge.s];
                if via_restriction != direct {
                    return Err(ActionError::CocycleLaw {
                        law: format!("g|_e s(e) = g s(e) at g={g}, e={e}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Vertex orbit index per vertex, and the orbits.
    pub fn vertex_orbits(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        orbits_of(&self.vertex_action, self.graph.n_vertices())
    }

    pub fn edge_orbits(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        orbits_of(&self.edge_action, self.graph.edges.len())
    }

    /// The quotient graph: orbit vertices and orbit edges with the descended
    /// source and range maps.  The action must validate first.
    pub fn quotient_graph(&self) -> Result<Graph, ActionError> {
        self.validate()?;
        let (v_idx, v_orbits) = self.vertex_orbits();
        let (e_idx, e_orbits) = self.edge_orbits();
        let names: Vec<String> = v_orbits
            .iter()
            .map(|orbit| self.graph.vertices[orbit[0]].clone())
            .collect();
        let mut q = Graph::new(names).map_err(ActionError::Graph)?;
        for orbit in &e_orbits {
            let rep = &self.graph.edges[orbit[0]];
            let _ = &e_idx;
            q.add_edge(rep.name.clone(), v_idx[rep.s], v_idx[rep.r]);
        }
        Ok(q)
    }

    /// Pushforward of a vertex function to the quotient: sums over orbits.
    pub fn pushforward(&self, f: &super::VertexFn) -> super::VertexFn {
        let (v_idx, v_orbits) = self.vertex_orbits();
        let mut out = vec![0u64; v_orbits.len()];
        for (v, &val) in f.iter().enumerate() {
            out[v_idx[v]] += val;
        }
        out
    }
}

fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn orbits_of(action: &[Vec<usize>], n: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut orbit_index = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if orbit_index[start] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = action.iter().map(|perm| perm[start]).collect();
        members.push(start);
        members.sort_unstable();
        members.dedup();
        let idx = orbits.len();
        for &m in &members {
            orbit_index[m] = idx;
        }
        orbits.push(members);
    }
    (orbit_index, orbits)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// ℤ/2 swapping two fixed single loops.
    pub(crate) fn swap_two_loops() -> SelfSimilarAction {
        let mut g = Graph::new(vec!["u".into(), "w".into()]).unwrap();
        g.add_edge("lu", 0, 0);
        g.add_edge("lw", 1, 1);
        SelfSimilarAction {
            group: Group::z2(),
            graph: g,
            vertex_action: vec![vec![0, 1], vec![1, 0]],
            edge_action: vec![vec![0, 1], vec![1, 0]],
            cocycle: vec![vec![0, 0], vec![1, 1]],
        }
    }

    #[test]
    fn trivial_action_quotient_is_identity() {
        let g = super::super::tests::loops(2);
        let a = SelfSimilarAction::trivial(g.clone());
        a.validate().unwrap();
        let q = a.quotient_graph().unwrap();
        assert_eq!(q.n_vertices(), 1);
        assert_eq!(q.edges.len(), 2);
    }

    #[test]
    fn swap_action_validates_and_quotients() {
        let a = swap_two_loops();
        a.validate().unwrap();
        let q = a.quotient_graph().unwrap();
        assert_eq!(q.n_vertices(), 1);
        assert_eq!(q.edges.len(), 1);
    }

    #[test]
    fn broken_cocycle_is_named() {
        let mut a = swap_two_loops();
        // (s·s)|_e must equal s|_{s·e} s|_e = s·s = e; break it.
        a.cocycle[0][0] = 1;
        let err = a.validate().unwrap_err();
        match err {
            ActionError::CocycleLaw { law } => assert!(law.contains("(gh)|_e")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn swapped_double_loops_on_one_vertex() {
        // One vertex, two loops swapped by ℤ/2 with trivial cocycle.
        let g = super::super::tests::loops(2);
        let a = SelfSimilarAction {
            group: Group::z2(),
            graph: g,
            vertex_action: vec![vec![0], vec![0]],
            edge_action: vec![vec![0, 1], vec![1, 0]],
            cocycle: vec![vec![0, 0], vec![0, 0]],
        };
        a.validate().unwrap();
        let q = a.quotient_graph().unwrap();
        assert_eq!(q.n_vertices(), 1);
        assert_eq!(q.edges.len(), 1);
    }
}
