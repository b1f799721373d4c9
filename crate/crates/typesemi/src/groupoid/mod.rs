//! Finite ample groupoid models: an inverse semigroup of partial bijections
//! acting on a finite point set.
//!
//! A model stores the closure of its generators under composition and
//! inverse, together with the idempotent-domain lattice (closed under union
//! and intersection).  Restrictions of stored bisections to lattice opens
//! belong to the modelled inverse semigroup and are enumerated on demand;
//! the decision procedures quantify over them without materializing each
//! one.  The groupoid itself is the groupoid of germs: two bisections give
//! the same arrow at a point exactly when they agree on its minimal open
//! neighbourhood.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::lattice::{points, FiniteSpace, Mask};

pub mod structure;
pub mod typesg;

pub use structure::{
    invariant_subsets_and_ideals, invariant_weight_cone, restrict_to_invariant, sigma_map,
    stabilize, InvariantOpenReport, Stabilized, WeightCone,
};
pub use typesg::{export_presentation, precsim_b, precsim_criterion, sim_g, BFunction};

/// A partial bijection on `{0, …, n−1}`, stored as sorted `(source, target)`
/// pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BijectionError {
    NotFunctional { source: usize },
    NotInjective { target: usize },
    PointOutOfRange { point: usize },
}

impl fmt::Display for BijectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BijectionError::NotFunctional { source } => {
                write!(f, "source {source} has two images")
            }
            BijectionError::NotInjective { target } => {
                write!(f, "target {target} has two preimages")
            }
            BijectionError::PointOutOfRange { point } => write!(f, "point {point} out of range"),
        }
    }
}

impl std::error::Error for BijectionError {}

impl PartialBijection {
    pub fn new(mut pairs: Vec<(usize, usize)>, n_points: usize) -> Result<Self, BijectionError> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut sources = HashSet::new();
        let mut targets = HashSet::new();
        for &(s, t) in &pairs {
            if s >= n_points || t >= n_points {
                return Err(BijectionError::PointOutOfRange { point: s.max(t) });
            }
            if !sources.insert(s) {
                return Err(BijectionError::NotFunctional { source: s });
            }
            if !targets.insert(t) {
                return Err(BijectionError::NotInjective { target: t });
            }
        }
        Ok(PartialBijection { pairs })
    }

    pub fn empty() -> Self {
        PartialBijection { pairs: Vec::new() }
    }

    pub fn identity(mask: Mask) -> Self {
        PartialBijection { pairs: points(mask).map(|p| (p, p)).collect() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dom(&self) -> Mask {
        self.pairs.iter().fold(0, |m, &(s, _)| m | (1 << s))
    }

    pub fn ran(&self) -> Mask {
        self.pairs.iter().fold(0, |m, &(_, t)| m | (1 << t))
    }

    pub fn apply(&self, p: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(s, _)| s == p).map(|&(_, t)| t)
    }

    /// Image of a set of points.
    pub fn image(&self, mask: Mask) -> Mask {
        self.pairs
            .iter()
            .filter(|&&(s, _)| mask & (1 << s) != 0)
            .fold(0, |m, &(_, t)| m | (1 << t))
    }

    pub fn inverse(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(s, t)| (t, s)).collect();
        pairs.sort_unstable();
        PartialBijection { pairs }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut pairs = Vec::new();
        for &(s, mid) in &other.pairs {
            if let Some(t) = self.apply(mid) {
                pairs.push((s, t));
            }
        }
        pairs.sort_unstable();
        PartialBijection { pairs }
    }

    /// Restriction to sources in `mask`.
    pub fn restrict_source(&self, mask: Mask) -> Self {
        PartialBijection {
            pairs: self.pairs.iter().copied().filter(|&(s, _)| mask & (1 << s) != 0).collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.pairs.iter().all(|&(s, t)| s == t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureError {
    CapExceeded { cap: usize },
    Bijection(BijectionError),
}

impl fmt::Display for ClosureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureError::CapExceeded { cap } => {
                write!(f, "inverse semigroup closure exceeded the cap of {cap}")
            }
            ClosureError::Bijection(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ClosureError {}

/// A finite groupoid model: the closed inverse semigroup of partial
/// bijections and the idempotent-domain lattice it induces.
#[derive(Clone, Debug)]
pub struct GroupoidModel {
    n_points: usize,
    generators: Vec<PartialBijection>,
    bisections: Vec<PartialBijection>,
    space: FiniteSpace,
}

/// Closes the generators under composition and inverse (budgeted), then
/// closes the idempotent domains under union and intersection.
pub fn close_inverse_semigroup(
    n_points: usize,
    generators: &[PartialBijection],
    cap: usize,
) -> Result<GroupoidModel, ClosureError> {
    let mut set: BTreeSet<PartialBijection> = BTreeSet::new();
    for g in generators {
        set.insert(g.clone());
        set.insert(g.inverse());
    }
    loop {
        let snapshot: Vec<PartialBijection> = set.iter().cloned().collect();
        let before = set.len();
        for a in &snapshot {
            for b in &snapshot {
                let c = a.compose(b);
                if !c.is_empty() {
                    set.insert(c);
                }
            }
        }
        if set.len() > cap {
            return Err(ClosureError::CapExceeded { cap });
        }
        if set.len() == before {
            break;
        }
    }
    let idem_domains: Vec<Mask> =
        set.iter().filter(|w| w.is_idempotent()).map(|w| w.dom()).collect();
    let space = FiniteSpace::from_generators(n_points, &idem_domains)
        .expect("point count verified by the bijections");
    Ok(GroupoidModel {
        n_points,
        generators: generators.to_vec(),
        bisections: set.into_iter().collect(),
        space,
    })
}

impl GroupoidModel {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn generators(&self) -> &[PartialBijection] {
        &self.generators
    }

    /// The stored closure (restrictions to lattice opens are implied members
    /// and enumerated on demand).
    pub fn bisections(&self) -> &[PartialBijection] {
        &self.bisections
    }

    /// The arrows with source `p`: distinct germs of stored bisections at
    /// `p`, plus the unit.  Two bisections have the same germ exactly when
    /// they agree on the minimal neighbourhood of `p`.
    pub fn germs_at(&self, p: usize) -> Vec<PartialBijection> {
        let nbhd = self.space.min_nbhd(p);
        let mut germs: BTreeSet<PartialBijection> = BTreeSet::new();
        germs.insert(PartialBijection::identity(nbhd));
        for w in &self.bisections {
            if w.dom() & (1 << p) != 0 {
                debug_assert!(nbhd & !w.dom() == 0, "min nbhd sits inside every open domain");
                germs.insert(w.restrict_source(nbhd));
            }
        }
        germs.into_iter().collect()
    }

    /// Orbit partition of the points under the stored bisections.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n_points).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for w in &self.bisections {
            for &(s, t) in w.pairs() {
                let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
                if rs != rt {
                    parent[rs] = rt;
                }
            }
        }
        let mut buckets: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in 0..self.n_points {
            let r = find(&mut parent, x);
            buckets.entry(r).or_default().push(x);
        }
        let mut orbits: Vec<Vec<usize>> = buckets.into_values().collect();
        orbits.sort();
        orbits
    }

    /// Orbit index per point.
    pub fn orbit_of(&self) -> Vec<usize> {
        let orbits = self.orbits();
        let mut idx = vec![0; self.n_points];
        for (i, orbit) in orbits.iter().enumerate() {
            for &p in orbit {
                idx[p] = i;
            }
        }
        idx
    }

    /// Invariant opens of the generated topology (unions of orbits that are
    /// open).
    pub fn invariant_opens(&self) -> Vec<Mask> {
        let orbits = self.orbits();
        let mut result = Vec::new();
        for sel in 0..(1u64 << orbits.len()) {
            let mut mask = 0u64;
            for (i, orbit) in orbits.iter().enumerate() {
                if sel & (1 << i) != 0 {
                    for &p in orbit {
                        mask |= 1 << p;
                    }
                }
            }
            if self.space.is_open(mask) {
                result.push(mask);
            }
        }
        result.sort_unstable();
        result.dedup();
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn single_arrow_model() -> GroupoidModel {
        // One partial bijection 0 ↦ 1 on two points.
        let w = PartialBijection::new(vec![(0, 1)], 2).unwrap();
        close_inverse_semigroup(2, &[w], 1000).unwrap()
    }

    #[test]
    fn closure_of_single_arrow() {
        let m = single_arrow_model();
        // {0↦1, 1↦0, id_0, id_1}; the empty map is dropped.
        assert_eq!(m.bisections().len(), 4);
        assert!(m.space().is_open_member(0b01));
        assert!(m.space().is_open_member(0b10));
        assert!(m.space().is_open_member(0b11));
        assert_eq!(m.orbits(), vec![vec![0, 1]]);
    }

    #[test]
    fn closure_of_identity_only() {
        let id = PartialBijection::identity(0b11);
        let m = close_inverse_semigroup(2, &[id], 1000).unwrap();
        assert!(m.bisections().iter().all(|w| w.is_idempotent()));
        assert_eq!(m.orbits().len(), 2);
    }

    #[test]
    fn full_symmetric_generators_close_to_all_partial_bijections() {
        // The two transpositions generate S_3; with restrictions implied the
        // stored closure carries every germ.  Count: stored closure under
        // composition/inverse of full-domain permutations is the 6 points of
        // S_3 (restrictions are implied, not stored).
        let s = PartialBijection::new(vec![(0, 1), (1, 0), (2, 2)], 3).unwrap();
        let t = PartialBijection::new(vec![(0, 0), (1, 2), (2, 1)], 3).unwrap();
        let m = close_inverse_semigroup(3, &[s, t], 10_000).unwrap();
        assert_eq!(m.bisections().len(), 6);
        // The idempotent lattice is coarse (only id_X), so the space has
        // opens ∅ and X only.
        assert_eq!(m.space().opens().len(), 2);
        assert_eq!(m.orbits(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn germs_deduplicate_restrictions() {
        let m = single_arrow_model();
        let germs = m.germs_at(0);
        // Arrows from 0: the unit and 0 ↦ 1.
        assert_eq!(germs.len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let s = PartialBijection::new(vec![(0, 1), (1, 0), (2, 2)], 3).unwrap();
        let t = PartialBijection::new(vec![(0, 0), (1, 2), (2, 1)], 3).unwrap();
        assert!(matches!(
            close_inverse_semigroup(3, &[s, t], 3),
            Err(ClosureError::CapExceeded { .. })
        ));
    }
}
