//! Type-semigroup comparisons over a groupoid model: exact matching searches
//! for the bisection-implemented equivalence and preorder, the independent
//! covering criterion, and the presentation export.

use std::collections::{BTreeMap, HashSet};

use crate::lattice::{points, LscFn, Mask};
use crate::monoid::{Element, MonoidPresentation, RelationKind};

use super::{GroupoidModel, PartialBijection};

/// A formal sum of bisections (a multiset of terms).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BFunction {
    pub terms: Vec<PartialBijection>,
}

impl BFunction {
    /// `(s_*b)(x) = Σ_{s(γ)=x} b(γ)`: counts term domains through each point.
    pub fn s_star(&self, model: &GroupoidModel) -> LscFn {
        masses(model, self.terms.iter().map(|w| w.dom()))
    }

    /// `(r_*b)(x) = Σ_{r(γ)=x} b(γ)`.
    pub fn r_star(&self, model: &GroupoidModel) -> LscFn {
        masses(model, self.terms.iter().map(|w| w.ran()))
    }
}

fn masses(model: &GroupoidModel, sets: impl Iterator<Item = Mask>) -> LscFn {
    let mut values = vec![0u32; model.n_points()];
    for m in sets {
        for p in points(m) {
            values[p] += 1;
        }
    }
    let f = LscFn::from_values(&values);
    debug_assert!(
        f.chain.iter().all(|&u| model.space().is_open_member(u)),
        "term domains are lattice opens, so level sets stay in the lattice"
    );
    f
}

#[derive(Clone, Debug)]
pub enum MatchOutcome {
    /// A witness multiset of bisections.
    Found(BFunction),
    /// The exhaustive search finished without a witness (exact at finite
    /// scale).
    Exhausted,
    /// The node budget ran out.
    Capped,
}

impl MatchOutcome {
    pub fn witness(&self) -> Option<&BFunction> {
        match self {
            MatchOutcome::Found(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, MatchOutcome::Found(_))
    }
}

/// The candidate terms of any witness: restrictions of stored bisections to
/// lattice opens, deduplicated.  Domains and ranges of these restrictions
/// stay in the lattice by closure.
fn candidate_terms(model: &GroupoidModel) -> Vec<PartialBijection> {
    let mut seen: HashSet<PartialBijection> = HashSet::new();
    let mut result = Vec::new();
    for w in model.bisections() {
        for &u in model.space().opens() {
            if u == 0 {
                continue;
            }
            if u & !w.dom() != 0 {
                continue;
            }
            let r = w.restrict_source(u);
            debug_assert!(model.space().is_open_member(r.ran()));
            if seen.insert(r.clone()) {
                result.push(r);
            }
        }
    }
    result.sort();
    result
}

/// Decides `f ∼ g`: is there `b` with `s_*b = f` and `r_*b = g`?
///
/// Exact backtracking over unit decompositions with memoized failure states;
/// the first point with remaining `f`-mass must be covered by some term's
/// domain, and term domains/ranges are bounded by the remaining masses.
pub fn sim_g(model: &GroupoidModel, f: &LscFn, g: &LscFn, node_cap: usize) -> MatchOutcome {
    let terms = candidate_terms(model);
    let np = model.n_points();
    let mut memo: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    let mut nodes = 0usize;
    let mut witness = Vec::new();
    let fv = f.values(np);
    let gv = g.values(np);
    match search_exact(&terms, np, &fv, &gv, &mut memo, &mut nodes, node_cap, &mut witness) {
        SearchResult::Found => MatchOutcome::Found(BFunction { terms: witness }),
        SearchResult::Exhausted => MatchOutcome::Exhausted,
        SearchResult::Capped => MatchOutcome::Capped,
    }
}

enum SearchResult {
    Found,
    Exhausted,
    Capped,
}

#[allow(clippy::too_many_arguments)]
fn search_exact(
    terms: &[PartialBijection],
    np: usize,
    f_rest: &[u32],
    g_rest: &[u32],
    memo: &mut HashSet<(Vec<u32>, Vec<u32>)>,
    nodes: &mut usize,
    node_cap: usize,
    witness: &mut Vec<PartialBijection>,
) -> SearchResult {
    if f_rest.iter().all(|&v| v == 0) {
        return if g_rest.iter().all(|&v| v == 0) {
            SearchResult::Found
        } else {
            SearchResult::Exhausted
        };
    }
    if *nodes >= node_cap {
        return SearchResult::Capped;
    }
    *nodes += 1;
    let key = (f_rest.to_vec(), g_rest.to_vec());
    if memo.contains(&key) {
        return SearchResult::Exhausted;
    }
    let pivot = (0..np).find(|&p| f_rest[p] > 0).expect("nonzero mass");
    let mut capped = false;
    for t in terms {
        if t.dom() & (1 << pivot) == 0 {
            continue;
        }
        if points(t.dom()).any(|p| f_rest[p] == 0) || points(t.ran()).any(|p| g_rest[p] == 0) {
            continue;
        }
        let mut f_next = f_rest.to_vec();
        let mut g_next = g_rest.to_vec();
        for p in points(t.dom()) {
            f_next[p] -= 1;
        }
        for p in points(t.ran()) {
            g_next[p] -= 1;
        }
        witness.push(t.clone());
        match search_exact(terms, np, &f_next, &g_next, memo, nodes, node_cap, witness) {
            SearchResult::Found => return SearchResult::Found,
            SearchResult::Exhausted => {
                witness.pop();
            }
            SearchResult::Capped => {
                witness.pop();
                capped = true;
            }
        }
    }
    if capped {
        SearchResult::Capped
    } else {
        memo.insert(key);
        SearchResult::Exhausted
    }
}

/// Decides the dynamical preorder `f ≼ g`: is there `b` with `k ≤ s_*b` and
/// `r_*b ≤ g`, where `k` ranges over everything way below `f`?
///
/// On a finite model the witnesses way below `f` have a pointwise-largest
/// member, so a single search against it decides the full quantifier.
pub fn precsim_b(model: &GroupoidModel, f: &LscFn, g: &LscFn, node_cap: usize) -> MatchOutcome {
    let k_star = crate::lattice::maximal_way_below(model.space(), f);
    let terms = candidate_terms(model);
    let np = model.n_points();
    let mut memo: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    let mut nodes = 0usize;
    let mut witness = Vec::new();
    let kv = k_star.values(np);
    let gv = g.values(np);
    match search_cover(&terms, np, &kv, &gv, &mut memo, &mut nodes, node_cap, &mut witness) {
        SearchResult::Found => MatchOutcome::Found(BFunction { terms: witness }),
        SearchResult::Exhausted => MatchOutcome::Exhausted,
        SearchResult::Capped => MatchOutcome::Capped,
    }
}

/// Covering search: reduce the remaining cover demand (saturating at zero),
/// spending range mass out of `g_rest`.
#[allow(clippy::too_many_arguments)]
fn search_cover(
    terms: &[PartialBijection],
    np: usize,
    k_rest: &[u32],
    g_rest: &[u32],
    memo: &mut HashSet<(Vec<u32>, Vec<u32>)>,
    nodes: &mut usize,
    node_cap: usize,
    witness: &mut Vec<PartialBijection>,
) -> SearchResult {
    if k_rest.iter().all(|&v| v == 0) {
        return SearchResult::Found;
    }
    if *nodes >= node_cap {
        return SearchResult::Capped;
    }
    *nodes += 1;
    let key = (k_rest.to_vec(), g_rest.to_vec());
    if memo.contains(&key) {
        return SearchResult::Exhausted;
    }
    let pivot = (0..np).find(|&p| k_rest[p] > 0).expect("nonzero demand");
    let mut capped = false;
    for t in terms {
        if t.dom() & (1 << pivot) == 0 {
            continue;
        }
        if points(t.ran()).any(|p| g_rest[p] == 0) {
            continue;
        }
        let mut k_next = k_rest.to_vec();
        let mut g_next = g_rest.to_vec();
        for p in points(t.dom()) {
            k_next[p] = k_next[p].saturating_sub(1);
        }
        for p in points(t.ran()) {
            g_next[p] -= 1;
        }
        witness.push(t.clone());
        match search_cover(terms, np, &k_next, &g_next, memo, nodes, node_cap, witness) {
            SearchResult::Found => return SearchResult::Found,
            SearchResult::Exhausted => {
                witness.pop();
            }
            SearchResult::Capped => {
                witness.pop();
                capped = true;
            }
        }
    }
    if capped {
        SearchResult::Capped
    } else {
        memo.insert(key);
        SearchResult::Exhausted
    }
}

/// Independent covering/disjointness criterion for `f ≼ g`.
///
/// With `f = Σ 1_{U_i}` (normal form) and `g = Σ 1_{V_j}`, searches for a
/// family of bisection restrictions `B_a` with assignments `α(a) = i`,
/// `β(a) = j` such that each `U_i` is covered by its assigned sources and
/// the ranges assigned to each `j` are pairwise disjoint inside `V_j`.
/// Cross-validates `precsim_b` on models where closures are trivial.
pub fn precsim_criterion(
    model: &GroupoidModel,
    f: &LscFn,
    g: &LscFn,
    node_cap: usize,
) -> MatchOutcome {
    let terms = candidate_terms(model);
    let u_sets: Vec<Mask> = f.chain.clone();
    let v_sets: Vec<Mask> = g.chain.clone();
    let mut uncovered = u_sets.clone();
    let mut used: Vec<Mask> = vec![0; v_sets.len()];
    let mut witness = Vec::new();
    let mut nodes = 0usize;
    match criterion_search(
        &terms,
        &v_sets,
        &mut uncovered,
        &mut used,
        &mut witness,
        &mut nodes,
        node_cap,
    ) {
        SearchResult::Found => MatchOutcome::Found(BFunction { terms: witness }),
        SearchResult::Exhausted => MatchOutcome::Exhausted,
        SearchResult::Capped => MatchOutcome::Capped,
    }
}

fn criterion_search(
    terms: &[PartialBijection],
    v_sets: &[Mask],
    uncovered: &mut Vec<Mask>,
    used: &mut Vec<Mask>,
    witness: &mut Vec<PartialBijection>,
    nodes: &mut usize,
    node_cap: usize,
) -> SearchResult {
    let Some(row) = uncovered.iter().position(|&m| m != 0) else {
        return SearchResult::Found;
    };
    if *nodes >= node_cap {
        return SearchResult::Capped;
    }
    *nodes += 1;
    let pivot = points(uncovered[row]).next().expect("nonempty");
    let mut capped = false;
    for t in terms {
        if t.dom() & (1 << pivot) == 0 {
            continue;
        }
        for (j, &v) in v_sets.iter().enumerate() {
            let ran = t.ran();
            if ran & used[j] != 0 || ran & !v != 0 {
                continue;
            }
            let saved = uncovered[row];
            uncovered[row] &= !t.dom();
            used[j] |= ran;
            witness.push(t.clone());
            match criterion_search(terms, v_sets, uncovered, used, witness, nodes, node_cap) {
                SearchResult::Found => return SearchResult::Found,
                SearchResult::Exhausted => {}
                SearchResult::Capped => capped = true,
            }
            witness.pop();
            used[j] &= !ran;
            uncovered[row] = saved;
        }
    }
    if capped {
        SearchResult::Capped
    } else {
        SearchResult::Exhausted
    }
}

/// Exports the model's type semigroup as a monoid presentation: one
/// generator per nonempty lattice open, disjoint-union additivity, and one
/// equality `1_{s(W)} == 1_{r(W)}` per restricted bisection.
pub fn export_presentation(model: &GroupoidModel) -> (MonoidPresentation, BTreeMap<Mask, usize>) {
    let opens: Vec<Mask> =
        model.space().opens().iter().copied().filter(|&u| u != 0).collect();
    let index: BTreeMap<Mask, usize> = opens.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let names: Vec<String> = opens.iter().map(|&u| open_name(u)).collect();
    let mut p = MonoidPresentation::new(names).expect("mask names are unique");
    let arity = opens.len();
    let unit = |u: Mask| Element::unit(arity, index[&u]);
    // Disjoint additivity: 1_{U ⊔ V} == 1_U + 1_V.
    for (i, &u) in opens.iter().enumerate() {
        for &v in &opens[i + 1..] {
            if u & v == 0 {
                p.relate(unit(u | v), unit(u).add(&unit(v)), RelationKind::Eq);
            }
        }
    }
    // Source-range identifications over all restrictions.
    let mut seen: HashSet<(Mask, Mask)> = HashSet::new();
    for t in candidate_terms(model) {
        let (s, r) = (t.dom(), t.ran());
        if s == r {
            continue;
        }
        let key = if s < r { (s, r) } else { (r, s) };
        if seen.insert(key) {
            p.relate(unit(key.0), unit(key.1), RelationKind::Eq);
        }
    }
    (p, index)
}

pub fn open_name(u: Mask) -> String {
    let pts: Vec<String> = points(u).map(|p| p.to_string()).collect();
    format!("U{}", pts.join("_"))
}

/// The class of an `LscFn` in the exported presentation: the sum of the
/// generators of its normal-form chain.
pub fn class_of(f: &LscFn, index: &BTreeMap<Mask, usize>, arity: usize) -> Element {
    let mut e = Element::zero(arity);
    for &u in &f.chain {
        e.coeffs[index[&u]] += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::close_inverse_semigroup;
    use crate::monoid::SearchBudget;

    fn single_arrow_model() -> GroupoidModel {
        let w = PartialBijection::new(vec![(0, 1)], 2).unwrap();
        close_inverse_semigroup(2, &[w], 1000).unwrap()
    }

    fn idempotents_only() -> GroupoidModel {
        let a = PartialBijection::identity(0b01);
        let b = PartialBijection::identity(0b10);
        close_inverse_semigroup(2, &[a, b], 1000).unwrap()
    }

    #[test]
    fn star_maps_count_masses() {
        let m = single_arrow_model();
        let w = m.bisections().iter().find(|w| !w.is_idempotent() && w.dom() == 0b01).unwrap();
        let b = BFunction { terms: vec![w.clone()] };
        assert_eq!(b.s_star(&m).chain, vec![0b01]);
        assert_eq!(b.r_star(&m).chain, vec![0b10]);
        let id0 = PartialBijection::identity(0b01);
        let b2 = BFunction { terms: vec![id0, w.clone()] };
        // s_* = 2·1_{{0}}, r_* = 1_{{0,1}}.
        assert_eq!(b2.s_star(&m).chain, vec![0b01, 0b01]);
        assert_eq!(b2.r_star(&m).chain, vec![0b11]);
        assert!(BFunction::default().s_star(&m).is_zero());
    }

    #[test]
    fn sim_moves_mass_along_the_arrow() {
        let m = single_arrow_model();
        let f = LscFn::indicator(m.space(), 0b01).unwrap();
        let g = LscFn::indicator(m.space(), 0b10).unwrap();
        assert!(sim_g(&m, &f, &g, 100_000).is_found());
        // Idempotents cannot move mass.
        let m2 = idempotents_only();
        let f2 = LscFn::indicator(m2.space(), 0b01).unwrap();
        let g2 = LscFn::indicator(m2.space(), 0b10).unwrap();
        assert!(matches!(sim_g(&m2, &f2, &g2, 100_000), MatchOutcome::Exhausted));
    }

    #[test]
    fn pair_groupoid_collapses_double_mass() {
        // Full pair groupoid on two points: 2·1_{{0}} ∼ 1_{{0,1}}.
        let m = single_arrow_model();
        let two_at_zero = LscFn::from_values(&[2, 0]);
        let spread = LscFn::from_values(&[1, 1]);
        assert!(sim_g(&m, &two_at_zero, &spread, 100_000).is_found());
    }

    #[test]
    fn precsim_pointwise_le_is_trivially_provable() {
        let m = idempotents_only();
        let f = LscFn::indicator(m.space(), 0b01).unwrap();
        let g = LscFn::from_values(&[1, 1]);
        assert!(precsim_b(&m, &f, &g, 100_000).is_found());
        assert!(precsim_criterion(&m, &f, &g, 100_000).is_found());
        // And the failing direction.
        let h = LscFn::indicator(m.space(), 0b10).unwrap();
        assert!(matches!(precsim_b(&m, &f, &h, 100_000), MatchOutcome::Exhausted));
        assert!(matches!(precsim_criterion(&m, &f, &h, 100_000), MatchOutcome::Exhausted));
    }

    #[test]
    fn export_single_arrow_presents_n() {
        let (p, index) = export_presentation(&single_arrow_model());
        // Generators {0}, {1}, {0,1}; relations U0 == U1 and U01 == U0 + U1.
        assert_eq!(p.generators.len(), 3);
        let u0 = Element::unit(3, index[&0b01]);
        let u1 = Element::unit(3, index[&0b10]);
        let u01 = Element::unit(3, index[&0b11]);
        let budget = SearchBudget::default();
        assert!(crate::monoid::congruent(&p, &u0, &u1, &budget).unwrap().is_proved());
        assert!(crate::monoid::congruent(&p, &u01, &u0.add(&u1), &budget).unwrap().is_proved());
        // The presented monoid is ℕ: no state refutes U0 ≤ 2·U0... but
        // 2·U0 ≤ U0 must be refuted.
        let j = crate::monoid::leq(&p, &u0.scale(2), &u0, &budget).unwrap();
        assert!(j.is_refuted());
    }

    #[test]
    fn export_idempotents_presents_free_monoid() {
        let (p, index) = export_presentation(&idempotents_only());
        let u0 = Element::unit(3, index[&0b01]);
        let u1 = Element::unit(3, index[&0b10]);
        let budget = SearchBudget::default();
        // U0 and U1 stay independent.
        assert!(crate::monoid::congruent(&p, &u0, &u1, &budget).unwrap().is_refuted());
    }
}
