//! Orbit structure of a groupoid model: the orbit-sum map, invariant opens
//! and their ideals, stabilisation, restriction, and the invariant-measure
//! cone.

use std::collections::BTreeMap;

use crate::arith::Value;
use crate::lattice::{points, LscFn, Mask};
use crate::monoid::{Element, MonoidPresentation};
use crate::states::StateVector;

use super::{
    close_inverse_semigroup, export_presentation, ClosureError, GroupoidModel, PartialBijection,
};

/// `(Σf)([x]) = Σ_{s(γ)=x} f(r(γ))` over the germ arrows with source `x`;
/// the value is constant along orbits (asserted) and returned per orbit.
pub fn sigma_map(model: &GroupoidModel, f: &LscFn) -> Vec<u64> {
    let orbits = model.orbits();
    let mut result = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        let value_at = |x: usize| -> u64 {
            model
                .germs_at(x)
                .iter()
                .map(|germ| f.value_at(germ.apply(x).expect("x is in the germ's domain")) as u64)
                .sum()
        };
        let v = value_at(orbit[0]);
        debug_assert!(
            orbit.iter().all(|&x| value_at(x) == v),
            "orbit sums must be constant along orbits"
        );
        result.push(v);
    }
    result
}

/// One invariant open with the ideal it generates in the exported
/// presentation.
#[derive(Clone, Debug)]
pub struct InvariantOpenReport {
    pub open: Mask,
    /// Indices (into the exported presentation's generators) of the lattice
    /// opens contained in the invariant open.
    pub ideal_generators: Vec<usize>,
}

/// Enumerates invariant opens, pairs each with its ideal, and reports
/// whether the model is minimal (no nontrivial invariant opens).
pub fn invariant_subsets_and_ideals(
    model: &GroupoidModel,
) -> (Vec<InvariantOpenReport>, bool) {
    let (_, index) = export_presentation(model);
    let opens = model.invariant_opens();
    let reports: Vec<InvariantOpenReport> = opens
        .iter()
        .map(|&u| InvariantOpenReport {
            open: u,
            ideal_generators: index
                .iter()
                .filter(|&(&v, _)| v & !u == 0)
                .map(|(_, &i)| i)
                .collect(),
        })
        .collect();
    let minimal = opens.len() <= 2;
    (reports, minimal)
}

/// Distinct ideals of a presentation, as saturated generator sets.  Each
/// ideal of a presented monoid is determined by the generators it contains,
/// and saturation is the exact least fixpoint.
pub fn enumerate_presentation_ideals(p: &MonoidPresentation) -> Vec<Vec<bool>> {
    let arity = p.arity();
    let mut ideals: Vec<Vec<bool>> = vec![vec![false; arity]];
    for sel in 1..(1u64 << arity) {
        let mut seed = Element::zero(arity);
        for g in 0..arity {
            if sel & (1 << g) != 0 {
                seed.coeffs[g] = 1;
            }
        }
        let closure = p.ideal_closure(&seed);
        if !ideals.contains(&closure) {
            ideals.push(closure);
        }
    }
    ideals.sort();
    ideals
}

/// A stabilized model: the product with the full equivalence relation on
/// `n` levels, with the level-0 embedding and its inverse.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub model: GroupoidModel,
    pub levels: usize,
    base_points: usize,
}

impl Stabilized {
    /// `[f] ↦ [f × 1_{level 0}]`.
    pub fn embed(&self, f: &LscFn) -> LscFn {
        let mut values = vec![0u32; self.base_points * self.levels];
        for p in 0..self.base_points {
            values[p] = f.value_at(p);
        }
        LscFn::from_values(&values)
    }

    /// The inverse on classes: sum the levels over each base point.
    pub fn project(&self, f: &LscFn) -> Vec<u32> {
        let mut values = vec![0u32; self.base_points];
        for (i, v) in values.iter_mut().enumerate() {
            for level in 0..self.levels {
                *v += f.value_at(i + level * self.base_points);
            }
        }
        values
    }
}

/// Product of the model with the full equivalence relation on `n` levels:
/// point `(x, j)` is indexed `x + j·n_points`.  Generators are the original
/// ones on each level pair together with the matrix-unit bisections moving
/// whole levels.
pub fn stabilize(model: &GroupoidModel, n: usize, cap: usize) -> Result<Stabilized, ClosureError> {
    assert!(n >= 1);
    let np = model.n_points();
    let total = np * n;
    let mut gens = Vec::new();
    let full = PartialBijection::identity(crate::lattice::full_mask(np));
    let mut base: Vec<PartialBijection> = model.generators().to_vec();
    base.push(full);
    for w in &base {
        for i in 0..n {
            for j in 0..n {
                let pairs: Vec<(usize, usize)> =
                    w.pairs().iter().map(|&(s, t)| (s + j * np, t + i * np)).collect();
                gens.push(PartialBijection::new(pairs, total).expect("translated pairs are valid"));
            }
        }
    }
    let model = close_inverse_semigroup(total, &gens, cap)?;
    Ok(Stabilized { model, levels: n, base_points: np })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestrictError {
    NotInvariant(Mask),
    NotOpen(Mask),
}

impl std::fmt::Display for RestrictError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RestrictError::NotInvariant(m) => write!(f, "{m:#b} is not invariant"),
            RestrictError::NotOpen(m) => write!(f, "{m:#b} is not open"),
        }
    }
}

impl std::error::Error for RestrictError {}

/// The restricted model on the complement of an invariant open, with the
/// point renumbering (old index per new index).
pub fn restrict_to_invariant(
    model: &GroupoidModel,
    u: Mask,
) -> Result<(GroupoidModel, Vec<usize>), RestrictError> {
    if !model.space().is_open(u) {
        return Err(RestrictError::NotOpen(u));
    }
    for w in model.bisections() {
        for &(s, t) in w.pairs() {
            let s_in = u & (1 << s) != 0;
            let t_in = u & (1 << t) != 0;
            if s_in != t_in {
                return Err(RestrictError::NotInvariant(u));
            }
        }
    }
    let keep: Vec<usize> = (0..model.n_points()).filter(|&p| u & (1 << p) == 0).collect();
    let new_index: BTreeMap<usize, usize> =
        keep.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let gens: Vec<PartialBijection> = model
        .generators()
        .iter()
        .map(|w| {
            let pairs: Vec<(usize, usize)> = w
                .pairs()
                .iter()
                .filter(|&&(s, t)| u & (1 << s) == 0 && u & (1 << t) == 0)
                .map(|&(s, t)| (new_index[&s], new_index[&t]))
                .collect();
            PartialBijection::new(pairs, keep.len()).expect("restriction stays valid")
        })
        .filter(|w| !w.is_empty())
        .collect();
    let restricted =
        close_inverse_semigroup(keep.len(), &gens, 100_000).expect("restriction cannot blow up");
    Ok((restricted, keep))
}

/// The cone of invariant weights: orbit indicators generate it, and each
/// induces a state on the exported presentation (verified exactly).
#[derive(Clone, Debug)]
pub struct WeightCone {
    pub orbits: Vec<Vec<usize>>,
    /// One generator per orbit: the indicator weight of that orbit.
    pub generators: Vec<Vec<u64>>,
    /// For each generator, the induced state on the exported presentation.
    pub induced_states: Vec<StateVector>,
}

pub fn invariant_weight_cone(model: &GroupoidModel) -> WeightCone {
    let orbits = model.orbits();
    let (p, index) = export_presentation(model);
    let mut generators = Vec::new();
    let mut induced_states = Vec::new();
    for orbit in &orbits {
        let mut w = vec![0u64; model.n_points()];
        for &x in orbit {
            w[x] = 1;
        }
        // ν(1_U) = Σ_{x ∈ U} w(x): finite on every generator.
        let mut values = vec![Value::zero(); p.arity()];
        for (&mask, &g) in &index {
            let total: u64 = points(mask).map(|x| w[x]).sum();
            values[g] = Value::Finite(crate::arith::int(total as i64));
        }
        let state = StateVector { values };
        debug_assert!(state.satisfies(&p), "orbit indicators induce genuine states");
        generators.push(w);
        induced_states.push(state);
    }
    WeightCone { orbits, generators, induced_states }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LscFn;
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

    fn arrow_plus_fixed_point() -> GroupoidModel {
        // Orbit {0,1} and a fixed point 2 with its own idempotent.
        let w = PartialBijection::new(vec![(0, 1)], 3).unwrap();
        let e = PartialBijection::identity(0b100);
        close_inverse_semigroup(3, &[w, e], 1000).unwrap()
    }

    #[test]
    fn sigma_on_idempotent_model_is_identity() {
        let m = idempotents_only();
        let f = LscFn::indicator(m.space(), 0b01).unwrap();
        assert_eq!(sigma_map(&m, &f), vec![1, 0]);
    }

    #[test]
    fn sigma_sums_over_the_orbit() {
        let m = single_arrow_model();
        // Σ(1_{{0}}) = 1 on the single orbit.
        let f = LscFn::indicator(m.space(), 0b01).unwrap();
        assert_eq!(sigma_map(&m, &f), vec![1]);
        // Σ(1_{{0}} + 1_{{1}}) = 2.
        let g = LscFn::from_values(&[1, 1]);
        assert_eq!(sigma_map(&m, &g), vec![2]);
    }

    #[test]
    fn invariant_opens_with_fixed_point() {
        let m = arrow_plus_fixed_point();
        let (reports, minimal) = invariant_subsets_and_ideals(&m);
        let opens: Vec<Mask> = reports.iter().map(|r| r.open).collect();
        assert_eq!(opens, vec![0b000, 0b011, 0b100, 0b111]);
        assert!(!minimal);
        // Ideal counts match: 4 invariant opens, 4 presentation ideals.
        let (p, _) = export_presentation(&m);
        assert_eq!(enumerate_presentation_ideals(&p).len(), 4);
    }

    #[test]
    fn pair_groupoid_is_minimal_with_two_ideals() {
        let m = single_arrow_model();
        let (reports, minimal) = invariant_subsets_and_ideals(&m);
        assert_eq!(reports.len(), 2);
        assert!(minimal);
        let (p, _) = export_presentation(&m);
        assert_eq!(enumerate_presentation_ideals(&p).len(), 2);
        assert!(crate::monoid::is_simple(&p, &SearchBudget::default()).unwrap().is_proved());
    }

    #[test]
    fn stabilization_keeps_generator_verdicts() {
        let m = idempotents_only();
        let st = stabilize(&m, 2, 100_000).unwrap();
        // 1_{U×{0}} ≈ 1_{U×{1}} via the matrix-unit bisection.
        let u_level0 = LscFn::indicator(st.model.space(), 0b0001).unwrap();
        let u_level1 = LscFn::indicator(st.model.space(), 0b0100).unwrap();
        assert!(crate::groupoid::sim_g(&st.model, &u_level0, &u_level1, 100_000).is_found());
        // Embedding and projection round-trip on functions.
        let f = LscFn::from_values(&[2, 1]);
        let emb = st.embed(&f);
        assert_eq!(st.project(&emb), vec![2, 1]);
    }

    #[test]
    fn restriction_removes_invariant_part() {
        let m = arrow_plus_fixed_point();
        // Restrict away the orbit {0,1}.
        let (restricted, keep) = restrict_to_invariant(&m, 0b011).unwrap();
        assert_eq!(keep, vec![2]);
        assert_eq!(restricted.n_points(), 1);
        // The empty restriction and the full one.
        let (same, _) = restrict_to_invariant(&m, 0b000).unwrap();
        assert_eq!(same.n_points(), 3);
        let (zero, _) = restrict_to_invariant(&m, 0b111).unwrap();
        assert_eq!(zero.n_points(), 0);
        // Non-invariant subsets are rejected.
        assert!(restrict_to_invariant(&m, 0b100).is_ok());
        let err = restrict_to_invariant(&m, 0b001);
        assert!(err.is_err());
    }

    #[test]
    fn weight_cone_generators() {
        let m = idempotents_only();
        let cone = invariant_weight_cone(&m);
        assert_eq!(cone.generators.len(), 2);
        let m2 = single_arrow_model();
        let cone2 = invariant_weight_cone(&m2);
        assert_eq!(cone2.generators, vec![vec![1, 1]]);
    }
}
