//! The ordered monoid of bounded ℕ-valued functions with open level sets
//! over a finite topological model.
//!
//! A [`FiniteSpace`] is a finite point set with a family of opens closed
//! under union and intersection.  Functions are stored in normal form, as
//! the decreasing chain of their level sets; sums, lattice operations, the
//! upper-semicontinuous closure, and the way-below relation are all computed
//! levelwise.
//!
//! Subsets of the (at most 64) points are bit masks.

use std::fmt;

pub mod decompose;
pub mod measure;

pub use decompose::{decompose, interpolate, split_way_below, DecomposeError};
pub use measure::{extend_dimension_function, DimensionFunctionReport};

/// A subset of the points of a finite space, as a bit mask.
pub type Mask = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceError {
    TooManyPoints(usize),
    MissingEmptySet,
    NotUnionClosed { a: Mask, b: Mask },
    NotIntersectionClosed { a: Mask, b: Mask },
    NotAnOpen(Mask),
    PointOutOfRange(usize),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::TooManyPoints(n) => write!(f, "{n} points exceed the 64-point limit"),
            SpaceError::MissingEmptySet => write!(f, "the open family must contain the empty set"),
            SpaceError::NotUnionClosed { a, b } => {
                write!(f, "opens {a:#b} and {b:#b} have no union in the family")
            }
            SpaceError::NotIntersectionClosed { a, b } => {
                write!(f, "opens {a:#b} and {b:#b} have no intersection in the family")
            }
            SpaceError::NotAnOpen(m) => write!(f, "{m:#b} is not in the open family"),
            SpaceError::PointOutOfRange(p) => write!(f, "point {p} out of range"),
        }
    }
}

impl std::error::Error for SpaceError {}

/// A finite point set with a union- and intersection-closed family of opens
/// containing the empty set.  The generated topology consists of all unions
/// of members; every point has a minimal open neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    n_points: usize,
    opens: Vec<Mask>,
    /// Minimal open neighbourhood per point (the whole space when no member
    /// of the family contains the point).
    min_nbhd: Vec<Mask>,
}

impl FiniteSpace {
    /// Builds a space, verifying closure under union and intersection.
    pub fn new(n_points: usize, mut opens: Vec<Mask>) -> Result<Self, SpaceError> {
        if n_points > 64 {
            return Err(SpaceError::TooManyPoints(n_points));
        }
        let full = full_mask(n_points);
        opens.iter_mut().for_each(|m| *m &= full);
        opens.sort_unstable();
        opens.dedup();
        if !opens.contains(&0) {
            return Err(SpaceError::MissingEmptySet);
        }
        let set: std::collections::HashSet<Mask> = opens.iter().copied().collect();
        for &a in &opens {
            for &b in &opens {
                if !set.contains(&(a | b)) {
                    return Err(SpaceError::NotUnionClosed { a, b });
                }
                if !set.contains(&(a & b)) {
                    return Err(SpaceError::NotIntersectionClosed { a, b });
                }
            }
        }
        let min_nbhd = (0..n_points)
            .map(|p| {
                let bit = 1u64 << p;
                let mut nbhd = full;
                let mut found = false;
                for &u in &opens {
                    if u & bit != 0 {
                        if found {
                            nbhd &= u;
                        } else {
                            nbhd = u;
                            found = true;
                        }
                    }
                }
                nbhd
            })
            .collect();
        Ok(FiniteSpace { n_points, opens, min_nbhd })
    }

    /// The closure of the given open family under union and intersection.
    pub fn from_generators(n_points: usize, generators: &[Mask]) -> Result<Self, SpaceError> {
        if n_points > 64 {
            return Err(SpaceError::TooManyPoints(n_points));
        }
        let full = full_mask(n_points);
        let mut set: std::collections::BTreeSet<Mask> = std::collections::BTreeSet::new();
        set.insert(0);
        for &g in generators {
            set.insert(g & full);
        }
        loop {
            let snapshot: Vec<Mask> = set.iter().copied().collect();
            let before = set.len();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i..] {
                    set.insert(a | b);
                    set.insert(a & b);
                }
            }
            if set.len() == before {
                break;
            }
        }
        FiniteSpace::new(n_points, set.into_iter().collect())
    }

    /// The discrete model: every subset is open.
    pub fn discrete(n_points: usize) -> FiniteSpace {
        let all: Vec<Mask> = (0..(1u64 << n_points)).collect();
        FiniteSpace::new(n_points, all).expect("powerset is closed")
    }

    /// The partition model: opens are the unions of the given blocks.  These
    /// are exactly the finite models in which disjoint closed sets have
    /// openings with disjoint closures.
    pub fn partition(n_points: usize, blocks: &[Mask]) -> Result<FiniteSpace, SpaceError> {
        let mut covered = 0u64;
        for &b in blocks {
            covered |= b;
        }
        if covered != full_mask(n_points) {
            return Err(SpaceError::NotAnOpen(covered));
        }
        let mut opens = Vec::new();
        for sel in 0..(1u64 << blocks.len()) {
            let mut m = 0u64;
            for (i, &b) in blocks.iter().enumerate() {
                if sel & (1 << i) != 0 {
                    m |= b;
                }
            }
            opens.push(m);
        }
        FiniteSpace::new(n_points, opens)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n_points)
    }

    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn is_open_member(&self, m: Mask) -> bool {
        self.opens.binary_search(&m).is_ok()
    }

    /// Open in the generated topology: a union of family members,
    /// equivalently every point's minimal neighbourhood stays inside.
    pub fn is_open(&self, m: Mask) -> bool {
        points(m).all(|p| self.min_nbhd[p] & !m == 0)
    }

    pub fn min_nbhd(&self, p: usize) -> Mask {
        self.min_nbhd[p]
    }

    /// Topological closure: the points whose every neighbourhood meets `m`.
    pub fn closure(&self, m: Mask) -> Mask {
        let mut c = 0u64;
        for p in 0..self.n_points {
            if self.min_nbhd[p] & m != 0 {
                c |= 1 << p;
            }
        }
        c
    }

    pub fn is_closed(&self, m: Mask) -> bool {
        self.closure(m) == m
    }

    /// The largest member of the family whose closure lies inside `target`.
    pub fn largest_open_with_closure_inside(&self, target: Mask) -> Mask {
        let mut best = 0u64;
        for &u in &self.opens {
            if self.closure(u) & !target == 0 {
                best |= u;
            }
        }
        debug_assert!(self.is_open_member(best));
        best
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn points(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |p| m & (1 << p) != 0)
}

pub fn popcount(m: Mask) -> u32 {
    m.count_ones()
}

/// A bounded function `X → ℕ` with level sets in the open family, stored as
/// its unique decreasing chain of nonempty level sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LscFn {
    /// `chain[k] = f⁻¹(ℕ_{≥ k+1})`, strictly positive levels only.
    pub chain: Vec<Mask>,
}

impl LscFn {
    pub fn zero() -> LscFn {
        LscFn { chain: Vec::new() }
    }

    pub fn indicator(space: &FiniteSpace, u: Mask) -> Result<LscFn, SpaceError> {
        if !space.is_open_member(u) {
            return Err(SpaceError::NotAnOpen(u));
        }
        Ok(if u == 0 { LscFn::zero() } else { LscFn { chain: vec![u] } })
    }

    /// Normal form of `Σ 1_{terms[i]}`: the chain of level sets of the
    /// pointwise sum.  Errors if a term is not in the family; the level sets
    /// themselves are automatically members because the family is closed
    /// under union and intersection.
    pub fn normal_form(space: &FiniteSpace, terms: &[Mask]) -> Result<LscFn, SpaceError> {
        for &t in terms {
            if !space.is_open_member(t) {
                return Err(SpaceError::NotAnOpen(t));
            }
        }
        let mut values = vec![0u32; space.n_points()];
        for &t in terms {
            for p in points(t) {
                values[p] += 1;
            }
        }
        let f = LscFn::from_values(&values);
        debug_assert!(f.chain.iter().all(|&u| space.is_open_member(u)));
        Ok(f)
    }

    /// Chain of level sets of an arbitrary point function (no membership
    /// check; used for oracles).
    pub fn from_values(values: &[u32]) -> LscFn {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut chain = Vec::new();
        for k in 1..=max {
            let mut mask = 0u64;
            for (p, &v) in values.iter().enumerate() {
                if v >= k {
                    mask |= 1 << p;
                }
            }
            chain.push(mask);
        }
        chain.retain(|&m| m != 0);
        LscFn { chain }
    }

    pub fn value_at(&self, p: usize) -> u32 {
        self.chain.iter().take_while(|&&u| u & (1 << p) != 0).count() as u32
    }

    pub fn values(&self, n_points: usize) -> Vec<u32> {
        (0..n_points).map(|p| self.value_at(p)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn support(&self) -> Mask {
        self.chain.first().copied().unwrap_or(0)
    }

    pub fn max_value(&self) -> u32 {
        self.chain.len() as u32
    }

    pub fn add(&self, other: &LscFn, n_points: usize) -> LscFn {
        let mut values = self.values(n_points);
        for (v, w) in values.iter_mut().zip(other.values(n_points)) {
            *v += w;
        }
        LscFn::from_values(&values)
    }

    pub fn scale(&self, k: u32, n_points: usize) -> LscFn {
        let values: Vec<u32> = self.values(n_points).iter().map(|v| v * k).collect();
        LscFn::from_values(&values)
    }

    pub fn leq_pointwise(&self, other: &LscFn, n_points: usize) -> bool {
        (0..n_points).all(|p| self.value_at(p) <= other.value_at(p))
    }

    /// Least upper bound: levelwise unions.
    pub fn join(&self, other: &LscFn) -> LscFn {
        let len = self.chain.len().max(other.chain.len());
        let mut chain = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.chain.get(k).copied().unwrap_or(0);
            let b = other.chain.get(k).copied().unwrap_or(0);
            chain.push(a | b);
        }
        chain.retain(|&m| m != 0);
        LscFn { chain }
    }

    /// Greatest lower bound: levelwise intersections.
    pub fn meet(&self, other: &LscFn) -> LscFn {
        let len = self.chain.len().min(other.chain.len());
        let mut chain = Vec::with_capacity(len);
        for k in 0..len {
            chain.push(self.chain[k] & other.chain[k]);
        }
        chain.retain(|&m| m != 0);
        LscFn { chain }
    }

    /// The upper-semicontinuous closure `Σ 1_{cl U_k}` over the normal-form
    /// chain, as a plain point function.  Pointwise this is the largest
    /// value of the function on the point's minimal neighbourhood.
    pub fn closure_fn(&self, space: &FiniteSpace) -> Vec<u32> {
        let mut values = vec![0u32; space.n_points()];
        for &u in &self.chain {
            let cl = space.closure(u);
            for p in points(cl) {
                values[p] += 1;
            }
        }
        values
    }
}

/// Compactness predicate for subsets; on finite spaces every subset is
/// compact, which is the default.
pub type CompactnessPredicate<'a> = &'a dyn Fn(Mask) -> bool;

pub fn always_compact(_: Mask) -> bool {
    true
}

/// The way-below relation `g ≪ f`: the closure of `g` is pointwise below `f`
/// and the support of the closure satisfies the compactness predicate.  With
/// the default predicate on a discrete family this degenerates to `≤`.
pub fn way_below(
    space: &FiniteSpace,
    g: &LscFn,
    f: &LscFn,
    compact: CompactnessPredicate<'_>,
) -> bool {
    let clg = g.closure_fn(space);
    let support_of_closure = clg
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0)
        .fold(0u64, |m, (p, _)| m | (1 << p));
    if !compact(support_of_closure) {
        return false;
    }
    (0..space.n_points()).all(|p| clg[p] <= f.value_at(p))
}

/// The pointwise-largest `k` with `k ≪ f` (default compactness): each level
/// takes the largest family member whose closure fits inside the
/// corresponding level of `f`.
pub fn maximal_way_below(space: &FiniteSpace, f: &LscFn) -> LscFn {
    let mut chain = Vec::new();
    for &u in &f.chain {
        chain.push(space.largest_open_with_closure_inside(u));
    }
    chain.retain(|&m| m != 0);
    // The maximizers are automatically decreasing because the levels of f
    // are.
    debug_assert!(chain.windows(2).all(|w| w[1] & !w[0] == 0));
    LscFn { chain }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FiniteSpace {
        // Points {0, 1}; opens ∅, {0}, {0,1}.
        FiniteSpace::new(2, vec![0b00, 0b01, 0b11]).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let x = FiniteSpace::discrete(3);
        // [{0,1},{0}] is already a decreasing chain.
        let f = LscFn::normal_form(&x, &[0b011, 0b001]).unwrap();
        assert_eq!(f.chain, vec![0b011, 0b001]);
        // [{0},{1}] sums to the indicator of {0,1}.
        let g = LscFn::normal_form(&x, &[0b001, 0b010]).unwrap();
        assert_eq!(g.chain, vec![0b011]);
        // [{0,1},{1,2}]: value 1 on {0,2}, value 2 on {1}.
        let h = LscFn::normal_form(&x, &[0b011, 0b110]).unwrap();
        assert_eq!(h.chain, vec![0b111, 0b010]);
    }

    #[test]
    fn normal_form_is_permutation_invariant() {
        let x = FiniteSpace::discrete(4);
        let terms = [0b0111, 0b0011, 0b1100, 0b0001];
        let mut perm = terms;
        perm.reverse();
        let f = LscFn::normal_form(&x, &terms).unwrap();
        let g = LscFn::normal_form(&x, &perm).unwrap();
        assert_eq!(f, g);
        // And matches pointwise evaluation.
        for p in 0..4 {
            let direct: u32 =
                terms.iter().map(|&t| if t & (1 << p) != 0 { 1 } else { 0 }).sum();
            assert_eq!(f.value_at(p), direct);
        }
    }

    #[test]
    fn join_meet_examples() {
        let x = FiniteSpace::discrete(3);
        let f = LscFn::normal_form(&x, &[0b011]).unwrap();
        let zero = LscFn::zero();
        assert_eq!(f.join(&zero), f);
        assert_eq!(f.meet(&f), f);
        let g = LscFn::normal_form(&x, &[0b110]).unwrap();
        assert_eq!(f.join(&g).chain, vec![0b111]);
        assert_eq!(f.meet(&g).chain, vec![0b010]);
    }

    #[test]
    fn closure_on_sierpinski() {
        let x = sierpinski();
        // min nbhd of point 1 is the whole space, so cl {0} = {0,1}.
        assert_eq!(x.closure(0b01), 0b11);
        let f = LscFn::indicator(&x, 0b01).unwrap();
        assert_eq!(f.closure_fn(&x), vec![1, 1]);
        // Discrete family: closure is the identity.
        let d = FiniteSpace::discrete(2);
        let g = LscFn::indicator(&d, 0b01).unwrap();
        assert_eq!(g.closure_fn(&d), vec![1, 0]);
    }

    #[test]
    fn closure_matches_pointwise_limsup_oracle() {
        // cl f(p) = max of f over the minimal neighbourhood of p, for the
        // normal-form chain.
        let x = FiniteSpace::from_generators(3, &[0b001, 0b011, 0b111]).unwrap();
        let f = LscFn::normal_form(&x, &[0b011, 0b001, 0b111]).unwrap();
        let cl = f.closure_fn(&x);
        for p in 0..3 {
            let oracle = points(x.min_nbhd(p)).map(|q| f.value_at(q)).max().unwrap();
            assert_eq!(cl[p], oracle);
        }
    }

    #[test]
    fn closure_is_subadditive_but_not_additive() {
        // On a non-Hausdorff 3-point model, cl(f+g) < cl f + cl g happens.
        let x = FiniteSpace::from_generators(3, &[0b001, 0b010, 0b111]).unwrap();
        let f = LscFn::indicator(&x, 0b001).unwrap();
        let g = LscFn::indicator(&x, 0b010).unwrap();
        let sum = f.add(&g, 3);
        let cl_sum = sum.closure_fn(&x);
        let cl_f = f.closure_fn(&x);
        let cl_g = g.closure_fn(&x);
        for p in 0..3 {
            assert!(cl_sum[p] <= cl_f[p] + cl_g[p]);
        }
        // Point 2 sees both indicators in its closure but the sum is 1 there.
        assert_eq!(cl_sum[2], 1);
        assert_eq!(cl_f[2] + cl_g[2], 2);
    }

    #[test]
    fn way_below_on_sierpinski() {
        let x = sierpinski();
        let one = LscFn::indicator(&x, 0b01).unwrap();
        let top = LscFn::indicator(&x, 0b11).unwrap();
        assert!(way_below(&x, &one, &top, &always_compact));
        assert!(!way_below(&x, &one, &one, &always_compact));
        // f ≪ f exactly when f is its own closure.
        assert!(way_below(&x, &top, &top, &always_compact));
    }

    #[test]
    fn way_below_degenerates_on_discrete_models() {
        let x = FiniteSpace::discrete(3);
        let f = LscFn::normal_form(&x, &[0b011, 0b001]).unwrap();
        let g = LscFn::normal_form(&x, &[0b011]).unwrap();
        assert!(way_below(&x, &g, &f, &always_compact));
        assert!(!way_below(&x, &f, &g, &always_compact));
        assert!(way_below(&x, &f, &f, &always_compact));
    }

    #[test]
    fn maximal_way_below_is_the_witness_bound() {
        let x = sierpinski();
        let top = LscFn::indicator(&x, 0b11).unwrap();
        let k = maximal_way_below(&x, &top);
        // cl{0} = X fits inside X, and cl X = X too, so the max is 1_X.
        assert_eq!(k.chain, vec![0b11]);
        let one = LscFn::indicator(&x, 0b01).unwrap();
        let k1 = maximal_way_below(&x, &one);
        // Nothing nonempty has closure inside {0}.
        assert!(k1.is_zero());
    }

    #[test]
    fn partition_space_closures_are_block_unions() {
        let x = FiniteSpace::partition(4, &[0b0011, 0b1100]).unwrap();
        assert_eq!(x.closure(0b0001), 0b0011);
        assert_eq!(x.closure(0b0100), 0b1100);
        assert!(x.is_open_member(0b0011));
        assert!(!x.is_open_member(0b0001));
    }
}
