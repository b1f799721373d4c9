//! Constructive decomposition of dominated families of closed sets.
//!
//! Given closed sets `K_i` and family opens `V_j` with `Σ 1_{K_i} ≤ Σ 1_{V_j}`
//! pointwise, [`decompose`] produces family opens `W[i][j]` with
//!
//! 1. `K_i ⊆ ⋃_j W[i][j]` for every `i`,
//! 2. for every `j`, the closures `cl W[1][j], …, cl W[n][j]` are pairwise
//!    disjoint,
//! 3. `⋃_i cl W[i][j] ⊆ V_j` for every `j`.
//!
//! The construction inducts on the number of `V_j`: points where the two
//! sums agree are stratified by their membership patterns, each stratum is
//! thickened to a family open through minimal neighbourhoods (the finite
//! substitute for Urysohn separation), the last column is assigned through
//! index-sorted bijections, and the peeled remainder recurses.
//!
//! The separation step genuinely needs a Hausdorff-like model: on partition
//! spaces (including discrete ones) membership patterns are constant on
//! blocks and the postconditions always hold, while on general finite models
//! they can be unsatisfiable — the output is therefore postcondition-checked
//! and an explicit error names any failure.

use std::collections::BTreeMap;

use super::{points, way_below, FiniteSpace, LscFn, Mask};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeError {
    /// The pointwise premise fails at this point.
    PremiseViolated { point: usize },
    /// An input set is not closed (first argument family).
    NotClosed(Mask),
    /// An input set is not a member of the open family.
    NotOpenFamily(Mask),
    /// The construction finished but a postcondition failed; the model lacks
    /// the needed separation.
    Postcondition(&'static str),
    /// For the way-below splitters: the premise `k ≪ f + g` (resp. `f ≪ g`)
    /// fails.
    WayBelowPremise,
}

impl std::fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecomposeError::PremiseViolated { point } => {
                write!(f, "premise fails at point {point}")
            }
            DecomposeError::NotClosed(m) => write!(f, "{m:#b} is not closed"),
            DecomposeError::NotOpenFamily(m) => write!(f, "{m:#b} is not in the open family"),
            DecomposeError::Postcondition(which) => {
                write!(f, "postcondition failed: {which} (model lacks separation)")
            }
            DecomposeError::WayBelowPremise => write!(f, "way-below premise fails"),
        }
    }
}

impl std::error::Error for DecomposeError {}

/// See the module docs.  `ks` must be closed, `vs` must be family members.
pub fn decompose(
    space: &FiniteSpace,
    ks: &[Mask],
    vs: &[Mask],
) -> Result<Vec<Vec<Mask>>, DecomposeError> {
    for &k in ks {
        if !space.is_closed(k) {
            return Err(DecomposeError::NotClosed(k));
        }
    }
    for &v in vs {
        if !space.is_open_member(v) {
            return Err(DecomposeError::NotOpenFamily(v));
        }
    }
    for p in 0..space.n_points() {
        if count_at(ks, p) > count_at(vs, p) {
            return Err(DecomposeError::PremiseViolated { point: p });
        }
    }
    let w = peel(space, ks.to_vec(), vs);
    check_postconditions(space, ks, vs, &w)?;
    Ok(w)
}

fn count_at(sets: &[Mask], p: usize) -> usize {
    sets.iter().filter(|&&s| s & (1 << p) != 0).count()
}

fn peel(space: &FiniteSpace, ks: Vec<Mask>, vs: &[Mask]) -> Vec<Vec<Mask>> {
    let n = ks.len();
    let m = vs.len();
    if m == 0 {
        // The premise forces every K_i empty here.
        return vec![Vec::new(); n];
    }
    // Strata: points where the sums agree, grouped by membership pattern.
    let mut pieces: BTreeMap<(Vec<usize>, Vec<usize>), Mask> = BTreeMap::new();
    for p in 0..space.n_points() {
        let i_set: Vec<usize> = (0..n).filter(|&i| ks[i] & (1 << p) != 0).collect();
        let j_set: Vec<usize> = (0..m).filter(|&j| vs[j] & (1 << p) != 0).collect();
        if i_set.len() == j_set.len() && !i_set.is_empty() {
            *pieces.entry((i_set, j_set)).or_insert(0) |= 1 << p;
        }
    }
    // Thicken each stratum and collect the last column through the sorted
    // bijection I → J.
    let last = m - 1;
    let mut column_last = vec![0u64; n];
    for ((i_set, j_set), piece) in &pieces {
        let mut thick = 0u64;
        for p in points(*piece) {
            thick |= space.min_nbhd(p);
        }
        // σ pairs the a-th smallest of I with the a-th smallest of J.
        for (a, &j) in j_set.iter().enumerate() {
            if j == last {
                column_last[i_set[a]] |= thick;
            }
        }
    }
    let ks_rest: Vec<Mask> = (0..n).map(|i| ks[i] & !column_last[i]).collect();
    let mut w = peel(space, ks_rest, &vs[..last]);
    for i in 0..n {
        w[i].push(column_last[i]);
    }
    w
}

fn check_postconditions(
    space: &FiniteSpace,
    ks: &[Mask],
    vs: &[Mask],
    w: &[Vec<Mask>],
) -> Result<(), DecomposeError> {
    let n = ks.len();
    let m = vs.len();
    for i in 0..n {
        let union = w[i].iter().fold(0u64, |acc, &x| acc | x);
        if ks[i] & !union != 0 {
            return Err(DecomposeError::Postcondition("cover"));
        }
        for &piece in &w[i] {
            if !space.is_open_member(piece) {
                return Err(DecomposeError::Postcondition("family membership"));
            }
        }
    }
    for j in 0..m {
        let mut seen = 0u64;
        for i in 0..n {
            let cl = space.closure(w[i][j]);
            if cl & seen != 0 {
                return Err(DecomposeError::Postcondition("disjoint closures"));
            }
            seen |= cl;
            if cl & !vs[j] != 0 {
                return Err(DecomposeError::Postcondition("closure containment"));
            }
        }
    }
    Ok(())
}

/// Splits a witness of `k ≪ f + g` into certified halves: `k1 ≪ f`,
/// `k2 ≪ g`, and `k ≪ k1 + k2 ≪ f + g`.
pub fn split_way_below(
    space: &FiniteSpace,
    k: &LscFn,
    f: &LscFn,
    g: &LscFn,
) -> Result<(LscFn, LscFn), DecomposeError> {
    let np = space.n_points();
    let sum = f.add(g, np);
    if !way_below(space, k, &sum, &super::always_compact) {
        return Err(DecomposeError::WayBelowPremise);
    }
    if k.is_zero() {
        return Ok((LscFn::zero(), LscFn::zero()));
    }
    let ks: Vec<Mask> = k.chain.iter().map(|&u| space.closure(u)).collect();
    let mut vs: Vec<Mask> = f.chain.clone();
    let split_at = vs.len();
    vs.extend(g.chain.iter().copied());
    let w = decompose(space, &ks, &vs)?;
    let mut f_terms = Vec::new();
    let mut g_terms = Vec::new();
    for row in &w {
        for (j, &piece) in row.iter().enumerate() {
            if piece == 0 {
                continue;
            }
            if j < split_at {
                f_terms.push(piece);
            } else {
                g_terms.push(piece);
            }
        }
    }
    let k1 = LscFn::normal_form(space, &f_terms).map_err(|_| {
        DecomposeError::Postcondition("family membership")
    })?;
    let k2 = LscFn::normal_form(space, &g_terms).map_err(|_| {
        DecomposeError::Postcondition("family membership")
    })?;
    let k12 = k1.add(&k2, np);
    let ok = way_below(space, &k1, f, &super::always_compact)
        && way_below(space, &k2, g, &super::always_compact)
        && way_below(space, k, &k12, &super::always_compact)
        && way_below(space, &k12, &sum, &super::always_compact);
    if ok {
        Ok((k1, k2))
    } else {
        Err(DecomposeError::Postcondition("split certification"))
    }
}

/// Interpolation: given `f ≪ g`, produces `h` with `f ≪ h ≪ g` by
/// thickening the closed levels of `f` through minimal neighbourhoods.
pub fn interpolate(space: &FiniteSpace, f: &LscFn, g: &LscFn) -> Result<LscFn, DecomposeError> {
    if !way_below(space, f, g, &super::always_compact) {
        return Err(DecomposeError::WayBelowPremise);
    }
    if f.is_zero() {
        return Ok(LscFn::zero());
    }
    let mut chain = Vec::new();
    for &u in &f.chain {
        let cl = space.closure(u);
        let mut thick = 0u64;
        for p in points(cl) {
            thick |= space.min_nbhd(p);
        }
        chain.push(thick);
    }
    chain.retain(|&u| u != 0);
    let h = LscFn { chain };
    for &u in &h.chain {
        if !space.is_open_member(u) {
            return Err(DecomposeError::Postcondition("family membership"));
        }
    }
    let ok = way_below(space, f, &h, &super::always_compact)
        && way_below(space, &h, g, &super::always_compact);
    if ok {
        Ok(h)
    } else {
        Err(DecomposeError::Postcondition("interpolation certification"))
    }
}
