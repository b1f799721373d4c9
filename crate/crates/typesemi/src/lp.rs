//! Exact linear solvers over the rationals.
//!
//! Three engines, all fraction-exact:
//!
//! * a two-phase dense simplex with Bland's rule (termination guaranteed),
//! * Fourier–Motzkin elimination with combination tracking, which doubles as
//!   the producer of replayable infeasibility certificates and as the
//!   projection engine for polyhedral enclosures,
//! * an incremental double-description pass for extreme rays of cones
//!   `{x ≥ 0 : Ax = 0}`.
//!
//! The simplex decides, Fourier–Motzkin certifies; on small systems the two
//! are run against each other as a cross-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs · x ≤ rhs` or `coeffs · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
    pub equality: bool,
}

impl Constraint {
    pub fn le(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs, equality: false }
    }

    pub fn eq(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs, equality: true }
    }

    fn eval(&self, x: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        let lhs = self.eval(x);
        if self.equality {
            lhs == self.rhs
        } else {
            lhs <= self.rhs
        }
    }
}

/// A finite system `{constraints, x ≥ 0}` in `n_vars` variables.
#[derive(Clone, Debug, Default)]
pub struct System {
    pub n_vars: usize,
    pub constraints: Vec<Constraint>,
}

impl System {
    pub fn new(n_vars: usize) -> Self {
        System { n_vars, constraints: Vec::new() }
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.n_vars);
        self.constraints.push(c);
    }

    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        x.iter().all(|v| !v.is_negative()) && self.constraints.iter().all(|c| c.satisfied_by(x))
    }
}

/// Nonnegative multipliers demonstrating infeasibility of a [`System`].
///
/// The combination `Σ multiplier_i · constraint_i` (equalities may also be
/// scaled negatively, recorded separately) has all variable coefficients
/// nonnegative yet a negative right-hand side, which is absurd for `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct Farkas {
    /// One multiplier per constraint, in order; entries for inequality rows
    /// are nonnegative, entries for equality rows may have either sign.
    pub multipliers: Vec<BigRational>,
}

impl Farkas {
    /// Replays the certificate against the system it claims to refute.
    pub fn verify(&self, sys: &System) -> bool {
        if self.multipliers.len() != sys.constraints.len() {
            return false;
        }
        for (m, c) in self.multipliers.iter().zip(&sys.constraints) {
            if !c.equality && m.is_negative() {
                return false;
            }
        }
        let mut combined = vec![BigRational::zero(); sys.n_vars];
        let mut rhs = BigRational::zero();
        for (m, c) in self.multipliers.iter().zip(&sys.constraints) {
            for (acc, coeff) in combined.iter_mut().zip(&c.coeffs) {
                *acc += m * coeff;
            }
            rhs += m * &c.rhs;
        }
        combined.iter().all(|c| !c.is_negative()) && rhs.is_negative()
    }
}

#[derive(Clone, Debug)]
pub enum LpResult {
    Optimal { value: BigRational, point: Vec<BigRational> },
    Infeasible(Option<Farkas>),
    Unbounded,
}

/// Maximizes `objective · x` over a [`System`] (variables implicitly `≥ 0`).
pub fn maximize(sys: &System, objective: &[BigRational]) -> LpResult {
    solve(sys, objective, true)
}

/// Checks feasibility; on success returns a witness point.
pub fn feasible_point(sys: &System) -> Result<Vec<BigRational>, Option<Farkas>> {
    let zero_obj = vec![BigRational::zero(); sys.n_vars];
    match solve(sys, &zero_obj, true) {
        LpResult::Optimal { point, .. } => Ok(point),
        LpResult::Infeasible(f) => Err(f),
        LpResult::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

fn solve(sys: &System, objective: &[BigRational], maximize: bool) -> LpResult {
    assert_eq!(objective.len(), sys.n_vars);
    let mut t = Tableau::build(sys);
    if !t.phase_one() {
        // Ask Fourier–Motzkin for a replayable certificate.
        let farkas = farkas_certificate(sys);
        debug_assert!(farkas.as_ref().map_or(true, |f| f.verify(sys)));
        return LpResult::Infeasible(farkas);
    }
    match t.phase_two(objective, maximize) {
        PhaseTwo::Optimal => {
            let point = t.extract_point(sys.n_vars);
            let value = objective.iter().zip(&point).map(|(c, v)| c * v).sum();
            LpResult::Optimal { value, point }
        }
        PhaseTwo::Unbounded => LpResult::Unbounded,
    }
}

enum PhaseTwo {
    Optimal,
    Unbounded,
}

/// Dense simplex tableau: rows are constraints in the form `Ax = b`, `b ≥ 0`,
/// with slack and artificial columns appended.
struct Tableau {
    /// rows[i] = coefficients over all columns, then rhs last.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n_cols: usize,
    n_structural: usize,
    artificial_from: usize,
}

impl Tableau {
    fn build(sys: &System) -> Tableau {
        let m = sys.constraints.len();
        let n = sys.n_vars;
        // Count slacks: one per inequality.
        let n_slack = sys.constraints.iter().filter(|c| !c.equality).count();
        let n_cols = n + n_slack + m; // worst case: one artificial per row
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_idx = n;
        let mut art_idx = n + n_slack;
        for c in &sys.constraints {
            let mut row = vec![BigRational::zero(); n_cols + 1];
            let flip = c.rhs.is_negative();
            for (j, coeff) in c.coeffs.iter().enumerate() {
                row[j] = if flip { -coeff.clone() } else { coeff.clone() };
            }
            row[n_cols] = if flip { -c.rhs.clone() } else { c.rhs.clone() };
            if !c.equality {
                // a·x ≤ b  →  a·x + s = b;  flipped: −a·x − s = −b.
                row[slack_idx] = if flip { -BigRational::one() } else { BigRational::one() };
                if !flip {
                    basis.push(slack_idx);
                    slack_idx += 1;
                    rows.push(row);
                    continue;
                }
                slack_idx += 1;
            }
            row[art_idx] = BigRational::one();
            basis.push(art_idx);
            art_idx += 1;
            rows.push(row);
        }
        Tableau { rows, basis, n_cols, n_structural: n, artificial_from: n + n_slack }
    }

    /// Minimizes the sum of artificial variables.  Returns true when the
    /// minimum is zero, i.e. the original system is feasible.
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![BigRational::zero(); self.n_cols + 1];
        for j in self.artificial_from..self.n_cols {
            cost[j] = BigRational::one();
        }
        // Reduce the cost row against the starting basis.
        for (i, &b) in self.basis.iter().enumerate() {
            if b >= self.artificial_from {
                let row = self.rows[i].clone();
                for (c, r) in cost.iter_mut().zip(&row) {
                    *c -= r;
                }
            }
        }
        self.run_simplex(&mut cost);
        if cost[self.n_cols].is_negative() {
            // Residual cost = -(minimum of Σ artificials) is negative.
            return false;
        }
        // Pivot remaining artificials out of the basis where possible.
        for i in 0..self.basis.len() {
            if self.basis[i] >= self.artificial_from {
                let pivot_col = (0..self.artificial_from).find(|&j| !self.rows[i][j].is_zero());
                if let Some(j) = pivot_col {
                    self.pivot(i, j);
                }
                // A row with no structural coefficients is redundant (its rhs
                // is zero here); leaving the artificial basic at level 0 is
                // harmless for phase two because its column is dropped from
                // pricing.
            }
        }
        true
    }

    fn phase_two(&mut self, objective: &[BigRational], maximize: bool) -> PhaseTwo {
        let mut cost = vec![BigRational::zero(); self.n_cols + 1];
        for (j, c) in objective.iter().enumerate() {
            // Internally we minimize; maximization negates the objective.
            cost[j] = if maximize { -c.clone() } else { c.clone() };
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let factor = cost[b].clone();
                let row = self.rows[i].clone();
                for (c, r) in cost.iter_mut().zip(&row) {
                    *c -= &factor * r;
                }
            }
        }
        if self.run_simplex(&mut cost) {
            PhaseTwo::Optimal
        } else {
            PhaseTwo::Unbounded
        }
    }

    /// Bland's rule simplex on the current tableau; `cost` is maintained as a
    /// reduced-cost row.  Returns false on unboundedness.
    fn run_simplex(&mut self, cost: &mut Vec<BigRational>) -> bool {
        loop {
            // Entering: smallest index with negative reduced cost, skipping
            // artificial columns once phase one is over (they carry cost 0 in
            // phase one only while basic).
            let entering = (0..self.n_cols).find(|&j| cost[j].is_negative());
            let Some(e) = entering else { return true };
            // Leaving: minimum ratio, ties broken by smallest basis index.
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if a.is_positive() {
                    let ratio = &self.rows[i][self.n_cols] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((leave, _)) = best else { return false };
            self.pivot(leave, e);
            // Update the cost row.
            if !cost[e].is_zero() {
                let factor = cost[e].clone();
                let row = self.rows[leave].clone();
                for (c, r) in cost.iter_mut().zip(&row) {
                    *c -= &factor * r;
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        debug_assert!(!p.is_zero());
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    fn extract_point(&self, n: usize) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_structural {
                x[b] = self.rows[i][self.n_cols].clone();
            }
        }
        x
    }
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin elimination with combination tracking.
// ---------------------------------------------------------------------------

/// An inequality `coeffs · x ≤ rhs` carrying its provenance: the nonnegative
/// combination of the original rows that produced it.
#[derive(Clone, Debug)]
pub struct TrackedRow {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
    pub combo: Vec<BigRational>,
}

pub enum FmError {
    /// Row count exceeded the safety cap.
    Blowup,
}

/// Turns a [`System`] into pure `≤`-rows over the same variables, splitting
/// equalities and appending the `x_j ≥ 0` rows.  The combination index space
/// is: one slot per original constraint (equalities get a signed multiplier),
/// then one slot per variable for the nonnegativity rows.
fn as_le_rows(sys: &System) -> (Vec<TrackedRow>, usize) {
    let n = sys.n_vars;
    let m = sys.constraints.len();
    let combo_len = m + n;
    let mut rows = Vec::new();
    for (i, c) in sys.constraints.iter().enumerate() {
        let mut combo = vec![BigRational::zero(); combo_len];
        combo[i] = BigRational::one();
        rows.push(TrackedRow { coeffs: c.coeffs.clone(), rhs: c.rhs.clone(), combo });
        if c.equality {
            let mut combo = vec![BigRational::zero(); combo_len];
            combo[i] = -BigRational::one();
            rows.push(TrackedRow {
                coeffs: c.coeffs.iter().map(|v| -v.clone()).collect(),
                rhs: -c.rhs.clone(),
                combo,
            });
        }
    }
    for j in 0..n {
        let mut coeffs = vec![BigRational::zero(); n];
        coeffs[j] = -BigRational::one();
        let mut combo = vec![BigRational::zero(); combo_len];
        combo[m + j] = BigRational::one();
        rows.push(TrackedRow { coeffs, rhs: BigRational::zero(), combo });
    }
    (rows, combo_len)
}

const FM_ROW_CAP: usize = 50_000;

/// Eliminates the listed variables (indices into the coefficient vectors) by
/// Fourier–Motzkin.  The returned rows only mention the surviving variables
/// (coefficients of eliminated ones are zero).
pub fn fm_eliminate(mut rows: Vec<TrackedRow>, eliminate: &[usize]) -> Result<Vec<TrackedRow>, FmError> {
    for &var in eliminate {
        let mut zero = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for r in rows {
            let c = &r.coeffs[var];
            if c.is_zero() {
                zero.push(r);
            } else if c.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        let mut next = zero;
        for p in &pos {
            for m in &neg {
                // (1/p_c)·p + (1/|m_c|)·m cancels the variable.
                let pc = p.coeffs[var].clone();
                let mc = -m.coeffs[var].clone();
                let coeffs: Vec<BigRational> = p
                    .coeffs
                    .iter()
                    .zip(&m.coeffs)
                    .map(|(a, b)| a / &pc + b / &mc)
                    .collect();
                let rhs = &p.rhs / &pc + &m.rhs / &mc;
                let combo: Vec<BigRational> = p
                    .combo
                    .iter()
                    .zip(&m.combo)
                    .map(|(a, b)| a / &pc + b / &mc)
                    .collect();
                let row = TrackedRow { coeffs, rhs, combo };
                if !trivially_true(&row) {
                    next.push(row);
                }
            }
        }
        dedup_rows(&mut next);
        if next.len() > FM_ROW_CAP {
            return Err(FmError::Blowup);
        }
        rows = next;
    }
    Ok(rows)
}

fn trivially_true(r: &TrackedRow) -> bool {
    r.coeffs.iter().all(|c| c.is_zero()) && !r.rhs.is_negative()
}

fn dedup_rows(rows: &mut Vec<TrackedRow>) {
    use std::collections::HashSet;
    let mut seen = HashSet::new();
    rows.retain(|r| {
        // Normalize by the first nonzero coefficient's absolute value (or the
        // rhs for pure bounds) so scalar multiples collapse.
        let scale = r
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(|| if r.rhs.is_zero() { BigRational::one() } else { r.rhs.abs() });
        let key: Vec<String> = r
            .coeffs
            .iter()
            .chain(std::iter::once(&r.rhs))
            .map(|c| (c / &scale).to_string())
            .collect();
        seen.insert(key.join("|"))
    });
}

/// Produces a Farkas certificate for an infeasible system by eliminating all
/// variables and reading off the contradictory row's combination.
pub fn farkas_certificate(sys: &System) -> Option<Farkas> {
    let (rows, _) = as_le_rows(sys);
    let all: Vec<usize> = (0..sys.n_vars).collect();
    let rows = fm_eliminate(rows, &all).ok()?;
    let bad = rows.iter().find(|r| r.rhs.is_negative())?;
    // Fold the x_j ≥ 0 slots back: a multiplier on −x_j ≤ 0 only raises the
    // combined coefficient of x_j, so dropping those slots keeps the combined
    // coefficients nonnegative and the rhs untouched.
    let m = sys.constraints.len();
    Some(Farkas { multipliers: bad.combo[..m].to_vec() })
}

/// Feasibility via pure Fourier–Motzkin; used as a cross-check engine.
pub fn fm_feasible(sys: &System) -> Option<bool> {
    let (rows, _) = as_le_rows(sys);
    let all: Vec<usize> = (0..sys.n_vars).collect();
    let rows = fm_eliminate(rows, &all).ok()?;
    Some(rows.iter().all(|r| !r.rhs.is_negative()))
}

/// Projects a system onto one variable and returns exact `[lo, hi]` bounds
/// (`None` = unbounded on that side).  The system must be feasible.
pub fn project_interval(
    sys: &System,
    var: usize,
) -> Result<(Option<BigRational>, Option<BigRational>), FmError> {
    let (rows, _) = as_le_rows(sys);
    // Higher indices first: callers order variables so that the deeper,
    // locally-coupled ones come last, which keeps the elimination sparse.
    let eliminate: Vec<usize> = (0..sys.n_vars).filter(|&j| j != var).rev().collect();
    let rows = fm_eliminate(rows, &eliminate)?;
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for r in &rows {
        let c = &r.coeffs[var];
        if c.is_zero() {
            continue;
        }
        let bound = &r.rhs / c;
        if c.is_positive() {
            if hi.as_ref().map_or(true, |h| bound < *h) {
                hi = Some(bound);
            }
        } else if lo.as_ref().map_or(true, |l| bound > *l) {
            lo = Some(bound);
        }
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------------------
// Double description: extreme rays of {x ≥ 0 : Ax = 0}.
// ---------------------------------------------------------------------------

/// Extreme rays of the cone `{x ∈ ℚ^n : x ≥ 0, a·x = 0 for all rows}`,
/// normalized to coprime integer vectors.
pub fn extreme_rays(n_vars: usize, rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut rays: Vec<Vec<BigRational>> = (0..n_vars)
        .map(|j| {
            let mut v = vec![BigRational::zero(); n_vars];
            v[j] = BigRational::one();
            v
        })
        .collect();
    for a in rows {
        let vals: Vec<BigRational> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next: Vec<Vec<BigRational>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if v.is_zero() {
                next.push(r.clone());
            }
        }
        for (ri, vi) in rays.iter().zip(&vals) {
            if !vi.is_positive() {
                continue;
            }
            for (rj, vj) in rays.iter().zip(&vals) {
                if !vj.is_negative() {
                    continue;
                }
                if !adjacent(&rays, ri, rj) {
                    continue;
                }
                let mut combo = vec![BigRational::zero(); n_vars];
                for k in 0..n_vars {
                    combo[k] = vi * &rj[k] - vj * &ri[k];
                }
                next.push(normalize_ray(combo));
            }
        }
        dedup_rays(&mut next);
        rays = next;
    }
    rays
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn zero_set(r: &[BigRational]) -> Vec<bool> {
    r.iter().map(|v| v.is_zero()).collect()
}

fn adjacent(rays: &[Vec<BigRational>], a: &[BigRational], b: &[BigRational]) -> bool {
    let za = zero_set(a);
    let zb = zero_set(b);
    let meet: Vec<bool> = za.iter().zip(&zb).map(|(x, y)| *x && *y).collect();
    for r in rays {
        if r == a || r == b {
            continue;
        }
        let zr = zero_set(r);
        if meet.iter().zip(&zr).all(|(m, z)| !*m || *z) {
            return false;
        }
    }
    true
}

fn normalize_ray(r: Vec<BigRational>) -> Vec<BigRational> {
    let mut lcm = BigInt::one();
    for v in &r {
        lcm = lcm.lcm(v.denom());
    }
    let ints: Vec<BigInt> = r.iter().map(|v| v.numer() * &lcm / v.denom()).collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    ints.into_iter().map(|v| BigRational::from(v / &gcd)).collect()
}

fn dedup_rays(rays: &mut Vec<Vec<BigRational>>) {
    use std::collections::HashSet;
    let mut seen = HashSet::new();
    rays.retain(|r| {
        let key: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        seen.insert(key.join("|"))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn sys(n: usize, cons: Vec<Constraint>) -> System {
        let mut s = System::new(n);
        for c in cons {
            s.push(c);
        }
        s
    }

    #[test]
    fn simplex_simple_max() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6  →  optimum 14/5 at (8/5, 6/5).
        let s = sys(
            2,
            vec![
                Constraint::le(vec![int(1), int(2)], int(4)),
                Constraint::le(vec![int(3), int(1)], int(6)),
            ],
        );
        match maximize(&s, &[int(1), int(1)]) {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, rat(14, 5));
                assert!(s.satisfied_by(&point));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplex_detects_infeasible_with_certificate() {
        // x = 1 and x = 2 simultaneously.
        let s = sys(
            1,
            vec![
                Constraint::eq(vec![int(1)], int(1)),
                Constraint::eq(vec![int(1)], int(2)),
            ],
        );
        match maximize(&s, &[int(0)]) {
            LpResult::Infeasible(Some(f)) => assert!(f.verify(&s)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(fm_feasible(&s), Some(false));
    }

    #[test]
    fn simplex_detects_unbounded() {
        let s = sys(1, vec![Constraint::le(vec![int(-1)], int(0))]);
        assert!(matches!(maximize(&s, &[int(1)]), LpResult::Unbounded));
    }

    #[test]
    fn simplex_equality_system() {
        // x + y = 1, maximize x with x ≤ 1/3.
        let s = sys(
            2,
            vec![
                Constraint::eq(vec![int(1), int(1)], int(1)),
                Constraint::le(vec![int(1), int(0)], rat(1, 3)),
            ],
        );
        match maximize(&s, &[int(1), int(0)]) {
            LpResult::Optimal { value, .. } => assert_eq!(value, rat(1, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fm_interval_projection() {
        // x = s + t, y = s + 2t, s,t ≥ 0, y = 1  →  x ∈ [1/2, 1].
        let s = sys(
            4,
            vec![
                Constraint::eq(vec![int(1), int(0), int(-1), int(-1)], int(0)),
                Constraint::eq(vec![int(0), int(1), int(-1), int(-2)], int(0)),
                Constraint::eq(vec![int(0), int(1), int(0), int(0)], int(1)),
            ],
        );
        let (lo, hi) = project_interval(&s, 0).ok().unwrap();
        assert_eq!(lo, Some(rat(1, 2)));
        assert_eq!(hi, Some(int(1)));
    }

    #[test]
    fn extreme_rays_of_trace_like_cone() {
        // {x ≥ 0 : x0 = x1} has the single ray (1,1); adding x0 = 2·x0 kills it.
        let rays = extreme_rays(2, &[vec![int(1), int(-1)]]);
        assert_eq!(rays, vec![vec![int(1), int(1)]]);
        let rays = extreme_rays(1, &[vec![int(1)]]);
        assert!(rays.is_empty());
    }

    #[test]
    fn extreme_rays_positive_orthant() {
        let rays = extreme_rays(3, &[]);
        assert_eq!(rays.len(), 3);
    }

    #[test]
    fn simplex_and_fm_agree_on_small_systems() {
        // A few random-ish fixed systems.
        let cases = vec![
            sys(2, vec![Constraint::le(vec![int(1), int(1)], int(-1))]),
            sys(
                2,
                vec![
                    Constraint::eq(vec![int(1), int(-1)], int(0)),
                    Constraint::le(vec![int(-1), int(0)], int(-2)),
                ],
            ),
            sys(
                3,
                vec![
                    Constraint::eq(vec![int(1), int(1), int(1)], int(1)),
                    Constraint::le(vec![int(-1), int(0), int(0)], rat(-1, 2)),
                    Constraint::le(vec![int(0), int(-1), int(0)], rat(-3, 4)),
                ],
            ),
        ];
        for s in cases {
            let via_simplex = feasible_point(&s).is_ok();
            assert_eq!(fm_feasible(&s), Some(via_simplex));
        }
    }
}
