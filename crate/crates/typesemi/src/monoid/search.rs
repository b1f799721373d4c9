//! Rewrite-search engines: budgeted breadth-first derivation search, the
//! congruence decision, and constructive ideal-membership derivations.
//!
//! The search explores elements in order of total coefficient mass, ties
//! broken lexicographically, so runs are deterministic and certificates
//! replay byte-identically.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{
    BudgetReport, Certificate, CongruenceInvariant, Derivation, DirectedRule, Element,
    InputError, Judgement, MonoidPresentation, SearchBudget, Step, Verdict,
};

pub struct SearchOutcome {
    pub derivation: Option<Derivation>,
    pub report: BudgetReport,
}

/// Breadth-first search for a derivation `x ≤ y`.
///
/// Moves: rewrite `l + c → r + c` for any directed rule with `l ≤ v`
/// pointwise, and `v → v + g` for a single generator `g` (the `0 ≤ g` axiom;
/// general additions compose from these).
pub fn derive_leq(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> SearchOutcome {
    let rules = p.directed_rules();
    run_search(p, x, budget, &rules, /*additions=*/ true, |v| v == y)
}

fn run_search(
    p: &MonoidPresentation,
    x: &Element,
    budget: &SearchBudget,
    rules: &[DirectedRule],
    additions: bool,
    mut is_goal: impl FnMut(&Element) -> bool,
) -> SearchOutcome {
    let mut report = BudgetReport::default();
    let mut parents: HashMap<Element, Option<(Element, Step)>> = HashMap::new();
    // Frontier ordered by (total mass, coefficients lexicographically).
    let mut frontier: BTreeSet<(u64, Element)> = BTreeSet::new();
    parents.insert(x.clone(), None);
    frontier.insert((x.total(), x.clone()));
    if is_goal(x) {
        report.exhausted = false;
        return SearchOutcome { derivation: Some(Derivation::trivial(x.clone())), report };
    }
    while let Some((_, v)) = frontier.pop_first() {
        if report.nodes_expanded >= budget.node_cap {
            report.node_cap_hit = true;
            return SearchOutcome { derivation: None, report };
        }
        report.nodes_expanded += 1;
        let mut successors: Vec<(Element, Step)> = Vec::new();
        for rule in rules {
            if let Some(context) = v.checked_sub(&rule.smaller) {
                let next = rule.larger.add(&context);
                successors.push((
                    next,
                    Step::Rewrite { relation: rule.relation, forward: rule.forward, context },
                ));
            }
        }
        if additions {
            for g in 0..p.arity() {
                let next = v.add(&Element::unit(p.arity(), g));
                successors.push((next, Step::AddGenerator { generator: g }));
            }
        }
        for (next, step) in successors {
            if next.coeffs.iter().any(|&c| c > budget.coeff_cap) {
                report.coeff_cap_hit = true;
                continue;
            }
            if parents.contains_key(&next) {
                continue;
            }
            parents.insert(next.clone(), Some((v.clone(), step)));
            if is_goal(&next) {
                let derivation = reconstruct(&parents, x, &next);
                return SearchOutcome { derivation: Some(derivation), report };
            }
            frontier.insert((next.total(), next));
        }
    }
    report.exhausted = true;
    SearchOutcome { derivation: None, report }
}

fn reconstruct(
    parents: &HashMap<Element, Option<(Element, Step)>>,
    start: &Element,
    end: &Element,
) -> Derivation {
    let mut steps = Vec::new();
    let mut cur = end.clone();
    while &cur != start {
        let Some(Some((prev, step))) = parents.get(&cur) else { break };
        steps.push(step.clone());
        cur = prev.clone();
    }
    steps.reverse();
    Derivation { start: start.clone(), steps, end: end.clone() }
}

/// Constructs a derivation `x ≤ n·y` from the ideal fixpoint: every generator
/// in the closure carries an inductively built derivation `g ≤ n_g·y`, and
/// these compose in context.  Returns `None` only if the multiplier overflows
/// the sanity cap.
pub fn construct_ideal_derivation(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
) -> Option<(u64, Derivation)> {
    const N_CAP: u64 = 1 << 20;
    let rules = p.directed_rules();
    // per-generator: (multiplier n_g, derivation g ≤ n_g·y)
    let mut cert: Vec<Option<(u64, Derivation)>> = vec![None; p.arity()];
    for g in y.support() {
        // g ≤ y by adding the remaining generators of y.
        let gx = Element::unit(p.arity(), g);
        let rest = y.checked_sub(&gx).expect("generator occurs in y");
        let d = additions_derivation(&gx, &rest);
        cert[g] = Some((1, d));
    }
    loop {
        let mut progressed = false;
        for rule in &rules {
            if !rule.larger.support().all(|g| cert[g].is_some()) {
                continue;
            }
            // r ≤ N_r · y where N_r sums the certified bounds.
            let mut n_r: u64 = 0;
            for (g, &c) in rule.larger.coeffs.iter().enumerate() {
                if c > 0 {
                    n_r = n_r.checked_add(c.checked_mul(cert[g].as_ref().unwrap().0)?)?;
                }
            }
            if n_r > N_CAP {
                return None;
            }
            for g in rule.smaller.support() {
                if cert[g].is_none() {
                    // g ≤ l ≤ r ≤ N_r·y
                    let gx = Element::unit(p.arity(), g);
                    let to_l = additions_derivation(
                        &gx,
                        &rule.smaller.checked_sub(&gx).expect("g occurs in smaller side"),
                    );
                    let rewrite = Derivation {
                        start: rule.smaller.clone(),
                        steps: vec![Step::Rewrite {
                            relation: rule.relation,
                            forward: rule.forward,
                            context: Element::zero(p.arity()),
                        }],
                        end: rule.larger.clone(),
                    };
                    let expand = expand_to_multiple(p, &rule.larger, y, &cert)?;
                    let d = to_l.chain(rewrite).chain(expand);
                    cert[g] = Some((n_r, d));
                    progressed = true;
                }
            }
        }
        if !progressed {
            break;
        }
    }
    if !x.support().all(|g| cert[g].is_some()) {
        return None;
    }
    // x ≤ Σ c_g·n_g · y: replace each unit of x in turn, in context.
    let mut n_total: u64 = 0;
    for (g, &c) in x.coeffs.iter().enumerate() {
        if c > 0 {
            n_total = n_total.checked_add(c.checked_mul(cert[g].as_ref().unwrap().0)?)?;
        }
    }
    if n_total > N_CAP {
        return None;
    }
    let d = expand_to_multiple(p, x, y, &cert)?;
    Some((n_total, d))
}

/// Derivation `v ≤ Σ_g v_g·n_g·y` replacing the units of `v` one at a time.
fn expand_to_multiple(
    p: &MonoidPresentation,
    v: &Element,
    y: &Element,
    cert: &[Option<(u64, Derivation)>],
) -> Option<Derivation> {
    let mut current = v.clone();
    let mut derivation = Derivation::trivial(v.clone());
    let mut remaining = v.clone();
    for g in 0..p.arity() {
        while remaining.coeffs[g] > 0 {
            let (n_g, d_g) = cert[g].as_ref()?;
            let gx = Element::unit(p.arity(), g);
            let context = current.checked_sub(&gx).expect("unit present");
            derivation = derivation.chain(d_g.shifted(&context));
            remaining.coeffs[g] -= 1;
            current = context.add(&y.scale(*n_g));
        }
    }
    Some(derivation)
}

/// Derivation `v ≤ v + extra` by adding `extra`'s generators one at a time.
fn additions_derivation(v: &Element, extra: &Element) -> Derivation {
    let mut steps = Vec::new();
    for (g, &c) in extra.coeffs.iter().enumerate() {
        for _ in 0..c {
            steps.push(Step::AddGenerator { generator: g });
        }
    }
    Derivation { start: v.clone(), steps, end: v.add(extra) }
}

/// Decides the congruence generated by the `==` relations.
///
/// Forward: undirected rewrite search (no addition moves).  Refutation: the
/// difference `x − y` must lie in the ℤ-lattice spanned by the relation
/// differences; a diagonalization of that lattice either confirms membership
/// or produces a separating linear invariant.
pub fn decide_congruent(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    // Rewrites from == relations only.
    let rules: Vec<DirectedRule> = p
        .directed_rules()
        .into_iter()
        .filter(|r| p.relations[r.relation].kind == super::RelationKind::Eq)
        .collect();
    let outcome = run_search(p, x, budget, &rules, /*additions=*/ false, |v| v == y);
    if let Some(d) = outcome.derivation {
        return Ok(Judgement::proved(d, outcome.report));
    }
    // Lattice invariant refutation.
    let diffs: Vec<Vec<BigInt>> = p
        .relations
        .iter()
        .filter(|r| r.kind == super::RelationKind::Eq)
        .map(|r| {
            (0..p.arity())
                .map(|g| BigInt::from(r.rhs.coeffs[g]) - BigInt::from(r.lhs.coeffs[g]))
                .collect()
        })
        .collect();
    let target: Vec<BigInt> =
        (0..p.arity()).map(|g| BigInt::from(x.coeffs[g]) - BigInt::from(y.coeffs[g])).collect();
    if let Some(inv) = lattice_separation(&diffs, &target, p.arity()) {
        let mut j = Judgement {
            verdict: Verdict::Refuted,
            certificate: Certificate::Invariant(inv),
            note: Some("x - y is outside the lattice of relation differences".into()),
            report: outcome.report,
        };
        j.report = outcome.report;
        return Ok(j);
    }
    Ok(Judgement::unknown(outcome.report))
}

/// If `target` is not in the ℤ-span of `rows`, returns a separating
/// invariant: weights `w` with `w·row ≡ 0` for every row and `w·target ≢ 0`,
/// either over ℤ (modulus 0) or modulo a positive integer.
fn lattice_separation(rows: &[Vec<BigInt>], target: &[BigInt], n: usize) -> Option<CongruenceInvariant> {
    // Diagonalize A (columns = lattice generators) with row transforms U:
    // U·A·V = D diagonal.  Then target ∈ span(cols) iff (U·target) is
    // componentwise compatible with D.
    let m = rows.len();
    // a is n×m with columns the lattice generators; u tracks row operations.
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..m).map(|j| rows[j][i].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect();
    let rows_n = n;
    let cols_n = m;
    let mut rank = 0usize;
    while rank < rows_n && rank < cols_n {
        // Pivot: smallest-magnitude nonzero entry of the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        for i in rank..rows_n {
            for j in rank..cols_n {
                if !a[i][j].is_zero() {
                    let mag = a[i][j].abs();
                    if best.as_ref().map_or(true, |b| mag < *b) {
                        best = Some(mag);
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(rank, pi);
        u.swap(rank, pi);
        for row in a.iter_mut() {
            row.swap(rank, pj);
        }
        // Euclidean cleaning within the trailing submatrix.  Rows above and
        // columns left of `rank` are already zero off their diagonal, and
        // submatrix rows have zeros in the cleaned columns, so these
        // operations cannot dirty finished parts.
        loop {
            let mut swapped = false;
            for i in rank + 1..rows_n {
                if a[i][rank].is_zero() {
                    continue;
                }
                let q = &a[i][rank] / &a[rank][rank];
                if !q.is_zero() {
                    for j in 0..cols_n {
                        let t = &q * &a[rank][j];
                        a[i][j] -= t;
                    }
                    for j in 0..n {
                        let t = &q * &u[rank][j];
                        u[i][j] -= t;
                    }
                }
                if !a[i][rank].is_zero() {
                    // Strictly smaller remainder becomes the pivot.
                    a.swap(rank, i);
                    u.swap(rank, i);
                    swapped = true;
                    break;
                }
            }
            if swapped {
                continue;
            }
            for j in rank + 1..cols_n {
                if a[rank][j].is_zero() {
                    continue;
                }
                let q = &a[rank][j] / &a[rank][rank];
                if !q.is_zero() {
                    for i in 0..rows_n {
                        let t = &q * &a[i][rank];
                        a[i][j] -= t;
                    }
                }
                if !a[rank][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(rank, j);
                    }
                    swapped = true;
                    break;
                }
            }
            if !swapped {
                break;
            }
        }
        rank += 1;
    }
    // t = U · target must have t_i ≡ 0 mod d_i for i < rank and t_i = 0 after.
    let t: Vec<BigInt> = (0..rows_n)
        .map(|i| (0..n).map(|j| &u[i][j] * &target[j]).sum())
        .collect();
    for i in 0..rows_n {
        if i < rank && i < cols_n {
            let d = a[i][i].abs();
            if !d.is_zero() && !(&t[i] % &d).is_zero() {
                return Some(CongruenceInvariant { weights: u[i].clone(), modulus: d });
            }
        } else if !t[i].is_zero() {
            return Some(CongruenceInvariant { weights: u[i].clone(), modulus: BigInt::zero() });
        }
    }
    None
}
