//! Finitely presented and explicitly tabulated preordered abelian monoids.
//!
//! A presentation consists of named generators and relations between
//! ℕ-linear combinations of them.  The preorder it presents is the smallest
//! reflexive, transitive, translation-invariant relation containing the
//! relations together with `0 ≤ x` for every `x`.  Decision procedures are
//! budgeted and three-valued; `PROVED` and `REFUTED` verdicts are sound
//! unconditionally and carry replayable certificates.

use std::fmt;

use num_bigint::BigInt;

use crate::states::StateVector;

pub mod finite;
pub mod oracle;
pub(crate) mod search;

pub use finite::FiniteMonoid;

/// An element of the free abelian monoid on a presentation's generators,
/// stored densely: `coeffs[g]` is the multiplicity of generator `g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub coeffs: Vec<u64>,
}

impl Element {
    pub fn zero(arity: usize) -> Self {
        Element { coeffs: vec![0; arity] }
    }

    pub fn unit(arity: usize, generator: usize) -> Self {
        let mut coeffs = vec![0; arity];
        coeffs[generator] = 1;
        Element { coeffs }
    }

    pub fn from_counts(arity: usize, counts: &[(usize, u64)]) -> Self {
        let mut coeffs = vec![0; arity];
        for &(g, c) in counts {
            coeffs[g] += c;
        }
        Element { coeffs }
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Total coefficient mass.
    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &Element) -> Element {
        Element {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Element {
        Element { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// `self - other` when `other ≤ self` pointwise.
    pub fn checked_sub(&self, other: &Element) -> Option<Element> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            coeffs.push(a.checked_sub(*b)?);
        }
        Some(Element { coeffs })
    }

    pub fn leq_pointwise(&self, other: &Element) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c > 0).map(|(g, _)| g)
    }

    pub fn display(&self, generators: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (g, &c) in self.coeffs.iter().enumerate() {
            if c == 1 {
                parts.push(generators[g].clone());
            } else if c > 1 {
                parts.push(format!("{}*{}", c, generators[g]));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Le,
    Eq,
}

/// A generating relation `lhs ≤ rhs` or `lhs == rhs`.  Equalities are treated
/// everywhere as the two inequalities they abbreviate.
#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: Element,
    pub rhs: Element,
    pub kind: RelationKind,
}

/// A single rewrite direction of a relation, used by the search engines.
#[derive(Clone, Debug)]
pub struct DirectedRule {
    pub smaller: Element,
    pub larger: Element,
    pub relation: usize,
    /// true when this is the stored `lhs ≤ rhs` direction.
    pub forward: bool,
}

#[derive(Clone, Debug)]
pub struct MonoidPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    UndeclaredGenerator(String),
    ArityMismatch { expected: usize, got: usize },
    ZeroElement(&'static str),
    DuplicateGenerator(String),
    EmptyGeneratorList,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::UndeclaredGenerator(g) => write!(f, "undeclared generator `{g}`"),
            InputError::ArityMismatch { expected, got } => {
                write!(f, "element has {got} coefficients, presentation has {expected} generators")
            }
            InputError::ZeroElement(op) => write!(f, "{op} requires a nonzero element"),
            InputError::DuplicateGenerator(g) => write!(f, "generator `{g}` declared twice"),
            InputError::EmptyGeneratorList => write!(f, "presentation has no generators"),
        }
    }
}

impl std::error::Error for InputError {}

impl MonoidPresentation {
    pub fn new<S: Into<String>>(generators: Vec<S>) -> Result<Self, InputError> {
        let generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !seen.insert(g.clone()) {
                return Err(InputError::DuplicateGenerator(g.clone()));
            }
        }
        Ok(MonoidPresentation { generators, relations: Vec::new() })
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, InputError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| InputError::UndeclaredGenerator(name.into()))
    }

    /// Builds an element from `(name, multiplicity)` pairs.
    pub fn element(&self, counts: &[(&str, u64)]) -> Result<Element, InputError> {
        let mut e = Element::zero(self.arity());
        for &(name, c) in counts {
            let g = self.generator_index(name)?;
            e.coeffs[g] += c;
        }
        Ok(e)
    }

    pub fn check_element(&self, e: &Element) -> Result<(), InputError> {
        if e.arity() != self.arity() {
            return Err(InputError::ArityMismatch { expected: self.arity(), got: e.arity() });
        }
        Ok(())
    }

    pub fn relate(&mut self, lhs: Element, rhs: Element, kind: RelationKind) -> &mut Self {
        assert_eq!(lhs.arity(), self.arity());
        assert_eq!(rhs.arity(), self.arity());
        self.relations.push(Relation { lhs, rhs, kind });
        self
    }

    pub fn le(&mut self, lhs: Element, rhs: Element) -> &mut Self {
        self.relate(lhs, rhs, RelationKind::Le)
    }

    pub fn eq(&mut self, lhs: Element, rhs: Element) -> &mut Self {
        self.relate(lhs, rhs, RelationKind::Eq)
    }

    /// All rewrite directions: one per `≤` relation, two per `==` relation.
    pub fn directed_rules(&self) -> Vec<DirectedRule> {
        let mut rules = Vec::new();
        for (i, r) in self.relations.iter().enumerate() {
            rules.push(DirectedRule {
                smaller: r.lhs.clone(),
                larger: r.rhs.clone(),
                relation: i,
                forward: true,
            });
            if r.kind == RelationKind::Eq {
                rules.push(DirectedRule {
                    smaller: r.rhs.clone(),
                    larger: r.lhs.clone(),
                    relation: i,
                    forward: false,
                });
            }
        }
        rules
    }

    /// The presentation of the quotient by the ideal generated by the given
    /// elements: each ideal generator is forced equal to zero.  The congruence
    /// `x + a = y + b` with `a, b` in the ideal is exactly the congruence
    /// generated by `i ~ 0`, so this presents the quotient monoid.
    pub fn quotient_by_ideal(&self, ideal_gens: &[Element]) -> MonoidPresentation {
        let mut q = self.clone();
        for g in ideal_gens {
            q.relations.push(Relation {
                lhs: g.clone(),
                rhs: Element::zero(self.arity()),
                kind: RelationKind::Eq,
            });
        }
        q
    }

    /// Least set of generators `F ⊇ supp(seed)` closed under: whenever a rule
    /// `l ≤ r` has `supp(r) ⊆ F`, then `supp(l) ⊆ F`.
    ///
    /// `F` is exactly the set of generators lying in the ideal generated by
    /// `seed`: membership derivations reverse through the closure, and every
    /// member admits a derivation `g ≤ n·seed` built from the closure steps.
    pub fn ideal_closure(&self, seed: &Element) -> Vec<bool> {
        let rules = self.directed_rules();
        let mut in_f = vec![false; self.arity()];
        for g in seed.support() {
            in_f[g] = true;
        }
        loop {
            let mut changed = false;
            for rule in &rules {
                if rule.larger.support().all(|g| in_f[g]) {
                    for g in rule.smaller.support() {
                        if !in_f[g] {
                            in_f[g] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return in_f;
            }
        }
    }
}

/// Budgets for the rewrite searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Bound on multiplier searches such as `(n+1)x ≤ n·y`.
    pub n_max: u32,
    /// Per-generator coefficient cap during search.
    pub coeff_cap: u64,
    /// Bound on expanded search nodes.
    pub node_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { n_max: 8, coeff_cap: 32, node_cap: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BudgetReport {
    pub nodes_expanded: usize,
    pub coeff_cap_hit: bool,
    pub node_cap_hit: bool,
    /// The search frontier emptied: every element reachable within the caps
    /// was enumerated.  Combined with `!coeff_cap_hit && !node_cap_hit` the
    /// enumeration is complete outright.
    pub exhausted: bool,
}

impl BudgetReport {
    /// True when the search provably enumerated the full reachable set.
    pub fn complete(&self) -> bool {
        self.exhausted && !self.coeff_cap_hit && !self.node_cap_hit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Refuted,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proved => write!(f, "PROVED"),
            Verdict::Refuted => write!(f, "REFUTED"),
            Verdict::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// One step of a derivation: either a relation applied in context, or a
/// single generator added (the `0 ≤ x` axiom, restricted to unit additions,
/// which compose to arbitrary ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Rewrite { relation: usize, forward: bool, context: Element },
    AddGenerator { generator: usize },
}

/// A replayable witness for `start ≤ end` in the presented preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Element,
    pub steps: Vec<Step>,
    pub end: Element,
}

impl Derivation {
    pub fn trivial(x: Element) -> Self {
        Derivation { start: x.clone(), steps: Vec::new(), end: x }
    }

    /// The same derivation translated by `z`: witnesses `start+z ≤ end+z`.
    pub fn shifted(&self, z: &Element) -> Derivation {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Rewrite { relation, forward, context } => Step::Rewrite {
                    relation: *relation,
                    forward: *forward,
                    context: context.add(z),
                },
                Step::AddGenerator { generator } => Step::AddGenerator { generator: *generator },
            })
            .collect();
        Derivation { start: self.start.add(z), steps, end: self.end.add(z) }
    }

    /// Concatenates with a derivation starting where this one ends.
    pub fn chain(mut self, next: Derivation) -> Derivation {
        assert_eq!(self.end, next.start);
        self.steps.extend(next.steps);
        self.end = next.end;
        self
    }
}

/// A ℤ-linear functional that every relation difference annihilates
/// (modulo `modulus`; a zero modulus means "annihilates exactly over ℤ")
/// while the claimed pair is separated.  Refutes congruence of two elements.
#[derive(Clone, Debug)]
pub struct CongruenceInvariant {
    pub weights: Vec<BigInt>,
    /// Zero means the invariant is ℤ-valued; otherwise values live in ℤ/m.
    pub modulus: BigInt,
}

/// Evidence read off an explicit Cayley table / order matrix; replay re-reads
/// the table.
#[derive(Clone, Debug)]
pub struct TableEvidence {
    /// Element indices and the claim about them, e.g. `leq[x][y] == false`.
    pub facts: Vec<TableFact>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableFact {
    Leq { x: usize, y: usize, holds: bool },
    Sum { x: usize, y: usize, result: usize },
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Derivation(Derivation),
    State(StateVector),
    Invariant(CongruenceInvariant),
    Table(TableEvidence),
    Budget(BudgetReport),
}

/// Three-valued verdict with its certificate.
#[derive(Clone, Debug)]
pub struct Judgement {
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Which reasoning branch produced the verdict; human-readable.
    pub note: Option<String>,
    pub report: BudgetReport,
}

impl Judgement {
    pub fn proved(d: Derivation, report: BudgetReport) -> Self {
        Judgement { verdict: Verdict::Proved, certificate: Certificate::Derivation(d), note: None, report }
    }

    pub fn refuted_by_state(s: StateVector, report: BudgetReport) -> Self {
        Judgement { verdict: Verdict::Refuted, certificate: Certificate::State(s), note: None, report }
    }

    pub fn unknown(report: BudgetReport) -> Self {
        Judgement { verdict: Verdict::Unknown, certificate: Certificate::Budget(report), note: None, report }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match &self.certificate {
            Certificate::Derivation(d) => Some(d),
            _ => None,
        }
    }

    pub fn state(&self) -> Option<&StateVector> {
        match &self.certificate {
            Certificate::State(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

/// Decides `x ≤ y` in the presented preorder.
///
/// `PROVED` carries a derivation; `REFUTED` carries an exact state `ν` with
/// `ν(x) > ν(y)` (states are additive and order-preserving, so this refutes
/// the inequality in the full monoid, independent of any budget).
pub fn leq(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    p.check_element(x)?;
    p.check_element(y)?;
    let outcome = search::derive_leq(p, x, y, budget);
    if let Some(d) = outcome.derivation {
        return Ok(Judgement::proved(d, outcome.report));
    }
    if let Some(state) = crate::states::refute_leq(p, x, y) {
        return Ok(Judgement::refuted_by_state(state, outcome.report));
    }
    Ok(Judgement::unknown(outcome.report))
}

/// Decides `x ∈ ⟨y⟩`, the ideal generated by `y`.
///
/// Membership of the *generators* in `⟨y⟩` is computed exactly by the least
/// fixpoint [`MonoidPresentation::ideal_closure`]; on membership an explicit
/// derivation `x ≤ n·y` is constructed (the multiplier may exceed the budget's
/// `n_max`, in which case the verdict is still sound and noted).
pub fn ideal_membership(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    p.check_element(x)?;
    p.check_element(y)?;
    if y.is_zero() {
        return Err(InputError::ZeroElement("ideal_membership"));
    }
    if x.is_zero() {
        return Ok(Judgement::proved(Derivation::trivial(x.clone()), BudgetReport::default()));
    }
    let closure = p.ideal_closure(y);
    if !x.support().all(|g| closure[g]) {
        // Outside the closure: the state that is zero on the closure and ∞
        // off it is a genuine state with ν(y) finite and ν(x) = ∞.
        let state = crate::states::closure_zero_state(p, &closure);
        return Ok(Judgement::refuted_by_state(state, BudgetReport::default())
            .with_note("x has a generator outside the finiteness-forced set of y"));
    }
    // Search small multipliers first so certificates stay short.
    let mut last_report = BudgetReport::default();
    for n in 1..=budget.n_max as u64 {
        let target = y.scale(n);
        let outcome = search::derive_leq(p, x, &target, budget);
        last_report = outcome.report;
        if let Some(d) = outcome.derivation {
            return Ok(Judgement::proved(d, outcome.report).with_note(format!("x <= {n}*y")));
        }
    }
    // Fall back to the constructive fixpoint derivation.
    if let Some((n, d)) = search::construct_ideal_derivation(p, x, y) {
        return Ok(Judgement::proved(d, last_report)
            .with_note(format!("x <= {n}*y via fixpoint construction (n exceeds n_max)")));
    }
    Ok(Judgement::unknown(last_report))
}

/// Decides paradoxicality of `x`: `(n+1)x ≤ n·x` for some `n ≥ 1`.
pub fn is_paradoxical(
    p: &MonoidPresentation,
    x: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    p.check_element(x)?;
    if x.is_zero() {
        return Err(InputError::ZeroElement("is_paradoxical"));
    }
    let mut last_report = BudgetReport::default();
    for n in 1..=budget.n_max as u64 {
        let lhs = x.scale(n + 1);
        let rhs = x.scale(n);
        let outcome = search::derive_leq(p, &lhs, &rhs, budget);
        last_report = outcome.report;
        if let Some(d) = outcome.derivation {
            return Ok(Judgement::proved(d, outcome.report).with_note(format!("n = {n}")));
        }
    }
    match crate::states::find_state(p, x)? {
        crate::states::LpOutcome::Feasible { state, .. } => {
            Ok(Judgement::refuted_by_state(state, last_report)
                .with_note("state with nu(x) = 1 exists"))
        }
        crate::states::LpOutcome::Infeasible { .. } => Ok(Judgement::unknown(last_report)
            .with_note("no state with nu(x) = 1: x is paradoxical, but no derivation was found within budget")),
        crate::states::LpOutcome::Unbounded => unreachable!("feasibility query"),
    }
}

/// Decides proper infiniteness of `x`: `2x ≤ x`.
pub fn is_properly_infinite(
    p: &MonoidPresentation,
    x: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    p.check_element(x)?;
    if x.is_zero() {
        return Err(InputError::ZeroElement("is_properly_infinite"));
    }
    leq(p, &x.scale(2), x, budget)
}

/// Decides stable domination `x <_s y`: `(n+1)x ≤ n·y` for some `n ≥ 1`.
pub fn is_stably_dominated(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    crate::states::rordam_tarski(p, x, y, budget)
}

/// Decides whether `y` is an order unit: every generator lies in `⟨y⟩`.
/// Exact via the ideal fixpoint.
pub fn is_order_unit(
    p: &MonoidPresentation,
    y: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    p.check_element(y)?;
    if y.is_zero() {
        return Err(InputError::ZeroElement("is_order_unit"));
    }
    let closure = p.ideal_closure(y);
    if let Some(outside) = (0..p.arity()).find(|&g| !closure[g]) {
        let state = crate::states::closure_zero_state(p, &closure);
        return Ok(Judgement::refuted_by_state(state, BudgetReport::default())
            .with_note(format!("generator `{}` is not in <y>", p.generators[outside])));
    }
    // All generators are members; certify the largest generator derivation.
    let mut combined: Option<Derivation> = None;
    for g in 0..p.arity() {
        let gx = Element::unit(p.arity(), g);
        let j = ideal_membership(p, &gx, y, budget)?;
        if let Some(d) = j.derivation() {
            if combined.is_none() {
                combined = Some(d.clone());
            }
        }
    }
    let d = combined.unwrap_or_else(|| Derivation::trivial(y.clone()));
    Ok(Judgement::proved(d, BudgetReport::default()).with_note("every generator lies in <y>"))
}

/// Simplicity of the presented monoid: every nonzero element is an order
/// unit, equivalently every generator is one.
pub fn is_simple(p: &MonoidPresentation, budget: &SearchBudget) -> Result<Judgement, InputError> {
    if p.arity() == 0 {
        return Err(InputError::EmptyGeneratorList);
    }
    for g in 0..p.arity() {
        let y = Element::unit(p.arity(), g);
        let j = is_order_unit(p, &y, budget)?;
        if !j.is_proved() {
            return Ok(j.with_note(format!("generator `{}` is not an order unit", p.generators[g])));
        }
    }
    Ok(Judgement::proved(Derivation::trivial(Element::zero(p.arity())), BudgetReport::default())
        .with_note("every generator is an order unit"))
}

/// Decides the congruence generated by the `==` relations (rewrites only; the
/// `0 ≤ x` axiom plays no role).  Refutations come from an exact integer
/// lattice invariant and are complete: `x ~ y` implies `x - y` lies in the
/// ℤ-lattice spanned by the relation differences, and conversely a lattice
/// separation certifies inequivalence.
pub fn congruent(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> Result<Judgement, InputError> {
    p.check_element(x)?;
    p.check_element(y)?;
    search::decide_congruent(p, x, y, budget)
}

/// Maps old-presentation elements into an extended presentation (same
/// generators, more relations) — identity on coefficients, kept explicit for
/// readability at call sites.
pub fn same_element(e: &Element) -> Element {
    e.clone()
}

#[derive(Clone, Debug)]
pub struct IdealReport {
    /// Indices of the table elements in `I(y) = {z : y + z ≤ y}`.
    pub members: Vec<usize>,
    pub is_ideal: bool,
    pub contained_in_ideal_of_y: bool,
    /// `y` infinite ⟺ `I(y) ≠ {0}`.
    pub y_infinite: bool,
    /// `y` properly infinite ⟺ `I(y) = ⟨y⟩ ≠ 0`.
    pub y_properly_infinite: bool,
    /// The image of `y` in the quotient by `I(y)` is finite.
    pub image_finite_in_quotient: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(gens: &[&str]) -> MonoidPresentation {
        MonoidPresentation::new(gens.to_vec()).unwrap()
    }

    fn cuntz(n: u64) -> MonoidPresentation {
        let mut p = free(&["v"]);
        let v = p.element(&[("v", 1)]).unwrap();
        let nv = p.element(&[("v", n)]).unwrap();
        p.eq(v, nv);
        p
    }

    #[test]
    fn free_monoid_algebraic_order() {
        // x = a, y = a + b: one addition step suffices.
        let p = free(&["a", "b"]);
        let a = p.element(&[("a", 1)]).unwrap();
        let ab = p.element(&[("a", 1), ("b", 1)]).unwrap();
        let j = leq(&p, &a, &ab, &SearchBudget::default()).unwrap();
        assert!(j.is_proved());
        let d = j.derivation().unwrap();
        assert_eq!(d.steps.len(), 1);
        assert!(crate::verify::replay_derivation(&p, d, &a, &ab).is_ok());
    }

    #[test]
    fn doubling_relation_proves_reverse_inequality() {
        // v == 2v makes 2v ≤ v derivable.
        let p = cuntz(2);
        let v = p.element(&[("v", 1)]).unwrap();
        let vv = p.element(&[("v", 2)]).unwrap();
        let j = leq(&p, &vv, &v, &SearchBudget::default()).unwrap();
        assert!(j.is_proved());
        assert!(crate::verify::replay_derivation(&p, j.derivation().unwrap(), &vv, &v).is_ok());
    }

    #[test]
    fn state_refutes_leq() {
        // 2a ≤ b refutes b ≤ a via a separating state.
        let mut p = free(&["a", "b"]);
        let a2 = p.element(&[("a", 2)]).unwrap();
        let b = p.element(&[("b", 1)]).unwrap();
        p.le(a2, b.clone());
        let a = p.element(&[("a", 1)]).unwrap();
        let j = leq(&p, &b, &a, &SearchBudget::default()).unwrap();
        assert!(j.is_refuted());
        let s = j.state().unwrap();
        assert!(crate::verify::replay_state_refutation(&p, s, &b, &a).is_ok());
    }

    #[test]
    fn ideal_membership_examples() {
        // a ≤ b: a ∈ <b> with n = 1.
        let mut p = free(&["a", "b"]);
        let a = p.element(&[("a", 1)]).unwrap();
        let b = p.element(&[("b", 1)]).unwrap();
        p.le(a.clone(), b.clone());
        let j = ideal_membership(&p, &a, &b, &SearchBudget::default()).unwrap();
        assert!(j.is_proved());

        // Free monoid: a ∉ <b>, refuted by the closure state.
        let p2 = free(&["a", "b"]);
        let a2 = p2.element(&[("a", 1)]).unwrap();
        let b2 = p2.element(&[("b", 1)]).unwrap();
        let j2 = ideal_membership(&p2, &a2, &b2, &SearchBudget::default()).unwrap();
        assert!(j2.is_refuted());
        let s = j2.state().unwrap();
        // ν(b) finite, ν(a) infinite.
        assert!(s.values[0].as_finite().is_none());
        assert!(s.values[1].as_finite().is_some());

        // v == 2v: 3v ∈ <v>.
        let p3 = cuntz(2);
        let x = p3.element(&[("v", 3)]).unwrap();
        let v = p3.element(&[("v", 1)]).unwrap();
        let j3 = ideal_membership(&p3, &x, &v, &SearchBudget::default()).unwrap();
        assert!(j3.is_proved());
    }

    #[test]
    fn paradoxicality_examples() {
        // Free monoid: a is not paradoxical; the state ν(a) = 1 refutes.
        let p = free(&["a"]);
        let a = p.element(&[("a", 1)]).unwrap();
        let j = is_paradoxical(&p, &a, &SearchBudget::default()).unwrap();
        assert!(j.is_refuted());

        // v == 2v: v is paradoxical with n = 1.
        let p2 = cuntz(2);
        let v = p2.element(&[("v", 1)]).unwrap();
        let j2 = is_paradoxical(&p2, &v, &SearchBudget::default()).unwrap();
        assert!(j2.is_proved());
        assert_eq!(j2.note.as_deref(), Some("n = 1"));
    }

    #[test]
    fn proper_infiniteness_examples() {
        let p = cuntz(2);
        let v = p.element(&[("v", 1)]).unwrap();
        assert!(is_properly_infinite(&p, &v, &SearchBudget::default()).unwrap().is_proved());

        let p2 = free(&["a"]);
        let a = p2.element(&[("a", 1)]).unwrap();
        assert!(is_properly_infinite(&p2, &a, &SearchBudget::default()).unwrap().is_refuted());
    }

    #[test]
    fn stable_domination_examples() {
        let mut p = free(&["a", "b"]);
        let a2 = p.element(&[("a", 2)]).unwrap();
        let b = p.element(&[("b", 1)]).unwrap();
        p.le(a2, b.clone());
        let a = p.element(&[("a", 1)]).unwrap();
        assert!(is_stably_dominated(&p, &a, &b, &SearchBudget::default()).unwrap().is_proved());

        let p2 = free(&["a"]);
        let a = p2.element(&[("a", 1)]).unwrap();
        assert!(is_stably_dominated(&p2, &a, &a, &SearchBudget::default()).unwrap().is_refuted());

        let p3 = cuntz(2);
        let v = p3.element(&[("v", 1)]).unwrap();
        assert!(is_stably_dominated(&p3, &v, &v, &SearchBudget::default()).unwrap().is_proved());
    }

    #[test]
    fn simplicity_examples() {
        let p = free(&["a", "b"]);
        assert!(is_simple(&p, &SearchBudget::default()).unwrap().is_refuted());

        let p2 = cuntz(2);
        assert!(is_simple(&p2, &SearchBudget::default()).unwrap().is_proved());
    }

    #[test]
    fn quotient_by_ideal_kills_infiniteness() {
        // {a + b ≤ a} mod <b>: the image of a is finite, so 2a ≤ a is refuted.
        let mut p = free(&["a", "b"]);
        let ab = p.element(&[("a", 1), ("b", 1)]).unwrap();
        let a = p.element(&[("a", 1)]).unwrap();
        p.le(ab, a.clone());
        let b = p.element(&[("b", 1)]).unwrap();
        let q = p.quotient_by_ideal(std::slice::from_ref(&b));
        let j = leq(&q, &a.scale(2), &a, &SearchBudget::default()).unwrap();
        assert!(j.is_refuted());
        // In the original, a is infinite: a + b ≤ a is derivable.
        let ab = p.element(&[("a", 1), ("b", 1)]).unwrap();
        assert!(leq(&p, &ab, &a, &SearchBudget::default()).unwrap().is_proved());
    }

    #[test]
    fn translation_invariance_of_derivations() {
        let mut p = free(&["a", "b", "c"]);
        let a = p.element(&[("a", 1)]).unwrap();
        let b = p.element(&[("b", 1)]).unwrap();
        let c = p.element(&[("c", 1)]).unwrap();
        p.le(a.clone(), b.clone());
        p.le(b.clone(), c.clone());
        let j = leq(&p, &a, &c, &SearchBudget::default()).unwrap();
        assert!(j.is_proved());
        let d = j.derivation().unwrap();
        let z = p.element(&[("a", 2), ("c", 1)]).unwrap();
        let shifted = d.shifted(&z);
        assert!(crate::verify::replay_derivation(&p, &shifted, &a.add(&z), &c.add(&z)).is_ok());
    }

    #[test]
    fn congruence_separates_residues() {
        // v == 3v: classes of v and 2v differ, 4v ~ v.
        let p = cuntz(3);
        let v = p.element(&[("v", 1)]).unwrap();
        let v2 = p.element(&[("v", 2)]).unwrap();
        let v3 = p.element(&[("v", 3)]).unwrap();
        let b = SearchBudget::default();
        assert!(congruent(&p, &v, &v3, &b).unwrap().is_proved());
        let j = congruent(&p, &v, &v2, &b).unwrap();
        assert!(j.is_refuted());
        if let Certificate::Invariant(inv) = &j.certificate {
            assert!(crate::verify::replay_congruence_invariant(&p, inv, &v, &v2).is_ok());
        } else {
            panic!("expected an invariant certificate");
        }
    }
}
