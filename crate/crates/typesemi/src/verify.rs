//! Independent certificate replay.
//!
//! Everything here re-derives claims from first principles: derivations are
//! replayed step by step, states are re-evaluated exactly against every
//! relation, infeasibility traces are recombined, and table evidence is read
//! back off the table.  None of it shares code with the search engines that
//! produced the certificates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::monoid::{
    Certificate, CongruenceInvariant, Derivation, Element, FiniteMonoid, Judgement,
    MonoidPresentation, Step, TableFact, Verdict,
};
use crate::states::StateVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayError {
    StartMismatch,
    EndMismatch,
    StepDoesNotApply { index: usize },
    RelationOutOfRange { index: usize },
    StateViolatesRelation { relation: usize },
    ClaimNotViolated,
    InvariantDoesNotAnnihilate { relation: usize },
    InvariantDoesNotSeparate,
    TableMismatch { fact: usize },
    MissingCertificate,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::StartMismatch => write!(f, "derivation starts at the wrong element"),
            ReplayError::EndMismatch => write!(f, "derivation ends at the wrong element"),
            ReplayError::StepDoesNotApply { index } => {
                write!(f, "derivation step {index} does not apply")
            }
            ReplayError::RelationOutOfRange { index } => {
                write!(f, "derivation step {index} cites a relation that does not exist")
            }
            ReplayError::StateViolatesRelation { relation } => {
                write!(f, "state violates relation {relation}")
            }
            ReplayError::ClaimNotViolated => {
                write!(f, "state does not strictly violate the claimed inequality")
            }
            ReplayError::InvariantDoesNotAnnihilate { relation } => {
                write!(f, "invariant does not annihilate relation {relation}")
            }
            ReplayError::InvariantDoesNotSeparate => {
                write!(f, "invariant does not separate the claimed pair")
            }
            ReplayError::TableMismatch { fact } => write!(f, "table fact {fact} is false"),
            ReplayError::MissingCertificate => write!(f, "verdict carries no certificate to replay"),
        }
    }
}

impl std::error::Error for ReplayError {}

/// Replays a derivation of `start ≤ end`, checking each step against the
/// presentation's relation list.
pub fn replay_derivation(
    p: &MonoidPresentation,
    d: &Derivation,
    start: &Element,
    end: &Element,
) -> Result<(), ReplayError> {
    if &d.start != start {
        return Err(ReplayError::StartMismatch);
    }
    let mut current = d.start.clone();
    for (i, step) in d.steps.iter().enumerate() {
        match step {
            Step::Rewrite { relation, forward, context } => {
                let rel = p
                    .relations
                    .get(*relation)
                    .ok_or(ReplayError::RelationOutOfRange { index: i })?;
                let (from, to) = if *forward {
                    (&rel.lhs, &rel.rhs)
                } else {
                    if rel.kind != crate::monoid::RelationKind::Eq {
                        return Err(ReplayError::StepDoesNotApply { index: i });
                    }
                    (&rel.rhs, &rel.lhs)
                };
                if current != from.add(context) {
                    return Err(ReplayError::StepDoesNotApply { index: i });
                }
                current = to.add(context);
            }
            Step::AddGenerator { generator } => {
                if *generator >= p.arity() {
                    return Err(ReplayError::StepDoesNotApply { index: i });
                }
                current = current.add(&Element::unit(p.arity(), *generator));
            }
        }
    }
    if &current != end || &d.end != end {
        return Err(ReplayError::EndMismatch);
    }
    Ok(())
}

/// Checks that a state satisfies every relation exactly.
pub fn replay_state(p: &MonoidPresentation, s: &StateVector) -> Result<(), ReplayError> {
    for (i, rule) in p.directed_rules().iter().enumerate() {
        let lhs = s.eval(&rule.smaller);
        let rhs = s.eval(&rule.larger);
        if lhs.cmp_value(&rhs) == std::cmp::Ordering::Greater {
            return Err(ReplayError::StateViolatesRelation { relation: i });
        }
    }
    Ok(())
}

/// Checks that a state refutes `x ≤ y`: it satisfies all relations and
/// evaluates strictly larger at `x`.
pub fn replay_state_refutation(
    p: &MonoidPresentation,
    s: &StateVector,
    x: &Element,
    y: &Element,
) -> Result<(), ReplayError> {
    replay_state(p, s)?;
    if s.eval(x).cmp_value(&s.eval(y)) != std::cmp::Ordering::Greater {
        return Err(ReplayError::ClaimNotViolated);
    }
    Ok(())
}

/// Rebuilds the normalized state system for `y` and verifies the Farkas
/// multipliers against it.
pub fn replay_infeasibility(p: &MonoidPresentation, y: &Element, farkas: &crate::lp::Farkas) -> bool {
    let closure = p.ideal_closure(y);
    let (mut sys, vars) = crate::states::state_system(p, &closure);
    let row = vars.iter().map(|&g| crate::arith::int(y.coeffs[g] as i64)).collect();
    sys.push(crate::lp::Constraint::eq(row, num_rational::BigRational::from(BigInt::from(1))));
    farkas.verify(&sys)
}

/// Checks a congruence-refuting invariant: it must annihilate every equality
/// relation's difference (over ℤ or mod the stated modulus) and separate the
/// claimed pair.
pub fn replay_congruence_invariant(
    p: &MonoidPresentation,
    inv: &CongruenceInvariant,
    x: &Element,
    y: &Element,
) -> Result<(), ReplayError> {
    let weigh = |e: &Element| -> BigInt {
        e.coeffs.iter().zip(&inv.weights).map(|(&c, w)| BigInt::from(c) * w).sum()
    };
    for (i, rel) in p.relations.iter().enumerate() {
        if rel.kind != crate::monoid::RelationKind::Eq {
            continue;
        }
        let diff = weigh(&rel.lhs) - weigh(&rel.rhs);
        let ok = if inv.modulus.is_zero() { diff.is_zero() } else { (diff % &inv.modulus).is_zero() };
        if !ok {
            return Err(ReplayError::InvariantDoesNotAnnihilate { relation: i });
        }
    }
    let diff = weigh(x) - weigh(y);
    let separated =
        if inv.modulus.is_zero() { !diff.is_zero() } else { !(diff % &inv.modulus).is_zero() };
    if separated {
        Ok(())
    } else {
        Err(ReplayError::InvariantDoesNotSeparate)
    }
}

/// Re-reads table evidence off an explicit finite monoid.
pub fn replay_table_evidence(m: &FiniteMonoid, facts: &[TableFact]) -> Result<(), ReplayError> {
    for (i, fact) in facts.iter().enumerate() {
        let ok = match fact {
            TableFact::Leq { x, y, holds } => m.leq[*x][*y] == *holds,
            TableFact::Sum { x, y, result } => m.add[*x][*y] == *result,
        };
        if !ok {
            return Err(ReplayError::TableMismatch { fact: i });
        }
    }
    Ok(())
}

/// Replays whatever certificate a judgement carries for the claim `x ≤ y`
/// (or for its congruence analogue).  `Budget` certificates carry nothing to
/// replay and are rejected.
pub fn replay_leq_judgement(
    p: &MonoidPresentation,
    j: &Judgement,
    x: &Element,
    y: &Element,
) -> Result<(), ReplayError> {
    match (&j.verdict, &j.certificate) {
        (Verdict::Proved, Certificate::Derivation(d)) => replay_derivation(p, d, x, y),
        (Verdict::Refuted, Certificate::State(s)) => replay_state_refutation(p, s, x, y),
        (Verdict::Refuted, Certificate::Invariant(inv)) => {
            replay_congruence_invariant(p, inv, x, y)
        }
        _ => Err(ReplayError::MissingCertificate),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{MonoidPresentation, SearchBudget};

    #[test]
    fn tampered_derivations_are_rejected() {
        let mut p = MonoidPresentation::new(vec!["a", "b"]).unwrap();
        let a = p.element(&[("a", 1)]).unwrap();
        let b = p.element(&[("b", 1)]).unwrap();
        p.le(a.clone(), b.clone());
        let j = crate::monoid::leq(&p, &a, &b, &SearchBudget::default()).unwrap();
        let mut d = j.derivation().unwrap().clone();
        assert!(replay_derivation(&p, &d, &a, &b).is_ok());
        d.end = a.clone();
        assert!(replay_derivation(&p, &d, &a, &a).is_err());
    }

    #[test]
    fn tampered_states_are_rejected() {
        use crate::arith::Value;
        let mut p = MonoidPresentation::new(vec!["a", "b"]).unwrap();
        let a2 = p.element(&[("a", 2)]).unwrap();
        let b = p.element(&[("b", 1)]).unwrap();
        p.le(a2, b.clone());
        let bad = StateVector { values: vec![Value::Finite(crate::arith::int(1)); 2] };
        assert!(replay_state(&p, &bad).is_err());
    }
}
