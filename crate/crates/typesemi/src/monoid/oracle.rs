//! Brute-force rewrite closure: a deliberately plain breadth-first sweep
//! kept independent of the certificate-producing engine, used to
//! cross-validate it.

use std::collections::{HashSet, VecDeque};

use super::{Element, MonoidPresentation, SearchBudget};

#[derive(Clone, Debug)]
pub struct ReachableSet {
    pub elements: HashSet<Element>,
    /// The sweep emptied its queue: every element reachable by derivations
    /// staying within the coefficient cap has been enumerated.
    pub cap_complete: bool,
    pub nodes: usize,
}

/// Plain FIFO closure of the rewrite-and-add system from `start`.
pub fn reachable_closure(
    p: &MonoidPresentation,
    start: &Element,
    budget: &SearchBudget,
) -> ReachableSet {
    let rules = p.directed_rules();
    let mut seen: HashSet<Element> = HashSet::new();
    let mut queue: VecDeque<Element> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    let mut nodes = 0usize;
    let mut cap_complete = true;
    while let Some(v) = queue.pop_front() {
        nodes += 1;
        if nodes > budget.node_cap {
            cap_complete = false;
            break;
        }
        let mut out: Vec<Element> = Vec::new();
        for rule in &rules {
            if let Some(context) = v.checked_sub(&rule.smaller) {
                out.push(rule.larger.add(&context));
            }
        }
        for g in 0..p.arity() {
            out.push(v.add(&Element::unit(p.arity(), g)));
        }
        for next in out {
            if next.coeffs.iter().any(|&c| c > budget.coeff_cap) {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    ReachableSet { elements: seen, cap_complete, nodes }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// `y` was reached, so `x ≤ y` is derivable.
    Derivable,
    /// `y` was not reached and the sweep was cap-complete: no derivation
    /// stays within the coefficient cap.
    NotDerivableWithinCap,
    /// The node budget ran out first.
    Inconclusive,
}

/// Independent oracle for `x ≤ y`.
pub fn brute_force_leq(
    p: &MonoidPresentation,
    x: &Element,
    y: &Element,
    budget: &SearchBudget,
) -> OracleVerdict {
    let closure = reachable_closure(p, x, budget);
    if closure.elements.contains(y) {
        OracleVerdict::Derivable
    } else if closure.cap_complete {
        OracleVerdict::NotDerivableWithinCap
    } else {
        OracleVerdict::Inconclusive
    }
}
