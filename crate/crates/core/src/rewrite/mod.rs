//! Equational rewriting for the diagrammatic calculus of twisted
//! associativity.
//!
//! Terms are plane diagrams over `{id, mu, alpha, sigma, eta}` modulo the
//! interchange law; rule sets package the associativity variants, the
//! anti-involution laws and (weak) unitality, always together with the swap
//! relations (naturality and `sigma ; sigma = id # id`) as structural rules.
//! Derivations are found by bounded bidirectional breadth-first search over
//! rule applications at all positions; a failure to find a derivation within
//! the depth bound certifies nothing beyond that bound.

mod eval;
mod net;
mod term;

pub use eval::{evaluate, EvalModel};
pub use net::{normal_form, rewrite_all};
pub use term::{parse_term, Gen, Term, TermError};

use std::collections::HashMap;

use serde::Serialize;

/// A named bidirectional equality between two terms of equal boundary.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub bidirectional: bool,
}

impl RewriteRule {
    pub fn new(name: &str, lhs: &str, rhs: &str) -> Result<Self, TermError> {
        let lhs = normal_form(&parse_term(lhs)?);
        let rhs = normal_form(&parse_term(rhs)?);
        if lhs.inputs() != rhs.inputs() || lhs.outputs() != rhs.outputs() {
            return Err(TermError::Boundary(format!(
                "rule {name}: {}->{} vs {}->{}",
                lhs.inputs(),
                lhs.outputs(),
                rhs.inputs(),
                rhs.outputs()
            )));
        }
        Ok(RewriteRule {
            name: name.to_string(),
            lhs,
            rhs,
            bidirectional: true,
        })
    }
}

/// The built-in rule families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleSetName {
    Assoc,
    HomI,
    HomII,
    AntiInv,
    Unit,
    WeakUnit,
}

impl std::str::FromStr for RuleSetName {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ASSOC" => Ok(RuleSetName::Assoc),
            "HOM_I" | "HOMI" => Ok(RuleSetName::HomI),
            "HOM_II" | "HOMII" => Ok(RuleSetName::HomII),
            "ANTI_INV" | "ANTIINV" => Ok(RuleSetName::AntiInv),
            "UNIT" => Ok(RuleSetName::Unit),
            "WEAK_UNIT" | "WEAKUNIT" => Ok(RuleSetName::WeakUnit),
            other => Err(TermError::Parse(format!("unknown rule set {other:?}"))),
        }
    }
}

fn rule(name: &str, lhs: &str, rhs: &str) -> RewriteRule {
    RewriteRule::new(name, lhs, rhs).expect("built-in rules are well-formed")
}

/// Structural rules present in every set: the swap squares to parallel
/// wires and slides past every generator.
fn structural_rules() -> Vec<RewriteRule> {
    vec![
        rule("sigma_involutive", "sigma ; sigma", "id # id"),
        rule(
            "sigma_nat_alpha_left",
            "(alpha # id) ; sigma",
            "sigma ; (id # alpha)",
        ),
        rule(
            "sigma_nat_alpha_right",
            "(id # alpha) ; sigma",
            "sigma ; (alpha # id)",
        ),
        rule(
            "sigma_nat_mu_left",
            "(mu # id) ; sigma",
            "(id # sigma) ; (sigma # id) ; (id # mu)",
        ),
        rule(
            "sigma_nat_mu_right",
            "(id # mu) ; sigma",
            "(sigma # id) ; (id # sigma) ; (mu # id)",
        ),
        rule("sigma_nat_eta_left", "(eta # id) ; sigma", "id # eta"),
        rule("sigma_nat_eta_right", "(id # eta) ; sigma", "eta # id"),
    ]
}

/// The named equalities of a family, plus the structural swap rules.
pub fn rule_set(name: RuleSetName) -> Vec<RewriteRule> {
    let mut rules = match name {
        RuleSetName::Assoc => vec![rule("assoc", "(mu # id) ; mu", "(id # mu) ; mu")],
        RuleSetName::HomI => vec![rule("homI", "(mu # alpha) ; mu", "(alpha # mu) ; mu")],
        RuleSetName::HomII => vec![rule(
            "homII",
            "(mu ; alpha # id) ; mu",
            "(id # (mu ; alpha)) ; mu",
        )],
        RuleSetName::AntiInv => vec![
            rule("alpha_involutive", "alpha ; alpha", "id"),
            rule(
                "alpha_antihom",
                "mu ; alpha",
                "sigma ; (alpha # alpha) ; mu",
            ),
        ],
        RuleSetName::Unit => vec![
            rule("unit_left", "(eta # id) ; mu", "id"),
            rule("unit_right", "(id # eta) ; mu", "id"),
        ],
        RuleSetName::WeakUnit => vec![
            rule("weak_unit_left", "(eta # id) ; mu", "alpha"),
            rule("weak_unit_right", "(id # eta) ; mu", "alpha"),
        ],
    };
    rules.extend(structural_rules());
    rules
}

/// Union of several families, deduplicated by rule name (the structural
/// rules appear once).
pub fn combine_rule_sets(names: &[RuleSetName]) -> Vec<RewriteRule> {
    let mut out: Vec<RewriteRule> = Vec::new();
    for &name in names {
        for r in rule_set(name) {
            if !out.iter().any(|existing| existing.name == r.name) {
                out.push(r);
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reverse,
}

/// One rewrite step: which rule, which orientation, and the index of the
/// position in the deterministic enumeration of matches on the current term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step {
    pub rule: String,
    pub direction: Direction,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub enum DeriveOutcome {
    /// A derivation: replaying the steps on the left term produces the right
    /// term exactly.
    Proof(Vec<Step>),
    /// Exhausted the depth bound; explicitly not a non-derivability
    /// certificate.
    NotFoundWithinDepth { depth: usize },
}

impl DeriveOutcome {
    pub fn proof(&self) -> Option<&[Step]> {
        match self {
            DeriveOutcome::Proof(steps) => Some(steps),
            DeriveOutcome::NotFoundWithinDepth { .. } => None,
        }
    }
}

/// Applies one step to a normalized term.
pub fn apply_step(term: &Term, rules: &[RewriteRule], step: &Step) -> Option<Term> {
    let rule = rules.iter().find(|r| r.name == step.rule)?;
    let (from, to) = match step.direction {
        Direction::Forward => (&rule.lhs, &rule.rhs),
        Direction::Reverse => (&rule.rhs, &rule.lhs),
    };
    rewrite_all(term, from, to).into_iter().nth(step.position)
}

/// All one-step successors of a normalized term, with the steps that
/// produced them, in deterministic order.
fn successors(term: &Term, rules: &[RewriteRule]) -> Vec<(Term, Step)> {
    let mut out = Vec::new();
    for rule in rules {
        let mut directions = vec![(Direction::Forward, &rule.lhs, &rule.rhs)];
        if rule.bidirectional {
            directions.push((Direction::Reverse, &rule.rhs, &rule.lhs));
        }
        for (direction, from, to) in directions {
            for (position, next) in rewrite_all(term, from, to).into_iter().enumerate() {
                out.push((
                    next,
                    Step {
                        rule: rule.name.clone(),
                        direction,
                        position,
                    },
                ));
            }
        }
    }
    out
}

/// Bounded bidirectional breadth-first derivation search. Both ends expand
/// level by level (the smaller frontier first) until the level budgets meet
/// the depth bound; step positions are deterministic, so the reported proof
/// replays exactly.
pub fn derive(
    lhs: &Term,
    rhs: &Term,
    rules: &[RewriteRule],
    depth: usize,
) -> Result<DeriveOutcome, TermError> {
    if lhs.inputs() != rhs.inputs() || lhs.outputs() != rhs.outputs() {
        return Err(TermError::Boundary(format!(
            "{}->{} vs {}->{}",
            lhs.inputs(),
            lhs.outputs(),
            rhs.inputs(),
            rhs.outputs()
        )));
    }
    let start = normal_form(lhs);
    let goal = normal_form(rhs);
    if start == goal {
        return Ok(DeriveOutcome::Proof(Vec::new()));
    }

    let sentinel = Step {
        rule: String::new(),
        direction: Direction::Forward,
        position: 0,
    };
    // forward parents: child -> (parent, step applied to parent)
    let mut fwd_parent: HashMap<Term, (Term, Step)> = HashMap::new();
    // backward parents: child -> parent such that applying the recorded step
    // to the PARENT yields the child; walking child -> parent approaches the
    // goal by inverting the step
    let mut bwd_parent: HashMap<Term, (Term, Step)> = HashMap::new();
    fwd_parent.insert(start.clone(), (start.clone(), sentinel.clone()));
    bwd_parent.insert(goal.clone(), (goal.clone(), sentinel));

    let mut fwd_frontier = vec![start.clone()];
    let mut bwd_frontier = vec![goal.clone()];
    let mut fwd_depth = 0usize;
    let mut bwd_depth = 0usize;

    let assemble = |meet: &Term,
                    fwd_parent: &HashMap<Term, (Term, Step)>,
                    bwd_parent: &HashMap<Term, (Term, Step)>|
     -> DeriveOutcome {
        let mut steps = Vec::new();
        let mut cursor = meet.clone();
        while cursor != start {
            let (parent, step) = fwd_parent[&cursor].clone();
            steps.push(step);
            cursor = parent;
        }
        steps.reverse();
        let mut cursor = meet.clone();
        while cursor != goal {
            let (parent, step) = bwd_parent[&cursor].clone();
            let inverse_dir = match step.direction {
                Direction::Forward => Direction::Reverse,
                Direction::Reverse => Direction::Forward,
            };
            let rule = rules
                .iter()
                .find(|r| r.name == step.rule)
                .expect("known rule");
            let (from, to) = match inverse_dir {
                Direction::Forward => (&rule.lhs, &rule.rhs),
                Direction::Reverse => (&rule.rhs, &rule.lhs),
            };
            let position = rewrite_all(&cursor, from, to)
                .into_iter()
                .position(|t| t == parent)
                .expect("inverse step reaches the recorded parent");
            steps.push(Step {
                rule: step.rule.clone(),
                direction: inverse_dir,
                position,
            });
            cursor = parent;
        }
        DeriveOutcome::Proof(steps)
    };

    while fwd_depth + bwd_depth < depth && (!fwd_frontier.is_empty() || !bwd_frontier.is_empty()) {
        let expand_forward = match (fwd_frontier.is_empty(), bwd_frontier.is_empty()) {
            (true, true) => break,
            (false, true) => true,
            (true, false) => false,
            (false, false) => fwd_frontier.len() <= bwd_frontier.len(),
        };
        if expand_forward {
            fwd_depth += 1;
            let mut next = Vec::new();
            let expansions = crate::exec::map_indexed(fwd_frontier.len(), |i| {
                successors(&fwd_frontier[i], rules)
            });
            for (parent, children) in fwd_frontier.iter().zip(expansions) {
                for (child, step) in children {
                    if fwd_parent.contains_key(&child) {
                        continue;
                    }
                    fwd_parent.insert(child.clone(), (parent.clone(), step));
                    if bwd_parent.contains_key(&child) {
                        return Ok(assemble(&child, &fwd_parent, &bwd_parent));
                    }
                    next.push(child);
                }
            }
            fwd_frontier = next;
        } else {
            bwd_depth += 1;
            let mut next = Vec::new();
            let expansions = crate::exec::map_indexed(bwd_frontier.len(), |i| {
                successors(&bwd_frontier[i], rules)
            });
            for (parent, children) in bwd_frontier.iter().zip(expansions) {
                for (child, step) in children {
                    if bwd_parent.contains_key(&child) {
                        continue;
                    }
                    bwd_parent.insert(child.clone(), (parent.clone(), step));
                    if fwd_parent.contains_key(&child) {
                        return Ok(assemble(&child, &fwd_parent, &bwd_parent));
                    }
                    next.push(child);
                }
            }
            bwd_frontier = next;
        }
    }
    Ok(DeriveOutcome::NotFoundWithinDepth { depth })
}

/// The unit-bridge lemma `(alpha # id) ; mu = (id # alpha) ; mu`, derived
/// from a twisted-associativity family together with unitality by placing
/// the unit in the middle slot. Returns the lemma as a reusable rule with
/// its proof.
pub fn derive_unital_bridge(
    base: RuleSetName,
    depth: usize,
) -> Result<(RewriteRule, DeriveOutcome), TermError> {
    let rules = combine_rule_sets(&[base, RuleSetName::Unit]);
    let bridge = RewriteRule::new("bridge", "(alpha # id) ; mu", "(id # alpha) ; mu")?;
    let outcome = derive(&bridge.lhs, &bridge.rhs, &rules, depth)?;
    Ok((bridge, outcome))
}

/// Replays a proof: applies the steps in order and checks the result.
pub fn replay(lhs: &Term, rhs: &Term, rules: &[RewriteRule], steps: &[Step]) -> bool {
    let mut cursor = normal_form(lhs);
    for step in steps {
        match apply_step(&cursor, rules, step) {
            Some(next) => cursor = next,
            None => return false,
        }
    }
    cursor == normal_form(rhs)
}
