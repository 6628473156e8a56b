//! The trace-safety oracle: access control per message and leak freedom
//! per relay pair, checked exhaustively over all traces up to a depth
//! bound. τ actions are retained in traces but transparent to both checks.

use std::collections::BTreeSet;

use crate::calculus::{traces, EvalError, Session, SessionAction, Trace};
use crate::security::{Lattice, ReadingPolicy, SecurityError, TopicUniverse};

/// The kind of a safety violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// A delivered message exceeds the receiver's reading level.
    AccessControl,
    /// A relay pair drops the level between correlated topics.
    LeakFreedom,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub trace: Trace,
    /// One message index for AC, the relay pair `i < j` for LF. Indices
    /// point at `Message` entries of the trace.
    pub indices: Vec<usize>,
    pub explanation: String,
}

#[derive(Clone, Debug)]
pub struct SafetyReport {
    pub depth: usize,
    pub violations: Vec<Violation>,
}

impl SafetyReport {
    pub fn safe(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All index pairs `i < j` such that the receiver of message `i` is the
/// sender of message `j` (the mediator); anything may sit in between.
pub fn relay_pairs(trace: &Trace) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, first) in trace.iter().enumerate() {
        let SessionAction::Message { to: mediator, .. } = first else {
            continue;
        };
        for (j, second) in trace.iter().enumerate().skip(i + 1) {
            let SessionAction::Message { from, .. } = second else {
                continue;
            };
            if from == mediator {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// One AC violation per message whose level exceeds the receiver's
/// reading level for its topic.
pub fn check_ac(
    trace: &Trace,
    policy: &ReadingPolicy,
    universe: &TopicUniverse,
    lattice: &Lattice,
) -> Result<Vec<Violation>, SecurityError> {
    let mut out = Vec::new();
    for (i, action) in trace.iter().enumerate() {
        let SessionAction::Message { to, value, .. } = action else {
            continue;
        };
        let bound = policy.reading_level(universe, to, &value.topic)?;
        if !lattice.leq(&value.level, bound)? {
            out.push(Violation {
                kind: ViolationKind::AccessControl,
                trace: trace.clone(),
                indices: vec![i],
                explanation: format!(
                    "message {i}: level {} of topic {} exceeds reading level {}({},{}) = {}",
                    value.level, value.topic, "rho", to, value.topic, bound
                ),
            });
        }
    }
    Ok(out)
}

/// One LF violation per relay pair whose level drops between correlated
/// topics.
pub fn check_lf(
    trace: &Trace,
    universe: &TopicUniverse,
    lattice: &Lattice,
) -> Result<Vec<Violation>, SecurityError> {
    let mut out = Vec::new();
    for (i, j) in relay_pairs(trace) {
        let (SessionAction::Message { value: vin, .. }, SessionAction::Message { value: vout, .. }) =
            (&trace[i], &trace[j])
        else {
            unreachable!("relay pairs index messages");
        };
        let up = lattice.leq(&vin.level, &vout.level)?;
        let indep = universe.independent(&vin.topic, &vout.topic)?;
        if !up && !indep {
            out.push(Violation {
                kind: ViolationKind::LeakFreedom,
                trace: trace.clone(),
                indices: vec![i, j],
                explanation: format!(
                    "relay pair ({i},{j}): level drops {} -> {} on correlated topics {}, {}",
                    vin.level, vout.level, vin.topic, vout.topic
                ),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Security(#[from] SecurityError),
}

/// Runs both checks over every trace of `n` up to `depth`, keeping the
/// shortest witness trace per distinct violation.
pub fn check_safe_session(
    n: &Session,
    depth: usize,
    policy: &ReadingPolicy,
    universe: &TopicUniverse,
    lattice: &Lattice,
) -> Result<SafetyReport, OracleError> {
    let mut violations = Vec::new();
    // Essence of a violation: kind plus the offending messages themselves;
    // traces come out of the BTreeSet ordered by (length-lexicographic)
    // content, so the first witness per essence is kept deterministically.
    let mut seen: BTreeSet<(ViolationKind, Vec<SessionAction>)> = BTreeSet::new();
    let mut all: Vec<Trace> = traces(n, depth, lattice)?.into_iter().collect();
    all.sort_by_key(|t| (t.len(), t.clone()));
    for trace in &all {
        let mut found = check_ac(trace, policy, universe, lattice)?;
        found.extend(check_lf(trace, universe, lattice)?);
        for v in found {
            let essence = (
                v.kind,
                v.indices.iter().map(|&i| v.trace[i].clone()).collect(),
            );
            if seen.insert(essence) {
                violations.push(v);
            }
        }
    }
    violations.sort_by_key(|v| (v.trace.len(), v.trace.clone(), v.indices.clone()));
    Ok(SafetyReport { depth, violations })
}
