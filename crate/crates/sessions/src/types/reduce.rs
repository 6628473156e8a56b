//! Reductions of session and global types: the residual of a global type
//! after a communication, and the one-step reducts used by the subject
//! reduction harness.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::ids::{Label, Participant};

use super::{GlobalType, SessionType, TypeBranch};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ResidualError {
    #[error("residual undefined: communication {0}-{1}->{2} cannot be consumed")]
    ResidualUndefined(Participant, Label, Participant),
}

/// `G ∖ p λ q`: the global type left after consuming the communication
/// `p —λ→ q`.
///
/// A matching head yields the chosen branch's continuation; a head between
/// a disjoint pair of participants is kept with the residual taken in every
/// branch; a head sharing a participant with `{p,q}` without matching is
/// undefined, as are `end` and type variables. Recursive types are unfolded
/// on demand, with a visited set so that a loop not containing the
/// communication is reported as undefined.
pub fn residual(
    g: &GlobalType,
    p: &Participant,
    label: &Label,
    q: &Participant,
) -> Result<GlobalType, ResidualError> {
    let mut seen = HashSet::new();
    residual_rec(g, p, label, q, &mut seen)
}

fn residual_rec(
    g: &GlobalType,
    p: &Participant,
    label: &Label,
    q: &Participant,
    seen: &mut HashSet<GlobalType>,
) -> Result<GlobalType, ResidualError> {
    let undefined = || ResidualError::ResidualUndefined(p.clone(), label.clone(), q.clone());
    match g {
        GlobalType::End | GlobalType::Var(_) => Err(undefined()),
        GlobalType::Rec { .. } => {
            if !seen.insert(g.clone()) {
                return Err(undefined());
            }
            residual_rec(&g.unfold(), p, label, q, seen)
        }
        GlobalType::Comm { from, to, branches } => {
            if from == p && to == q {
                branches
                    .iter()
                    .find(|b| &b.label == label)
                    .map(|b| b.cont.clone())
                    .ok_or_else(undefined)
            } else if from == p || from == q || to == p || to == q {
                Err(undefined())
            } else {
                let branches = branches
                    .iter()
                    .map(|b| {
                        Ok(TypeBranch {
                            label: b.label.clone(),
                            payload: b.payload.clone(),
                            cont: residual_rec(&b.cont, p, label, q, seen)?,
                        })
                    })
                    .collect::<Result<_, _>>()?;
                Ok(GlobalType::Comm {
                    from: from.clone(),
                    to: to.clone(),
                    branches,
                })
            }
        }
    }
}

/// All communications `p —λ→ q` occurring anywhere in `G`.
pub fn communications(g: &GlobalType) -> BTreeSet<(Participant, Label, Participant)> {
    let mut out = BTreeSet::new();
    collect(g, &mut out);
    out
}

fn collect(g: &GlobalType, out: &mut BTreeSet<(Participant, Label, Participant)>) {
    match g {
        GlobalType::End | GlobalType::Var(_) => {}
        GlobalType::Rec { body, .. } => collect(body, out),
        GlobalType::Comm { from, to, branches } => {
            for b in branches {
                out.insert((from.clone(), b.label.clone(), to.clone()));
                collect(&b.cont, out);
            }
        }
    }
}

/// `G ⇒`: every communication of `G` whose residual is defined and
/// well-formed, with its residual.
pub fn reduce_global(g: &GlobalType) -> Vec<(Participant, Label, Participant, GlobalType)> {
    communications(g)
        .into_iter()
        .filter_map(|(p, l, q)| {
            let r = residual(g, &p, &l, &q).ok()?;
            r.well_formed().ok()?;
            Some((p, l, q, r))
        })
        .collect()
}

/// `T ⇒`: all one-step reducts of a session type. A union reduces to each
/// of its summands and to each output continuation; an intersection
/// reduces to each input continuation.
pub fn reduce_type(t: &SessionType) -> Vec<SessionType> {
    let mut out = Vec::new();
    match t.unfold() {
        SessionType::Out { to, branches } => {
            if branches.len() > 1 {
                for b in &branches {
                    out.push(SessionType::Out {
                        to: to.clone(),
                        branches: vec![b.clone()],
                    });
                }
            }
            for b in &branches {
                out.push(b.cont.clone());
            }
        }
        SessionType::In { branches, .. } => {
            for b in &branches {
                out.push(b.cont.clone());
            }
        }
        SessionType::End | SessionType::Var(_) | SessionType::Rec { .. } => {}
    }
    out
}
