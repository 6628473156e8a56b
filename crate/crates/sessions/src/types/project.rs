//! Participants and projection of global types.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ids::Participant;

use super::{GlobalType, SessionType, TypeBranch};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProjectError {
    #[error("global type not projectable onto `{0}`: branch projections differ")]
    NotProjectable(Participant),
}

/// `PART(G)`: the union of `{p,q}` over all communications, across all
/// branches.
pub fn participants(g: &GlobalType) -> BTreeSet<Participant> {
    let mut out = BTreeSet::new();
    collect(g, &mut out);
    out
}

fn collect(g: &GlobalType, out: &mut BTreeSet<Participant>) {
    match g {
        GlobalType::End | GlobalType::Var(_) => {}
        GlobalType::Rec { body, .. } => collect(body, out),
        GlobalType::Comm { from, to, branches } => {
            out.insert(from.clone());
            out.insert(to.clone());
            for b in branches {
                collect(&b.cont, out);
            }
        }
    }
}

/// `G ↾ r`: the local view of participant `r`.
///
/// For a communication not involving `r`, the branch projections must be
/// syntactically identical after canonicalization; no merging is
/// performed. A `μt` binder is kept when `r` participates in the body and
/// dropped to `end` otherwise.
pub fn project(g: &GlobalType, r: &Participant) -> Result<SessionType, ProjectError> {
    match g {
        GlobalType::End => Ok(SessionType::End),
        GlobalType::Var(t) => Ok(SessionType::Var(t.clone())),
        GlobalType::Rec { var, body } => {
            if participants(body).contains(r) {
                Ok(SessionType::Rec {
                    var: var.clone(),
                    body: Box::new(project(body, r)?),
                })
            } else {
                Ok(SessionType::End)
            }
        }
        GlobalType::Comm { from, to, branches } => {
            if r == from {
                Ok(SessionType::Out {
                    to: to.clone(),
                    branches: project_branches(branches, r)?,
                })
            } else if r == to {
                Ok(SessionType::In {
                    from: from.clone(),
                    branches: project_branches(branches, r)?,
                })
            } else {
                let projections: Vec<SessionType> = branches
                    .iter()
                    .map(|b| project(&b.cont, r))
                    .collect::<Result<_, _>>()?;
                let first = projections[0].canonical();
                if projections.iter().all(|p| p.canonical() == first) {
                    Ok(projections.into_iter().next().unwrap())
                } else {
                    Err(ProjectError::NotProjectable(r.clone()))
                }
            }
        }
    }
}

fn project_branches(
    branches: &[TypeBranch<GlobalType>],
    r: &Participant,
) -> Result<Vec<TypeBranch<SessionType>>, ProjectError> {
    branches
        .iter()
        .map(|b| {
            Ok(TypeBranch {
                label: b.label.clone(),
                payload: b.payload.clone(),
                cont: project(&b.cont, r)?,
            })
        })
        .collect()
}
