//! Session and global types: grammar, well-formedness, coinductive
//! subtyping, agreement and safe-type checking, projection, and the type
//! reductions driving subject reduction.

mod project;
mod reduce;
mod safety;
mod subtyping;

pub use project::{participants, project, ProjectError};
pub use reduce::{reduce_global, reduce_type, residual, ResidualError};
pub use safety::{agrees, safe_type};
pub use subtyping::{equirec_eq, subtype, subtype_with_stats};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ids::{Label, Level, Participant, Topic, TypeVar};

/// Base sorts of communicated values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Nat,
    Int,
    Bool,
    Str,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Nat => "nat",
            Sort::Int => "int",
            Sort::Bool => "bool",
            Sort::Str => "str",
        }
    }
}

/// A sort decorated with a security level and a topic, `S^{l,t}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnnotatedSort {
    pub sort: Sort,
    pub level: Level,
    pub topic: Topic,
}

impl AnnotatedSort {
    pub fn new(sort: Sort, level: Level, topic: Topic) -> Self {
        AnnotatedSort { sort, level, topic }
    }
}

/// One branch of a communication: label, payload annotation, continuation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeBranch<T> {
    pub label: Label,
    pub payload: AnnotatedSort,
    pub cont: T,
}

/// A local (session) type: unions of outputs, intersections of inputs,
/// equi-recursive `μ` types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SessionType {
    /// `⋁_i q!λ_i(S_i^{l_i,t_i}).T_i`
    Out {
        to: Participant,
        branches: Vec<TypeBranch<SessionType>>,
    },
    /// `⋀_i p?λ_i(S_i^{l_i,t_i}).T_i`
    In {
        from: Participant,
        branches: Vec<TypeBranch<SessionType>>,
    },
    Rec {
        var: TypeVar,
        body: Box<SessionType>,
    },
    Var(TypeVar),
    End,
}

/// A global type `p→q:{λ_i(S_i^{l_i,t_i}).G_i}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GlobalType {
    Comm {
        from: Participant,
        to: Participant,
        branches: Vec<TypeBranch<GlobalType>>,
    },
    Rec {
        var: TypeVar,
        body: Box<GlobalType>,
    },
    Var(TypeVar),
    End,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WfError {
    #[error("duplicate label `{0}` in one choice")]
    DuplicateLabel(Label),
    #[error("unguarded recursion on `{0}`")]
    Unguarded(TypeVar),
    #[error("free type variable `{0}`")]
    FreeTypeVariable(TypeVar),
    #[error("participant `{0}` communicates with itself")]
    SelfCommunication(Participant),
}

fn check_labels<T>(branches: &[TypeBranch<T>]) -> Result<(), WfError> {
    let mut seen = BTreeSet::new();
    for b in branches {
        if !seen.insert(&b.label) {
            return Err(WfError::DuplicateLabel(b.label.clone()));
        }
    }
    Ok(())
}

impl SessionType {
    /// Well-formedness: distinct labels per choice, guarded recursion, no
    /// free type variables.
    pub fn well_formed(&self) -> Result<(), WfError> {
        self.wf(&mut Vec::new())
    }

    fn wf(&self, bound: &mut Vec<TypeVar>) -> Result<(), WfError> {
        match self {
            SessionType::End => Ok(()),
            SessionType::Var(t) => {
                if bound.contains(t) {
                    Ok(())
                } else {
                    Err(WfError::FreeTypeVariable(t.clone()))
                }
            }
            SessionType::Rec { var, body } => {
                if body.unguarded(var) {
                    return Err(WfError::Unguarded(var.clone()));
                }
                bound.push(var.clone());
                let r = body.wf(bound);
                bound.pop();
                r
            }
            SessionType::Out { branches, .. } | SessionType::In { branches, .. } => {
                check_labels(branches)?;
                for b in branches {
                    b.cont.wf(bound)?;
                }
                Ok(())
            }
        }
    }

    /// True if `var` can be reached from the root without crossing an
    /// input or output prefix.
    fn unguarded(&self, var: &TypeVar) -> bool {
        match self {
            SessionType::Var(t) => t == var,
            SessionType::Rec { var: v, body } => v != var && body.unguarded(var),
            _ => false,
        }
    }

    pub fn subst(&self, var: &TypeVar, replacement: &SessionType) -> SessionType {
        match self {
            SessionType::End => SessionType::End,
            SessionType::Var(t) => {
                if t == var {
                    replacement.clone()
                } else {
                    SessionType::Var(t.clone())
                }
            }
            SessionType::Rec { var: v, body } => {
                if v == var {
                    // Inner binder shadows.
                    self.clone()
                } else {
                    SessionType::Rec {
                        var: v.clone(),
                        body: Box::new(body.subst(var, replacement)),
                    }
                }
            }
            SessionType::Out { to, branches } => SessionType::Out {
                to: to.clone(),
                branches: subst_branches(branches, |c| c.subst(var, replacement)),
            },
            SessionType::In { from, branches } => SessionType::In {
                from: from.clone(),
                branches: subst_branches(branches, |c| c.subst(var, replacement)),
            },
        }
    }

    /// Unfolds top-level `μ` binders until the head is a communication,
    /// `end`, or a (free) variable.
    pub fn unfold(&self) -> SessionType {
        let mut t = self.clone();
        while let SessionType::Rec { var, body } = &t {
            t = body.subst(var, &t);
        }
        t
    }

    /// Canonical form: branches sorted by label, recursively.
    pub fn canonical(&self) -> SessionType {
        match self {
            SessionType::End => SessionType::End,
            SessionType::Var(t) => SessionType::Var(t.clone()),
            SessionType::Rec { var, body } => SessionType::Rec {
                var: var.clone(),
                body: Box::new(body.canonical()),
            },
            SessionType::Out { to, branches } => SessionType::Out {
                to: to.clone(),
                branches: canonical_branches(branches, SessionType::canonical),
            },
            SessionType::In { from, branches } => SessionType::In {
                from: from.clone(),
                branches: canonical_branches(branches, SessionType::canonical),
            },
        }
    }

    /// The finite set of unfolded types reachable from `self` through
    /// continuations; the state space of every coinductive procedure.
    pub fn closure(&self) -> BTreeSet<SessionType> {
        let mut seen = BTreeSet::new();
        let mut work = vec![self.unfold()];
        while let Some(t) = work.pop() {
            if !seen.insert(t.clone()) {
                continue;
            }
            if let SessionType::Out { branches, .. } | SessionType::In { branches, .. } = &t {
                for b in branches {
                    work.push(b.cont.unfold());
                }
            }
        }
        seen
    }
}

fn subst_branches<T: Clone>(
    branches: &[TypeBranch<T>],
    f: impl Fn(&T) -> T,
) -> Vec<TypeBranch<T>> {
    branches
        .iter()
        .map(|b| TypeBranch {
            label: b.label.clone(),
            payload: b.payload.clone(),
            cont: f(&b.cont),
        })
        .collect()
}

fn canonical_branches<T: Clone + Ord>(
    branches: &[TypeBranch<T>],
    f: impl Fn(&T) -> T,
) -> Vec<TypeBranch<T>> {
    let mut out = subst_branches(branches, f);
    out.sort();
    out
}

impl GlobalType {
    pub fn well_formed(&self) -> Result<(), WfError> {
        self.wf(&mut Vec::new())
    }

    fn wf(&self, bound: &mut Vec<TypeVar>) -> Result<(), WfError> {
        match self {
            GlobalType::End => Ok(()),
            GlobalType::Var(t) => {
                if bound.contains(t) {
                    Ok(())
                } else {
                    Err(WfError::FreeTypeVariable(t.clone()))
                }
            }
            GlobalType::Rec { var, body } => {
                if body.unguarded(var) {
                    return Err(WfError::Unguarded(var.clone()));
                }
                bound.push(var.clone());
                let r = body.wf(bound);
                bound.pop();
                r
            }
            GlobalType::Comm { from, to, branches } => {
                if from == to {
                    return Err(WfError::SelfCommunication(from.clone()));
                }
                check_labels(branches)?;
                for b in branches {
                    b.cont.wf(bound)?;
                }
                Ok(())
            }
        }
    }

    fn unguarded(&self, var: &TypeVar) -> bool {
        match self {
            GlobalType::Var(t) => t == var,
            GlobalType::Rec { var: v, body } => v != var && body.unguarded(var),
            _ => false,
        }
    }

    pub fn subst(&self, var: &TypeVar, replacement: &GlobalType) -> GlobalType {
        match self {
            GlobalType::End => GlobalType::End,
            GlobalType::Var(t) => {
                if t == var {
                    replacement.clone()
                } else {
                    GlobalType::Var(t.clone())
                }
            }
            GlobalType::Rec { var: v, body } => {
                if v == var {
                    self.clone()
                } else {
                    GlobalType::Rec {
                        var: v.clone(),
                        body: Box::new(body.subst(var, replacement)),
                    }
                }
            }
            GlobalType::Comm { from, to, branches } => GlobalType::Comm {
                from: from.clone(),
                to: to.clone(),
                branches: subst_branches(branches, |c| c.subst(var, replacement)),
            },
        }
    }

    pub fn unfold(&self) -> GlobalType {
        let mut g = self.clone();
        while let GlobalType::Rec { var, body } = &g {
            g = body.subst(var, &g);
        }
        g
    }
}
