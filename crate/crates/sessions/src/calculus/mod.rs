//! The multiparty session calculus: values, expressions, processes,
//! sessions, and their labelled transition systems.

mod eval;
mod lts;
mod normalize;

pub use eval::{eval_expr, EvalError};
pub use lts::{step_process, step_session, traces, Action, SessionAction, Trace};
pub use normalize::{normalize_process, normalize_session};

use thiserror::Error;

use crate::ids::{Label, Level, Participant, Topic};
use crate::types::{AnnotatedSort, SessionType, Sort};

/// A literal payload of one of the four base sorts.
#[derive(
    Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum Payload {
    Nat(u64),
    Int(i64),
    Bool(bool),
    Str(String),
}

impl Payload {
    pub fn sort(&self) -> Sort {
        match self {
            Payload::Nat(_) => Sort::Nat,
            Payload::Int(_) => Sort::Int,
            Payload::Bool(_) => Sort::Bool,
            Payload::Str(_) => Sort::Str,
        }
    }
}

/// A value `v^{l,t}`: a payload carrying a security level and a topic.
#[derive(
    Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct Value {
    pub payload: Payload,
    pub level: Level,
    pub topic: Topic,
}

impl Value {
    pub fn new(payload: Payload, level: Level, topic: Topic) -> Self {
        Value {
            payload,
            level,
            topic,
        }
    }

    pub fn annotation(&self) -> AnnotatedSort {
        AnnotatedSort::new(self.payload.sort(), self.level.clone(), self.topic.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Lt,
    Eq,
    And,
    Or,
    Concat,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Lt => "<",
            BinOp::Eq => "==",
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Concat => "++",
        }
    }

    /// The fixed operator table `op: S1,S2 → S3`.
    pub fn signature(self, s1: Sort, s2: Sort) -> Option<Sort> {
        use Sort::*;
        match (self, s1, s2) {
            (BinOp::Add | BinOp::Mul, Nat, Nat) => Some(Nat),
            (BinOp::Add | BinOp::Mul | BinOp::Sub, Int, Int) => Some(Int),
            (BinOp::Lt | BinOp::Eq, Nat, Nat) | (BinOp::Lt | BinOp::Eq, Int, Int) => Some(Bool),
            (BinOp::And | BinOp::Or, Bool, Bool) => Some(Bool),
            (BinOp::Concat, Str, Str) => Some(Str),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnOp {
    Not,
}

impl UnOp {
    pub fn signature(self, s: Sort) -> Option<Sort> {
        match (self, s) {
            (UnOp::Not, Sort::Bool) => Some(Sort::Bool),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expression {
    Var(String),
    Lit(Value),
    Bin(BinOp, Box<Expression>, Box<Expression>),
    Un(UnOp, Box<Expression>),
}

impl Expression {
    pub fn free_vars(&self) -> Vec<&str> {
        match self {
            Expression::Var(x) => vec![x],
            Expression::Lit(_) => vec![],
            Expression::Bin(_, a, b) => {
                let mut v = a.free_vars();
                v.extend(b.free_vars());
                v
            }
            Expression::Un(_, a) => a.free_vars(),
        }
    }

    fn subst(&self, x: &str, v: &Value) -> Expression {
        match self {
            Expression::Var(y) if y == x => Expression::Lit(v.clone()),
            Expression::Var(_) | Expression::Lit(_) => self.clone(),
            Expression::Bin(op, a, b) => {
                Expression::Bin(*op, Box::new(a.subst(x, v)), Box::new(b.subst(x, v)))
            }
            Expression::Un(op, a) => Expression::Un(*op, Box::new(a.subst(x, v))),
        }
    }
}

/// A sequential process of the calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    /// `q!λ(e).P`
    Output {
        to: Participant,
        label: Label,
        expr: Expression,
        cont: Box<Process>,
    },
    /// `p?λ(x).P`; the binder annotation is required for type checking and
    /// ignored by the operational semantics.
    Input {
        from: Participant,
        label: Label,
        var: String,
        annotation: Option<AnnotatedSort>,
        cont: Box<Process>,
    },
    /// `P ⊕ Q`
    InternalChoice(Box<Process>, Box<Process>),
    /// `P + Q`
    ExternalChoice(Box<Process>, Box<Process>),
    /// `μX.P`; an optional type annotation enables standalone inference.
    Rec {
        var: String,
        annotation: Option<SessionType>,
        body: Box<Process>,
    },
    Var(String),
    /// `0`
    Inact,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProcessError {
    #[error("unguarded recursion on `{0}`")]
    Unguarded(String),
    #[error("free process variable `{0}`")]
    FreeProcessVariable(String),
    #[error("free expression variable `{0}`")]
    FreeExpressionVariable(String),
    #[error("`{0}` is not a recursion")]
    NotARecursion(String),
}

impl Process {
    /// `P{v/x}`: replaces free occurrences of the expression variable `x`
    /// by the literal `v`; input binders for `x` shadow.
    pub fn subst_value(&self, x: &str, v: &Value) -> Process {
        match self {
            Process::Output {
                to,
                label,
                expr,
                cont,
            } => Process::Output {
                to: to.clone(),
                label: label.clone(),
                expr: expr.subst(x, v),
                cont: Box::new(cont.subst_value(x, v)),
            },
            Process::Input {
                from,
                label,
                var,
                annotation,
                cont,
            } => Process::Input {
                from: from.clone(),
                label: label.clone(),
                var: var.clone(),
                annotation: annotation.clone(),
                cont: if var == x {
                    cont.clone()
                } else {
                    Box::new(cont.subst_value(x, v))
                },
            },
            Process::InternalChoice(a, b) => Process::InternalChoice(
                Box::new(a.subst_value(x, v)),
                Box::new(b.subst_value(x, v)),
            ),
            Process::ExternalChoice(a, b) => Process::ExternalChoice(
                Box::new(a.subst_value(x, v)),
                Box::new(b.subst_value(x, v)),
            ),
            Process::Rec {
                var,
                annotation,
                body,
            } => Process::Rec {
                var: var.clone(),
                annotation: annotation.clone(),
                body: Box::new(body.subst_value(x, v)),
            },
            Process::Var(_) | Process::Inact => self.clone(),
        }
    }

    /// `P{Q/X}`: replaces free occurrences of the process variable `X`.
    pub fn subst_process(&self, x: &str, q: &Process) -> Process {
        match self {
            Process::Var(y) if y == x => q.clone(),
            Process::Var(_) | Process::Inact => self.clone(),
            Process::Output {
                to,
                label,
                expr,
                cont,
            } => Process::Output {
                to: to.clone(),
                label: label.clone(),
                expr: expr.clone(),
                cont: Box::new(cont.subst_process(x, q)),
            },
            Process::Input {
                from,
                label,
                var,
                annotation,
                cont,
            } => Process::Input {
                from: from.clone(),
                label: label.clone(),
                var: var.clone(),
                annotation: annotation.clone(),
                cont: Box::new(cont.subst_process(x, q)),
            },
            Process::InternalChoice(a, b) => Process::InternalChoice(
                Box::new(a.subst_process(x, q)),
                Box::new(b.subst_process(x, q)),
            ),
            Process::ExternalChoice(a, b) => Process::ExternalChoice(
                Box::new(a.subst_process(x, q)),
                Box::new(b.subst_process(x, q)),
            ),
            Process::Rec {
                var,
                annotation,
                body,
            } => {
                if var == x {
                    self.clone()
                } else {
                    Process::Rec {
                        var: var.clone(),
                        annotation: annotation.clone(),
                        body: Box::new(body.subst_process(x, q)),
                    }
                }
            }
        }
    }

    /// One unfolding of `μX.P` into `P{μX.P/X}`.
    pub fn unfold(&self) -> Result<Process, ProcessError> {
        match self {
            Process::Rec { var, body, .. } => Ok(body.subst_process(var, self)),
            _ => Err(ProcessError::NotARecursion(format!("{self:?}"))),
        }
    }

    /// Guardedness and closedness: `μX.X` is not a process, and a process
    /// placed in a session has no free process or expression variables.
    pub fn validate(&self) -> Result<(), ProcessError> {
        self.check_guarded()?;
        self.check_closed(&mut Vec::new(), &mut Vec::new())
    }

    pub fn check_guarded(&self) -> Result<(), ProcessError> {
        match self {
            Process::Inact | Process::Var(_) => Ok(()),
            Process::Output { cont, .. } | Process::Input { cont, .. } => cont.check_guarded(),
            Process::InternalChoice(a, b) | Process::ExternalChoice(a, b) => {
                a.check_guarded()?;
                b.check_guarded()
            }
            Process::Rec { var, body, .. } => {
                if body.unguarded(var) {
                    Err(ProcessError::Unguarded(var.clone()))
                } else {
                    body.check_guarded()
                }
            }
        }
    }

    fn unguarded(&self, var: &str) -> bool {
        match self {
            Process::Var(y) => y == var,
            Process::InternalChoice(a, b) | Process::ExternalChoice(a, b) => {
                a.unguarded(var) || b.unguarded(var)
            }
            Process::Rec { var: v, body, .. } => v != var && body.unguarded(var),
            _ => false,
        }
    }

    fn check_closed(
        &self,
        evars: &mut Vec<String>,
        pvars: &mut Vec<String>,
    ) -> Result<(), ProcessError> {
        match self {
            Process::Inact => Ok(()),
            Process::Var(x) => {
                if pvars.contains(x) {
                    Ok(())
                } else {
                    Err(ProcessError::FreeProcessVariable(x.clone()))
                }
            }
            Process::Output { expr, cont, .. } => {
                for v in expr.free_vars() {
                    if !evars.iter().any(|e| e == v) {
                        return Err(ProcessError::FreeExpressionVariable(v.to_owned()));
                    }
                }
                cont.check_closed(evars, pvars)
            }
            Process::Input { var, cont, .. } => {
                evars.push(var.clone());
                let r = cont.check_closed(evars, pvars);
                evars.pop();
                r
            }
            Process::InternalChoice(a, b) | Process::ExternalChoice(a, b) => {
                a.check_closed(evars, pvars)?;
                b.check_closed(evars, pvars)
            }
            Process::Rec { var, body, .. } => {
                pvars.push(var.clone());
                let r = body.check_closed(evars, pvars);
                pvars.pop();
                r
            }
        }
    }
}

/// A multiparty session: a parallel composition of participant/process
/// pairs with pairwise distinct participants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Session {
    pub members: Vec<(Participant, Process)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("duplicate participant `{0}`")]
    DuplicateParticipant(Participant),
    #[error(transparent)]
    Process(#[from] ProcessError),
}

impl Session {
    pub fn new(members: Vec<(Participant, Process)>) -> Result<Self, SessionError> {
        let mut seen = std::collections::BTreeSet::new();
        for (p, proc) in &members {
            if !seen.insert(p.clone()) {
                return Err(SessionError::DuplicateParticipant(p.clone()));
            }
            proc.validate()?;
        }
        Ok(Session { members })
    }

    pub fn participants(&self) -> impl Iterator<Item = &Participant> {
        self.members.iter().map(|(p, _)| p)
    }

    pub fn process_of(&self, p: &Participant) -> Option<&Process> {
        self.members
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, proc)| proc)
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn substitution_replaces_free_occurrences() {
        let v = val_nat(5, "bot", "phi");
        let p = out("q", "l", Expression::Var("x".into()), Process::Inact);
        let expected = out("q", "l", lit(v.clone()), Process::Inact);
        assert_eq!(p.subst_value("x", &v), expected);
    }

    #[test]
    fn input_binder_shadows() {
        let v = val_nat(5, "bot", "phi");
        let p = inp(
            "p",
            "l",
            "x",
            out("q", "l", Expression::Var("x".into()), Process::Inact),
        );
        assert_eq!(p.subst_value("x", &v), p);
    }

    #[test]
    fn substitution_on_inact_is_identity() {
        let v = val_nat(5, "bot", "phi");
        assert_eq!(Process::Inact.subst_value("x", &v), Process::Inact);
    }

    #[test]
    fn unfold_once() {
        let p = rec("X", inp("p", "l", "x", Process::Var("X".into())));
        let expected = inp("p", "l", "x", p.clone());
        assert_eq!(p.unfold().unwrap(), expected);

        let no_var = rec(
            "X",
            out("q", "l", lit(val_nat(1, "bot", "phi")), Process::Inact),
        );
        assert_eq!(
            no_var.unfold().unwrap(),
            out("q", "l", lit(val_nat(1, "bot", "phi")), Process::Inact)
        );
        assert!(Process::Inact.unfold().is_err());
    }

    #[test]
    fn mu_x_x_is_not_a_process() {
        let p = rec("X", Process::Var("X".into()));
        assert_eq!(p.validate(), Err(ProcessError::Unguarded("X".into())));
    }

    #[test]
    fn free_variables_rejected_at_session_level() {
        let open = out("q", "l", Expression::Var("x".into()), Process::Inact);
        assert!(matches!(
            open.validate(),
            Err(ProcessError::FreeExpressionVariable(_))
        ));
        assert!(matches!(
            Process::Var("X".into()).validate(),
            Err(ProcessError::FreeProcessVariable(_))
        ));
    }

    #[test]
    fn duplicate_participants_rejected() {
        let err = Session::new(vec![
            (Participant::from("p"), Process::Inact),
            (Participant::from("p"), Process::Inact),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            SessionError::DuplicateParticipant(Participant::from("p"))
        );
    }
}
