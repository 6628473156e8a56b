//! Typing of expressions, processes and sessions under the
//! safe-types-only regime.
//!
//! Inference is syntax-directed and available for annotation-complete
//! processes; recursive processes are normally checked bidirectionally
//! against the projection of a global type, with `μX.P` handled by binding
//! `X` to the expected type. The write summary `Δ` is computed and
//! reported but imposes no typability constraint.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::calculus::{Expression, Process, Session};
use crate::ids::{Label, Level, Participant, Topic};
use crate::security::{Lattice, ReadingPolicy, SecurityError, TopicUniverse};
use crate::types::{
    equirec_eq, participants, project, safe_type, subtype, AnnotatedSort, ProjectError,
    SessionType, Sort, TypeBranch, WfError,
};

/// Shared typing context: the security structures every judgment consults.
#[derive(Clone, Copy)]
pub struct Ctx<'a> {
    pub lattice: &'a Lattice,
    pub universe: &'a TopicUniverse,
    pub policy: &'a ReadingPolicy,
}

impl<'a> Ctx<'a> {
    fn is_safe(&self, t: &SessionType) -> bool {
        safe_type(t, self.policy, self.universe, self.lattice)
    }
}

/// The environment Γ: expression variables with annotated sorts, process
/// variables with (safe) session types.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    pub vars: BTreeMap<String, AnnotatedSort>,
    pub procs: BTreeMap<String, SessionType>,
}

/// The write summary Δ: per-topic meet of the levels written so far.
/// Missing entries stand for ⊤.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WriteSummary(pub BTreeMap<Topic, Level>);

impl WriteSummary {
    fn record(&mut self, topic: &Topic, level: &Level, lattice: &Lattice) {
        let entry = match self.0.get(topic) {
            Some(existing) => lattice.meet(existing, level).unwrap_or_else(|_| level.clone()),
            None => level.clone(),
        };
        self.0.insert(topic.clone(), entry);
    }

    fn meet(mut self, other: WriteSummary, lattice: &Lattice) -> WriteSummary {
        for (t, l) in other.0 {
            self.record(&t, &l, lattice);
        }
        self
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("operands on distinct topics `{0}` and `{1}`")]
    TopicMismatch(Topic, Topic),
    #[error("operator `{op}` not defined at sorts {s1:?}, {s2:?}")]
    SortMismatch { op: String, s1: Sort, s2: Sort },
    #[error("at {path}: choice branches address different partners")]
    MixedPeers { path: String },
    #[error("at {path}: duplicate label `{label}` in one choice")]
    DuplicateLabel { path: String, label: Label },
    #[error("at {path}: missing annotation (input binder or recursion)")]
    MissingAnnotation { path: String },
    #[error("at {path}: {detail}")]
    TypeMismatch { path: String, detail: String },
    #[error("at {path}: type is not safe")]
    UnsafeType { path: String },
    #[error("at {path}: label `{label}` not offered by the expected type")]
    LabelNotOffered { path: String, label: Label },
    #[error("at {path}: communicated value has annotation {found:?}, expected {expected:?}")]
    SortOrAnnotationMismatch {
        path: String,
        found: Box<AnnotatedSort>,
        expected: Box<AnnotatedSort>,
    },
    #[error("participant `{0}` of the global type is absent from the session")]
    MissingParticipant(Participant),
    #[error(transparent)]
    NotProjectable(#[from] ProjectError),
    #[error(transparent)]
    Wf(#[from] WfError),
    #[error(transparent)]
    Security(#[from] SecurityError),
}

/// Table 3: typing of expressions.
pub fn type_expr(
    env: &Environment,
    e: &Expression,
    lattice: &Lattice,
) -> Result<AnnotatedSort, CheckError> {
    match e {
        Expression::Var(x) => env
            .vars
            .get(x)
            .cloned()
            .ok_or_else(|| CheckError::UnboundVariable(x.clone())),
        Expression::Lit(v) => Ok(v.annotation()),
        Expression::Bin(op, a, b) => {
            let ta = type_expr(env, a, lattice)?;
            let tb = type_expr(env, b, lattice)?;
            if ta.topic != tb.topic {
                return Err(CheckError::TopicMismatch(ta.topic, tb.topic));
            }
            let sort = op
                .signature(ta.sort, tb.sort)
                .ok_or_else(|| CheckError::SortMismatch {
                    op: op.symbol().to_owned(),
                    s1: ta.sort,
                    s2: tb.sort,
                })?;
            Ok(AnnotatedSort::new(
                sort,
                lattice.join(&ta.level, &tb.level)?,
                ta.topic,
            ))
        }
        Expression::Un(op, a) => {
            let ta = type_expr(env, a, lattice)?;
            let sort = op
                .signature(ta.sort)
                .ok_or_else(|| CheckError::SortMismatch {
                    op: "not".to_owned(),
                    s1: ta.sort,
                    s2: ta.sort,
                })?;
            Ok(AnnotatedSort::new(sort, ta.level, ta.topic))
        }
    }
}

/// Table 4, synthesis direction: the unique syntax-directed type of an
/// annotation-complete process, together with its write summary.
pub fn infer_process(
    env: &Environment,
    p: &Process,
    ctx: Ctx<'_>,
) -> Result<(SessionType, WriteSummary), CheckError> {
    infer(env, p, ctx, "")
}

fn infer(
    env: &Environment,
    p: &Process,
    ctx: Ctx<'_>,
    path: &str,
) -> Result<(SessionType, WriteSummary), CheckError> {
    match p {
        Process::Inact => Ok((SessionType::End, WriteSummary::default())),
        Process::Var(x) => env
            .procs
            .get(x)
            .map(|t| (t.clone(), WriteSummary::default()))
            .ok_or_else(|| CheckError::UnboundVariable(x.clone())),
        Process::Output {
            to,
            label,
            expr,
            cont,
        } => {
            let payload = type_expr(env, expr, ctx.lattice)?;
            let (tc, mut ws) = infer(env, cont, ctx, &format!("{path}.!{label}"))?;
            ws.record(&payload.topic, &payload.level, ctx.lattice);
            Ok((
                SessionType::Out {
                    to: to.clone(),
                    branches: vec![TypeBranch {
                        label: label.clone(),
                        payload,
                        cont: tc,
                    }],
                },
                ws,
            ))
        }
        Process::Input {
            from,
            label,
            var,
            annotation,
            cont,
        } => {
            let payload = annotation.clone().ok_or_else(|| CheckError::MissingAnnotation {
                path: format!("{path}.?{label}"),
            })?;
            let mut inner = env.clone();
            inner.vars.insert(var.clone(), payload.clone());
            let (tc, ws) = infer(&inner, cont, ctx, &format!("{path}.?{label}"))?;
            Ok((
                SessionType::In {
                    from: from.clone(),
                    branches: vec![TypeBranch {
                        label: label.clone(),
                        payload,
                        cont: tc,
                    }],
                },
                ws,
            ))
        }
        Process::InternalChoice(a, b) => {
            let (ta, wa) = infer(env, a, ctx, path)?;
            let (tb, wb) = infer(env, b, ctx, path)?;
            let t = merge_choice(ta, tb, true, path)?;
            Ok((t, wa.meet(wb, ctx.lattice)))
        }
        Process::ExternalChoice(a, b) => {
            let (ta, wa) = infer(env, a, ctx, path)?;
            let (tb, wb) = infer(env, b, ctx, path)?;
            let t = merge_choice(ta, tb, false, path)?;
            Ok((t, wa.meet(wb, ctx.lattice)))
        }
        Process::Rec {
            var,
            annotation,
            body,
        } => {
            let expected = annotation.clone().ok_or_else(|| CheckError::MissingAnnotation {
                path: format!("{path}.rec {var}"),
            })?;
            expected.well_formed()?;
            if !ctx.is_safe(&expected) {
                return Err(CheckError::UnsafeType {
                    path: format!("{path}.rec {var}"),
                });
            }
            let mut inner = env.clone();
            inner.procs.insert(var.clone(), expected.clone());
            let (tb, ws) = infer(&inner, body, ctx, &format!("{path}.rec {var}"))?;
            if !equirec_eq(&tb, &expected) {
                return Err(CheckError::TypeMismatch {
                    path: format!("{path}.rec {var}"),
                    detail: "body type does not match the recursion annotation".into(),
                });
            }
            Ok((expected, ws))
        }
    }
}

/// Union (`internal = true`) or intersection of two syntax-directed types.
fn merge_choice(
    a: SessionType,
    b: SessionType,
    internal: bool,
    path: &str,
) -> Result<SessionType, CheckError> {
    let mixed = || CheckError::MixedPeers {
        path: path.to_owned(),
    };
    match (a, b, internal) {
        (
            SessionType::Out {
                to: q1,
                branches: mut b1,
            },
            SessionType::Out {
                to: q2,
                branches: b2,
            },
            true,
        ) => {
            if q1 != q2 {
                return Err(mixed());
            }
            for nb in b2 {
                if b1.iter().any(|x| x.label == nb.label) {
                    return Err(CheckError::DuplicateLabel {
                        path: path.to_owned(),
                        label: nb.label,
                    });
                }
                b1.push(nb);
            }
            Ok(SessionType::Out {
                to: q1,
                branches: b1,
            })
        }
        (
            SessionType::In {
                from: p1,
                branches: mut b1,
            },
            SessionType::In {
                from: p2,
                branches: b2,
            },
            false,
        ) => {
            if p1 != p2 {
                return Err(mixed());
            }
            for nb in b2 {
                if b1.iter().any(|x| x.label == nb.label) {
                    return Err(CheckError::DuplicateLabel {
                        path: path.to_owned(),
                        label: nb.label,
                    });
                }
                b1.push(nb);
            }
            Ok(SessionType::In {
                from: p1,
                branches: b1,
            })
        }
        _ => Err(mixed()),
    }
}

/// Checks `P` against a well-formed, closed, safe expected type, with
/// subsumption folded in.
pub fn check_process(
    env: &Environment,
    p: &Process,
    expected: &SessionType,
    ctx: Ctx<'_>,
) -> Result<(), CheckError> {
    expected.well_formed()?;
    if !ctx.is_safe(expected) {
        return Err(CheckError::UnsafeType {
            path: "expected type".into(),
        });
    }
    let mut env = env.clone();
    check(&mut env, p, expected, ctx, "")
}

fn check(
    env: &mut Environment,
    p: &Process,
    expected_raw: &SessionType,
    ctx: Ctx<'_>,
    path: &str,
) -> Result<(), CheckError> {
    let expected = expected_raw.unfold();
    match p {
        Process::Inact => {
            if expected == SessionType::End {
                Ok(())
            } else {
                Err(CheckError::TypeMismatch {
                    path: path.to_owned(),
                    detail: "terminated process against a non-end type".into(),
                })
            }
        }
        Process::Var(x) => {
            let bound = env
                .procs
                .get(x)
                .cloned()
                .ok_or_else(|| CheckError::UnboundVariable(x.clone()))?;
            if subtype(&bound, &expected) {
                Ok(())
            } else {
                Err(CheckError::TypeMismatch {
                    path: path.to_owned(),
                    detail: format!("recursion variable `{x}` bound at an incompatible type"),
                })
            }
        }
        Process::Rec { var, body, .. } => {
            // [t-rec]: bind X to the expected type and check the body.
            let saved = env.procs.insert(var.clone(), expected_raw.clone());
            let result = check(env, body, &expected, ctx, &format!("{path}.rec {var}"));
            match saved {
                Some(t) => {
                    env.procs.insert(var.clone(), t);
                }
                None => {
                    env.procs.remove(var);
                }
            }
            result
        }
        Process::Output {
            to,
            label,
            expr,
            cont,
        } => {
            let SessionType::Out {
                to: exp_to,
                branches,
            } = &expected
            else {
                return Err(CheckError::TypeMismatch {
                    path: path.to_owned(),
                    detail: "output process against a non-output type".into(),
                });
            };
            if exp_to != to {
                return Err(CheckError::TypeMismatch {
                    path: path.to_owned(),
                    detail: format!("output to `{to}` but type sends to `{exp_to}`"),
                });
            }
            let branch = branches
                .iter()
                .find(|b| &b.label == label)
                .ok_or_else(|| CheckError::LabelNotOffered {
                    path: path.to_owned(),
                    label: label.clone(),
                })?;
            let found = type_expr(env, expr, ctx.lattice)?;
            if found != branch.payload {
                return Err(CheckError::SortOrAnnotationMismatch {
                    path: path.to_owned(),
                    found: Box::new(found),
                    expected: Box::new(branch.payload.clone()),
                });
            }
            check(env, cont, &branch.cont, ctx, &format!("{path}.!{label}"))
        }
        Process::InternalChoice(a, b) => {
            // Each side hits a subset of the expected output branches.
            if !matches!(expected, SessionType::Out { .. }) {
                return Err(CheckError::TypeMismatch {
                    path: path.to_owned(),
                    detail: "internal choice against a non-output type".into(),
                });
            }
            check(env, a, &expected, ctx, path)?;
            check(env, b, &expected, ctx, path)
        }
        Process::Input { .. } | Process::ExternalChoice(..) => {
            let SessionType::In {
                from: exp_from,
                branches,
            } = &expected
            else {
                return Err(CheckError::TypeMismatch {
                    path: path.to_owned(),
                    detail: "input process against a non-input type".into(),
                });
            };
            let leaves = input_leaves(p, path)?;
            // Duplicate labels toward the same peer within one choice.
            for (i, a) in leaves.iter().enumerate() {
                for b in &leaves[i + 1..] {
                    if a.0 == b.0 && a.1 == b.1 {
                        return Err(CheckError::DuplicateLabel {
                            path: path.to_owned(),
                            label: a.1.clone(),
                        });
                    }
                }
            }
            // Every expected branch must be offered (sub-in: the process
            // side carries the larger intersection).
            for branch in branches {
                let leaf = leaves
                    .iter()
                    .find(|(from, label, ..)| from == exp_from && label == &branch.label)
                    .ok_or_else(|| CheckError::LabelNotOffered {
                        path: path.to_owned(),
                        label: branch.label.clone(),
                    })?;
                let (_, label, var, annotation, cont) = leaf;
                if let Some(ann) = annotation {
                    if *ann != branch.payload {
                        return Err(CheckError::SortOrAnnotationMismatch {
                            path: path.to_owned(),
                            found: Box::new(ann.clone()),
                            expected: Box::new(branch.payload.clone()),
                        });
                    }
                }
                let saved = env.vars.insert(var.clone(), branch.payload.clone());
                let r = check(env, cont, &branch.cont, ctx, &format!("{path}.?{label}"));
                match saved {
                    Some(t) => {
                        env.vars.insert(var.clone(), t);
                    }
                    None => {
                        env.vars.remove(var);
                    }
                }
                r?;
            }
            // Extra branches must still infer some safe session type.
            for (from, label, var, annotation, cont) in &leaves {
                if from == exp_from && branches.iter().any(|b| &b.label == label) {
                    continue;
                }
                let extra = Process::Input {
                    from: from.clone(),
                    label: label.clone(),
                    var: var.clone(),
                    annotation: annotation.clone(),
                    cont: Box::new(cont.clone()),
                };
                let (t, _) = infer(env, &extra, ctx, path)?;
                if !ctx.is_safe(&t) {
                    return Err(CheckError::UnsafeType {
                        path: format!("{path}.?{label}"),
                    });
                }
            }
            Ok(())
        }
    }
}

type InputLeaf = (
    Participant,
    Label,
    String,
    Option<AnnotatedSort>,
    Process,
);

/// Flattens an external choice into its input leaves.
fn input_leaves(p: &Process, path: &str) -> Result<Vec<InputLeaf>, CheckError> {
    match p {
        Process::Input {
            from,
            label,
            var,
            annotation,
            cont,
        } => Ok(vec![(
            from.clone(),
            label.clone(),
            var.clone(),
            annotation.clone(),
            (**cont).clone(),
        )]),
        Process::ExternalChoice(a, b) => {
            let mut leaves = input_leaves(a, path)?;
            leaves.extend(input_leaves(b, path)?);
            Ok(leaves)
        }
        _ => Err(CheckError::TypeMismatch {
            path: path.to_owned(),
            detail: "external choice branch is not an input".into(),
        }),
    }
}

/// Per-participant verdicts of a session check.
#[derive(Clone, Debug)]
pub struct ParticipantReport {
    pub participant: Participant,
    pub projection: Option<SessionType>,
    pub error: Option<CheckError>,
}

#[derive(Clone, Debug)]
pub struct SessionReport {
    pub participants: Vec<ParticipantReport>,
    pub global_error: Option<CheckError>,
}

impl SessionReport {
    pub fn ok(&self) -> bool {
        self.global_error.is_none() && self.participants.iter().all(|p| p.error.is_none())
    }

    pub fn first_error(&self) -> Option<&CheckError> {
        self.global_error
            .as_ref()
            .or_else(|| self.participants.iter().find_map(|p| p.error.as_ref()))
    }
}

/// Rule [t-sess]: every participant's process checks against the
/// projection of the global type; participants absent from the global
/// type must be terminated.
pub fn check_session(n: &Session, g: &crate::types::GlobalType, ctx: Ctx<'_>) -> SessionReport {
    if let Err(e) = g.well_formed() {
        return SessionReport {
            participants: vec![],
            global_error: Some(e.into()),
        };
    }
    let parts = participants(g);
    let session_parts: Vec<&Participant> = n.participants().collect();
    for p in &parts {
        if !session_parts.contains(&p) {
            return SessionReport {
                participants: vec![],
                global_error: Some(CheckError::MissingParticipant(p.clone())),
            };
        }
    }
    let mut reports = Vec::new();
    for (p, proc) in &n.members {
        let entry = if parts.contains(p) {
            match project(g, p) {
                Ok(t) => {
                    let error = check_process(&Environment::default(), proc, &t, ctx).err();
                    ParticipantReport {
                        participant: p.clone(),
                        projection: Some(t),
                        error,
                    }
                }
                Err(e) => ParticipantReport {
                    participant: p.clone(),
                    projection: None,
                    error: Some(e.into()),
                },
            }
        } else {
            // Only the projection `end` is available: the process must be
            // structurally terminated.
            let error = if crate::calculus::normalize_process(proc) == Process::Inact {
                None
            } else {
                Some(CheckError::TypeMismatch {
                    path: p.to_string(),
                    detail: "participant absent from the global type must be terminated".into(),
                })
            };
            ParticipantReport {
                participant: p.clone(),
                projection: Some(SessionType::End),
                error,
            }
        };
        reports.push(entry);
    }
    SessionReport {
        participants: reports,
        global_error: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::testutil::*;
    use crate::calculus::{Payload, Value};
    use crate::ids::Level;
    use crate::types::testutil::{ann, in1, out1};
    use crate::types::GlobalType;

    fn chain() -> Lattice {
        Lattice::from_covers(
            [Level::from("bot"), Level::from("mid"), Level::from("top")],
            [
                (Level::from("bot"), Level::from("mid")),
                (Level::from("mid"), Level::from("top")),
            ],
        )
        .unwrap()
    }

    fn indep() -> TopicUniverse {
        TopicUniverse::new(
            [Topic::from("phi"), Topic::from("psi")],
            [(Topic::from("phi"), Topic::from("psi"))],
        )
        .unwrap()
    }

    fn related() -> TopicUniverse {
        TopicUniverse::new([Topic::from("phi"), Topic::from("psi")], []).unwrap()
    }

    #[test]
    fn expression_typing_joins_levels() {
        let lat = chain();
        let mut env = Environment::default();
        env.vars.insert(
            "x".into(),
            AnnotatedSort::new(Sort::Nat, Level::from("bot"), Topic::from("phi")),
        );
        let e = Expression::Bin(
            crate::calculus::BinOp::Add,
            Box::new(Expression::Var("x".into())),
            Box::new(lit(val_nat(2, "mid", "phi"))),
        );
        assert_eq!(
            type_expr(&env, &e, &lat).unwrap(),
            AnnotatedSort::new(Sort::Nat, Level::from("mid"), Topic::from("phi"))
        );
    }

    #[test]
    fn literal_types_as_itself() {
        let lat = chain();
        let v = Value::new(Payload::Bool(true), Level::from("top"), Topic::from("phi"));
        assert_eq!(
            type_expr(&Environment::default(), &Expression::Lit(v), &lat).unwrap(),
            AnnotatedSort::new(Sort::Bool, Level::from("top"), Topic::from("phi"))
        );
    }

    #[test]
    fn cross_topic_operation_rejected() {
        let lat = chain();
        let e = Expression::Bin(
            crate::calculus::BinOp::Add,
            Box::new(lit(val_nat(1, "bot", "phi"))),
            Box::new(lit(val_nat(1, "bot", "psi"))),
        );
        assert!(matches!(
            type_expr(&Environment::default(), &e, &lat),
            Err(CheckError::TopicMismatch(..))
        ));
    }

    /// p?l(x: bool^{top,phi}). r!m(false^{bot,psi}). 0
    fn relay_process() -> Process {
        Process::Input {
            from: "p".into(),
            label: "l".into(),
            var: "x".into(),
            annotation: Some(ann(Sort::Bool, "top", "phi")),
            cont: Box::new(out(
                "r",
                "m",
                Expression::Lit(Value::new(
                    Payload::Bool(false),
                    Level::from("bot"),
                    Topic::from("psi"),
                )),
                Process::Inact,
            )),
        }
    }

    #[test]
    fn relay_process_infers_its_expected_type() {
        let lat = chain();
        let u = indep();
        let mut pol = ReadingPolicy::new(Level::from("top"));
        pol.set("p".into(), Topic::from("phi"), Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let (t, ws) = infer_process(&Environment::default(), &relay_process(), ctx).unwrap();
        let expected = in1(
            "p",
            "l",
            ann(Sort::Bool, "top", "phi"),
            out1("r", "m", ann(Sort::Bool, "bot", "psi"), SessionType::End),
        );
        assert_eq!(t, expected);
        assert_eq!(
            ws.0,
            BTreeMap::from([(Topic::from("psi"), Level::from("bot"))])
        );
        // Checking against its own type succeeds with independent topics
        // and fails when the topics are correlated.
        assert_eq!(
            check_process(&Environment::default(), &relay_process(), &expected, ctx),
            Ok(())
        );
        let rel = related();
        let ctx_rel = Ctx {
            lattice: &lat,
            universe: &rel,
            policy: &pol,
        };
        assert!(matches!(
            check_process(&Environment::default(), &relay_process(), &expected, ctx_rel),
            Err(CheckError::UnsafeType { .. })
        ));
    }

    #[test]
    fn inact_types_end_with_empty_summary() {
        let lat = chain();
        let u = indep();
        let pol = ReadingPolicy::new(Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let (t, ws) = infer_process(&Environment::default(), &Process::Inact, ctx).unwrap();
        assert_eq!(t, SessionType::End);
        assert!(ws.0.is_empty());
    }

    #[test]
    fn output_records_write_summary() {
        let lat = chain();
        let u = indep();
        let pol = ReadingPolicy::new(Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let p = out("q", "l", lit(val_nat(1, "mid", "phi")), Process::Inact);
        let (t, ws) = infer_process(&Environment::default(), &p, ctx).unwrap();
        assert_eq!(
            t,
            out1("q", "l", ann(Sort::Nat, "mid", "phi"), SessionType::End)
        );
        assert_eq!(
            ws.0,
            BTreeMap::from([(Topic::from("phi"), Level::from("mid"))])
        );
    }

    #[test]
    fn recursive_process_checks_against_mu_type() {
        let lat = chain();
        let u = indep();
        let pol = ReadingPolicy::new(Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let p = rec(
            "X",
            Process::Input {
                from: "p".into(),
                label: "l".into(),
                var: "x".into(),
                annotation: Some(ann(Sort::Nat, "bot", "phi")),
                cont: Box::new(Process::Var("X".into())),
            },
        );
        let t = SessionType::Rec {
            var: crate::ids::TypeVar::from("t"),
            body: Box::new(in1(
                "p",
                "l",
                ann(Sort::Nat, "bot", "phi"),
                SessionType::Var(crate::ids::TypeVar::from("t")),
            )),
        };
        assert_eq!(check_process(&Environment::default(), &p, &t, ctx), Ok(()));
    }

    #[test]
    fn inversion_on_syntax_directed_inference() {
        let lat = chain();
        let u = indep();
        let pol = ReadingPolicy::new(Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let o = out("q", "l", lit(val_nat(1, "bot", "phi")), Process::Inact);
        assert!(matches!(
            infer_process(&Environment::default(), &o, ctx).unwrap().0,
            SessionType::Out { .. }
        ));
        let choice = Process::InternalChoice(
            Box::new(o.clone()),
            Box::new(out("q", "m", lit(val_nat(2, "bot", "phi")), Process::Inact)),
        );
        match infer_process(&Environment::default(), &choice, ctx).unwrap().0 {
            SessionType::Out { branches, .. } => assert_eq!(branches.len(), 2),
            other => panic!("expected a union of outputs, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_choice_labels_rejected() {
        let lat = chain();
        let u = indep();
        let pol = ReadingPolicy::new(Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let o = out("q", "l", lit(val_nat(1, "bot", "phi")), Process::Inact);
        let choice = Process::InternalChoice(Box::new(o.clone()), Box::new(o));
        assert!(matches!(
            infer_process(&Environment::default(), &choice, ctx),
            Err(CheckError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn terminated_spectator_session_checks_against_end() {
        let lat = chain();
        let u = indep();
        let pol = ReadingPolicy::new(Level::from("top"));
        let ctx = Ctx {
            lattice: &lat,
            universe: &u,
            policy: &pol,
        };
        let n = Session::new(vec![("p".into(), Process::Inact)]).unwrap();
        assert!(check_session(&n, &GlobalType::End, ctx).ok());
    }
}
