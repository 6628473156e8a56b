//! The model language: a line-oriented concrete syntax for lattices,
//! topics, reading policies, processes, sessions and global types, plus a
//! canonical printer whose output re-parses to equal terms.

mod lexer;
mod parser;
mod print;

pub use print::{
    print_action, print_ann, print_expr, print_global, print_payload, print_process,
    print_session, print_trace, print_type, print_value,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::calculus::{Expression, Process, Session, SessionError};
use crate::ids::{Level, Participant, Topic};
use crate::security::{Lattice, ReadingPolicy, SecurityError, TopicUniverse};
use crate::types::{AnnotatedSort, GlobalType, SessionType};

use lexer::lex;
use parser::{Item, Parser};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("duplicate definition of `{0}`")]
    DuplicateDefinition(String),
    #[error("invalid model: {0}")]
    Invalid(String),
}

impl From<SecurityError> for DslError {
    fn from(e: SecurityError) -> Self {
        DslError::Invalid(e.to_string())
    }
}

impl From<SessionError> for DslError {
    fn from(e: SessionError) -> Self {
        DslError::Invalid(e.to_string())
    }
}

/// A fully resolved model file.
#[derive(Clone, Debug)]
pub struct Model {
    pub lattice: Lattice,
    pub universe: TopicUniverse,
    pub policy: ReadingPolicy,
    pub processes: BTreeMap<String, Process>,
    pub sessions: BTreeMap<String, Session>,
    pub globals: BTreeMap<String, GlobalType>,
}

impl Model {
    /// The unique session of a single-session model, otherwise an error
    /// naming the ambiguity.
    pub fn only_session(&self) -> Result<(&String, &Session), DslError> {
        let mut it = self.sessions.iter();
        match (it.next(), it.next()) {
            (Some(s), None) => Ok(s),
            (None, _) => Err(DslError::Invalid("the model declares no session".into())),
            _ => Err(DslError::Invalid(
                "the model declares several sessions; name one".into(),
            )),
        }
    }

    pub fn only_global(&self) -> Result<(&String, &GlobalType), DslError> {
        let mut it = self.globals.iter();
        match (it.next(), it.next()) {
            (Some(g), None) => Ok(g),
            (None, _) => Err(DslError::Invalid(
                "the model declares no global type".into(),
            )),
            _ => Err(DslError::Invalid(
                "the model declares several global types; name one".into(),
            )),
        }
    }
}

pub fn parse_model(text: &str) -> Result<Model, DslError> {
    let mut parser = Parser::new(lex(text)?);
    let items = parser.items()?;

    let mut lattice: Option<Lattice> = None;
    let mut universe: Option<TopicUniverse> = None;
    let mut default_level: Option<Level> = None;
    let mut read_entries: Vec<(Participant, Topic, Level)> = Vec::new();
    let mut processes: BTreeMap<String, Process> = BTreeMap::new();
    let mut sessions: BTreeMap<String, Session> = BTreeMap::new();
    let mut globals: BTreeMap<String, GlobalType> = BTreeMap::new();
    let mut raw_sessions: Vec<(String, Vec<(Participant, Process)>)> = Vec::new();

    for item in items {
        match item {
            Item::Lattice { levels, below } => {
                if lattice.is_some() {
                    return Err(DslError::DuplicateDefinition("lattice".into()));
                }
                lattice = Some(Lattice::from_covers(levels, below)?);
            }
            Item::Topics { topics, indep } => {
                if universe.is_some() {
                    return Err(DslError::DuplicateDefinition("topics".into()));
                }
                universe = Some(TopicUniverse::new(topics, indep)?);
            }
            Item::ReadDefault(l) => {
                if default_level.replace(l).is_some() {
                    return Err(DslError::DuplicateDefinition("read default".into()));
                }
            }
            Item::Read(p, t, l) => read_entries.push((p, t, l)),
            Item::Proc(name, body) => {
                // Named processes may reference earlier definitions.
                let resolved = resolve(&body, &processes, &mut Vec::new())?;
                if processes.insert(name.clone(), resolved).is_some() {
                    return Err(DslError::DuplicateDefinition(name));
                }
            }
            Item::Session(name, members) => raw_sessions.push((name, members)),
            Item::Global(name, g) => {
                if globals.insert(name.clone(), g).is_some() {
                    return Err(DslError::DuplicateDefinition(name));
                }
            }
        }
    }

    let lattice =
        lattice.ok_or_else(|| DslError::Invalid("the model declares no lattice".into()))?;
    let universe =
        universe.ok_or_else(|| DslError::Invalid("the model declares no topics".into()))?;

    // Reading policy: fail-closed — unlisted pairs read at the declared
    // default, or at bottom when no default is given.
    let mut policy =
        ReadingPolicy::new(default_level.unwrap_or_else(|| lattice.bottom().clone()));
    for (p, t, l) in read_entries {
        if !universe.contains(&t) {
            return Err(DslError::UnknownIdentifier(t.0));
        }
        policy.set(p, t, l);
    }
    policy.validate(&lattice)?;

    for (name, members) in raw_sessions {
        let resolved: Vec<(Participant, Process)> = members
            .into_iter()
            .map(|(p, proc)| Ok((p, resolve(&proc, &processes, &mut Vec::new())?)))
            .collect::<Result<_, DslError>>()?;
        let session = Session::new(resolved)?;
        if sessions.insert(name.clone(), session).is_some() {
            return Err(DslError::DuplicateDefinition(name));
        }
    }

    let model = Model {
        lattice,
        universe,
        policy,
        processes,
        sessions,
        globals,
    };
    validate_annotations(&model)?;
    Ok(model)
}

/// Replaces references to named processes, leaving recursion-bound
/// variables alone.
fn resolve(
    p: &Process,
    defined: &BTreeMap<String, Process>,
    bound: &mut Vec<String>,
) -> Result<Process, DslError> {
    Ok(match p {
        Process::Var(x) => {
            if bound.iter().any(|b| b == x) {
                p.clone()
            } else if let Some(body) = defined.get(x) {
                body.clone()
            } else {
                return Err(DslError::UnknownIdentifier(x.clone()));
            }
        }
        Process::Inact => Process::Inact,
        Process::Output {
            to,
            label,
            expr,
            cont,
        } => Process::Output {
            to: to.clone(),
            label: label.clone(),
            expr: expr.clone(),
            cont: Box::new(resolve(cont, defined, bound)?),
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
            cont: Box::new(resolve(cont, defined, bound)?),
        },
        Process::InternalChoice(a, b) => Process::InternalChoice(
            Box::new(resolve(a, defined, bound)?),
            Box::new(resolve(b, defined, bound)?),
        ),
        Process::ExternalChoice(a, b) => Process::ExternalChoice(
            Box::new(resolve(a, defined, bound)?),
            Box::new(resolve(b, defined, bound)?),
        ),
        Process::Rec {
            var,
            annotation,
            body,
        } => {
            bound.push(var.clone());
            let body = resolve(body, defined, bound)?;
            bound.pop();
            Process::Rec {
                var: var.clone(),
                annotation: annotation.clone(),
                body: Box::new(body),
            }
        }
    })
}

/// Every level and topic mentioned in an annotation or literal must be
/// declared.
fn validate_annotations(model: &Model) -> Result<(), DslError> {
    let check_ann = |a: &AnnotatedSort| check_pair(model, &a.level, &a.topic);
    for p in model.processes.values() {
        check_proc(model, p)?;
    }
    for s in model.sessions.values() {
        for (_, p) in &s.members {
            check_proc(model, p)?;
        }
    }
    for g in model.globals.values() {
        visit_global(g, &check_ann)?;
    }
    Ok(())
}

fn check_pair(model: &Model, level: &Level, topic: &Topic) -> Result<(), DslError> {
    if !model.lattice.contains(level) {
        return Err(DslError::UnknownIdentifier(level.0.clone()));
    }
    if !model.universe.contains(topic) {
        return Err(DslError::UnknownIdentifier(topic.0.clone()));
    }
    Ok(())
}

fn check_proc(model: &Model, p: &Process) -> Result<(), DslError> {
    match p {
        Process::Inact | Process::Var(_) => Ok(()),
        Process::Output { expr, cont, .. } => {
            check_expr(model, expr)?;
            check_proc(model, cont)
        }
        Process::Input {
            annotation, cont, ..
        } => {
            if let Some(a) = annotation {
                check_pair(model, &a.level, &a.topic)?;
            }
            check_proc(model, cont)
        }
        Process::InternalChoice(a, b) | Process::ExternalChoice(a, b) => {
            check_proc(model, a)?;
            check_proc(model, b)
        }
        Process::Rec {
            annotation, body, ..
        } => {
            if let Some(t) = annotation {
                visit_type(t, &|a| check_pair(model, &a.level, &a.topic))?;
            }
            check_proc(model, body)
        }
    }
}

fn check_expr(model: &Model, e: &Expression) -> Result<(), DslError> {
    match e {
        Expression::Var(_) => Ok(()),
        Expression::Lit(v) => check_pair(model, &v.level, &v.topic),
        Expression::Bin(_, a, b) => {
            check_expr(model, a)?;
            check_expr(model, b)
        }
        Expression::Un(_, a) => check_expr(model, a),
    }
}

fn visit_type(
    t: &SessionType,
    f: &impl Fn(&AnnotatedSort) -> Result<(), DslError>,
) -> Result<(), DslError> {
    match t {
        SessionType::End | SessionType::Var(_) => Ok(()),
        SessionType::Rec { body, .. } => visit_type(body, f),
        SessionType::Out { branches, .. } | SessionType::In { branches, .. } => {
            for b in branches {
                f(&b.payload)?;
                visit_type(&b.cont, f)?;
            }
            Ok(())
        }
    }
}

fn visit_global(
    g: &GlobalType,
    f: &impl Fn(&AnnotatedSort) -> Result<(), DslError>,
) -> Result<(), DslError> {
    match g {
        GlobalType::End | GlobalType::Var(_) => Ok(()),
        GlobalType::Rec { body, .. } => visit_global(body, f),
        GlobalType::Comm { branches, .. } => {
            for b in branches {
                f(&b.payload)?;
                visit_global(&b.cont, f)?;
            }
            Ok(())
        }
    }
}

// ---- fragment entry points (no cross-reference validation) ---------------

pub fn parse_process_str(text: &str) -> Result<Process, DslError> {
    let mut p = Parser::new(lex(text)?);
    let out = p.process()?;
    p.expect_end()?;
    Ok(out)
}

pub fn parse_type_str(text: &str) -> Result<SessionType, DslError> {
    let mut p = Parser::new(lex(text)?);
    let out = p.session_type()?;
    p.expect_end()?;
    Ok(out)
}

pub fn parse_global_str(text: &str) -> Result<GlobalType, DslError> {
    let mut p = Parser::new(lex(text)?);
    let out = p.global()?;
    p.expect_end()?;
    Ok(out)
}
