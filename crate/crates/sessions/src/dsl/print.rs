//! Canonical printing. Everything printed here re-parses to a
//! structurally equal term.

use std::fmt::Write;

use crate::calculus::{Expression, Payload, Process, Session, SessionAction, Trace, Value};
use crate::types::{AnnotatedSort, GlobalType, SessionType, TypeBranch};

pub fn print_payload(p: &Payload) -> String {
    match p {
        Payload::Nat(n) => n.to_string(),
        Payload::Int(n) if *n < 0 => format!("-{}i", n.unsigned_abs()),
        Payload::Int(n) => format!("{n}i"),
        Payload::Bool(b) => b.to_string(),
        Payload::Str(s) => format!(
            "\"{}\"",
            s.replace('\\', "\\\\")
                .replace('"', "\\\"")
                .replace('\n', "\\n")
                .replace('\t', "\\t")
        ),
    }
}

pub fn print_value(v: &Value) -> String {
    format!("{}^{{{},{}}}", print_payload(&v.payload), v.level, v.topic)
}

pub fn print_ann(a: &AnnotatedSort) -> String {
    format!("{}^{{{},{}}}", a.sort.name(), a.level, a.topic)
}

pub fn print_expr(e: &Expression) -> String {
    match e {
        Expression::Var(x) => x.clone(),
        Expression::Lit(v) => print_value(v),
        Expression::Bin(op, a, b) => {
            format!("({} {} {})", print_expr(a), op.symbol(), print_expr(b))
        }
        Expression::Un(_, a) => format!("(not {})", print_expr(a)),
    }
}

pub fn print_process(p: &Process) -> String {
    match p {
        Process::Inact => "end".into(),
        Process::Var(x) => x.clone(),
        Process::Output {
            to,
            label,
            expr,
            cont,
        } => format!("{to}!{label}({}).{}", print_expr(expr), print_process(cont)),
        Process::Input {
            from,
            label,
            var,
            annotation,
            cont,
        } => match annotation {
            Some(a) => format!(
                "{from}?{label}({var}: {}).{}",
                print_ann(a),
                print_process(cont)
            ),
            None => format!("{from}?{label}({var}).{}", print_process(cont)),
        },
        Process::InternalChoice(a, b) => {
            format!("({} (+) {})", print_process(a), print_process(b))
        }
        Process::ExternalChoice(a, b) => {
            format!("({} + {})", print_process(a), print_process(b))
        }
        Process::Rec {
            var,
            annotation,
            body,
        } => match annotation {
            Some(t) => format!("rec {var}: {}. {}", print_type(t), print_process(body)),
            None => format!("rec {var}. {}", print_process(body)),
        },
    }
}

fn print_branches<T>(branches: &[TypeBranch<T>], print_cont: impl Fn(&T) -> String) -> String {
    let one = |b: &TypeBranch<T>| format!("{}({}).{}", b.label, print_ann(&b.payload), print_cont(&b.cont));
    if branches.len() == 1 {
        one(&branches[0])
    } else {
        let mut s = String::from("{ ");
        for (i, b) in branches.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{}", one(b));
        }
        s.push_str(" }");
        s
    }
}

pub fn print_type(t: &SessionType) -> String {
    match t {
        SessionType::End => "end".into(),
        SessionType::Var(v) => v.to_string(),
        SessionType::Rec { var, body } => format!("rec {var}. {}", print_type(body)),
        SessionType::Out { to, branches } => {
            format!("{to}!{}", print_branches(branches, print_type))
        }
        SessionType::In { from, branches } => {
            format!("{from}?{}", print_branches(branches, print_type))
        }
    }
}

pub fn print_global(g: &GlobalType) -> String {
    match g {
        GlobalType::End => "end".into(),
        GlobalType::Var(v) => v.to_string(),
        GlobalType::Rec { var, body } => format!("rec {var}. {}", print_global(body)),
        GlobalType::Comm { from, to, branches } => {
            format!("{from} -> {to}: {}", print_branches(branches, print_global))
        }
    }
}

pub fn print_session(s: &Session) -> String {
    s.members
        .iter()
        .map(|(p, proc)| format!("{p} : {}", print_process(proc)))
        .collect::<Vec<_>>()
        .join(" | ")
}

pub fn print_action(a: &SessionAction) -> String {
    match a {
        SessionAction::Tau => "tau".into(),
        SessionAction::Message {
            from,
            to,
            label,
            value,
        } => format!("{from} -> {to}: {label}({})", print_value(value)),
    }
}

pub fn print_trace(t: &Trace) -> String {
    t.iter()
        .map(print_action)
        .collect::<Vec<_>>()
        .join(" . ")
}
