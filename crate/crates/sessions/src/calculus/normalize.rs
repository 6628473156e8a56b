//! Canonical representatives of the structural congruence classes.
//!
//! Both choice operators are flattened into multisets and rebuilt in a
//! total syntactic order; at the session level `p◃0` components are
//! dropped and the remaining components sorted by participant. Recursion
//! is never unfolded here: the LTS unfolds lazily, which keeps normal
//! forms finite.

use super::{Process, Session};

pub fn normalize_process(p: &Process) -> Process {
    match p {
        Process::Inact | Process::Var(_) => p.clone(),
        Process::Output {
            to,
            label,
            expr,
            cont,
        } => Process::Output {
            to: to.clone(),
            label: label.clone(),
            expr: expr.clone(),
            cont: Box::new(normalize_process(cont)),
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
            cont: Box::new(normalize_process(cont)),
        },
        Process::Rec {
            var,
            annotation,
            body,
        } => Process::Rec {
            var: var.clone(),
            annotation: annotation.clone(),
            body: Box::new(normalize_process(body)),
        },
        Process::InternalChoice(..) => rebuild(flatten(p, true), true),
        Process::ExternalChoice(..) => rebuild(flatten(p, false), false),
    }
}

/// Collects the leaves of a (possibly nested) choice of one kind, each
/// normalized, as a sorted multiset.
fn flatten(p: &Process, internal: bool) -> Vec<Process> {
    let mut leaves = Vec::new();
    collect(p, internal, &mut leaves);
    leaves.sort();
    leaves
}

fn collect(p: &Process, internal: bool, out: &mut Vec<Process>) {
    match (p, internal) {
        (Process::InternalChoice(a, b), true) | (Process::ExternalChoice(a, b), false) => {
            collect(a, internal, out);
            collect(b, internal, out);
        }
        _ => out.push(normalize_process(p)),
    }
}

fn rebuild(leaves: Vec<Process>, internal: bool) -> Process {
    let mut iter = leaves.into_iter().rev();
    let mut acc = iter.next().expect("choice has at least one leaf");
    for leaf in iter {
        acc = if internal {
            Process::InternalChoice(Box::new(leaf), Box::new(acc))
        } else {
            Process::ExternalChoice(Box::new(leaf), Box::new(acc))
        };
    }
    acc
}

pub fn normalize_session(n: &Session) -> Session {
    let mut members: Vec<_> = n
        .members
        .iter()
        .map(|(p, proc)| (p.clone(), normalize_process(proc)))
        .filter(|(_, proc)| *proc != Process::Inact)
        .collect();
    members.sort();
    Session { members }
}
