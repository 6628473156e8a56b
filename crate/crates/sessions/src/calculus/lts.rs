//! The two labelled transition systems: one for processes, one for
//! sessions, plus bounded breadth-first trace enumeration.

use std::collections::{BTreeSet, HashMap};

use crate::ids::{Label, Participant};
use crate::security::Lattice;

use super::{eval_expr, normalize_session, EvalError, Process, Session, Value};

/// A process action `θ`: silent, an output, or an input reported
/// symbolically (the communicated value is supplied by the session layer).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Tau,
    Output {
        to: Participant,
        label: Label,
        value: Value,
    },
    Input {
        from: Participant,
        label: Label,
    },
}

/// A session action `κ`.
#[derive(
    Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum SessionAction {
    Tau,
    Message {
        from: Participant,
        to: Participant,
        label: Label,
        value: Value,
    },
}

pub type Trace = Vec<SessionAction>;

/// A resolved communication capability of a process.
enum Visible {
    Out {
        to: Participant,
        label: Label,
        value: Value,
        cont: Process,
    },
    In {
        from: Participant,
        label: Label,
        var: String,
        cont: Process,
    },
}

fn head(p: &Process) -> Process {
    let mut q = p.clone();
    while matches!(q, Process::Rec { .. }) {
        q = q.unfold().expect("head loop only unfolds recursions");
    }
    q
}

fn visible_steps(p: &Process, lattice: &Lattice) -> Result<Vec<Visible>, EvalError> {
    match head(p) {
        Process::Output {
            to,
            label,
            expr,
            cont,
        } => Ok(vec![Visible::Out {
            to,
            label,
            value: eval_expr(&expr, lattice)?,
            cont: *cont,
        }]),
        Process::Input {
            from,
            label,
            var,
            cont,
            ..
        } => Ok(vec![Visible::In {
            from,
            label,
            var,
            cont: *cont,
        }]),
        Process::ExternalChoice(a, b) => {
            let mut steps = visible_steps(&a, lattice)?;
            steps.extend(visible_steps(&b, lattice)?);
            Ok(steps)
        }
        // Internal choices move only by τ; 0 and variables offer nothing.
        _ => Ok(vec![]),
    }
}

fn tau_steps(p: &Process) -> Vec<Process> {
    match head(p) {
        Process::InternalChoice(a, b) => vec![*a, *b],
        _ => vec![],
    }
}

/// All one-step successors of a single process.
pub fn step_process(
    p: &Process,
    lattice: &Lattice,
) -> Result<Vec<(Action, Process)>, EvalError> {
    let mut out: Vec<(Action, Process)> = tau_steps(p)
        .into_iter()
        .map(|q| (Action::Tau, q))
        .collect();
    for v in visible_steps(p, lattice)? {
        match v {
            Visible::Out {
                to,
                label,
                value,
                cont,
            } => out.push((Action::Output { to, label, value }, cont)),
            Visible::In {
                from, label, cont, ..
            } => out.push((Action::Input { from, label }, cont)),
        }
    }
    Ok(out)
}

/// All one-step successors of a session, closed under structural
/// congruence: every matching output/input pair across two distinct
/// participants communicates, and every τ-capable process moves silently.
pub fn step_session(
    n: &Session,
    lattice: &Lattice,
) -> Result<Vec<(SessionAction, Session)>, EvalError> {
    let n = normalize_session(n);
    let mut successors = BTreeSet::new();

    for (i, (pi, proc_i)) in n.members.iter().enumerate() {
        for next in tau_steps(proc_i) {
            let mut members = n.members.clone();
            members[i].1 = next;
            successors.insert((SessionAction::Tau, normalize_session(&Session { members })));
        }
        for out in visible_steps(proc_i, lattice)? {
            let Visible::Out {
                to,
                label,
                value,
                cont,
            } = out
            else {
                continue;
            };
            for (j, (pj, proc_j)) in n.members.iter().enumerate() {
                if i == j || *pj != to {
                    continue;
                }
                for inp in visible_steps(proc_j, lattice)? {
                    let Visible::In {
                        from,
                        label: in_label,
                        var,
                        cont: in_cont,
                    } = inp
                    else {
                        continue;
                    };
                    if from != *pi || in_label != label {
                        continue;
                    }
                    let mut members = n.members.clone();
                    members[i].1 = cont.clone();
                    members[j].1 = in_cont.subst_value(&var, &value);
                    successors.insert((
                        SessionAction::Message {
                            from: pi.clone(),
                            to: to.clone(),
                            label: label.clone(),
                            value: value.clone(),
                        },
                        normalize_session(&Session { members }),
                    ));
                }
            }
        }
    }
    Ok(successors.into_iter().collect())
}

/// All traces of length at most `depth`, by exhaustive exploration; the
/// empty trace is always included.
pub fn traces(
    n: &Session,
    depth: usize,
    lattice: &Lattice,
) -> Result<BTreeSet<Trace>, EvalError> {
    let mut memo = HashMap::new();
    traces_rec(&normalize_session(n), depth, lattice, &mut memo)
}

fn traces_rec(
    n: &Session,
    depth: usize,
    lattice: &Lattice,
    memo: &mut HashMap<(Session, usize), BTreeSet<Trace>>,
) -> Result<BTreeSet<Trace>, EvalError> {
    if let Some(cached) = memo.get(&(n.clone(), depth)) {
        return Ok(cached.clone());
    }
    let mut out: BTreeSet<Trace> = BTreeSet::new();
    out.insert(Vec::new());
    if depth > 0 {
        for (action, next) in step_session(n, lattice)? {
            for mut tail in traces_rec(&next, depth - 1, lattice, memo)? {
                tail.insert(0, action.clone());
                out.insert(tail);
            }
        }
    }
    memo.insert((n.clone(), depth), out.clone());
    Ok(out)
}
