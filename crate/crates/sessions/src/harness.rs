//! Randomized theorem harnesses: a seeded generator of matched
//! session/global-type pairs plus executable statements of soundness and
//! subject reduction.

use std::collections::HashSet;

use rand::prelude::*;
use rand::rngs::StdRng;

use crate::calculus::{
    normalize_session, step_session, Expression, Payload, Process, Session, SessionAction, Value,
};
use crate::checker::{check_session, Ctx};
use crate::ids::{Level, Participant, Topic, TypeVar};
use crate::safety::check_safe_session;
use crate::security::{Lattice, ReadingPolicy, TopicUniverse};
use crate::types::{
    participants, project, residual, AnnotatedSort, GlobalType, SessionType, Sort, TypeBranch,
};

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub pass: bool,
    /// True when the property held because the session was not typable.
    pub vacuous: bool,
    pub detail: String,
}

impl PropertyReport {
    fn pass(detail: impl Into<String>) -> Self {
        PropertyReport {
            pass: true,
            vacuous: false,
            detail: detail.into(),
        }
    }

    fn vacuous(detail: impl Into<String>) -> Self {
        PropertyReport {
            pass: true,
            vacuous: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        PropertyReport {
            pass: false,
            vacuous: false,
            detail: detail.into(),
        }
    }
}

/// Typable implies safe: if the session checks against the global type,
/// the oracle must find no violation up to `depth`.
pub fn soundness_property(
    n: &Session,
    g: &GlobalType,
    ctx: Ctx<'_>,
    depth: usize,
) -> PropertyReport {
    let typing = check_session(n, g, ctx);
    if !typing.ok() {
        return PropertyReport::vacuous(format!(
            "not typable: {}",
            typing
                .first_error()
                .map(|e| e.to_string())
                .unwrap_or_default()
        ));
    }
    match check_safe_session(n, depth, ctx.policy, ctx.universe, ctx.lattice) {
        Ok(report) if report.safe() => {
            PropertyReport::pass(format!("typable and safe at depth {depth}"))
        }
        Ok(report) => PropertyReport::fail(format!(
            "typable session violates safety: {}",
            report.violations[0].explanation
        )),
        Err(e) => PropertyReport::fail(format!("oracle error on a typable session: {e}")),
    }
}

/// Typability is preserved by reduction: after every step reachable in at
/// most `steps` transitions, some residual (at most one per message, none
/// per τ) of the current global type types the successor.
pub fn subject_reduction_property(
    n: &Session,
    g: &GlobalType,
    ctx: Ctx<'_>,
    steps: usize,
) -> PropertyReport {
    if !check_session(n, g, ctx).ok() {
        return PropertyReport::vacuous("not typable at the root");
    }
    let mut visited: HashSet<(Session, GlobalType)> = HashSet::new();
    let mut frontier = vec![(normalize_session(n), g.clone(), 0usize)];
    while let Some((node, gt, dist)) = frontier.pop() {
        if dist >= steps || !visited.insert((node.clone(), gt.clone())) {
            continue;
        }
        let succs = match step_session(&node, ctx.lattice) {
            Ok(s) => s,
            Err(e) => return PropertyReport::fail(format!("evaluation error: {e}")),
        };
        for (action, next) in succs {
            let mut candidates = vec![gt.clone()];
            if let SessionAction::Message {
                from, to, label, ..
            } = &action
            {
                if let Ok(r) = residual(&gt, from, label, to) {
                    if r.well_formed().is_ok() {
                        candidates.push(r);
                    }
                }
            }
            let Some(g2) = candidates
                .into_iter()
                .find(|c| check_session(&next, c, ctx).ok())
            else {
                return PropertyReport::fail(format!(
                    "no residual types the successor after {:?}",
                    action
                ));
            };
            frontier.push((next, g2, dist + 1));
        }
    }
    PropertyReport::pass(format!("typability preserved along all runs of length {steps}"))
}

/// A generated model: security structures plus a matched global type and
/// session whose processes were synthesized from the projections.
#[derive(Clone, Debug)]
pub struct GeneratedModel {
    pub lattice: Lattice,
    pub universe: TopicUniverse,
    pub policy: ReadingPolicy,
    pub global: GlobalType,
    pub session: Session,
}

impl GeneratedModel {
    pub fn ctx(&self) -> Ctx<'_> {
        Ctx {
            lattice: &self.lattice,
            universe: &self.universe,
            policy: &self.policy,
        }
    }
}

const LEVELS: [&str; 3] = ["bot", "mid", "top"];
const TOPICS: [&str; 2] = ["phi", "psi"];

/// Deterministic model generation from a seed. Communication structures
/// are generated matched (processes come from the projections), then
/// decorated with levels, topics and a biased reading policy.
pub fn generate_model(seed: u64) -> GeneratedModel {
    let mut rng = StdRng::seed_from_u64(seed);

    let lattice = Lattice::from_covers(
        LEVELS.iter().map(|l| Level::from(*l)),
        [
            (Level::from("bot"), Level::from("mid")),
            (Level::from("mid"), Level::from("top")),
        ],
    )
    .expect("chain lattice");
    let indep: Vec<(Topic, Topic)> = if rng.gen_bool(0.5) {
        vec![(Topic::from("phi"), Topic::from("psi"))]
    } else {
        vec![]
    };
    let universe =
        TopicUniverse::new(TOPICS.iter().map(|t| Topic::from(*t)), indep).expect("two topics");

    let all: Vec<Participant> = ["p", "q", "r", "s", "t"]
        .iter()
        .take(rng.gen_range(2..=5))
        .map(|p| Participant::from(*p))
        .collect();
    let depth = rng.gen_range(1..=5);
    let global = gen_global(&mut rng, &all, depth, true);

    // Bias the policy toward admitting what the protocol delivers.
    let mut policy = ReadingPolicy::new(Level::from("bot"));
    for p in &all {
        for t in TOPICS {
            let topic = Topic::from(t);
            let mut need: Option<Level> = None;
            collect_deliveries(&global, p, &topic, &lattice, &mut need);
            let level = match need {
                Some(l) if rng.gen_bool(0.85) => l,
                _ => Level::from(*LEVELS.choose(&mut rng).expect("nonempty")),
            };
            policy.set(p.clone(), topic, level);
        }
    }

    let session = synthesize_session(&global, &all);
    GeneratedModel {
        lattice,
        universe,
        policy,
        global,
        session,
    }
}

fn gen_level(rng: &mut StdRng) -> Level {
    let r: f64 = rng.gen();
    Level::from(if r < 0.6 {
        "bot"
    } else if r < 0.85 {
        "mid"
    } else {
        "top"
    })
}

fn gen_payload(rng: &mut StdRng) -> AnnotatedSort {
    let sort = *[Sort::Nat, Sort::Int, Sort::Bool, Sort::Str]
        .choose(rng)
        .expect("nonempty");
    AnnotatedSort::new(
        sort,
        gen_level(rng),
        Topic::from(*TOPICS.choose(rng).expect("nonempty")),
    )
}

/// Generates a projectable global type: multi-branch communications
/// confine their continuations to the two involved participants so every
/// bystander projects all branches to `end`.
fn gen_global(rng: &mut StdRng, parts: &[Participant], depth: usize, allow_rec: bool) -> GlobalType {
    if depth == 0 || rng.gen_bool(0.15) {
        return GlobalType::End;
    }
    if allow_rec && depth >= 2 && rng.gen_bool(0.15) {
        // A simple loop: rec t. p -> q: l(S). body-with-t
        let from = parts.choose(rng).expect("nonempty").clone();
        let to = loop {
            let c = parts.choose(rng).expect("nonempty").clone();
            if c != from {
                break c;
            }
        };
        let var = TypeVar::from("t");
        let cont = if rng.gen_bool(0.5) {
            GlobalType::Var(var.clone())
        } else {
            // One more exchange between the same pair before looping.
            GlobalType::Comm {
                from: to.clone(),
                to: from.clone(),
                branches: vec![TypeBranch {
                    label: "m".into(),
                    payload: gen_payload(rng),
                    cont: GlobalType::Var(var.clone()),
                }],
            }
        };
        return GlobalType::Rec {
            var,
            body: Box::new(GlobalType::Comm {
                from,
                to,
                branches: vec![TypeBranch {
                    label: "l".into(),
                    payload: gen_payload(rng),
                    cont,
                }],
            }),
        };
    }
    let from = parts.choose(rng).expect("nonempty").clone();
    let to = loop {
        let c = parts.choose(rng).expect("nonempty").clone();
        if c != from {
            break c;
        }
    };
    let two = rng.gen_bool(0.3);
    if two {
        let pair = [from.clone(), to.clone()];
        let branches = ["a", "b"]
            .iter()
            .map(|l| TypeBranch {
                label: (*l).into(),
                payload: gen_payload(rng),
                cont: gen_global(rng, &pair, depth - 1, false),
            })
            .collect();
        GlobalType::Comm { from, to, branches }
    } else {
        GlobalType::Comm {
            from,
            to,
            branches: vec![TypeBranch {
                label: "l".into(),
                payload: gen_payload(rng),
                cont: gen_global(rng, parts, depth - 1, allow_rec),
            }],
        }
    }
}

/// The join of all levels delivered to `p` on `topic` anywhere in `g`.
fn collect_deliveries(
    g: &GlobalType,
    p: &Participant,
    topic: &Topic,
    lattice: &Lattice,
    acc: &mut Option<Level>,
) {
    if let GlobalType::Comm { to, branches, .. } = g {
        for b in branches {
            if to == p && &b.payload.topic == topic {
                *acc = Some(match acc.take() {
                    Some(l) => lattice
                        .join(&l, &b.payload.level)
                        .expect("generated levels are in the lattice"),
                    None => b.payload.level.clone(),
                });
            }
            collect_deliveries(&b.cont, p, topic, lattice, acc);
        }
    } else if let GlobalType::Rec { body, .. } = g {
        collect_deliveries(body, p, topic, lattice, acc);
    }
}

fn literal_of(payload: &AnnotatedSort, k: u64) -> Expression {
    let v = match payload.sort {
        Sort::Nat => Payload::Nat(k),
        Sort::Int => Payload::Int(k as i64),
        Sort::Bool => Payload::Bool(k.is_multiple_of(2)),
        Sort::Str => Payload::Str(format!("v{k}")),
    };
    Expression::Lit(Value::new(v, payload.level.clone(), payload.topic.clone()))
}

/// Realizes a session type as a process: outputs become internal choices
/// of sends with matching literals, inputs become external choices of
/// annotated receives.
pub fn process_of_type(t: &SessionType) -> Process {
    match t {
        SessionType::End => Process::Inact,
        SessionType::Var(v) => Process::Var(format!("X{}", v.as_str().to_uppercase())),
        SessionType::Rec { var, body } => Process::Rec {
            var: format!("X{}", var.as_str().to_uppercase()),
            annotation: None,
            body: Box::new(process_of_type(body)),
        },
        SessionType::Out { to, branches } => {
            let mut parts = branches.iter().enumerate().map(|(k, b)| Process::Output {
                to: to.clone(),
                label: b.label.clone(),
                expr: literal_of(&b.payload, k as u64 + 1),
                cont: Box::new(process_of_type(&b.cont)),
            });
            let first = parts.next().expect("outputs have a branch");
            parts.fold(first, |acc, p| {
                Process::InternalChoice(Box::new(acc), Box::new(p))
            })
        }
        SessionType::In { from, branches } => {
            let mut parts = branches.iter().map(|b| Process::Input {
                from: from.clone(),
                label: b.label.clone(),
                var: "x".into(),
                annotation: Some(b.payload.clone()),
                cont: Box::new(process_of_type(&b.cont)),
            });
            let first = parts.next().expect("inputs have a branch");
            parts.fold(first, |acc, p| {
                Process::ExternalChoice(Box::new(acc), Box::new(p))
            })
        }
    }
}

fn synthesize_session(g: &GlobalType, all: &[Participant]) -> Session {
    let involved = participants(g);
    let members = all
        .iter()
        .map(|p| {
            let proc = if involved.contains(p) {
                project(g, p)
                    .map(|t| process_of_type(&t))
                    .unwrap_or(Process::Inact)
            } else {
                Process::Inact
            };
            (p.clone(), proc)
        })
        .collect();
    Session::new(members).expect("generated participants are distinct")
}
