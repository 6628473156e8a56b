//! Agreement and safe-type checking, the coinductive predicates gating the
//! typing rules.

use std::collections::HashSet;

use crate::ids::{Level, Topic};
use crate::security::{Lattice, ReadingPolicy, TopicUniverse};

use super::SessionType;

/// `⟨l,t⟩ ≺ T`: every output reachable in `T` either carries a level above
/// `l` or a topic independent of `t`.
pub fn agrees(
    level: &Level,
    topic: &Topic,
    ty: &SessionType,
    universe: &TopicUniverse,
    lattice: &Lattice,
) -> bool {
    let mut seen = HashSet::new();
    agrees_rec(level, topic, ty, universe, lattice, &mut seen)
}

fn agrees_rec(
    level: &Level,
    topic: &Topic,
    ty: &SessionType,
    universe: &TopicUniverse,
    lattice: &Lattice,
    seen: &mut HashSet<SessionType>,
) -> bool {
    let t = ty.unfold();
    if !seen.insert(t.clone()) {
        return true;
    }
    match &t {
        SessionType::End => true,
        SessionType::Out { branches, .. } => branches.iter().all(|b| {
            let up = lattice.leq(level, &b.payload.level).unwrap_or(false);
            let indep = universe
                .independent(topic, &b.payload.topic)
                .unwrap_or(false);
            (up || indep) && agrees_rec(level, topic, &b.cont, universe, lattice, seen)
        }),
        SessionType::In { branches, .. } => branches
            .iter()
            .all(|b| agrees_rec(level, topic, &b.cont, universe, lattice, seen)),
        // Closed types only; a free variable agrees vacuously.
        SessionType::Var(_) | SessionType::Rec { .. } => true,
    }
}

/// Safe session type: every output respects the receiver's reading level,
/// and every input binds a level/topic pair that agrees with the
/// continuation.
pub fn safe_type(
    ty: &SessionType,
    policy: &ReadingPolicy,
    universe: &TopicUniverse,
    lattice: &Lattice,
) -> bool {
    let mut seen = HashSet::new();
    safe_rec(ty, policy, universe, lattice, &mut seen)
}

fn safe_rec(
    ty: &SessionType,
    policy: &ReadingPolicy,
    universe: &TopicUniverse,
    lattice: &Lattice,
    seen: &mut HashSet<SessionType>,
) -> bool {
    let t = ty.unfold();
    if !seen.insert(t.clone()) {
        return true;
    }
    match &t {
        SessionType::End => true,
        SessionType::Out { to, branches } => branches.iter().all(|b| {
            let bound = match policy.reading_level(universe, to, &b.payload.topic) {
                Ok(l) => l,
                Err(_) => return false,
            };
            lattice.leq(&b.payload.level, bound).unwrap_or(false)
                && safe_rec(&b.cont, policy, universe, lattice, seen)
        }),
        SessionType::In { branches, .. } => branches.iter().all(|b| {
            safe_rec(&b.cont, policy, universe, lattice, seen)
                && agrees(&b.payload.level, &b.payload.topic, &b.cont, universe, lattice)
        }),
        SessionType::Var(_) | SessionType::Rec { .. } => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::{Participant, TypeVar};
    use crate::types::testutil::*;
    use crate::types::Sort;

    fn chain() -> Lattice {
        Lattice::from_covers(
            [lv("bot"), lv("mid"), lv("top")],
            [(lv("bot"), lv("mid")), (lv("mid"), lv("top"))],
        )
        .unwrap()
    }

    fn indep_universe() -> TopicUniverse {
        TopicUniverse::new([tp("phi"), tp("psi")], [(tp("phi"), tp("psi"))]).unwrap()
    }

    fn related_universe() -> TopicUniverse {
        TopicUniverse::new([tp("phi"), tp("psi")], []).unwrap()
    }

    #[test]
    fn agreement_with_end_always_holds() {
        let l = chain();
        let u = indep_universe();
        for level in l.levels() {
            for topic in u.topics() {
                assert!(agrees(level, topic, &SessionType::End, &u, &l));
            }
        }
    }

    #[test]
    fn agreement_via_independence() {
        // ⟨mid,phi⟩ against a chain of bot-level psi communications.
        let l = chain();
        let u = indep_universe();
        let t = in1(
            "p1",
            "l",
            ann(Sort::Str, "bot", "psi"),
            out1(
                "p2",
                "l",
                ann(Sort::Str, "bot", "psi"),
                in1(
                    "p2",
                    "l",
                    ann(Sort::Str, "bot", "psi"),
                    out1("p1", "l", ann(Sort::Str, "bot", "psi"), SessionType::End),
                ),
            ),
        );
        assert!(agrees(&lv("mid"), &tp("phi"), &t, &u, &l));
        assert!(!agrees(&lv("mid"), &tp("phi"), &t, &related_universe(), &l));
    }

    #[test]
    fn agreement_fails_on_related_level_drop() {
        let l = chain();
        let u = related_universe();
        let t = out1("q", "l", ann(Sort::Bool, "bot", "phi"), SessionType::End);
        assert!(!agrees(&lv("top"), &tp("phi"), &t, &u, &l));
    }

    #[test]
    fn bottom_agrees_with_everything() {
        let l = chain();
        let u = related_universe();
        let t = out1(
            "q",
            "l",
            ann(Sort::Bool, "bot", "phi"),
            out1("q", "m", ann(Sort::Bool, "top", "psi"), SessionType::End),
        );
        for topic in u.topics() {
            assert!(agrees(l.bottom(), topic, &t, &u, &l));
        }
    }

    #[test]
    fn safe_in_checks_agreement_of_continuation() {
        // p?l(bool^{top,phi}).r!m(bool^{bot,psi}).end
        let l = chain();
        let t = in1(
            "p",
            "l",
            ann(Sort::Bool, "top", "phi"),
            out1("r", "m", ann(Sort::Bool, "bot", "psi"), SessionType::End),
        );
        let mut pol = ReadingPolicy::new(lv("top"));
        pol.set(Participant::from("p"), tp("phi"), lv("top"));
        assert!(safe_type(&t, &pol, &indep_universe(), &l));
        assert!(!safe_type(&t, &pol, &related_universe(), &l));
    }

    #[test]
    fn safe_out_checks_reading_level() {
        let l = chain();
        let u = indep_universe();
        let t = out1("q", "l", ann(Sort::Nat, "mid", "phi"), SessionType::End);
        let mut pol = ReadingPolicy::new(lv("bot"));
        assert!(!safe_type(&t, &pol, &u, &l));
        pol.set(Participant::from("q"), tp("phi"), lv("mid"));
        assert!(safe_type(&t, &pol, &u, &l));
    }

    #[test]
    fn recursive_safe_type_terminates() {
        let l = chain();
        let u = indep_universe();
        let t = SessionType::Rec {
            var: TypeVar::from("t"),
            body: Box::new(in1(
                "p",
                "l",
                ann(Sort::Nat, "bot", "phi"),
                SessionType::Var(TypeVar::from("t")),
            )),
        };
        let pol = ReadingPolicy::new(lv("top"));
        assert!(safe_type(&t, &pol, &u, &l));
    }
}
