//! Coinductive subtyping and equi-recursive type equality.
//!
//! Both procedures unfold `μ` binders on demand and accept a revisited pair
//! of types, computing the greatest fixpoint of the defining rules. The
//! visited set ranges over pairs of unfolded subterm-closures, which are
//! finite, so both procedures terminate.

use std::collections::HashSet;

use super::{SessionType, TypeBranch};

/// `T1 ≤ T2`: set-theoretic inclusion between intersections and unions.
///
/// The subtype may offer extra input branches; the supertype may offer
/// extra output branches; continuations are compared pointwise on shared
/// labels, whose payload annotations must match exactly.
pub fn subtype(t1: &SessionType, t2: &SessionType) -> bool {
    subtype_with_stats(t1, t2).0
}

/// As [`subtype`], also reporting the number of visited pairs.
pub fn subtype_with_stats(t1: &SessionType, t2: &SessionType) -> (bool, usize) {
    let mut seen = HashSet::new();
    let ok = sub(t1, t2, &mut seen);
    (ok, seen.len())
}

fn sub(
    t1: &SessionType,
    t2: &SessionType,
    seen: &mut HashSet<(SessionType, SessionType)>,
) -> bool {
    let a = t1.unfold();
    let b = t2.unfold();
    let key = (a.clone(), b.clone());
    if !seen.insert(key) {
        return true;
    }
    match (&a, &b) {
        (SessionType::End, SessionType::End) => true,
        (
            SessionType::In {
                from: p1,
                branches: wide,
            },
            SessionType::In {
                from: p2,
                branches: narrow,
            },
        ) if p1 == p2 => branches_covered(narrow, wide, seen),
        (
            SessionType::Out {
                to: q1,
                branches: narrow,
            },
            SessionType::Out {
                to: q2,
                branches: wide,
            },
        ) if q1 == q2 => branches_covered_out(narrow, wide, seen),
        _ => false,
    }
}

/// Every branch of `narrow` appears in `wide` with the same payload, and
/// the wide continuation is a subtype of the narrow one (inputs).
fn branches_covered(
    narrow: &[TypeBranch<SessionType>],
    wide: &[TypeBranch<SessionType>],
    seen: &mut HashSet<(SessionType, SessionType)>,
) -> bool {
    narrow.iter().all(|nb| {
        wide.iter()
            .any(|wb| wb.label == nb.label && wb.payload == nb.payload && sub(&wb.cont, &nb.cont, seen))
    })
}

/// Every branch of `narrow` appears in `wide` with the same payload, and
/// the narrow continuation is a subtype of the wide one (outputs).
fn branches_covered_out(
    narrow: &[TypeBranch<SessionType>],
    wide: &[TypeBranch<SessionType>],
    seen: &mut HashSet<(SessionType, SessionType)>,
) -> bool {
    narrow.iter().all(|nb| {
        wide.iter()
            .any(|wb| wb.label == nb.label && wb.payload == nb.payload && sub(&nb.cont, &wb.cont, seen))
    })
}

/// Equi-recursive equality: bisimilarity of the unfolding trees.
pub fn equirec_eq(t1: &SessionType, t2: &SessionType) -> bool {
    let mut seen = HashSet::new();
    eq(t1, t2, &mut seen)
}

fn eq(
    t1: &SessionType,
    t2: &SessionType,
    seen: &mut HashSet<(SessionType, SessionType)>,
) -> bool {
    let a = t1.unfold();
    let b = t2.unfold();
    if !seen.insert((a.clone(), b.clone())) {
        return true;
    }
    match (&a, &b) {
        (SessionType::End, SessionType::End) => true,
        (SessionType::Var(x), SessionType::Var(y)) => x == y,
        (
            SessionType::In {
                from: p1,
                branches: b1,
            },
            SessionType::In {
                from: p2,
                branches: b2,
            },
        ) if p1 == p2 => branch_sets_eq(b1, b2, seen),
        (
            SessionType::Out {
                to: q1,
                branches: b1,
            },
            SessionType::Out {
                to: q2,
                branches: b2,
            },
        ) if q1 == q2 => branch_sets_eq(b1, b2, seen),
        _ => false,
    }
}

fn branch_sets_eq(
    b1: &[TypeBranch<SessionType>],
    b2: &[TypeBranch<SessionType>],
    seen: &mut HashSet<(SessionType, SessionType)>,
) -> bool {
    b1.len() == b2.len()
        && b1.iter().all(|x| {
            b2.iter()
                .any(|y| x.label == y.label && x.payload == y.payload && eq(&x.cont, &y.cont, seen))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::TypeVar;
    use crate::types::testutil::*;
    use crate::types::Sort;

    fn two_inputs() -> SessionType {
        SessionType::In {
            from: pt("p"),
            branches: vec![
                crate::types::TypeBranch {
                    label: lb("l1"),
                    payload: ann(Sort::Nat, "bot", "phi"),
                    cont: SessionType::End,
                },
                crate::types::TypeBranch {
                    label: lb("l2"),
                    payload: ann(Sort::Nat, "bot", "phi"),
                    cont: SessionType::End,
                },
            ],
        }
    }

    #[test]
    fn end_sub_end() {
        assert!(subtype(&SessionType::End, &SessionType::End));
    }

    #[test]
    fn extra_input_branch_on_the_left() {
        let wide = two_inputs();
        let narrow = in1("p", "l1", ann(Sort::Nat, "bot", "phi"), SessionType::End);
        assert!(subtype(&wide, &narrow));
        assert!(!subtype(&narrow, &wide));
    }

    #[test]
    fn extra_output_branch_on_the_right() {
        let wide = SessionType::Out {
            to: pt("q"),
            branches: vec![
                crate::types::TypeBranch {
                    label: lb("l1"),
                    payload: ann(Sort::Nat, "bot", "phi"),
                    cont: SessionType::End,
                },
                crate::types::TypeBranch {
                    label: lb("l2"),
                    payload: ann(Sort::Nat, "bot", "phi"),
                    cont: SessionType::End,
                },
            ],
        };
        let narrow = out1("q", "l1", ann(Sort::Nat, "bot", "phi"), SessionType::End);
        assert!(subtype(&narrow, &wide));
        assert!(!subtype(&wide, &narrow));
    }

    #[test]
    fn recursive_types_compare_coinductively() {
        let t = SessionType::Rec {
            var: TypeVar::from("t"),
            body: Box::new(in1(
                "p",
                "l",
                ann(Sort::Nat, "bot", "phi"),
                SessionType::Var(TypeVar::from("t")),
            )),
        };
        let unfolded = t.unfold();
        assert!(subtype(&t, &unfolded));
        assert!(subtype(&unfolded, &t));
        assert!(equirec_eq(&t, &unfolded));
    }

    #[test]
    fn payload_mismatch_breaks_subtyping() {
        let a = in1("p", "l", ann(Sort::Nat, "bot", "phi"), SessionType::End);
        let b = in1("p", "l", ann(Sort::Nat, "top", "phi"), SessionType::End);
        assert!(!subtype(&a, &b));
        assert!(!equirec_eq(&a, &b));
    }

    #[test]
    fn visited_pairs_bounded_by_closure_product() {
        let t = SessionType::Rec {
            var: TypeVar::from("t"),
            body: Box::new(in1(
                "p",
                "l",
                ann(Sort::Nat, "bot", "phi"),
                out1(
                    "p",
                    "m",
                    ann(Sort::Nat, "bot", "phi"),
                    SessionType::Var(TypeVar::from("t")),
                ),
            )),
        };
        let (ok, visited) = subtype_with_stats(&t, &t.unfold());
        assert!(ok);
        assert!(visited <= t.closure().len() * t.unfold().closure().len());
    }
}
