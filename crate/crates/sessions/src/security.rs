//! Finite security lattice, topic independence and participant reading
//! policies.
//!
//! The lattice is built from a user-supplied cover relation; construction
//! validates that the reflexive-transitive closure is a partial order in
//! which every pair of levels has a unique join and meet, with distinguished
//! bottom and top elements. Topic independence is an irreflexive, symmetric
//! relation stored as unordered pairs; neither independence nor its
//! complement is transitively closed.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ids::{Level, Participant, Topic};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SecurityError {
    #[error("cover relation has a cycle through level `{0}`: not a partial order")]
    NotAPartialOrder(Level),
    #[error("not a lattice: levels `{0}` and `{1}` have no unique {2}")]
    NotALattice(Level, Level, &'static str),
    #[error("unknown level `{0}`")]
    UnknownLevel(Level),
    #[error("unknown topic `{0}`")]
    UnknownTopic(Topic),
    #[error("topic `{0}` declared independent of itself")]
    ReflexiveIndependence(Topic),
    #[error("empty level set")]
    EmptyLattice,
}

/// A finite security lattice over named levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    levels: Vec<Level>,
    /// `leq[i][j]` iff `levels[i] ⊑ levels[j]`; reflexive-transitive closure
    /// of the cover relation.
    leq: Vec<Vec<bool>>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    /// Builds and validates a lattice from a level set and cover pairs
    /// `(lower, upper)`.
    pub fn from_covers(
        levels: impl IntoIterator<Item = Level>,
        covers: impl IntoIterator<Item = (Level, Level)>,
    ) -> Result<Self, SecurityError> {
        let levels: Vec<Level> = {
            let mut seen = BTreeSet::new();
            levels
                .into_iter()
                .filter(|l| seen.insert(l.clone()))
                .collect()
        };
        if levels.is_empty() {
            return Err(SecurityError::EmptyLattice);
        }
        let n = levels.len();
        let index = |l: &Level| -> Result<usize, SecurityError> {
            levels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| SecurityError::UnknownLevel(l.clone()))
        };

        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in covers {
            let i = index(&lo)?;
            let j = index(&hi)?;
            leq[i][j] = true;
        }
        // Warshall closure.
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        // Antisymmetry: a cycle collapses two distinct names.
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(SecurityError::NotAPartialOrder(levels[i].clone()));
                }
            }
        }

        let lattice = Lattice {
            levels,
            leq,
            bottom: 0,
            top: 0,
        };
        // Every pair needs a unique join and meet; this also pins down
        // bottom = meet of everything and top = join of everything.
        let mut checked = lattice;
        for i in 0..n {
            for j in 0..n {
                checked.bound_index(i, j, true)?;
                checked.bound_index(i, j, false)?;
            }
        }
        let mut bottom = 0;
        let mut top = 0;
        for i in 1..n {
            bottom = checked.bound_index(bottom, i, false)?;
            top = checked.bound_index(top, i, true)?;
        }
        checked.bottom = bottom;
        checked.top = top;
        Ok(checked)
    }

    fn index(&self, l: &Level) -> Result<usize, SecurityError> {
        self.levels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| SecurityError::UnknownLevel(l.clone()))
    }

    /// Least upper bound (`join = true`) or greatest lower bound of two
    /// level indices.
    fn bound_index(&self, i: usize, j: usize, join: bool) -> Result<usize, SecurityError> {
        let n = self.levels.len();
        let above = |i: usize, j: usize| if join { self.leq[i][j] } else { self.leq[j][i] };
        let candidates: Vec<usize> = (0..n).filter(|&k| above(i, k) && above(j, k)).collect();
        let minimal: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&k| candidates.iter().all(|&m| !above(m, k) || m == k))
            .collect();
        match minimal.as_slice() {
            [k] => Ok(*k),
            _ => Err(SecurityError::NotALattice(
                self.levels[i].clone(),
                self.levels[j].clone(),
                if join { "join" } else { "meet" },
            )),
        }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn contains(&self, l: &Level) -> bool {
        self.levels.contains(l)
    }

    /// `l1 ⊑ l2`.
    pub fn leq(&self, l1: &Level, l2: &Level) -> Result<bool, SecurityError> {
        Ok(self.leq[self.index(l1)?][self.index(l2)?])
    }

    /// `l1 ⊔ l2`.
    pub fn join(&self, l1: &Level, l2: &Level) -> Result<Level, SecurityError> {
        let k = self.bound_index(self.index(l1)?, self.index(l2)?, true)?;
        Ok(self.levels[k].clone())
    }

    /// `l1 ⊓ l2`.
    pub fn meet(&self, l1: &Level, l2: &Level) -> Result<Level, SecurityError> {
        let k = self.bound_index(self.index(l1)?, self.index(l2)?, false)?;
        Ok(self.levels[k].clone())
    }

    pub fn bottom(&self) -> &Level {
        &self.levels[self.bottom]
    }

    pub fn top(&self) -> &Level {
        &self.levels[self.top]
    }
}

/// A finite topic set with an irreflexive, symmetric independence relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicUniverse {
    topics: Vec<Topic>,
    /// Unordered pairs, stored with the smaller component first.
    indep: BTreeSet<(Topic, Topic)>,
}

impl TopicUniverse {
    pub fn new(
        topics: impl IntoIterator<Item = Topic>,
        indep: impl IntoIterator<Item = (Topic, Topic)>,
    ) -> Result<Self, SecurityError> {
        let topics: Vec<Topic> = {
            let mut seen = BTreeSet::new();
            topics
                .into_iter()
                .filter(|t| seen.insert(t.clone()))
                .collect()
        };
        let mut pairs = BTreeSet::new();
        for (a, b) in indep {
            if !topics.contains(&a) {
                return Err(SecurityError::UnknownTopic(a));
            }
            if !topics.contains(&b) {
                return Err(SecurityError::UnknownTopic(b));
            }
            if a == b {
                return Err(SecurityError::ReflexiveIndependence(a));
            }
            let pair = if a <= b { (a, b) } else { (b, a) };
            pairs.insert(pair);
        }
        Ok(TopicUniverse {
            topics,
            indep: pairs,
        })
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    pub fn contains(&self, t: &Topic) -> bool {
        self.topics.contains(t)
    }

    pub fn indep_pairs(&self) -> impl Iterator<Item = &(Topic, Topic)> {
        self.indep.iter()
    }

    /// `t1 # t2`.
    pub fn independent(&self, t1: &Topic, t2: &Topic) -> Result<bool, SecurityError> {
        if !self.contains(t1) {
            return Err(SecurityError::UnknownTopic(t1.clone()));
        }
        if !self.contains(t2) {
            return Err(SecurityError::UnknownTopic(t2.clone()));
        }
        let pair = if t1 <= t2 {
            (t1.clone(), t2.clone())
        } else {
            (t2.clone(), t1.clone())
        };
        Ok(self.indep.contains(&pair))
    }

    /// `t1 ⌣ t2`, the complement of independence.
    pub fn related(&self, t1: &Topic, t2: &Topic) -> Result<bool, SecurityError> {
        Ok(!self.independent(t1, t2)?)
    }
}

/// Per-participant, per-topic reading levels `ρ(p,φ)`; absent entries fall
/// back to the default level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadingPolicy {
    entries: BTreeMap<(Participant, Topic), Level>,
    default: Level,
}

impl ReadingPolicy {
    pub fn new(default: Level) -> Self {
        ReadingPolicy {
            entries: BTreeMap::new(),
            default,
        }
    }

    pub fn set(&mut self, p: Participant, t: Topic, l: Level) {
        self.entries.insert((p, t), l);
    }

    pub fn default_level(&self) -> &Level {
        &self.default
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Participant, Topic), &Level)> {
        self.entries.iter()
    }

    /// `ρ(p,t)`.
    pub fn reading_level(
        &self,
        universe: &TopicUniverse,
        p: &Participant,
        t: &Topic,
    ) -> Result<&Level, SecurityError> {
        if !universe.contains(t) {
            return Err(SecurityError::UnknownTopic(t.clone()));
        }
        Ok(self
            .entries
            .get(&(p.clone(), t.clone()))
            .unwrap_or(&self.default))
    }

    /// Checks that all policy levels belong to `lattice`.
    pub fn validate(&self, lattice: &Lattice) -> Result<(), SecurityError> {
        for l in self.entries.values() {
            if !lattice.contains(l) {
                return Err(SecurityError::UnknownLevel(l.clone()));
            }
        }
        if !lattice.contains(&self.default) {
            return Err(SecurityError::UnknownLevel(self.default.clone()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(s: &str) -> Level {
        Level::from(s)
    }

    fn tp(s: &str) -> Topic {
        Topic::from(s)
    }

    pub(crate) fn chain3() -> Lattice {
        Lattice::from_covers(
            [lv("bot"), lv("mid"), lv("top")],
            [(lv("bot"), lv("mid")), (lv("mid"), lv("top"))],
        )
        .unwrap()
    }

    fn diamond() -> Lattice {
        Lattice::from_covers(
            [lv("bot"), lv("a"), lv("b"), lv("top")],
            [
                (lv("bot"), lv("a")),
                (lv("bot"), lv("b")),
                (lv("a"), lv("top")),
                (lv("b"), lv("top")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn chain_is_a_lattice() {
        let l = chain3();
        assert_eq!(l.bottom(), &lv("bot"));
        assert_eq!(l.top(), &lv("top"));
        assert!(l.leq(&lv("bot"), &lv("top")).unwrap());
        assert!(!l.leq(&lv("top"), &lv("mid")).unwrap());
        assert_eq!(l.join(&lv("mid"), &lv("bot")).unwrap(), lv("mid"));
        assert_eq!(l.meet(&lv("mid"), &lv("top")).unwrap(), lv("mid"));
    }

    #[test]
    fn diamond_joins_and_meets() {
        let l = diamond();
        assert_eq!(l.join(&lv("a"), &lv("b")).unwrap(), lv("top"));
        assert_eq!(l.meet(&lv("a"), &lv("b")).unwrap(), lv("bot"));
        assert!(!l.leq(&lv("a"), &lv("b")).unwrap());
        assert!(!l.leq(&lv("b"), &lv("a")).unwrap());
    }

    #[test]
    fn antichain_is_not_a_lattice() {
        let err = Lattice::from_covers([lv("a"), lv("b")], []).unwrap_err();
        assert!(matches!(err, SecurityError::NotALattice(..)));
    }

    #[test]
    fn cycle_is_not_a_partial_order() {
        let err = Lattice::from_covers(
            [lv("a"), lv("b")],
            [(lv("a"), lv("b")), (lv("b"), lv("a"))],
        )
        .unwrap_err();
        assert!(matches!(err, SecurityError::NotAPartialOrder(_)));
    }

    #[test]
    fn two_maximal_elements_rejected() {
        let err = Lattice::from_covers(
            [lv("bot"), lv("a"), lv("b")],
            [(lv("bot"), lv("a")), (lv("bot"), lv("b"))],
        )
        .unwrap_err();
        assert!(matches!(err, SecurityError::NotALattice(..)));
    }

    #[test]
    fn lattice_laws_by_enumeration() {
        for l in [chain3(), diamond()] {
            let levels = l.levels().to_vec();
            for a in &levels {
                for b in &levels {
                    let ab = l.join(a, b).unwrap();
                    assert_eq!(ab, l.join(b, a).unwrap(), "join commutes");
                    assert_eq!(l.meet(a, b).unwrap(), l.meet(b, a).unwrap(), "meet commutes");
                    assert_eq!(l.join(a, a).unwrap(), *a, "join idempotent");
                    assert_eq!(l.meet(a, a).unwrap(), *a, "meet idempotent");
                    let m = l.meet(a, b).unwrap();
                    assert_eq!(l.join(a, &m).unwrap(), *a, "absorption");
                    assert_eq!(
                        l.leq(a, b).unwrap(),
                        l.join(a, b).unwrap() == *b,
                        "leq iff join is upper"
                    );
                    for c in &levels {
                        assert_eq!(
                            l.join(&ab, c).unwrap(),
                            l.join(a, &l.join(b, c).unwrap()).unwrap(),
                            "join associates"
                        );
                        assert_eq!(
                            l.meet(&m, c).unwrap(),
                            l.meet(a, &l.meet(b, c).unwrap()).unwrap(),
                            "meet associates"
                        );
                    }
                }
                assert!(l.leq(l.bottom(), a).unwrap());
                assert!(l.leq(a, l.top()).unwrap());
            }
        }
    }

    #[test]
    fn independence_irreflexive_and_symmetric() {
        let u = TopicUniverse::new(
            [tp("phi"), tp("psi"), tp("chi")],
            [(tp("psi"), tp("phi"))],
        )
        .unwrap();
        for a in u.topics() {
            assert!(!u.independent(a, a).unwrap());
            for b in u.topics() {
                assert_eq!(u.independent(a, b).unwrap(), u.independent(b, a).unwrap());
            }
        }
        assert!(u.independent(&tp("phi"), &tp("psi")).unwrap());
        assert!(u.related(&tp("phi"), &tp("chi")).unwrap());
    }

    #[test]
    fn reflexive_independence_rejected() {
        let err = TopicUniverse::new([tp("phi")], [(tp("phi"), tp("phi"))]).unwrap_err();
        assert_eq!(err, SecurityError::ReflexiveIndependence(tp("phi")));
    }

    #[test]
    fn empty_independence_means_related() {
        let u = TopicUniverse::new([tp("phi"), tp("psi")], []).unwrap();
        assert!(!u.independent(&tp("phi"), &tp("psi")).unwrap());
        assert!(u.related(&tp("phi"), &tp("psi")).unwrap());
    }

    #[test]
    fn reading_levels_with_default() {
        let u = TopicUniverse::new([tp("phi"), tp("psi")], [(tp("phi"), tp("psi"))]).unwrap();
        let mut pol = ReadingPolicy::new(lv("bot"));
        pol.set(Participant::from("p0"), tp("phi"), lv("top"));
        assert_eq!(
            pol.reading_level(&u, &Participant::from("p0"), &tp("phi"))
                .unwrap(),
            &lv("top")
        );
        assert_eq!(
            pol.reading_level(&u, &Participant::from("p2"), &tp("phi"))
                .unwrap(),
            &lv("bot")
        );
        assert_eq!(
            pol.reading_level(&u, &Participant::from("p9"), &tp("psi"))
                .unwrap(),
            &lv("bot")
        );
        assert!(pol
            .reading_level(&u, &Participant::from("p0"), &tp("nope"))
            .is_err());
    }
}
