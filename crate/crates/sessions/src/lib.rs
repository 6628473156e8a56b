//! A topic-aware secure multiparty session calculus: synchronous
//! semantics, a trace-safety oracle (access control + leak freedom),
//! security-annotated session types with coinductive subtyping, global
//! types with projection and residuals, a bidirectional checker, and
//! randomized theorem harnesses.

pub mod calculus;
pub mod checker;
pub mod dsl;
pub mod harness;
pub mod ids;
pub mod report;
pub mod safety;
pub mod security;
pub mod types;

pub use calculus::{Process, Session, SessionAction, Trace, Value};
pub use checker::{check_process, check_session, infer_process, Ctx, Environment};
pub use ids::{Label, Level, Participant, Topic, TypeVar};
pub use safety::{check_safe_session, SafetyReport, Violation, ViolationKind};
pub use security::{Lattice, ReadingPolicy, TopicUniverse};
pub use types::{GlobalType, SessionType};
