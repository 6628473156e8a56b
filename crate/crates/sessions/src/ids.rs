//! Newtype identifiers for the base sets of the calculus.

use std::fmt;

macro_rules! ident {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Clone,
            Debug,
            PartialEq,
            Eq,
            PartialOrd,
            Ord,
            Hash,
            serde::Serialize,
            serde::Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }
    };
}

ident!(
    /// A security level drawn from the finite lattice.
    Level
);
ident!(
    /// A topic classifying the subject of a value.
    Topic
);
ident!(
    /// A session participant.
    Participant
);
ident!(
    /// A message label.
    Label
);
ident!(
    /// A recursion variable of a session or global type.
    TypeVar
);
