//! Nielsen and Andrews-Curtis equivalence of generating tuples.
//!
//! Group backends ([`groups`]), free-group words ([`words`]), the move
//! alphabet and replayable certificates ([`moves`]), abelian invariants
//! ([`abelian`]), structural algorithms ([`structure`]), exhaustive graph
//! exploration ([`explorer`]) and constructive certificate builders
//! ([`certify`]).

pub mod abelian;
pub mod certify;
pub mod corpus;
pub mod error;
pub mod explorer;
pub mod groups;
pub mod moves;
pub mod structure;
pub mod words;

pub use abelian::{AbelianForm, IntMatrix, Prediction};
pub use error::{Error, Result};
pub use groups::{ElementOrder, Group, GroupElement, GroupSpec, Tuple};
pub use moves::{Certificate, CertificateKind, Conjugator, Move, MoveSequence};
pub use words::Word;
