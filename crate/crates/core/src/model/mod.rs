//! Families of small sets, their descriptors and exact evaluation.

pub mod choice;
pub mod condition;
pub mod defset;
pub mod descriptor;
pub mod eval;
pub mod result;
pub mod smallset;

pub use choice::{ChoiceDecomposition, ChoiceInstance, ChoicePiece, FiberSelection, MapDescriptor, MapPiece};
pub use condition::{Condition, Relation};
pub use defset::{DefSet, Tuple};
pub use descriptor::{Predicate, Ufss, XDesc, ZDesc};
pub use eval::Evaluator;
pub use result::{DecompositionResult, Piece, Tag, Trace, TraceNode};
pub use smallset::{Derivation, Point, SmallSet};
