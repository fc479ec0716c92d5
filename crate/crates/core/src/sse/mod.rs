//! Integer-matrix tools for shift equivalence: exact arithmetic, Smith
//! normal form and Bowen–Franks groups, elementary and strong shift
//! equivalence, the induced edge-shift conjugacies, and dimension groups.

pub mod conjugacy;
pub mod dimgroup;
pub mod equivalence;
pub mod matrix;
pub mod smith;

pub use conjugacy::{build_conjugacy, edge_paths, ConjugacyPair, Edge, EdgeGraphPath};
pub use dimgroup::{DimGroup, DimGroupElement, Positivity};
pub use equivalence::{
    compare_invariants, search_elementary, verify_chain, verify_elementary, verify_shift_equivalence,
    ChainVerdict, InvariantComparison, Invariants, SearchOutcome,
};
pub use matrix::IntMatrix;
pub use smith::{bowen_franks, charpoly, charpoly_nonzero_part, smith_normal_form, BowenFranks, Polynomial, SmithForm};
