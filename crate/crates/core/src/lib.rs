//! Block-avoiding point sequencings of combinatorial designs.
//!
//! A sequencing of a design is an ordering of its points; it is `ell`-good
//! when no `ell` consecutive points contain a block. The crate builds the
//! designs, runs the greedy sequencing engines, checks the results, and
//! computes the upper bounds that limit how large `ell` can be.

pub mod bounds;
pub mod constructions;
pub mod designs;
pub mod format;
pub mod game;
pub mod goodness;
pub mod oracle;
pub mod sequenceable;
pub mod sequencer;

pub use designs::{build_system, completions, validate_system, Block, BlockSystem, DesignError, Kind, Point};
pub use goodness::{first_violation, max_good_ell, Sequencing, SequencingError, WindowViolation};
pub use sequencer::{constants_for, PropertyConstants, TieRule};
