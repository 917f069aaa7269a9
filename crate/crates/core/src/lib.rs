//! Exact combinatorics and linear algebra for BCFW cells of the nonnegative
//! Grassmannian and the `m = 4` amplituhedron map.

pub mod ampl;
pub mod boundaries;
pub mod chords;
pub mod domino;
pub mod error;
pub mod inverse;
pub mod matrix;
pub mod permutation;
pub mod rational;
pub mod rng;
pub mod separation;
pub mod verify;

pub use chords::{Chord, ChordDiagram};
pub use domino::{ConstructionParams, DominoAssignment};
pub use error::{Error, Result};
pub use matrix::{IndexSet, RationalMatrix};
pub use permutation::DecoratedPermutation;
pub use rational::Q;
