//! Exact computations with permutads (shuffle algebras), their Koszul duals and
//! dual bar constructions, and operads in the operadic category `Per`.

pub mod barkoszul;
pub mod combinat;
pub mod error;
pub mod linalg;
pub mod percat;
pub mod permutad;
pub mod peroperads;
pub mod shperm;

pub use combinat::{OrderedPartition, Shuffle, Surjection};
pub use error::{Error, Result};
pub use linalg::{ChainComplex, Rational, SparseMatrix};
