//! Stirling permutations, their statistics, context-free grammars and the
//! generating-function identities that connect them.

pub mod actions;
pub mod error;
pub mod families;
pub mod grammar;
pub mod identities;
pub mod objects;
pub mod poly;
pub mod stats;
pub mod tables;

pub use error::{Error, Result};
pub use grammar::{Grammar, GrammarPolynomial, Letter, Monomial};
pub use objects::{ObjectClass, PerfectMatching, Permutation, SignedPermutation, StirlingPermutation};
pub use poly::{QPoly, TriPoly, TruncatedEgf};
pub use stats::{DistributionTable, Stat};
pub use tables::{CoefficientTable, TableCache};
