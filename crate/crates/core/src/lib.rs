//! Exact laboratory for functional extensions of the natural numbers.

pub mod ep;
pub mod eqp;
pub mod error;
pub mod extension;
pub mod finite;
pub mod notation;
pub mod oracle;
pub mod poly;
pub mod random;
pub mod rep2;
pub mod stone;
pub mod ultrafilter;

mod lexer;
mod quasi;

pub use ep::{BoolOp, Classification, EpSet};
pub use eqp::{CompareVerdict, Comparison, EqpFunction};
pub use error::{Error, Result};
pub use extension::formula::{parse_formula, transfer_check, Formula, Signature, TransferReport};
pub use extension::{
    Context, DirWitness, HyperNat, IndiscernibilityReport, Possibility, Separability,
};
pub use finite::{
    search_extensions, verify_candidate, Axiom, AxiomSet, FiniteUniverse, SatisfiabilityMatrix,
    StarMapCandidate,
};
pub use oracle::{Commitment, LazyOracle, ResidueOracle};
pub use poly::{MultiPoly, Poly};
pub use rep2::{Rep2Set, SectionFamily};
pub use stone::FiniteStone;
pub use ultrafilter::{
    Certificate, Coordinate, Equality, HReport, HVerdict, TensorHandle, UltrafilterHandle,
};
