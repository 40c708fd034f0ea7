//! Exact symbolic workbench for the loop, vertex and idempotent presentations
//! of simply-laced quantum affine algebras.
//!
//! The crate instantiates every relation family of the presentations
//! coefficientwise and verifies them two independent ways: by normal-ordering
//! oracles in the quantum Heisenberg algebra, and by exact matrix evaluation
//! in a truncated level-1 Fock representation. All arithmetic is exact over
//! Z[q, q^-1] (fractions of Laurent polynomials where intermediate series
//! demand them); there are no floating-point tolerances anywhere.

pub mod dynkin;
pub mod heisenberg;
pub mod algebra;
pub mod laurent;
pub mod presentations;
pub mod rewrite;
