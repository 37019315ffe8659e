//! A desk-scale laboratory for ordinal Turing machines (OTMs), oracle
//! effectivizers, and reducibility experiments between set-theoretic
//! principles.
//!
//! The crate provides, bottom up:
//!
//! - [`ordinal`]: exact Cantor-normal-form arithmetic below ε₀ and the Gödel
//!   pairing bijection on ordinals;
//! - [`setcode`]: coding of hereditarily finite sets by sets of ordinals,
//!   with decoding (Mostowski collapse), label-independent equality, and
//!   well-order checking;
//! - [`formula`]: an ∈-formula AST with parser, prenex transformation, Σₙ/Πₙ
//!   classification, Gödel numbering, and Tarskian evaluation over finite
//!   universes;
//! - [`machine`]: an OTM simulator with ordinal-indexed sparse tapes, an
//!   oracle ("miracle") tape, and cycle-detecting acceleration through limit
//!   times;
//! - [`universe`]: finite ground-truth models (hereditarily finite levels and
//!   toy cardinal structures) that supply satisfaction and every ground-truth
//!   or adversarial oracle the reductions are tested against;
//! - [`reductions`]: the reduction algorithms between principles such as
//!   separation, replacement, collection, the power set axiom, and the
//!   cardinality principles, each validated against brute-force ground truth
//!   with oracle-call accounting.
//!
//! The `otm-lab` binary exposes `run`, `eval`, and `reduce` subcommands over
//! the same machinery; see the book under `book/` for a guided tour.

pub mod formula;
pub mod machine;
pub mod ordinal;
pub mod reductions;
pub mod setcode;
pub mod universe;

#[cfg(doctest)]
mod book {
    //! Doc-tests that keep the book's code snippets compiling and passing.
    #[doc = include_str!("../../../book/src/ordinals.md")]
    pub struct Ordinals;
    #[doc = include_str!("../../../book/src/set-codes.md")]
    pub struct SetCodes;
    #[doc = include_str!("../../../book/src/formulas.md")]
    pub struct Formulas;
    #[doc = include_str!("../../../book/src/machine.md")]
    pub struct Machine;
    #[doc = include_str!("../../../book/src/universes.md")]
    pub struct Universes;
    #[doc = include_str!("../../../book/src/reductions.md")]
    pub struct Reductions;
}
