//! Relativized diagonal-free set algebras of finite dimension.
//!
//! This crate decides the equational theory of set algebras whose unit is an
//! arbitrary nonempty set of sequences and whose extra operations are the
//! per-direction cylindrifications `c_i`, relativized to that unit.  The
//! pieces fit together like this:
//!
//! * [`term`] / [`parser`] — term and formula syntax, parsing, printing, and
//!   the translation from first-order formulas without equality to terms.
//! * [`forms`] — interned Hintikka-style normal forms of each degree, with
//!   counting, enumeration, projection, and a consistency check.
//! * [`mod@unit`] / [`witness`] — finite relativized units, the semantics
//!   evaluator, and the labeled witness-model constructions (including the
//!   one-point extension, the zig-zag descent, the bridged double model, and
//!   the direct-product unit).
//! * [`decide`] — the satisfiability/validity procedure built on a label
//!   tableau, plus the certificate-producing free-algebra operations
//!   (`split`, `fresh_split`, `zero_dim_witness`, `dimension_set`).
//! * [`oracle`] — an independent brute-force reference: exhaustive unit
//!   enumeration, axiom checking, and a direct evaluator for formulas on
//!   general assignment models.
//!
//! Every positive verdict carries a finite model that re-checks under the
//! plain evaluator, so the answers are self-certifying.  The crate is
//! `no_std` (with `alloc`); IO, JSON, and the CLI live in the companion
//! `drsolve` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decide;
pub mod forms;
pub mod oracle;
pub mod parser;
pub mod rng;
pub mod term;
pub mod unit;
pub mod witness;

pub use decide::{decide_eq, decide_sat, Verdict};
pub use forms::{count_forms, FormContext, FormId};
pub use parser::{parse_formula, parse_term, ParseError};
pub use term::{formula_to_term, Formula, Term};
pub use unit::{Evaluation, PointSet, Unit};
pub use witness::WitnessModel;
