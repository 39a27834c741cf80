//! Exact power-series and base-p digit machinery over finite fields of
//! characteristic p.
//!
//! - [`field`]: arithmetic in F_{p^n}.
//! - [`digits`]: base-p expansions, Lucas binomials, p-cores, the p-digital
//!   well-ordering, `mu_q`, q-critical integers, p-admissible quadruples.
//! - [`series`]: truncated series, logarithmic derivative, `psi_q`, the
//!   additive ring `R_{q,K}` and `Gamma_{q,K}`, Artin-Hasse and generator
//!   series.
//! - [`theorems`]: bounded verification suites producing [`VerifyReport`]s,
//!   plus the generator exploration table.

#![allow(clippy::manual_is_multiple_of)]

pub mod digits;
pub mod error;
pub mod field;
pub mod series;
pub mod theorems;

pub use digits::{AdmissibleQuadruple, DigitGamesWitness, DigitString, PrimePower};
pub use error::{Error, Result};
pub use field::{Fe, Field, FieldElement, FieldSpec};
pub use series::{AdditiveSeries, GammaSeries, TruncSeries, UnitSeries};
pub use theorems::VerifyReport;
