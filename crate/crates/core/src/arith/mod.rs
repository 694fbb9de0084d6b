//! Exact scalars, valuations, local symbols, finite fields and S-units.

pub mod factor;
pub mod finite_field;
pub mod hilbert;
pub mod rat;
pub mod sunit;
pub mod unramified;

pub use factor::{factor_int, nth_power_free_part, Factorization};
pub use finite_field::{field, FieldCtx};
pub use hilbert::{hilbert_symbol, Place};
pub use rat::{fmt_rat, parse_rat, rat, ratio, valuation, Rat, Valuation};
pub use sunit::{s_unit_classes, solve_sunit_equation, SUnitClassSet};
pub use unramified::splitting_field_unramified;
