//! The inequality and identity harness: each check returns one or more
//! [`CheckReport`]s.
//!
//! Norms inside checks always use the exact spectral generators; Riesz
//! operators are only ever compared against them. Sup norms and suprema
//! over the group are attained values (lower bounds), so sampling error
//! can only make a true inequality look tighter.

mod checks;
mod family;
mod report;

pub use checks::*;
pub use family::{Family, POLYNOMIAL_TERMS};
pub use report::{
    from_jsonl, ratio, read_csv, read_jsonl_file, to_jsonl, write_atomic, write_csv, CheckReport, ParamValue, Params,
};
