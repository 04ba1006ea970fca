//! Variable-ordering heuristics for cylindrical algebraic decomposition.
//!
//! The crate is organised bottom-up:
//!
//! * [`polyarith`]: exact sparse multivariate polynomials over the integers,
//!   with gcds, subresultant resultants, discriminants and squarefree splitting.
//! * [`projection`]: the McCallum projection operator, projection chains along
//!   an ordering and a memoised enumeration of chains over every ordering.
//! * [`heuristics`]: Brown, sotd, greedy sotd, mods, gmods, logmods, random
//!   and the virtual best, all reporting their own cost.
//! * [`metrics`]: timeout penalties, markup, accuracy, totals, completion
//!   counts, uniqueness clustering and plot data.
//! * [`ingest`]: SMT-LIB QF_NRA scripts and the timing / cell-count /
//!   projection-time CSV tables.
//! * [`plot`]: deterministic SVG survival and adversarial plots.

pub mod error;
pub mod heuristics;
pub mod ingest;
pub mod metrics;
pub mod plot;
pub mod polyarith;
pub mod projection;

pub use error::{Error, ErrorKind, Result};
pub use polyarith::{PolySet, Polynomial, Variable, Variables};
pub use projection::VariableOrdering;
