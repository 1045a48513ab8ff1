//! Rank-metric codes from twisted automorphisms of rational function fields.
//!
//! The crate builds MRD codes over `F_{q^m}(x)` by evaluating operators in a
//! twisted automorphism `phi(sum f_i x^i) = sum f_i^q lambda^i x^i`, reduces
//! them modulo an irreducible polynomial to codes over `F_{q^{mr}}`, and
//! certifies the result by exhaustive echelon-form enumeration. The same
//! machinery yields optimal Ferrers diagram codes and maximum sum-rank
//! distance codes.
//!
//! ```
//! use twistcodes::{codes, presets};
//!
//! let g = presets::paper_generator().unwrap();
//! assert_eq!(g.format_rows()[1][4], "(2a + 1)x");
//! ```

pub mod cli;
pub mod codes;
pub mod error;
pub mod ferrers;
pub mod gf;
pub mod linalg;
pub mod msrd;
pub mod presets;
pub mod ratfun;
pub mod twist;
pub mod wire;

pub use error::{Error, Result};
pub use gf::{Field, FieldElem, FieldTower, Level};
pub use linalg::Matrix;
pub use ratfun::{Poly, PolyRing, RatFun, RatFunField};
