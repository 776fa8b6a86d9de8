//! Exact counting of level-1 quaternionic automorphic representations on G2.
//!
//! The count for each weight k > 2 splits into two exactly computable
//! pieces. The first is an invariant dimension on the compact form: the dimension
//! of the G2^c(ℤ)-fixed subspace of the irreducible representation with
//! highest weight (k-2)β, where G2^c(ℤ) is the order-12096 automorphism
//! group of the integral (Coxeter) octonions. The second is an endoscopic correction
//! assembled from dimensions of spaces of classical level-1 cusp forms.
//! Everything is integer or cyclotomic arithmetic; no floats anywhere.
//!
//! Module map:
//! - [`rootlattice`]: G2 roots, coroots, Weyl group, weight computations.
//! - [`cyclotomic`]: exact arithmetic in ℚ(ζ_N) and truncated jets.
//! - [`weylchar`]: character and dimension evaluation, including the
//!   jet-limit extension at irregular torus elements, plus a Freudenthal
//!   multiplicity oracle.
//! - [`octavians`]: the integral octonion order, its 240 units, the
//!   automorphism group, conjugacy classes, and invariant dimensions.
//! - [`modforms`]: dimensions of level-1 cuspidal eigenform spaces.
//! - [`endoscopy`]: the SL2×SL2/±1 correction terms and Satake-class
//!   projection combinatorics.
//! - [`counts`]: the final per-weight counts, fixtures, and renderers.
//! - [`cli`]: command-line surface.

pub mod cli;
pub mod counts;
pub mod cyclotomic;
pub mod endoscopy;
pub mod error;
pub mod modforms;
pub mod octavians;
pub mod rootlattice;
pub mod weylchar;

pub use error::{Error, Result};
