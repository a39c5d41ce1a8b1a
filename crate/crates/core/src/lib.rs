//! Exact p-local cohomology of complex Stiefel manifolds and their
//! circle/cyclic quotients.
//!
//! Everything is computed over the localization Z_(p) at an odd prime, in
//! exact big-rational arithmetic:
//!
//! - [`arith`]: Z_(p) scalars, p-valuations, binomials, complete symmetric
//!   sums, the Adams denominator window.
//! - [`algebra`] / [`table`]: graded-commutative presentations with
//!   `scalar * monomial` ideals, Koszul-sign products, per-degree module
//!   tables, Kunneth products and table comparison.
//! - [`spaces`]: presentation builders for the Stiefel manifold W(n,k), its
//!   projective and weighted-projective quotients PW(n,k) and PLW(n,k,l),
//!   the cyclic quotients W(n,k;m), lens spaces, and the model products;
//!   rational minimal model and the generator ledger.
//! - [`serre`]: an independent Serre spectral-sequence oracle on the
//!   fibrations behind those quotients, with exact Smith reduction over the
//!   discrete valuation ring Z_(p) on every page.
//! - [`chern`]: Chern-character integrality certificates for stable
//!   splittings into wedges of p-local spheres.
//! - [`verdict`]: exact hypothesis-by-hypothesis evaluation of the p-local
//!   splitting theorems, with the model space as the conclusion.
//! - [`render`]: canonical JSON / markdown / CSV output assembly.

pub mod algebra;
pub mod arith;
pub mod chern;
pub mod dga;
pub mod error;
pub mod jsonutil;
pub mod linalg;
pub mod render;
pub mod serre;
pub mod spaces;
pub mod table;
pub mod verdict;

pub use arith::{binomial, complete_symmetric_sum, LocalScalar, Valuation};
pub use chern::{chern_x_expansion, gamma_integrality_window, stable_split_certificate};
pub use error::{Error, Result};
pub use serre::{run_pw_fibration, run_wm_fibration, SsConfiguration, SsRun};
pub use spaces::{comparison_space, minimal_model, presentation, space_table, SpaceDescriptor};
pub use table::{compare_tables, graded_table, kunneth, poincare_polynomial, GradedModuleTable};
pub use verdict::{full_verdict, m_bound_check, stable_range_check, theorem_a_bound, SplitVerdict};
