//! Certified two-sided enclosures of multidimensional Bohr radius bounds.
//!
//! The pipeline, bottom to top:
//!
//! * [`multiindex`] — enumeration and exact counting of the exponent sets
//!   `Λ(m,n)` of degree-`m` monomials in `n` variables.
//! * [`spaces`] — `ℓ^n_q` norms, duality, and seeded sampling on the unit
//!   sphere of the domain ball.
//! * [`polynorms`] — vector-valued homogeneous polynomials and truncated
//!   power series with their `‖·‖_∞`, `‖·‖_1`, `‖·‖_2` norms (closed forms
//!   on the polydisk, multi-start projected ascent for finite `q`, and a
//!   mesh-certified sup norm on the polydisk).
//! * [`sidon`] — two-sided estimation of the vector-valued Sidon constants
//!   `S̃(m,n)` (equivalently, the unconditional basis constant of the
//!   monomials) by witness search, plus the derived radius constants.
//! * [`radii`] — evaluation of the coefficient power series `H_n`, certified
//!   bisection for the roots `β_n` and the `γ_n` enclosure, and report
//!   assembly.
//! * [`verify`] — empirical checks of the Bohr inequality, the Wiener-type
//!   coefficient bound, and the strict corner-coefficient inequality on
//!   explicit polynomial instances.
//! * [`cache`] — line-delimited JSON persistence for Sidon estimates.
//!
//! Every solver returns a [`BoundInterval`]: an explicit `[lo, hi]`
//! enclosure carrying its certification status. Heuristic values (from
//! optimization without a matching certificate) are never silently promoted.

pub mod cache;
pub mod interval;
pub mod multiindex;
pub mod polynorms;
pub mod radii;
pub mod sidon;
pub mod spaces;
pub mod verify;

mod ascent;
mod kahan;

pub use interval::{BoundInterval, Status};
pub use spaces::{Exponent, SpaceSpec};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("combinatorial count overflow: C({top}, {k}) does not fit in u128")]
    CountOverflow { top: u64, k: u64 },

    #[error("enumeration of {count} multi-indices exceeds the budget of {budget}")]
    EnumerationTooLarge { count: u128, budget: u128 },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid exponent {0}: must be a real >= 1 or infinity")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "mesh budget exceeded: n = {n}, mesh = {mesh} (guard: n <= {max_n}, mesh <= {max_mesh})"
    )]
    MeshBudget {
        n: usize,
        mesh: usize,
        max_n: usize,
        max_mesh: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("requested tolerance {tol:e} is below the floating-point floor {floor:e}")]
    ToleranceTooTight { tol: f64, floor: f64 },

    #[error("solver did not converge within {iterations} iterations")]
    NonConvergence { iterations: u32 },

    #[error("cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
