//! Level-1 holomorphic cusp forms with exact integer Fourier coefficients,
//! twisted partial sums Σ_{n≤x} a_n e^{2πinα}, and verified evaluation of the
//! generating series F(s, α) = Σ a_n e^{2πinα} e^{−s√n}.
//!
//! Module map:
//! - [`qseries`]: exact q-expansions (η, E4, E6, recipes over Δ, E4, E6) and a Niebur-formula oracle for τ(n).
//! - [`modarith`]: reduced twists, SL2(Z) companions, Kloosterman and Ramanujan sums.
//! - [`sums`]: twisted, progression and normalized partial sums, extrema scans.
//! - [`genseries`]: F(s, α) by the direct series and by its closed form, boundary asymptotics, identity checks.
//! - [`progressions`]: progression generating series, resonance analysis, moment checks.

pub mod error;
pub mod genseries;
pub mod modarith;
pub mod numeric;
pub mod progressions;
pub mod qseries;
mod quad;
mod series;
pub mod sums;

pub use error::{Error, Result};
pub use genseries::{ComplexPoint, SeriesEval};
pub use modarith::{companion, reduce_alpha, Companion, ReducedRational};
pub use num_complex::Complex64;
pub use qseries::{CuspForm, IntSeries, Recipe, RecipeTerm};

/// Runs `f` on a dedicated rayon pool with `threads` workers (0 = rayon default).
///
/// All parallel reductions in this crate use fixed chunk boundaries, so the
/// thread count never changes a result.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction");
    pool.install(f)
}
