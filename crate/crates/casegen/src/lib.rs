//! Computer-generated case analyses over the four-element domain: candidate
//! enumeration, filtering, symmetry reduction and comparison against the
//! shipped reference lists.

mod case1;
mod case2;
mod case3;
mod error;
pub mod kernel;
mod report;

pub use case1::generate_case1;
pub use case2::generate_case2;
pub use case3::{search_case3, search_case3_unpruned};
pub use error::CasegenError;
pub use report::{CaseItem, CaseReport, Comparison, Continuation, Provenance, Stage, Timing};

/// Run options shared by the case generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Worker threads; 0 uses the global rayon pool.
    pub jobs: usize,
    /// Record a per-candidate outcome.
    pub audit: bool,
}

pub(crate) fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CasegenError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CasegenError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}
