//! Finite, exactly checkable pieces of symmetry-driven zero-one laws.
//!
//! The crate is organised around five capabilities:
//!
//! * [`info`]: entropy, mutual information, total variation and dependence
//!   coefficients of finite joint distributions, together with the
//!   O'Connell inequality and its almost-independent variant.
//! * [`symmetry`]: symbolic positional maps on an index set, cylinder events
//!   and exhaustive positional-symmetry checks on finite windows.
//! * [`renorm`]: block renormalization maps, traces, block-exchange
//!   symmetries, induced single-site dynamics and a stabilization Monte Carlo.
//! * [`graph`]: the recursive two-copy graph construction, its copy-swapping
//!   automorphisms, induced edge maps and random subgraph sampling.
//! * [`probe`]: empirical diagnostics (event probability curves, plug-in
//!   mutual information, a finite-window mixing probe).
//!
//! All randomness goes through the counter-based generator in [`rng`], so
//! Monte Carlo results depend only on `(seed, samples)` and never on the
//! number of worker threads.

pub mod budget;
pub mod error;
pub mod format;
pub mod graph;
pub mod info;
pub mod mc;
pub mod probe;
pub mod renorm;
pub mod rng;
pub mod symmetry;

pub use error::{Error, Result};
