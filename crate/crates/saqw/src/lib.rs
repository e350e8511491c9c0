//! Exact simulator and analysis toolkit for one-dimensional self-avoiding
//! quantum walks: a coined quantum walk augmented with one memory qubit per
//! lattice site, with tunable memory-recording strength (`theta_m`) and a
//! memory-conditioned coin (`theta_c` on fresh sites, `theta_b` on visited
//! ones). A classical self-avoiding random-walk Monte Carlo engine with the
//! exponential avoidance rule provides the quantum/classical comparison.
//!
//! The state lives in a sparse map over `(site, coin, memory-mask)` basis
//! labels with exact complex arithmetic: amplitudes are merged after every
//! operator, only exact zeros are dropped, and evolution is deterministic
//! bit for bit.

pub mod analysis;
pub mod classical;
pub mod error;
pub mod evolve;
pub mod ops;
pub mod reference;
pub mod state;

pub use analysis::{
    coupling_report, fit_poly2, fit_power, moments, sweep, CouplingReport, PolyFit, PowerFit,
    SweepSurface, VariancePoint, VarianceSeries,
};
pub use classical::{beta_vs_g, simulate_saw, step_probabilities, SawConfig, VisitLedger};
pub use error::{Error, Result};
pub use evolve::{marginal, run_walk, run_walk_with_states, Marginal, Trajectory};
pub use ops::{
    apply_coin, apply_memory, apply_step, reflectivity, rotation, walk_step, CoinMatrix,
    InputKind, WalkParams,
};
pub use state::{
    hilbert_dimension, make_lattice, prepare_symmetrized, prepare_unsymmetrized, BasisLabel, Coin,
    Lattice, SparseState, MAX_STEPS,
};
