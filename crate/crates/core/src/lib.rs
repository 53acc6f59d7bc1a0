//! Density of critical-line zeta zeros and the Milne phase-amplitude
//! function of the repulsive `l = -1/4` Coulomb problem.
//!
//! * [`specfun`]: complex log-gamma, digamma and the continuous gamma phase
//! * [`zero_density`]: `n_Z`, `n_C`, the phase shift `F` and the smooth zero count
//! * [`coulomb_wave`]: the Coulomb equation, its asymptotic pair and Frobenius branches
//! * [`milne`]: the closed-form Milne function, its grid, and a Pinney integrator
//! * [`dynamics`]: the canonical flow and the Ermakov-Lewis invariant
//! * [`zeros`]: zero tables, a sign-change scan of Hardy's `Z`, empirical densities
//! * [`cli`]: the `milne-zeta` command-line tool
//!
//! Grid sweeps and zero scans run on rayon when the default `parallel`
//! feature is enabled; see [`Execution`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coulomb_wave;
pub mod dynamics;
pub mod error;
pub mod milne;
pub mod ode;
mod par;
pub mod specfun;
pub mod zero_density;
pub mod zeros;

pub use error::{Error, Result};
pub use ode::{Sampling, Tolerance};
pub use par::Execution;
