//! Multiscale reduction of the discrete-time lattice sine–Gordon equation to a
//! completely discrete NLS equation.
//!
//! * [`multiscale`] — exact change-of-lattice calculus.
//! * [`lattice_sg`] — quad-map simulation and linear waves.
//! * [`nls`] — the reduction pipeline and its numerical validation.

pub mod lattice_sg;
pub mod multiscale;
pub mod nls;
