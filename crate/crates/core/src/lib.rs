//! Fourth-order dispersive curve flows `u: T → N` into compact Kähler targets
//! with parallel curvature, discretized pseudospectrally on a periodic grid.
//!
//! * [`manifold`]: the targets `S²`, `CP^n` and `G_{n,k}` with `J`, the metric and `R`.
//! * [`curve`]: discrete curves, tangent fields and covariant derivatives.
//! * [`flow`]: the flow right-hand sides and the parameter maps between them.
//! * [`energy`]: `E`, `E₂`, `E_*`, their gradients and the Hamiltonian field.
//! * [`gauge`]: the gauge-corrected energy `N_k` and the commutator cancellation.
//! * [`identities`]: randomized checks of the curvature identities.
//! * [`runner`]: time integration, diagnostics, sweeps and the CLI.

pub mod curve;
pub mod energy;
pub mod error;
pub mod flow;
pub mod gauge;
pub mod identities;
pub mod manifold;
pub mod runner;
pub mod spectral;
