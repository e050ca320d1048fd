//! Simulation kernel for compute-and-forward relaying over an L-user,
//! M-relay network with N-antenna relays.
//!
//! The crate is organized around the pipeline of a Monte Carlo frame:
//!
//! * [`numerics`] — small dense linear algebra (Cholesky, SPD solves,
//!   symmetric eigenvalues, orthogonal-complement projectors);
//! * [`lattice`] — integer machinery: shortest-vector enumeration over Gram
//!   forms, Hermite normal form with unimodular transform, projection
//!   lattice bases, and exhaustive oracles for tests;
//! * [`cmf`] — the computing schemes run inside a relay (standard, extended
//!   and successive), their closed-form combining vectors and rates;
//! * [`channel`] — reproducible random channel generation (real Gaussian
//!   user-relay links, Nakagami relay-destination gains, estimation-error
//!   perturbation);
//! * [`network`] — forwarding strategies and per-frame outcomes (standard
//!   forwarding with rank-failure detection, best-relay selection with and
//!   without destination feedback) plus the analytic outage compositions.
//!
//! Everything is pure and deterministic given an explicit seed, so frames
//! can be fanned out across worker threads freely.

pub mod channel;
pub mod cmf;
pub mod lattice;
pub mod network;
pub mod numerics;
