//! Bootstrap-product construction of CSS codes.
//!
//! Classical input codes are combined through their tensor-product complex:
//! qubits and X-checks come from two of its degrees, and the Z-checks are
//! found by solving for polynomials in the input boundary maps that compose
//! to zero with the X boundary.

pub mod gf2;
pub mod poly;
pub mod solver;

pub mod assembly;
pub mod css;
pub mod lattice;
pub mod metrics;

pub mod cli;
pub mod io;
