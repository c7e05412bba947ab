//! Exact quadratically-constrained basis pursuit in the real-number
//! (Blum–Shub–Smale) model of computation.
//!
//! The crate turns `min ‖x‖₁ s.t. ‖Ax − y‖₂ ≤ ε` (and the complex variant
//! with the `‖·‖*` objective) into linear-objective polynomial optimisation
//! over a quantifier-free semialgebraic set, and solves it exactly: every
//! coordinate of the returned minimiser is an element of `ℚ(√d)` and comes
//! with a KKT certificate checked in exact arithmetic.
//!
//! Alongside the solver live a BSS-machine interpreter (with a ReLU-network
//! compiler) and a demonstrator of the discontinuity of the solution map
//! that rules out Turing-model solvers.

pub mod bss_machine;
pub mod cli;
pub mod exact_arith;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod polynomial;
pub mod reduction;
pub mod turing_gap;

pub use exact_arith::{QuadraticNumber, Rational};
pub use optimizer::{certify, check_feasible, oracle_solve, solve, solve_complex, Solution};
pub use reduction::{ComplexInstance, RealInstance};
