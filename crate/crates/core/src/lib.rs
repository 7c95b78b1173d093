//! Numerical-range geometry and eigenvalue inequalities for positive
//! semidefinite 2x2-block matrices `[A X; X* B]`.
//!
//! * [`matcore`]: dense complex matrices, Hermitian eigensolver, block helpers.
//! * [`numrange`]: certified brackets for distance to zero, width, numerical
//!   radius and diameter of `W(X)`.
//! * [`majorize`]: Ky Fan norms and anti-norms, majorization, pinchings.
//! * [`theorems`]: one checker per inequality plus a proof replay.
//! * [`gen`]: seeded instance generators.
//! * [`cli`]: the `blockrange` command-line tool.

pub mod cli;
pub mod gen;
pub mod majorize;
pub mod matcore;
pub mod numrange;
pub mod theorems;
