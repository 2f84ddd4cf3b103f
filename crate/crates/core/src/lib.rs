//! Ramsey optimal growth with Allee-effect labour dynamics.
//!
//! The crate is `no_std` (it needs `alloc` for stored trajectories) and
//! covers:
//!
//! * [`production`]: intensive production families, their derivatives, the
//!   inverse marginal product and the curvature gap `h(k) = f(k)/k - f'(k)`;
//! * [`population`]: the cubic Allee growth law, regime classification and
//!   labour trajectories;
//! * [`dynamics`]: the coupled capital/consumption/labour system, comparison
//!   bounds, the ratio formulation, saddle-path shooting and welfare;
//! * [`steadystate`]: Solow and modified-golden-rule equilibria and the
//!   shrinking-versus-stationary population comparison.
//!
//! Numerical building blocks live in [`ode`] (Dormand–Prince 5(4) with dense
//! output) and [`roots`] (bracketing bisection).

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod dynamics;
pub mod error;
mod math;
pub mod ode;
pub mod population;
pub mod production;
pub mod roots;
pub mod steadystate;

pub use dynamics::{EconomyState, RamseyParams, Termination, Trajectory};
pub use error::{Error, Result};
pub use population::{AlleeParams, Regime, RegimeTag};
pub use production::ProductionSpec;
pub use steadystate::{SteadyCase, SteadyState};
