//! Right-hand sides, time integrators and the simulation driver.

mod rhs;
mod sim;
mod step;

pub use rhs::{rhs_arctan, rhs_cccf, rhs_porous, rhs_viscous, velocity, ModelKind};
pub use sim::{
    simulate, Abort, InitialProfile, InitialSpec, Mode, SimConfig, Snapshot, Trajectory,
    POSITIVITY_GUARD,
};
pub use step::{stable_dt, stable_dt_for, step_ifrk4, step_rk4, Scheme};
