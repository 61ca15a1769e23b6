use serde::{Deserialize, Serialize};

/// Fixed-step integration scheme used by the unit models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Velocity-level states first, then positions from the updated velocity.
    #[default]
    SemiImplicitEuler,
    /// Classical fourth-order Runge–Kutta with commands held over the step.
    Rk4,
}
