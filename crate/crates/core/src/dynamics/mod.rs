//! Serial-chain kinematics and rigid-body dynamics.

mod crba;
mod ik;
mod jacobian;
mod model;
mod reflected;

pub use crba::{mass_matrix, mass_matrix_at};
pub use ik::{inverse_kinematics, IkOptions, IkSolution, IkTarget};
pub use jacobian::{manipulability, point_jacobian, point_jacobian_at, spatial_jacobian_at};
pub use model::{fixtures, ChainState, ContactPoint, Joint, JointType, Link, ManipulatorModel};
pub use reflected::{
    directional_mass, inverse_cartesian_inertia, inverse_cartesian_inertia_at, iso_effective_mass, reflected_mass,
    ReflectedMassQuery, SINGULAR_DIRECTION_EPS, UNIT_TOLERANCE,
};
