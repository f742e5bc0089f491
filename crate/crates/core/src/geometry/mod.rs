//! Charts, generators, one-forms, metric and curvature of SO(3).

pub mod charts;
pub mod checks;
pub mod curvature;
pub mod field;
pub mod forms;
pub mod generators;
pub mod inertia;
pub mod quadrature;
pub mod rotation;

pub use charts::{
    axis_angle_to_euler, axis_angle_to_euler_closed_form, axis_angle_to_rotation, euler_to_rotation,
    rotation_to_axis_angle, rotation_to_euler, AxisAngle, EulerAngles, EulerConvention,
};
pub use checks::{geometry_suite, GeometryReport};
pub use curvature::{christoffel, curvature, levi_civita_connection, scalar_curvature, Christoffel, Curvature};
pub use field::ScalarField;
pub use forms::{structure_equation_residual, zeta_matrix};
pub use generators::{apply_generator, apply_generator_euler, DerivativeMethod, Generator};
pub use inertia::InertiaTensor;
pub use quadrature::{
    haar_weight, j0, so3_quadrature, BallResolution, Chart, EulerGrid, GammaBall, QuadratureGrid, SO3_VOLUME,
};
pub use rotation::{ell, hat, levi_civita, vee, xi, Rotation};
