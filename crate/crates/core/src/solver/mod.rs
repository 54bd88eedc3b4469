//! Exact resonance enumeration and counting.

mod angle;
pub mod export;
mod gravity;
mod oracle;
mod query;
mod three_wave;
mod types;

pub use angle::{
    angle_degree, circle_points, count_angle, count_angle_closed_form, count_angle_with,
    difference_bucket_size, AngleCount, AngleOptions, ENUMERATION_LIMIT,
};
pub use gravity::{gravity_form_one, solve_gravity_scale, solve_gravity_scale_with};
pub use oracle::{brute_force_oracle, ORACLE_LIMIT};
pub use query::{classify_solution, degree_in, participation, Participation};
pub use three_wave::solve_three_wave;
pub use types::{
    canonical_order, Counts, Form, Kind, Quartet, QuartetKey, ResonanceSet, SideConvention,
    Solutions, Triad,
};
