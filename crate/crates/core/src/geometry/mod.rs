//! Points on `S^q`, sampling, equal-area partitions and their norms.

mod constants;
mod mesh;
mod pair;
mod partition;
mod point;
mod sampling;

pub use constants::{constants, Constants};
pub use mesh::{mesh_norm_estimate, nearest, MeshNormEstimate};
pub use pair::{build_compatible_pair, CompatiblePair, OccupancyFailure, PairOutcome};
pub use partition::{
    angular_coords, cap_area, cap_radius, equal_area_partition, EqualAreaPartition, Patch, MAX_PARTITION_DIM,
};
pub use point::{geodesic, PointSet, SpherePoint};
pub use sampling::{gaussian_direction, sample_uniform};

pub(crate) use point::{dot, geodesic_raw};
