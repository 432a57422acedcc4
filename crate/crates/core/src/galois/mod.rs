//! Torsion points, subgroups of `(Z/NZ)^x`, characters, Galois-orbit averages and finite
//! subgroups of the torus.

mod characters;
mod finite;
mod orbit;
mod subgroup;
mod torsion;

pub use characters::{
    char_conductor, cyclic_decomposition, enumerate_characters, gauss_audit, gauss_sum,
    subgroup_exp_sum, subgroup_sum_audit, DirichletCharacter, GaussAuditRow, SubgroupSumRow,
    UnitLogs,
};
pub use finite::{
    count_kernel, count_small_delta, counting_audit, delta_group, delta_point, delta_point_brute,
    CountingAudit, FiniteTorusSubgroup, TORUS_GROUP_CAP,
};
pub use orbit::{
    exact_value, is_unit_at, norm_at_torsion, orbit_average_log, orbit_points, vanishes_at,
    OrbitAverage,
};
pub use subgroup::{all_subgroups, conductor_by_lifts, GaloisSubgroup, SUBGROUP_ENUM_CAP};
pub use torsion::TorsionPoint;
