//! Integer lattices, Harder-Narasimhan profiles and the torsion-point factorisation.

mod base;
mod factor;
mod hn;
pub mod matrix;

pub use base::{
    complete_to_unimodular, kernel_mod, lattice_of_torsion, lll, orthogonal_lattice,
    saturation_index, IntLattice, Norm,
};
pub use factor::{
    factor_torsion, monomial_change, near_identity_conjugate, FactorizationResult,
    MonomialChange,
};
pub use hn::{
    audit_det_lambda_ub, audit_vlowerbound, hn_profile, hn_profile_heuristic, lambda_nu,
    min_det_sublattice, min_gram_sublattice, rho, tilde_lambda, torsion_lambda_nu, HNProfile,
    EXACT_DIM_CAP,
};
pub use matrix::Mat;
