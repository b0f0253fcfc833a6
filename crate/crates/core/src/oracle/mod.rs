//! Independent ground truth for the spectral machinery: direct singular
//! quadrature of the layer operators, dense truncated matrices solved by LU,
//! and exact multipole fields for manufactured scattering problems.

mod dense;
mod multipole;
mod quadrature;

pub use dense::{dense_assemble, dense_sn_matrix, dense_solve, multiplication_matrices, DenseOperatorMatrix};
pub use multipole::{
    evaluate_multipole, mie_scattered, multipole_field_traces, multipole_traces, regular_multipole_traces,
    rotational, surface_gradient, MultipoleSpec, MultipoleTerm, MultipoleTraces, Radial,
};
pub use quadrature::{quad_apply_layer, quad_apply_layer_with, LayerKind, DEFAULT_NODES};
