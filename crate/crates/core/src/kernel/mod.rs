//! Exact rational polyhedra and integral affine maps.

pub mod affine;
pub(crate) mod dd;
pub(crate) mod fm;
pub mod lattice;
pub mod linalg;
pub mod ops;
pub mod polyhedron;
pub mod rational;

pub use affine::AffineMap;
pub use ops::{
    affine_interpolate, equalizer, fiber_product, fixed_locus, image, is_iso_onto_face, preimage,
    FaceCertificate, InterpolationConstraint,
};
pub use polyhedron::{AffineHull, Constraint, Polyhedron, Vrep};
pub use rational::{format_point, format_rat, parse_rat, Int, Rat};
