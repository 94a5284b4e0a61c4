//! Exact rational polyhedral kernel: linear algebra, double description,
//! convex hulls, feasibility and lattice volumes.

pub mod bits;
pub mod dd;
pub mod hull;
pub mod linalg;

pub use dd::{
    cone_dim, dd_rays, facet_count, reduce_mod_lineality, strict_interior_point, v_to_h, HCone,
    VCone,
};
pub use hull::{
    affine_dim, affine_dim_of, facet_description, lattice_volume, lower_facets, polytope_edges,
    pulling_triangulation, simplex_volume, FacetDescription,
};
pub use linalg::{
    dot, int_vec_to_rational, lex_cmp, rat, rat_int, to_primitive, zero_vec, Int, QMatrix,
    QVector, Rational,
};
