//! Holonomy calculus on finite one-complexes.
//!
//! Curve families over a graph decompose into webs of tassels; the uniform
//! measure assigns Haar measure to each tassel's attainable subgroup and
//! products across tassels. On top of that sit exact, Fourier, and
//! Monte-Carlo integration of cylinder functions, consistency checks for
//! projective measure families, and spin-network states with a closed-form
//! inner product.

pub mod complex;
pub mod doc;
pub mod group;
pub mod measure;
pub mod spinnet;
pub mod testkit;
pub mod web;

pub use complex::{
    compose, factorize, invert, subdivide, Curve, CurveFamily, DependenceMap, Dir, EdgeId,
    OneComplex, OrientedEdge, SignedIndex, Subdivision, VertexId,
};
pub use group::{
    characters, clebsch_gordan, enumerate_subgroup, wigner_d, Element, FiniteTable, Group,
    GroupError, HalfInt, IrrepLabel, Quaternion,
};
pub use measure::{
    apply_dependence, attainable_set, gauge_transform, generated_group, holonomy, integrate,
    invariance_check, pushforward_check, sample_uniform, AttainableSet, Connection,
    CylinderFunction, GaugeMap, IntegralReport, IntegrateOptions, Kernel, MeasureError,
    MeasureTable, Method,
};
pub use spinnet::{
    build_spin_network, evaluate, inner_product, invariant_basis, orthonormal_family,
    EndpointPairing, InvariantVector, SpinError, SpinNetwork, TasselLabel,
};
pub use web::{
    check_tassel, check_web, consistent_parametrization, decompose_family, subdivide_web,
    types_of, Decomposition, Parametrization, SupportHierarchy, Tassel, TypeSupport, Violation,
    Web,
};
