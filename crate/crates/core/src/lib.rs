//! Shape optimization over convex planar domains.
//!
//! The library covers four layers:
//!
//! - [`geometry`]: exact convex-polygon geometry — measures, Chebyshev
//!   center/inradius, Hausdorff distance, dilation, radial parametrization,
//!   and projection onto the class of convex subsets of a box with
//!   prescribed area.
//! - [`expr`] and [`fem`]: scalar coefficient fields and P1 finite elements
//!   on triangulated polygons, for Dirichlet eigenvalues of second-order
//!   elliptic operators and for source problems with integral functionals.
//! - [`functionals`]: Newton's resistance of a radial profile, the matching
//!   boundary form over bodies of revolution, and generic boundary
//!   functionals of the outward normal.
//! - [`optimizer`]: projected coordinate search over radial shape
//!   coordinates, concave-profile descent for the resistance problem, and a
//!   Blaschke-style convergent-subsequence selection.
//!
//! The [`verify`] module bundles the library's invariants into named,
//! seeded checks; the companion CLI exposes them as `verify` suites.

pub mod expr;
pub mod fem;
pub mod functionals;
pub mod optimizer;
pub mod verify;
pub mod geometry;
