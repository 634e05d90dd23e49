//! Morse-Novikov bookkeeping for closed braids and Murasugi sums of Seifert
//! surfaces, plus numerical critical-point analysis of argument maps.

pub mod argmap;
pub mod braid;
pub mod laurent;
pub mod matrix;
pub mod murasugi;
pub mod surface;

pub use braid::{minimize_inhomogeneity, BraidError, Braidword, Letter, Minimized, Sign};
pub use laurent::{LaurentMatrix, LaurentPoly, ParsePolyError};
pub use matrix::IntMatrix;
pub use murasugi::{
    deplumb_braid_surface, doubled_knot, eval, twist_knot, Citation, Deplumbing, ExactMn,
    ExprError, SeifertMatrixBundle, SurfaceExpr, Tri,
};
pub use surface::{
    alexander_from_seifert, alexander_via_burau, seifert_from_braid, seifert_matrix_from_braid,
    HandleDecomposition, SeifertMatrix, SurfaceError,
};
