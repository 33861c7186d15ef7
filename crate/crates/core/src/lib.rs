//! Exact arithmetic for Cullis' determinant of rectangular matrices and for
//! the linear maps that preserve it.

pub mod cullis;
pub mod error;
pub mod field;
pub mod json;
pub mod lambda;
pub mod matrix;
pub mod poly;
pub mod preserver;
pub mod sample;
pub mod subsets;
pub mod verify;

pub use cullis::{det, det_definition, det_laplace, det_minorsum, det_product_rhs, Budget, DetAlgo};
pub use error::{CullisError, Result};
pub use field::{FieldSpec, Scalar};
pub use lambda::{lambda_coeffs, max_deg_over_all_a, LambdaPoly};
pub use matrix::RectMatrix;
pub use preserver::{is_preserver, CheckMethod, LinearMapNK, PreserverReport, Verdict};
pub use subsets::{Injection, KSubset};
