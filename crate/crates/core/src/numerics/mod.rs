//! Special functions, root finding, quadrature, and the least-squares engine
//! shared by every other module.

mod bessel;
mod lsq;
mod optimize;
mod quad;
mod roots;

pub(crate) use bessel::bessel_k_triple;
pub use bessel::{bessel_j, bessel_j_prime, bessel_k, bessel_k_prime};
pub use lsq::{least_squares, DataPoint, FitResult, LeastSquares};
pub use optimize::{derivative, golden_section};
pub use quad::{gauss_legendre, integrate};
pub use roots::find_root;
