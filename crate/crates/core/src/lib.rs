//! Nonlinear nonlocal PDEs solved through linear base/auxiliary flows and a
//! Fredholm (Riccati) relation, with direct pseudo-spectral solvers as
//! independent references.

pub mod diagnostics;
pub mod direct;
pub mod error;
pub mod expm;
pub mod fourier;
pub mod grid;
pub mod kernel;
pub mod linalg;
pub mod pde;
pub mod properties;
pub mod riccati;
pub mod scenario;
pub mod series;
pub mod suite;
pub mod symbol;

pub use error::{Error, Result};
pub use fourier::Fourier;
pub use grid::{Grid1D, Space};
pub use kernel::{BlockKernel, Kernel2D};
pub use series::{det2, star_exp, star_series, StarSeries};
pub use symbol::{Classification, Parity, Symbol};
