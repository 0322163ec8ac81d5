//! Exact-arithmetic toolkit for two-letter golden-ratio substitution chains.
//!
//! The library covers the pipeline from symbolic substitutions to physical
//! observables, with every closed form backed by an independent numerical
//! oracle:
//!
//! * [`algebra`] — the field Q(√5), the ring Z[τ], the star map, exact order.
//! * [`substitution`] — rules, substitution matrices, Perron–Frobenius data,
//!   marked words, geometric inflation, random realizations.
//! * [`model_set`] — cut-and-project sets, coding windows, patch frequencies,
//!   equidistribution diagnostics.
//! * [`window_ifs`] — the graph-directed IFS satisfied by the windows,
//!   approximants for fractal windows, box-count boundary dimension.
//! * [`correlations`] — pair correlations by covariogram closed form and by
//!   the exact renormalisation system, cross-validated.
//! * [`diffraction`] — Fourier–Bohr amplitudes (closed form, Fourier-matrix
//!   cocycle, finite-patch sums), weighted combs, shears, 2D products.
//! * [`export`] — deterministic CSV/JSON/SVG writers.

pub mod algebra;
pub mod correlations;
pub mod diffraction;
pub mod error;
pub mod export;
mod linalg;
pub mod model_set;
pub mod substitution;
pub mod window_ifs;

pub use algebra::{GoldenInt, GoldenNum, LatticePoint};
pub use error::{Error, Result};
pub use model_set::{ModelSetSpec, PatchSpec, TileKind, TypedPoint, TypedPointSet, Window};
pub use substitution::{
    Alphabet, GeometricInflation, MarkedWord, PFData, SubstMatrix, SubstRule, TwoCycle,
};
