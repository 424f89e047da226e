//! Orthogonal greedy solver for the 1D fractional Poisson problem
//! `(-Δ)^{α/2} u = f` on `(0, 1)` with homogeneous Dirichlet data.
//!
//! The operator is discretized with the shifted Grünwald-Letnikov scheme
//! ([`fracop`]); the discrete problem is solved by an orthogonal greedy
//! algorithm ([`oga`]) over a dictionary of ReLU^k neurons ([`dictionary`]).
//! [`problems`] supplies the manufactured solution and a direct solve used
//! as a reference, and [`metrics`] the error norms reported in tables.
//!
//! All numerical types are generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

// NaN-rejecting `!(a < b)` guards, index loops over dense kernels and
// full-length reference literals are deliberate.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::excessive_precision
)]

pub mod dictionary;
pub mod error;
pub mod fracop;
pub mod linalg;
pub mod metrics;
pub mod oga;
pub mod problems;
pub mod scalar;

pub use dictionary::{select, DictionaryGrid, Neuron, Selection};
pub use error::{Error, Result};
pub use fracop::{
    assemble_operator, gl_coefficients, positivity_probe, FractionalOrder, GlCoefficients, Grid,
    PositivityReport, RieszOperator,
};
pub use metrics::{IterationRecord, Measurement, NormWeighting};
pub use oga::{run, OgaState, ProjectionMethod, SolveConfig, Solver, StepOutcome};
pub use problems::{fdm_solve, gamma_fn, FdmSolution, ManufacturedProblem};
pub use scalar::Real;

pub type FractionalOrder64 = FractionalOrder<f64>;
pub type RieszOperator64 = RieszOperator<f64>;
pub type Neuron64 = Neuron<f64>;
pub type DictionaryGrid64 = DictionaryGrid<f64>;
pub type OgaState64 = OgaState<f64>;
pub type SolveConfig64 = SolveConfig<f64>;
pub type Solver64 = Solver<f64>;
pub type IterationRecord64 = IterationRecord<f64>;
pub type ManufacturedProblem64 = ManufacturedProblem<f64>;

pub type FractionalOrder32 = FractionalOrder<f32>;
pub type RieszOperator32 = RieszOperator<f32>;
pub type SolveConfig32 = SolveConfig<f32>;
pub type IterationRecord32 = IterationRecord<f32>;
