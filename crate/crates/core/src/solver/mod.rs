//! Cell-centred finite-volume solver for `−div diag(1, α_j) ∇` on rectangles,
//! discrete elliptic measure by Green flux, a random-walk oracle, and the
//! comparison of boundary kernels with Riesz products.

mod grid;
mod kernel;
mod measure;
mod operator;
mod pcg;

pub use grid::{required_spacing, Grid, Side, MIN_CELLS, RESOLUTION_FACTOR};
pub use kernel::{
    compare_kernel_to_riesz, doubling_report, pearson, poisson_kernel_profile, DoublingReport, KernelComparison,
    KernelConfig, PoissonKernelProfile, DEFAULT_KERNEL_CAP,
};
pub use measure::{
    elliptic_measure, measure_mc_oracle, pole_at, solve_dirichlet, DirichletSolution, EllipticMeasure,
};
pub use operator::{assemble, CsrMatrix, DiscreteOperator, FaceAverage, LinearOperator};
pub use pcg::{check_tol, iteration_cap, pcg, pcg_capped, SolveStats, DEFAULT_TOL, MAX_TOL};
