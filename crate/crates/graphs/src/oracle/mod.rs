//! Brute-force verification of the structural claims on explicit graphs.

pub mod cliques;
pub mod cover;
pub mod distance;
pub mod drg;
pub mod lines;
pub mod local;
pub mod sigma;
mod verify;

use thiserror::Error;

pub use cliques::{find_assemblies, find_cover, maximal_cliques, Assemblies, CoverSearch};
pub use cover::{
    check_c_factorization, check_phi_standard_sequence, measure_phi, measure_tau, verify_cover, CountViolation,
    LineGeometry,
};
pub use distance::DistanceData;
pub use drg::{verify_drg, DrgOutcome, DrgViolation};
pub use lines::{check_dual_pasch, check_els, verify_design, DesignViolation, ElsViolation, LineSets, PaschViolation};
pub use local::{check_local_disjoint_cliques, check_local_eigenvalue, check_local_grid, GridShape, LocalEigenvalue};
pub use sigma::{build_sigma, check_intersecting_lines, check_sigma, srg_parameters, SigmaCheck, SigmaSubgraph};
pub use verify::{verify_all, VerifyInput, VerifyOptions, VerifyReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is disconnected: no path from {x} to {y}")]
    Disconnected { x: u32, y: u32 },
    #[error("graph has no vertices")]
    Empty,
    #[error("measured intersection numbers do not form a valid array: {0}")]
    Array(String),
}
