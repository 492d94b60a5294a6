//! Hamiltonian builders for the four lattice models.
//!
//! Chains use site-major ordering. The 2D models use `j·Nx + i` cell
//! ordering (x fastest), with the four SOTI sublattices `A, B, C, D`
//! innermost.

mod chain;
pub mod config;
mod skin2d;
mod soti;
mod ssh;

pub use chain::{build_hn, ChainSpec};
pub use config::ModelConfig;
pub use skin2d::{build_skin2d, reduce_skin2d_pbc_y, Skin2DSpec};
pub use soti::{build_soti, soti_bloch, SotiSpec, SUB_A, SUB_B, SUB_C, SUB_D};
pub use ssh::{build_ssh, ssh_index, SshSpec};
