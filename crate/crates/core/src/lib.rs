//! Numerical toolkit for the computable objects behind the -A·N^{7/5}
//! ground-state law of the two-component charged Bose gas: the Foldy
//! constant I₀ and its cutoff perturbation, Dyson's variational constant A
//! with two independent solvers, Bogolubov-type quadratic-Hamiltonian
//! bounds with a truncated-Fock oracle, the lattice/trilinear energy
//! identity with its inequality chains, windowed localization of Hermitean
//! matrices, Yukawa/sliding positivity constructions, and the small
//! appendix-level operator and quadrature identities.

pub mod acceptance;
pub mod bogolubov;
pub(crate) mod eigen;
pub mod fockcheck;
pub mod lattice;
pub mod matloc;
pub mod meanfield;
pub mod potentials;
pub mod quad;
pub mod report;
pub mod scalars;
