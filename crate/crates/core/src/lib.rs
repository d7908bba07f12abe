//! Quons: operators obeying the q-mutation relation `B B† − q B† B = 1`.
//!
//! The crate provides
//!
//! * [`algebra`]: q-numbers and truncated Fock-space matrices for `B`, `B†`, `h1 = B†B`;
//! * [`position`]: an exact position-space realization of the eigenfunctions
//!   as frequency polynomials over a Gaussian envelope;
//! * [`coherent`] and [`gazeau_klauder`]: the two coherent-state families;
//! * [`intertwining`]: intertwining-operator constructions of almost-isospectral
//!   Hamiltonians;
//! * [`moments`]: Gauss measures solving the truncated moment problems behind
//!   the resolutions of the identity;
//! * [`verify`]: the named invariant suite behind `quon verify`.

pub mod algebra;
pub mod coherent;
pub mod error;
pub mod gazeau_klauder;
pub mod intertwining;
pub mod moments;
pub mod position;
pub mod qexp;
pub mod verify;

pub use algebra::{
    annihilator, beta_coeff, creator, hamiltonian_h1, q_factorial, q_number, qmutator_residual,
    quadratures, FockOperator, QuonParams, SpectralData, C64,
};
pub use coherent::NonlinearCS;
pub use error::{QuonError, Result};
pub use gazeau_klauder::GKState;
pub use intertwining::{IntertwinePair, PowerIntertwiner};
pub use moments::{DiscreteMeasure, MomentSpec};
pub use position::{RepParams, WavePolynomial};
pub use qexp::{q_exponential, radius};
