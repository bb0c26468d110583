//! Collective-spin metrology: Dicke-basis simulation, Fisher information and
//! Cramér-Rao bounds.

pub mod bounds;
pub mod dicke;
pub mod fisher;
pub mod protocols;

pub use bounds::{crb_linear, crb_nonlinear, LinearBounds, NonlinearBound, SpectrumBound};
pub use dicke::{
    evolve, expectation, generator_moments, prepare_product, rotate, single_qubit_purity, Axis, CollectiveHamiltonian,
    DickeState, Moments, Observable,
};
pub use fisher::{classical_fisher, qfi_pure, FisherEstimate};
pub use protocols::{
    cat_signal, cat_uncertainty, enhanced_uncertainty, product_nonlinear_protocol, ramsey_signal, ramsey_uncertainty,
    scaling_sweep, Protocol, ProtocolKind, Readout, SensitivityResult, SweepRow, TimePoint,
};
