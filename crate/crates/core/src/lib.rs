//! Entanglement-breaking channel algebra and the cut-and-paste restoration
//! of entanglement transmission.
//!
//! * [`qmath`]: dense complex linear algebra.
//! * [`channels`]: Kraus/superoperator channels, Choi states, EB order.
//! * [`entanglement`]: concurrence, negativity, Werner states.
//! * [`continuous`]: Liouvillians, switched lines, EB lengths.
//! * [`optics`]: the three-interferometer polarization experiment.

// `!(x > 0.0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod continuous;
pub mod entanglement;
pub mod error;
pub mod optics;
pub mod qmath;
pub mod tol;

pub use channels::{
    ad_channel, choi_state, compose, compose_all, cut_and_paste_pair, eb_order, is_eb, pd_channel,
    superop_distance, unitary_channel, ChannelDocument, DensityMatrix, EbOrder, EbVerdict, QuantumChannel,
};
pub use entanglement::{concurrence, negativity, werner_state, Concurrence};
pub use error::{Error, Result};
pub use qmath::{c64, Complex64, ComplexMatrix};
pub use tol::{Tolerances, TOL};
