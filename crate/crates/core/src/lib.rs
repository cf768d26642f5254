//! Downlink link budgets, two-tier user association and micro-cell capacity
//! for cellular networks with and without an intelligent reflecting surface.
//!
//! The crate is `no_std` and allocation-free: every routine is a pure
//! function of its arguments. IO, configuration files and the CLI live in
//! the `irs-hetnet-sim` companion crate.
//!
//! Units are strict SI throughout (meters, hertz, watts, radians, linear
//! gains). Decibels only appear through [`Decibel`].

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod association;
pub mod error;
pub mod linkbudget;
pub mod oracle;
pub mod quadrature;
pub mod radio;

pub use association::{
    association_probability, cell_capacity, mean_association, AssociationInputs, CapacityResult,
    CellGeometry, Model, PanelLayout, TierDensities, LOAD_FACTOR,
};
pub use error::{Error, Result};
pub use linkbudget::{
    conventional_rx_power, irs_rx_power, scattering_gain, ElementSize, IrsPanel, RxDevice, TxNode,
};
pub use oracle::{simulate_association, OracleConfig, OracleEstimate, Tally};
pub use quadrature::DiskQuadrature;
pub use radio::{db_to_linear, distance3, wavelength, Carrier, Decibel, Point3, SPEED_OF_LIGHT};
