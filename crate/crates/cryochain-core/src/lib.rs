//! Core math for cryogenic microwave readout chains.
//!
//! The crate is split by concern:
//!
//! * [`rfnet`]: two-port scattering algebra on shared frequency grids and
//!   cascaded gain / noise-temperature budgets.
//! * [`noisecal`]: Y-factor noise measurements, lossy-cable thermal models,
//!   and de-embedding of a device under test from a measured system.
//! * [`readout`]: a one-pole dispersive readout model, counter-based IQ shot
//!   synthesis, and state-assignment statistics.
//! * [`budget`]: refrigerator power planning for multiplexed readout lines.
//!
//! Everything here is pure computation over `f64`; file formats and any IO
//! live in the companion `cryochain` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod budget;
pub mod noisecal;
pub mod readout;
pub mod rfnet;
