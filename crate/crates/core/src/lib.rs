//! Secrecy wireless information and power transfer.
//!
//! The crate models a hybrid access point (H-AP) that serves an information
//! node (IN) while an untrusted energy receiver (ER) harvests power and may
//! eavesdrop. Energy signals double as artificial noise (AN) against the ER.
//!
//! - [`channel`]: path loss, line-of-sight steering vectors, seeded Rayleigh draws.
//! - [`beamforming`]: MRT and zero-forcing beams, beam/channel coupling.
//! - [`optim`]: grid and golden-section scalar search, Pareto filtering.
//! - [`swipt_siso`], [`swipt_miso`]: downlink secrecy SWIPT with AN.
//! - [`relay`]: wireless-powered helper that harvests, relays and jams.
//! - [`wpcn`]: harvest-then-transmit uplink with cooperative jamming.
//! - [`cli`]: scenario configs, experiment runner and CSV result tables.

pub mod beamforming;
pub mod channel;
pub mod cli;
mod error;
pub mod optim;
pub mod relay;
pub mod swipt_miso;
pub mod swipt_siso;
pub mod wpcn;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use beamforming::{coupling_power, mrt_beam, zf_beam, Beam, BeamPair};
pub use channel::{ChannelVector, NodePlacement, PathLossModel};
pub use optim::{RateEnergyPoint, SearchResult};
pub use swipt_siso::{ReceiverType, SystemParams};
