//! Port identifier newtypes.
//!
//! Antenna ports (the feed ports of the radiating element) and SDR transmit
//! channels are both small integers, and mixing them up is the classic
//! wiring mistake. Two distinct types keep them apart at compile time.

use std::fmt;

/// A feed port of the antenna (1-based in all shipped data).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AntennaPort(pub u32);

/// A transmit channel of the software-defined radio (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SdrPort(pub u32);

impl fmt::Display for AntennaPort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for SdrPort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for AntennaPort {
    fn from(v: u32) -> Self {
        AntennaPort(v)
    }
}

impl From<u32> for SdrPort {
    fn from(v: u32) -> Self {
        SdrPort(v)
    }
}
