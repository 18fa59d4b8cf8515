//! Hierarchical, counter-based RNG substreams.
//!
//! Every random draw in a run is taken from a stream addressed by
//! `(master seed, purpose, replication, period, index)`. Streams never share
//! state, so the order in which replications, periods or VRUs are evaluated
//! (and the number of workers) has no effect on the values drawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator handed to every sampling routine.
pub type SimRng = ChaCha8Rng;

/// What a stream is used for. The discriminant is part of the stream address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    /// Vehicle positions and speeds; `index` is the lane.
    Vehicles,
    /// VRU placement.
    Vrus,
    /// Packet size, offset bin and compute density; `index` is the VRU.
    Traffic,
    /// Shadowing and fading on the uplink; `index` is the VRU.
    UplinkFading,
    /// Shadowing and fading on the downlink multicast; `index` is the VRU.
    DownlinkFading,
    /// Transport + core network delay; `index` is the VRU.
    TransportCore,
}

impl Purpose {
    const fn tag(self) -> u64 {
        match self {
            Purpose::Vehicles => 1,
            Purpose::Vrus => 2,
            Purpose::Traffic => 3,
            Purpose::UplinkFading => 4,
            Purpose::DownlinkFading => 5,
            Purpose::TransportCore => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    master_seed: u64,
}

impl Streams {
    pub const fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub const fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream(&self, purpose: Purpose, replication: u64, period: u64, index: u64) -> SimRng {
        let mut h = splitmix64(self.master_seed ^ 0x5EED_CA11_AB1E_0000);
        for word in [purpose.tag(), replication, period, index] {
            h = splitmix64(h ^ word);
        }
        let mut seed = [0u8; 32];
        for (i, chunk) in seed.chunks_exact_mut(8).enumerate() {
            chunk.copy_from_slice(&splitmix64(h.wrapping_add(i as u64)).to_le_bytes());
        }
        SimRng::from_seed(seed)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw on `[lo, hi)`; returns `lo` when the interval is degenerate.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn same_address_same_stream() {
        let s = Streams::new(42);
        let a = s.stream(Purpose::Traffic, 3, 1, 7).next_u64();
        let b = s.stream(Purpose::Traffic, 3, 1, 7).next_u64();
        assert_eq!(a, b);
    }

    #[test]
    fn every_address_component_matters() {
        let s = Streams::new(42);
        let base = s.stream(Purpose::Traffic, 3, 1, 7).next_u64();
        assert_ne!(base, s.stream(Purpose::Vrus, 3, 1, 7).next_u64());
        assert_ne!(base, s.stream(Purpose::Traffic, 4, 1, 7).next_u64());
        assert_ne!(base, s.stream(Purpose::Traffic, 3, 2, 7).next_u64());
        assert_ne!(base, s.stream(Purpose::Traffic, 3, 1, 8).next_u64());
        assert_ne!(
            base,
            Streams::new(43)
                .stream(Purpose::Traffic, 3, 1, 7)
                .next_u64()
        );
    }

    #[test]
    fn degenerate_uniform() {
        let mut rng = Streams::new(1).stream(Purpose::Vrus, 0, 0, 0);
        assert_eq!(uniform(&mut rng, 5.0, 5.0), 5.0);
    }
}
