//! Backhaul, transport/core, execution latency and end-to-end composition
//! for the distant-cloud and MEC architectures.

use rand::Rng;

use crate::rng::uniform;
use crate::{Error, Result};

/// One-way transport + core network delay, drawn once per packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TnCnDistribution {
    /// Uniform on `[min, max]` seconds.
    Uniform { min: f64, max: f64 },
}

impl TnCnDistribution {
    pub fn uniform_ms(min: f64, max: f64) -> Self {
        TnCnDistribution::Uniform {
            min: min / 1e3,
            max: max / 1e3,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            TnCnDistribution::Uniform { min, max } => 0.5 * (min + max),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            TnCnDistribution::Uniform { min, max } => uniform(rng, min, max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TnCnDistribution::Uniform { min, max } => {
                if !(min >= 0.0 && max >= min && max.is_finite()) {
                    return Err(Error::invalid("network.tnCnMs", "need 0 <= min <= max"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// bits/second
    pub backhaul_capacity: f64,
    pub tn_cn: TnCnDistribution,
    /// Processing capacity of the distant cloud server, cycles/second.
    pub cloud_server_capacity: f64,
    /// Processing capacity of the MEC host, cycles/second.
    pub mec_server_capacity: f64,
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.backhaul_capacity > 0.0) {
            return Err(Error::invalid("network.backhaulMbps", "must be > 0"));
        }
        if !(self.cloud_server_capacity > 0.0) {
            return Err(Error::invalid("network.serverGcyclesPerSec", "must be > 0"));
        }
        if !(self.mec_server_capacity > 0.0) {
            return Err(Error::invalid(
                "network.mecServerGcyclesPerSec",
                "must be > 0",
            ));
        }
        self.tn_cn.validate()
    }
}

/// `l · N̂ / C_BH`: the backhaul is shared equally by the packets of one bin.
pub fn backhaul_latency(size_bits: f64, concurrent: usize, capacity_bps: f64) -> f64 {
    size_bits * concurrent as f64 / capacity_bps
}

/// `N̂ · l · β / F`: the server works through the whole bin's packets.
pub fn execution_latency(
    size_bits: f64,
    cycles_per_bit: f64,
    concurrent: usize,
    capacity_hz: f64,
) -> f64 {
    concurrent as f64 * size_bits * cycles_per_bit / capacity_hz
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    /// Processing in a distant cloud behind backhaul, transport and core.
    Cloud,
    /// Processing on a MEC host collocated with the eNB.
    Mec,
}

/// One-way component latencies of a single packet, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LatencyComponents {
    pub ul: f64,
    pub bh: f64,
    pub tn_cn: f64,
    pub exc_cloud: f64,
    pub exc_mec: f64,
    pub dl: f64,
}

/// Cloud: `UL + 2(BH + TN+CN) + Exc + DL`. MEC: `UL + Exc + DL`.
pub fn compose_e2e(c: &LatencyComponents, arch: Architecture) -> f64 {
    match arch {
        Architecture::Cloud => c.ul + 2.0 * (c.bh + c.tn_cn) + c.exc_cloud + c.dl,
        Architecture::Mec => c.ul + c.exc_mec + c.dl,
    }
}

/// Per-packet latency record for both architectures, seconds.
///
/// `t_bh` and `t_tn_cn` only apply to the cloud path; `t_exc` is the
/// cloud-side execution time and `t_exc_mec` the MEC-side one (equal unless
/// the two server capacities are configured differently).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyBreakdown {
    pub vru_id: u32,
    pub period_index: u64,
    pub t_ul: f64,
    pub t_bh: f64,
    pub t_tn_cn: f64,
    pub t_exc: f64,
    pub t_exc_mec: f64,
    pub t_dl: f64,
    pub e2e_cloud: f64,
    pub e2e_mec: f64,
}

impl LatencyBreakdown {
    pub fn compose(vru_id: u32, period_index: u64, c: &LatencyComponents) -> Self {
        Self {
            vru_id,
            period_index,
            t_ul: c.ul,
            t_bh: c.bh,
            t_tn_cn: c.tn_cn,
            t_exc: c.exc_cloud,
            t_exc_mec: c.exc_mec,
            t_dl: c.dl,
            e2e_cloud: compose_e2e(c, Architecture::Cloud),
            e2e_mec: compose_e2e(c, Architecture::Mec),
        }
    }

    pub fn e2e(&self, arch: Architecture) -> f64 {
        match arch {
            Architecture::Cloud => self.e2e_cloud,
            Architecture::Mec => self.e2e_mec,
        }
    }

    /// VRU-to-server delay on the cloud path (no downlink, single network traversal).
    pub fn one_way_cloud(&self) -> f64 {
        self.t_ul + self.t_bh + self.t_tn_cn + self.t_exc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, Streams};

    fn rel_eq(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1e-300)
    }

    #[test]
    fn backhaul_examples() {
        assert!(rel_eq(backhaul_latency(10e3, 2, 10e6), 2e-3));
        assert!(rel_eq(backhaul_latency(10e3, 1, 10e6), 1e-3));
        assert!(rel_eq(
            backhaul_latency(9e3, 6, 10e6),
            2.0 * backhaul_latency(9e3, 3, 10e6)
        ));
    }

    #[test]
    fn execution_examples() {
        assert!(rel_eq(execution_latency(10e3, 200.0, 1, 9e9), 2e-3 / 9.0));
        assert!(rel_eq(execution_latency(10e3, 200.0, 20, 9e9), 4e-2 / 9.0));
        assert_eq!(execution_latency(10e3, 0.0, 20, 9e9), 0.0);
    }

    #[test]
    fn tn_cn_samples() {
        let mut rng = Streams::new(5).stream(Purpose::TransportCore, 0, 0, 0);
        let point = TnCnDistribution::uniform_ms(30.0, 30.0);
        assert_eq!(point.sample(&mut rng), 0.03);

        let n = 100_000;
        for (lo, hi, target) in [(35.0, 55.0, 45e-3), (15.0, 35.0, 25e-3)] {
            let d = TnCnDistribution::uniform_ms(lo, hi);
            let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
            assert!((mean - target).abs() < 0.5e-3, "mean {mean}");
        }
    }

    #[test]
    fn composition_examples() {
        let ms = |x: f64| x / 1e3;
        let c = LatencyComponents {
            ul: ms(1.1),
            bh: ms(1.6),
            tn_cn: ms(45.0),
            exc_cloud: ms(3.6),
            exc_mec: ms(3.6),
            dl: ms(18.3),
        };
        assert!(rel_eq(compose_e2e(&c, Architecture::Cloud), ms(116.2)));
        assert!(rel_eq(compose_e2e(&c, Architecture::Mec), ms(23.0)));

        let b = LatencyBreakdown::compose(0, 0, &c);
        assert!(rel_eq(b.e2e_cloud - b.e2e_mec, 2.0 * (b.t_bh + b.t_tn_cn)));
        assert!(rel_eq(b.one_way_cloud(), ms(51.3)));

        let zero = LatencyComponents::default();
        assert_eq!(compose_e2e(&zero, Architecture::Cloud), 0.0);
        assert_eq!(compose_e2e(&zero, Architecture::Mec), 0.0);
    }
}
