//! Radio access: PRB pool, equal-share scheduling, uplink and downlink
//! multicast latency, and VRU-centric vehicle clustering.
//!
//! Allocation is fluid: PRB counts are fractional. A rate is
//! `prbs · prb_bandwidth · log2(1 + SNR)` in bits/second.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::math;
use crate::scenario::{Vehicle, Vru};
use crate::traffic::{BinOccupancy, CamJob};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrbPool {
    pub bandwidth_hz: f64,
    pub prb_bandwidth_hz: f64,
}

impl Default for PrbPool {
    fn default() -> Self {
        Self {
            bandwidth_hz: 9e6,
            prb_bandwidth_hz: 180e3,
        }
    }
}

impl PrbPool {
    pub fn total_prbs(&self) -> f64 {
        // guard against 9e6 / 180e3 landing a hair under an integer
        libm::floor(self.bandwidth_hz / self.prb_bandwidth_hz + 1e-9)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.prb_bandwidth_hz > 0.0) {
            return Err(Error::invalid("radio.prbBandwidthKhz", "must be > 0"));
        }
        if !(self.total_prbs() >= 1.0) {
            return Err(Error::invalid(
                "radio.bandwidthMhz",
                "bandwidth must hold at least one PRB",
            ));
        }
        Ok(())
    }

    /// Achievable rate in bits/second over `prbs` PRBs at `snr_db`.
    pub fn rate_bps(&self, prbs: f64, snr_db: f64) -> Result<f64> {
        let rate = prbs * self.prb_bandwidth_hz * math::log2_1p(math::db_to_linear(snr_db));
        if rate > 0.0 && rate.is_finite() {
            Ok(rate)
        } else {
            Err(Error::UnreachableLink { prbs, snr_db })
        }
    }
}

/// A vehicle chosen for a VRU's downlink multicast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterMember {
    /// Index into the scenario's vehicle list.
    pub vehicle: usize,
    /// Distance to the VRU, meters.
    pub distance: f64,
}

/// The `M` vehicles closest to a VRU, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleCluster {
    pub vru_id: u32,
    pub members: Vec<ClusterMember>,
}

impl VehicleCluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Picks the `m` vehicles nearest to `vru` (all of them if there are fewer).
/// Ties are broken by lower x-coordinate, then lower lane index.
pub fn select_cluster(vru: &Vru, vehicles: &[Vehicle], m: usize) -> Result<VehicleCluster> {
    if vehicles.is_empty() {
        return Err(Error::NoVehicles);
    }
    if m == 0 {
        return Err(Error::invalid("radio.clusterSize", "must be >= 1"));
    }
    let mut cands: Vec<ClusterMember> = vehicles
        .iter()
        .enumerate()
        .map(|(i, v)| ClusterMember {
            vehicle: i,
            distance: vru.position.distance(&v.position),
        })
        .collect();
    let order = |a: &ClusterMember, b: &ClusterMember| -> Ordering {
        let (va, vb) = (&vehicles[a.vehicle], &vehicles[b.vehicle]);
        a.distance
            .total_cmp(&b.distance)
            .then(va.position.x.total_cmp(&vb.position.x))
            .then(va.lane_index.cmp(&vb.lane_index))
            .then(a.vehicle.cmp(&b.vehicle))
    };
    if m < cands.len() {
        cands.select_nth_unstable_by(m - 1, order);
        cands.truncate(m);
    }
    cands.sort_unstable_by(order);
    Ok(VehicleCluster {
        vru_id: vru.id,
        members: cands,
    })
}

/// Uplink PRBs for a VRU sharing its offset bin with `concurrent − 1` others.
pub fn ul_share(concurrent: usize, pool: &PrbPool) -> f64 {
    pool.total_prbs() / concurrent as f64
}

/// η_k for every job of one period.
pub fn ul_allocation(jobs: &[CamJob], offset_bins: u32, pool: &PrbPool) -> BTreeMap<u32, f64> {
    let occ = BinOccupancy::new(jobs, offset_bins);
    jobs.iter()
        .map(|j| (j.vru_id, ul_share(occ.concurrent(j), pool)))
        .collect()
}

/// Time to push the job's packet to the eNB over `prbs` PRBs.
pub fn ul_latency(job: &CamJob, prbs: f64, snr_db: f64, pool: &PrbPool) -> Result<f64> {
    Ok(job.size_bits / pool.rate_bps(prbs, snr_db)?)
}

/// PRBs per vehicle when the pool is split over every member of every
/// cluster served in the same offset bin.
pub fn dl_share(total_members: usize, pool: &PrbPool) -> Result<f64> {
    if total_members == 0 {
        return Err(Error::NoVehicles);
    }
    Ok(pool.total_prbs() / total_members as f64)
}

/// [`dl_share`] for a set of clusters active in one bin.
pub fn dl_allocation(clusters: &[&VehicleCluster], pool: &PrbPool) -> Result<f64> {
    dl_share(clusters.iter().map(|c| c.size()).sum(), pool)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownlinkDelay {
    /// Reception delay of the slowest member, seconds.
    pub latency: f64,
    /// Position within the cluster of the slowest member.
    pub slowest: usize,
}

/// Multicast delay: the time until the slowest cluster member has the
/// packet. `snr_db` yields one SNR per member, in cluster order.
pub fn dl_latency<F>(
    job: &CamJob,
    cluster: &VehicleCluster,
    per_vehicle_prbs: f64,
    mut snr_db: F,
    pool: &PrbPool,
) -> Result<DownlinkDelay>
where
    F: FnMut(&ClusterMember) -> Result<f64>,
{
    if cluster.members.is_empty() {
        return Err(Error::NoVehicles);
    }
    let mut worst = DownlinkDelay {
        latency: f64::NEG_INFINITY,
        slowest: 0,
    };
    for (i, m) in cluster.members.iter().enumerate() {
        let t = job.size_bits / pool.rate_bps(per_vehicle_prbs, snr_db(m)?)?;
        if t > worst.latency {
            worst = DownlinkDelay {
                latency: t,
                slowest: i,
            };
        }
    }
    Ok(worst)
}
