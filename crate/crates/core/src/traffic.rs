//! Periodic CAM workload: one packet per VRU per period, with a random
//! transmission offset bin, size and compute density.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::rng::uniform;
use crate::scenario::Vru;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficParams {
    /// CAM period, seconds.
    pub period: f64,
    /// Number of distinct transmission offsets within a period.
    pub offset_bins: u32,
    /// Packet size range, bits.
    pub size_bits: (f64, f64),
    /// Processing demand range, cycles/bit.
    pub compute_density: (f64, f64),
}

impl Default for TrafficParams {
    fn default() -> Self {
        Self {
            period: 0.1,
            offset_bins: 5,
            size_bits: (8_000.0, 12_000.0),
            compute_density: (100.0, 300.0),
        }
    }
}

impl TrafficParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::invalid("traffic.periodMs", "must be > 0"));
        }
        if self.offset_bins == 0 {
            return Err(Error::invalid("traffic.offsetBins", "must be >= 1"));
        }
        let (lo, hi) = self.size_bits;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::invalid(
                "traffic.packetSizeKbits",
                "need 0 < min <= max",
            ));
        }
        let (lo, hi) = self.compute_density;
        if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::invalid(
                "traffic.computeCyclesPerBit",
                "need 0 <= min <= max",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CamJob {
    pub vru_id: u32,
    pub size_bits: f64,
    pub offset_bin: u32,
    /// cycles/bit
    pub compute_density: f64,
    pub period_index: u64,
}

impl CamJob {
    /// Draws one VRU's packet for a period: offset bin, then size, then
    /// compute density.
    pub fn draw<R: Rng + ?Sized>(
        vru_id: u32,
        params: &TrafficParams,
        period_index: u64,
        rng: &mut R,
    ) -> Self {
        let offset_bin = rng.random_range(0..params.offset_bins);
        let size_bits = uniform(rng, params.size_bits.0, params.size_bits.1);
        let compute_density = uniform(rng, params.compute_density.0, params.compute_density.1);
        Self {
            vru_id,
            size_bits,
            offset_bin,
            compute_density,
            period_index,
        }
    }
}

/// One job per VRU, all drawn from a single stream.
pub fn generate_period<R: Rng + ?Sized>(
    vrus: &[Vru],
    params: &TrafficParams,
    period_index: u64,
    rng: &mut R,
) -> Vec<CamJob> {
    vrus.iter()
        .map(|v| CamJob::draw(v.id, params, period_index, rng))
        .collect()
}

/// Like [`generate_period`] but each VRU draws from its own stream.
pub fn generate_period_with<R, F>(
    vrus: &[Vru],
    params: &TrafficParams,
    period_index: u64,
    mut stream_for: F,
) -> Vec<CamJob>
where
    R: Rng,
    F: FnMut(&Vru) -> R,
{
    vrus.iter()
        .map(|v| CamJob::draw(v.id, params, period_index, &mut stream_for(v)))
        .collect()
}

/// Number of jobs in each offset bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinOccupancy {
    counts: Vec<usize>,
}

impl BinOccupancy {
    pub fn new(jobs: &[CamJob], offset_bins: u32) -> Self {
        let mut counts = vec![0usize; offset_bins as usize];
        for j in jobs {
            counts[j.offset_bin as usize] += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// N̂ for `job`: jobs sharing its bin, itself included.
    pub fn concurrent(&self, job: &CamJob) -> usize {
        self.counts[job.offset_bin as usize]
    }
}

/// N̂_k: how many jobs of the period share VRU `vru_id`'s offset bin,
/// including its own.
pub fn concurrent_count(jobs: &[CamJob], vru_id: u32) -> Result<usize> {
    let me = jobs
        .iter()
        .find(|j| j.vru_id == vru_id)
        .ok_or(Error::UnknownVru(vru_id))?;
    Ok(jobs
        .iter()
        .filter(|j| j.offset_bin == me.offset_bin)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::rng::{Purpose, Streams};

    fn job(vru_id: u32, bin: u32) -> CamJob {
        CamJob {
            vru_id,
            size_bits: 10_000.0,
            offset_bin: bin,
            compute_density: 200.0,
            period_index: 0,
        }
    }

    fn vrus(n: usize) -> Vec<Vru> {
        (0..n)
            .map(|i| Vru {
                id: i as u32,
                position: Point::new(1500.0, 0.0),
            })
            .collect()
    }

    #[test]
    fn concurrent_count_examples() {
        let jobs: Vec<_> = [3, 3, 7, 3, 9]
            .iter()
            .enumerate()
            .map(|(i, &b)| job(i as u32, b))
            .collect();
        assert_eq!(concurrent_count(&jobs, 0).unwrap(), 3);
        assert_eq!(concurrent_count(&jobs, 2).unwrap(), 1);
        assert_eq!(concurrent_count(&jobs, 99), Err(Error::UnknownVru(99)));

        let distinct: Vec<_> = (0..10).map(|i| job(i, i)).collect();
        assert!((0..10).all(|k| concurrent_count(&distinct, k).unwrap() == 1));

        let same: Vec<_> = (0..100).map(|i| job(i, 0)).collect();
        assert_eq!(concurrent_count(&same, 42).unwrap(), 100);
    }

    #[test]
    fn single_bin_single_vru() {
        let params = TrafficParams {
            offset_bins: 1,
            ..Default::default()
        };
        let mut rng = Streams::new(1).stream(Purpose::Traffic, 0, 0, 0);
        let jobs = generate_period(&vrus(1), &params, 0, &mut rng);
        assert_eq!(jobs.len(), 1);
        assert_eq!(jobs[0].offset_bin, 0);
    }

    #[test]
    fn degenerate_size_range() {
        let params = TrafficParams {
            size_bits: (10_000.0, 10_000.0),
            ..Default::default()
        };
        let mut rng = Streams::new(1).stream(Purpose::Traffic, 0, 0, 0);
        let jobs = generate_period(&vrus(50), &params, 3, &mut rng);
        assert!(jobs
            .iter()
            .all(|j| j.size_bits == 10_000.0 && j.period_index == 3));
    }

    #[test]
    fn draws_stay_in_range() {
        let params = TrafficParams::default();
        let streams = Streams::new(9);
        let jobs = generate_period_with(&vrus(500), &params, 0, |v| {
            streams.stream(Purpose::Traffic, 0, 0, v.id as u64)
        });
        assert_eq!(jobs.len(), 500);
        for j in &jobs {
            assert!(j.offset_bin < 5);
            assert!((8_000.0..=12_000.0).contains(&j.size_bits));
            assert!((100.0..=300.0).contains(&j.compute_density));
        }
        let occ = BinOccupancy::new(&jobs, 5);
        assert_eq!(occ.counts().iter().sum::<usize>(), 500);
    }

    #[test]
    fn mean_bin_occupancy() {
        // 100 VRUs over 5 bins: E[occupancy] = 20 per bin
        let params = TrafficParams::default();
        let streams = Streams::new(3);
        let mut totals = [0usize; 5];
        let periods = 2000;
        for p in 0..periods {
            let mut rng = streams.stream(Purpose::Traffic, 0, p, 0);
            let jobs = generate_period(&vrus(100), &params, p, &mut rng);
            for (t, c) in totals.iter_mut().zip(BinOccupancy::new(&jobs, 5).counts()) {
                *t += c;
            }
        }
        for t in totals {
            let mean = t as f64 / periods as f64;
            assert!((mean - 20.0).abs() < 0.3, "mean occupancy {mean}");
        }
    }

    #[test]
    fn validation() {
        assert!(TrafficParams::default().validate().is_ok());
        let bad = TrafficParams {
            offset_bins: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
