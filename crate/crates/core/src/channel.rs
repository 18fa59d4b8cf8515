//! Link budget: WINNER+ style pathloss, log-normal shadowing and fast fading,
//! fixed losses, and the resulting SNR per link.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::math;
use crate::{Error, Result};

/// Offset subtracted from actual antenna heights to get effective heights.
pub const HEIGHT_OFFSET: f64 = 1.0;

/// Distances are clamped to at least this many meters.
pub const MIN_DISTANCE: f64 = 1.0;

/// WINNER+ pathloss in dB.
///
/// `PL = 22.7 log10(d) − 17.3 log10(h_enb − 1) − 17.3 log10(h_ue − 1)
///      + 2.7 log10(fc) − 7.56`, with `d` in meters (clamped to ≥ 1 m),
/// heights in meters and `fc` in GHz.
pub fn pathloss_db(distance: f64, h_enb: f64, h_ue: f64, carrier_ghz: f64) -> Result<f64> {
    let eff_enb = h_enb - HEIGHT_OFFSET;
    let eff_ue = h_ue - HEIGHT_OFFSET;
    if !(eff_enb > 0.0) {
        return Err(Error::invalid(
            "channel.enbHeightM",
            "effective eNB height (h - 1 m) must be > 0",
        ));
    }
    if !(eff_ue > 0.0) {
        return Err(Error::invalid(
            "channel.ueHeightM",
            "effective UE height (h - 1 m) must be > 0",
        ));
    }
    if !(carrier_ghz > 0.0) {
        return Err(Error::invalid("channel.frequencyGhz", "must be > 0"));
    }
    let d = distance.max(MIN_DISTANCE);
    Ok(
        22.7 * math::log10(d) - 17.3 * math::log10(eff_enb) - 17.3 * math::log10(eff_ue)
            + 2.7 * math::log10(carrier_ghz)
            - 7.56,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathlossModel {
    /// [`pathloss_db`].
    WinnerPlus,
    /// `10 · exponent · log10(d) + offset_db`, for sensitivity studies.
    LogDistance { exponent: f64, offset_db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaHeights {
    pub enb: f64,
    pub vru: f64,
    pub vehicle: f64,
}

impl Default for AntennaHeights {
    fn default() -> Self {
        Self {
            enb: 10.0,
            vru: 1.5,
            vehicle: 1.5,
        }
    }
}

/// Everything needed to turn a distance into an SNR for one link direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub carrier_ghz: f64,
    pub h_enb: f64,
    pub h_ue: f64,
    pub shadow_std_db: f64,
    pub fast_fade_std_db: f64,
    pub additional_losses_db: f64,
    /// Extra fixed loss used to calibrate absolute SNR levels; 0 disables it.
    pub calibration_loss_db: f64,
    /// Total noise power per link, independent of allocated bandwidth.
    pub noise_power_dbm: f64,
    pub model: PathlossModel,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        // height/frequency checks live in pathloss_db
        pathloss_db(MIN_DISTANCE, self.h_enb, self.h_ue, self.carrier_ghz)?;
        if !(self.shadow_std_db >= 0.0) {
            return Err(Error::invalid("channel.shadowingStdDb", "must be >= 0"));
        }
        if !(self.fast_fade_std_db >= 0.0) {
            return Err(Error::invalid("channel.fastFadingStdDb", "must be >= 0"));
        }
        Ok(())
    }

    pub fn with_tx_power(mut self, tx_power_dbm: f64) -> Self {
        self.tx_power_dbm = tx_power_dbm;
        self
    }

    pub fn pathloss_db(&self, distance: f64) -> Result<f64> {
        match self.model {
            PathlossModel::WinnerPlus => {
                pathloss_db(distance, self.h_enb, self.h_ue, self.carrier_ghz)
            }
            PathlossModel::LogDistance {
                exponent,
                offset_db,
            } => Ok(10.0 * exponent * math::log10(distance.max(MIN_DISTANCE)) + offset_db),
        }
    }

    /// SNR with shadowing and fading at their zero mean.
    pub fn mean_snr_db(&self, distance: f64) -> Result<f64> {
        Ok(self.tx_power_dbm
            - self.pathloss_db(distance)?
            - self.additional_losses_db
            - self.calibration_loss_db
            - self.noise_power_dbm)
    }

    /// One SNR draw: fresh Gaussian (dB) shadowing, then fast fading.
    pub fn sample_snr_db<R: Rng + ?Sized>(&self, distance: f64, rng: &mut R) -> Result<f64> {
        let shadow: f64 = rng.sample::<f64, _>(StandardNormal) * self.shadow_std_db;
        let fade: f64 = rng.sample::<f64, _>(StandardNormal) * self.fast_fade_std_db;
        Ok(self.mean_snr_db(distance)? - shadow - fade)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, Streams};

    const TOL: f64 = 1e-9;

    fn rel_eq(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL * b.abs().max(1.0)
    }

    fn budget() -> LinkBudget {
        LinkBudget {
            tx_power_dbm: 23.0,
            carrier_ghz: 5.9,
            h_enb: 10.0,
            h_ue: 1.5,
            shadow_std_db: 0.0,
            fast_fade_std_db: 0.0,
            additional_losses_db: 15.0,
            calibration_loss_db: 0.0,
            noise_power_dbm: -110.0,
            model: PathlossModel::WinnerPlus,
        }
    }

    #[test]
    fn pathloss_worked_values() {
        // hand-evaluated
        let pl = |d| pathloss_db(d, 10.0, 1.5, 5.9).unwrap();
        assert!(rel_eq(pl(1000.0), 51.320_723_943_120_335));
        assert!(rel_eq(pl(1.0), -16.779_276_056_879_656));
        assert!(rel_eq(pl(100.0), 28.620_723_943_120_343));
    }

    #[test]
    fn pathloss_clamps_short_distances() {
        let a = pathloss_db(0.0, 10.0, 1.5, 5.9).unwrap();
        let b = pathloss_db(1.0, 10.0, 1.5, 5.9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pathloss_rejects_low_antennas() {
        assert!(pathloss_db(10.0, 1.0, 1.5, 5.9).is_err());
        assert!(pathloss_db(10.0, 10.0, 0.9, 5.9).is_err());
    }

    #[test]
    fn deterministic_snr() {
        let b = budget();
        let mut rng = Streams::new(1).stream(Purpose::UplinkFading, 0, 0, 0);
        let snr = b.sample_snr_db(1000.0, &mut rng).unwrap();
        assert!(rel_eq(snr, 66.679_276_056_879_67));

        let lower = b
            .with_tx_power(13.0)
            .sample_snr_db(1000.0, &mut rng)
            .unwrap();
        assert!((snr - lower - 10.0).abs() < 1e-12);
    }

    #[test]
    fn fading_is_zero_mean() {
        let b = LinkBudget {
            shadow_std_db: 3.0,
            fast_fade_std_db: 4.0,
            ..budget()
        };
        let mut rng = Streams::new(2).stream(Purpose::UplinkFading, 0, 0, 0);
        let n = 100_000;
        let mean = (0..n)
            .map(|_| b.sample_snr_db(1000.0, &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!(
            (mean - b.mean_snr_db(1000.0).unwrap()).abs() < 0.1,
            "{mean}"
        );
    }

    #[test]
    fn log_distance_model() {
        let b = LinkBudget {
            model: PathlossModel::LogDistance {
                exponent: 3.0,
                offset_db: 40.0,
            },
            ..budget()
        };
        assert!(rel_eq(b.pathloss_db(100.0).unwrap(), 100.0));
    }

    #[test]
    fn calibration_loss_lowers_snr() {
        let b = budget();
        let c = LinkBudget {
            calibration_loss_db: 70.0,
            ..b
        };
        let d = b.mean_snr_db(200.0).unwrap() - c.mean_snr_db(200.0).unwrap();
        assert!((d - 70.0).abs() < 1e-12);
    }
}
