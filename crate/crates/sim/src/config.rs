//! JSON run configuration.
//!
//! The document is written in the units the model is usually described in
//! (km, km/h, kbits, MHz, Mbps, Gcycles/s, ms). Every field is optional;
//! unset fields take the defaults of the selected profile. Conversion to the
//! SI units used by [`SimulationPlan`] happens here and nowhere else.
//!
//! ```json
//! {
//!   "profile": "figure-calibrated",
//!   "scenario": { "vruCount": 100, "vehicleIntensityPerM": 0.01 },
//!   "radio": { "clusterSize": 5 },
//!   "network": { "tnCnMs": [35, 55] },
//!   "engine": { "seed": 2018, "replications": 200, "periodsPerReplication": 10 }
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::Deserialize;

use cv2x_mec::channel::PathlossModel;
use cv2x_mec::engine::{Profile, SimulationPlan};
use cv2x_mec::geometry::Point;
use cv2x_mec::latency::TnCnDistribution;
use cv2x_mec::scenario::SpeedRange;

use crate::error::{ConfigError, Violation};

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct ConfigDocument {
    pub profile: Option<String>,
    pub scenario: ScenarioSection,
    pub traffic: TrafficSection,
    pub channel: ChannelSection,
    pub radio: RadioSection,
    pub network: NetworkSection,
    pub engine: EngineSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct ScenarioSection {
    pub lane_length_km: Option<f64>,
    pub lane_width_m: Option<f64>,
    #[serde(rename = "enbXM")]
    pub enb_x_m: Option<f64>,
    pub enb_lateral_offset_m: Option<f64>,
    pub speed_kmh: Option<[f64; 2]>,
    pub inter_vehicle_distance_m: Option<f64>,
    pub vehicle_intensity_per_m: Option<f64>,
    pub vru_count: Option<usize>,
    pub vru_strip_m: Option<[f64; 2]>,
    pub mobility: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct TrafficSection {
    pub period_ms: Option<f64>,
    pub offset_bins: Option<u32>,
    pub packet_size_kbits: Option<[f64; 2]>,
    pub compute_cycles_per_bit: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct ChannelSection {
    pub frequency_ghz: Option<f64>,
    pub enb_height_m: Option<f64>,
    pub vru_height_m: Option<f64>,
    pub vehicle_height_m: Option<f64>,
    pub vru_tx_power_dbm: Option<f64>,
    pub enb_tx_power_dbm: Option<f64>,
    pub shadowing_std_db: Option<f64>,
    pub fast_fading_std_db: Option<f64>,
    pub thermal_noise_dbm: Option<f64>,
    pub additional_losses_db: Option<f64>,
    pub pathloss_exponent: Option<f64>,
    /// `"winner-plus"` (default) or `"log-distance"`.
    pub pathloss_model: Option<String>,
    pub log_distance_offset_db: Option<f64>,
    pub calibration_loss_db: Option<f64>,
    pub dl_power_split: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct RadioSection {
    pub bandwidth_mhz: Option<f64>,
    pub prb_bandwidth_khz: Option<f64>,
    pub cluster_size: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct NetworkSection {
    pub backhaul_mbps: Option<f64>,
    pub server_gcycles_per_sec: Option<f64>,
    /// Defaults to `serverGcyclesPerSec`.
    pub mec_server_gcycles_per_sec: Option<f64>,
    /// One-way TN+CN delay range, uniform.
    pub tn_cn_ms: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct EngineSection {
    pub seed: Option<u64>,
    pub replications: Option<u64>,
    pub periods_per_replication: Option<u64>,
}

/// Command-line values that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub profile: Option<String>,
    pub seed: Option<u64>,
    pub replications: Option<u64>,
}

fn set<T: Copy>(dst: &mut T, src: Option<T>) {
    if let Some(v) = src {
        *dst = v;
    }
}

impl ConfigDocument {
    pub fn into_plan(self, overrides: &ConfigOverrides) -> Result<SimulationPlan, ConfigError> {
        let mut problems = Vec::new();

        let profile_name = overrides.profile.clone().or(self.profile.clone());
        let profile = match profile_name.as_deref() {
            None => Profile::default(),
            Some(name) => Profile::from_name(name).unwrap_or_else(|| {
                problems.push(Violation {
                    path: "profile".into(),
                    message: format!(
                        "unknown profile `{name}` (expected `figure-calibrated` or `table-literal`)"
                    ),
                });
                Profile::default()
            }),
        };
        let mut plan = SimulationPlan::for_profile(profile);

        let s = &self.scenario;
        let sc = &mut plan.scenario;
        set(
            &mut sc.geometry.lane_length,
            s.lane_length_km.map(|km| km * 1e3),
        );
        set(&mut sc.geometry.lane_width, s.lane_width_m);
        let enb = sc.geometry.enb_position;
        sc.geometry.enb_position = Point::new(
            s.enb_x_m.unwrap_or(enb.x),
            s.enb_lateral_offset_m
                .map(|off| sc.geometry.vru_lateral_offset + off)
                .unwrap_or(enb.y),
        );
        if let Some([lo, hi]) = s.speed_kmh {
            sc.speeds = SpeedRange::from_kmh(lo, hi);
        }
        set(&mut sc.hard_core.distance, s.inter_vehicle_distance_m);
        set(&mut sc.hard_core.intensity, s.vehicle_intensity_per_m);
        set(&mut sc.vru_count, s.vru_count);
        set(&mut sc.vru_strip, s.vru_strip_m.map(|[a, b]| (a, b)));
        set(&mut sc.mobility, s.mobility);

        let t = &self.traffic;
        let tr = &mut plan.traffic;
        set(&mut tr.period, t.period_ms.map(|ms| ms / 1e3));
        set(&mut tr.offset_bins, t.offset_bins);
        set(
            &mut tr.size_bits,
            t.packet_size_kbits.map(|[a, b]| (a * 1e3, b * 1e3)),
        );
        set(
            &mut tr.compute_density,
            t.compute_cycles_per_bit.map(|[a, b]| (a, b)),
        );

        let c = &self.channel;
        let ch = &mut plan.channel;
        set(&mut ch.carrier_ghz, c.frequency_ghz);
        set(&mut ch.heights.enb, c.enb_height_m);
        set(&mut ch.heights.vru, c.vru_height_m);
        set(&mut ch.heights.vehicle, c.vehicle_height_m);
        set(&mut ch.vru_tx_power_dbm, c.vru_tx_power_dbm);
        set(&mut ch.enb_tx_power_dbm, c.enb_tx_power_dbm);
        set(&mut ch.shadow_std_db, c.shadowing_std_db);
        set(&mut ch.fast_fade_std_db, c.fast_fading_std_db);
        set(&mut ch.noise_power_dbm, c.thermal_noise_dbm);
        set(&mut ch.additional_losses_db, c.additional_losses_db);
        set(&mut ch.pathloss_exponent, c.pathloss_exponent);
        set(&mut ch.calibration_loss_db, c.calibration_loss_db);
        set(&mut ch.dl_power_split, c.dl_power_split);
        match c.pathloss_model.as_deref() {
            None | Some("winner-plus") => ch.model = PathlossModel::WinnerPlus,
            Some("log-distance") => {
                ch.model = PathlossModel::LogDistance {
                    exponent: ch.pathloss_exponent,
                    offset_db: c.log_distance_offset_db.unwrap_or(0.0),
                }
            }
            Some(other) => problems.push(Violation {
                path: "channel.pathlossModel".into(),
                message: format!(
                    "unknown model `{other}` (expected `winner-plus` or `log-distance`)"
                ),
            }),
        }

        let r = &self.radio;
        set(
            &mut plan.radio.pool.bandwidth_hz,
            r.bandwidth_mhz.map(|x| x * 1e6),
        );
        set(
            &mut plan.radio.pool.prb_bandwidth_hz,
            r.prb_bandwidth_khz.map(|x| x * 1e3),
        );
        set(&mut plan.radio.cluster_size, r.cluster_size);

        let n = &self.network;
        let net = &mut plan.network;
        set(&mut net.backhaul_capacity, n.backhaul_mbps.map(|x| x * 1e6));
        if let Some(g) = n.server_gcycles_per_sec {
            net.cloud_server_capacity = g * 1e9;
            net.mec_server_capacity = g * 1e9;
        }
        set(
            &mut net.mec_server_capacity,
            n.mec_server_gcycles_per_sec.map(|g| g * 1e9),
        );
        set(
            &mut net.tn_cn,
            n.tn_cn_ms.map(|[a, b]| TnCnDistribution::uniform_ms(a, b)),
        );

        let e = &self.engine;
        set(&mut plan.master_seed, e.seed);
        set(&mut plan.replications, e.replications);
        set(&mut plan.periods, e.periods_per_replication);

        set(&mut plan.master_seed, overrides.seed);
        set(&mut plan.replications, overrides.replications);

        problems.extend(plan.violations().iter().map(Violation::from));
        if problems.is_empty() {
            Ok(plan)
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }
}

/// Parses and validates a config document. `origin` names the source in
/// error messages. Blank input is the empty document.
pub fn parse_config(
    text: &str,
    origin: &str,
    overrides: &ConfigOverrides,
) -> Result<SimulationPlan, ConfigError> {
    let doc: ConfigDocument = if text.trim().is_empty() {
        ConfigDocument::default()
    } else {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?
    };
    doc.into_plan(overrides)
}

/// Reads, parses and validates the config file at `path`.
pub fn load_config(path: &Path) -> Result<SimulationPlan, ConfigError> {
    load_config_with(path, &ConfigOverrides::default())
}

pub fn load_config_with(
    path: &Path,
    overrides: &ConfigOverrides,
) -> Result<SimulationPlan, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, &path.display().to_string(), overrides)
}
