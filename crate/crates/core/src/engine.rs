//! Monte-Carlo orchestration: a simulation plan, the per-replication
//! pipeline and the statistics reduction.
//!
//! A replication samples one scenario and evaluates `periods` CAM periods on
//! it. Results are reduced per replication into an [`AggregateAccumulator`];
//! callers merge those in replication order, which makes the final
//! [`AggregateStats`] independent of how replications were scheduled.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{AntennaHeights, LinkBudget, PathlossModel};
use crate::latency::{
    backhaul_latency, execution_latency, LatencyBreakdown, LatencyComponents, NetworkParams,
    TnCnDistribution,
};
use crate::math;
use crate::radio::{dl_latency, dl_share, select_cluster, ul_latency, ul_share, PrbPool};
use crate::rng::{Purpose, Streams};
use crate::scenario::{
    sample_vehicles, sample_vrus, HardCoreParams, RoadGeometry, Scenario, SpeedRange,
};
use crate::traffic::{generate_period_with, BinOccupancy, TrafficParams};
use crate::{Error, Result};

/// Extra link loss of the figure-calibrated profile, dB.
///
/// Applied to uplink and downlink alike. With it, the downlink latency of the
/// default deployment (N = 100, M = 5, λ = 0.01) lands near 40 ms.
pub const FIGURE_CALIBRATION_LOSS_DB: f64 = 70.5;

/// Named parameter sets that differ in how absolute latencies are calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Profile {
    /// One-way TN+CN ~ U(35, 55) ms, [`FIGURE_CALIBRATION_LOSS_DB`] extra
    /// link loss, and eNB power spread evenly over the PRB pool.
    #[default]
    FigureCalibrated,
    /// TN+CN ~ U(15, 35) ms, no extra loss, full eNB power on every link.
    TableLiteral,
}

impl Profile {
    pub fn tn_cn(self) -> TnCnDistribution {
        match self {
            Profile::FigureCalibrated => TnCnDistribution::uniform_ms(35.0, 55.0),
            Profile::TableLiteral => TnCnDistribution::uniform_ms(15.0, 35.0),
        }
    }

    pub fn calibration_loss_db(self) -> f64 {
        match self {
            Profile::FigureCalibrated => FIGURE_CALIBRATION_LOSS_DB,
            Profile::TableLiteral => 0.0,
        }
    }

    pub fn dl_power_split(self) -> bool {
        matches!(self, Profile::FigureCalibrated)
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::FigureCalibrated => "figure-calibrated",
            Profile::TableLiteral => "table-literal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "figure-calibrated" => Some(Profile::FigureCalibrated),
            "table-literal" => Some(Profile::TableLiteral),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub geometry: RoadGeometry,
    pub hard_core: HardCoreParams,
    pub speeds: SpeedRange,
    pub vru_count: usize,
    /// x-range of VRU placement, meters.
    pub vru_strip: (f64, f64),
    /// Move vehicles by one CAM period between periods.
    pub mobility: bool,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            geometry: RoadGeometry::default(),
            hard_core: HardCoreParams::default(),
            speeds: SpeedRange::default(),
            vru_count: 100,
            vru_strip: (1200.0, 1800.0),
            mobility: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub carrier_ghz: f64,
    pub heights: AntennaHeights,
    pub vru_tx_power_dbm: f64,
    pub enb_tx_power_dbm: f64,
    pub shadow_std_db: f64,
    pub fast_fade_std_db: f64,
    pub noise_power_dbm: f64,
    pub additional_losses_db: f64,
    pub calibration_loss_db: f64,
    /// Only consulted by [`PathlossModel::LogDistance`].
    pub pathloss_exponent: f64,
    pub model: PathlossModel,
    /// Scale the eNB power delivered to each vehicle by its share of the PRB
    /// pool (constant power per PRB) instead of the full transmit power.
    pub dl_power_split: bool,
}

impl ChannelParams {
    pub fn for_profile(profile: Profile) -> Self {
        Self {
            carrier_ghz: 5.9,
            heights: AntennaHeights::default(),
            vru_tx_power_dbm: 23.0,
            enb_tx_power_dbm: 46.0,
            shadow_std_db: 3.0,
            fast_fade_std_db: 4.0,
            noise_power_dbm: -110.0,
            additional_losses_db: 15.0,
            calibration_loss_db: profile.calibration_loss_db(),
            pathloss_exponent: 3.0,
            model: PathlossModel::WinnerPlus,
            dl_power_split: profile.dl_power_split(),
        }
    }

    fn budget(&self, tx_power_dbm: f64, h_ue: f64) -> LinkBudget {
        LinkBudget {
            tx_power_dbm,
            carrier_ghz: self.carrier_ghz,
            h_enb: self.heights.enb,
            h_ue,
            shadow_std_db: self.shadow_std_db,
            fast_fade_std_db: self.fast_fade_std_db,
            additional_losses_db: self.additional_losses_db,
            calibration_loss_db: self.calibration_loss_db,
            noise_power_dbm: self.noise_power_dbm,
            model: self.model,
        }
    }

    /// VRU → eNB.
    pub fn uplink(&self) -> LinkBudget {
        self.budget(self.vru_tx_power_dbm, self.heights.vru)
    }

    /// eNB → vehicle at full transmit power.
    pub fn downlink(&self) -> LinkBudget {
        self.budget(self.enb_tx_power_dbm, self.heights.vehicle)
    }

    /// eNB power reaching one vehicle that holds `prbs` of `total_prbs`.
    pub fn downlink_power_dbm(&self, prbs: f64, total_prbs: f64) -> f64 {
        if self.dl_power_split {
            self.enb_tx_power_dbm + 10.0 * math::log10(prbs / total_prbs)
        } else {
            self.enb_tx_power_dbm
        }
    }
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self::for_profile(Profile::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    pub pool: PrbPool,
    /// M: vehicles per multicast cluster.
    pub cluster_size: usize,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            pool: PrbPool::default(),
            cluster_size: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationPlan {
    pub master_seed: u64,
    pub replications: u64,
    pub periods: u64,
    pub scenario: ScenarioParams,
    pub traffic: TrafficParams,
    pub channel: ChannelParams,
    pub radio: RadioParams,
    pub network: NetworkParams,
}

impl SimulationPlan {
    pub const DEFAULT_SEED: u64 = 2018;
    pub const DEFAULT_REPLICATIONS: u64 = 200;
    pub const DEFAULT_PERIODS: u64 = 10;

    pub fn for_profile(profile: Profile) -> Self {
        Self {
            master_seed: Self::DEFAULT_SEED,
            replications: Self::DEFAULT_REPLICATIONS,
            periods: Self::DEFAULT_PERIODS,
            scenario: ScenarioParams::default(),
            traffic: TrafficParams::default(),
            channel: ChannelParams::for_profile(profile),
            radio: RadioParams::default(),
            network: NetworkParams {
                backhaul_capacity: 10e6,
                tn_cn: profile.tn_cn(),
                cloud_server_capacity: 9e9,
                mec_server_capacity: 9e9,
            },
        }
    }

    /// Every invariant violation in the plan, in a stable order.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        if self.replications == 0 {
            out.push(Error::invalid("engine.replications", "must be >= 1"));
        }
        if self.periods == 0 {
            out.push(Error::invalid(
                "engine.periodsPerReplication",
                "must be >= 1",
            ));
        }
        let s = &self.scenario;
        out.extend(s.geometry.validate().err());
        out.extend(s.hard_core.validate().err());
        out.extend(s.speeds.validate().err());
        if s.vru_count == 0 {
            out.push(Error::invalid("scenario.vruCount", "must be >= 1"));
        }
        if !(s.vru_strip.1 > s.vru_strip.0) {
            out.push(Error::invalid("scenario.vruStripM", "need min < max"));
        }
        out.extend(self.traffic.validate().err());
        out.extend(self.channel_violations());
        out.extend(self.radio.pool.validate().err());
        if self.radio.cluster_size == 0 {
            out.push(Error::invalid("radio.clusterSize", "must be >= 1"));
        }
        out.extend(self.network.validate().err());
        out
    }

    fn channel_violations(&self) -> Vec<Error> {
        let c = &self.channel;
        let mut out = Vec::new();
        for (field, h) in [
            ("channel.enbHeightM", c.heights.enb),
            ("channel.vruHeightM", c.heights.vru),
            ("channel.vehicleHeightM", c.heights.vehicle),
        ] {
            if !(h - crate::channel::HEIGHT_OFFSET > 0.0) {
                out.push(Error::invalid(
                    field,
                    "effective height (h - 1 m) must be > 0",
                ));
            }
        }
        if !(c.carrier_ghz > 0.0) {
            out.push(Error::invalid("channel.frequencyGhz", "must be > 0"));
        }
        if !(c.shadow_std_db >= 0.0) {
            out.push(Error::invalid("channel.shadowingStdDb", "must be >= 0"));
        }
        if !(c.fast_fade_std_db >= 0.0) {
            out.push(Error::invalid("channel.fastFadingStdDb", "must be >= 0"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

impl Default for SimulationPlan {
    fn default() -> Self {
        Self::for_profile(Profile::default())
    }
}

/// Samples the realization used by `replication`.
pub fn sample_scenario(plan: &SimulationPlan, replication: u64) -> Result<Scenario> {
    let streams = Streams::new(plan.master_seed);
    let s = &plan.scenario;
    let mut vehicles = Vec::new();
    for lane in s.geometry.lanes() {
        let mut rng = streams.stream(Purpose::Vehicles, replication, 0, lane.index as u64);
        vehicles.extend(sample_vehicles(&s.hard_core, &lane, &s.speeds, &mut rng)?);
    }
    let mut rng = streams.stream(Purpose::Vrus, replication, 0, 0);
    let vrus = sample_vrus(
        s.vru_count,
        s.vru_strip,
        s.geometry.vru_lateral_offset,
        &mut rng,
    )?;
    Ok(Scenario {
        geometry: s.geometry,
        vehicles,
        vrus,
    })
}

/// Evaluates one period on `scenario` and appends one breakdown per VRU.
fn evaluate_period(
    plan: &SimulationPlan,
    streams: &Streams,
    replication: u64,
    period: u64,
    scenario: &Scenario,
    out: &mut Vec<LatencyBreakdown>,
) -> Result<()> {
    let pool = &plan.radio.pool;
    let total_prbs = pool.total_prbs();
    let bins = plan.traffic.offset_bins;
    let enb = scenario.geometry.enb_position;
    let ul_budget = plan.channel.uplink();
    let dl_budget = plan.channel.downlink();
    let net = &plan.network;

    let jobs = generate_period_with(&scenario.vrus, &plan.traffic, period, |v| {
        streams.stream(Purpose::Traffic, replication, period, v.id as u64)
    });
    let occupancy = BinOccupancy::new(&jobs, bins);

    let clusters = scenario
        .vrus
        .iter()
        .map(|v| select_cluster(v, &scenario.vehicles, plan.radio.cluster_size))
        .collect::<Result<Vec<_>>>()?;
    let mut members_in_bin = vec![0usize; bins as usize];
    for (job, cluster) in jobs.iter().zip(&clusters) {
        members_in_bin[job.offset_bin as usize] += cluster.size();
    }

    for ((vru, job), cluster) in scenario.vrus.iter().zip(&jobs).zip(&clusters) {
        let key = vru.id as u64;
        let concurrent = occupancy.concurrent(job);

        let mut rng = streams.stream(Purpose::UplinkFading, replication, period, key);
        let snr = ul_budget.sample_snr_db(vru.position.distance(&enb), &mut rng)?;
        let ul = ul_latency(job, ul_share(concurrent, pool), snr, pool)?;

        let mut rng = streams.stream(Purpose::TransportCore, replication, period, key);
        let tn_cn = net.tn_cn.sample(&mut rng);

        let share = dl_share(members_in_bin[job.offset_bin as usize], pool)?;
        let budget = dl_budget.with_tx_power(plan.channel.downlink_power_dbm(share, total_prbs));
        let mut rng = streams.stream(Purpose::DownlinkFading, replication, period, key);
        let dl = dl_latency(
            job,
            cluster,
            share,
            |m| {
                let d = scenario.vehicles[m.vehicle].position.distance(&enb);
                budget.sample_snr_db(d, &mut rng)
            },
            pool,
        )?;

        let components = LatencyComponents {
            ul,
            bh: backhaul_latency(job.size_bits, concurrent, net.backhaul_capacity),
            tn_cn,
            exc_cloud: execution_latency(
                job.size_bits,
                job.compute_density,
                concurrent,
                net.cloud_server_capacity,
            ),
            exc_mec: execution_latency(
                job.size_bits,
                job.compute_density,
                concurrent,
                net.mec_server_capacity,
            ),
            dl: dl.latency,
        };
        out.push(LatencyBreakdown::compose(vru.id, period, &components));
    }
    Ok(())
}

fn replicate(plan: &SimulationPlan, replication: u64) -> Result<Vec<LatencyBreakdown>> {
    plan.validate()?;
    let streams = Streams::new(plan.master_seed);
    let mut scenario = sample_scenario(plan, replication)?;
    let mut out = Vec::with_capacity((plan.periods as usize) * scenario.vrus.len());
    for period in 0..plan.periods {
        if period > 0 && plan.scenario.mobility {
            scenario.advance(plan.traffic.period);
        }
        evaluate_period(plan, &streams, replication, period, &scenario, &mut out)?;
    }
    Ok(out)
}

/// All per-packet breakdowns of one replication, in (period, VRU) order.
/// Deterministic in `(plan, replication)`.
pub fn run_replication(plan: &SimulationPlan, replication: u64) -> Result<Vec<LatencyBreakdown>> {
    replicate(plan, replication).map_err(|e| Error::Replication {
        index: replication,
        source: Box::new(e),
    })
}

/// [`run_replication`] reduced to an accumulator.
pub fn replication_stats(plan: &SimulationPlan, replication: u64) -> Result<AggregateAccumulator> {
    let mut acc = AggregateAccumulator::default();
    for b in run_replication(plan, replication)? {
        acc.push(&b);
    }
    Ok(acc)
}

/// Runs every replication in index order on the current thread.
pub fn run_plan(plan: &SimulationPlan) -> Result<AggregateStats> {
    let mut acc = AggregateAccumulator::default();
    for r in 0..plan.replications {
        acc.merge(&replication_stats(plan, r)?);
    }
    acc.finish()
}

/// 97.5% standard normal quantile.
pub const Z95: f64 = 1.96;

/// Welford running mean/variance with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn summary(&self) -> Summary {
        let sample_std = if self.count > 1 {
            math::sqrt((self.m2 / (self.count - 1) as f64).max(0.0))
        } else {
            0.0
        };
        Summary {
            mean: self.mean,
            sample_std,
            ci95_half_width: Z95 * sample_std / math::sqrt(self.count.max(1) as f64),
            count: self.count,
        }
    }
}

/// Mean, sample standard deviation and normal-approximation 95% CI
/// half-width of one latency quantity, seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub sample_std: f64,
    pub ci95_half_width: f64,
    pub count: u64,
}

/// Aggregated quantities, in the order they are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Ul,
    Bh,
    TnCn,
    Exc,
    ExcMec,
    Dl,
    E2eCloud,
    E2eMec,
}

impl Component {
    pub const ALL: [Component; 8] = [
        Component::Ul,
        Component::Bh,
        Component::TnCn,
        Component::Exc,
        Component::ExcMec,
        Component::Dl,
        Component::E2eCloud,
        Component::E2eMec,
    ];

    pub fn of(self, b: &LatencyBreakdown) -> f64 {
        match self {
            Component::Ul => b.t_ul,
            Component::Bh => b.t_bh,
            Component::TnCn => b.t_tn_cn,
            Component::Exc => b.t_exc,
            Component::ExcMec => b.t_exc_mec,
            Component::Dl => b.t_dl,
            Component::E2eCloud => b.e2e_cloud,
            Component::E2eMec => b.e2e_mec,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Ul => "ul",
            Component::Bh => "bh",
            Component::TnCn => "tncn",
            Component::Exc => "exc",
            Component::ExcMec => "exc_mec",
            Component::Dl => "dl",
            Component::E2eCloud => "e2e_cloud",
            Component::E2eMec => "e2e_mec",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AggregateAccumulator {
    stats: [RunningStats; 8],
}

impl AggregateAccumulator {
    pub fn push(&mut self, b: &LatencyBreakdown) {
        for (s, c) in self.stats.iter_mut().zip(Component::ALL) {
            s.push(c.of(b));
        }
    }

    pub fn merge(&mut self, other: &AggregateAccumulator) {
        for (s, o) in self.stats.iter_mut().zip(&other.stats) {
            s.merge(o);
        }
    }

    pub fn count(&self) -> u64 {
        self.stats[0].count()
    }

    pub fn finish(&self) -> Result<AggregateStats> {
        if self.count() == 0 {
            return Err(Error::EmptyAggregate);
        }
        let s = |c: Component| self.stats[c as usize].summary();
        Ok(AggregateStats {
            ul: s(Component::Ul),
            bh: s(Component::Bh),
            tn_cn: s(Component::TnCn),
            exc: s(Component::Exc),
            exc_mec: s(Component::ExcMec),
            dl: s(Component::Dl),
            e2e_cloud: s(Component::E2eCloud),
            e2e_mec: s(Component::E2eMec),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateStats {
    pub ul: Summary,
    pub bh: Summary,
    pub tn_cn: Summary,
    pub exc: Summary,
    pub exc_mec: Summary,
    pub dl: Summary,
    pub e2e_cloud: Summary,
    pub e2e_mec: Summary,
}

impl AggregateStats {
    pub fn get(&self, c: Component) -> &Summary {
        match c {
            Component::Ul => &self.ul,
            Component::Bh => &self.bh,
            Component::TnCn => &self.tn_cn,
            Component::Exc => &self.exc,
            Component::ExcMec => &self.exc_mec,
            Component::Dl => &self.dl,
            Component::E2eCloud => &self.e2e_cloud,
            Component::E2eMec => &self.e2e_mec,
        }
    }

    /// Relative E2E reduction of MEC over the cloud path, percent.
    pub fn gain_percent(&self) -> f64 {
        100.0 * (1.0 - self.e2e_mec.mean / self.e2e_cloud.mean)
    }
}

/// Unweighted statistics over `breakdowns`.
pub fn aggregate(breakdowns: &[LatencyBreakdown]) -> Result<AggregateStats> {
    let mut acc = AggregateAccumulator::default();
    for b in breakdowns {
        acc.push(b);
    }
    acc.finish()
}
